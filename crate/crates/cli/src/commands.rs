use crate::Output;
use quartic_census::arith::{factor, is_prime, primes_up_to};
use quartic_census::asymptotics::{
    area_constants, elliptic_closed_forms, elliptic_integrals, main_term, preliminary_closed_forms,
    preliminary_integrals, r2_proportions, v4_main_term_with_rho2, Theorem, DEFAULT_PRIME_LIMIT,
};
use quartic_census::census::{
    count_v4_by_disc, run_census, summarize, CensusConfig, CensusRecord, CensusSummary, CountsByR2, Excluded, Mode,
};
use quartic_census::classify::{family_real_signature, galois_tag, galois_tag_of_form, real_signature};
use quartic_census::densities::{closed_form, density_table, euler_product, rho_v4, DensityKind, ProductKind};
use quartic_census::forms::{disc_quartic, family_membership, from_form, to_form};
use quartic_census::maximality::{criteria, is_maximal, Clause};
use quartic_census::order_oracle::{order_from_form, p_maximality_oracle};
use quartic_census::resolvent::{conductor_poly, decompose as decompose_form};
use quartic_census::{BinQuadForm, BinQuartForm, Error, Family, FamilyCoords, GaloisTag, FAMILIES};
use serde_json::{json, Value};
use std::path::PathBuf;

fn e(err: Error) -> String {
    err.to_string()
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::Array(a) => {
            let s: Vec<String> = a.iter().map(scalar).collect();
            out.push((prefix.to_string(), s.join(" ")));
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn report(v: Value, format: &str, ok: bool) -> Result<Output, String> {
    let text = if format == "json" {
        serde_json::to_string_pretty(&v).unwrap() + "\n"
    } else {
        let mut rows = Vec::new();
        flatten("", &v, &mut rows);
        let mut s = String::from("key,value\n");
        for (k, x) in rows {
            s.push_str(&format!("{k},{x}\n"));
        }
        s
    };
    Ok(Output { text, files: Vec::new(), ok })
}

fn family_entry(c: &FamilyCoords) -> Result<Value, String> {
    let f = to_form(c).map_err(e)?;
    let dec = decompose_form(&f, &c.family.j_form()).map_err(e)?;
    Ok(json!({
        "family": c.family.index(),
        "coords": c.to_string(),
        "conductor": conductor_poly(c).map_err(e)?.to_string(),
        "maximality": is_maximal(c).map_err(e)?,
        "decomposition": dec,
    }))
}

/// Maximality of an arbitrary form from the order oracle at every p with p² | Δ.
fn oracle_report(f: &BinQuartForm, disc: i128) -> Result<Value, String> {
    let o = order_from_form(f).map_err(e)?;
    for (p, k) in factor(disc) {
        if k >= 2 && !p_maximality_oracle(&o, p).map_err(e)? {
            return Ok(json!({ "maximal": false, "failing_prime": p, "clause": "order_oracle" }));
        }
    }
    Ok(json!({ "maximal": true, "failing_prime": null, "clause": "maximal" }))
}

pub fn classify(arg: &str, format: &str) -> Result<Output, String> {
    let f: BinQuartForm = arg.parse().map_err(e)?;
    if f.a4 == 0 {
        return Err(e(Error::ZeroLeading));
    }
    let disc = disc_quartic(&f).map_err(e)?;
    if disc == 0 {
        return Err(e(Error::Degenerate("zero discriminant")));
    }
    let fams = family_membership(&f).map_err(e)?;
    let mut entries = Vec::new();
    for fam in &fams {
        entries.push(family_entry(&from_form(&f, *fam).map_err(e)?)?);
    }
    let maximality = match fams.first() {
        Some(fam) => serde_json::to_value(is_maximal(&from_form(&f, *fam).map_err(e)?).map_err(e)?).unwrap(),
        None => oracle_report(&f, disc)?,
    };
    let v = json!({
        "form": f.to_string(),
        "disc": disc.to_string(),
        "families": entries,
        "galois": galois_tag_of_form(&f).map_err(e)?,
        "r2": real_signature(&f).map_err(e)?,
        "maximal": maximality["maximal"],
        "maximality": maximality,
    });
    report(v, format, true)
}

pub fn family(arg: &str, format: &str) -> Result<Output, String> {
    let c: FamilyCoords = arg.parse().map_err(e)?;
    let f = to_form(&c).map_err(e)?;
    let disc = disc_quartic(&f).map_err(e)?;
    let mut v = json!({
        "coords": c.to_string(),
        "form": f.to_string(),
        "D": c.d().map_err(e)?.to_string(),
        "disc": disc.to_string(),
    });
    if disc != 0 {
        let (rep, boundary) = quartic_census::classify::canonical_coords(&c).map_err(e)?;
        let r2 = match c.family {
            Family::Three => real_signature(&f),
            _ => family_real_signature(&c),
        }
        .map_err(e)?;
        let extra = json!({
            "conductor": conductor_poly(&c).map_err(e)?.to_string(),
            "galois": galois_tag(&c).map_err(e)?,
            "r2": r2,
            "maximality": is_maximal(&c).map_err(e)?,
            "canonical": rep.to_string(),
            "boundary": boundary,
        });
        v.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
    }
    report(v, format, true)
}

pub fn decompose(arg: &str, j: Option<&str>, format: &str) -> Result<Output, String> {
    let f: BinQuartForm = arg.parse().map_err(e)?;
    let j: BinQuadForm = match j {
        Some(s) => s.parse().map_err(e)?,
        None => {
            let fams = family_membership(&f).map_err(e)?;
            fams.first().ok_or("form lies in none of the three families; pass --j")?.j_form()
        }
    };
    let d = decompose_form(&f, &j).map_err(e)?;
    report(serde_json::to_value(d).unwrap(), format, true)
}

pub fn maximal(arg: &str, p: Option<i128>, format: &str) -> Result<Output, String> {
    let c: FamilyCoords = arg.parse().map_err(e)?;
    let v = match p {
        Some(p) => {
            if p < 2 || !is_prime(p as u128) {
                return Err(format!("--p must be a prime, got {p}"));
            }
            let r = criteria(c.family, c.a, c.b, c.c, p, false);
            json!({
                "maximal": r.is_ok(),
                "failing_prime": if r.is_ok() { None } else { Some(p) },
                "clause": r.err().unwrap_or(Clause::Maximal),
            })
        }
        None => serde_json::to_value(is_maximal(&c).map_err(e)?).unwrap(),
    };
    report(v, format, true)
}

pub fn validate(radius: i128, pmax: i128, inject_bug: bool, format: &str) -> Result<Output, String> {
    if !(0..=60).contains(&radius) {
        return Err("--box must be between 0 and 60".into());
    }
    if !(2..=1000).contains(&pmax) {
        return Err("--pmax must be between 2 and 1000".into());
    }
    let primes: Vec<i128> = primes_up_to(pmax as usize).into_iter().map(|p| p as i128).collect();
    let mut rows = Vec::new();
    let mut total = (0u64, 0u64);
    let mut first = None;
    for fam in FAMILIES {
        let mut cells = vec![(0u64, 0u64, 0u64); primes.len()];
        for a in -radius..=radius {
            for b in -radius..=radius {
                for c in -radius..=radius {
                    let fc = FamilyCoords::new(fam, a, b, c);
                    let f = to_form(&fc).map_err(e)?;
                    if disc_quartic(&f).map_err(e)? == 0 {
                        continue;
                    }
                    let o = order_from_form(&f).map_err(e)?;
                    for (i, &p) in primes.iter().enumerate() {
                        let thm = criteria(fam, a, b, c, p, inject_bug).is_ok();
                        let orc = p_maximality_oracle(&o, p as u128).map_err(e)?;
                        let cell = &mut cells[i];
                        cell.0 += 1;
                        cell.1 += u64::from(!orc);
                        if thm != orc {
                            cell.2 += 1;
                            first.get_or_insert_with(|| format!("{fc} p={p}"));
                        }
                    }
                }
            }
        }
        for (i, &p) in primes.iter().enumerate() {
            let (n, nm, bad) = cells[i];
            total.0 += n;
            total.1 += bad;
            rows.push(json!({ "family": fam.index(), "p": p, "cases": n, "non_maximal": nm, "mismatches": bad }));
        }
    }
    let pass = total.1 == 0;
    if format == "csv" {
        let mut s = String::from("family,p,cases,non_maximal,mismatches\n");
        for r in &rows {
            s.push_str(&format!("{},{},{},{},{}\n", r["family"], r["p"], r["cases"], r["non_maximal"], r["mismatches"]));
        }
        return Ok(Output { text: s, files: Vec::new(), ok: pass });
    }
    let v = json!({
        "box": radius,
        "pmax": pmax,
        "inject_bug": inject_bug,
        "cases": total.0,
        "mismatches": total.1,
        "first_mismatch": first,
        "pass": pass,
        "rows": rows,
    });
    report(v, format, pass)
}

fn parse_list(s: &str) -> Result<Vec<i128>, String> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(crate::config::parse_int).collect()
}

pub fn densities(kind: &str, a_list: &str, m_list: &str, format: &str) -> Result<Output, String> {
    let kind = match kind {
        "rho1" => DensityKind::Rho1,
        "rho2" => DensityKind::Rho2,
        "rho2_zero" => DensityKind::Rho2Zero,
        "rho2_prime" => DensityKind::Rho2Prime,
        _ => DensityKind::RhoV4,
    };
    let a_vals = if kind == DensityKind::RhoV4 { vec![0] } else { parse_list(a_list)? };
    let m_vals = if kind == DensityKind::Rho2Zero { vec![16] } else { parse_list(m_list)? };
    if m_vals.iter().any(|&m| !(1..=60).contains(&m)) {
        return Err("moduli must lie in 1..=60".into());
    }
    let mut rows = Vec::new();
    for &a in &a_vals {
        for &m in &m_vals {
            let t = density_table(kind, a, m);
            let cf = if kind == DensityKind::Rho2Zero {
                Some(closed_form(kind, 2))
            } else if is_prime(m as u128) {
                Some(closed_form(kind, m))
            } else {
                None
            };
            rows.push(json!({
                "kind": kind.as_str(),
                "a": t.a,
                "m": t.modulus,
                "rho": t.rho,
                "space": t.space,
                "closed_form": cf,
                "match": cf.map(|c| c == t.rho),
            }));
        }
    }
    let text = if format == "json" {
        serde_json::to_string_pretty(&rows).unwrap() + "\n"
    } else {
        let mut s = String::from("kind,a,m,rho,space,closed_form,match\n");
        for r in &rows {
            let cells: Vec<String> =
                ["kind", "a", "m", "rho", "space", "closed_form", "match"].iter().map(|k| scalar(&r[*k])).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    };
    Ok(Output { text, files: Vec::new(), ok: true })
}

pub struct CensusRequest {
    pub mode: &'static str,
    pub x: i128,
    pub r2: String,
    pub families: String,
    pub galois: String,
    pub shards: usize,
    pub emit: Option<PathBuf>,
}

fn records_csv(records: &[CensusRecord]) -> Vec<u8> {
    let mut s = String::from(CensusRecord::csv_header());
    s.push('\n');
    for r in records {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s.into_bytes()
}

fn v4_census(x: i128, r2: Option<u8>, keep: bool) -> Result<(CensusSummary, Vec<CensusRecord>), String> {
    let v = count_v4_by_disc(x, true).map_err(e)?;
    let mut counts = [0u64; 3];
    let mut records = Vec::new();
    for &(a, b) in &v.pairs {
        let c = FamilyCoords::new(Family::One, a, b, a);
        let s = family_real_signature(&c).map_err(e)?;
        counts[s as usize] += 1;
        if keep && r2.is_none_or(|r| r == s) {
            let disc = disc_quartic(&to_form(&c).map_err(e)?).map_err(e)?;
            records.push(CensusRecord { coords: c, disc, conductor: conductor_poly(&c).map_err(e)?, galois: GaloisTag::V4, r2: s });
        }
    }
    records.sort_by_key(|r| (r.disc.unsigned_abs(), r.coords.a, r.coords.b));
    let mt = main_term(Theorem::V4Disc, x as f64, None, DEFAULT_PRIME_LIMIT).value;
    let total = match r2 {
        Some(r) => counts[r as usize],
        None => v.count,
    };
    let summary = CensusSummary {
        x,
        mode: Mode::Discriminant,
        galois: GaloisTag::V4,
        counts: CountsByR2 { r2_0: counts[0], r2_1: counts[1], r2_2: counts[2] },
        total,
        excluded: Excluded::default(),
        main_term: Some(mt),
        ratio: Some(total as f64 / mt),
    };
    Ok((summary, records))
}

pub fn census(req: CensusRequest, format: &str) -> Result<Output, String> {
    let r2 = match req.r2.as_str() {
        "all" => None,
        s => match crate::config::parse_int(s)? {
            r @ 0..=2 => Some(r as u8),
            _ => return Err("--r2 must be 0, 1, 2 or all".into()),
        },
    };
    let galois: GaloisTag = req.galois.parse().map_err(e)?;
    let mode = if req.mode == "conductor" { Mode::Conductor } else { Mode::Discriminant };
    let keep = req.emit.is_some();
    let (summary, records) = match (mode, galois) {
        (Mode::Discriminant, GaloisTag::V4) => v4_census(req.x, r2, keep)?,
        (_, GaloisTag::D4) | (Mode::Discriminant, GaloisTag::C4) => {
            let families = parse_list(&req.families)?
                .into_iter()
                .map(|i| Family::from_index(i as i64).map_err(e))
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = CensusConfig { x: req.x, mode, galois, r2, families, shards: req.shards, emit_records: keep };
            let res = run_census(&cfg).map_err(e)?;
            (summarize(&cfg, &res), res.records)
        }
        _ => return Err(format!("{} census supports galois d4 only", req.mode)),
    };
    let text = if format == "json" {
        serde_json::to_string_pretty(&summary).unwrap() + "\n"
    } else {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x}"));
        format!(
            "x,mode,galois,r2_0,r2_1,r2_2,total,main_term,ratio\n{},{},{},{},{},{},{},{},{}\n",
            summary.x,
            req.mode,
            summary.galois,
            summary.counts.r2_0,
            summary.counts.r2_1,
            summary.counts.r2_2,
            summary.total,
            opt(summary.main_term),
            opt(summary.ratio)
        )
    };
    let files = req.emit.map(|p| vec![(p, records_csv(&records))]).unwrap_or_default();
    Ok(Output { text, files, ok: true })
}

pub fn constants(which: &str, limit: Option<i128>, format: &str) -> Result<Output, String> {
    let limit = limit.unwrap_or(DEFAULT_PRIME_LIMIT as i128);
    if !(2..=1_000_000_000).contains(&limit) {
        return Err("--prime-limit must lie in 2..=1e9".into());
    }
    let limit = limit as u64;
    let v = match which {
        "carefree" => {
            let p = euler_product(ProductKind::Carefree, limit);
            json!({
                "product": p.value,
                "tail_bound": p.tail_bound,
                "prime_limit": limit,
                "times_zeta2": p.value * std::f64::consts::PI.powi(2) / 6.0,
            })
        }
        "d4-leading" => {
            let m = main_term(Theorem::D4Conductor, 1.0f64.exp(), None, limit);
            let per: Vec<f64> = (0..3u8).map(|r| main_term(Theorem::D4Conductor, 1.0f64.exp(), Some(r), limit).value / 1.0f64.exp().powf(0.75)).collect();
            json!({
                "constant": m.value / 1.0f64.exp().powf(0.75),
                "per_r2": per,
                "proportions": r2_proportions(),
                "gamma_factor": m.gamma_factor,
                "zeta_factor": m.zeta_factor,
                "euler_product": m.euler_product,
                "area": area_constants(),
            })
        }
        "v4-leading" => {
            let m = main_term(Theorem::V4Disc, 1.0, None, limit);
            let rho = rho_v4(2);
            json!({
                "constant": m.value,
                "gamma_factor": m.gamma_factor,
                "euler_product": m.euler_product,
                "rho0_2": rho,
                "constant_from_rho0": v4_main_term_with_rho2(1.0, rho, limit),
            })
        }
        _ => {
            let (ip, im) = elliptic_integrals();
            let (cp, cm) = elliptic_closed_forms();
            json!({
                "elliptic_plus": { "quadrature": ip, "closed_form": cp },
                "elliptic_minus": { "quadrature": im, "closed_form": cm, "ratio": im / ip },
                "preliminary": { "t100": preliminary_integrals(100.0), "limit": preliminary_closed_forms() },
            })
        }
    };
    report(v, format, true)
}
