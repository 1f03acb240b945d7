//! Exact counts of maximal forms with small Galois group, by conductor or by
//! discriminant, and a brute-force class list used to validate them.

mod enumerate;
pub mod oracle;

use crate::arith::{isqrt, OddSquarefreeTable};
use crate::asymptotics::{main_term, Theorem, DEFAULT_PRIME_LIMIT};
use crate::classify::{canonical_status, family_real_signature, is_irreducible, real_signature, tag_from_invariants, GaloisTag};
use crate::error::{Error, Result};
use crate::forms::{to_form, Family, FamilyCoords, FAMILIES};
use crate::maximality::{is_maximal, is_maximal_fast};
use crate::resolvent::conductor_poly;
use serde::{Deserialize, Serialize};

pub use oracle::{brute_force_class_oracle, OracleClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Conductor,
    Discriminant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub x: i128,
    pub mode: Mode,
    pub galois: GaloisTag,
    pub r2: Option<u8>,
    pub families: Vec<Family>,
    pub shards: usize,
    pub emit_records: bool,
}

impl CensusConfig {
    pub fn conductor(x: i128) -> Self {
        CensusConfig {
            x,
            mode: Mode::Conductor,
            galois: GaloisTag::D4,
            r2: None,
            families: FAMILIES.to_vec(),
            shards: 1,
            emit_records: false,
        }
    }

    pub fn discriminant(x: i128, galois: GaloisTag) -> Self {
        CensusConfig { mode: Mode::Discriminant, galois, ..CensusConfig::conductor(x) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CensusRecord {
    pub coords: FamilyCoords,
    pub disc: i128,
    pub conductor: i128,
    pub galois: GaloisTag,
    pub r2: u8,
}

impl CensusRecord {
    fn sort_key(&self) -> (u128, u8, i128, i128, i128) {
        let c = &self.coords;
        (self.conductor.unsigned_abs(), c.family.index(), c.a, c.b, c.c)
    }

    pub fn csv_header() -> &'static str {
        "family,A,B,C,disc,conductor,galois,r2"
    }

    pub fn csv_row(&self) -> String {
        let c = &self.coords;
        format!(
            "{},{},{},{},{},{},{},{}",
            c.family.index(),
            c.a,
            c.b,
            c.c,
            self.disc,
            self.conductor,
            self.galois,
            self.r2
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Excluded {
    pub c4: u64,
    pub v4: u64,
    pub d4: u64,
    pub reducible: u64,
    pub boundary_orbits: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    /// Counts of the requested tag by r₂, all families together.
    pub counts: [u64; 3],
    /// Counts of the requested tag by family (index − 1) and r₂.
    pub per_family: [[u64; 3]; 3],
    pub excluded: Excluded,
    pub records: Vec<CensusRecord>,
}

impl CensusResult {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn merge(&mut self, o: CensusResult) {
        for r in 0..3 {
            self.counts[r] += o.counts[r];
            for f in 0..3 {
                self.per_family[f][r] += o.per_family[f][r];
            }
        }
        let (e, oe) = (&mut self.excluded, o.excluded);
        e.c4 += oe.c4;
        e.v4 += oe.v4;
        e.d4 += oe.d4;
        e.reducible += oe.reducible;
        e.boundary_orbits += oe.boundary_orbits;
        self.records.extend(o.records);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsByR2 {
    pub r2_0: u64,
    pub r2_1: u64,
    pub r2_2: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub x: i128,
    pub mode: Mode,
    pub galois: GaloisTag,
    pub counts: CountsByR2,
    pub total: u64,
    pub excluded: Excluded,
    pub main_term: Option<f64>,
    pub ratio: Option<f64>,
}

pub fn summarize(cfg: &CensusConfig, res: &CensusResult) -> CensusSummary {
    let mt = match (cfg.mode, cfg.galois) {
        (Mode::Conductor, GaloisTag::D4) => {
            Some(main_term(Theorem::D4Conductor, cfg.x as f64, cfg.r2, DEFAULT_PRIME_LIMIT).value)
        }
        (Mode::Discriminant, GaloisTag::V4) => {
            Some(main_term(Theorem::V4Disc, cfg.x as f64, None, DEFAULT_PRIME_LIMIT).value)
        }
        _ => None,
    };
    let total = match cfg.r2 {
        Some(r) => res.counts[r as usize],
        None => res.total(),
    };
    CensusSummary {
        x: cfg.x,
        mode: cfg.mode,
        galois: cfg.galois,
        counts: CountsByR2 { r2_0: res.counts[0], r2_1: res.counts[1], r2_2: res.counts[2] },
        total,
        excluded: res.excluded,
        main_term: mt,
        ratio: mt.map(|m| total as f64 / m),
    }
}

/// Largest accepted bound: keeps every intermediate product well inside i128 and the
/// enumeration within desk-scale memory.
pub const MAX_CONDUCTOR_BOUND: i128 = 1 << 40;
pub const MAX_DISC_BOUND: i128 = 1 << 50;

/// Enumeration bound M on the census coordinates: |y·w| ≤ M (conductor) or
/// |y|·w² ≤ M (discriminant).
fn coord_bound(fam: Family, mode: Mode, x: i128) -> i128 {
    match (fam, mode) {
        (Family::One, _) => (x - 1) / 4,
        (_, Mode::Conductor) => 4 * x - 1,
        (_, Mode::Discriminant) => 16 * x - 1,
    }
}

pub(crate) struct Filter<'a> {
    cfg: &'a CensusConfig,
    table: &'a OddSquarefreeTable,
}

impl Filter<'_> {
    /// Processes one lattice point of family coordinates.
    fn visit(&self, c: FamilyCoords, out: &mut CensusResult) -> Result<()> {
        let cond = conductor_poly(&c)?;
        let d = c.d()?;
        if cond == 0 || d == 0 {
            return Ok(());
        }
        let disc = cond.checked_mul(d).ok_or(Error::Overflow)?;
        let bounded = match self.cfg.mode {
            Mode::Conductor => cond.unsigned_abs() < self.cfg.x as u128,
            Mode::Discriminant => disc.unsigned_abs() < self.cfg.x as u128,
        };
        if !bounded {
            return Ok(());
        }
        let Some(boundary) = canonical_status(&c) else { return Ok(()) };
        if !is_maximal_fast(&c, self.table)? {
            return Ok(());
        }
        let f = to_form(&c)?;
        // maximal reducible forms in families 1 and 2 have B² − 4AC = 1
        let needs_check = c.family == Family::Three || d == 1;
        if needs_check && !is_irreducible(&f)? {
            out.excluded.reducible += 1;
            return Ok(());
        }
        let tag = tag_from_invariants(disc, cond);
        if tag != self.cfg.galois {
            match tag {
                GaloisTag::C4 => out.excluded.c4 += 1,
                GaloisTag::V4 => out.excluded.v4 += 1,
                GaloisTag::D4 => out.excluded.d4 += 1,
                _ => {}
            }
            return Ok(());
        }
        let r2 = match c.family {
            Family::Three => real_signature(&f)?,
            _ => family_real_signature(&c)?,
        };
        out.counts[r2 as usize] += 1;
        out.per_family[c.family.index() as usize - 1][r2 as usize] += 1;
        if boundary {
            out.excluded.boundary_orbits += 1;
        }
        if self.cfg.emit_records && self.cfg.r2.is_none_or(|r| r == r2) {
            out.records.push(CensusRecord { coords: c, disc, conductor: cond, galois: tag, r2 });
        }
        Ok(())
    }
}

/// Runs the census. Work units are dealt to `shards` threads round-robin and the
/// partial results are merged by summation and a sorted concatenation of records, so
/// the output does not depend on the shard count.
pub fn run_census(cfg: &CensusConfig) -> Result<CensusResult> {
    if cfg.x < 1 {
        return Err(Error::BoundTooLarge(cfg.x.to_string()));
    }
    let cap = match cfg.mode {
        Mode::Conductor => MAX_CONDUCTOR_BOUND,
        Mode::Discriminant => MAX_DISC_BOUND,
    };
    if cfg.x > cap {
        return Err(Error::BoundTooLarge(cfg.x.to_string()));
    }
    let mut units = Vec::new();
    let mut table_limit = 1i128;
    for &fam in &cfg.families {
        let m = coord_bound(fam, cfg.mode, cfg.x);
        if m < 1 {
            continue;
        }
        units.extend(enumerate::work_units(fam, cfg.mode, m));
        table_limit = table_limit.max(m);
    }
    // values above the table fall back to factorization
    let table = OddSquarefreeTable::new(table_limit.min(1 << 33) as u64);
    let filter = Filter { cfg, table: &table };
    let k = cfg.shards.max(1);
    let parts: Vec<Result<CensusResult>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..k)
            .map(|shard| {
                let units = &units;
                let filter = &filter;
                s.spawn(move || {
                    let mut out = CensusResult::default();
                    for u in units.iter().skip(shard).step_by(k) {
                        enumerate::run_unit(u, filter, &mut out)?;
                    }
                    Ok(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("census worker panicked")).collect()
    });
    let mut res = CensusResult::default();
    for p in parts {
        res.merge(p?);
    }
    res.records.sort_by_key(|r| r.sort_key());
    Ok(res)
}

/// N_{D₄}^{(r₂)}(X) by conductor, all families.
pub fn count_d4_by_conductor(x: i128, shards: usize) -> Result<CensusResult> {
    run_census(&CensusConfig { shards, ..CensusConfig::conductor(x) })
}

/// N′_{D₄}(X): D₄ classes with |Δ(F)| < X.
pub fn count_d4_by_disc(x: i128, shards: usize) -> Result<CensusResult> {
    run_census(&CensusConfig { shards, ..CensusConfig::discriminant(x, GaloisTag::D4) })
}

/// Pairs (a, b) with (a, b, a)₁ irreducible, maximal and 0 < |4a(b − 2a)(b + 2a)| < √X.
/// Each pair is its own class.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct V4Count {
    pub count: u64,
    pub pairs: Vec<(i128, i128)>,
}

pub fn count_v4_by_disc(x: i128, keep_pairs: bool) -> Result<V4Count> {
    if !(1..=MAX_DISC_BOUND).contains(&x) {
        return Err(Error::BoundTooLarge(x.to_string()));
    }
    // |Δ| = m² < X with m = 4a(b² − 4a²)
    let l = isqrt(x - 1);
    let mut out = V4Count::default();
    let mut a: i128 = 1;
    // |m| ≥ 4|a|·(4|a| − 1) once b² ≠ 4a²
    while 4 * a * (4 * a - 1) <= l {
        for sa in [a, -a] {
            let k = l / (4 * a);
            let lo = crate::arith::ceil_sqrt((4 * a * a - k).max(0));
            let hi = isqrt(4 * a * a + k);
            for bb in lo..=hi {
                for b in if bb == 0 { vec![0] } else { vec![bb, -bb] } {
                    let m = 4 * sa * (b * b - 4 * a * a);
                    if m == 0 || m.abs() > l {
                        continue;
                    }
                    let c = FamilyCoords::new(Family::One, sa, b, sa);
                    let f = to_form(&c)?;
                    if !is_irreducible(&f)? || !is_maximal(&c)?.maximal {
                        continue;
                    }
                    out.count += 1;
                    if keep_pairs {
                        out.pairs.push((sa, b));
                    }
                }
            }
        }
        a += 1;
    }
    out.pairs.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_bound() {
        assert_eq!(count_d4_by_conductor(1, 1).unwrap().total(), 0);
    }

    #[test]
    fn v4_small() {
        // x⁴ + y⁴ has |Δ| = 256 = 16²
        let r = count_v4_by_disc(257, true).unwrap();
        assert!(r.pairs.contains(&(1, 0)));
        assert!(!count_v4_by_disc(256, true).unwrap().pairs.contains(&(1, 0)));
        // √X = 10: brute force over a small box
        let x = 101;
        let mut want = 0;
        for a in -3i128..=3 {
            for b in -20i128..=20 {
                let m = 4 * a * (b * b - 4 * a * a);
                if m == 0 || m * m >= x {
                    continue;
                }
                let c = FamilyCoords::new(Family::One, a, b, a);
                if is_irreducible(&to_form(&c).unwrap()).unwrap() && is_maximal(&c).unwrap().maximal {
                    want += 1;
                }
            }
        }
        assert_eq!(count_v4_by_disc(x, false).unwrap().count, want);
    }

    #[test]
    fn shard_invariance() {
        let mut cfg = CensusConfig::conductor(20_000);
        cfg.emit_records = true;
        let one = run_census(&cfg).unwrap();
        cfg.shards = 4;
        assert_eq!(run_census(&cfg).unwrap(), one);
    }
}
