//! Irreducibility, Galois tags, real signature, reducibility type and canonical
//! orbit representatives.

use crate::arith::{cadd, cmul, csub, divisors, is_square, isqrt};
use crate::error::{Error, Result};
use crate::forms::{
    act_quartic, disc_quartic, from_form, m_matrix, o12_group, substitute, to_form, BinQuadForm,
    BinQuartForm, Family, FamilyCoords, GL2Mat,
};
use crate::resolvent::{conductor_poly, in_w, resolvent_integer_roots, theta_with_t};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaloisTag {
    V4,
    C4,
    D4,
    Large,
    Reducible,
}

impl GaloisTag {
    pub fn as_str(self) -> &'static str {
        match self {
            GaloisTag::V4 => "v4",
            GaloisTag::C4 => "c4",
            GaloisTag::D4 => "d4",
            GaloisTag::Large => "large",
            GaloisTag::Reducible => "reducible",
        }
    }
}

impl fmt::Display for GaloisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for GaloisTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "v4" => GaloisTag::V4,
            "c4" => GaloisTag::C4,
            "d4" => GaloisTag::D4,
            "large" => GaloisTag::Large,
            "reducible" => GaloisTag::Reducible,
            _ => return Err(Error::Parse(format!("unknown galois tag '{s}'"))),
        })
    }
}

/// Number r₂ of complex-conjugate root pairs of F(x,1).
pub type RealSignature = u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReducibleType {
    Type1,
    Type2,
    Irreducible,
}

/// All factorizations F = φ·ψ into integral quadratics with φ's leading coefficient
/// positive (a₄a₀ ≠ 0 required; otherwise the list is not exhaustive).
pub fn quadratic_factorizations(f: &BinQuartForm) -> Result<Vec<(BinQuadForm, BinQuadForm)>> {
    let mut out = Vec::new();
    if f.a4 == 0 || f.a0 == 0 {
        return Ok(out);
    }
    let da = divisors(f.a4);
    let dc = divisors(f.a0);
    for &a in &da {
        let d = f.a4 / a;
        for &c0 in &dc {
            for c in [c0, -c0] {
                let ff = f.a0 / c;
                let det = csub(cmul(d, c)?, cmul(a, ff)?)?;
                let mut cands: Vec<(i128, i128)> = Vec::new();
                if det != 0 {
                    let nb = csub(cmul(f.a3, c)?, cmul(a, f.a1)?)?;
                    let ne = csub(cmul(d, f.a1)?, cmul(ff, f.a3)?)?;
                    if nb % det == 0 && ne % det == 0 {
                        cands.push((nb / det, ne / det));
                    }
                } else {
                    // d·b² − a₃·b + K·a = 0 with K = a₂ − a·f − c·d
                    let k = csub(csub(f.a2, cmul(a, ff)?)?, cmul(c, d)?)?;
                    let disc = csub(cmul(f.a3, f.a3)?, cmul(4, cmul(d, cmul(k, a)?)?)?)?;
                    if is_square(disc) {
                        let s = isqrt(disc);
                        for num in [f.a3 + s, f.a3 - s] {
                            if num % (2 * d) == 0 {
                                let b = num / (2 * d);
                                let r = csub(f.a3, cmul(b, d)?)?;
                                if r % a == 0 {
                                    cands.push((b, r / a));
                                }
                            }
                        }
                    }
                }
                for (b, e) in cands {
                    let phi = BinQuadForm::new(a, b, c);
                    let psi = BinQuadForm::new(d, e, ff);
                    if phi.mul(&psi)? == *f && !out.contains(&(phi, psi)) {
                        out.push((phi, psi));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn has_rational_root(f: &BinQuartForm) -> Result<bool> {
    for q in divisors(f.a4) {
        for p0 in divisors(f.a0) {
            for p in [p0, -p0] {
                if f.eval(p, q)? == 0 {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Irreducibility of F over Q. A zero leading or trailing coefficient means y or x
/// divides F, so such forms count as reducible.
pub fn is_irreducible(f: &BinQuartForm) -> Result<bool> {
    if f.a4 == 0 || f.a0 == 0 {
        return Ok(false);
    }
    if has_rational_root(f)? {
        return Ok(false);
    }
    Ok(quadratic_factorizations(f)?.is_empty())
}

/// Galois tag of a family form via the conductor-polynomial criterion.
pub fn galois_tag(c: &FamilyCoords) -> Result<GaloisTag> {
    let f = to_form(c)?;
    let disc = disc_quartic(&f)?;
    if disc == 0 {
        return Err(Error::Degenerate("zero discriminant"));
    }
    if !is_irreducible(&f)? {
        return Ok(GaloisTag::Reducible);
    }
    Ok(tag_from_invariants(disc, conductor_poly(c)?))
}

/// Tag of an irreducible family form from Δ(F) and C_i(F).
pub fn tag_from_invariants(disc: i128, cond: i128) -> GaloisTag {
    if is_square(disc) {
        GaloisTag::V4
    } else if cond > 0 && is_square(cond) {
        GaloisTag::C4
    } else {
        GaloisTag::D4
    }
}

/// Galois tag of an arbitrary form from the rational roots of its resolvent and the
/// Θ-square test. Independent of family membership.
pub fn galois_tag_of_form(f: &BinQuartForm) -> Result<GaloisTag> {
    if disc_quartic(f)? == 0 {
        return Err(Error::Degenerate("zero discriminant"));
    }
    if !is_irreducible(f)? {
        return Ok(GaloisTag::Reducible);
    }
    let roots = resolvent_integer_roots(f)?;
    Ok(match roots.len() {
        0 => GaloisTag::Large,
        1 => {
            let (t1, t2) = theta_with_t(f, roots[0])?;
            if is_square(t1) && is_square(t2) {
                GaloisTag::C4
            } else {
                GaloisTag::D4
            }
        }
        _ => GaloisTag::V4,
    })
}

/// H(F) and S(F) of the real-root sign table.
pub fn h_and_s(f: &BinQuartForm) -> Result<(i128, i128)> {
    let (a4, a3, a2, a1, a0) = (f.a4, f.a3, f.a2, f.a1, f.a0);
    let h = csub(cmul(8, cmul(a4, a2)?)?, cmul(3, cmul(a3, a3)?)?)?;
    let a3sq = cmul(a3, a3)?;
    let a4sq = cmul(a4, a4)?;
    let s = crate::arith::csum_prod(&[
        (3, &[a3sq, a3sq]),
        (-16, &[a4, a3sq, a2]),
        (16, &[a4sq, a2, a2]),
        (16, &[a4sq, a3, a1]),
        (-64, &[a4sq, a4, a0]),
    ])?;
    Ok((h, s))
}

/// r₂ from Δ, H and S: 0 if Δ > 0, S > 0, −H > 0; 1 if Δ < 0; 2 otherwise.
pub fn real_signature(f: &BinQuartForm) -> Result<RealSignature> {
    let mut g = *f;
    if g.a4 == 0 {
        // move a root away from infinity; the count of real roots is unchanged
        let mut k = 1;
        loop {
            let t = act_quartic(f, &GL2Mat::new(1, 0, k, 1))?;
            if t.a4 != 0 {
                g = t;
                break;
            }
            k += 1;
        }
    }
    let disc = disc_quartic(&g)?;
    if disc == 0 {
        return Err(Error::Degenerate("zero discriminant"));
    }
    if disc < 0 {
        return Ok(1);
    }
    let (h, s) = h_and_s(&g)?;
    Ok(if s > 0 && h < 0 { 0 } else { 2 })
}

fn sgn(x: i128) -> i32 {
    x.signum() as i32
}

/// r₂ from sign conditions on the coordinates (families 1 and 2).
pub fn family_real_signature(c: &FamilyCoords) -> Result<RealSignature> {
    let (a, b, cc) = c.abc();
    let d = c.d()?;
    let (p, q) = match c.family {
        Family::One => (sgn(a) * sgn(cc), -sgn(a) * sgn(b)),
        Family::Two => {
            let u = cadd(csub(cmul(4, a)?, cmul(2, b)?)?, cc)?;
            let v = cadd(cadd(cmul(4, a)?, cmul(2, b)?)?, cc)?;
            let w = csub(cmul(4, a)?, cc)?;
            (sgn(u) * sgn(v), -sgn(u) * sgn(w))
        }
        Family::Three => return real_signature(&to_form(c)?),
    };
    if p < 0 {
        return Ok(1);
    }
    Ok(if p > 0 && d > 0 && q > 0 { 0 } else { 2 })
}

fn proportional(p: &BinQuadForm, q: &BinQuadForm) -> bool {
    let (a, b) = (p.coeffs(), q.coeffs());
    (0..3).all(|i| (0..3).all(|j| a[i] * b[j] == a[j] * b[i]))
}

pub fn reducible_type(f: &BinQuartForm, fam: Family) -> Result<ReducibleType> {
    if is_irreducible(f)? {
        return Ok(ReducibleType::Irreducible);
    }
    let j = fam.j_form();
    let m = m_matrix(&j)?;
    let facs = quadratic_factorizations(f)?;
    for (phi, psi) in &facs {
        if in_w(phi, &j)? && in_w(psi, &j)? {
            return Ok(ReducibleType::Type2);
        }
    }
    for (phi, psi) in &facs {
        let pm = substitute(&phi.coeffs(), &m)?;
        if proportional(&BinQuadForm::new(pm[0], pm[1], pm[2]), psi) {
            return Ok(ReducibleType::Type1);
        }
    }
    Err(Error::Internal("reducible family form of neither type"))
}

/// The orbit of coordinates under the eight-element group, in closed form.
pub fn orbit(c: &FamilyCoords) -> Vec<FamilyCoords> {
    let (a, b, cc) = c.abc();
    let other = match c.family {
        Family::One => FamilyCoords::new(c.family, cc, b, a),
        Family::Two | Family::Three => FamilyCoords::new(c.family, a, -b, cc),
    };
    if other == *c {
        vec![*c]
    } else {
        vec![*c, other]
    }
}

/// The orbit computed by acting with each matrix of the group on the form.
pub fn orbit_by_action(c: &FamilyCoords) -> Result<Vec<FamilyCoords>> {
    let f = to_form(c)?;
    let mut out = Vec::new();
    for t in o12_group() {
        let g = from_form(&act_quartic(&f, &t)?, c.family)?;
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out.sort();
    Ok(out)
}

fn lex_min(v: &[FamilyCoords]) -> FamilyCoords {
    *v.iter().min_by_key(|c| (c.a, c.b, c.c)).expect("nonempty orbit")
}

/// Canonical representative of the orbit and whether it lies on the boundary of the
/// strict-inequality fundamental domain.
pub fn canonical_coords(c: &FamilyCoords) -> Result<(FamilyCoords, bool)> {
    let orb = orbit(c);
    let (a, b, cc) = c.abc();
    match c.family {
        Family::One => match cc.abs().cmp(&a.abs()) {
            std::cmp::Ordering::Greater => Ok((*c, false)),
            std::cmp::Ordering::Less => Ok((FamilyCoords::new(c.family, cc, b, a), false)),
            std::cmp::Ordering::Equal => Ok((lex_min(&orb), true)),
        },
        Family::Two => {
            let u = cadd(csub(cmul(4, a)?, cmul(2, b)?)?, cc)?.abs();
            let v = cadd(cadd(cmul(4, a)?, cmul(2, b)?)?, cc)?.abs();
            match v.cmp(&u) {
                std::cmp::Ordering::Greater => Ok((*c, false)),
                std::cmp::Ordering::Less => Ok((FamilyCoords::new(c.family, a, -b, cc), false)),
                std::cmp::Ordering::Equal => Ok((lex_min(&orb), true)),
            }
        }
        Family::Three => Ok((lex_min(&orb), false)),
    }
}

/// Whether c is the representative chosen by [`canonical_coords`], and if so whether it
/// lies on the boundary. Allocation-free; used in the census inner loop.
pub fn canonical_status(c: &FamilyCoords) -> Option<bool> {
    let (a, b, cc) = c.abc();
    match c.family {
        Family::One => match cc.abs().cmp(&a.abs()) {
            std::cmp::Ordering::Greater => Some(false),
            std::cmp::Ordering::Less => None,
            std::cmp::Ordering::Equal => (a <= cc).then_some(true),
        },
        Family::Two => {
            let u = (4 * a - 2 * b + cc).abs();
            let v = (4 * a + 2 * b + cc).abs();
            match v.cmp(&u) {
                std::cmp::Ordering::Greater => Some(false),
                std::cmp::Ordering::Less => None,
                std::cmp::Ordering::Equal => (b <= 0).then_some(true),
            }
        }
        Family::Three => (b <= 0).then_some(false),
    }
}

/// Number of distinct real roots of F(x,1), plus one if y divides F (a real root at
/// infinity), by a Sturm sequence over the rationals.
pub fn sturm_real_roots(f: &BinQuartForm) -> usize {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{Signed, Zero};
    let mut p: Vec<BigRational> = f
        .coeffs()
        .iter()
        .rev()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    let mut at_inf = 0;
    while p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
        at_inf = 1;
    }
    if p.len() <= 1 {
        return at_inf;
    }
    let deriv: Vec<BigRational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    let mut seq = vec![p, deriv];
    loop {
        let (a, b) = (&seq[seq.len() - 2], &seq[seq.len() - 1]);
        let mut r = a.clone();
        while r.len() >= b.len() && !r.is_empty() {
            let k = r.len() - b.len();
            let q = r.last().unwrap() / b.last().unwrap();
            for (i, bc) in b.iter().enumerate() {
                r[i + k] -= &q * bc;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|x| -x).collect());
    }
    // sign changes at -∞ and +∞ from leading coefficients and degrees
    let changes = |neg: bool| {
        let signs: Vec<i32> = seq
            .iter()
            .map(|q| {
                let lead = q.last().unwrap();
                let mut s = if lead.is_positive() { 1 } else { -1 };
                if neg && (q.len() - 1) % 2 == 1 {
                    s = -s;
                }
                s
            })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(true) - changes(false) + at_inf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fc(i: i64, a: i128, b: i128, c: i128) -> FamilyCoords {
        FamilyCoords::new(Family::from_index(i).unwrap(), a, b, c)
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&BinQuartForm::new(1, 0, 0, 0, 1)).unwrap());
        assert!(!is_irreducible(&BinQuartForm::new(1, 0, 0, 0, -1)).unwrap());
        assert!(!is_irreducible(&BinQuartForm::new(1, 0, 1, 0, 1)).unwrap());
        assert!(is_irreducible(&BinQuartForm::new(1, 0, 0, 0, -2)).unwrap());
        assert!(is_irreducible(&BinQuartForm::new(2, 0, 0, 0, 2)).unwrap());
        // (2x²+xy+3y²)(3x²−xy+y²)
        let f = BinQuadForm::new(2, 1, 3).mul(&BinQuadForm::new(3, -1, 1)).unwrap();
        assert!(!is_irreducible(&f).unwrap());
    }

    #[test]
    fn tags() {
        assert_eq!(galois_tag(&fc(1, 1, 0, 1)).unwrap(), GaloisTag::V4);
        assert_eq!(galois_tag(&fc(1, 1, -4, 2)).unwrap(), GaloisTag::C4);
        assert_eq!(galois_tag(&fc(1, 1, 0, -2)).unwrap(), GaloisTag::D4);
        for c in [fc(1, 1, 0, 1), fc(1, 1, -4, 2), fc(1, 1, 0, -2), fc(2, 1, 3, 5), fc(3, 2, 1, 1), fc(2, 3, 1, -2), fc(3, 1, 0, 2)] {
            let f = to_form(&c).unwrap();
            assert_eq!(galois_tag(&c).unwrap(), galois_tag_of_form(&f).unwrap(), "{c}");
        }
        assert_eq!(galois_tag_of_form(&BinQuartForm::new(1, 0, 0, 1, 1)).unwrap(), GaloisTag::Large);
    }

    #[test]
    fn signatures() {
        assert_eq!(real_signature(&BinQuartForm::new(1, 0, 0, 0, -2)).unwrap(), 1);
        assert_eq!(real_signature(&BinQuartForm::new(1, 0, -1, 0, 1)).unwrap(), 2);
        assert_eq!(real_signature(&BinQuartForm::new(1, 0, -3, 0, 1)).unwrap(), 0);
        for c in [fc(1, 1, 0, -2), fc(1, 1, -1, 1), fc(1, 1, -3, 1)] {
            assert_eq!(family_real_signature(&c).unwrap(), real_signature(&to_form(&c).unwrap()).unwrap());
        }
    }

    #[test]
    fn reducible_types() {
        let t = |f: BinQuartForm| reducible_type(&f, Family::One).unwrap();
        assert_eq!(t(BinQuartForm::new(1, 0, 0, 0, -1)), ReducibleType::Type2);
        let f = BinQuadForm::new(1, 1, 2).mul(&BinQuadForm::new(1, -1, 2)).unwrap();
        assert_eq!(t(f), ReducibleType::Type1);
        assert_eq!(t(BinQuartForm::new(1, 0, 1, 0, -1)), ReducibleType::Irreducible);
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(sturm_real_roots(&BinQuartForm::new(1, 0, 0, 0, -2)), 2);
        assert_eq!(sturm_real_roots(&BinQuartForm::new(1, 0, -3, 0, 1)), 4);
        assert_eq!(sturm_real_roots(&BinQuartForm::new(1, 0, 0, 0, 1)), 0);
        assert_eq!(sturm_real_roots(&BinQuartForm::new(0, 1, 0, 0, -1)), 2);
    }

    #[test]
    fn canonical() {
        assert_eq!(canonical_coords(&fc(1, 1, 1, 2)).unwrap(), (fc(1, 1, 1, 2), false));
        assert_eq!(canonical_coords(&fc(1, 2, 1, 1)).unwrap(), (fc(1, 1, 1, 2), false));
        assert_eq!(canonical_coords(&fc(1, 1, 3, -1)).unwrap(), (fc(1, -1, 3, 1), true));
        for c in [fc(1, 3, -2, 5), fc(2, 3, -2, 5), fc(3, 3, -2, 5), fc(2, 1, 0, 7)] {
            let mut o = orbit(&c);
            o.sort();
            assert_eq!(o, orbit_by_action(&c).unwrap());
        }
    }
}
