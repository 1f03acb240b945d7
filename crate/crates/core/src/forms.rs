//! Binary quadratic and quartic forms, twisted GL₂ actions and the three families.

use crate::arith::{cadd, cmul, csub, gcd3};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// c2·x² + c1·xy + c0·y².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i128; 3]", into = "[i128; 3]")]
pub struct BinQuadForm {
    pub c2: i128,
    pub c1: i128,
    pub c0: i128,
}

impl From<[i128; 3]> for BinQuadForm {
    fn from(c: [i128; 3]) -> Self {
        BinQuadForm::new(c[0], c[1], c[2])
    }
}

impl From<BinQuadForm> for [i128; 3] {
    fn from(f: BinQuadForm) -> Self {
        [f.c2, f.c1, f.c0]
    }
}

/// a4·x⁴ + a3·x³y + a2·x²y² + a1·xy³ + a0·y⁴.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i128; 5]", into = "[i128; 5]")]
pub struct BinQuartForm {
    pub a4: i128,
    pub a3: i128,
    pub a2: i128,
    pub a1: i128,
    pub a0: i128,
}

impl From<[i128; 5]> for BinQuartForm {
    fn from(c: [i128; 5]) -> Self {
        BinQuartForm::from_coeffs(c)
    }
}

impl From<BinQuartForm> for [i128; 5] {
    fn from(f: BinQuartForm) -> Self {
        f.coeffs()
    }
}

/// [[t1, t2], [t3, t4]] acting by (x, y) ↦ (t1x + t2y, t3x + t4y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GL2Mat {
    pub t1: i128,
    pub t2: i128,
    pub t3: i128,
    pub t4: i128,
}

/// Which of the three reference forms J^(i) a family is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// J = xy
    One = 1,
    /// J = x² − y²
    Two = 2,
    /// J = x² + y²
    Three = 3,
}

pub const FAMILIES: [Family; 3] = [Family::One, Family::Two, Family::Three];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyCoords {
    pub family: Family,
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl BinQuadForm {
    pub const fn new(c2: i128, c1: i128, c0: i128) -> Self {
        BinQuadForm { c2, c1, c0 }
    }

    pub fn coeffs(&self) -> [i128; 3] {
        [self.c2, self.c1, self.c0]
    }

    pub fn is_zero(&self) -> bool {
        self.c2 == 0 && self.c1 == 0 && self.c0 == 0
    }

    pub fn eval(&self, x: i128, y: i128) -> Result<i128> {
        let t = cadd(cmul(cmul(self.c2, x)?, x)?, cmul(cmul(self.c1, x)?, y)?)?;
        cadd(t, cmul(cmul(self.c0, y)?, y)?)
    }

    pub fn scale(&self, k: i128) -> Result<Self> {
        Ok(BinQuadForm::new(cmul(self.c2, k)?, cmul(self.c1, k)?, cmul(self.c0, k)?))
    }

    /// Product of two quadratics as a quartic.
    pub fn mul(&self, o: &BinQuadForm) -> Result<BinQuartForm> {
        let p = poly_mul(&self.coeffs(), &o.coeffs())?;
        Ok(BinQuartForm::from_coeffs([p[0], p[1], p[2], p[3], p[4]]))
    }
}

impl BinQuartForm {
    pub const fn new(a4: i128, a3: i128, a2: i128, a1: i128, a0: i128) -> Self {
        BinQuartForm { a4, a3, a2, a1, a0 }
    }

    pub const fn from_coeffs(c: [i128; 5]) -> Self {
        BinQuartForm::new(c[0], c[1], c[2], c[3], c[4])
    }

    pub fn coeffs(&self) -> [i128; 5] {
        [self.a4, self.a3, self.a2, self.a1, self.a0]
    }

    pub fn height(&self) -> i128 {
        self.coeffs().iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: i128, y: i128) -> Result<i128> {
        // Horner in the homogeneous setting
        let mut acc = self.a4;
        let mut ypow = 1i128;
        for &c in &[self.a3, self.a2, self.a1, self.a0] {
            ypow = cmul(ypow, y)?;
            acc = cadd(cmul(acc, x)?, cmul(c, ypow)?)?;
        }
        Ok(acc)
    }

    pub fn neg(&self) -> Self {
        BinQuartForm::new(-self.a4, -self.a3, -self.a2, -self.a1, -self.a0)
    }
}

impl GL2Mat {
    pub const fn new(t1: i128, t2: i128, t3: i128, t4: i128) -> Self {
        GL2Mat { t1, t2, t3, t4 }
    }

    pub const IDENTITY: GL2Mat = GL2Mat::new(1, 0, 0, 1);

    pub fn det(&self) -> i128 {
        self.t1 * self.t4 - self.t2 * self.t3
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    /// Matrix product self·o.
    pub fn mul(&self, o: &GL2Mat) -> GL2Mat {
        GL2Mat::new(
            self.t1 * o.t1 + self.t2 * o.t3,
            self.t1 * o.t2 + self.t2 * o.t4,
            self.t3 * o.t1 + self.t4 * o.t3,
            self.t3 * o.t2 + self.t4 * o.t4,
        )
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Option<GL2Mat> {
        let d = self.det();
        if d.abs() != 1 {
            return None;
        }
        Some(GL2Mat::new(self.t4 * d, -self.t2 * d, -self.t3 * d, self.t1 * d))
    }
}

/// The eight matrices ±{I, diag(1,−1), [[0,1],[1,0]], [[0,1],[−1,0]]}.
pub fn o12_group() -> [GL2Mat; 8] {
    let base = [
        GL2Mat::new(1, 0, 0, 1),
        GL2Mat::new(1, 0, 0, -1),
        GL2Mat::new(0, 1, 1, 0),
        GL2Mat::new(0, 1, -1, 0),
    ];
    let mut out = [GL2Mat::IDENTITY; 8];
    for (k, m) in base.iter().enumerate() {
        out[2 * k] = *m;
        out[2 * k + 1] = GL2Mat::new(-m.t1, -m.t2, -m.t3, -m.t4);
    }
    out
}

impl Family {
    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: i64) -> Result<Family> {
        match i {
            1 => Ok(Family::One),
            2 => Ok(Family::Two),
            3 => Ok(Family::Three),
            _ => Err(Error::BadFamily(i)),
        }
    }

    /// The reference form J^(i).
    pub fn j_form(self) -> BinQuadForm {
        match self {
            Family::One => BinQuadForm::new(0, 1, 0),
            Family::Two => BinQuadForm::new(1, 0, -1),
            Family::Three => BinQuadForm::new(1, 0, 1),
        }
    }

    pub fn m_matrix(self) -> GL2Mat {
        m_matrix(&self.j_form()).expect("reference forms are nondegenerate")
    }
}

impl FamilyCoords {
    pub const fn new(family: Family, a: i128, b: i128, c: i128) -> Self {
        FamilyCoords { family, a, b, c }
    }

    pub fn abc(&self) -> (i128, i128, i128) {
        (self.a, self.b, self.c)
    }

    /// Discriminant of h = Ax² + Bxy + Cy².
    pub fn d(&self) -> Result<i128> {
        csub(cmul(self.b, self.b)?, cmul(4, cmul(self.a, self.c)?)?)
    }
}

// ---------------------------------------------------------------------------
// parsing and display

fn parse_ints(s: &str) -> Result<Vec<i128>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i128>()
                .map_err(|_| Error::Parse(format!("bad integer '{}'", t.trim())))
        })
        .collect()
}

impl FromStr for BinQuadForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v = parse_ints(s)?;
        if v.len() != 3 {
            return Err(Error::Parse(format!("expected c2,c1,c0 but got '{s}'")));
        }
        Ok(BinQuadForm::new(v[0], v[1], v[2]))
    }
}

impl FromStr for BinQuartForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v = parse_ints(s)?;
        if v.len() != 5 {
            return Err(Error::Parse(format!("expected a4,a3,a2,a1,a0 but got '{s}'")));
        }
        Ok(BinQuartForm::new(v[0], v[1], v[2], v[3], v[4]))
    }
}

impl FromStr for FamilyCoords {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (i, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected i:A,B,C but got '{s}'")))?;
        let i: i64 = i
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad family index '{i}'")))?;
        let v = parse_ints(rest)?;
        if v.len() != 3 {
            return Err(Error::Parse(format!("expected i:A,B,C but got '{s}'")));
        }
        Ok(FamilyCoords::new(Family::from_index(i)?, v[0], v[1], v[2]))
    }
}

impl fmt::Display for BinQuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.c2, self.c1, self.c0)
    }
}

impl fmt::Display for BinQuartForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.a4, self.a3, self.a2, self.a1, self.a0)
    }
}

impl fmt::Display for FamilyCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{},{},{}", self.family.index(), self.a, self.b, self.c)
    }
}

// ---------------------------------------------------------------------------
// operations

pub fn disc_quadratic(phi: &BinQuadForm) -> Result<i128> {
    csub(cmul(phi.c1, phi.c1)?, cmul(4, cmul(phi.c2, phi.c0)?)?)
}

/// Discriminant of a binary quartic (the classical 16-term polynomial).
pub fn disc_quartic(f: &BinQuartForm) -> Result<i128> {
    let (a, b, c, d, e) = (f.a4, f.a3, f.a2, f.a1, f.a0);
    crate::arith::csum_prod(&[
        (256, &[a, a, a, e, e, e]),
        (-192, &[a, a, b, d, e, e]),
        (-128, &[a, a, c, c, e, e]),
        (144, &[a, a, c, d, d, e]),
        (-27, &[a, a, d, d, d, d]),
        (144, &[a, b, b, c, e, e]),
        (-6, &[a, b, b, d, d, e]),
        (-80, &[a, b, c, c, d, e]),
        (18, &[a, b, c, d, d, d]),
        (16, &[a, c, c, c, c, e]),
        (-4, &[a, c, c, c, d, d]),
        (-27, &[b, b, b, b, e, e]),
        (18, &[b, b, b, c, d, e]),
        (-4, &[b, b, b, d, d, d]),
        (-4, &[b, b, c, c, c, e]),
        (1, &[b, b, c, c, d, d]),
    ])
}

/// Product of homogeneous coefficient vectors (highest x-power first).
pub(crate) fn poly_mul(p: &[i128], q: &[i128]) -> Result<Vec<i128>> {
    let mut out = vec![0i128; p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in q.iter().enumerate() {
            out[i + j] = cadd(out[i + j], cmul(a, b)?)?;
        }
    }
    Ok(out)
}

fn poly_pow(p: &[i128], k: u32) -> Result<Vec<i128>> {
    let mut acc = vec![1i128];
    for _ in 0..k {
        acc = poly_mul(&acc, p)?;
    }
    Ok(acc)
}

/// Coefficients of Σ cₖ·(t1x+t2y)^(n−k)(t3x+t4y)^k for a degree-n form.
pub(crate) fn substitute(coeffs: &[i128], t: &GL2Mat) -> Result<Vec<i128>> {
    let n = coeffs.len() - 1;
    let lx = [t.t1, t.t2];
    let ly = [t.t3, t.t4];
    let mut out = vec![0i128; n + 1];
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = poly_mul(&poly_pow(&lx, (n - k) as u32)?, &poly_pow(&ly, k as u32)?)?;
        for (o, v) in out.iter_mut().zip(term) {
            *o = cadd(*o, cmul(c, v)?)?;
        }
    }
    Ok(out)
}

fn exact_div_all(v: &mut [i128], d: i128) -> Result<()> {
    if d == 0 {
        return Err(Error::Degenerate("singular matrix"));
    }
    if v.iter().any(|x| x % d != 0) {
        return Err(Error::NonIntegral("twisted action"));
    }
    for x in v.iter_mut() {
        *x /= d;
    }
    Ok(())
}

/// F_T(x,y) = F(t1x+t2y, t3x+t4y) / det(T)².
pub fn act_quartic(f: &BinQuartForm, t: &GL2Mat) -> Result<BinQuartForm> {
    let mut v = substitute(&f.coeffs(), t)?;
    let d = t.det();
    exact_div_all(&mut v, cmul(d, d)?)?;
    Ok(BinQuartForm::new(v[0], v[1], v[2], v[3], v[4]))
}

/// φ_T(x,y) = φ(t1x+t2y, t3x+t4y) / det(T).
pub fn act_quadratic(phi: &BinQuadForm, t: &GL2Mat) -> Result<BinQuadForm> {
    let mut v = substitute(&phi.coeffs(), t)?;
    exact_div_all(&mut v, t.det())?;
    Ok(BinQuadForm::new(v[0], v[1], v[2]))
}

/// M_J = [[β, 2γ], [−2α, −β]] for J = αx² + βxy + γy².
pub fn m_matrix(j: &BinQuadForm) -> Result<GL2Mat> {
    if disc_quadratic(j)? == 0 {
        return Err(Error::Degenerate("J has zero discriminant"));
    }
    Ok(GL2Mat::new(j.c1, cmul(2, j.c0)?, cmul(-2, j.c2)?, -j.c1))
}

/// True iff F_{M_J} = F.
pub fn fixed_by(f: &BinQuartForm, j: &BinQuadForm) -> Result<bool> {
    let m = m_matrix(j)?;
    match act_quartic(f, &m) {
        Ok(g) => Ok(g == *f),
        Err(Error::NonIntegral(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The set of i with F_{M_{J^(i)}} = F.
pub fn family_membership(f: &BinQuartForm) -> Result<Vec<Family>> {
    let mut out = Vec::new();
    for fam in FAMILIES {
        if fixed_by(f, &fam.j_form())? {
            out.push(fam);
        }
    }
    Ok(out)
}

pub fn to_form(c: &FamilyCoords) -> Result<BinQuartForm> {
    let (a, b, cc) = c.abc();
    Ok(match c.family {
        Family::One => BinQuartForm::new(a, 0, b, 0, cc),
        Family::Two => BinQuartForm::new(a, b, cadd(cc, cmul(2, a)?)?, b, a),
        Family::Three => BinQuartForm::new(a, b, csub(cc, cmul(2, a)?)?, -b, a),
    })
}

pub fn from_form(f: &BinQuartForm, fam: Family) -> Result<FamilyCoords> {
    let ok = match fam {
        Family::One => f.a3 == 0 && f.a1 == 0,
        Family::Two => f.a4 == f.a0 && f.a3 == f.a1,
        Family::Three => f.a4 == f.a0 && f.a3 == -f.a1,
    };
    if !ok {
        return Err(Error::NotInFamily(fam.index()));
    }
    Ok(match fam {
        Family::One => FamilyCoords::new(fam, f.a4, f.a2, f.a0),
        Family::Two => FamilyCoords::new(fam, f.a4, f.a3, csub(f.a2, cmul(2, f.a4)?)?),
        Family::Three => FamilyCoords::new(fam, f.a4, f.a3, cadd(f.a2, cmul(2, f.a4)?)?),
    })
}

/// J_(f,g) = (f2g1−f1g2)x² + 2(f2g0−f0g2)xy + (f1g0−f0g1)y².
pub fn jacobian_det(f: &BinQuadForm, g: &BinQuadForm) -> Result<BinQuadForm> {
    Ok(BinQuadForm::new(
        csub(cmul(f.c2, g.c1)?, cmul(f.c1, g.c2)?)?,
        cmul(2, csub(cmul(f.c2, g.c0)?, cmul(f.c0, g.c2)?)?)?,
        csub(cmul(f.c1, g.c0)?, cmul(f.c0, g.c1)?)?,
    ))
}

pub fn is_primitive_pair(f: &BinQuadForm, g: &BinQuadForm) -> Result<bool> {
    let j = jacobian_det(f, g)?;
    if disc_quadratic(&j)? == 0 {
        return Ok(false);
    }
    Ok(gcd3(j.c2, j.c1 / 2, j.c0) == 1)
}

/// Family-2 coordinates (A,B,C) to the family-1 triple (4A−2B+C, 2(4A−C), 4A+2B+C),
/// i.e. 4·F_{T₀} with T₀ = [[1,1],[−1,1]].
pub fn omega(a: i128, b: i128, c: i128) -> Result<(i128, i128, i128)> {
    let a4 = cmul(4, a)?;
    let b2 = cmul(2, b)?;
    Ok((
        cadd(csub(a4, b2)?, c)?,
        cmul(2, csub(a4, c)?)?,
        cadd(cadd(a4, b2)?, c)?,
    ))
}

/// Inverse of [`omega`]: ((a+b+c)/16, (−a+c)/4, (a−b+c)/4), `None` when not integral.
pub fn iota(a: i128, b: i128, c: i128) -> Option<(i128, i128, i128)> {
    let r = a + b + c;
    let s = c - a;
    let t = a - b + c;
    if r % 16 != 0 || s % 4 != 0 || t % 4 != 0 {
        return None;
    }
    Some((r / 16, s / 4, t / 4))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i128, b: i128, c: i128) -> BinQuadForm {
        BinQuadForm::new(a, b, c)
    }

    #[test]
    fn quad_discs() {
        assert_eq!(disc_quadratic(&q(1, 0, 1)).unwrap(), -4);
        assert_eq!(disc_quadratic(&q(0, 1, 0)).unwrap(), 1);
        assert_eq!(disc_quadratic(&q(1, 1, -1)).unwrap(), 5);
    }

    #[test]
    fn quartic_discs() {
        assert_eq!(disc_quartic(&BinQuartForm::new(1, 0, 0, 0, -1)).unwrap(), -256);
        assert_eq!(disc_quartic(&BinQuartForm::new(1, 0, 0, 0, 0)).unwrap(), 0);
        let f = to_form(&FamilyCoords::new(Family::One, 1, 1, -1)).unwrap();
        assert_eq!(disc_quartic(&f).unwrap(), -400);
    }

    #[test]
    fn actions() {
        let f = BinQuartForm::new(3, -1, 4, 1, -5);
        assert_eq!(act_quartic(&f, &GL2Mat::IDENTITY).unwrap(), f);
        let j1 = q(0, 1, 0);
        assert_eq!(act_quadratic(&j1, &GL2Mat::new(0, 1, 1, 0)).unwrap(), q(0, -1, 0));
        assert_eq!(act_quadratic(&q(1, 0, 0), &GL2Mat::new(1, 1, 0, 1)).unwrap(), q(1, 2, 1));
        // family 2 to family 1 through T0, scaled by 4
        let (a, b, c) = (3, -2, 5);
        let g = to_form(&FamilyCoords::new(Family::Two, a, b, c)).unwrap();
        let h = act_quartic(&g, &GL2Mat::new(1, 1, -1, 1));
        let (x, y, z) = omega(a, b, c).unwrap();
        match h {
            Ok(h) => assert_eq!([4 * h.a4, 4 * h.a3, 4 * h.a2, 4 * h.a1, 4 * h.a0], [x, 0, y, 0, z]),
            Err(Error::NonIntegral(_)) => {}
            Err(e) => panic!("{e}"),
        }
        let raw = substitute(&g.coeffs(), &GL2Mat::new(1, 1, -1, 1)).unwrap();
        assert_eq!(raw, vec![x, 0, y, 0, z]);
        assert_eq!(iota(x, y, z), Some((a, b, c)));
    }

    #[test]
    fn m_matrices() {
        assert_eq!(m_matrix(&q(0, 1, 0)).unwrap(), GL2Mat::new(1, 0, 0, -1));
        assert_eq!(m_matrix(&q(1, 0, 1)).unwrap(), GL2Mat::new(0, 2, -2, 0));
        assert_eq!(m_matrix(&q(1, 0, -1)).unwrap(), GL2Mat::new(0, -2, -2, 0));
    }

    #[test]
    fn membership() {
        let m = |v: [i128; 5]| family_membership(&BinQuartForm::from_coeffs(v)).unwrap();
        assert_eq!(m([1, 0, 1, 0, 2]), vec![Family::One]);
        assert_eq!(m([1, 0, 0, 0, 1]), vec![Family::One, Family::Two, Family::Three]);
        assert!(m([1, 1, 0, 0, 0]).is_empty());
        // fixed by M_{J1} iff a3 = a1 = 0
        assert!(fixed_by(&BinQuartForm::new(2, 0, 7, 0, -3), &q(0, 1, 0)).unwrap());
        assert!(!fixed_by(&BinQuartForm::new(2, 1, 7, 0, -3), &q(0, 1, 0)).unwrap());
    }

    #[test]
    fn to_from() {
        let f = |i, a, b, c| to_form(&FamilyCoords::new(Family::from_index(i).unwrap(), a, b, c)).unwrap();
        assert_eq!(f(1, 1, 1, 1), BinQuartForm::new(1, 0, 1, 0, 1));
        assert_eq!(f(2, 1, 0, 0), BinQuartForm::new(1, 0, 2, 0, 1));
        assert_eq!(f(3, 1, 2, 3), BinQuartForm::new(1, 2, 1, -2, 1));
        for fam in FAMILIES {
            let c = FamilyCoords::new(fam, 4, -7, 9);
            assert_eq!(from_form(&to_form(&c).unwrap(), fam).unwrap(), c);
        }
    }

    #[test]
    fn jacobians() {
        assert_eq!(jacobian_det(&q(1, 0, 0), &q(0, 0, 1)).unwrap(), q(0, 2, 0));
        assert_eq!(jacobian_det(&q(1, 0, -1), &q(0, 1, 0)).unwrap(), q(1, 0, 1));
        assert!(jacobian_det(&q(2, 3, 4), &q(2, 3, 4)).unwrap().is_zero());
        assert!(is_primitive_pair(&q(1, 0, 0), &q(0, 0, 1)).unwrap());
        assert!(!is_primitive_pair(&q(2, 0, 0), &q(0, 0, 1)).unwrap());
        assert!(!is_primitive_pair(&q(1, 0, 0), &q(1, 0, 0)).unwrap());
    }

    #[test]
    fn parsing() {
        assert_eq!("1,0,0,0,-2".parse::<BinQuartForm>().unwrap(), BinQuartForm::new(1, 0, 0, 0, -2));
        assert_eq!("2:1, 0,0".parse::<FamilyCoords>().unwrap(), FamilyCoords::new(Family::Two, 1, 0, 0));
        assert!("4:1,0,0".parse::<FamilyCoords>().is_err());
        assert!("1,2".parse::<BinQuadForm>().is_err());
    }
}
