//! W_J / V_J lattices, the decomposition F = h(f,g), conductor polynomials and the
//! cubic resolvent.

use crate::arith::{cadd, cmul, csub, divisors, gcd3};
use crate::error::{Error, Result};
use crate::forms::{
    disc_quadratic, disc_quartic, fixed_by, jacobian_det, m_matrix, BinQuadForm, BinQuartForm,
    Family, FamilyCoords,
};
use crate::linalg::{det_i128, integer_kernel};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WBasis {
    pub f: BinQuadForm,
    pub g: BinQuadForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub h: BinQuadForm,
    pub f: BinQuadForm,
    pub g: BinQuadForm,
    #[serde(rename = "J")]
    pub j: BinQuadForm,
}

/// Ternary quadratic form xx·x² + yy·y² + zz·z² + xy·xy + xz·xz + yz·yz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TernaryQuad {
    pub xx: i128,
    pub yy: i128,
    pub zz: i128,
    pub xy: i128,
    pub xz: i128,
    pub yz: i128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WoodPair {
    pub u: TernaryQuad,
    pub v: TernaryQuad,
}

/// n_β = 2 if β is odd, 1 if β is even.
pub fn n_beta(j: &BinQuadForm) -> i128 {
    if j.c1 % 2 != 0 {
        2
    } else {
        1
    }
}

fn check_j(j: &BinQuadForm) -> Result<()> {
    if disc_quadratic(j)? == 0 {
        return Err(Error::Degenerate("J has zero discriminant"));
    }
    if gcd3(j.c2, j.c1, j.c0) != 1 {
        return Err(Error::Degenerate("J is not primitive"));
    }
    Ok(())
}

/// Membership in W_J: 2γφ₂ − βφ₁ + 2αφ₀ = 0.
pub fn in_w(phi: &BinQuadForm, j: &BinQuadForm) -> Result<bool> {
    let v = cadd(
        csub(cmul(cmul(2, j.c0)?, phi.c2)?, cmul(j.c1, phi.c1)?)?,
        cmul(cmul(2, j.c2)?, phi.c0)?,
    )?;
    Ok(v == 0)
}

/// Z-basis of W_J(Z) from the integer kernel of the congruence row, oriented so that
/// J_(f,g) is a positive multiple of J.
pub fn w_lattice_basis_general(j: &BinQuadForm) -> Result<WBasis> {
    check_j(j)?;
    let row = vec![vec![cmul(2, j.c0)?, -j.c1, cmul(2, j.c2)?]];
    let k = integer_kernel(&row, 3)?;
    let f = BinQuadForm::new(k[0][0], k[0][1], k[0][2]);
    let mut g = BinQuadForm::new(k[1][0], k[1][1], k[1][2]);
    let jj = jacobian_det(&f, &g)?;
    let pos = [(jj.c2, j.c2), (jj.c1, j.c1), (jj.c0, j.c0)]
        .iter()
        .find(|(_, b)| *b != 0)
        .map(|(a, b)| (*a > 0) == (*b > 0))
        .unwrap_or(true);
    if !pos {
        g = g.scale(-1)?;
    }
    Ok(WBasis { f, g })
}

/// Z-basis of W_J(Z); the three reference forms use fixed bases.
pub fn w_lattice_basis(j: &BinQuadForm) -> Result<WBasis> {
    let q = BinQuadForm::new;
    if *j == Family::One.j_form() {
        return Ok(WBasis { f: q(1, 0, 0), g: q(0, 0, 1) });
    }
    if *j == Family::Two.j_form() {
        return Ok(WBasis { f: q(1, 0, 1), g: q(0, 1, 0) });
    }
    if *j == Family::Three.j_form() {
        return Ok(WBasis { f: q(1, 0, -1), g: q(0, 1, 0) });
    }
    w_lattice_basis_general(j)
}

/// Expand h(f,g) = h₂f² + h₁fg + h₀g².
pub fn compose(h: &BinQuadForm, f: &BinQuadForm, g: &BinQuadForm) -> Result<BinQuartForm> {
    let ff = f.mul(f)?.coeffs();
    let fg = f.mul(g)?.coeffs();
    let gg = g.mul(g)?.coeffs();
    let mut out = [0i128; 5];
    for k in 0..5 {
        out[k] = cadd(cadd(cmul(h.c2, ff[k])?, cmul(h.c1, fg[k])?)?, cmul(h.c0, gg[k])?)?;
    }
    Ok(BinQuartForm::from_coeffs(out))
}

/// Solve F = h(f,g) for h over the rationals and require an integral solution.
pub fn decompose_with_basis(
    f_form: &BinQuartForm,
    j: &BinQuadForm,
    f: &BinQuadForm,
    g: &BinQuadForm,
) -> Result<Decomposition> {
    let cols = [f.mul(f)?.coeffs(), f.mul(g)?.coeffs(), g.mul(g)?.coeffs()];
    let rhs = f_form.coeffs();
    // pick three coefficient rows with a nonsingular 3×3 system
    for r0 in 0..5 {
        for r1 in r0 + 1..5 {
            for r2 in r1 + 1..5 {
                let rows = [r0, r1, r2];
                let m: Vec<Vec<i128>> = rows.iter().map(|&r| (0..3).map(|c| cols[c][r]).collect()).collect();
                let d = det_i128(&m)?;
                if d == 0 {
                    continue;
                }
                let mut h = [Ratio::from_integer(0i128); 3];
                for c in 0..3 {
                    let mut mc = m.clone();
                    for (i, &r) in rows.iter().enumerate() {
                        mc[i][c] = rhs[r];
                    }
                    h[c] = Ratio::new(det_i128(&mc)?, d);
                }
                if h.iter().any(|x| !x.is_integer()) {
                    return Err(Error::NonIntegral("decomposition coefficients"));
                }
                let h = BinQuadForm::new(h[0].to_integer(), h[1].to_integer(), h[2].to_integer());
                if compose(&h, f, g)? != *f_form {
                    return Err(Error::NotFixed);
                }
                return Ok(Decomposition { h, f: *f, g: *g, j: *j });
            }
        }
    }
    Err(Error::Internal("singular decomposition system"))
}

/// F = h(f,g) with (f,g) = w_lattice_basis(J).
pub fn decompose(f_form: &BinQuartForm, j: &BinQuadForm) -> Result<Decomposition> {
    if !fixed_by(f_form, j)? {
        return Err(Error::NotFixed);
    }
    if disc_quartic(f_form)? == 0 {
        return Err(Error::Degenerate("zero discriminant"));
    }
    let b = w_lattice_basis(j)?;
    decompose_with_basis(f_form, j, &b.f, &b.g)
}

/// (Δ(h)·Δ(J_(f,g))/4)² divides Δ(F).
pub fn decomposition_divisibility(d: &Decomposition, f_form: &BinQuartForm) -> Result<bool> {
    let dh = disc_quadratic(&d.h)?;
    let dj = disc_quadratic(&jacobian_det(&d.f, &d.g)?)?;
    let prod = cmul(dh, dj)?;
    if prod % 4 != 0 {
        return Ok(false);
    }
    let k = prod / 4;
    let k2 = cmul(k, k)?;
    let df = disc_quartic(f_form)?;
    Ok(k2 != 0 && df % k2 == 0)
}

/// C_i(F) = Δ(F)/Δ(h) in closed form.
pub fn conductor_poly(c: &FamilyCoords) -> Result<i128> {
    let (a, b, cc) = c.abc();
    let d = c.d()?;
    match c.family {
        Family::One => cmul(cmul(16, cmul(a, cc)?)?, d),
        Family::Two => {
            let (u, _, v) = crate::forms::omega(a, b, cc)?;
            cmul(cmul(u, v)?, d)
        }
        Family::Three => {
            let e = csub(cmul(4, a)?, cc)?;
            let n = cadd(cmul(e, e)?, cmul(4, cmul(b, b)?)?)?;
            cmul(n, d)
        }
    }
}

/// Coefficients [X³, X², X, 1] of R_F.
pub fn resolvent_cubic(f: &BinQuartForm) -> Result<[i128; 4]> {
    let (a4, a3, a2, a1, a0) = (f.a4, f.a3, f.a2, f.a1, f.a0);
    let a4sq = cmul(a4, a4)?;
    Ok([
        cmul(a4sq, a4)?,
        -cmul(a4sq, a2)?,
        cmul(a4, csub(cmul(a3, a1)?, cmul(4, cmul(a4, a0)?)?)?)?,
        -csub(
            cadd(cmul(cmul(a3, a3)?, a0)?, cmul(a4, cmul(a1, a1)?)?)?,
            cmul(4, cmul(a4, cmul(a2, a0)?)?)?,
        )?,
    ])
}

/// Monic integer cubic g(t) with R_F(t/a₄) = g(t): [1, −a₂, a₃a₁ − 4a₄a₀, −(a₃²a₀ + a₄a₁² − 4a₄a₂a₀)].
pub fn monic_resolvent(f: &BinQuartForm) -> Result<[i128; 4]> {
    let r = resolvent_cubic(f)?;
    let a4 = f.a4;
    if a4 == 0 {
        return Err(Error::ZeroLeading);
    }
    Ok([1, r[1] / a4 / a4, r[2] / a4, r[3]])
}

fn eval_cubic(g: &[i128; 4], t: i128) -> Result<i128> {
    let mut acc = g[0];
    for &c in &g[1..] {
        acc = cadd(cmul(acc, t)?, c)?;
    }
    Ok(acc)
}

/// Distinct integer roots t of the monic resolvent; rational roots of R_F are t/a₄.
pub fn resolvent_integer_roots(f: &BinQuartForm) -> Result<Vec<i128>> {
    let g = monic_resolvent(f)?;
    let mut roots = Vec::new();
    if g[3] == 0 {
        roots.push(0);
        // remaining roots solve t² + g1 t + g2 = 0
        let disc = csub(cmul(g[1], g[1])?, cmul(4, g[2])?)?;
        if crate::arith::is_square(disc) {
            let s = crate::arith::isqrt(disc);
            for num in [-g[1] + s, -g[1] - s] {
                if num % 2 == 0 {
                    roots.push(num / 2);
                }
            }
        }
    } else {
        for d in divisors(g[3]) {
            for t in [d, -d] {
                if eval_cubic(&g, t)? == 0 {
                    roots.push(t);
                }
            }
        }
    }
    roots.sort_unstable();
    roots.dedup();
    Ok(roots)
}

/// t = a₄·r_F for family members: B (i=1), 2A (i=2), −2A (i=3).
pub fn family_resolvent_t(c: &FamilyCoords) -> Result<i128> {
    match c.family {
        Family::One => Ok(c.b),
        Family::Two => cmul(2, c.a),
        Family::Three => cmul(-2, c.a),
    }
}

/// The rational root r_F of R_F. Family members use the closed forms; otherwise the
/// unique rational root is searched for.
pub fn rational_resolvent_root(c: &FamilyCoords) -> Result<Ratio<i128>> {
    match c.family {
        Family::One => {
            if c.a == 0 {
                let f = crate::forms::to_form(c)?;
                return rational_resolvent_root_of_form(&f);
            }
            Ok(Ratio::new(c.b, c.a))
        }
        Family::Two => Ok(Ratio::from_integer(2)),
        Family::Three => Ok(Ratio::from_integer(-2)),
    }
}

pub fn rational_resolvent_root_of_form(f: &BinQuartForm) -> Result<Ratio<i128>> {
    let roots = resolvent_integer_roots(f)?;
    match roots.as_slice() {
        [t] => Ok(Ratio::new(*t, f.a4)),
        [] => Err(Error::Degenerate("resolvent has no rational root")),
        _ => Err(Error::Degenerate("resolvent has several rational roots")),
    }
}

/// (Θ₁, Θ₂) for a given t = a₄·r with r a root of R_F. With this normalization
/// both values are integers: Θ₁ = (a₃² − 4a₄a₂ + 4a₄t)Δ, Θ₂ = (t² − 4a₄a₀)Δ.
pub fn theta_with_t(f: &BinQuartForm, t: i128) -> Result<(i128, i128)> {
    let d = disc_quartic(f)?;
    let q1 = cadd(csub(cmul(f.a3, f.a3)?, cmul(4, cmul(f.a4, f.a2)?)?)?, cmul(4, cmul(f.a4, t)?)?)?;
    let q2 = csub(cmul(t, t)?, cmul(4, cmul(f.a4, f.a0)?)?)?;
    Ok((cmul(q1, d)?, cmul(q2, d)?))
}

pub fn theta_invariants(c: &FamilyCoords) -> Result<(i128, i128)> {
    let f = crate::forms::to_form(c)?;
    theta_with_t(&f, family_resolvent_t(c)?)
}

pub fn wood_pair(f: &BinQuartForm) -> WoodPair {
    WoodPair {
        u: TernaryQuad { xy: -1, zz: 1, ..Default::default() },
        v: TernaryQuad { xx: f.a0, yy: f.a4, zz: f.a2, xz: f.a1, yz: f.a3, xy: 0 },
    }
}

/// Closed forms |det L_J| = n_β|α| (α≠0) or n_β|β|/2 (α=0), and its cube for Λ_J.
pub fn lattice_dets_closed(j: &BinQuadForm) -> (i128, i128) {
    let n = n_beta(j);
    let l = if j.c2 != 0 { n * j.c2.abs() } else { n * j.c1.abs() / 2 };
    (l, l * l * l)
}

/// |det L_J| and |det Λ_J| from the integer kernels of the defining conditions.
pub fn lattice_dets(j: &BinQuadForm) -> Result<(i128, i128)> {
    check_j(j)?;
    // W_J(Z) and the projection Φ
    let row = vec![vec![cmul(2, j.c0)?, -j.c1, cmul(2, j.c2)?]];
    let w = integer_kernel(&row, 3)?;
    let phi_idx: [usize; 2] = if j.c2 != 0 { [0, 1] } else { [0, 2] };
    let lm: Vec<Vec<i128>> = w.iter().map(|v| phi_idx.iter().map(|&i| v[i]).collect()).collect();
    let det_l = det_i128(&lm)?.abs();

    // V_J(Z) = ker(F ↦ F(M·) − det(M)²F) and the projection Ψ
    let m = m_matrix(j)?;
    let dm = m.det();
    let mut n: Vec<Vec<i128>> = vec![vec![0; 5]; 5];
    for k in 0..5 {
        let mut e = [0i128; 5];
        e[k] = 1;
        let img = crate::forms::substitute(&e, &m)?;
        for r in 0..5 {
            n[r][k] = img[r] - if r == k { cmul(dm, dm)? } else { 0 };
        }
    }
    let v = integer_kernel(&n, 5)?;
    if v.len() != 3 {
        return Err(Error::Internal("V_J has unexpected rank"));
    }
    let psi_idx: [usize; 3] = if j.c2 != 0 { [0, 1, 2] } else { [0, 2, 4] };
    let vm: Vec<Vec<i128>> = v.iter().map(|b| psi_idx.iter().map(|&i| b[i]).collect()).collect();
    let det_v = det_i128(&vm)?.abs();
    Ok((det_l, det_v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::to_form;

    fn q(a: i128, b: i128, c: i128) -> BinQuadForm {
        BinQuadForm::new(a, b, c)
    }

    #[test]
    fn bases() {
        assert_eq!(w_lattice_basis(&q(0, 1, 0)).unwrap(), WBasis { f: q(1, 0, 0), g: q(0, 0, 1) });
        assert_eq!(w_lattice_basis(&q(1, 0, 1)).unwrap(), WBasis { f: q(1, 0, -1), g: q(0, 1, 0) });
        assert_eq!(w_lattice_basis(&q(1, 0, -1)).unwrap(), WBasis { f: q(1, 0, 1), g: q(0, 1, 0) });
        // hard-coded bases span the same lattice as the general computation
        for fam in crate::forms::FAMILIES {
            let j = fam.j_form();
            let a = w_lattice_basis(&j).unwrap();
            let b = w_lattice_basis_general(&j).unwrap();
            let ja = jacobian_det(&a.f, &a.g).unwrap();
            let jb = jacobian_det(&b.f, &b.g).unwrap();
            assert_eq!(ja, jb, "{fam:?}");
            assert!(in_w(&b.f, &j).unwrap() && in_w(&b.g, &j).unwrap());
        }
        assert!(w_lattice_basis(&q(2, 0, 2)).is_err());
    }

    #[test]
    fn decompositions() {
        let d = decompose(&BinQuartForm::new(1, 0, 0, 0, -1), &q(0, 1, 0)).unwrap();
        assert_eq!((d.h, d.f, d.g), (q(1, 0, -1), q(1, 0, 0), q(0, 0, 1)));
        let d = decompose(&BinQuartForm::new(1, 0, 1, 0, 1), &q(0, 1, 0)).unwrap();
        assert_eq!(d.h, q(1, 1, 1));
        let f = BinQuartForm::new(1, 0, -1, 0, 1);
        let d = decompose(&f, &q(1, 0, 1)).unwrap();
        assert_eq!((d.h, d.f, d.g), (q(1, 0, 1), q(1, 0, -1), q(0, 1, 0)));
        assert!(decomposition_divisibility(&d, &f).unwrap());
        assert!(decompose(&BinQuartForm::new(1, 1, 0, 0, 1), &q(0, 1, 0)).is_err());
    }

    #[test]
    fn conductors() {
        let c = |i, a, b, cc| conductor_poly(&FamilyCoords::new(Family::from_index(i).unwrap(), a, b, cc)).unwrap();
        assert_eq!(c(1, 1, 1, 1), -48);
        assert_eq!(c(1, 1, 0, -1), -64);
        assert_eq!(c(2, 1, 0, 0), 0);
        for fam in crate::forms::FAMILIES {
            for (a, b, cc) in [(1, 3, -2), (2, -1, 5), (-3, 4, 1)] {
                let co = FamilyCoords::new(fam, a, b, cc);
                let df = disc_quartic(&to_form(&co).unwrap()).unwrap();
                assert_eq!(c(fam.index() as i64, a, b, cc) * co.d().unwrap(), df);
            }
        }
    }

    #[test]
    fn resolvents() {
        assert_eq!(resolvent_cubic(&BinQuartForm::new(1, 0, 1, 0, 1)).unwrap(), [1, -1, -4, 4]);
        assert_eq!(resolvent_cubic(&BinQuartForm::new(1, 0, 0, 0, -2)).unwrap(), [1, 0, 8, 0]);
        let c = FamilyCoords::new(Family::One, 1, 1, 1);
        assert_eq!(rational_resolvent_root(&c).unwrap(), Ratio::from_integer(1));
        for fam in crate::forms::FAMILIES {
            let c = FamilyCoords::new(fam, 3, -5, 7);
            let f = to_form(&c).unwrap();
            let r = resolvent_cubic(&f).unwrap();
            let root = rational_resolvent_root(&c).unwrap();
            let val = r.iter().fold(Ratio::from_integer(0), |acc, &k| acc * root + Ratio::from_integer(k));
            assert_eq!(val, Ratio::from_integer(0));
        }
    }

    #[test]
    fn thetas() {
        let t = |a, b, c| {
            let (x, y) = theta_invariants(&FamilyCoords::new(Family::One, a, b, c)).unwrap();
            let mut v = [x, y];
            v.sort();
            v
        };
        assert_eq!(t(1, 1, 1), [-432, 0]);
        assert_eq!(t(1, 0, -1), [-1024, 0]);
        let (x, y) = theta_invariants(&FamilyCoords::new(Family::Two, 2, 3, -7)).unwrap();
        assert!(x == 0 || y == 0);
    }

    #[test]
    fn wood() {
        let w = wood_pair(&BinQuartForm::new(1, 0, 0, 0, 1));
        assert_eq!(w.v, TernaryQuad { xx: 1, yy: 1, ..Default::default() });
        assert_eq!(w.u, TernaryQuad { xy: -1, zz: 1, ..Default::default() });
        let w = wood_pair(&BinQuartForm::new(1, 0, 1, 0, 1));
        assert_eq!(w.v, TernaryQuad { xx: 1, yy: 1, zz: 1, ..Default::default() });
        assert_eq!(wood_pair(&BinQuartForm::new(0, 0, 0, 0, 0)).v, TernaryQuad::default());
    }

    #[test]
    fn dets() {
        assert_eq!(lattice_dets(&q(0, 1, 0)).unwrap(), (1, 1));
        assert_eq!(lattice_dets(&q(1, 0, 1)).unwrap(), (1, 1));
        assert_eq!(lattice_dets(&q(3, 1, 1)).unwrap(), (6, 216));
        for j in [q(0, 1, 0), q(1, 0, 1), q(1, 0, -1), q(3, 1, 1)] {
            assert_eq!(lattice_dets(&j).unwrap(), lattice_dets_closed(&j));
        }
    }
}
