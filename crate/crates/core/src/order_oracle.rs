//! The quartic ring of a binary quartic form, built from its Birch–Merriman basis,
//! and a p-maximality test by the radical and its ring of multipliers.

use crate::arith::{cadd, cmul};
use crate::error::{Error, Result};
use crate::forms::{act_quartic, disc_quartic, BinQuartForm, GL2Mat};
use crate::linalg::{det_big, hnf_rows, kernel_mod_p};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Multiplication table of a rank-4 ring with basis e₀ = 1, e₁, e₂, e₃:
/// eᵢ·eⱼ = Σₖ mult[i][j][k]·eₖ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuarticOrderTable {
    pub mult: [[[i128; 4]; 4]; 4],
}

fn q(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn to_i128(x: &BigRational) -> Result<i128> {
    if !x.is_integer() {
        return Err(Error::NonIntegral("structure constant"));
    }
    x.to_integer().to_i128().ok_or(Error::Overflow)
}

/// A form equivalent to F with nonzero leading coefficient.
fn with_leading(f: &BinQuartForm) -> Result<BinQuartForm> {
    if f.a4 != 0 {
        return Ok(*f);
    }
    for k in 1..=4 {
        let g = act_quartic(f, &GL2Mat::new(1, 0, k, 1))?;
        if g.a4 != 0 {
            return Ok(g);
        }
    }
    Err(Error::ZeroLeading)
}

/// Q_F with ζ₁ = a₄θ, ζ₂ = a₄θ² + a₃θ, ζ₃ = a₄θ³ + a₃θ² + a₂θ. A form with a₄ = 0 is
/// first moved to an equivalent one with a₄ ≠ 0 (equivalent forms give isomorphic rings).
pub fn order_from_form(f: &BinQuartForm) -> Result<QuarticOrderTable> {
    if f.coeffs().iter().all(|&x| x == 0) {
        return Err(Error::ZeroLeading);
    }
    let f = with_leading(f)?;
    let [a4, a3, a2, a1, a0] = f.coeffs();
    // basis vectors in powers of θ
    let zeta: [[i128; 4]; 4] = [[1, 0, 0, 0], [0, a4, 0, 0], [0, a3, a4, 0], [0, a2, a3, a4]];
    // θ⁴ = −(a₃θ³ + a₂θ² + a₁θ + a₀)/a₄
    let red: Vec<BigRational> = [a0, a1, a2, a3]
        .iter()
        .map(|&x| -q(x) / q(a4))
        .collect();
    let mut mult = [[[0i128; 4]; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let mut prod = vec![BigRational::zero(); 7];
            for (s, &x) in zeta[i].iter().enumerate() {
                for (t, &y) in zeta[j].iter().enumerate() {
                    prod[s + t] += q(x) * q(y);
                }
            }
            for deg in (4..7).rev() {
                let top = std::mem::replace(&mut prod[deg], BigRational::zero());
                if top.is_zero() {
                    continue;
                }
                for k in 0..4 {
                    prod[deg - 4 + k] += &top * &red[k];
                }
            }
            // back-substitute in the triangular basis (column k has top entry at θᵏ)
            let mut coef = vec![BigRational::zero(); 4];
            for k in (0..4).rev() {
                let mut v = prod[k].clone();
                for l in (k + 1)..4 {
                    v -= &coef[l] * q(zeta[l][k]);
                }
                coef[k] = v / q(zeta[k][k]);
            }
            for k in 0..4 {
                let v = to_i128(&coef[k])?;
                mult[i][j][k] = v;
                mult[j][i][k] = v;
            }
        }
    }
    Ok(QuarticOrderTable { mult })
}

impl QuarticOrderTable {
    /// Product of two elements in basis coordinates.
    pub fn mul(&self, x: &[i128; 4], y: &[i128; 4]) -> Result<[i128; 4]> {
        let mut out = [0i128; 4];
        for i in 0..4 {
            if x[i] == 0 {
                continue;
            }
            for j in 0..4 {
                if y[j] == 0 {
                    continue;
                }
                let s = cmul(x[i], y[j])?;
                for k in 0..4 {
                    out[k] = cadd(out[k], cmul(s, self.mult[i][j][k])?)?;
                }
            }
        }
        Ok(out)
    }

    fn mul_mod(&self, x: &[i128; 4], y: &[i128; 4], p: i128) -> [i128; 4] {
        let mut out = [0i128; 4];
        for i in 0..4 {
            for j in 0..4 {
                let s = x[i] * y[j] % p;
                if s == 0 {
                    continue;
                }
                for k in 0..4 {
                    out[k] = (out[k] + s * self.mult[i][j][k].rem_euclid(p)) % p;
                }
            }
        }
        out
    }

    /// Trace of multiplication by eᵢ.
    pub fn traces(&self) -> Result<[i128; 4]> {
        let mut t = [0i128; 4];
        for (i, ti) in t.iter_mut().enumerate() {
            for k in 0..4 {
                *ti = cadd(*ti, self.mult[i][k][k])?;
            }
        }
        Ok(t)
    }

    /// Identity element is e₀, commutativity and associativity on basis triples.
    pub fn is_valid_ring(&self) -> Result<bool> {
        let e = |i: usize| {
            let mut v = [0i128; 4];
            v[i] = 1;
            v
        };
        for i in 0..4 {
            if self.mult[0][i] != e(i) {
                return Ok(false);
            }
            for j in 0..4 {
                if self.mult[i][j] != self.mult[j][i] {
                    return Ok(false);
                }
                for k in 0..4 {
                    let l = self.mul(&self.mult[i][j], &e(k))?;
                    let r = self.mul(&e(i), &self.mult[j][k])?;
                    if l != r {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Determinant of the trace form.
pub fn order_disc(o: &QuarticOrderTable) -> Result<BigInt> {
    let tr = o.traces()?;
    let mut g = vec![vec![BigInt::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = BigInt::zero();
            for k in 0..4 {
                s += BigInt::from(o.mult[i][j][k]) * BigInt::from(tr[k]);
            }
            g[i][j] = s;
        }
    }
    Ok(det_big(&g))
}

/// Basis of the p-radical as rows in Hermite form.
fn radical_basis(o: &QuarticOrderTable, p: i128) -> Result<Vec<Vec<i128>>> {
    let mut pe = p;
    while pe < 4 {
        pe *= p;
    }
    // matrix of x ↦ x^{pᵉ} on o/p (Frobenius is additive in characteristic p)
    let mut cols: Vec<[i128; 4]> = Vec::with_capacity(4);
    for i in 0..4 {
        let mut base = [0i128; 4];
        base[i] = 1;
        let mut r = [1i128 % p, 0, 0, 0];
        let mut e = pe;
        while e > 0 {
            if e & 1 == 1 {
                r = o.mul_mod(&r, &base, p);
            }
            base = o.mul_mod(&base, &base, p);
            e >>= 1;
        }
        cols.push(r);
    }
    let m: Vec<Vec<i128>> = (0..4).map(|r| (0..4).map(|c| cols[c][r]).collect()).collect();
    let mut rows = kernel_mod_p(&m, 4, p);
    for i in 0..4 {
        let mut v = vec![0i128; 4];
        v[i] = p;
        rows.push(v);
    }
    hnf_rows(&rows, 4)
}

/// Coordinates of y in the triangular basis `b` (rows), which must span a lattice
/// containing y.
fn coords_in(b: &[Vec<i128>], y: &[i128; 4]) -> Result<[i128; 4]> {
    let mut rest = *y;
    let mut out = [0i128; 4];
    for k in 0..4 {
        if rest[k] % b[k][k] != 0 {
            return Err(Error::Internal("element outside the radical lattice"));
        }
        let l = rest[k] / b[k][k];
        out[k] = l;
        for c in k..4 {
            rest[c] -= l * b[k][c];
        }
    }
    Ok(out)
}

/// Kernel over F_p of x ↦ (multiplication by x on I_p / p·I_p). The multiplier ring of
/// the radical is o + (1/p)·(lift of this kernel).
fn multiplier_kernel(o: &QuarticOrderTable, p: i128) -> Result<Vec<Vec<i128>>> {
    let rad = radical_basis(o, p)?;
    // 16 rows (radical generator j, coordinate k), 4 columns (basis element i)
    let mut m = vec![vec![0i128; 4]; 16];
    for i in 0..4 {
        let mut ei = [0i128; 4];
        ei[i] = 1;
        for (j, bj) in rad.iter().enumerate() {
            let bj4 = [bj[0], bj[1], bj[2], bj[3]];
            let prod = o.mul(&ei, &bj4)?;
            let c = coords_in(&rad, &prod)?;
            for k in 0..4 {
                m[4 * j + k][i] = c[k].rem_euclid(p);
            }
        }
    }
    Ok(kernel_mod_p(&m, 4, p))
}

/// True iff Z_p ⊗ o is maximal.
pub fn p_maximality_oracle(o: &QuarticOrderTable, p: u128) -> Result<bool> {
    Ok(multiplier_kernel(o, p as i128)?.is_empty())
}

/// log_p of the index of o in the multiplier ring of its p-radical.
pub fn multiplier_ring_index(o: &QuarticOrderTable, p: u128) -> Result<u32> {
    Ok(multiplier_kernel(o, p as i128)?.len() as u32)
}

/// Discriminant of the multiplier ring O′ ⊇ o, computed from the trace form on a
/// basis of O′ (rational a priori; integral because O′ is a ring).
pub fn multiplier_ring_disc(o: &QuarticOrderTable, p: u128) -> Result<BigRational> {
    let p = p as i128;
    let ker = multiplier_kernel(o, p)?;
    let mut rows: Vec<Vec<i128>> = ker;
    for i in 0..4 {
        let mut v = vec![0i128; 4];
        v[i] = p;
        rows.push(v);
    }
    // O′ = (1/p)·span(rows)
    let h = hnf_rows(&rows, 4)?;
    let tr = o.traces()?;
    let mut g = vec![vec![BigRational::zero(); 4]; 4];
    let pp = q(p) * q(p);
    for i in 0..4 {
        for j in 0..4 {
            let a = [h[i][0], h[i][1], h[i][2], h[i][3]];
            let b = [h[j][0], h[j][1], h[j][2], h[j][3]];
            let prod = o.mul(&a, &b)?;
            let mut s = BigInt::zero();
            for k in 0..4 {
                s += BigInt::from(prod[k]) * BigInt::from(tr[k]);
            }
            g[i][j] = BigRational::from_integer(s) / &pp;
        }
    }
    Ok(rational_det(g))
}

fn rational_det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if r != k {
            a.swap(r, k);
            det = -det;
        }
        det *= a[k][k].clone();
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// True iff order_disc(order_from_form(F)) = Δ(F).
pub fn disc_identity_holds(f: &BinQuartForm) -> Result<bool> {
    let o = order_from_form(f)?;
    Ok(order_disc(&o)? == BigInt::from(disc_quartic(f)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monic_power_basis() {
        let o = order_from_form(&BinQuartForm::new(1, 0, 0, 0, -2)).unwrap();
        // θ·θ³ = θ⁴ = 2
        assert_eq!(o.mult[1][3], [2, 0, 0, 0]);
        assert_eq!(o.mult[2][2], [2, 0, 0, 0]);
        assert_eq!(o.mult[1][1], [0, 0, 1, 0]);
        assert!(o.is_valid_ring().unwrap());
        assert_eq!(order_disc(&o).unwrap(), BigInt::from(-2048));
    }

    #[test]
    fn disc_examples() {
        let f = crate::forms::to_form(&crate::forms::FamilyCoords::new(crate::forms::Family::One, 1, 1, -1)).unwrap();
        assert_eq!(order_disc(&order_from_form(&f).unwrap()).unwrap(), BigInt::from(-400));
        for v in [[3, -1, 4, 1, -5], [2, 7, -1, 8, 2], [0, 1, 2, 3, 5], [-6, 0, 5, 0, 9]] {
            assert!(disc_identity_holds(&BinQuartForm::from_coeffs(v)).unwrap(), "{v:?}");
        }
    }

    #[test]
    fn maximality_examples() {
        let o = order_from_form(&BinQuartForm::new(1, 0, 0, 0, -2)).unwrap();
        assert!(p_maximality_oracle(&o, 5).unwrap());
        assert!(p_maximality_oracle(&o, 2).unwrap());
        let o = order_from_form(&BinQuartForm::new(9, 0, 0, 0, 1)).unwrap();
        assert!(!p_maximality_oracle(&o, 3).unwrap());
        // θ²/2 is integral but not in the order
        let o = order_from_form(&BinQuartForm::new(1, 0, 0, 0, 12)).unwrap();
        assert!(!p_maximality_oracle(&o, 2).unwrap());
        let k = multiplier_ring_index(&o, 2).unwrap();
        let d = order_disc(&o).unwrap();
        let d2 = multiplier_ring_disc(&o, 2).unwrap();
        assert!(d2.is_integer());
        assert_eq!(BigRational::from_integer(d), d2 * q(1i128 << (2 * k)));
    }
}
