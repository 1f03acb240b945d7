//! Small exact linear algebra over Z and F_p.

use crate::arith::{cadd, cmul, csub};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Mat = Vec<Vec<i128>>;

/// Extended gcd: (g, s, t) with s·a + t·b = g ≥ 0.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Basis (as vectors) of the saturated integer kernel {v ∈ Zⁿ : A·v = 0}.
pub fn integer_kernel(a: &Mat, n: usize) -> Result<Vec<Vec<i128>>> {
    let mut a = a.clone();
    let mut u: Mat = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let mut k = 0usize;
    for i in 0..a.len() {
        if k >= n {
            break;
        }
        for j in (k + 1)..n {
            let (x, y) = (a[i][k], a[i][j]);
            if y == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(x, y);
            let (p, q) = (-y / g, x / g);
            // col_k ← s·col_k + t·col_j ; col_j ← p·col_k + q·col_j
            let m = a.len();
            for r in 0..m {
                let (ck, cj) = (a[r][k], a[r][j]);
                a[r][k] = cadd(cmul(s, ck)?, cmul(t, cj)?)?;
                a[r][j] = cadd(cmul(p, ck)?, cmul(q, cj)?)?;
            }
            for r in 0..n {
                let (ck, cj) = (u[r][k], u[r][j]);
                u[r][k] = cadd(cmul(s, ck)?, cmul(t, cj)?)?;
                u[r][j] = cadd(cmul(p, ck)?, cmul(q, cj)?)?;
            }
        }
        if a[i][k] != 0 {
            k += 1;
        }
    }
    Ok((k..n).map(|c| (0..n).map(|r| u[r][c]).collect()).collect())
}

/// Row Hermite normal form of the lattice spanned by `rows` (assumed full rank n).
pub fn hnf_rows(rows: &[Vec<i128>], n: usize) -> Result<Mat> {
    let mut m: Mat = rows.to_vec();
    let mut out: Mat = Vec::with_capacity(n);
    for col in 0..n {
        // gcd-combine all remaining rows on this column into one pivot row
        let mut piv: Option<Vec<i128>> = None;
        let mut rest: Mat = Vec::new();
        for r in m.into_iter() {
            if r[col] == 0 {
                rest.push(r);
                continue;
            }
            match piv.take() {
                None => piv = Some(r),
                Some(p) => {
                    let (g, s, t) = ext_gcd(p[col], r[col]);
                    let (a, b) = (p[col] / g, r[col] / g);
                    let mut np = vec![0i128; n];
                    let mut nr = vec![0i128; n];
                    for c in 0..n {
                        np[c] = cadd(cmul(s, p[c])?, cmul(t, r[c])?)?;
                        nr[c] = csub(cmul(a, r[c])?, cmul(b, p[c])?)?;
                    }
                    piv = Some(np);
                    rest.push(nr);
                }
            }
        }
        let mut p = piv.ok_or(Error::Degenerate("lattice not of full rank"))?;
        if p[col] < 0 {
            for x in p.iter_mut() {
                *x = -*x;
            }
        }
        // reduce entries above the pivot
        for prev in out.iter_mut() {
            let q = prev[col].div_euclid(p[col]);
            if q != 0 {
                for c in 0..n {
                    prev[c] = csub(prev[c], cmul(q, p[c])?)?;
                }
            }
        }
        out.push(p);
        m = rest;
    }
    Ok(out)
}

/// Determinant by cofactor expansion (fine for n ≤ 5).
pub fn det_i128(m: &Mat) -> Result<i128> {
    let n = m.len();
    if n == 1 {
        return Ok(m[0][0]);
    }
    let mut acc = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Mat = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
            .collect();
        let t = cmul(m[0][j], det_i128(&minor)?)?;
        acc = if j % 2 == 0 { cadd(acc, t)? } else { csub(acc, t)? };
    }
    Ok(acc)
}

/// Bareiss determinant over BigInt.
pub fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub fn inv_mod(a: i128, p: i128) -> i128 {
    let (_, s, _) = ext_gcd(a.rem_euclid(p), p);
    s.rem_euclid(p)
}

/// Basis of the right kernel {v : M·v = 0} over F_p; M has `n` columns.
pub fn kernel_mod_p(m: &Mat, n: usize, p: i128) -> Vec<Vec<i128>> {
    let mut a: Mat = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        let Some(r) = (row..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, r);
        let inv = inv_mod(a[row][col], p);
        for x in a[row].iter_mut() {
            *x = (*x * inv) % p;
        }
        for r2 in 0..a.len() {
            if r2 != row && a[r2][col] != 0 {
                let f = a[r2][col];
                for c in 0..n {
                    a[r2][c] = (a[r2][c] - f * a[row][c]).rem_euclid(p);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0i128; n];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (-a[r][fc]).rem_euclid(p);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_basic() {
        let k = integer_kernel(&vec![vec![2, -1, 2]], 3).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(2 * v[0] - v[1] + 2 * v[2], 0);
        }
        // saturation: the kernel lattice has index 1 in its rational span
        let m = vec![k[0].clone(), k[1].clone(), vec![0, -1, 0]];
        assert_eq!(det_i128(&m).unwrap().abs(), 1);
    }

    #[test]
    fn hnf_index() {
        let rows = vec![vec![2, 4, 0], vec![0, 3, 0], vec![0, 0, 5], vec![2, 1, 0]];
        let h = hnf_rows(&rows, 3).unwrap();
        assert_eq!(det_i128(&h).unwrap().abs(), 30);
    }

    #[test]
    fn modp_kernel() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let k = kernel_mod_p(&m, 3, 7);
        assert_eq!(k.len(), 2);
        for v in k {
            assert_eq!((v[0] + 2 * v[1] + 3 * v[2]) % 7, 0);
        }
    }

    #[test]
    fn bareiss() {
        let m: Vec<Vec<BigInt>> = vec![vec![2, 3, 1], vec![4, 1, -2], vec![0, 5, 7]]
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        let d = det_i128(&vec![vec![2, 3, 1], vec![4, 1, -2], vec![0, 5, 7]]).unwrap();
        assert_eq!(det_big(&m), BigInt::from(d));
    }
}
