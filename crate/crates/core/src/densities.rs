//! Local densities of non-maximal residue classes and the Euler products built
//! from them.

use crate::arith::{modp, prime_divisors, primes_up_to};
use crate::forms::Family;
use crate::maximality::criteria;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Rho1,
    Rho2,
    Rho2Zero,
    Rho2Prime,
    RhoV4,
}

impl DensityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityKind::Rho1 => "rho1",
            DensityKind::Rho2 => "rho2",
            DensityKind::Rho2Zero => "rho2_zero",
            DensityKind::Rho2Prime => "rho2_prime",
            DensityKind::RhoV4 => "rho_v4",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityTable {
    pub kind: DensityKind,
    pub family: Option<u8>,
    pub a: Option<i128>,
    pub modulus: i128,
    pub rho: u64,
    pub space: u64,
}

fn nonmaximal_everywhere(fam: Family, a: i128, b: i128, c: i128, primes: &[u128]) -> bool {
    primes.iter().all(|&p| criteria(fam, a, b, c, p as i128, false).is_err())
}

/// #{(b, c) mod m² : (a, b, c)₁ is non-maximal at every p | m}.
pub fn rho1(a: i128, m: i128) -> u64 {
    let ps = prime_divisors(m);
    let mm = m * m;
    let mut n = 0;
    for b in 0..mm {
        for c in 0..mm {
            if nonmaximal_everywhere(Family::One, a, b, c, &ps) {
                n += 1;
            }
        }
    }
    n
}

/// #{(r, s) mod m² : (r, s, a − 4r + 2s)₂ is non-maximal at every p | m}.
pub fn rho2(a: i128, m: i128) -> u64 {
    let ps = prime_divisors(m);
    let mm = m * m;
    let mut n = 0;
    for r in 0..mm {
        for s in 0..mm {
            if nonmaximal_everywhere(Family::Two, r, s, a - 4 * r + 2 * s, &ps) {
                n += 1;
            }
        }
    }
    n
}

fn iota_integral(a: i128, b: i128, c: i128) -> bool {
    modp(a + b + c, 16) == 0 && modp(c - a, 4) == 0 && modp(a - b + c, 4) == 0
}

/// #{(b, c) mod 16 : ι(a, b, c) is integral}.
pub fn rho2_zero(a: i128) -> u64 {
    let mut n = 0;
    for b in 0..16 {
        for c in 0..16 {
            if iota_integral(a, b, c) {
                n += 1;
            }
        }
    }
    n
}

/// #{(b, c) mod 16m² : ι(a, b, c) integral and its first two coordinates, reduced
/// mod m², lie in the set counted by [`rho2`]}.
pub fn rho2_prime(a: i128, m: i128) -> u64 {
    let ps = prime_divisors(m);
    let big = 16 * m * m;
    let mut n = 0;
    for c in 0..big {
        if modp(c - a, 4) != 0 {
            continue;
        }
        // a + b + c ≡ 0 mod 16 pins b mod 16
        let mut b = modp(-a - c, 16);
        while b < big {
            if iota_integral(a, b, c) {
                let r = (a + b + c) / 16;
                let s = (c - a) / 4;
                if nonmaximal_everywhere(Family::Two, r, s, a - 4 * r + 2 * s, &ps) {
                    n += 1;
                }
            }
            b += 16;
        }
    }
    n
}

/// #{(a, b) mod m² : (a, b, a)₁ is non-maximal at every p | m}.
pub fn rho_v4(m: i128) -> u64 {
    let ps = prime_divisors(m);
    let mm = m * m;
    let mut n = 0;
    for a in 0..mm {
        for b in 0..mm {
            if nonmaximal_everywhere(Family::One, a, b, a, &ps) {
                n += 1;
            }
        }
    }
    n
}

pub fn density_table(kind: DensityKind, a: i128, m: i128) -> DensityTable {
    let (fam, rho, space) = match kind {
        DensityKind::Rho1 => (Some(1), rho1(a, m), (m * m * m * m) as u64),
        DensityKind::Rho2 => (Some(2), rho2(a, m), (m * m * m * m) as u64),
        DensityKind::Rho2Zero => (Some(2), rho2_zero(a), 256),
        DensityKind::Rho2Prime => (Some(2), rho2_prime(a, m), (256 * m * m * m * m) as u64),
        DensityKind::RhoV4 => (None, rho_v4(m), (m * m * m * m) as u64),
    };
    let modulus = if kind == DensityKind::Rho2Zero { 16 } else { m };
    let a = if kind == DensityKind::RhoV4 { None } else { Some(a) };
    DensityTable { kind, family: fam, a, modulus, rho, space }
}

/// Closed forms for a prime modulus (squarefree a).
pub fn closed_form(kind: DensityKind, p: i128) -> u64 {
    let v = match (kind, p) {
        (DensityKind::Rho1, 2) => 8,
        (DensityKind::Rho2, 2) => 4,
        (DensityKind::Rho1 | DensityKind::Rho2, p) => p * (2 * p - 1),
        (DensityKind::Rho2Zero, _) => 4,
        (DensityKind::Rho2Prime, 2) => 16,
        (DensityKind::Rho2Prime, p) => 4 * p * (2 * p - 1),
        (DensityKind::RhoV4, 2) => 10,
        (DensityKind::RhoV4, p) => p * (4 * p - 3),
    };
    v as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductKind {
    /// ∏ (1 − (2p − 1)/p³)
    Carefree,
    /// ∏ (1 − (4p − 3)/p³)
    V4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerProduct {
    pub value: f64,
    pub tail_bound: f64,
    pub prime_limit: u64,
}

/// Partial product over p ≤ limit. The full product lies in
/// [value − tail_bound, value]: the omitted factors are in (0, 1) and
/// Σ_{p>L} k/p² ≤ Σ_{odd n>L} k/n² ≤ k/(2(L − 1)) with k = 2 or 4.
pub fn euler_product(kind: ProductKind, prime_limit: u64) -> EulerProduct {
    assert!(prime_limit >= 2, "prime limit must be at least 2");
    let mut v = 1.0f64;
    for p in primes_up_to(prime_limit as usize) {
        let p = p as f64;
        let num = match kind {
            ProductKind::Carefree => 2.0 * p - 1.0,
            ProductKind::V4 => 4.0 * p - 3.0,
        };
        v *= 1.0 - num / (p * p * p);
    }
    let k = match kind {
        ProductKind::Carefree => 2.0,
        ProductKind::V4 => 4.0,
    };
    let s = k / (2.0 * (prime_limit as f64 - 1.0));
    EulerProduct { value: v, tail_bound: v * s, prime_limit }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_values() {
        assert_eq!(rho1(1, 3), 15);
        assert_eq!(rho1(1, 2), 8);
        assert_eq!(rho1(1, 1), 1);
        assert_eq!(rho2_zero(1), 4);
        assert_eq!(rho2(1, 3), 15);
        assert_eq!(rho2_prime(1, 3), 60);
        assert_eq!(rho2(1, 2), 4);
        assert_eq!(rho_v4(3), 27);
        // the criteria give 10 at p = 2, matching the factor 1 − 5/8 of the V₄ product
        assert_eq!(rho_v4(2), 10);
        assert_eq!(rho_v4(6), 270);
    }

    #[test]
    fn products() {
        let e = euler_product(ProductKind::Carefree, 2);
        assert!((e.value - 0.625).abs() < 1e-15);
        let e = euler_product(ProductKind::Carefree, 100_000);
        assert!((e.value - 0.428_249_5).abs() < 2e-5);
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((e.value * z2 - 0.704_442).abs() < 3e-5);
        let v = euler_product(ProductKind::V4, 100_000);
        assert!(v.value > 0.17 && v.value < 0.19, "{}", v.value);
    }
}
