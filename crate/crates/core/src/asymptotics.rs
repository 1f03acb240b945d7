//! Leading constants of the counting theorems, assembled from an independent Γ
//! routine, adaptive quadrature and the Euler products.

use crate::densities::{euler_product, ProductKind};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) by the Lanczos approximation (g = 7, nine terms) with reflection below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature on [a, b] with absolute tolerance `tol`.
/// Returns the value and the summed error estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let mut stack = vec![(a, b, tol, 0u32)];
    let (mut total, mut err) = (0.0, 0.0);
    while let Some((lo, hi, t, depth)) = stack.pop() {
        let (v, e) = gk15(&f, lo, hi);
        if e <= t || depth >= 50 {
            total += v;
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * t, depth + 1));
            stack.push((mid, hi, 0.5 * t, depth + 1));
        }
    }
    (total, err)
}

const TOL: f64 = 1e-13;

/// Γ(1/4)²/√π, the common factor of every closed form below.
pub fn lemniscate_factor() -> f64 {
    gamma(0.25).powi(2) / PI.sqrt()
}

/// (∫₁^∞ dz/√(z⁴+1), ∫₁^∞ dz/√(z⁴−1)) by quadrature.
pub fn elliptic_integrals() -> (f64, f64) {
    // z = 1/t
    let (ip, _) = integrate(|t| 1.0 / (1.0 + t.powi(4)).sqrt(), 0.0, 1.0, TOL);
    // z = 1 + t², then t = 1/s on the tail
    let g = |t: f64| 2.0 / ((2.0 + t * t) * ((1.0 + t * t).powi(2) + 1.0)).sqrt();
    let h = |s: f64| {
        let s2 = s * s;
        2.0 * s / ((2.0 * s2 + 1.0) * ((s2 + 1.0).powi(2) + s2 * s2)).sqrt()
    };
    let (a, _) = integrate(g, 0.0, 1.0, TOL);
    let (b, _) = integrate(h, 0.0, 1.0, TOL);
    (ip, a + b)
}

/// Closed forms Γ(1/4)²/(8√π) and √2·Γ(1/4)²/(8√π).
pub fn elliptic_closed_forms() -> (f64, f64) {
    let l = lemniscate_factor() / 8.0;
    (l, SQRT_2 * l)
}

/// The three integrals ∫₀¹√(z⁴+1), ∫₁^{√2T}(√(z⁴+1) − z²), ∫₁^{√2T}(√(z⁴+1) − √(z⁴−1)).
pub fn preliminary_integrals(t: f64) -> [f64; 3] {
    let up = SQRT_2 * t;
    let (i1, _) = integrate(|z| (z.powi(4) + 1.0).sqrt(), 0.0, 1.0, TOL);
    // rationalized integrands avoid cancellation for large z
    let (i2, _) = integrate(|z| 1.0 / ((z.powi(4) + 1.0).sqrt() + z * z), 1.0, up, TOL);
    // the third integrand has a √(z−1) cusp at 1; substitute z = 1 + u²
    let top = (up - 1.0).sqrt();
    let (i3, _) = integrate(
        |u| {
            let z = 1.0 + u * u;
            let z4 = z.powi(4);
            2.0 * u * 2.0 / ((z4 + 1.0).sqrt() + (z4 - 1.0).sqrt())
        },
        0.0,
        top,
        TOL,
    );
    [i1, i2, i3]
}

/// Limits of the three preliminary integrals as T → ∞.
pub fn preliminary_closed_forms() -> [f64; 3] {
    let l = lemniscate_factor() / 4.0;
    [
        (SQRT_2 + l) / 3.0,
        (-1.0 / (SQRT_2 + 1.0) + l) / 3.0,
        (-SQRT_2 + (1.0 + SQRT_2) * l) / 3.0,
    ]
}

/// 𝔰(r₂) for the per-signature regions.
pub fn s_factor(r2: u8) -> f64 {
    if r2 == 0 {
        SQRT_2
    } else {
        1.0
    }
}

/// 𝔯(r₂) of the conductor main term.
pub fn r_factor(r2: u8) -> f64 {
    match r2 {
        0 => 1.0,
        1 => SQRT_2,
        _ => 1.0 + SQRT_2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaConstants {
    /// Leading coefficients of Area(R^{(r₂)}(X))/X^{3/4} for r₂ = 0, 1, 2.
    pub per_r2: [f64; 3],
    pub total: f64,
}

pub fn area_constants() -> AreaConstants {
    let base = SQRT_2 * lemniscate_factor() / 3.0;
    let per_r2 = [0u8, 1, 2].map(|r| s_factor(r) * base);
    AreaConstants { per_r2, total: (2.0 + 2.0 * SQRT_2) * lemniscate_factor() / 3.0 }
}

/// Proportions 𝔯(r₂)/(𝔯(0) + 𝔯(1) + 𝔯(2)).
pub fn r2_proportions() -> [f64; 3] {
    let s: f64 = (0..3).map(r_factor).sum();
    [0u8, 1, 2].map(|r| r_factor(r) / s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    D4Conductor,
    V4Disc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainTerm {
    pub theorem: Theorem,
    pub x: f64,
    pub r2: Option<u8>,
    pub value: f64,
    pub gamma_factor: f64,
    pub zeta_factor: f64,
    pub euler_product: f64,
    pub r_factor: f64,
}

pub const DEFAULT_PRIME_LIMIT: u64 = 10_000_000;

/// The displayed main term. With `r2 = None` the D₄ term is summed over r₂.
pub fn main_term(theorem: Theorem, x: f64, r2: Option<u8>, prime_limit: u64) -> MainTerm {
    match theorem {
        Theorem::D4Conductor => {
            let gamma_factor = SQRT_2 * lemniscate_factor() / 48.0;
            let zeta_factor = 6.0 / (PI * PI);
            let p = euler_product(ProductKind::Carefree, prime_limit).value;
            let r = r2.map_or(2.0 + 2.0 * SQRT_2, r_factor);
            let value = r * zeta_factor * gamma_factor * p * x.powf(0.75) * x.ln();
            MainTerm { theorem, x, r2, value, gamma_factor, zeta_factor, euler_product: p, r_factor: r }
        }
        Theorem::V4Disc => {
            let gamma_factor = 7.0 / 8.0 * gamma(1.0 / 3.0).powi(2) / gamma(2.0 / 3.0);
            let p = euler_product(ProductKind::V4, prime_limit).value;
            let value = gamma_factor * p * x.cbrt();
            MainTerm { theorem, x, r2: None, value, gamma_factor, zeta_factor: 1.0, euler_product: p, r_factor: 1.0 }
        }
    }
}

/// (3/4)·Γ(1/3)²/Γ(2/3)·∏_p (1 − ρ₀(p)/p⁴)·X^{1/3} with ρ₀(p) = p(4p − 3) for odd p and
/// the given value at p = 2. With ρ₀(2) = 9 this is the V₄ term of [`main_term`].
pub fn v4_main_term_with_rho2(x: f64, rho0_2: u64, prime_limit: u64) -> f64 {
    let p = euler_product(ProductKind::V4, prime_limit).value;
    // the product above carries 1 − 5/8 at p = 2
    let at2 = (1.0 - rho0_2 as f64 / 16.0) / (3.0 / 8.0);
    0.75 * gamma(1.0 / 3.0).powi(2) / gamma(2.0 / 3.0) * p * at2 * x.cbrt()
}

/// Monte-Carlo estimate of Area(R^{(r₂)}(X))/X^{3/4} for the region
/// |y|, |x² − y| ≥ 1, |y(x² − y)| < X, |x| ≤ cutoff·X^{1/4}, using a caller-supplied
/// uniform sampler on [0, 1). For each sampled x, y is drawn uniformly from the
/// interval where y(x² − y) > −X, which contains the x-slice of the region.
pub fn monte_carlo_area<R: FnMut() -> f64>(x_bound: f64, cutoff: f64, samples: u64, mut uniform: R) -> [f64; 3] {
    let xmax = cutoff * x_bound.powf(0.25);
    let mut acc = [0f64; 3];
    for _ in 0..samples {
        let x = (2.0 * uniform() - 1.0) * xmax;
        let x2 = x * x;
        let len = (x2 * x2 + 4.0 * x_bound).sqrt();
        let y = 0.5 * (x2 - len) + uniform() * len;
        let w = x2 - y;
        if y.abs() < 1.0 || w.abs() < 1.0 || (y * w).abs() >= x_bound {
            continue;
        }
        let r = if y < 0.0 {
            1
        } else if w > 0.0 {
            0
        } else {
            2
        };
        acc[r] += len;
    }
    let scale = 2.0 * xmax / samples as f64 / x_bound.powf(0.75);
    acc.map(|a| a * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        // duplication: Γ(x)Γ(x+½) = 2^{1−2x}√π Γ(2x)
        for x in [0.25, 1.0 / 3.0, 0.7, 2.3] {
            let l = gamma(x) * gamma(x + 0.5);
            let r = 2f64.powf(1.0 - 2.0 * x) * PI.sqrt() * gamma(2.0 * x);
            assert!((l / r - 1.0).abs() < 1e-13, "{x}");
        }
    }

    #[test]
    fn elliptic() {
        let (p, m) = elliptic_integrals();
        let (cp, cm) = elliptic_closed_forms();
        assert!((p - cp).abs() < 1e-9);
        assert!((m - cm).abs() < 1e-9);
        assert!(p < 1.0 && 1.0 < m);
    }

    #[test]
    fn preliminaries_converge() {
        let c = preliminary_closed_forms();
        assert!((c[0] - 1.089_429).abs() < 1e-6);
        let mut prev = f64::INFINITY;
        for t in [10.0, 100.0, 1000.0] {
            let v = preliminary_integrals(t);
            assert!((v[0] - c[0]).abs() < 1e-10);
            let e = (v[1] - c[1]).abs().max((v[2] - c[2]).abs());
            assert!(e < 1.0 / t && e < prev, "{t}: {e}");
            prev = e;
        }
    }

    #[test]
    fn v4_terms() {
        let stated = main_term(Theorem::V4Disc, 1e9, None, 100_000).value;
        let nine = v4_main_term_with_rho2(1e9, 9, 100_000);
        assert!((stated / nine - 1.0).abs() < 1e-12);
        let ten = v4_main_term_with_rho2(1e9, 10, 100_000);
        assert!((ten / nine - 6.0 / 7.0).abs() < 1e-12);
    }
}
