//! Lattice-point enumeration in census coordinates.
//!
//! Every family is parametrized by integers (u, v, x) with y = u·v (families 1, 2) or
//! y = u² + v² (family 3) and w = x² − y, so that the conductor is a fixed multiple of
//! y·w and the discriminant a fixed multiple of y·w². Small |y| is enumerated through
//! (u, v) and then x; large y (necessarily positive, with |w| small) through (x, w) and
//! the factorizations of y.

use super::{CensusResult, Filter, Mode};
use crate::arith::{ceil_sqrt, divisors, isqrt, modp};
use crate::error::Result;
use crate::forms::{Family, FamilyCoords};

#[derive(Debug, Clone, Copy)]
pub(super) enum Unit {
    /// all (v, x) for a fixed u with |y| ≤ y0
    Small { fam: Family, u: i128, m: i128, y0: i128, mode: Mode },
    /// all candidates with y > y0 and |x| = x
    Large { fam: Family, x: i128, m: i128, y0: i128, wmax: i128, mode: Mode },
}

fn icbrt(n: i128) -> i128 {
    let mut r = (n as f64).cbrt() as i128;
    while r * r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn split_point(mode: Mode, m: i128) -> i128 {
    match mode {
        Mode::Conductor => icbrt(m * m).max(isqrt(m) + 1),
        Mode::Discriminant => isqrt(m) + 1,
    }
}

/// Largest |w| allowed for a given y.
fn w_bound(mode: Mode, m: i128, y: i128) -> i128 {
    let q = m / y.abs();
    match mode {
        Mode::Conductor => q,
        Mode::Discriminant => isqrt(q),
    }
}

fn within(mode: Mode, m: i128, y: i128, w: i128) -> bool {
    match mode {
        Mode::Conductor => (y * w).abs() <= m,
        Mode::Discriminant => y.abs() * w * w <= m,
    }
}

pub(super) fn work_units(fam: Family, mode: Mode, m: i128) -> Vec<Unit> {
    let y0 = split_point(mode, m);
    let mut out = Vec::new();
    match fam {
        Family::One => {
            for a in 1..=y0 / 4 {
                for u in [4 * a, -4 * a] {
                    out.push(Unit::Small { fam, u, m, y0, mode });
                }
            }
        }
        Family::Two => {
            for a in 1..=y0 {
                for u in [a, -a] {
                    out.push(Unit::Small { fam, u, m, y0, mode });
                }
            }
        }
        Family::Three => {
            let r = isqrt(y0);
            for u in -r..=r {
                out.push(Unit::Small { fam, u, m, y0, mode });
            }
        }
    }
    let wmax = w_bound(mode, m, y0 + 1);
    let xmax = isqrt(m + wmax);
    for x in 0..=xmax {
        out.push(Unit::Large { fam, x, m, y0, wmax, mode });
    }
    out
}

/// Calls `f` on every integer x with lo ≤ |x| ≤ hi and x ≡ r mod md.
fn for_signed_range(lo: i128, hi: i128, r: i128, md: i128, mut f: impl FnMut(i128) -> Result<()>) -> Result<()> {
    if lo > hi {
        return Ok(());
    }
    let start = lo + modp(r - lo, md);
    let mut x = start;
    while x <= hi {
        f(x)?;
        x += md;
    }
    let start = -hi + modp(r + hi, md);
    let mut x = start;
    while x <= -lo {
        if x != 0 {
            f(x)?;
        }
        x += md;
    }
    Ok(())
}

/// Family coordinates from census coordinates, or None when they are not integral.
fn reconstruct(fam: Family, u: i128, v: i128, x: i128) -> Option<FamilyCoords> {
    match fam {
        Family::One => (u % 4 == 0).then(|| FamilyCoords::new(fam, u / 4, x, v)),
        Family::Two => {
            if modp(v - u, 4) != 0 || modp(u + v + 2 * x, 16) != 0 {
                return None;
            }
            let a = (u + v + 2 * x) / 16;
            Some(FamilyCoords::new(fam, a, (v - u) / 4, 4 * a - x))
        }
        Family::Three => {
            if modp(v, 2) != 0 || modp(u + x, 8) != 0 {
                return None;
            }
            Some(FamilyCoords::new(fam, (u + x) / 8, v / 2, (x - u) / 2))
        }
    }
}

/// Residue class forced on x by (u, v), as (r, modulus).
fn x_class(fam: Family, u: i128, v: i128) -> Option<(i128, i128)> {
    match fam {
        Family::One => Some((0, 1)),
        Family::Two => (modp(v - u, 4) == 0).then(|| (modp(-(u + v) / 2, 8), 8)),
        Family::Three => (modp(v, 2) == 0).then(|| (modp(-u, 8), 8)),
    }
}

fn emit(fam: Family, u: i128, v: i128, x: i128, filter: &Filter, out: &mut CensusResult) -> Result<()> {
    if let Some(c) = reconstruct(fam, u, v, x) {
        filter.visit(c, out)?;
    }
    Ok(())
}

fn small_y(fam: Family, u: i128, v: i128, m: i128, mode: Mode, filter: &Filter, out: &mut CensusResult) -> Result<()> {
    let y = match fam {
        Family::Three => u * u + v * v,
        _ => u * v,
    };
    if y == 0 {
        return Ok(());
    }
    let Some((r, md)) = x_class(fam, u, v) else { return Ok(()) };
    let kw = w_bound(mode, m, y);
    if y + kw < 0 {
        return Ok(());
    }
    let lo = ceil_sqrt((y - kw).max(0));
    let hi = isqrt(y + kw);
    // x = 0 is skipped by the signed range when lo = 0
    if lo == 0 && modp(r, md) == 0 {
        emit(fam, u, v, 0, filter, out)?;
    }
    for_signed_range(lo.max(1), hi, r, md, |x| emit(fam, u, v, x, filter, out))
}

pub(super) fn run_unit(unit: &Unit, filter: &Filter, out: &mut CensusResult) -> Result<()> {
    match *unit {
        Unit::Small { fam, u, m, y0, mode } => match fam {
            Family::Three => {
                let r = isqrt(y0 - u * u);
                let mut v = -r + modp(r, 2);
                while v <= r {
                    small_y(fam, u, v, m, mode, filter, out)?;
                    v += 2;
                }
                Ok(())
            }
            _ => {
                let r = y0 / u.abs();
                for v in -r..=r {
                    if v != 0 {
                        small_y(fam, u, v, m, mode, filter, out)?;
                    }
                }
                Ok(())
            }
        },
        Unit::Large { fam, x, m, y0, wmax, mode } => {
            let signs: &[i128] = if x == 0 { &[0] } else { &[1, -1] };
            match fam {
                Family::Three => large_three(x, m, y0, wmax, mode, signs, filter, out),
                _ => {
                    for w in -wmax..=wmax {
                        let y = x * x - w;
                        if w == 0 || y <= y0 || !within(mode, m, y, w) {
                            continue;
                        }
                        if fam == Family::One && y % 4 != 0 {
                            continue;
                        }
                        let base = if fam == Family::One { y / 4 } else { y };
                        for d in divisors(base) {
                            for s in [d, -d] {
                                let (u, v) = match fam {
                                    Family::One => (4 * s, base / s),
                                    _ => (s, y / s),
                                };
                                for &sg in signs {
                                    emit(fam, u, v, sg * x, filter, out)?;
                                }
                            }
                        }
                    }
                    Ok(())
                }
            }
        }
    }
}

/// Family 3 with y = u² + v² > y0: scan u in the class forced by x and solve for v.
#[allow(clippy::too_many_arguments)]
fn large_three(
    x: i128,
    m: i128,
    y0: i128,
    wmax: i128,
    mode: Mode,
    signs: &[i128],
    filter: &Filter,
    out: &mut CensusResult,
) -> Result<()> {
    let xx = x * x;
    let umax = isqrt(xx + wmax);
    for &sg in signs {
        let sx = sg * x;
        let mut u = -umax + modp(-sx + umax, 8);
        while u <= umax {
            let t = xx - u * u;
            let lo = ceil_sqrt((t - wmax).max(0));
            let hi = isqrt((t + wmax).max(0));
            if t + wmax >= 0 {
                let mut v = lo + modp(lo, 2);
                while v <= hi {
                    let vs: &[i128] = if v == 0 { &[0] } else { &[v, -v] };
                    for &vv in vs {
                        let y = u * u + vv * vv;
                        let w = xx - y;
                        if y > y0 && w != 0 && w.abs() <= wmax && within(mode, m, y, w) {
                            emit(Family::Three, u, vv, sx, filter, out)?;
                        }
                    }
                    v += 2;
                }
            }
            u += 8;
        }
    }
    Ok(())
}
