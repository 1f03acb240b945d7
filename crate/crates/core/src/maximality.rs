//! Explicit p-maximality criteria for the three families and the global decision.

use crate::arith::{cadd, cmul, csub, factor, gcd3, is_squarefree, modp, OddSquarefreeTable};
use crate::error::{Error, Result};
use crate::forms::{disc_quartic, to_form, Family, FamilyCoords};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The clause of a criterion responsible for a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Maximal,
    /// p divides A, B and C.
    Content,
    /// A ≡ 0 mod p² (odd p) or mod 4 (p = 2).
    AVanishes,
    /// C ≡ 0 mod p² (odd p) or mod 4 (p = 2).
    CVanishes,
    /// B² − 4AC ≡ 0 mod p².
    DVanishes,
    /// 4A − 2B + C ≡ 0 mod p².
    UVanishes,
    /// 4A + 2B + C ≡ 0 mod p².
    VVanishes,
    /// (4A − C)² + 4B² ≡ 0 mod p³ when p | 4A − C and p | B.
    NormCube,
    /// (4A − C)² + 4B² ≡ 0 mod p² otherwise.
    NormSquare,
    /// A + B + C ≡ 0 mod 4 with one of A, B, C even.
    SumMod4,
    /// A, B, C all odd with A + B and B + C both nonzero mod 4.
    OddPairs,
    /// 2B + C ≡ 0 mod 4.
    TwoBPlusC,
    /// A − B + C ≡ 0 mod 4 with C odd and B even.
    AlternatingSum,
}

impl Clause {
    pub fn as_str(self) -> &'static str {
        match self {
            Clause::Maximal => "maximal",
            Clause::Content => "content",
            Clause::AVanishes => "a_vanishes",
            Clause::CVanishes => "c_vanishes",
            Clause::DVanishes => "d_vanishes",
            Clause::UVanishes => "u_vanishes",
            Clause::VVanishes => "v_vanishes",
            Clause::NormCube => "norm_cube",
            Clause::NormSquare => "norm_square",
            Clause::SumMod4 => "sum_mod4",
            Clause::OddPairs => "odd_pairs",
            Clause::TwoBPlusC => "two_b_plus_c",
            Clause::AlternatingSum => "alternating_sum",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityReport {
    pub maximal: bool,
    pub failing_prime: Option<u128>,
    pub clause: Clause,
}

/// The criterion at p, evaluated on residues. `inject_bug` drops the second
/// alternative of the all-odd case at p = 2 in family 1 (used to self-test the
/// validation harness).
pub fn criteria(
    fam: Family,
    a: i128,
    b: i128,
    c: i128,
    p: i128,
    inject_bug: bool,
) -> std::result::Result<(), Clause> {
    // residues mod p³ determine every clause; keep them small to avoid overflow
    let m3 = p * p * p;
    let (a, b, c) = (modp(a, m3), modp(b, m3), modp(c, m3));
    let z = |x: i128, m: i128| modp(x, m) == 0;
    if z(a, p) && z(b, p) && z(c, p) {
        return Err(Clause::Content);
    }
    let p2 = p * p;
    let d = b * b - 4 * a * c;
    if p != 2 {
        match fam {
            Family::One => {
                if z(a, p2) {
                    return Err(Clause::AVanishes);
                }
                if z(c, p2) {
                    return Err(Clause::CVanishes);
                }
                if z(d, p2) {
                    return Err(Clause::DVanishes);
                }
            }
            Family::Two => {
                if z(4 * a - 2 * b + c, p2) {
                    return Err(Clause::UVanishes);
                }
                if z(4 * a + 2 * b + c, p2) {
                    return Err(Clause::VVanishes);
                }
                if z(d, p2) {
                    return Err(Clause::DVanishes);
                }
            }
            Family::Three => {
                if z(d, p2) {
                    return Err(Clause::DVanishes);
                }
                let s = 4 * a - c;
                let n = s * s + 4 * b * b;
                if z(s, p) && z(b, p) {
                    if z(n, m3) {
                        return Err(Clause::NormCube);
                    }
                } else if z(n, p2) {
                    return Err(Clause::NormSquare);
                }
            }
        }
        return Ok(());
    }
    let even = |x: i128| x % 2 == 0;
    match fam {
        Family::One => {
            if z(a, 4) {
                return Err(Clause::AVanishes);
            }
            if z(c, 4) {
                return Err(Clause::CVanishes);
            }
            if even(a) || even(b) || even(c) {
                if z(a + b + c, 4) {
                    return Err(Clause::SumMod4);
                }
            } else if !(z(a + b, 4) || (!inject_bug && z(b + c, 4))) {
                return Err(Clause::OddPairs);
            }
        }
        Family::Two | Family::Three => {
            if fam == Family::Two && z(2 * b + c, 4) {
                return Err(Clause::TwoBPlusC);
            }
            if fam == Family::Three && z(c, 4) {
                return Err(Clause::CVanishes);
            }
            if !even(c) && even(b) {
                if z(a, 4) {
                    return Err(Clause::AVanishes);
                }
                if z(a - b + c, 4) {
                    return Err(Clause::AlternatingSum);
                }
            }
        }
    }
    Ok(())
}

pub fn is_maximal_at(c: &FamilyCoords, p: u128) -> bool {
    criteria(c.family, c.a, c.b, c.c, p as i128, false).is_ok()
}

/// Maximality at every prime dividing Δ(F).
pub fn is_maximal(c: &FamilyCoords) -> Result<MaximalityReport> {
    let disc = disc_quartic(&to_form(c)?)?;
    if disc == 0 {
        return Err(Error::Degenerate("zero discriminant"));
    }
    for (p, _) in factor(disc) {
        if let Err(clause) = criteria(c.family, c.a, c.b, c.c, p as i128, false) {
            return Ok(MaximalityReport { maximal: false, failing_prime: Some(p), clause });
        }
    }
    Ok(MaximalityReport { maximal: true, failing_prime: None, clause: Clause::Maximal })
}

/// 1 mod 4 and squarefree, or 4m with m ≡ 2, 3 mod 4 squarefree.
pub fn is_fundamental_discriminant(d: i128) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match modp(d, 4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(modp(m, 4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Maximality decided with a precomputed odd-squarefree table. Equivalent to
/// [`is_maximal`] for odd primes: for families 1 and 2 every odd clause asks that a
/// fixed product be free of p², and for family 3 only primes whose square divides
/// the norm need the full clause. The prime 2 is always checked by the criteria.
pub fn is_maximal_fast(c: &FamilyCoords, table: &OddSquarefreeTable) -> Result<bool> {
    let (a, b, cc) = c.abc();
    let g = crate::arith::odd_part(gcd3(a, b, cc));
    if g != 1 {
        return Ok(false);
    }
    let d = c.d()?;
    let ok = match c.family {
        Family::One => {
            table.odd_squarefree(a) && table.odd_squarefree(cc) && table.odd_squarefree(d)
        }
        Family::Two => {
            let u = cadd(csub(cmul(4, a)?, cmul(2, b)?)?, cc)?;
            let v = cadd(cadd(cmul(4, a)?, cmul(2, b)?)?, cc)?;
            table.odd_squarefree(u) && table.odd_squarefree(v) && table.odd_squarefree(d)
        }
        Family::Three => {
            if !table.odd_squarefree(d) {
                return Ok(false);
            }
            let s = csub(cmul(4, a)?, cc)?;
            let n = cadd(cmul(s, s)?, cmul(4, cmul(b, b)?)?)?;
            if !table.odd_squarefree(n) {
                for (p, e) in factor(n) {
                    if p != 2 && e >= 2 && !is_maximal_at(c, p) {
                        return Ok(false);
                    }
                }
            }
            true
        }
    };
    Ok(ok && is_maximal_at(c, 2))
}
