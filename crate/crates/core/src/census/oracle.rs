//! Class list by brute force: every form in a coefficient box, filtered by the
//! resolvent, Sturm and order-theoretic tests, and merged into GL₂(ℤ)-classes by a
//! bounded orbit search. Shares no code path with the family enumeration.

use crate::arith::{factor, is_square};
use crate::classify::{galois_tag_of_form, is_irreducible, sturm_real_roots, GaloisTag};
use crate::error::Result;
use crate::forms::{act_quartic, disc_quartic, BinQuartForm, GL2Mat};
use crate::order_oracle::{order_from_form, p_maximality_oracle};
use crate::resolvent::resolvent_integer_roots;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleClass {
    /// member of the class found first in the box scan
    pub rep: BinQuartForm,
    pub disc: i128,
    /// |Δ(F)| / |disc K| for the quadratic subfield K attached to the rational
    /// resolvent root; None for V₄
    pub conductor: Option<i128>,
    pub galois: GaloisTag,
    pub r2: u8,
}

fn squarefree_part(n: i128) -> i128 {
    let mut s = n.signum();
    for (p, e) in factor(n) {
        if e % 2 == 1 {
            s *= p as i128;
        }
    }
    s
}

fn field_disc(q: i128) -> i128 {
    let s = squarefree_part(q);
    if s.rem_euclid(4) == 1 {
        s
    } else {
        4 * s
    }
}

fn oracle_conductor(f: &BinQuartForm, disc: i128) -> Result<Option<i128>> {
    let roots = resolvent_integer_roots(f)?;
    if roots.len() != 1 {
        return Ok(None);
    }
    let t = roots[0];
    let q2 = t * t - 4 * f.a4 * f.a0;
    let q1 = f.a3 * f.a3 - 4 * f.a4 * f.a2 + 4 * f.a4 * t;
    let q = if q2 != 0 { q2 } else { q1 };
    if q == 0 || is_square(q) {
        return Ok(None);
    }
    Ok(Some(disc.abs() / field_disc(q).abs()))
}

fn is_maximal_by_oracle(f: &BinQuartForm, disc: i128) -> Result<bool> {
    let o = order_from_form(f)?;
    for (p, e) in factor(disc) {
        if e >= 2 && !p_maximality_oracle(&o, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn generators() -> [GL2Mat; 4] {
    [
        GL2Mat::new(1, 1, 0, 1),
        GL2Mat::new(1, -1, 0, 1),
        GL2Mat::new(0, 1, 1, 0),
        GL2Mat::new(1, 0, 0, -1),
    ]
}

/// Classes of maximal irreducible forms with Galois group V₄, C₄ or D₄ that have a
/// member with all |aᵢ| ≤ h. Orbits are explored through forms of height ≤ cap, so
/// two box forms are merged only when a path of bounded height joins them.
pub fn brute_force_class_oracle(h: i128, cap: i128) -> Result<Vec<OracleClass>> {
    let gens = generators();
    let mut class_of: HashMap<BinQuartForm, usize> = HashMap::new();
    let mut classes = Vec::new();
    let range = -h..=h;
    for a4 in range.clone() {
        for a3 in range.clone() {
            for a2 in range.clone() {
                for a1 in range.clone() {
                    for a0 in range.clone() {
                        let f = BinQuartForm::new(a4, a3, a2, a1, a0);
                        if class_of.contains_key(&f) {
                            continue;
                        }
                        let disc = disc_quartic(&f)?;
                        if disc == 0 || !is_irreducible(&f)? {
                            continue;
                        }
                        let tag = galois_tag_of_form(&f)?;
                        if !matches!(tag, GaloisTag::V4 | GaloisTag::C4 | GaloisTag::D4) {
                            continue;
                        }
                        if !is_maximal_by_oracle(&f, disc)? {
                            continue;
                        }
                        let id = classes.len();
                        let mut queue = VecDeque::from([f]);
                        class_of.insert(f, id);
                        while let Some(g) = queue.pop_front() {
                            for t in &gens {
                                let n = act_quartic(&g, t)?;
                                if n.height() <= cap && !class_of.contains_key(&n) {
                                    class_of.insert(n, id);
                                    queue.push_back(n);
                                }
                            }
                        }
                        let r2 = ((4 - sturm_real_roots(&f)) / 2) as u8;
                        let conductor = match tag {
                            GaloisTag::V4 => None,
                            _ => oracle_conductor(&f, disc)?,
                        };
                        classes.push(OracleClass { rep: f, disc, conductor, galois: tag, r2 });
                    }
                }
            }
        }
    }
    Ok(classes)
}
