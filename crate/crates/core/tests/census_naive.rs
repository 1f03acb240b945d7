use quartic_census::census::{run_census, CensusConfig, Mode};
use quartic_census::classify::{canonical_status, galois_tag, sturm_real_roots};
use quartic_census::forms::{to_form, Family, FamilyCoords};
use quartic_census::maximality::is_maximal;
use quartic_census::resolvent::conductor_poly;
use quartic_census::GaloisTag;

fn consider(c: FamilyCoords, x: i128, mode: Mode, tag: GaloisTag, counts: &mut [[u64; 3]; 3]) {
    let Ok(cond) = conductor_poly(&c) else { return };
    let d = c.d().unwrap();
    if cond == 0 || d == 0 {
        return;
    }
    let size = match mode {
        Mode::Conductor => cond.abs(),
        Mode::Discriminant => (cond * d).abs(),
    };
    if size >= x || canonical_status(&c).is_none() {
        return;
    }
    if !is_maximal(&c).unwrap().maximal || galois_tag(&c).unwrap() != tag {
        return;
    }
    let r2 = (4 - sturm_real_roots(&to_form(&c).unwrap())) / 2;
    counts[c.family as usize - 1][r2] += 1;
}

/// Family 1 straight from (A, B, C); families 2 and 3 from (u, v, x) with only the
/// constraint that y and w = x² − y are nonzero integers.
fn naive(x: i128, mode: Mode, tag: GaloisTag) -> [[u64; 3]; 3] {
    let mut counts = [[0u64; 3]; 3];
    // |16·A·C·D| < X and |16·A·C·D²| < X
    let r = x / 16 + 1;
    let bmax = ((4 * r * r + x) as f64).sqrt() as i128 + 1;
    for a in (-r..=r).filter(|&a| a != 0) {
        for cc in (-r / a.abs()..=r / a.abs()).filter(|&c| c != 0) {
            for b in -bmax..=bmax {
                consider(FamilyCoords::new(Family::One, a, b, cc), x, mode, tag, &mut counts);
            }
        }
    }
    // |y·w| < 4X or |y|·w² < 16X
    let big = match mode {
        Mode::Conductor => 4 * x,
        Mode::Discriminant => 16 * x,
    };
    let wmax = |y: i128| match mode {
        Mode::Conductor => big / y.abs(),
        Mode::Discriminant => ((big / y.abs()) as f64).sqrt() as i128 + 1,
    };
    let xs = |y: i128| {
        let k = wmax(y);
        let hi = ((y + k).max(0) as f64).sqrt() as i128 + 1;
        (-hi..=hi).filter(move |t| (t * t - y).abs() <= k)
    };
    for u in -big..=big {
        if u == 0 {
            continue;
        }
        let vr = big / u.abs();
        for v in -vr..=vr {
            if v == 0 || (v - u) % 4 != 0 {
                continue;
            }
            for t in xs(u * v) {
                if (u + v + 2 * t) % 16 == 0 {
                    let a = (u + v + 2 * t) / 16;
                    consider(FamilyCoords::new(Family::Two, a, (v - u) / 4, 4 * a - t), x, mode, tag, &mut counts);
                }
            }
        }
    }
    let q = (big as f64).sqrt() as i128 + 1;
    for u in -q..=q {
        for v in (-q..=q).filter(|v| v % 2 == 0) {
            let y = u * u + v * v;
            if y == 0 || y > big {
                continue;
            }
            for t in xs(y) {
                if (u + t) % 8 == 0 {
                    let c = FamilyCoords::new(Family::Three, (u + t) / 8, v / 2, (t - u) / 2);
                    consider(c, x, mode, tag, &mut counts);
                }
            }
        }
    }
    counts
}

fn census(x: i128, mode: Mode, tag: GaloisTag) -> [[u64; 3]; 3] {
    let cfg = CensusConfig { mode, galois: tag, shards: 3, ..CensusConfig::conductor(x) };
    run_census(&cfg).unwrap().per_family
}

#[test]
fn conductor_census_matches_naive_scan() {
    for x in [300, 5000] {
        let got = census(x, Mode::Conductor, GaloisTag::D4);
        assert_eq!(got, naive(x, Mode::Conductor, GaloisTag::D4), "X = {x}");
        assert!(got.iter().flatten().sum::<u64>() > 0);
    }
}

#[test]
fn discriminant_census_matches_naive_scan() {
    let x = 20_000;
    for tag in [GaloisTag::D4, GaloisTag::C4] {
        let got = census(x, Mode::Discriminant, tag);
        assert_eq!(got, naive(x, Mode::Discriminant, tag), "{tag}");
        assert!(got.iter().flatten().sum::<u64>() > 0, "{tag}");
    }
}
