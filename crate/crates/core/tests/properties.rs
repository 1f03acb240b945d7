use proptest::prelude::*;
use quartic_census::census::{run_census, CensusConfig};
use quartic_census::classify::{
    canonical_coords, canonical_status, family_real_signature, galois_tag, galois_tag_of_form, orbit_by_action,
    real_signature, sturm_real_roots,
};
use quartic_census::densities::{rho1, rho2, rho_v4};
use quartic_census::forms::{act_quartic, disc_quartic, to_form, BinQuartForm, Family, FamilyCoords, GL2Mat};
use quartic_census::maximality::{is_maximal, is_maximal_fast};
use quartic_census::order_oracle::disc_identity_holds;
use quartic_census::resolvent::{compose, conductor_poly, decompose, decomposition_divisibility};
use quartic_census::arith::OddSquarefreeTable;
use quartic_census::GaloisTag;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::One), Just(Family::Two), Just(Family::Three)]
}

fn coords(r: i128) -> impl Strategy<Value = FamilyCoords> {
    (family(), -r..=r, -r..=r, -r..=r).prop_map(|(f, a, b, c)| FamilyCoords::new(f, a, b, c))
}

fn nondegenerate(r: i128) -> impl Strategy<Value = FamilyCoords> {
    coords(r).prop_filter("zero discriminant", |c| disc_quartic(&to_form(c).unwrap()).unwrap() != 0)
}

fn form(r: i128) -> impl Strategy<Value = BinQuartForm> {
    prop::array::uniform5(-r..=r)
        .prop_map(BinQuartForm::from_coeffs)
        .prop_filter("zero discriminant", |f| disc_quartic(f).unwrap() != 0)
}

fn unimodular() -> impl Strategy<Value = GL2Mat> {
    prop::collection::vec(0usize..4, 0..6).prop_map(|steps| {
        let gens = [GL2Mat::new(1, 1, 0, 1), GL2Mat::new(1, -1, 0, 1), GL2Mat::new(0, 1, 1, 0), GL2Mat::new(1, 0, 0, -1)];
        steps.iter().fold(GL2Mat::IDENTITY, |m, &i| m.mul(&gens[i]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn signature_matches_sturm(f in form(30)) {
        let r2 = real_signature(&f).unwrap();
        prop_assert_eq!(4 - 2 * r2 as usize, sturm_real_roots(&f));
    }

    #[test]
    fn family_signature_matches_general(c in nondegenerate(25)) {
        prop_assume!(c.family != Family::Three);
        prop_assert_eq!(family_real_signature(&c).unwrap(), real_signature(&to_form(&c).unwrap()).unwrap());
    }

    #[test]
    fn disc_identity(f in form(200)) {
        prop_assert!(disc_identity_holds(&f).unwrap());
    }

    #[test]
    fn decomposition_round_trip(c in nondegenerate(40)) {
        let f = to_form(&c).unwrap();
        let d = decompose(&f, &c.family.j_form()).unwrap();
        prop_assert_eq!(compose(&d.h, &d.f, &d.g).unwrap(), f);
        prop_assert!(decomposition_divisibility(&d, &f).unwrap());
    }

    #[test]
    fn orbit_invariants(c in nondegenerate(30)) {
        let cond = conductor_poly(&c).unwrap();
        let max = is_maximal(&c).unwrap().maximal;
        let (rep, _) = canonical_coords(&c).unwrap();
        let orbit = orbit_by_action(&c).unwrap();
        prop_assert_eq!(orbit.iter().filter(|g| canonical_status(g).is_some()).count(), 1);
        for g in orbit {
            prop_assert_eq!(conductor_poly(&g).unwrap(), cond);
            prop_assert_eq!(is_maximal(&g).unwrap().maximal, max);
            prop_assert_eq!(canonical_coords(&g).unwrap().0, rep);
        }
    }

    #[test]
    fn gl2_invariants(f in form(12), t in unimodular()) {
        let g = act_quartic(&f, &t).unwrap();
        prop_assert_eq!(disc_quartic(&g).unwrap(), disc_quartic(&f).unwrap());
        prop_assert_eq!(sturm_real_roots(&g), sturm_real_roots(&f));
        prop_assert_eq!(galois_tag_of_form(&g).unwrap(), galois_tag_of_form(&f).unwrap());
    }

    #[test]
    fn tags_agree(c in nondegenerate(30)) {
        let f = to_form(&c).unwrap();
        prop_assert_eq!(galois_tag(&c).unwrap(), galois_tag_of_form(&f).unwrap());
        prop_assert!(galois_tag(&c).unwrap() != GaloisTag::Large);
    }

    #[test]
    fn fast_maximality(c in nondegenerate(60)) {
        let table = OddSquarefreeTable::new(1 << 20);
        prop_assert_eq!(is_maximal_fast(&c, &table).unwrap(), is_maximal(&c).unwrap().maximal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn densities_multiplicative(a in -6i128..=6, pq in prop_oneof![Just((2i128, 3i128)), Just((2, 5)), Just((3, 5))]) {
        let (p, q) = pq;
        prop_assert_eq!(rho1(a, p * q), rho1(a, p) * rho1(a, q));
        prop_assert_eq!(rho2(a, p * q), rho2(a, p) * rho2(a, q));
        prop_assert_eq!(rho_v4(p * q), rho_v4(p) * rho_v4(q));
    }

    #[test]
    fn shard_invariance(x in 2i128..60_000, shards in 1usize..9) {
        let base = CensusConfig { emit_records: true, ..CensusConfig::conductor(x) };
        let one = run_census(&base).unwrap();
        let many = run_census(&CensusConfig { shards, ..base }).unwrap();
        prop_assert_eq!(one, many);
    }
}
