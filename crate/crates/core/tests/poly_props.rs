mod common;

use common::*;
use modelkit_core::poly::{parse, PolyMap, RPoly};
use proptest::prelude::*;
use rand::Rng;

fn small_map(rng: &mut impl Rng) -> PolyMap {
    PolyMap::new(holo(rng, 2, 2), holo(rng, 2, 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_then_parsing_is_identity(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = real_poly(&mut rng, 6, 8);
        prop_assert_eq!(parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn complex_polynomials_round_trip_too(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = &real_poly(&mut rng, 4, 4) + &RPoly::term(monomial_with(&mut rng, 3, 6), nonzero_gaussian(&mut rng));
        prop_assert_eq!(parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn conjugation_is_an_involutive_ring_map(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = &real_poly(&mut rng, 4, 4) + &holo(&mut rng, 3, 3).into_rpoly();
        let q = &real_poly(&mut rng, 4, 4) + &holo(&mut rng, 3, 3).into_rpoly();
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!((&p * &q).conjugate(), &p.conjugate() * &q.conjugate());
        prop_assert_eq!((&p + &q).conjugate(), &p.conjugate() + &q.conjugate());
    }

    #[test]
    fn real_polynomials_are_self_conjugate(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = real_poly(&mut rng, 6, 8);
        prop_assert!(p.is_real());
        prop_assert_eq!(p.conjugate(), p);
    }

    #[test]
    fn substitution_respects_composition(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = real_poly(&mut rng, 3, 3);
        let f = small_map(&mut rng);
        let g = small_map(&mut rng);
        prop_assert_eq!(p.substitute(&f).substitute(&g), p.substitute(&f.compose(&g)));
    }

    #[test]
    fn substitution_is_a_ring_map(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = real_poly(&mut rng, 3, 3);
        let q = real_poly(&mut rng, 3, 3);
        let f = small_map(&mut rng);
        prop_assert_eq!((&p * &q).substitute(&f), &p.substitute(&f) * &q.substitute(&f));
        prop_assert_eq!(p.substitute(&PolyMap::identity()), p);
    }
}
