mod common;

use common::*;
use modelkit_core::grading::{grade, signature_expansion, weighted_expansion, Weight};
use modelkit_core::poly::RPoly;
use num_traits::Zero;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansions_sum_back(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = real_poly(&mut rng, 6, 8);
        let w = Weight::circle(small_rational(&mut rng), small_rational(&mut rng));
        for parts in [weighted_expansion(&p, &w), signature_expansion(&p, &w)] {
            let mut sum = RPoly::zero();
            for (_, part) in &parts {
                sum += part;
            }
            prop_assert_eq!(sum, p.clone());
        }
    }

    #[test]
    fn signature_parts_of_real_polynomials_pair_up(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = real_poly(&mut rng, 6, 8);
        let w = Weight::circle(positive_rational(&mut rng), positive_rational(&mut rng));
        let parts = signature_expansion(&p, &w);
        for (s, part) in &parts {
            let mirror = parts.iter().find(|(t, _)| *t == -s.clone()).map(|(_, q)| q.clone());
            prop_assert_eq!(mirror, Some(part.conjugate()));
            if s.is_zero() {
                prop_assert!(part.is_real());
            }
        }
    }

    #[test]
    fn conjugate_monomials_have_inverse_quotients(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let m = monomial_with(&mut rng, 5, 20);
        let w = Weight::circle(positive_rational(&mut rng), positive_rational(&mut rng));
        let g = grade(&m, &w).unwrap();
        let c = grade(&m.conjugate(), &w).unwrap();
        prop_assert_eq!(c.wt, g.wt);
        prop_assert_eq!(c.sgn, -g.sgn);
        prop_assert_eq!(c.hq, g.hq.inverse());
    }
}
