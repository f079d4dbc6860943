use invsemi::coarse::r_components;
use invsemi::embed::{embed_space, verify_distortion, Colorer, FiniteMetricSpace};
use invsemi::metric::{
    check_inverse_isometry, check_subinvariance_bound, complete_word_metric, length_from_metric, metric_from_length,
    WeightedGenerators,
};
use invsemi::semigroup::{generate_closure, Element, PartialBijection, SemigroupOracle};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn generator() -> impl Strategy<Value = Element> {
    (proptest::collection::vec(any::<bool>(), 3), Just(vec![1u32, 2, 3]).prop_shuffle()).prop_map(|(keep, images)| {
        let pairs = (1..=3).zip(images).zip(keep).filter(|(_, k)| *k).map(|(p, _)| p);
        Element::map(PartialBijection::new(3, pairs).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_and_lemmas_on_i3_subsemigroups(gens in proptest::collection::vec(generator(), 1..4), w in 1u64..5) {
        let o = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
        let s = generate_closure(&o, &gens, 1000).unwrap();
        let weights = WeightedGenerators::symmetric(&s, gens.iter().map(|g| (g.clone(), w)));
        prop_assume!(weights.is_ok());
        let d = complete_word_metric(&s, &weights.unwrap()).unwrap();
        let l = length_from_metric(&d);
        prop_assert_eq!(metric_from_length(&s, &l).unwrap(), d.clone());
        prop_assert!(check_subinvariance_bound(&s, &d).passed());
        prop_assert!(check_inverse_isometry(&s, &d).passed());
        for r in 0..3 {
            let p = r_components(&d, r);
            let total: usize = p.blocks.iter().map(|b| b.size).sum();
            prop_assert_eq!(total, d.len());
        }
    }

    #[test]
    fn random_spaces_embed_within_one(seed in any::<u64>(), n in 1usize..16, w in 1u64..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = FiniteMetricSpace::random(&mut rng, n, w);
        for colorer in [Colorer::Greedy, Colorer::MisraGries] {
            let e = embed_space(&x, n / 2, colorer).unwrap();
            let r = verify_distortion(&x, &e).unwrap();
            prop_assert_eq!(r.pairs, n * n);
        }
    }
}
