mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_matches_box_search(
        n in 1usize..=4,
        off in prop::collection::vec(-2i64..=2, 6),
        extra in 0i64..3,
        a in 1i64..=12,
    ) {
        common::check_enumeration_vs_box(n, &off, extra, a).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn lp_matches_vertex_enumeration(
        d in 2usize..=3,
        t in prop::collection::vec(-4i64..=4, 3),
        gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 0..6),
    ) {
        let gens: Vec<Vec<i64>> = gens.into_iter().map(|g| g[..d].to_vec()).collect();
        common::check_lp_vs_vertices(&t[..d], &gens).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chamber_isometries_preserve_gram(idx in prop::collection::vec(0usize..23040, 1..5)) {
        common::check_isometry_product(&idx).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn adjacency_is_involutive(wall in 0usize..316) {
        common::check_adjacency_involutive(common::s16(), wall).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn wordify_round_trip(seed in any::<u64>(), len in 1usize..=4) {
        let bo = common::borcherds();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = bo.random_word(len, &mut rng);
        let g = bo.evaluate(&w).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let v = bo.wordify(&g, seed).map_err(|e| TestCaseError::fail(format!("{w}: {e}")))?;
        prop_assert_eq!(bo.evaluate(&v).map_err(|e| TestCaseError::fail(e.to_string()))?, g);
    }
}
