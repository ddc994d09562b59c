mod common;

use std::sync::Arc;

use checkerboard_lagrange::checkerboard::build_checkerboard;
use checkerboard_lagrange::lagrange::BasisFunction;
use checkerboard_lagrange::random::{random_grid, rng};
use checkerboard_lagrange::verify::{duplicate_point, monomial_coeffs, verify, verify_set};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(common::config(24))]

    #[test]
    fn expansion_matches_direct_evaluation(
        n in 1usize..=10,
        sigma in 0usize..=6,
        tau in 0u8..2,
        seed in any::<u64>(),
    ) {
        let (g, _) = random_grid(&mut rng(seed), n, sigma).unwrap().affine_normalized().unwrap();
        let g = Arc::new(g);
        let set = build_checkerboard(&g, tau).unwrap();
        let anchor = set.points()[seed as usize % set.count()];
        let (p, _) = monomial_coeffs(&g, anchor).unwrap();
        let b = BasisFunction::new(g.clone(), anchor).unwrap();
        let mut r = rng(seed.wrapping_add(1));
        let pts: Vec<(f64, f64)> = (0..50)
            .map(|_| (r.random_range(-1.0..=1.0), r.random_range(-1.0..=1.0)))
            .collect();
        let direct: Vec<f64> = pts.iter().map(|&q| b.eval(q) * b.normalizer()).collect();
        let scale = direct.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for (&(x, y), d) in pts.iter().zip(&direct) {
            let e = (p.eval(x, y) * b.normalizer() - d).abs();
            prop_assert!(e <= 1e-8 * scale, "at ({}, {}): {:e} vs scale {:e}", x, y, e, scale);
        }
    }
}

#[test]
fn checks_agree_on_valid_and_corrupted_sets() {
    for (i, &(n, sigma)) in [(2, 0), (3, 1), (4, 2), (5, 3), (6, 4), (3, 6)].iter().enumerate() {
        let g = random_grid(&mut rng(900 + i as u64), n, sigma).unwrap();
        for tau in 0..2 {
            let good = verify(&g, tau, true).unwrap();
            assert!(good.rank_ok() && good.delta_ok() && good.span_equal, "{good:?}");
            assert_eq!(good.quotient_unique, Some(true));
            assert_eq!(good.nullspace_dim, good.m);

            let set = build_checkerboard(&g, tau).unwrap();
            let bad = duplicate_point(&set, 0, set.count() - 1).unwrap();
            let rep = verify_set(&g, &bad, true).unwrap();
            assert!(!rep.rank_ok() && !rep.delta_ok() && !rep.span_equal, "{rep:?}");
            assert!(!rep.passed());
        }
    }
}
