mod common;

use checkerboard_lagrange::checkerboard::{build_checkerboard, count_nodes};
use checkerboard_lagrange::monomial::dim;
use checkerboard_lagrange::random::{random_grid, rng};
use checkerboard_lagrange::vanishing::{build_q, quotient_dim, QuotientCase, VANISHING_TOL};
use checkerboard_lagrange::verify::numerical_rank;
use nalgebra::DMatrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config(48))]

    #[test]
    fn quotient_elements_vanish_and_are_independent(
        n in 1usize..=12,
        sigma in 0usize..=6,
        tau in 0u8..2,
        seed in any::<u64>(),
    ) {
        let (g, _) = random_grid(&mut rng(seed), n, sigma).unwrap().affine_normalized().unwrap();
        let q = build_q(&g, tau).unwrap();
        let d = n + sigma / 2;
        prop_assert_eq!(q.dim, quotient_dim(n, sigma, tau));
        prop_assert_eq!(q.elements.len(), q.dim);
        let set = build_checkerboard(&g, tau).unwrap();
        for e in &q.elements {
            let e = e.normalized();
            prop_assert!((e.max_abs() - 1.0).abs() < 1e-15);
            let scale = set.points().iter().fold(0.0_f64, |m, p| m.max(e.abs_eval(p.x, p.y)));
            for p in set.points() {
                prop_assert!(e.eval(p.x, p.y).abs() <= VANISHING_TOL * scale);
            }
        }
        if q.dim > 0 {
            let rows: Vec<_> = q.elements.iter().map(|e| e.normalized()).collect();
            let m = DMatrix::from_fn(rows.len(), dim(d), |i, j| rows[i].coeffs()[j]);
            prop_assert_eq!(numerical_rank(&m), q.dim);
        }
        let v_len = (sigma / 2) * (sigma / 2 + 1) / 2;
        for (i, e) in q.elements.iter().enumerate() {
            let top = (0..=d).flat_map(|j| (0..=d - j).map(move |k| (j, k)))
                .filter(|&(j, k)| e.get(j, k) != 0.0)
                .map(|(j, k)| j + k)
                .max()
                .unwrap_or(0);
            prop_assert!(top <= d);
            if i >= v_len {
                prop_assert_eq!(top, d, "generator {} of case {:?}", i - v_len, q.case);
            }
        }
    }
}

#[test]
fn dimension_bookkeeping() {
    for n in 0..=20 {
        for sigma in 0..=20 {
            let d = n + sigma / 2;
            for tau in 0..2 {
                assert_eq!(quotient_dim(n, sigma, tau) + count_nodes(n, sigma, tau), dim(d));
            }
        }
    }
}

#[test]
fn case_selection() {
    assert_eq!(QuotientCase::of(4, 3), QuotientCase::I);
    assert_eq!(QuotientCase::of(5, 2), QuotientCase::II);
    assert_eq!(QuotientCase::of(4, 0), QuotientCase::III);
    assert_eq!(quotient_dim(5, 2, 0), 1 + 3);
    assert_eq!(quotient_dim(4, 2, 1), 1 + 2 + 1);
}
