mod common;

use std::collections::HashMap;
use std::sync::Arc;

use checkerboard_lagrange::checkerboard::{build_checkerboard, GridInstance};
use checkerboard_lagrange::interp::{interpolate, interpolate_fn, Interpolant};
use checkerboard_lagrange::monomial::{dim, exponents, MonomialPoly};
use checkerboard_lagrange::presets::padua_grid;
use checkerboard_lagrange::random::{random_grid, rng};
use checkerboard_lagrange::verify::{monomial_coeffs, nullspace, rank_with_floor, set_vandermonde};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn normalized(n: usize, sigma: usize, seed: u64) -> Arc<GridInstance> {
    Arc::new(random_grid(&mut rng(seed), n, sigma).unwrap().affine_normalized().unwrap().0)
}

/// Power-basis coefficients of `sum_i f_i L_i`, with the size
/// `sum_i |f_i| max|L_i|` of the summands.
fn expand(p: &Interpolant) -> (MonomialPoly, f64) {
    let g = p.basis().grid();
    let d = g.n() + g.delta();
    let mut out = MonomialPoly::zeros(d);
    let mut size = 0.0;
    for (anchor, f) in p.basis().set().points().iter().zip(p.values()) {
        let (l, _) = monomial_coeffs(g, *anchor).unwrap();
        out.add_scaled(&l, *f);
        size += f.abs() * l.max_abs();
    }
    (out, size)
}

/// Whether `poly`, scaled to unit size, lies in the Vandermonde null space
/// of `S_tau`.
fn in_nullspace(g: &GridInstance, tau: u8, poly: &MonomialPoly, size: f64) -> bool {
    let set = build_checkerboard(g, tau).unwrap();
    let d = g.n() + g.delta();
    let null = nullspace(&set_vandermonde(&set, d));
    let mut m = DMatrix::zeros(null.nrows() + 1, dim(d));
    m.view_mut((0, 0), null.shape()).copy_from(&null);
    for (j, c) in poly.coeffs().iter().enumerate() {
        m[(null.nrows(), j)] = c / size;
    }
    rank_with_floor(&m, 1.0) == null.nrows()
}

proptest! {
    #![proptest_config(common::config(32))]

    #[test]
    fn reproduces_samples_at_nodes(n in 1usize..=12, sigma in 0usize..=6, tau in 0u8..2, seed in any::<u64>()) {
        let g = Arc::new(random_grid(&mut rng(seed), n, sigma).unwrap());
        let f = |x: f64, y: f64| (1.3 * x - 0.4 * y).sin() + x * y;
        let p = interpolate_fn(g.clone(), tau, f).unwrap();
        let fmax = p.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for (node, v) in p.basis().set().points().iter().zip(p.values()) {
            let e = (p.eval((node.x, node.y)) - v).abs();
            prop_assert!(e <= 1e-8 * fmax, "seed={} node ({}, {}): {:e}", seed, node.r, node.u, e);
        }
    }

    #[test]
    fn linear_in_samples(n in 1usize..=8, sigma in 0usize..=5, tau in 0u8..2, seed in any::<u64>()) {
        let g = normalized(n, sigma, seed);
        let set = build_checkerboard(&g, tau).unwrap();
        let mut r = rng(seed ^ 7);
        let mut fs = HashMap::new();
        let mut gs = HashMap::new();
        let mut hs = HashMap::new();
        let (alpha, beta) = (r.random_range(-2.0..=2.0), r.random_range(-2.0..=2.0));
        for pt in set.points() {
            let (u, v): (f64, f64) = (r.random_range(-1.0..=1.0), r.random_range(-1.0..=1.0));
            fs.insert((pt.r, pt.u), u);
            gs.insert((pt.r, pt.u), v);
            hs.insert((pt.r, pt.u), alpha * u + beta * v);
        }
        let pf = interpolate(g.clone(), tau, &fs).unwrap();
        let pg = interpolate(g.clone(), tau, &gs).unwrap();
        let ph = interpolate(g.clone(), tau, &hs).unwrap();
        for _ in 0..20 {
            let q = (r.random_range(-1.0..=1.0), r.random_range(-1.0..=1.0));
            let (a, b) = (alpha * pf.eval(q), beta * pg.eval(q));
            let scale = a.abs() + b.abs();
            prop_assert!((ph.eval(q) - (a + b)).abs() <= 1e-10 * scale.max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn reproduces_polynomials_modulo_the_null_space(
        n in 1usize..=8,
        sigma in 0usize..=5,
        tau in 0u8..2,
        seed in any::<u64>(),
    ) {
        let g = normalized(n, sigma, seed);
        let d = n + sigma / 2;
        let mut r = rng(seed ^ 11);
        let target = MonomialPoly::from_coeffs(d, (0..dim(d)).map(|_| r.random_range(-1.0..=1.0)).collect());
        let p = interpolate_fn(g.clone(), tau, |x, y| target.eval(x, y)).unwrap();
        let (got, size) = expand(&p);
        let size = size.max(target.max_abs());
        prop_assert!(in_nullspace(&g, tau, &got.sub(&target), size));
    }
}

#[test]
fn constant_samples_deviate_only_by_vanishing_polynomials() {
    for (seed, n, sigma) in [(1u64, 3usize, 0usize), (2, 4, 2), (3, 5, 4), (4, 6, 1)] {
        let g = normalized(n, sigma, seed);
        for tau in 0..2 {
            let p = interpolate_fn(g.clone(), tau, |_, _| 1.0).unwrap();
            for node in p.basis().set().points() {
                assert!((p.eval((node.x, node.y)) - 1.0).abs() < 1e-9);
            }
            let one = MonomialPoly::from_coeffs(g.n() + g.delta(), {
                let mut c = vec![0.0; dim(g.n() + g.delta())];
                c[0] = 1.0;
                c
            });
            let (got, size) = expand(&p);
            assert!(in_nullspace(&g, tau, &got.sub(&one), size.max(1.0)));
        }
    }
}

#[test]
fn monomial_exponents_cover_the_space() {
    assert_eq!(exponents(3).count(), dim(3));
}

fn runge(x: f64, y: f64) -> f64 {
    1.0 / (1.0 + 25.0 * (x * x + y * y))
}

#[test]
fn runge_error_decreases_on_padua_grids() {
    let lattice: Vec<f64> = (0..41).map(|i| -1.0 + 2.0 * i as f64 / 40.0).collect();
    let errors: Vec<f64> = (4..=12)
        .map(|n| {
            let p = interpolate_fn(Arc::new(padua_grid(n).unwrap()), 0, runge).unwrap();
            lattice
                .iter()
                .flat_map(|&x| lattice.iter().map(move |&y| (x, y)))
                .map(|(x, y)| (p.eval((x, y)) - runge(x, y)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for i in 0..errors.len() - 2 {
        assert!(errors[i + 2] < errors[i], "n={}: {:?}", i + 4, errors);
    }
    assert!(errors[8] < errors[0] && errors[7] < errors[1]);
}
