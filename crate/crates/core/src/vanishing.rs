//! Polynomials of degree `n + delta` vanishing on a checkerboard set, and
//! the quotient basis `Q` modulo which the Lagrange basis is unique.
//!
//! `V` is spanned by `omega(x) x^j y^k`, `j + k <= delta - 1`, where
//! `omega(x) = prod_r (x - x_r)`. Depending on parity:
//!
//! * case I, `sigma` odd: `Q = V`;
//! * case II, `sigma` even and `n = 2m - 1`: `V` plus `m` generators;
//! * case III, `sigma` even and `n = 2m`: `V` plus `m + tau` generators;
//!
//! with generators `p_{n-j}(x) q_{j+delta}(y) - (-1)^tau p_j(x) q_{n+delta-j}(y)`.

use serde::Serialize;

use crate::checkerboard::{build_checkerboard, check_tau, GridInstance};
use crate::error::{Error, Result};
use crate::monomial::{dim, poly_from_roots, MonomialPoly};
use crate::verify::numerical_rank;

/// Vanishing tolerance, relative to the largest absolute-term evaluation
/// `sum |c_jk| |x|^j |y|^k` of the unit-normalized element over the set.
pub const VANISHING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuotientCase {
    I,
    II,
    III,
}

impl QuotientCase {
    pub fn of(n: usize, sigma: usize) -> Self {
        match (sigma % 2, n % 2) {
            (1, _) => QuotientCase::I,
            (_, 1) => QuotientCase::II,
            _ => QuotientCase::III,
        }
    }
}

/// `dim Q` for the given parameters.
pub fn quotient_dim(n: usize, sigma: usize, tau: u8) -> usize {
    let delta = sigma / 2;
    let v = delta * (delta + 1) / 2;
    match QuotientCase::of(n, sigma) {
        QuotientCase::I => v,
        QuotientCase::II => v + (n + 1) / 2,
        QuotientCase::III => v + n / 2 + tau as usize,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientBasis {
    pub elements: Vec<MonomialPoly>,
    pub case: QuotientCase,
    #[serde(rename = "M")]
    pub dim: usize,
}

/// Generators of `V`, expanded in degree `n + delta`.
pub fn build_v(grid: &GridInstance) -> Vec<MonomialPoly> {
    let delta = grid.delta();
    let d = grid.n() + delta;
    let omega = poly_from_roots(grid.xnodes().as_slice());
    let mut out = Vec::with_capacity(delta * (delta + 1) / 2);
    for total in 0..delta {
        for k in 0..=total {
            let j = total - k;
            let mut xpoly = vec![0.0; j];
            xpoly.extend_from_slice(&omega);
            let mut ypoly = vec![0.0; k + 1];
            ypoly[k] = 1.0;
            out.push(MonomialPoly::from_product(d, &xpoly, &ypoly));
        }
    }
    out
}

/// Builds `Q` for `S_tau` and checks that every element vanishes on the set
/// and that the elements are independent.
pub fn build_q(grid: &GridInstance, tau: u8) -> Result<QuotientBasis> {
    check_tau(tau)?;
    let n = grid.n();
    let delta = grid.delta();
    let d = n + delta;
    let case = QuotientCase::of(n, grid.sigma());
    let mut elements = build_v(grid);
    let extra = match case {
        QuotientCase::I => 0,
        QuotientCase::II => (n + 1) / 2,
        QuotientCase::III => n / 2 + tau as usize,
    };
    if extra > 0 {
        let px = grid.xcoeffs().monomial_expansion(n);
        let qy = grid.ycoeffs().monomial_expansion(n + grid.sigma());
        let sign = if tau == 0 { 1.0 } else { -1.0 };
        for j in 0..extra {
            let mut g = MonomialPoly::from_product(d, &px[n - j], &qy[j + delta]);
            let h = MonomialPoly::from_product(d, &px[j], &qy[n + delta - j]);
            g.add_scaled(&h, -sign);
            elements.push(g);
        }
    }
    let dim_q = quotient_dim(n, grid.sigma(), tau);
    debug_assert_eq!(elements.len(), dim_q);

    let set = build_checkerboard(grid, tau)?;
    for (i, e) in elements.iter().enumerate() {
        let e = e.normalized();
        let scale = set.points().iter().fold(0.0_f64, |m, p| m.max(e.abs_eval(p.x, p.y)));
        for p in set.points() {
            let v = e.eval(p.x, p.y).abs();
            if v > VANISHING_TOL * scale {
                return Err(Error::InvalidGrid(format!(
                    "quotient element {i} is {v:e} at node ({}, {}), scale {scale:e}",
                    p.r, p.u
                )));
            }
        }
    }
    if !elements.is_empty() {
        let rows: Vec<_> = elements.iter().map(MonomialPoly::normalized).collect();
        let rank = numerical_rank(&stack_rows(&rows, dim(d)));
        if rank != dim_q {
            return Err(Error::InvalidGrid(format!(
                "quotient elements are dependent: rank {rank} < {dim_q}"
            )));
        }
    }
    Ok(QuotientBasis {
        elements,
        case,
        dim: dim_q,
    })
}

pub(crate) fn stack_rows(rows: &[MonomialPoly], cols: usize) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(rows.len(), cols, |i, j| rows[i].coeffs()[j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkerboard::count_nodes;
    use crate::nodemap::reference_coeffs;

    fn reference_grid(n: usize, sigma: usize) -> GridInstance {
        GridInstance::from_coeffs(reference_coeffs(n).unwrap(), reference_coeffs(n + sigma).unwrap())
            .unwrap()
    }

    #[test]
    fn v_sizes() {
        assert!(build_v(&reference_grid(3, 0)).is_empty());
        assert!(build_v(&reference_grid(3, 1)).is_empty());
        let g = reference_grid(3, 2);
        let v = build_v(&g);
        assert_eq!(v.len(), 1);
        let omega = poly_from_roots(g.xnodes().as_slice());
        for (j, c) in omega.iter().enumerate() {
            assert_eq!(v[0].get(j, 0), *c);
        }
        let g = reference_grid(3, 5);
        let v = build_v(&g);
        assert_eq!(v.len(), 3);
        // omega, x omega, y omega
        assert_eq!(v[0].get(4, 0), 1.0);
        assert_eq!(v[1].get(5, 0), 1.0);
        assert_eq!(v[2].get(4, 1), 1.0);
    }

    #[test]
    fn case_examples() {
        let q = build_q(&reference_grid(2, 0), 1).unwrap();
        assert_eq!((q.case, q.dim, q.elements.len()), (QuotientCase::III, 2, 2));
        let q = build_q(&reference_grid(3, 2), 0).unwrap();
        assert_eq!((q.case, q.dim), (QuotientCase::II, 3));
        let q = build_q(&reference_grid(2, 2), 0).unwrap();
        assert_eq!((q.case, q.dim), (QuotientCase::III, 2));
        assert_eq!(dim(2 + 1) - count_nodes(2, 2, 0), 2);
        let q = build_q(&reference_grid(1, 1), 0).unwrap();
        assert_eq!((q.case, q.dim), (QuotientCase::I, 0));
    }

    #[test]
    fn generator_for_n2_sigma0_tau1() {
        // p_{2-j}(x) q_j(y) + p_j(x) q_{2-j}(y), j = 0, 1
        let g = reference_grid(2, 0);
        let q = build_q(&g, 1).unwrap();
        let (x, y) = (0.3, -0.8);
        let p = |k: usize, t: f64| g.xcoeffs().eval_sequence(t, 2).unwrap().values[k];
        let qq = |k: usize, t: f64| g.ycoeffs().eval_sequence(t, 2).unwrap().values[k];
        for j in 0..2 {
            let want = p(2 - j, x) * qq(j, y) + p(j, x) * qq(2 - j, y);
            assert!((q.elements[j].eval(x, y) - want).abs() < 1e-13);
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
}
