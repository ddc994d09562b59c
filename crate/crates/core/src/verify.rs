//! Uniqueness checks through the bivariate Vandermonde matrix.
//!
//! All matrix work happens on the affinely normalized grid (nodes in
//! `[-1, 1]` on both axes); membership statements are invariant under that
//! map.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::checkerboard::{build_checkerboard, count_nodes, CheckerboardSet, GridInstance, GridPoint};
use crate::error::{Error, Result};
use crate::lagrange::{g_dense_coeffs, LagrangeBasis};
use crate::monomial::{dim, exponents, MonomialPoly};
use crate::vanishing::{build_q, quotient_dim, stack_rows};

/// Relative singular-value cutoff for every rank decision.
pub const RANK_TOL: f64 = 1e-10;

/// Delta-property threshold used by [`VerifyReport::passed`].
pub const DELTA_TOL: f64 = 1e-9;

/// Rows `x_i^j y_i^k` in [`MonomialPoly`] column order.
pub fn vandermonde(points: &[(f64, f64)], d: usize) -> DMatrix<f64> {
    let mut v = DMatrix::zeros(points.len(), dim(d));
    for (i, &(x, y)) in points.iter().enumerate() {
        for (col, (j, k)) in exponents(d).enumerate() {
            v[(i, col)] = x.powi(j as i32) * y.powi(k as i32);
        }
    }
    v
}

/// Vandermonde matrix of a checkerboard set.
pub fn set_vandermonde(set: &CheckerboardSet, d: usize) -> DMatrix<f64> {
    vandermonde(&set_coords(set), d)
}

fn set_coords(set: &CheckerboardSet) -> Vec<(f64, f64)> {
    set.points().iter().map(|p| (p.x, p.y)).collect()
}

fn to_faer(m: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full SVD `(U, s, V)` with `s` descending; `None` for an empty matrix.
fn svd(m: &DMatrix<f64>) -> Result<Option<(faer::Mat<f64>, Vec<f64>, faer::Mat<f64>)>> {
    if m.is_empty() {
        return Ok(None);
    }
    let f = to_faer(m);
    let svd = f
        .svd()
        .map_err(|e| Error::Postcondition(format!("SVD did not converge: {e:?}")))?;
    let s = svd.S().column_vector();
    let values = (0..s.nrows()).map(|i| s[i]).collect();
    Ok(Some((svd.U().to_owned(), values, svd.V().to_owned())))
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    to_faer(m).singular_values().expect("SVD convergence")
}

/// Number of singular values above `RANK_TOL * sigma_max`.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    rank_with_floor(m, 0.0)
}

/// As [`numerical_rank`], with the cutoff taken relative to
/// `max(sigma_max, floor)`.
pub fn rank_with_floor(m: &DMatrix<f64>, floor: f64) -> usize {
    let s = singular_values(m);
    let Some(&top) = s.first() else { return 0 };
    let cut = RANK_TOL * top.max(floor);
    s.iter().filter(|&&v| v > cut).count()
}

fn rank_of(s: &[f64]) -> usize {
    let top = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&v| v > RANK_TOL * top).count()
}

/// Orthonormal basis of the right null space, one basis vector per row.
pub fn nullspace(m: &DMatrix<f64>) -> DMatrix<f64> {
    let cols = m.ncols();
    let Some((_, s, v)) = svd(m).expect("SVD convergence") else {
        return DMatrix::identity(cols, cols);
    };
    let rank = rank_of(&s);
    DMatrix::from_fn(cols - rank, cols, |i, j| v[(j, rank + i)])
}

/// Outcome of comparing the Vandermonde null space with `span(Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub nullspace_dim: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub combined_rank: usize,
}

impl SpanReport {
    pub fn span_equal(&self) -> bool {
        self.nullspace_dim == self.m && self.combined_rank == self.m
    }

    /// The report as a `Result`, mapping a mismatch onto its error variant.
    pub fn into_result(self) -> Result<Self> {
        if self.nullspace_dim != self.m {
            Err(Error::DimensionMismatch {
                nullspace: self.nullspace_dim,
                expected: self.m,
            })
        } else if self.combined_rank != self.m {
            Err(Error::SpanMismatch {
                combined: self.combined_rank,
                expected: self.m,
            })
        } else {
            Ok(self)
        }
    }
}

/// Maps a set of `grid` onto the corresponding nodes of `normalized`.
fn map_set(normalized: &GridInstance, set: &CheckerboardSet) -> Result<CheckerboardSet> {
    let xs = normalized.xnodes().as_slice();
    let ys = normalized.ynodes().as_slice();
    let mut out = Vec::with_capacity(set.count());
    for p in set.points() {
        if p.r >= xs.len() || p.u >= ys.len() {
            return Err(Error::InvalidGrid(format!("point index ({}, {}) outside the grid", p.r, p.u)));
        }
        out.push(GridPoint {
            r: p.r,
            u: p.u,
            x: xs[p.r],
            y: ys[p.u],
        });
    }
    CheckerboardSet::from_points(set.tau(), out)
}

/// Null space of the Vandermonde matrix of `set` against `span(Q)`.
/// Does not fail on a mismatch; see [`SpanReport::into_result`].
pub fn nullspace_vs_q(grid: &GridInstance, set: &CheckerboardSet) -> Result<SpanReport> {
    let (norm, _) = grid.affine_normalized()?;
    let set = map_set(&norm, set)?;
    let d = norm.n() + norm.delta();
    let m = quotient_dim(norm.n(), norm.sigma(), set.tau());
    let null = nullspace(&set_vandermonde(&set, d));
    let q = build_q(&norm, set.tau())?;
    let qrows = stack_rows(&q.elements.iter().map(MonomialPoly::normalized).collect::<Vec<_>>(), dim(d));
    let combined_rank = rank_with_floor(&vstack(&null, &qrows), 1.0);
    Ok(SpanReport {
        nullspace_dim: null.nrows(),
        m,
        combined_rank,
    })
}

/// Checks that the Vandermonde null space of `S_tau` equals `span(Q)`.
pub fn nullspace_equals_q(grid: &GridInstance, tau: u8) -> Result<SpanReport> {
    let set = build_checkerboard(grid, tau)?;
    nullspace_vs_q(grid, &set)?.into_result()
}

fn vstack(top: &DMatrix<f64>, bottom: &DMatrix<f64>) -> DMatrix<f64> {
    let cols = top.ncols().max(bottom.ncols());
    let mut out = DMatrix::zeros(top.nrows() + bottom.nrows(), cols);
    if top.nrows() > 0 {
        out.view_mut((0, 0), top.shape()).copy_from(top);
    }
    if bottom.nrows() > 0 {
        out.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    }
    out
}

/// Minimum-norm solution of `V L = I`: one polynomial of degree `d` per
/// point, taking the value 1 at its own point and 0 at the others.
pub fn oracle_lagrange(points: &[(f64, f64)], d: usize) -> Result<Vec<MonomialPoly>> {
    let v = vandermonde(points, d);
    let Some((u, s, w)) = svd(&v)? else {
        return Ok(Vec::new());
    };
    let rank = rank_of(&s);
    if rank < points.len() {
        return Err(Error::RankDeficient {
            rank,
            required: points.len(),
        });
    }
    // L = W S^{-1} U^T
    Ok((0..points.len())
        .map(|i| {
            let coeffs = (0..dim(d))
                .map(|row| (0..rank).map(|k| w[(row, k)] * u[(i, k)] / s[k]).sum())
                .collect();
            MonomialPoly::from_coeffs(d, coeffs)
        })
        .collect())
}

/// Power-basis expansion of `L(.; anchor)` truncated to degree `n + delta`,
/// with the largest dropped coefficient relative to the largest kept one.
pub fn monomial_coeffs(grid: &GridInstance, anchor: GridPoint) -> Result<(MonomialPoly, f64)> {
    let element = crate::lagrange::BasisFunction::new(Arc::new(grid.clone()), anchor)?;
    let dense = g_dense_coeffs(grid, (anchor.x, anchor.y))? / element.normalizer();
    let (p, dropped) = MonomialPoly::from_dense(&dense, element.degree());
    let top = p.max_abs();
    Ok((p, if top > 0.0 { dropped / top } else { dropped }))
}

/// Rank of `[Q; oracle_i - L_i]` over the set, which equals `M` exactly when
/// every difference lies in `span(Q)`.
pub fn quotient_uniqueness_rank(grid: &GridInstance, set: &CheckerboardSet) -> Result<SpanReport> {
    let (norm, _) = grid.affine_normalized()?;
    let set = map_set(&norm, set)?;
    let d = norm.n() + norm.delta();
    let oracle = oracle_lagrange(&set_coords(&set), d)?;
    let q = build_q(&norm, set.tau())?;
    let mut rows: Vec<MonomialPoly> = q.elements.iter().map(MonomialPoly::normalized).collect();
    for (anchor, o) in set.points().iter().zip(&oracle) {
        let (l, _) = monomial_coeffs(&norm, *anchor)?;
        let scale = l.max_abs().max(o.max_abs());
        rows.push(o.sub(&l).scaled(1.0 / scale));
    }
    let combined_rank = rank_with_floor(&stack_rows(&rows, dim(d)), 1.0);
    Ok(SpanReport {
        nullspace_dim: q.dim,
        m: q.dim,
        combined_rank,
    })
}

/// The JSON report of the `verify` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub rank: usize,
    #[serde(rename = "N_tau")]
    pub n_tau: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub nullspace_dim: usize,
    pub combined_rank: usize,
    pub span_equal: bool,
    pub max_delta_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_unique: Option<bool>,
}

impl VerifyReport {
    pub fn rank_ok(&self) -> bool {
        self.rank == self.n_tau
    }

    pub fn delta_ok(&self) -> bool {
        self.max_delta_error < DELTA_TOL
    }

    pub fn passed(&self) -> bool {
        self.rank_ok() && self.delta_ok() && self.span_equal && self.quotient_unique != Some(false)
    }
}

/// Runs the rank, delta-property and null-space checks on an arbitrary
/// point set of `grid`; with `with_oracle`, also the quotient-uniqueness
/// comparison against the least-squares basis.
pub fn verify_set(grid: &GridInstance, set: &CheckerboardSet, with_oracle: bool) -> Result<VerifyReport> {
    let (norm, _) = grid.affine_normalized()?;
    let mapped = map_set(&norm, set)?;
    let d = norm.n() + norm.delta();
    let rank = numerical_rank(&set_vandermonde(&mapped, d));
    let span = nullspace_vs_q(grid, set)?;
    let basis = LagrangeBasis::new(Arc::new(grid.clone()), set.clone())?;
    let max_delta_error = basis.max_delta_error();
    let quotient_unique = if with_oracle {
        Some(match quotient_uniqueness_rank(grid, set) {
            Ok(r) => r.combined_rank == r.m,
            Err(Error::RankDeficient { .. }) => false,
            Err(e) => return Err(e),
        })
    } else {
        None
    };
    Ok(VerifyReport {
        rank,
        n_tau: count_nodes(grid.n(), grid.sigma(), set.tau()),
        m: span.m,
        nullspace_dim: span.nullspace_dim,
        combined_rank: span.combined_rank,
        span_equal: span.span_equal(),
        max_delta_error,
        quotient_unique,
    })
}

/// [`verify_set`] on `S_tau`.
pub fn verify(grid: &GridInstance, tau: u8, with_oracle: bool) -> Result<VerifyReport> {
    let set = build_checkerboard(grid, tau)?;
    verify_set(grid, &set, with_oracle)
}

/// `S_tau` with point `dst` replaced by a copy of point `src` (keeping a
/// valid parity), for negative tests.
pub fn duplicate_point(set: &CheckerboardSet, src: usize, dst: usize) -> Result<CheckerboardSet> {
    let mut pts = set.points().to_vec();
    if src >= pts.len() || dst >= pts.len() || src == dst {
        return Err(Error::InvalidArgument(format!(
            "cannot duplicate point {src} onto {dst} in a set of {}",
            pts.len()
        )));
    }
    pts[dst] = pts[src];
    CheckerboardSet::from_points(set.tau(), pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodemap::reference_coeffs;
    use crate::orthopoly::RecurrenceCoeffs;

    fn reference_grid(n: usize, sigma: usize) -> GridInstance {
        GridInstance::from_coeffs(reference_coeffs(n).unwrap(), reference_coeffs(n + sigma).unwrap())
            .unwrap()
    }

    #[test]
    fn vandermonde_rows() {
        let v = vandermonde(&[(2.0, 3.0)], 1);
        assert_eq!(v.row(0).iter().copied().collect::<Vec<_>>(), vec![1.0, 2.0, 3.0]);
        let v = vandermonde(&[(0.5, 0.5)], 2);
        assert_eq!(
            v.row(0).iter().copied().collect::<Vec<_>>(),
            vec![1.0, 0.5, 0.25, 0.5, 0.25, 0.25]
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&DMatrix::identity(3, 3)), 3);
        let u = DMatrix::from_column_slice(4, 1, &[1.0, 2.0, 3.0, 4.0]);
        let w = DMatrix::from_row_slice(1, 4, &[0.5, -1.0, 2.0, 1.0]);
        assert_eq!(numerical_rank(&(u * w)), 1);
        let g = reference_grid(2, 2);
        let set = build_checkerboard(&g, 0).unwrap();
        let v = set_vandermonde(&set, 3);
        assert_eq!(v.shape(), (8, 10));
        assert_eq!(numerical_rank(&v), 8);
    }

    #[test]
    fn nullspace_is_orthonormal_and_annihilated() {
        let g = reference_grid(3, 2);
        let set = build_checkerboard(&g, 1).unwrap();
        let v = set_vandermonde(&set, 4);
        let ns = nullspace(&v);
        assert_eq!(ns.nrows(), 15 - 12);
        let gram = &ns * ns.transpose();
        assert!((gram - DMatrix::identity(3, 3)).amax() < 1e-12);
        assert!((&v * ns.transpose()).amax() < 1e-12);
    }

    #[test]
    fn span_examples() {
        let r = nullspace_equals_q(&reference_grid(2, 0), 1).unwrap();
        assert_eq!((r.nullspace_dim, r.combined_rank), (2, 2));
        let r = nullspace_equals_q(&reference_grid(1, 1), 0).unwrap();
        assert_eq!((r.nullspace_dim, r.m, r.combined_rank), (0, 0, 0));
        let r = nullspace_equals_q(&reference_grid(3, 2), 1).unwrap();
        assert_eq!((r.nullspace_dim, r.combined_rank), (3, 3));
    }

    #[test]
    fn oracle_two_nodes() {
        // n = 1, sigma = 0: nodes (1, -1) on both axes, S_0 = {(1,1), (-1,-1)}
        let g = reference_grid(1, 0);
        let set = build_checkerboard(&g, 0).unwrap();
        let pts = set_coords(&set);
        let basis = oracle_lagrange(&pts, 1).unwrap();
        for (i, l) in basis.iter().enumerate() {
            for (j, &(x, y)) in pts.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((l.eval(x, y) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn oracle_rank_deficiency() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
        assert!(matches!(oracle_lagrange(&pts, 1), Err(Error::RankDeficient { rank: 3, required: 4 })));
    }

    #[test]
    fn quotient_uniqueness_n4_sigma3() {
        let xc = RecurrenceCoeffs::from_half(4, &[1.0, 1.7, 2.3], &[0.0, 0.2, -0.3]).unwrap();
        let yc = RecurrenceCoeffs::from_half(7, &[0.8, 1.9, 2.2, 1.4], &[0.1, -0.2, 0.4, 0.0]).unwrap();
        let g = GridInstance::from_coeffs(xc, yc).unwrap();
        let set = build_checkerboard(&g, 0).unwrap();
        let r = quotient_uniqueness_rank(&g, &set).unwrap();
        assert_eq!(r.combined_rank, r.m);
    }

    #[test]
    fn expansion_matches_evaluation() {
        let g = reference_grid(3, 2);
        let set = build_checkerboard(&g, 0).unwrap();
        let anchor = set.points()[2];
        let (p, dropped) = monomial_coeffs(&g, anchor).unwrap();
        assert!(dropped < 1e-12);
        let b = crate::lagrange::BasisFunction::new(Arc::new(g), anchor).unwrap();
        for &(x, y) in &[(0.3, -0.2), (0.9, 0.7), (-0.5, 0.1)] {
            assert!((p.eval(x, y) - b.eval((x, y))).abs() < 1e-10);
        }
    }

    #[test]
    fn corrupted_set_fails_every_check() {
        let g = reference_grid(3, 1);
        let set = build_checkerboard(&g, 0).unwrap();
        let bad = duplicate_point(&set, 0, 3).unwrap();
        let rep = verify_set(&g, &bad, true).unwrap();
        assert!(!rep.rank_ok());
        assert!(!rep.delta_ok());
        assert!(!rep.span_equal);
        assert_eq!(rep.quotient_unique, Some(false));
        assert!(verify(&g, 0, true).unwrap().passed());
    }
}
