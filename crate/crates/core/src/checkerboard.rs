//! Rectangular grids `{(x_r, y_u)}` and their checkerboard halves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nodemap::{affine_substitute, coeffs_from_nodes, nodes_from_coeffs, NodeSequence};
use crate::orthopoly::RecurrenceCoeffs;

/// Agreement required between stored nodes and the nodes recomputed from
/// the stored coefficients, relative to the node span.
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// Grid data: `n + 1` abscissas, `n + sigma + 1` ordinates, and the
/// recurrence coefficients generating each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct GridInstance {
    n: usize,
    sigma: usize,
    xnodes: NodeSequence,
    ynodes: NodeSequence,
    xcoeffs: RecurrenceCoeffs,
    ycoeffs: RecurrenceCoeffs,
}

impl GridInstance {
    /// Assembles a grid from both representations and checks that they agree.
    pub fn new(
        xnodes: NodeSequence,
        ynodes: NodeSequence,
        xcoeffs: RecurrenceCoeffs,
        ycoeffs: RecurrenceCoeffs,
    ) -> Result<Self> {
        let n = xnodes.degree();
        if ynodes.len() < xnodes.len() {
            return Err(Error::InvalidGrid(format!(
                "{} ordinates for {} abscissas; need at least as many",
                ynodes.len(),
                xnodes.len()
            )));
        }
        let sigma = ynodes.len() - xnodes.len();
        if xcoeffs.n() != n || ycoeffs.n() != n + sigma {
            return Err(Error::InvalidGrid(format!(
                "coefficient lengths ({}, {}) do not match n = {n}, sigma = {sigma}",
                xcoeffs.n(),
                ycoeffs.n()
            )));
        }
        check_consistent("x", &xcoeffs, &xnodes)?;
        check_consistent("y", &ycoeffs, &ynodes)?;
        Ok(GridInstance {
            n,
            sigma,
            xnodes,
            ynodes,
            xcoeffs,
            ycoeffs,
        })
    }

    /// Grid generated by two coefficient sequences of lengths `n` and `n + sigma`.
    pub fn from_coeffs(xcoeffs: RecurrenceCoeffs, ycoeffs: RecurrenceCoeffs) -> Result<Self> {
        if ycoeffs.n() < xcoeffs.n() {
            return Err(Error::InvalidGrid(format!(
                "y coefficients (n = {}) shorter than x coefficients (n = {})",
                ycoeffs.n(),
                xcoeffs.n()
            )));
        }
        let xnodes = nodes_from_coeffs(&xcoeffs)?;
        let ynodes = nodes_from_coeffs(&ycoeffs)?;
        Ok(GridInstance {
            n: xcoeffs.n(),
            sigma: ycoeffs.n() - xcoeffs.n(),
            xnodes,
            ynodes,
            xcoeffs,
            ycoeffs,
        })
    }

    /// Grid on given nodes, with coefficients recovered by the inverse map.
    pub fn from_nodes(xnodes: NodeSequence, ynodes: NodeSequence) -> Result<Self> {
        let xcoeffs = coeffs_or_empty(&xnodes)?;
        let ycoeffs = coeffs_or_empty(&ynodes)?;
        GridInstance::new(xnodes, ynodes, xcoeffs, ycoeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// `floor(sigma / 2)`; the Lagrange basis lives in degree `n + delta`.
    pub fn delta(&self) -> usize {
        self.sigma / 2
    }

    pub fn xnodes(&self) -> &NodeSequence {
        &self.xnodes
    }

    pub fn ynodes(&self) -> &NodeSequence {
        &self.ynodes
    }

    pub fn xcoeffs(&self) -> &RecurrenceCoeffs {
        &self.xcoeffs
    }

    pub fn ycoeffs(&self) -> &RecurrenceCoeffs {
        &self.ycoeffs
    }

    /// The same grid after mapping each axis affinely onto `[-1, 1]`.
    ///
    /// Returns the mapped grid and the maps `(scale, shift)` per axis, with
    /// `t = scale * x + shift`.
    pub fn affine_normalized(&self) -> Result<(GridInstance, [(f64, f64); 2])> {
        let (xc, xn, xm) = normalize_axis(&self.xcoeffs, &self.xnodes)?;
        let (yc, yn, ym) = normalize_axis(&self.ycoeffs, &self.ynodes)?;
        Ok((
            GridInstance {
                n: self.n,
                sigma: self.sigma,
                xnodes: xn,
                ynodes: yn,
                xcoeffs: xc,
                ycoeffs: yc,
            },
            [xm, ym],
        ))
    }
}

fn coeffs_or_empty(nodes: &NodeSequence) -> Result<RecurrenceCoeffs> {
    if nodes.degree() == 0 {
        Ok(RecurrenceCoeffs::empty())
    } else {
        coeffs_from_nodes(nodes)
    }
}

fn check_consistent(axis: &str, coeffs: &RecurrenceCoeffs, nodes: &NodeSequence) -> Result<()> {
    if coeffs.n() == 0 {
        return Ok(());
    }
    let got = nodes_from_coeffs(coeffs)?;
    let tol = CONSISTENCY_TOL * nodes.span();
    for (r, (g, w)) in got.as_slice().iter().zip(nodes.as_slice()).enumerate() {
        if (g - w).abs() > tol {
            return Err(Error::InvalidGrid(format!(
                "{axis}-node {r}: stored {w} but coefficients give {g}"
            )));
        }
    }
    Ok(())
}

// New variable t = scale * x + shift; the polynomials become p_k((t - shift) / scale).
fn normalize_axis(
    coeffs: &RecurrenceCoeffs,
    nodes: &NodeSequence,
) -> Result<(RecurrenceCoeffs, NodeSequence, (f64, f64))> {
    let v = nodes.as_slice();
    let (hi, lo) = (v[0], v[v.len() - 1]);
    let (scale, shift) = if v.len() == 1 {
        (1.0, -hi)
    } else {
        let s = 2.0 / (hi - lo);
        (s, -(hi + lo) / (hi - lo))
    };
    let mapped: Vec<f64> = v.iter().map(|x| scale * x + shift).collect();
    let coeffs = affine_substitute(coeffs, 1.0 / scale, -shift / scale)?;
    Ok((coeffs, NodeSequence::new(mapped)?, (scale, shift)))
}

/// One node `(x_r, y_u)` of a checkerboard set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub r: usize,
    pub u: usize,
    pub x: f64,
    pub y: f64,
}

/// The grid points with `(r + u) mod 2 == tau`, in row-major `(r, u)` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckerboardSet {
    tau: u8,
    points: Vec<GridPoint>,
}

impl CheckerboardSet {
    /// Wraps an explicit point list, checking only the parity of each index
    /// pair. Used for externally supplied or deliberately altered sets.
    pub fn from_points(tau: u8, points: Vec<GridPoint>) -> Result<Self> {
        check_tau(tau)?;
        if let Some(p) = points.iter().find(|p| (p.r + p.u) % 2 != tau as usize) {
            return Err(Error::InvalidGrid(format!(
                "point ({}, {}) has the wrong parity for tau = {tau}",
                p.r, p.u
            )));
        }
        Ok(CheckerboardSet { tau, points })
    }

    pub fn tau(&self) -> u8 {
        self.tau
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }
}

pub(crate) fn check_tau(tau: u8) -> Result<()> {
    if tau > 1 {
        return Err(Error::InvalidArgument(format!("tau must be 0 or 1, got {tau}")));
    }
    Ok(())
}

/// Number of nodes in `S_tau`.
pub fn count_nodes(n: usize, sigma: usize, tau: u8) -> usize {
    let total = (n + 1) * (n + sigma + 1);
    if n % 2 == 0 && sigma % 2 == 0 {
        (total + 1) / 2 - tau as usize
    } else {
        total / 2
    }
}

/// Collects the parity-`tau` points of the grid.
pub fn build_checkerboard(grid: &GridInstance, tau: u8) -> Result<CheckerboardSet> {
    check_tau(tau)?;
    let mut points = Vec::with_capacity(count_nodes(grid.n, grid.sigma, tau));
    for (r, &x) in grid.xnodes.as_slice().iter().enumerate() {
        for (u, &y) in grid.ynodes.as_slice().iter().enumerate() {
            if (r + u) % 2 == tau as usize {
                points.push(GridPoint { r, u, x, y });
            }
        }
    }
    debug_assert_eq!(points.len(), count_nodes(grid.n, grid.sigma, tau));
    Ok(CheckerboardSet { tau, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodemap::reference_coeffs;

    fn reference_grid(n: usize, sigma: usize) -> GridInstance {
        GridInstance::from_coeffs(reference_coeffs(n).unwrap(), reference_coeffs(n + sigma).unwrap())
            .unwrap()
    }

    fn pairs(set: &CheckerboardSet) -> Vec<(usize, usize)> {
        set.points().iter().map(|p| (p.r, p.u)).collect()
    }

    #[test]
    fn small_checkerboards() {
        let g = reference_grid(1, 1);
        let s = build_checkerboard(&g, 0).unwrap();
        assert_eq!(pairs(&s), vec![(0, 0), (0, 2), (1, 1)]);
        assert_eq!(s.count(), 3);

        let g = reference_grid(1, 0);
        let s = build_checkerboard(&g, 1).unwrap();
        assert_eq!(pairs(&s), vec![(0, 1), (1, 0)]);

        let g = reference_grid(2, 2);
        assert_eq!(build_checkerboard(&g, 0).unwrap().count(), 8);
        assert!(build_checkerboard(&g, 2).is_err());
    }

    #[test]
    fn node_counts() {
        assert_eq!(count_nodes(2, 2, 1), 7);
        assert_eq!(count_nodes(2, 2, 0), 8);
        assert_eq!(count_nodes(1, 1, 0), 3);
        assert_eq!(count_nodes(3, 0, 0), 8);
        assert_eq!(count_nodes(3, 0, 1), 8);
        assert_eq!(count_nodes(0, 0, 0), 1);
        assert_eq!(count_nodes(0, 0, 1), 0);
    }

    #[test]
    fn counts_partition_the_grid() {
        for n in 0..=20 {
            for sigma in 0..=20 {
                assert_eq!(
                    count_nodes(n, sigma, 0) + count_nodes(n, sigma, 1),
                    (n + 1) * (n + sigma + 1)
                );
            }
        }
    }

    #[test]
    fn every_point_in_exactly_one_half() {
        for n in 1..=12 {
            for sigma in 0..=12 {
                let g = reference_grid(n, sigma);
                let s0 = build_checkerboard(&g, 0).unwrap();
                let s1 = build_checkerboard(&g, 1).unwrap();
                assert_eq!(s0.count(), count_nodes(n, sigma, 0));
                assert_eq!(s1.count(), count_nodes(n, sigma, 1));
                let mut all: Vec<_> = pairs(&s0).into_iter().chain(pairs(&s1)).collect();
                all.sort();
                all.dedup();
                assert_eq!(all.len(), (n + 1) * (n + sigma + 1));
            }
        }
    }

    #[test]
    fn inconsistent_representations_rejected() {
        let x = NodeSequence::new(vec![1.0, 0.0, -1.0]).unwrap();
        let y = NodeSequence::new(vec![1.0, 0.1, -1.0]).unwrap();
        let c = reference_coeffs(2).unwrap();
        assert!(GridInstance::new(x.clone(), y, c.clone(), c.clone()).is_err());
        assert!(GridInstance::new(x.clone(), x, c.clone(), reference_coeffs(3).unwrap()).is_err());
    }

    #[test]
    fn normalization_maps_to_unit_interval() {
        let x = NodeSequence::new(vec![5.0, 4.0, 2.5, 1.0]).unwrap();
        let y = NodeSequence::new(vec![0.3, 0.2, 0.0, -0.1, -0.4]).unwrap();
        let g = GridInstance::from_nodes(x, y).unwrap();
        let (h, maps) = g.affine_normalized().unwrap();
        assert_eq!(h.xnodes()[0], 1.0);
        assert_eq!(h.xnodes()[3], -1.0);
        assert!((h.ynodes()[0] - 1.0).abs() < 1e-15);
        assert!((maps[0].0 * 2.5 + maps[0].1 - h.xnodes()[2]).abs() < 1e-15);
        let again = nodes_from_coeffs(h.xcoeffs()).unwrap();
        for (a, b) in again.as_slice().iter().zip(h.xnodes().as_slice()) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
