//! Interpolation on a checkerboard set: `p = sum_i f(node_i) L_i`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::checkerboard::{build_checkerboard, GridInstance};
use crate::error::{Error, Result};
use crate::lagrange::LagrangeBasis;

/// An interpolant built from one sample per node of `S_tau`.
#[derive(Debug, Clone)]
pub struct Interpolant {
    basis: LagrangeBasis,
    values: Vec<f64>,
}

impl Interpolant {
    pub fn basis(&self) -> &LagrangeBasis {
        &self.basis
    }

    /// Sample values in set order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tau(&self) -> u8 {
        self.basis.set().tau()
    }

    pub fn eval(&self, point: (f64, f64)) -> f64 {
        self.basis
            .eval_all(point)
            .iter()
            .zip(&self.values)
            .map(|(l, f)| l * f)
            .sum()
    }
}

/// Builds the interpolant from samples keyed by grid index `(r, u)`.
/// Every node of `S_tau` needs exactly one sample and no other keys are
/// accepted.
pub fn interpolate(grid: Arc<GridInstance>, tau: u8, samples: &HashMap<(usize, usize), f64>) -> Result<Interpolant> {
    let set = build_checkerboard(&grid, tau)?;
    let mut values = Vec::with_capacity(set.count());
    for p in set.points() {
        match samples.get(&(p.r, p.u)) {
            Some(v) if v.is_finite() => values.push(*v),
            Some(v) => {
                return Err(Error::SampleMismatch(format!("sample at ({}, {}) is {v}", p.r, p.u)));
            }
            None => return Err(Error::SampleMismatch(format!("no sample for node ({}, {})", p.r, p.u))),
        }
    }
    if samples.len() != values.len() {
        let nodes: std::collections::HashSet<_> = set.points().iter().map(|p| (p.r, p.u)).collect();
        let mut extra: Vec<_> = samples.keys().filter(|k| !nodes.contains(k)).collect();
        extra.sort();
        return Err(Error::SampleMismatch(format!("samples at non-nodes of S_{tau}: {extra:?}")));
    }
    Ok(Interpolant {
        basis: LagrangeBasis::new(grid, set)?,
        values,
    })
}

/// Samples `f` on `S_tau` and interpolates.
pub fn interpolate_fn(grid: Arc<GridInstance>, tau: u8, f: impl Fn(f64, f64) -> f64) -> Result<Interpolant> {
    let set = build_checkerboard(&grid, tau)?;
    let samples = set.points().iter().map(|p| ((p.r, p.u), f(p.x, p.y))).collect();
    interpolate(grid, tau, &samples)
}
