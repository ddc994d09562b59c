//! Lagrange basis polynomials on a checkerboard set.
//!
//! With `delta = floor(sigma / 2)` and the Christoffel-Darboux style kernel
//!
//! ```text
//! K_e(x, y; s, v) = sum_{j=0}^{n-1} a_j p_j(x) p_j(s) sum_{k=0}^{n-j+e} c_k q_k(y) q_k(v)
//! ```
//!
//! the reproducing function is
//!
//! ```text
//! G = K_delta + K_{sigma-delta-1} + J,
//! J(x, y; s, v) = a_0 p_n(x) p_n(s) [ sum_{k=0}^{sigma-delta-1} + sum_{k=0}^{delta} ] c_k q_k(y) q_k(v)
//! ```
//!
//! and `L(.; s, v) = G(.; s, v) / G(s, v; s, v)` is the basis element
//! anchored at the node `(s, v)`. Everything here is evaluated through the
//! recurrences, never through monomial coefficients.
//!
//! When `sigma = 0` the term `k = n` of `K_0` needs `c_n`, one index past
//! the `y` recurrence. It is taken as `c_0`, the value the reflection
//! `c_k = c_{n+sigma-k}` assigns to it.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::checkerboard::{CheckerboardSet, GridInstance, GridPoint};
use crate::error::{Error, Result};

/// `c_k` for `0 <= k <= n + sigma`, with the reflected closure at the top index.
fn c_ext(grid: &GridInstance, k: usize) -> f64 {
    let c = grid.ycoeffs().a();
    if k < c.len() {
        c[k]
    } else {
        assert_eq!(k, c.len(), "c_{k} requested beyond the reflected closure");
        c[0]
    }
}

fn require_n(grid: &GridInstance) -> Result<()> {
    if grid.n() == 0 {
        return Err(Error::InvalidGrid(
            "the Lagrange construction needs n >= 1".into(),
        ));
    }
    Ok(())
}

/// Recurrence values at one point: `p_0..p_n` and `q_0..q_{n+sigma}`.
#[derive(Debug, Clone, Default)]
struct AxisValues {
    p: Vec<f64>,
    q: Vec<f64>,
}

impl AxisValues {
    fn at(grid: &GridInstance, (x, y): (f64, f64)) -> Self {
        let mut v = AxisValues::default();
        v.fill(grid, (x, y));
        v
    }

    fn fill(&mut self, grid: &GridInstance, (x, y): (f64, f64)) {
        grid.xcoeffs().eval_into(x, grid.n(), &mut self.p);
        grid.ycoeffs().eval_into(y, grid.n() + grid.sigma(), &mut self.q);
    }
}

/// Prefix sums `C(l) = sum_{k<=l} c_k q_k(y) q_k(v)` for `l = 0..=n+sigma`.
fn prefix_sums(grid: &GridInstance, point: &AxisValues, anchor: &AxisValues, out: &mut Vec<f64>) {
    out.clear();
    let mut acc = 0.0;
    for k in 0..point.q.len() {
        acc += c_ext(grid, k) * point.q[k] * anchor.q[k];
        out.push(acc);
    }
}

/// `C(l)` with the empty-sum convention for negative `l`.
#[inline]
fn cum(prefix: &[f64], l: isize) -> f64 {
    if l < 0 {
        0.0
    } else {
        prefix[l as usize]
    }
}

fn g_from_values(grid: &GridInstance, point: &AxisValues, anchor: &AxisValues, prefix: &mut Vec<f64>) -> f64 {
    let n = grid.n() as isize;
    let sigma = grid.sigma() as isize;
    let delta = grid.delta() as isize;
    let a = grid.xcoeffs().a();
    prefix_sums(grid, point, anchor, prefix);
    let mut g = 0.0;
    for j in 0..grid.n() {
        let jj = j as isize;
        let inner = cum(prefix, n - jj + delta) + cum(prefix, n - jj + sigma - delta - 1);
        g += a[j] * point.p[j] * anchor.p[j] * inner;
    }
    let nn = grid.n();
    g + a[0] * point.p[nn] * anchor.p[nn] * (cum(prefix, sigma - delta - 1) + cum(prefix, delta))
}

/// The kernel `K_e(point; anchor)` for `-1 <= e <= max(sigma - 1, 0)`.
pub fn kernel_k(grid: &GridInstance, delta_param: isize, point: (f64, f64), anchor: (f64, f64)) -> Result<f64> {
    require_n(grid)?;
    let upper = (grid.sigma() as isize - 1).max(0);
    if delta_param < -1 || delta_param > upper {
        return Err(Error::InvalidArgument(format!(
            "kernel index {delta_param} outside [-1, {upper}] for sigma = {}",
            grid.sigma()
        )));
    }
    let pv = AxisValues::at(grid, point);
    let av = AxisValues::at(grid, anchor);
    let mut prefix = Vec::new();
    prefix_sums(grid, &pv, &av, &mut prefix);
    let n = grid.n() as isize;
    let a = grid.xcoeffs().a();
    Ok((0..grid.n())
        .map(|j| a[j] * pv.p[j] * av.p[j] * cum(&prefix, n - j as isize + delta_param))
        .sum())
}

/// The boundary term `J(point; anchor)`.
pub fn boundary_j(grid: &GridInstance, point: (f64, f64), anchor: (f64, f64)) -> Result<f64> {
    require_n(grid)?;
    let pv = AxisValues::at(grid, point);
    let av = AxisValues::at(grid, anchor);
    let mut prefix = Vec::new();
    prefix_sums(grid, &pv, &av, &mut prefix);
    let sigma = grid.sigma() as isize;
    let delta = grid.delta() as isize;
    let n = grid.n();
    Ok(grid.xcoeffs().a()[0]
        * pv.p[n]
        * av.p[n]
        * (cum(&prefix, sigma - delta - 1) + cum(&prefix, delta)))
}

/// The unnormalized reproducing function `G(point; anchor)`.
pub fn eval_g(grid: &GridInstance, point: (f64, f64), anchor: (f64, f64)) -> Result<f64> {
    require_n(grid)?;
    let pv = AxisValues::at(grid, point);
    let av = AxisValues::at(grid, anchor);
    Ok(g_from_values(grid, &pv, &av, &mut Vec::new()))
}

/// Dense power-basis coefficients of `G(.; anchor)`: entry `(i, k)` is the
/// coefficient of `x^i y^k`, for `i <= n`, `k <= n + sigma`.
pub fn g_dense_coeffs(grid: &GridInstance, anchor: (f64, f64)) -> Result<DMatrix<f64>> {
    require_n(grid)?;
    let n = grid.n();
    let ny = n + grid.sigma();
    let sigma = grid.sigma() as isize;
    let delta = grid.delta() as isize;
    let px = grid.xcoeffs().monomial_expansion(n);
    let qy = grid.ycoeffs().monomial_expansion(ny);
    let av = AxisValues::at(grid, anchor);
    let a = grid.xcoeffs().a();

    let mut out = DMatrix::zeros(n + 1, ny + 1);
    let mut accumulate = |xpoly: &[f64], weight: f64, caps: [isize; 2]| {
        let mut ypoly = vec![0.0; ny + 1];
        for k in 0..=ny {
            let mult = caps.iter().filter(|&&cap| k as isize <= cap).count() as f64;
            if mult == 0.0 {
                continue;
            }
            let w = mult * c_ext(grid, k) * av.q[k];
            for (i, c) in qy[k].iter().enumerate() {
                ypoly[i] += w * c;
            }
        }
        for (i, xc) in xpoly.iter().enumerate() {
            for (k, yc) in ypoly.iter().enumerate() {
                out[(i, k)] += weight * xc * yc;
            }
        }
    };
    let nn = n as isize;
    for j in 0..n {
        let jj = j as isize;
        accumulate(&px[j], a[j] * av.p[j], [nn - jj + delta, nn - jj + sigma - delta - 1]);
    }
    accumulate(&px[n], a[0] * av.p[n], [sigma - delta - 1, delta]);
    Ok(out)
}

fn check_anchor(grid: &GridInstance, anchor: &GridPoint) -> Result<()> {
    let ok = anchor.r < grid.xnodes().len()
        && anchor.u < grid.ynodes().len()
        && grid.xnodes()[anchor.r] == anchor.x
        && grid.ynodes()[anchor.u] == anchor.y;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "anchor ({}, {}) at ({}, {}) is not a grid node",
            anchor.r, anchor.u, anchor.x, anchor.y
        )))
    }
}

/// One Lagrange basis element, kept as grid data plus its anchor node.
#[derive(Debug, Clone)]
pub struct BasisFunction {
    grid: Arc<GridInstance>,
    anchor: GridPoint,
    delta: usize,
    normalizer: f64,
}

impl BasisFunction {
    /// Builds the element anchored at a grid node. Fails if the anchor is
    /// not a node of `grid` or if `G(anchor; anchor)` is not positive.
    pub fn new(grid: Arc<GridInstance>, anchor: GridPoint) -> Result<Self> {
        require_n(&grid)?;
        check_anchor(&grid, &anchor)?;
        let normalizer = eval_g(&grid, (anchor.x, anchor.y), (anchor.x, anchor.y))?;
        if !(normalizer > 0.0) || !normalizer.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "G at anchor ({}, {}) is {normalizer}, expected positive",
                anchor.r, anchor.u
            )));
        }
        Ok(BasisFunction {
            delta: grid.delta(),
            grid,
            anchor,
            normalizer,
        })
    }

    pub fn anchor(&self) -> GridPoint {
        self.anchor
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// Total degree bound `n + delta`.
    pub fn degree(&self) -> usize {
        self.grid.n() + self.delta
    }

    pub fn grid(&self) -> &Arc<GridInstance> {
        &self.grid
    }

    /// `L(point; anchor)`.
    pub fn eval(&self, point: (f64, f64)) -> f64 {
        let pv = AxisValues::at(&self.grid, point);
        let av = AxisValues::at(&self.grid, (self.anchor.x, self.anchor.y));
        g_from_values(&self.grid, &pv, &av, &mut Vec::new()) / self.normalizer
    }
}

/// All basis elements of one checkerboard set, with anchor-side recurrence
/// values cached so that one point evaluates every element in
/// `O(N (n + sigma))`.
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    grid: Arc<GridInstance>,
    set: CheckerboardSet,
    anchors: Vec<AxisValues>,
    normalizers: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(grid: Arc<GridInstance>, set: CheckerboardSet) -> Result<Self> {
        require_n(&grid)?;
        let mut anchors = Vec::with_capacity(set.count());
        let mut normalizers = Vec::with_capacity(set.count());
        let mut prefix = Vec::new();
        for p in set.points() {
            check_anchor(&grid, p)?;
            let av = AxisValues::at(&grid, (p.x, p.y));
            let g = g_from_values(&grid, &av, &av, &mut prefix);
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "G at anchor ({}, {}) is {g}, expected positive",
                    p.r, p.u
                )));
            }
            anchors.push(av);
            normalizers.push(g);
        }
        Ok(LagrangeBasis {
            grid,
            set,
            anchors,
            normalizers,
        })
    }

    pub fn grid(&self) -> &Arc<GridInstance> {
        &self.grid
    }

    pub fn set(&self) -> &CheckerboardSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    pub fn element(&self, i: usize) -> BasisFunction {
        BasisFunction {
            grid: Arc::clone(&self.grid),
            anchor: self.set.points()[i],
            delta: self.grid.delta(),
            normalizer: self.normalizers[i],
        }
    }

    /// Values of every basis element at `point`, in set order.
    pub fn eval_all(&self, point: (f64, f64)) -> Vec<f64> {
        let pv = AxisValues::at(&self.grid, point);
        let mut prefix = Vec::new();
        self.anchors
            .iter()
            .zip(&self.normalizers)
            .map(|(av, norm)| g_from_values(&self.grid, &pv, av, &mut prefix) / norm)
            .collect()
    }

    /// `max_{i,j} |L_j(node_i) - [i == j]|` over the set.
    pub fn max_delta_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, p) in self.set.points().iter().enumerate() {
            for (j, v) in self.eval_all((p.x, p.y)).into_iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }
}
