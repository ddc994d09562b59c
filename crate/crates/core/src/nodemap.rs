//! The correspondence between recurrence coefficients and node sequences.
//!
//! Valid coefficients (positive `a_k`, reflected `a_k`/`b_k`) determine a
//! unique strictly decreasing node sequence satisfying the alternation
//! condition `p_{n-k}(x_j) = (-1)^j p_k(x_j)`. The forward direction is
//! constructive ([`nodes_from_coeffs`]); the reverse direction is solved
//! numerically ([`coeffs_from_nodes`]). For even `n` the coefficients are
//! only determined up to the scaling of [`gamma_rescale`], and the inverse
//! fixes `a_0 = 1`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orthopoly::{ComboSpec, RecurrenceCoeffs};

/// Relative tolerance of the alternation postcondition.
pub const ALTERNATION_TOL: f64 = 1e-9;
/// Minimum node gap, relative to the span, accepted on construction.
pub const MIN_GAP_REL: f64 = 1e-12;

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_MAX_HALVINGS: usize = 20;
const FD_STEP: f64 = 1e-6;
const NEWTON_TARGET: f64 = 1e-13;
const NEWTON_ACCEPT: f64 = 1e-10;
const CONTINUATION_ITER: usize = 30;
const CONTINUATION_MIN_STEP: f64 = 1e-6;

/// A strictly decreasing sequence of abscissas `x_0 > x_1 > ... > x_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeSequence {
    nodes: Vec<f64>,
}

impl NodeSequence {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidNodes("empty node sequence".into()));
        }
        if let Some(i) = nodes.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidNodes(format!("node {i} is not finite")));
        }
        let span = nodes[0] - nodes[nodes.len() - 1];
        for (r, w) in nodes.windows(2).enumerate() {
            if !(w[0] - w[1] > MIN_GAP_REL * span) {
                return Err(Error::InvalidNodes(format!(
                    "not strictly decreasing at index {r}: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(NodeSequence { nodes })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of the last node, i.e. the `n` of `x_0, ..., x_n`.
    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn span(&self) -> f64 {
        self.nodes[0] - self.nodes[self.nodes.len() - 1]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.nodes
    }
}

impl std::ops::Index<usize> for NodeSequence {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.nodes[i]
    }
}

impl<'de> Deserialize<'de> for NodeSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            nodes: Vec<f64>,
        }
        let raw = Raw::deserialize(d)?;
        NodeSequence::new(raw.nodes).map_err(serde::de::Error::custom)
    }
}

/// Nodes determined by the coefficients.
///
/// For `n = 2m-1` the nodes are the zeros of `p_m - p_{m-1}` (even
/// positions) merged with the zeros of `p_m + p_{m-1}` (odd positions); for
/// `n = 2m` the odd positions are the zeros of `p_m` and the even positions
/// the zeros of `p_{m+1} - p_{m-1}`. The alternation condition is checked on
/// the result.
pub fn nodes_from_coeffs(coeffs: &RecurrenceCoeffs) -> Result<NodeSequence> {
    let nodes = nodes_unchecked(coeffs)?;
    let defect = alternation_defect(coeffs, nodes.as_slice());
    if defect > ALTERNATION_TOL {
        return Err(Error::Postcondition(format!(
            "alternation defect {defect:e} exceeds {ALTERNATION_TOL:e}"
        )));
    }
    Ok(nodes)
}

fn nodes_unchecked(coeffs: &RecurrenceCoeffs) -> Result<NodeSequence> {
    let n = coeffs.n();
    if n == 0 {
        return Err(Error::InvalidCoefficients(
            "n = 0 does not determine a node".into(),
        ));
    }
    let m = n / 2;
    let (even, odd) = if n % 2 == 1 {
        let m = m + 1;
        (
            coeffs.combo_zeros(ComboSpec::PmMinusPrev { m })?,
            coeffs.combo_zeros(ComboSpec::PmPlusPrev { m })?,
        )
    } else {
        (
            coeffs.combo_zeros(ComboSpec::NextMinusPrev { m })?,
            coeffs.combo_zeros(ComboSpec::P { m })?,
        )
    };
    let mut merged = Vec::with_capacity(n + 1);
    for j in 0..=n {
        merged.push(if j % 2 == 0 { even[j / 2] } else { odd[j / 2] });
    }
    NodeSequence::new(merged).map_err(|e| match e {
        Error::InvalidNodes(msg) => {
            Error::InvalidCoefficients(format!("merged zeros do not interleave: {msg}"))
        }
        other => other,
    })
}

/// Largest violation of `p_{n-k}(x_j) = (-1)^j p_k(x_j)` over all `j, k`.
///
/// Each residual is measured against the first-order size of the values at
/// that node, `max_k |p_k(x_j)| + R max_k |p_k'(x_j)|` with `R` the larger of
/// the node span and `|x_j|`, so the result reads as a relative backward
/// error in the node positions.
pub fn alternation_defect(coeffs: &RecurrenceCoeffs, nodes: &[f64]) -> f64 {
    let n = coeffs.n();
    let span = match nodes {
        [first, .., last] => first - last,
        _ => 0.0,
    };
    let mut vals = Vec::with_capacity(n + 1);
    let mut ders = Vec::with_capacity(n + 1);
    let mut worst = 0.0_f64;
    for (j, &x) in nodes.iter().enumerate() {
        coeffs.eval_with_derivative(x, n, &mut vals, &mut ders);
        let vmax = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let dmax = ders.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let scale = vmax + span.max(x.abs()) * dmax;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        for k in 0..=n {
            let d = (vals[n - k] - sign * vals[k]).abs() / scale;
            worst = worst.max(d);
        }
    }
    worst
}

/// Rescales even-indexed coefficients by `gamma` and odd-indexed ones by
/// `1/gamma`. Only defined for even `n`, where it leaves the nodes fixed.
pub fn gamma_rescale(coeffs: &RecurrenceCoeffs, gamma: f64) -> Result<RecurrenceCoeffs> {
    let n = coeffs.n();
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "gamma rescaling needs even n, got n = {n}"
        )));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    if n == 0 {
        return Ok(coeffs.clone());
    }
    let h = RecurrenceCoeffs::free_len(n);
    let factor = |k: usize| if k % 2 == 0 { gamma } else { 1.0 / gamma };
    let a: Vec<f64> = (0..h).map(|k| coeffs.a()[k] * factor(k)).collect();
    let b: Vec<f64> = (0..h).map(|k| coeffs.b()[k] * factor(k)).collect();
    RecurrenceCoeffs::from_half(n, &a, &b)
}

/// Coefficients of the sequence `x -> p_k(scale * x + shift)`.
///
/// If `coeffs` has nodes `t_j`, the result has nodes `(t_j - shift) / scale`.
pub fn affine_substitute(coeffs: &RecurrenceCoeffs, scale: f64, shift: f64) -> Result<RecurrenceCoeffs> {
    if !(scale > 0.0) || !scale.is_finite() || !shift.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "affine map needs positive finite scale, got {scale}"
        )));
    }
    let n = coeffs.n();
    if n == 0 {
        return Ok(coeffs.clone());
    }
    let h = RecurrenceCoeffs::free_len(n);
    let a: Vec<f64> = coeffs.a()[..h].iter().map(|a| a * scale).collect();
    let b: Vec<f64> = coeffs.a()[..h]
        .iter()
        .zip(&coeffs.b()[..h])
        .map(|(a, b)| b + a * shift)
        .collect();
    RecurrenceCoeffs::from_half(n, &a, &b)
}

/// The reference family `a = (1, 2, ..., 2)`, `b = 0`, whose nodes are
/// `cos(j pi / n)`.
pub fn reference_coeffs(n: usize) -> Result<RecurrenceCoeffs> {
    let h = RecurrenceCoeffs::free_len(n);
    let a: Vec<f64> = (0..h).map(|k| if k == 0 { 1.0 } else { 2.0 }).collect();
    RecurrenceCoeffs::from_half(n, &a, &vec![0.0; h])
}

/// Free unknowns of the inverse map. For even `n`, `a_0` is pinned to 1.
struct Unknowns {
    n: usize,
}

impl Unknowns {
    fn len(&self) -> usize {
        self.n + 1
    }

    fn pack(&self, c: &RecurrenceCoeffs) -> DVector<f64> {
        let h = RecurrenceCoeffs::free_len(self.n);
        let a_start = if self.n % 2 == 0 { 1 } else { 0 };
        let mut v: Vec<f64> = c.a()[a_start..h].to_vec();
        v.extend_from_slice(&c.b()[..h]);
        DVector::from_vec(v)
    }

    fn unpack(&self, v: &DVector<f64>) -> Result<RecurrenceCoeffs> {
        let h = RecurrenceCoeffs::free_len(self.n);
        let (a, b) = if self.n % 2 == 0 {
            let mut a = vec![1.0];
            a.extend(v.iter().take(h - 1));
            (a, v.iter().skip(h - 1).copied().collect::<Vec<_>>())
        } else {
            (
                v.iter().take(h).copied().collect::<Vec<_>>(),
                v.iter().skip(h).copied().collect::<Vec<_>>(),
            )
        };
        RecurrenceCoeffs::from_half(self.n, &a, &b)
    }
}

/// Recovers coefficients whose nodes are `nodes` (with `a_0 = 1` when `n`
/// is even) by damped Newton iteration on the forward map, started from
/// the affine image of [`reference_coeffs`]. When Newton stalls, the
/// target is approached along a path from the reference nodes, re-solving
/// at each intermediate node sequence.
pub fn coeffs_from_nodes(nodes: &NodeSequence) -> Result<RecurrenceCoeffs> {
    let n = nodes.degree();
    if n == 0 {
        return Err(Error::InvalidNodes(
            "a single node does not determine coefficients".into(),
        ));
    }
    let x = DVector::from_column_slice(nodes.as_slice());
    let scale = nodes.span().max(x.amax());
    let unknowns = Unknowns { n };

    let alpha = 0.5 * nodes.span();
    let beta = 0.5 * (nodes[0] + nodes[n]);
    let mut start = affine_substitute(&reference_coeffs(n)?, 1.0 / alpha, -beta / alpha)?;
    if n % 2 == 0 {
        start = gamma_rescale(&start, 1.0 / start.a()[0])?;
    }
    let x0 = DVector::from_column_slice(nodes_unchecked(&start)?.as_slice());
    let mut theta = unknowns.pack(&start);

    let (direct, norm) = newton(&unknowns, theta.clone(), &x, scale, NEWTON_MAX_ITER)?;
    let mut iterations = NEWTON_MAX_ITER;
    if norm <= NEWTON_ACCEPT * scale {
        theta = direct;
    } else {
        let mut t = 0.0_f64;
        let mut dt = 0.25_f64;
        while t < 1.0 {
            let next = (t + dt).min(1.0);
            let target = path_point(&x0, &x, next);
            let (trial, norm) = newton(&unknowns, theta.clone(), &target, scale, CONTINUATION_ITER)?;
            iterations += CONTINUATION_ITER;
            if norm <= NEWTON_ACCEPT * scale {
                theta = trial;
                t = next;
                dt = (2.0 * dt).min(1.0);
            } else {
                dt *= 0.5;
                if dt < CONTINUATION_MIN_STEP {
                    return Err(Error::NonConvergence { iterations, residual: norm });
                }
            }
        }
        let (last, norm) = newton(&unknowns, theta, &x, scale, NEWTON_MAX_ITER)?;
        if norm > NEWTON_ACCEPT * scale {
            return Err(Error::NonConvergence { iterations, residual: norm });
        }
        theta = last;
    }
    let out = unknowns.unpack(&theta)?;
    nodes_from_coeffs(&out)?;
    Ok(out)
}

/// Node sequence at parameter `t` on the path from `x0` to `x1`: the top
/// node moves linearly and every gap interpolates geometrically.
fn path_point(x0: &DVector<f64>, x1: &DVector<f64>, t: f64) -> DVector<f64> {
    let mut out = DVector::zeros(x0.len());
    out[0] = (1.0 - t) * x0[0] + t * x1[0];
    for i in 1..x0.len() {
        let g0 = x0[i - 1] - x0[i];
        let g1 = x1[i - 1] - x1[i];
        out[i] = out[i - 1] - g0.powf(1.0 - t) * g1.powf(t);
    }
    out
}

/// Damped Newton with a central-difference Jacobian, from `theta` towards
/// coefficients whose nodes are `x`. Returns the best iterate and its
/// residual (max norm).
fn newton(
    unknowns: &Unknowns,
    mut theta: DVector<f64>,
    x: &DVector<f64>,
    scale: f64,
    max_iter: usize,
) -> Result<(DVector<f64>, f64)> {
    let residual = |theta: &DVector<f64>| -> Result<DVector<f64>> {
        let c = unknowns.unpack(theta)?;
        let got = nodes_unchecked(&c)?;
        Ok(DVector::from_column_slice(got.as_slice()) - x)
    };
    let mut r = residual(&theta)?;
    let mut norm = r.amax();
    let dim = unknowns.len();
    for _ in 0..max_iter {
        if norm <= NEWTON_TARGET * scale {
            break;
        }
        let mut jac = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let h = FD_STEP * theta[i].abs().max(1.0);
            let mut plus = theta.clone();
            let mut minus = theta.clone();
            plus[i] += h;
            minus[i] -= h;
            let col = match (residual(&plus), residual(&minus)) {
                (Ok(p), Ok(m)) => (p - m) / (2.0 * h),
                _ => return Ok((theta, norm)),
            };
            jac.set_column(i, &col);
        }
        let Some(step) = jac.lu().solve(&(-&r)) else {
            break;
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=NEWTON_MAX_HALVINGS {
            let trial = &theta + &step * lambda;
            if let Ok(rt) = residual(&trial) {
                let nt = rt.amax();
                if nt < norm {
                    theta = trial;
                    r = rt;
                    norm = nt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok((theta, norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn coeffs(a: &[f64], b: &[f64]) -> RecurrenceCoeffs {
        RecurrenceCoeffs::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn assert_nodes(got: &NodeSequence, want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.as_slice().iter().zip(want) {
            assert_abs_diff_eq!(*g, *w, epsilon = tol);
        }
    }

    #[test]
    fn forward_small_cases() {
        assert_nodes(&nodes_from_coeffs(&coeffs(&[2.0], &[0.0])).unwrap(), &[0.5, -0.5], 1e-13);
        assert_nodes(
            &nodes_from_coeffs(&coeffs(&[1.0, 2.0], &[0.0, 0.0])).unwrap(),
            &[1.0, 0.0, -1.0],
            1e-13,
        );
        assert_nodes(
            &nodes_from_coeffs(&coeffs(&[1.0, 2.0, 2.0], &[0.0; 3])).unwrap(),
            &[1.0, 0.5, -0.5, -1.0],
            1e-13,
        );
    }

    #[test]
    fn reference_family_gives_cosine_nodes() {
        for n in 1..=9 {
            let nodes = nodes_from_coeffs(&reference_coeffs(n).unwrap()).unwrap();
            let want: Vec<f64> = (0..=n)
                .map(|j| (j as f64 * std::f64::consts::PI / n as f64).cos())
                .collect();
            assert_nodes(&nodes, &want, 1e-13);
        }
    }

    #[test]
    fn inverse_small_cases() {
        // n = 1 in closed form: a_0 = 2/(x_0 - x_1), b_0 = -a_0 (x_0 + x_1)/2.
        let c = coeffs_from_nodes(&NodeSequence::new(vec![0.5, -0.5]).unwrap()).unwrap();
        assert_abs_diff_eq!(c.a()[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.b()[0], 0.0, epsilon = 1e-12);
        let c = coeffs_from_nodes(&NodeSequence::new(vec![3.0, 1.0]).unwrap()).unwrap();
        assert_abs_diff_eq!(c.a()[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.b()[0], -2.0, epsilon = 1e-12);

        let c = coeffs_from_nodes(&NodeSequence::new(vec![1.0, 0.0, -1.0]).unwrap()).unwrap();
        for (g, w) in c.a().iter().zip([1.0, 2.0]) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-10);
        }
        for g in c.b() {
            assert_abs_diff_eq!(*g, 0.0, epsilon = 1e-10);
        }

        let c = coeffs_from_nodes(&NodeSequence::new(vec![1.0, 0.5, -0.5, -1.0]).unwrap()).unwrap();
        for (g, w) in c.a().iter().zip([1.0, 2.0, 2.0]) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-10);
        }
    }

    #[test]
    fn gamma_rescale_rules() {
        let c = coeffs(&[1.0, 2.0], &[0.0, 0.0]);
        let g = gamma_rescale(&c, 3.0).unwrap();
        assert_abs_diff_eq!(g.a()[0], 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.a()[1], 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(g.b(), &[0.0, 0.0]);
        assert_nodes(&nodes_from_coeffs(&g).unwrap(), &[1.0, 0.0, -1.0], 1e-13);
        assert_eq!(gamma_rescale(&c, 1.0).unwrap(), c);
        assert!(gamma_rescale(&c, 0.0).is_err());
        assert!(gamma_rescale(&c, -2.0).is_err());
        assert!(gamma_rescale(&coeffs(&[2.0], &[0.0]), 2.0).is_err());
    }

    #[test]
    fn node_validation() {
        assert!(NodeSequence::new(vec![]).is_err());
        assert!(NodeSequence::new(vec![1.0, 1.0]).is_err());
        assert!(NodeSequence::new(vec![0.0, 1.0]).is_err());
        assert!(NodeSequence::new(vec![1.0, f64::NAN]).is_err());
        assert!(NodeSequence::new(vec![0.3]).is_ok());
        let s: NodeSequence = serde_json::from_str(r#"{"nodes":[1.0,0.5,0.5]}"#).unwrap_or_else(|_| {
            NodeSequence::new(vec![9.0]).unwrap()
        });
        assert_eq!(s.as_slice(), &[9.0]);
    }

    #[test]
    fn affine_substitute_moves_nodes() {
        let c = reference_coeffs(4).unwrap();
        // t = 2x + 1  =>  x = (t - 1)/2
        let s = affine_substitute(&c, 2.0, 1.0).unwrap();
        let want: Vec<f64> = nodes_from_coeffs(&c)
            .unwrap()
            .as_slice()
            .iter()
            .map(|t| (t - 1.0) / 2.0)
            .collect();
        assert_nodes(&nodes_from_coeffs(&s).unwrap(), &want, 1e-13);
    }
}
