//! Orthogonal polynomial sequences generated by the symmetric three-term
//! recurrence
//!
//! ```text
//! p_0(x) = 1,  p_1(x) = a_0 x + b_0,
//! p_{k+1}(x) + p_{k-1}(x) = (a_k x + b_k) p_k(x),   1 <= k <= n-1,
//! ```
//!
//! together with the zero finders needed to map coefficient data onto node
//! sequences.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the reflection condition on coefficients read
/// from external sources.
pub const REFLECTION_TOL: f64 = 1e-12;

/// Maximum number of step doublings when capping an unbounded bracket.
const MAX_DOUBLINGS: usize = 64;

/// Coefficient pairs `(a_k, b_k)`, `0 <= k < n`, of the recurrence.
///
/// Invariants: `a_k > 0` for every `k`, and the palindromic reflection
/// `a_k = a_{n-k}`, `b_k = b_{n-k}` for `1 <= k <= n-1`. The reflection is
/// stored exactly: constructors mirror the lower half onto the upper half.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceCoeffs {
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl RecurrenceCoeffs {
    /// Validates positivity and reflection (to [`REFLECTION_TOL`] relative)
    /// and stores an exactly reflected copy.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidCoefficients(format!(
                "length mismatch: a has {}, b has {}",
                a.len(),
                b.len()
            )));
        }
        let n = a.len();
        if let Some(k) = a.iter().chain(&b).position(|v| !v.is_finite()) {
            return Err(Error::InvalidCoefficients(format!(
                "non-finite entry at flat index {k}"
            )));
        }
        if let Some(k) = a.iter().position(|&v| v <= 0.0) {
            return Err(Error::InvalidCoefficients(format!(
                "positivity violated: a_{k} = {}",
                a[k]
            )));
        }
        let amax = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for k in 1..n {
            let j = n - k;
            for (name, seq) in [("a", &a), ("b", &b)] {
                let (u, v) = (seq[k], seq[j]);
                let scale = u.abs().max(v.abs()).max(amax);
                if (u - v).abs() > REFLECTION_TOL * scale {
                    return Err(Error::InvalidCoefficients(format!(
                        "reflection violated: {name}_{k} = {u} but {name}_{j} = {v}"
                    )));
                }
            }
        }
        if n == 0 {
            return Ok(Self::empty());
        }
        Self::from_half(n, &a[..=n / 2], &b[..=n / 2])
    }

    /// The degenerate sequence with `n = 0` (only `p_0 = 1`).
    pub fn empty() -> Self {
        RecurrenceCoeffs {
            n: 0,
            a: Vec::new(),
            b: Vec::new(),
        }
    }

    /// Builds a length-`n` sequence from the free entries `k = 0..=n/2` by
    /// mirroring `k -> n-k`.
    pub fn from_half(n: usize, a_half: &[f64], b_half: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCoefficients("n must be positive".into()));
        }
        let need = Self::free_len(n);
        if a_half.len() < need || b_half.len() < need {
            return Err(Error::InvalidCoefficients(format!(
                "need {need} free entries for n = {n}"
            )));
        }
        let idx = |k: usize| if k == 0 { 0 } else { k.min(n - k) };
        let a: Vec<f64> = (0..n).map(|k| a_half[idx(k)]).collect();
        let b: Vec<f64> = (0..n).map(|k| b_half[idx(k)]).collect();
        if let Some(k) = a.iter().position(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidCoefficients(format!(
                "positivity violated: a_{k} = {}",
                a[k]
            )));
        }
        if let Some(k) = b.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidCoefficients(format!("b_{k} is not finite")));
        }
        Ok(RecurrenceCoeffs { n, a, b })
    }

    /// Number of independent `(a_k, b_k)` pairs for a given `n`.
    pub fn free_len(n: usize) -> usize {
        n / 2 + 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Leading coefficient of `p_k`, i.e. `a_0 a_1 ... a_{k-1}`.
    pub fn leading_coefficient(&self, k: usize) -> f64 {
        self.a[..k].iter().product()
    }

    /// Evaluates `p_0(x), ..., p_upto(x)` by forward recurrence.
    pub fn eval_sequence(&self, x: f64, upto: usize) -> Result<PolySequenceEval> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("abscissa {x} is not finite")));
        }
        if upto > self.n {
            return Err(Error::InvalidArgument(format!(
                "upto = {upto} exceeds n = {}",
                self.n
            )));
        }
        let mut values = Vec::with_capacity(upto + 1);
        self.eval_into(x, upto, &mut values);
        Ok(PolySequenceEval { values })
    }

    /// Unchecked variant of [`eval_sequence`](Self::eval_sequence) writing
    /// into a caller-provided buffer. `upto` must not exceed `n`.
    ///
    /// The recurrence is carried in double-double arithmetic and each value
    /// is rounded once at the end, so the results stay accurate where the
    /// three terms of the recurrence nearly cancel.
    pub(crate) fn eval_into(&self, x: f64, upto: usize, out: &mut Vec<f64>) {
        out.clear();
        out.push(1.0);
        if upto == 0 {
            return;
        }
        let mut prev = Dd::ONE;
        let mut cur = Dd::affine(self.a[0], x, self.b[0]);
        out.push(cur.hi);
        for k in 1..upto {
            let next = Dd::affine(self.a[k], x, self.b[k]).mul(cur).sub(prev);
            out.push(next.hi);
            prev = cur;
            cur = next;
        }
    }

    /// Values and first derivatives of `p_0, ..., p_upto` at `x`.
    pub(crate) fn eval_with_derivative(&self, x: f64, upto: usize, vals: &mut Vec<f64>, ders: &mut Vec<f64>) {
        self.eval_into(x, upto, vals);
        ders.clear();
        ders.push(0.0);
        if upto == 0 {
            return;
        }
        ders.push(self.a[0]);
        for k in 1..upto {
            let d = self.a[k] * vals[k] + (self.a[k] * x + self.b[k]) * ders[k] - ders[k - 1];
            ders.push(d);
        }
    }

    /// Value of the single polynomial `p_k(x)`.
    pub(crate) fn eval_one(&self, x: f64, k: usize) -> f64 {
        if k == 0 {
            return 1.0;
        }
        let (mut prev, mut cur) = (Dd::ONE, Dd::affine(self.a[0], x, self.b[0]));
        for j in 1..k {
            let next = Dd::affine(self.a[j], x, self.b[j]).mul(cur).sub(prev);
            prev = cur;
            cur = next;
        }
        cur.hi
    }

    /// Power-basis coefficients (ascending) of `p_0, ..., p_upto`.
    pub fn monomial_expansion(&self, upto: usize) -> Vec<Vec<f64>> {
        assert!(upto <= self.n, "upto exceeds n");
        let mut out: Vec<Vec<f64>> = vec![vec![1.0]];
        if upto == 0 {
            return out;
        }
        out.push(vec![self.b[0], self.a[0]]);
        for k in 1..upto {
            let mut next = vec![0.0; k + 2];
            for (i, &c) in out[k].iter().enumerate() {
                next[i] += self.b[k] * c;
                next[i + 1] += self.a[k] * c;
            }
            for (i, &c) in out[k - 1].iter().enumerate() {
                next[i] -= c;
            }
            out.push(next);
        }
        out
    }

    /// Zeros of `p_m`, descending, as eigenvalues of the symmetric Jacobi
    /// matrix of the monic recurrence.
    pub fn zeros(&self, m: usize) -> Result<Vec<f64>> {
        if m > self.n {
            return Err(Error::InvalidArgument(format!(
                "p_{m} is not defined for n = {}",
                self.n
            )));
        }
        if m == 0 {
            return Ok(Vec::new());
        }
        let jacobi = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                -self.b[i] / self.a[i]
            } else if i.abs_diff(j) == 1 {
                let k = i.max(j);
                1.0 / (self.a[k] * self.a[k - 1]).sqrt()
            } else {
                0.0
            }
        });
        let mut z: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        z.sort_by(|u, v| v.total_cmp(u));
        self.polish(m, &mut z);
        Ok(z)
    }

    /// Refines eigenvalue estimates of the zeros of `p_m` by bracketing each
    /// one on the recurrence itself, within half the distance to its
    /// neighbours.
    fn polish(&self, m: usize, z: &mut [f64]) {
        let f = |x: f64| self.eval_one(x, m);
        let est = z.to_vec();
        for i in 0..est.len() {
            let c = est[i];
            let upper = if i == 0 { f64::INFINITY } else { 0.5 * (est[i - 1] + c) };
            let lower = if i + 1 == est.len() { f64::NEG_INFINITY } else { 0.5 * (c + est[i + 1]) };
            let fc = f(c);
            if fc == 0.0 {
                continue;
            }
            let mut h = 4.0 * f64::EPSILON * c.abs().max(f64::MIN_POSITIVE);
            for _ in 0..64 {
                let (lo, hi) = ((c - h).max(lower), (c + h).min(upper));
                let (flo, fhi) = (f(lo), f(hi));
                let found = if flo.signum() != fc.signum() {
                    bracketed_root(&f, lo, c).ok()
                } else if fhi.signum() != fc.signum() {
                    bracketed_root(&f, c, hi).ok()
                } else {
                    None
                };
                if let Some(r) = found {
                    z[i] = r;
                    break;
                }
                if lo == lower && hi == upper {
                    break;
                }
                h *= 4.0;
            }
        }
    }

    /// Zeros of one of the polynomial combinations in [`ComboSpec`],
    /// strictly decreasing.
    pub fn combo_zeros(&self, spec: ComboSpec) -> Result<Vec<f64>> {
        match spec {
            ComboSpec::P { m } => self.zeros(m),
            ComboSpec::PmMinusPrev { m } | ComboSpec::PmPlusPrev { m } => {
                if m == 0 || m > self.n {
                    return Err(Error::InvalidArgument(format!(
                        "p_m -/+ p_(m-1) needs 1 <= m <= n, got m = {m}, n = {}",
                        self.n
                    )));
                }
                let sign = if matches!(spec, ComboSpec::PmMinusPrev { .. }) { -1.0 } else { 1.0 };
                let f = |x: f64| self.eval_one(x, m) + sign * self.eval_one(x, m - 1);
                let u = self.zeros(m)?;
                let v = self.zeros(m - 1)?;
                // Difference: (u_1, inf), (u_2, v_1), ..., (u_m, v_{m-1}).
                // Sum:        (v_1, u_1), ..., (v_{m-1}, u_{m-1}), (-inf, u_m).
                let mut brackets = Vec::with_capacity(m);
                if sign < 0.0 {
                    brackets.push(Bracket::Above(u[0]));
                    for i in 1..m {
                        brackets.push(Bracket::Finite(u[i], v[i - 1]));
                    }
                } else {
                    for i in 0..m - 1 {
                        brackets.push(Bracket::Finite(v[i], u[i]));
                    }
                    brackets.push(Bracket::Below(u[m - 1]));
                }
                solve_brackets(&f, &brackets)
            }
            ComboSpec::NextMinusPrev { m } => {
                if m == 0 || m + 1 > self.n {
                    return Err(Error::InvalidArgument(format!(
                        "p_(m+1) - p_(m-1) needs 1 <= m <= n-1, got m = {m}, n = {}",
                        self.n
                    )));
                }
                let f = |x: f64| self.eval_one(x, m + 1) - self.eval_one(x, m - 1);
                let u = self.zeros(m)?;
                let mut brackets = Vec::with_capacity(m + 1);
                brackets.push(Bracket::Above(u[0]));
                for i in 1..m {
                    brackets.push(Bracket::Finite(u[i], u[i - 1]));
                }
                brackets.push(Bracket::Below(u[m - 1]));
                solve_brackets(&f, &brackets)
            }
        }
    }
}

impl<'de> Deserialize<'de> for RecurrenceCoeffs {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            a: Vec<f64>,
            b: Vec<f64>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.a.len() != raw.n {
            return Err(serde::de::Error::custom(format!(
                "n = {} but a has {} entries",
                raw.n,
                raw.a.len()
            )));
        }
        RecurrenceCoeffs::new(raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}

/// Values `p_0(x), ..., p_upto(x)` at one abscissa. `values[0] == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySequenceEval {
    pub values: Vec<f64>,
}

/// Selects which polynomial (or combination) [`RecurrenceCoeffs::combo_zeros`]
/// locates zeros of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComboSpec {
    /// `p_m`; `m` zeros.
    P { m: usize },
    /// `p_m - p_{m-1}`; `m` zeros.
    PmMinusPrev { m: usize },
    /// `p_m + p_{m-1}`; `m` zeros.
    PmPlusPrev { m: usize },
    /// `p_{m+1} - p_{m-1}`; `m + 1` zeros.
    NextMinusPrev { m: usize },
}

#[derive(Debug, Clone, Copy)]
enum Bracket {
    Finite(f64, f64),
    Above(f64),
    Below(f64),
}

fn solve_brackets<F: Fn(f64) -> f64>(f: &F, brackets: &[Bracket]) -> Result<Vec<f64>> {
    let mut roots = Vec::with_capacity(brackets.len());
    for br in brackets {
        let (lo, hi) = match *br {
            Bracket::Finite(lo, hi) => (lo, hi),
            Bracket::Above(lo) => (lo, expand(f, lo, 1.0)?),
            Bracket::Below(hi) => (expand(f, hi, -1.0)?, hi),
        };
        roots.push(bracketed_root(f, lo, hi)?);
    }
    roots.sort_by(|u, v| v.total_cmp(u));
    Ok(roots)
}

/// Walks outward from `start` in direction `dir` with doubling steps
/// (first offset 1.0) until `f` changes sign.
fn expand<F: Fn(f64) -> f64>(f: &F, start: f64, dir: f64) -> Result<f64> {
    let f0 = f(start);
    let mut step = 1.0;
    for _ in 0..MAX_DOUBLINGS {
        let x = start + dir * step;
        let fx = f(x);
        if fx == 0.0 || fx.signum() != f0.signum() {
            return Ok(x);
        }
        step *= 2.0;
    }
    let far = start + dir * step;
    Err(Error::NoSignChange {
        lo: start.min(far),
        hi: start.max(far),
    })
}

/// Bisection with secant steps: a secant trial is taken whenever the
/// previous step at least halved the bracket, otherwise the step bisects.
/// Runs until the bracket collapses to adjacent floats.
pub(crate) fn bracketed_root<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (mut flo, mut fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::NoSignChange { lo, hi });
    }
    let floor = 1e-3 * f64::EPSILON * (hi - lo + lo.abs() + hi.abs());
    let mut prev_width = f64::INFINITY;
    for _ in 0..400 {
        let width = hi - lo;
        let mid = 0.5 * (lo + hi);
        if width <= floor || mid <= lo || mid >= hi {
            break;
        }
        let mut x = if width > 0.5 * prev_width {
            mid
        } else {
            hi - fhi * (hi - lo) / (fhi - flo)
        };
        if !(x > lo && x < hi) {
            x = mid;
        }
        prev_width = width;
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    Ok(if flo.abs() < fhi.abs() { lo } else { hi })
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    /// `a * x + b`.
    fn affine(a: f64, x: f64, b: f64) -> Dd {
        let (p, pe) = two_prod(a, x);
        let (s, se) = two_sum(p, b);
        Dd::renorm(s, se + pe)
    }

    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::renorm(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn sub(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, -o.hi);
        Dd::renorm(s, e + (self.lo - o.lo))
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd { hi: s, lo: lo - (s - hi) }
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn split(a: f64) -> (f64, f64) {
    const FACTOR: f64 = 134_217_729.0; // 2^27 + 1
    let t = FACTOR * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}
