//! Seeded generators for random valid instances, shared by the examples,
//! the test suites and the CLI's `--seed` option.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::checkerboard::GridInstance;
use crate::error::Result;
use crate::nodemap::NodeSequence;
use crate::orthopoly::RecurrenceCoeffs;

/// Range of the random `a_k`.
pub const A_RANGE: (f64, f64) = (0.5, 3.0);
/// Range of the random `b_k`.
pub const B_RANGE: (f64, f64) = (-1.0, 1.0);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Reflection-symmetric coefficients with `a_k` in [`A_RANGE`] and `b_k` in
/// [`B_RANGE`]; `a_0 = 1` when `n` is even.
pub fn random_coeffs<R: Rng>(rng: &mut R, n: usize) -> Result<RecurrenceCoeffs> {
    let h = RecurrenceCoeffs::free_len(n);
    let mut a: Vec<f64> = (0..h).map(|_| rng.random_range(A_RANGE.0..=A_RANGE.1)).collect();
    let b: Vec<f64> = (0..h).map(|_| rng.random_range(B_RANGE.0..=B_RANGE.1)).collect();
    if n % 2 == 0 {
        a[0] = 1.0;
    }
    RecurrenceCoeffs::from_half(n, &a, &b)
}

/// Grid generated by random coefficient sequences of lengths `n` and `n + sigma`.
pub fn random_grid<R: Rng>(rng: &mut R, n: usize, sigma: usize) -> Result<GridInstance> {
    let x = random_coeffs(rng, n)?;
    let y = random_coeffs(rng, n + sigma)?;
    GridInstance::from_coeffs(x, y)
}

/// `n + 1` random strictly decreasing nodes whose smallest gap is at least
/// `min_gap_rel` times the span. Requires `n * min_gap_rel < 1`.
pub fn random_nodes<R: Rng>(rng: &mut R, n: usize, min_gap_rel: f64) -> Result<NodeSequence> {
    assert!(n >= 1 && (n as f64) * min_gap_rel < 1.0);
    // Gaps in [1, w] keep min/sum >= 1 / (1 + (n-1) w) >= min_gap_rel.
    let w = if n == 1 {
        2.0
    } else {
        ((1.0 / min_gap_rel - 1.0) / (n - 1) as f64).max(1.0)
    };
    let gaps: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..=w)).collect();
    let total: f64 = gaps.iter().sum();
    let span = rng.random_range(0.5..=4.0);
    let top = rng.random_range(-2.0..=2.0);
    let mut nodes = vec![top];
    let mut acc = 0.0;
    for g in &gaps {
        acc += g;
        nodes.push(top - span * acc / total);
    }
    NodeSequence::new(nodes)
}
