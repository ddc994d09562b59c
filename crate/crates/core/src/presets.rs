//! Classical node families as ready-made grids.

use std::f64::consts::PI;

use crate::checkerboard::GridInstance;
use crate::error::{Error, Result};
use crate::nodemap::NodeSequence;

/// Padua grid of degree `n`: `x_r = cos(r pi / n)`, `y_u = cos(u pi / (n + 1))`,
/// `sigma = 1`. Both checkerboard sets are Padua point sets.
pub fn padua_grid(n: usize) -> Result<GridInstance> {
    if n == 0 {
        return Err(Error::InvalidArgument("Padua grids need n >= 1".into()));
    }
    let x = cosines(n + 1, |r| r as f64 * PI / n as f64);
    let y = cosines(n + 2, |u| u as f64 * PI / (n + 1) as f64);
    GridInstance::from_nodes(NodeSequence::new(x)?, NodeSequence::new(y)?)
}

/// `sigma = 0` grid whose `n + 1` abscissas on both axes are the zeros of
/// `T_{n+1}`, `cos((2r + 1) pi / (2n + 2))`.
pub fn chebyshev_grid(n: usize) -> Result<GridInstance> {
    let nodes = cosines(n + 1, |r| (2 * r + 1) as f64 * PI / (2 * n + 2) as f64);
    let seq = NodeSequence::new(nodes)?;
    GridInstance::from_nodes(seq.clone(), seq)
}

/// Looks up a preset by its CLI name.
pub fn preset(name: &str, n: usize) -> Result<GridInstance> {
    match name {
        "padua" => padua_grid(n),
        "chebyshev" => chebyshev_grid(n),
        other => Err(Error::InvalidArgument(format!(
            "unknown preset {other:?}; expected \"padua\" or \"chebyshev\""
        ))),
    }
}

fn cosines(count: usize, angle: impl Fn(usize) -> f64) -> Vec<f64> {
    // cos(pi/2) is not exactly zero in floating point; snap symmetric pairs.
    let mut v: Vec<f64> = (0..count).map(|i| angle(i).cos()).collect();
    for i in 0..count / 2 {
        let m = 0.5 * (v[i] - v[count - 1 - i]);
        v[i] = m;
        v[count - 1 - i] = -m;
    }
    if count % 2 == 1 {
        v[count / 2] = 0.0;
    }
    v
}
