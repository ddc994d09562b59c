//! Interpolating the Runge function on Padua grids.
//!
//! `cargo run --release --example runge`

use std::sync::Arc;

use checkerboard_lagrange::interp::interpolate_fn;
use checkerboard_lagrange::presets::padua_grid;

fn runge(x: f64, y: f64) -> f64 {
    1.0 / (1.0 + 25.0 * (x * x + y * y))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lattice: Vec<f64> = (0..41).map(|i| -1.0 + i as f64 / 20.0).collect();
    println!(" n  nodes  sup error on 41x41");
    for n in 4..=16 {
        let p = interpolate_fn(Arc::new(padua_grid(n)?), 0, runge)?;
        let err = lattice
            .iter()
            .flat_map(|&x| lattice.iter().map(move |&y| (x, y)))
            .map(|(x, y)| (p.eval((x, y)) - runge(x, y)).abs())
            .fold(0.0, f64::max);
        println!("{n:2}  {:5}  {err:.4e}", p.values().len());
    }
    Ok(())
}
