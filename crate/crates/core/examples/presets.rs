//! Padua and Chebyshev grids through the full pipeline.
//!
//! `cargo run --release --example presets`

use checkerboard_lagrange::presets::{chebyshev_grid, padua_grid};
use checkerboard_lagrange::verify::verify;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("grid       n  tau  rank/N   M  delta error  span  quotient");
    for n in 1..=10 {
        for (name, grid) in [("padua", padua_grid(n)?), ("chebyshev", chebyshev_grid(n)?)] {
            for tau in 0..2u8 {
                let r = verify(&grid, tau, n <= 8)?;
                println!(
                    "{name:<10}{n:2}  {tau:3}  {:3}/{:<3} {:2}  {:<11.2e}  {:5} {}",
                    r.rank,
                    r.n_tau,
                    r.m,
                    r.max_delta_error,
                    r.span_equal,
                    r.quotient_unique.map_or("-".to_string(), |q| q.to_string())
                );
            }
        }
    }
    Ok(())
}
