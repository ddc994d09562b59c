//! Rank, null-space and quotient-uniqueness checks, on a valid set and on
//! one with a duplicated node.
//!
//! `cargo run --example verify_grid`

use checkerboard_lagrange::checkerboard::build_checkerboard;
use checkerboard_lagrange::random::{random_grid, rng};
use checkerboard_lagrange::verify::{duplicate_point, verify, verify_set};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = random_grid(&mut rng(5), 4, 2)?;
    let report = verify(&grid, 1, true)?;
    println!("valid set:\n{}", serde_json::to_string_pretty(&report)?);
    println!("passed: {}", report.passed());

    let set = build_checkerboard(&grid, 1)?;
    let bad = duplicate_point(&set, 0, 5)?;
    let report = verify_set(&grid, &bad, true)?;
    println!("\nduplicated node:\n{}", serde_json::to_string_pretty(&report)?);
    println!("passed: {}", report.passed());
    Ok(())
}
