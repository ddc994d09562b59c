//! Recovering recurrence coefficients from prescribed nodes.
//!
//! `cargo run --example inverse_map`

use checkerboard_lagrange::nodemap::{coeffs_from_nodes, gamma_rescale, nodes_from_coeffs, NodeSequence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nodes = NodeSequence::new(vec![2.0, 1.2, 0.9, -0.1, -0.4, -1.5, -2.2])?;
    let c = coeffs_from_nodes(&nodes)?;
    println!("nodes:     {:?}", nodes.as_slice());
    println!("a:         {:?}", c.a());
    println!("b:         {:?}", c.b());
    let back = nodes_from_coeffs(&c)?;
    let err = nodes.as_slice().iter().zip(back.as_slice()).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
    println!("round trip max error: {err:.2e}");

    // For even n the coefficients are only fixed up to a gamma rescaling,
    // and a_0 = 1 picks one representative.
    for gamma in [0.5, 2.0, 5.0] {
        let g = gamma_rescale(&c, gamma)?;
        let moved = nodes_from_coeffs(&g)?
            .as_slice()
            .iter()
            .zip(nodes.as_slice())
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max);
        println!("gamma = {gamma}: a_0 = {:.3}, a_1 = {:.3}, node change {moved:.2e}", g.a()[0], g.a()[1]);
    }
    Ok(())
}
