//! Closed-form Lagrange basis on a checkerboard set.
//!
//! `cargo run --example lagrange_basis`

use std::sync::Arc;

use checkerboard_lagrange::checkerboard::build_checkerboard;
use checkerboard_lagrange::lagrange::LagrangeBasis;
use checkerboard_lagrange::random::{random_grid, rng};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Arc::new(random_grid(&mut rng(11), 5, 5)?);
    for tau in 0..2u8 {
        let set = build_checkerboard(&grid, tau)?;
        let basis = LagrangeBasis::new(grid.clone(), set)?;
        println!(
            "n=5 sigma=5 tau={tau}: {} basis polynomials of degree {}, max |L_i(node_j) - delta_ij| = {:.2e}",
            basis.len(),
            basis.element(0).degree(),
            basis.max_delta_error()
        );
    }

    let set = build_checkerboard(&grid, 0)?;
    let basis = LagrangeBasis::new(grid.clone(), set)?;
    let l = basis.element(4);
    let a = l.anchor();
    println!("\nL anchored at node (r={}, u={}) = ({:.4}, {:.4})", a.r, a.u, a.x, a.y);
    for p in basis.set().points().iter().take(8) {
        println!("  L({:+.4}, {:+.4}) = {:+.3e}", p.x, p.y, l.eval((p.x, p.y)));
    }
    println!("  L(0.1, -0.2) = {:+.6}", l.eval((0.1, -0.2)));
    Ok(())
}
