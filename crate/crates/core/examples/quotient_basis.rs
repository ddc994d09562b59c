//! Polynomials vanishing on a checkerboard set.
//!
//! `cargo run --example quotient_basis`

use checkerboard_lagrange::checkerboard::build_checkerboard;
use checkerboard_lagrange::monomial::dim;
use checkerboard_lagrange::random::{random_grid, rng};
use checkerboard_lagrange::vanishing::build_q;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, sigma) in [(4, 3), (5, 2), (4, 2), (4, 0)] {
        let (grid, _) = random_grid(&mut rng(3), n, sigma)?.affine_normalized()?;
        for tau in 0..2u8 {
            let q = build_q(&grid, tau)?;
            let set = build_checkerboard(&grid, tau)?;
            let worst = q
                .elements
                .iter()
                .flat_map(|e| set.points().iter().map(move |p| e.normalized().eval(p.x, p.y).abs()))
                .fold(0.0, f64::max);
            println!(
                "n={n} sigma={sigma} tau={tau}: case {:?}, M = {} (+ N = {} = dim P_{} = {}), max |q(node)| = {worst:.1e}",
                q.case,
                q.dim,
                set.count(),
                n + sigma / 2,
                dim(n + sigma / 2)
            );
        }
    }
    Ok(())
}
