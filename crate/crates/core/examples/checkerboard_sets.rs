//! Rectangular grids and their two checkerboard sets.
//!
//! `cargo run --example checkerboard_sets`

use checkerboard_lagrange::checkerboard::{build_checkerboard, count_nodes};
use checkerboard_lagrange::random::{random_grid, rng};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, sigma) = (3, 2);
    let grid = random_grid(&mut rng(7), n, sigma)?;
    println!("x nodes: {:?}", grid.xnodes().as_slice());
    println!("y nodes: {:?}", grid.ynodes().as_slice());
    for tau in 0..2u8 {
        let set = build_checkerboard(&grid, tau)?;
        println!("\nS_{tau}: {} points (count_nodes = {})", set.count(), count_nodes(n, sigma, tau));
        for u in (0..=n + sigma).rev() {
            let row: String = (0..=n)
                .map(|r| if (r + u) % 2 == tau as usize { " o" } else { " ." })
                .collect();
            println!("  u={u}{row}");
        }
    }
    Ok(())
}
