//! Node sequences generated by recurrence coefficients.
//!
//! `cargo run --example recurrence_nodes`

use checkerboard_lagrange::nodemap::{alternation_defect, nodes_from_coeffs};
use checkerboard_lagrange::orthopoly::{ComboSpec, RecurrenceCoeffs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a = (1, 2, ..., 2), b = 0 generates the Chebyshev polynomials T_k.
    let cheb = RecurrenceCoeffs::new(vec![1.0, 2.0, 2.0, 2.0, 2.0], vec![0.0; 5])?;
    let p = cheb.eval_sequence(0.5, 5)?;
    println!("T_k(0.5), k = 0..5: {:?}", p.values);
    println!("zeros of T_3: {:?}", cheb.zeros(3)?);
    println!("zeros of T_3 - T_1: {:?}", cheb.combo_zeros(ComboSpec::NextMinusPrev { m: 2 })?);
    println!("nodes (cos(j pi / 5)): {:?}", nodes_from_coeffs(&cheb)?.as_slice());

    // Any positive, reflection-symmetric coefficients work.
    let c = RecurrenceCoeffs::from_half(6, &[1.0, 0.8, 2.5, 1.7], &[0.3, -0.2, 0.1, 0.4])?;
    let x = nodes_from_coeffs(&c)?;
    println!("\nn = 6, a = {:?}\n       b = {:?}", c.a(), c.b());
    println!("nodes: {:?}", x.as_slice());
    println!("alternation defect p_(n-k)(x_j) - (-1)^j p_k(x_j): {:.2e}", alternation_defect(&c, x.as_slice()));
    Ok(())
}
