//! The recursion against a dense solve of (H − z)⁻¹ on a small disordered ball.

use bethe_lab::greens::{dense_green, full_green_diag, offdiag_green_path, ComplexEnergy, Potential};
use bethe_lab::linalg::{max_abs, max_abs_diff, RMat};
use bethe_lab::model::{build_tree, validate_params, DisorderSpec, TreeKind};
use bethe_lab::rng::RngStream;

fn main() -> bethe_lab::Result<()> {
    let a = RMat::from_row_slice(2, 2, &[0.2, 0.1, 0.1, -0.3]);
    let p = validate_params(3, 2, a, 0.5, DisorderSpec::Goe { sigma: 1.0 })?;
    let depth = 3;
    let ball = build_tree(3, TreeKind::Ball(depth))?;
    let pot = Potential::sample(&p, &ball, &RngStream::new(7));
    let z = ComplexEnergy::new(0.4, 0.2);
    println!("Ball({depth}) with K=3, m=2: {} vertices", ball.len());

    let dense = dense_green(&p, &pot, &ball, z, &[(0, 0)])?;
    let g = full_green_diag(&p, &pot, z, depth)?;
    println!("G(0,0): relative deviation {:.3e}", max_abs_diff(&g, &dense[0]) / max_abs(&dense[0]));

    for r in 1..=depth {
        let x = *ball.canonical_path(r)?.last().expect("path reaches shell r");
        let dense = dense_green(&p, &pot, &ball, z, &[(0, x)])?;
        let g = offdiag_green_path(&p, &pot, z, r, depth)?;
        println!("G(0,x_{r}): relative deviation {:.3e}", max_abs_diff(&g, &dense[0]) / max_abs(&dense[0]));
    }
    Ok(())
}
