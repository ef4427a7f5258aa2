//! Half-space and diagonal Green's functions at λ = 0: the infinite-tree fixed
//! point against the finite recursion, and the depth-parity transient of the
//! latter when η is much smaller than 1/depth.

use bethe_lab::greens::{full_green_diag, halfspace_green_finite, halfspace_green_fixedpoint, shifted, ComplexEnergy, Potential};
use bethe_lab::linalg::{invert, re, RMat};
use bethe_lab::model::{validate_params, DisorderSpec};
use bethe_lab::transport::tr_abs2;

fn main() -> bethe_lab::Result<()> {
    let k = 2;
    let p = validate_params(k, 1, RMat::zeros(1, 1), 0.0, DisorderSpec::Zero)?;

    for eta in [1e-1, 1e-3, 1e-6] {
        let z = ComplexEnergy::new(0.0, eta);
        let gh = halfspace_green_fixedpoint(&p, z)?;
        let g00 = invert(&(shifted(&p, None, z.z()) - &gh * re(0.25 * (k + 1) as f64)))?;
        println!("eta={eta:e}: fixed point G = {:.6}, Tr|G00|^2 = {:.6} (8/9 = {:.6})", gh[(0, 0)], tr_abs2(&g00), 8.0 / 9.0);
    }

    let z = ComplexEnergy::new(0.0, 1e-6);
    for depth in [20, 21, 200, 201] {
        let gh = halfspace_green_finite(&p, &Potential::Zero, z, depth)?;
        let g00 = full_green_diag(&p, &Potential::Zero, z, depth)?;
        println!("depth {depth}: G_half = {:.4e}, Tr|G00|^2 = {:.4e}", gh[(0, 0)], tr_abs2(&g00));
    }

    let z = ComplexEnergy::new(0.0, 0.05);
    for depth in [50, 200, 800] {
        let g00 = full_green_diag(&p, &Potential::Zero, z, depth)?;
        println!("eta=0.05 depth {depth}: Tr|G00|^2 = {:.6}", tr_abs2(&g00));
    }
    Ok(())
}
