//! Mean-square displacement r²(t) of a packet started at the root, from the
//! spectral decomposition of H on a finite ball.

use bethe_lab::greens::Potential;
use bethe_lab::linalg::RMat;
use bethe_lab::model::{build_tree, validate_params, DisorderSpec, TreeKind};
use bethe_lab::transport::BallSpectrum;

fn main() -> bethe_lab::Result<()> {
    let p = validate_params(2, 1, RMat::zeros(1, 1), 0.0, DisorderSpec::Zero)?;
    let tree = build_tree(2, TreeKind::Ball(8))?;
    let spectrum = BallSpectrum::new(&p, &Potential::Zero, &tree)?;
    println!("short times, r^2/t^2 -> (K+1)/4 = 0.75");
    for t in [1e-3, 1e-2, 1e-1] {
        println!("  t={t:e}: r^2/t^2 = {:.6}", spectrum.r2_origin(t)? / (t * t));
    }
    println!("ballistic regime, r^2/t^2 roughly constant until the packet reaches the boundary");
    for t in [1.0, 2.0, 4.0, 8.0, 16.0] {
        println!("  t={t}: r^2 = {:.4}, r^2/t^2 = {:.4}", spectrum.r2_origin(t)?, spectrum.r2_origin(t)? / (t * t));
    }
    Ok(())
}
