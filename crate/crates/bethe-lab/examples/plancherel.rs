//! Time-averaged spreading ∫ e^{−ηt} r²(t) dt against its energy representation,
//! and the bound 4πm²K/η³.

use bethe_lab::greens::Potential;
use bethe_lab::linalg::RMat;
use bethe_lab::model::{build_tree, validate_params, DisorderSpec, TreeKind};
use bethe_lab::rng::RngStream;
use bethe_lab::transport::{plancherel_check, upper_bound_check};

fn main() -> bethe_lab::Result<()> {
    let tree = build_tree(2, TreeKind::Ball(3))?;
    for lambda in [0.0, 0.5] {
        let disorder = if lambda == 0.0 { DisorderSpec::Zero } else { DisorderSpec::DiagonalGaussianIid { sigma: 1.0 } };
        let p = validate_params(2, 1, RMat::zeros(1, 1), lambda, disorder)?;
        let pot = if lambda == 0.0 { Potential::Zero } else { Potential::sample(&p, &tree, &RngStream::new(3)) };
        for eta in [2.0, 1.0, 0.5] {
            let pl = plancherel_check(&p, &pot, &tree, eta)?;
            let ub = upper_bound_check(&p, &pot, &tree, eta)?;
            println!(
                "lambda={lambda} eta={eta}: time side {:.6}, energy side {:.6}, reldiff {:.1e}; bound margin {:.4}",
                pl.lhs, pl.rhs, pl.reldiff, ub.margin
            );
        }
    }
    Ok(())
}
