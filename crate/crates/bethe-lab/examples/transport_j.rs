//! J(z) = Σ_x |x|² E Tr|G(0,x;z)|² with and without disorder.

use bethe_lab::greens::ComplexEnergy;
use bethe_lab::linalg::RMat;
use bethe_lab::model::{validate_params, DisorderSpec};
use bethe_lab::transport::{j_function, McConfig, RMax};

fn main() -> bethe_lab::Result<()> {
    let z = ComplexEnergy::new(0.0, 0.2);
    for lambda in [0.0, 0.2] {
        let disorder = if lambda == 0.0 { DisorderSpec::Zero } else { DisorderSpec::DiagonalGaussianIid { sigma: 1.0 } };
        let p = validate_params(2, 1, RMat::zeros(1, 1), lambda, disorder)?;
        let row = j_function(&p, z, RMax::Auto, &McConfig::new(2000, 17))?;
        println!(
            "lambda={lambda}: J = {:.4} ± {:.4}, eta^3 J = {:.4}, r_max = {}, tail {:.2e}",
            row.j, row.j_stderr, row.indicator, row.r_max, row.tail
        );
    }
    Ok(())
}
