//! The λ = 0 Gaussian fixed point, its agreement with the Green's-function fixed
//! point and −4A_E, and the closed-form bilinears across I_{A,K}.

use bethe_lab::greens::ComplexEnergy;
use bethe_lab::linalg::RMat;
use bethe_lab::model::{spectral_interval, validate_params, DisorderSpec};
use bethe_lab::susy::{closed_form_bilinears, lambda0_agreement_check, lambda0_fixed_point};
use bethe_lab::transport::j_lower_bound;

fn main() -> bethe_lab::Result<()> {
    let p = validate_params(2, 1, RMat::zeros(1, 1), 0.0, DisorderSpec::Zero)?;
    let (lo, hi) = spectral_interval(&p).expect("A = 0 has a nonempty interval");
    println!("I_AK = ({lo:.4}, {hi:.4})");
    println!("fixed point at E=0.3: B = {}", lambda0_fixed_point(&p, ComplexEnergy::new(0.3, 1e-8))?[(0, 0)]);

    let report = lambda0_agreement_check(&p, ComplexEnergy::new(0.3, 1e-8))?;
    println!("{}: pass={} {}", report.identity, report.pass, report.parameters);

    println!("{:>8} {:>10} {:>10} {:>10} {:>12}", "E", "<xi|xi>", "<xi|th>", "<th|th>", "J bound/eta^-3");
    for frac in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let e = lo + frac * (hi - lo);
        let bl = closed_form_bilinears(&p, e)?;
        let eta = 1e-3;
        let bound = j_lower_bound(p.k, eta, bl.xi_theta, bl.theta_theta) * eta.powi(3);
        println!("{e:>8.4} {:>10.5} {:>10.5} {:>10.5} {bound:>12.5}", bl.xi_xi, bl.xi_theta, bl.theta_theta);
    }
    Ok(())
}
