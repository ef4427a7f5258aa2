//! Statistical Ward-identity and positivity checks on the shell moments a_r, b_r.

use bethe_lab::greens::ComplexEnergy;
use bethe_lab::linalg::RMat;
use bethe_lab::model::{validate_params, DisorderSpec};
use bethe_lab::transport::{ward_identity_check, McConfig};

fn main() -> bethe_lab::Result<()> {
    let p = validate_params(2, 1, RMat::zeros(1, 1), 0.2, DisorderSpec::DiagonalGaussianIid { sigma: 1.0 })?;
    let report = ward_identity_check(&p, ComplexEnergy::new(0.0, 0.2), 3, &McConfig::new(4000, 5))?;
    for (r, (a, b)) in report.a.iter().zip(&report.b).enumerate() {
        println!("r={r}: a = {:.5} ± {:.5}, b = {:.5} ± {:.5}", a.mean, a.stderr, b.mean, b.stderr);
    }
    for check in &report.checks {
        println!("{:<28} r={} value {:+.3e} ± {:.1e} {:?}", check.name, check.r, check.value, check.stderr, check.verdict);
    }
    println!("all passed: {}", report.passed());
    Ok(())
}
