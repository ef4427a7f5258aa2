//! Free spectrum and the interval I_{A,K} where the theorems apply.

use bethe_lab::linalg::RMat;
use bethe_lab::model::{free_spectrum, spectral_interval, validate_params, DisorderSpec};

fn main() -> bethe_lab::Result<()> {
    for (k, spread) in [(2, 0.5), (4, 1.0), (2, 5.0)] {
        let a = RMat::from_diagonal(&nalgebra::DVector::from_vec(vec![-0.5 * spread, 0.5 * spread]));
        let p = validate_params(k, 2, a, 0.0, DisorderSpec::Zero)?;
        let interval = match spectral_interval(&p) {
            Some((lo, hi)) => format!("({lo:.4}, {hi:.4})"),
            None => "empty".into(),
        };
        println!("K={k} A=diag(±{:.2}): I_AK = {interval}, free spectrum {:?}", 0.5 * spread, free_spectrum(&p));
    }
    Ok(())
}
