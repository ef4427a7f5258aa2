//! Exact symbolic checks of the cofactor and column-expansion identities for
//! the matrix of formal derivatives.

use bethe_lab::grassmann::{determinant_identity_check, DeterminantIdentity};

fn main() -> bethe_lab::Result<()> {
    for m in 1..=3 {
        for which in DeterminantIdentity::ALL {
            let report = determinant_identity_check(m, which)?;
            println!("m={m} {:<34} pass={} {}", report.identity, report.pass, report.parameters);
        }
    }
    Ok(())
}
