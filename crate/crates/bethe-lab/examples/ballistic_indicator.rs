//! η³J(E + iη) as η ↓ 0: it stabilizes at a positive constant inside I_{A,K}.

use bethe_lab::linalg::RMat;
use bethe_lab::model::{validate_params, DisorderSpec};
use bethe_lab::transport::{ballistic_indicator, McConfig, RMax};

fn main() -> bethe_lab::Result<()> {
    let p = validate_params(2, 1, RMat::zeros(1, 1), 0.0, DisorderSpec::Zero)?;
    let etas = [0.2, 0.1, 0.05, 0.025];
    let scan = ballistic_indicator(&p, 0.0, &etas, RMax::Auto, &McConfig::new(2, 0))?;
    print!("{}", scan.to_csv_string()?);

    let outside = ballistic_indicator(&p, 3.0, &etas, RMax::Auto, &McConfig::new(2, 0))?;
    for row in &outside.rows {
        println!("E=3 (outside the spectrum) eta={}: indicator {:.3e}", row.eta, row.indicator);
    }
    Ok(())
}
