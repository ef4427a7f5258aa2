//! Driving an experiment from a JSON configuration, as the `bethe-lab run` binary does.

use bethe_lab::cli::{run, RunConfig};

fn main() -> bethe_lab::Result<()> {
    let config = RunConfig::from_json(
        r#"{
            "experiment": "transport",
            "model": {"K": 2, "m": 1, "A": [[0.0]], "lambda": 0.1,
                      "disorder": {"variant": "DiagonalGaussianIID", "sigma": 1.0}},
            "grids": {"E": [0.0, 0.5], "eta": [0.2], "r_max": "auto"},
            "sampling": {"n_samples": 500, "seed": 2024},
            "workers": 4
        }"#,
    )?;
    let outcome = run(config, &mut std::io::stdout())?;
    eprintln!("exit code {}", outcome.exit_code);
    Ok(())
}
