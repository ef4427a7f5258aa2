use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::config::{Experiment, RunConfig, Validated};
use super::verify::{verify_at, verify_suite};
use crate::error::{LabError, Result};
use crate::greens::{
    full_green_diag, halfspace_green_finite, halfspace_green_fixedpoint, shifted, ComplexEnergy, GreenJson, Potential,
};
use crate::linalg::{invert, re};
use crate::model::{build_tree, free_spectrum, spectral_interval, ModelParams, ModelParamsJson, TreeGeometry, TreeKind};
use crate::rng::RngStream;
use crate::transport::{
    ballistic_indicator, default_depth, j_function, plancherel_check, upper_bound_check, BallSpectrum,
    TransportScan, Verdict,
};

pub const WORKERS_ENV: &str = "BETHE_LAB_WORKERS";
const DOMAIN_CONFIGURATION: u64 = 101;

/// Exit status of a completed run together with the files it wrote.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub artifacts: Vec<PathBuf>,
}

/// Exit code for a run whose checks completed but did not all pass.
pub const EXIT_CHECK_FAILED: i32 = 1;

/// Worker count from the environment override, else from the config.
pub fn worker_count(configured: Option<usize>) -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(LabError::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(std::env::VarError::NotPresent) => Ok(configured),
        Err(e) => Err(LabError::Config(format!("{WORKERS_ENV}: {e}"))),
    }
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| LabError::Config(format!("worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, target: Option<&PathBuf>, bytes: &[u8], artifacts: &mut Vec<PathBuf>) -> Result<()> {
    match target {
        Some(path) => {
            write_file(path, bytes)?;
            artifacts.push(path.clone());
            Ok(())
        }
        None => out.write_all(bytes).map_err(|e| LabError::Config(format!("stdout: {e}"))),
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

fn potential_for(params: &ModelParams, tree: &TreeGeometry, seed: u64, index: u64) -> Potential {
    if params.is_deterministic() {
        Potential::Zero
    } else {
        Potential::sample(params, tree, &RngStream::new(seed).child(DOMAIN_CONFIGURATION, index))
    }
}

fn energies(v: &Validated) -> impl Iterator<Item = ComplexEnergy> + '_ {
    let g = &v.config.grids;
    g.energies.iter().flat_map(move |&e| g.eta.iter().map(move |&eta| ComplexEnergy::new(e, eta)))
}

fn interval(v: &Validated, out: &mut dyn Write, artifacts: &mut Vec<PathBuf>) -> Result<i32> {
    let line = match spectral_interval(&v.params) {
        Some((lo, hi)) => format!("I_AK = ({lo}, {hi})\n"),
        None => "I_AK = empty\n".to_string(),
    };
    out.write_all(line.as_bytes()).map_err(|e| LabError::Config(format!("stdout: {e}")))?;
    if let Some(path) = &v.config.output.json {
        let report = json!({
            "I_AK": spectral_interval(&v.params).map(|(a, b)| [a, b]),
            "free_spectrum": free_spectrum(&v.params),
            "theorems_applicable": v.params.theorems_applicable,
            "model": ModelParamsJson::from(&v.params),
        });
        write_file(path, &to_json(&report))?;
        artifacts.push(path.clone());
    }
    Ok(0)
}

#[derive(Serialize)]
struct GreenRow {
    #[serde(rename = "E")]
    e: f64,
    eta: f64,
    depth: Option<usize>,
    halfspace: GreenJson,
    diagonal: GreenJson,
}

fn green(v: &Validated) -> Result<Vec<GreenRow>> {
    let p = &v.params;
    let seed = v.config.sampling.seed.unwrap_or(0);
    let mut rows = Vec::new();
    for (i, energy) in energies(v).enumerate() {
        energy.require_positive()?;
        let row = if p.is_deterministic() && v.config.grids.depth.is_none() {
            // Infinite tree: the root sees K + 1 copies of the half-space fixed point.
            let gh = halfspace_green_fixedpoint(p, energy)?;
            let g00 = invert(&(shifted(p, None, energy.z()) - &gh * re(0.25 * (p.k + 1) as f64)))?;
            GreenRow { e: energy.e, eta: energy.eta, depth: None, halfspace: (&gh).into(), diagonal: (&g00).into() }
        } else {
            let depth = v.config.grids.depth.unwrap_or_else(|| default_depth(p.k, energy.eta));
            let ball = build_tree(p.k, TreeKind::Ball(depth))?;
            let half = build_tree(p.k, TreeKind::HalfSpace(depth))?;
            let g00 = full_green_diag(p, &potential_for(p, &ball, seed, 2 * i as u64), energy, depth)?;
            let gh = halfspace_green_finite(p, &potential_for(p, &half, seed, 2 * i as u64 + 1), energy, depth)?;
            GreenRow { e: energy.e, eta: energy.eta, depth: Some(depth), halfspace: (&gh).into(), diagonal: (&g00).into() }
        };
        rows.push(row);
    }
    Ok(rows)
}

fn transport(v: &Validated) -> Result<TransportScan> {
    let mc = v.mc();
    let mut scan = TransportScan::default();
    match v.config.experiment {
        Experiment::Indicator => {
            for &e in &v.config.grids.energies {
                scan.rows.extend(ballistic_indicator(&v.params, e, &v.config.grids.eta, v.r_max(), &mc)?.rows);
            }
        }
        _ => {
            for energy in energies(v) {
                scan.rows.push(j_function(&v.params, energy, v.r_max(), &mc)?);
            }
        }
    }
    Ok(scan)
}

fn ball(v: &Validated) -> Result<TreeGeometry> {
    build_tree(v.params.k, TreeKind::Ball(v.config.grids.ball.expect("validated")))
}

fn wavepacket(v: &Validated) -> Result<String> {
    let tree = ball(v)?;
    let spectrum = BallSpectrum::new(&v.params, &potential_for(&v.params, &tree, v.config.sampling.seed.unwrap_or(0), 0), &tree)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| LabError::Config(format!("csv: {e}"));
    let mut header = vec!["t".to_string(), "r2".to_string()];
    header.extend((1..=v.params.m).map(|j| format!("r2_{j}")));
    w.write_record(&header).map_err(io)?;
    for &t in &v.config.grids.t {
        let mut record = vec![t.to_string(), spectrum.r2_origin(t)?.to_string()];
        for j in 1..=v.params.m {
            record.push(spectrum.r2(t, j)?.to_string());
        }
        w.write_record(&record).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| LabError::Config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn plancherel(v: &Validated) -> Result<serde_json::Value> {
    let tree = ball(v)?;
    let configurations = if v.params.is_deterministic() { 1 } else { v.config.sampling.n_samples.unwrap_or(1).max(1) };
    let seed = v.config.sampling.seed.unwrap_or(0);
    let mut rows = Vec::new();
    for c in 0..configurations {
        let potential = potential_for(&v.params, &tree, seed, c as u64);
        for &eta in &v.config.grids.eta {
            let report = plancherel_check(&v.params, &potential, &tree, eta)?;
            let bound = upper_bound_check(&v.params, &potential, &tree, eta)?;
            rows.push(json!({"configuration": c, "plancherel": report, "upper_bound": bound}));
        }
    }
    Ok(json!({"ball": v.config.grids.ball, "seed": seed, "model": ModelParamsJson::from(&v.params), "rows": rows}))
}

/// Runs one experiment. Results go to the configured paths, or to `out`.
pub fn run(config: RunConfig, out: &mut (dyn Write + Send)) -> Result<Outcome> {
    let v = config.validate()?;
    let workers = worker_count(v.config.workers)?;
    with_pool(workers, || dispatch(&v, out))?
}

fn dispatch(v: &Validated, out: &mut (dyn Write + Send)) -> Result<Outcome> {
    let mut artifacts = Vec::new();
    let csv_target = v.config.output.csv.as_ref();
    let json_target = v.config.output.json.as_ref();
    let exit_code = match v.config.experiment {
        Experiment::Interval => interval(v, out, &mut artifacts)?,
        Experiment::Green => {
            emit(out, json_target, &to_json(&green(v)?), &mut artifacts)?;
            0
        }
        Experiment::Transport | Experiment::Indicator => {
            let scan = transport(v)?;
            emit(out, csv_target, scan.to_csv_string()?.as_bytes(), &mut artifacts)?;
            if let (Some(path), Some(_)) = (json_target, csv_target) {
                write_file(path, &to_json(&scan))?;
                artifacts.push(path.clone());
            }
            0
        }
        Experiment::Wavepacket => {
            emit(out, csv_target, wavepacket(v)?.as_bytes(), &mut artifacts)?;
            0
        }
        Experiment::Plancherel => {
            emit(out, json_target, &to_json(&plancherel(v)?), &mut artifacts)?;
            0
        }
        Experiment::Ward => {
            let mc = v.mc();
            let r_top = v.config.grids.r_top.expect("validated");
            let mut reports = Vec::new();
            for energy in energies(v) {
                reports.push(crate::transport::ward_identity_check(&v.params, energy, r_top, &mc)?);
            }
            emit(out, json_target, &to_json(&reports), &mut artifacts)?;
            let verdicts = reports.iter().flat_map(|r| r.checks.iter().map(|c| c.verdict));
            let worst = verdicts.fold(Verdict::Pass, |acc, x| match (acc, x) {
                (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
                (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
                _ => Verdict::Pass,
            });
            match worst {
                Verdict::Pass => 0,
                Verdict::Fail => EXIT_CHECK_FAILED,
                Verdict::Inconclusive => LabError::StatisticalInconclusive(String::new()).exit_code(),
            }
        }
        Experiment::Verify => {
            let opts = v.config.verify.clone().unwrap_or_default();
            let report = match opts.n {
                Some(n) => verify_at(v.params.m, n),
                None => verify_suite(opts.level),
            };
            emit(out, json_target, &to_json(&report), &mut artifacts)?;
            if report.pass {
                0
            } else {
                EXIT_CHECK_FAILED
            }
        }
    };
    Ok(Outcome { exit_code, artifacts })
}
