//! Disorder averages of E Tr|G(0,x;z)|² along one representative path per
//! shell, and the transport sum J built from them.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::sampler::{sample_path, tr_abs2, tr_sandwich, tr_weighted, PathSample, PreparedSampler, SamplerConfig, DOMAIN_SAMPLE};
use super::stats::{parallel_moments, EstimatorMeta, EstimatorResult, Welford};
use crate::error::{LabError, Result};
use crate::greens::ComplexEnergy;
use crate::model::ModelParams;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Insertion {
    /// Tr|G(0,x_r)|².
    #[default]
    None,
    /// Tr(Im G^{(x′|x_r)} |G(0,x_r)|²).
    Right,
    /// Tr(Im G^{(x′|x_r)} G(0,x_r)* Im G^{(0′|0)} G(0,x_r)).
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub sampler: SamplerConfig,
}

impl McConfig {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        McConfig { n_samples, seed, sampler: SamplerConfig::default() }
    }

    pub fn with_depth(mut self, depth: Option<usize>) -> Self {
        self.sampler.depth = depth;
        self
    }
}

/// Runs `observe` on `n_samples` independent paths of length `len`. With a
/// deterministic sampler a single path is evaluated and replicated.
pub(crate) fn path_moments(
    params: &ModelParams,
    energy: ComplexEnergy,
    len: usize,
    mc: &McConfig,
    dims: usize,
    observe: impl Fn(&PathSample) -> Vec<f64> + Sync,
) -> Result<(Vec<Welford>, Option<usize>)> {
    if mc.n_samples < 2 {
        return Err(LabError::TooFewSamples(mc.n_samples));
    }
    energy.require_positive()?;
    let stream = RngStream::new(mc.seed);
    let sampler = PreparedSampler::new(params, energy, &mc.sampler, &stream)?;
    if sampler.is_deterministic() {
        let path = sample_path(params, energy, &sampler, len, &mut stream.child(DOMAIN_SAMPLE, 0).rng())?;
        let values = observe(&path);
        let moments = values.into_iter().map(|v| Welford::constant(mc.n_samples as u64, v)).collect();
        return Ok((moments, sampler.depth));
    }
    let moments = parallel_moments(mc.n_samples, dims, |i| {
        let mut rng = stream.child(DOMAIN_SAMPLE, i as u64).rng();
        let path = sample_path(params, energy, &sampler, len, &mut rng)?;
        Ok(observe(&path))
    })?;
    Ok((moments, sampler.depth))
}

/// Monte Carlo estimate of E Tr|G(0,x_r;z)|² (or its Im-inserted variants).
pub fn estimate_eg2(params: &ModelParams, energy: ComplexEnergy, r: usize, mc: &McConfig, insertion: Insertion) -> Result<EstimatorResult> {
    let unscale = (params.k as f64).powi(-(r as i32));
    let (moments, depth) = path_moments(params, energy, r, mc, 1, |p| {
        let g = &p.scaled[r];
        let v = match insertion {
            Insertion::None => tr_abs2(g),
            Insertion::Right => tr_weighted(&p.forward_im[r], g),
            Insertion::Both => tr_sandwich(&p.forward_im[r], &p.extra_im, g),
        };
        vec![v * unscale]
    })?;
    let w = moments[0];
    Ok(EstimatorResult {
        mean: w.mean,
        stderr: w.stderr(),
        n_samples: mc.n_samples,
        metadata: EstimatorMeta { r, e: energy.e, eta: energy.eta, depth, seed: mc.seed },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RMax {
    /// Doubles from 64 until the tail estimate drops below 1% of J.
    Auto,
    Fixed(usize),
}

pub const AUTO_RMAX_START: usize = 64;
pub const AUTO_RMAX_CAP: usize = 1 << 14;
pub const TAIL_FRACTION: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JRow {
    #[serde(rename = "E")]
    pub e: f64,
    pub eta: f64,
    pub lambda: f64,
    pub r_max: usize,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "J_stderr")]
    pub j_stderr: f64,
    pub indicator: f64,
    pub q_hat: f64,
    pub tail: f64,
    pub n_samples: usize,
    pub depth: Option<usize>,
}

impl JRow {
    pub fn tail_accepted(&self) -> bool {
        self.tail < TAIL_FRACTION * self.j
    }
}

/// η³, spelled out so callers can reproduce the indicator bit for bit.
pub fn cube(x: f64) -> f64 {
    x * x * x
}

/// Σ_{s≥1} (R+s)² q^s.
fn shifted_square_series(r: f64, q: f64) -> f64 {
    let d = 1.0 - q;
    r * r * q / d + 2.0 * r * q / (d * d) + q * (1.0 + q) / (d * d * d)
}

/// J(z) ≈ Σ_{r=1}^{r_max} (K+1)K^{r−1} r² E Tr|G(0,x_r;z)|², all shells from
/// the same path samples, with a geometric tail estimate past r_max.
pub fn j_function(params: &ModelParams, energy: ComplexEnergy, r_max: RMax, mc: &McConfig) -> Result<JRow> {
    match r_max {
        RMax::Fixed(r) => j_fixed(params, energy, r, mc),
        RMax::Auto => {
            let mut r = AUTO_RMAX_START;
            loop {
                match j_fixed(params, energy, r, mc) {
                    Ok(row) if row.tail_accepted() => return Ok(row),
                    Ok(_) | Err(LabError::TailNotConverged { .. }) if r < AUTO_RMAX_CAP => r *= 2,
                    Ok(row) => return Err(LabError::TailNotConverged { q_hat: row.q_hat, r_max: r }),
                    Err(e) => return Err(e),
                }
            }
        }
    }
}

fn j_fixed(params: &ModelParams, energy: ComplexEnergy, r_max: usize, mc: &McConfig) -> Result<JRow> {
    if r_max < 1 {
        return Err(LabError::Config("r_max must be at least 1".into()));
    }
    let k = params.k as f64;
    let shell = (k + 1.0) / k;
    let (moments, depth) = path_moments(params, energy, r_max, mc, 3, |p| {
        let mut j = 0.0;
        for r in 1..=r_max {
            j += shell * (r * r) as f64 * tr_abs2(&p.scaled[r]);
        }
        vec![j, tr_abs2(&p.scaled[r_max - 1]), tr_abs2(&p.scaled[r_max])]
    })?;
    let (b_prev, b_last) = (moments[1].mean, moments[2].mean);
    let q_hat = if b_last == 0.0 { 0.0 } else { b_last / b_prev };
    if !(q_hat < 1.0) {
        return Err(LabError::TailNotConverged { q_hat, r_max });
    }
    let tail = shell * b_last * shifted_square_series(r_max as f64, q_hat);
    let j = moments[0].mean;
    Ok(JRow {
        e: energy.e,
        eta: energy.eta,
        lambda: params.lambda,
        r_max,
        j,
        j_stderr: moments[0].stderr(),
        indicator: cube(energy.eta) * j,
        q_hat,
        tail,
        n_samples: mc.n_samples,
        depth,
    })
}

/// |G₀₀|² ((K+1)/K) q(1+q)/(1−q)³ with q = K|g|²/4: the λ = 0, m = 1 value of
/// J on the infinite tree, where g is the half-space fixed point.
pub fn j_series_scalar(k: usize, g: num_complex::Complex64, g00: num_complex::Complex64) -> Result<f64> {
    let kf = k as f64;
    let q = kf * g.norm_sqr() / 4.0;
    if q >= 1.0 {
        return Err(LabError::TailNotConverged { q_hat: q, r_max: usize::MAX });
    }
    Ok(g00.norm_sqr() * (kf + 1.0) / kf * q * (1.0 + q) / (1.0 - q).powi(3))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TransportScan {
    pub rows: Vec<JRow>,
}

pub const CSV_HEADER: [&str; 7] = ["E", "eta", "lambda", "r_max", "J", "J_stderr", "indicator"];

impl TransportScan {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| LabError::Config(format!("csv: {e}"));
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.e.to_string(),
                r.eta.to_string(),
                r.lambda.to_string(),
                r.r_max.to_string(),
                r.j.to_string(),
                r.j_stderr.to_string(),
                r.indicator.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| LabError::Config(format!("csv: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// η³ J(E + iη) over an η grid.
pub fn ballistic_indicator(params: &ModelParams, e: f64, etas: &[f64], r_max: RMax, mc: &McConfig) -> Result<TransportScan> {
    let mut rows = Vec::with_capacity(etas.len());
    for &eta in etas {
        rows.push(j_function(params, ComplexEnergy::new(e, eta), r_max, mc)?);
    }
    Ok(TransportScan { rows })
}
