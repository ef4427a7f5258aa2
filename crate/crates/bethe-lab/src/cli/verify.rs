use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::config::VerifyLevel;
use crate::error::Result;
use crate::grassmann::{
    berezin_convention_check, determinant_identity_check, pairing_expansion_check, sgn, sgn2_agreement_check_with,
    DeterminantIdentity, IdentityReport, SgnFn,
};
use crate::greens::ComplexEnergy;
use crate::linalg::{c, max_abs_diff, CMat, RMat};
use crate::model::{spectral_interval, validate_params, DisorderSpec};
use crate::rng::RngStream;
use crate::susy::{
    bbt_gaussian, bbt_via_derivatives, involution_deviation, lambda0_agreement_check, leibniz_check, super_taylor_check,
    t_quadrature_gate, thdt_check, vexp_coefficient_check, CVec, GaussianSF, VectorGaussianSF,
};

const SUITE_SEED: u64 = 0x5eed;
const INVOLUTION_DRAWS: usize = 50;
const INVOLUTION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub identities: Vec<IdentityReport>,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
    pub seconds: f64,
}

type Check = Box<dyn Fn() -> Result<IdentityReport> + Send + Sync>;

fn rng(domain: u64, index: u64) -> ChaCha8Rng {
    RngStream::new(SUITE_SEED).child(domain, index).rng()
}

/// Complex symmetric B; Im B ≻ 0 when `admissible`.
pub fn random_gaussian_parameter(m: usize, rng: &mut ChaCha8Rng, admissible: bool) -> CMat {
    let x = RMat::from_fn(m, m, |_, _| rng.random_range(-1.0..1.0));
    let y = RMat::from_fn(m, m, |_, _| rng.random_range(-1.0..1.0));
    let re_part = (&x + x.transpose()) * 0.5;
    let im_part = if admissible { &y * y.transpose() + RMat::identity(m, m) * 0.5 } else { (&y + y.transpose()) * 0.5 };
    CMat::from_fn(m, m, |i, j| c(re_part[(i, j)], im_part[(i, j)]))
}

fn random_vector(m: usize, rng: &mut ChaCha8Rng) -> CVec {
    CVec::from_fn(m, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn random_vector_sf(m: usize, rng: &mut ChaCha8Rng) -> Result<VectorGaussianSF> {
    let body = GaussianSF::new(random_gaussian_parameter(m, rng, true), c(1.0, 0.5))?;
    VectorGaussianSF::new(body, random_vector(m, rng))
}

fn super_taylor(m: usize, n: usize, draw: u64) -> Result<IdentityReport> {
    let mut r = rng(1, draw);
    let f = GaussianSF::new(random_gaussian_parameter(m, &mut r, false), c(0.3, -0.7))?;
    let phi = RMat::from_fn(m, 2 * n, |_, _| r.random_range(-1.0..1.0));
    super_taylor_check(&f, n, &phi)
}

fn involutions(sizes: &[usize]) -> Result<IdentityReport> {
    let mut worst = 0.0f64;
    let mut transform_gap = 0.0f64;
    for i in 0..INVOLUTION_DRAWS {
        let m = sizes[i % sizes.len()];
        let f = random_vector_sf(m, &mut rng(2, i as u64))?;
        worst = worst.max(involution_deviation(&f)?);
        let a = bbt_gaussian(&f)?;
        let b = bbt_via_derivatives(&f)?;
        let gap = a.v.iter().zip(b.v.iter()).fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()));
        transform_gap = transform_gap.max(gap).max(max_abs_diff(&a.body.b, &b.body.b));
    }
    let counterexample = if worst > INVOLUTION_TOL {
        Some(format!("max involution deviation {worst:e}"))
    } else if transform_gap > INVOLUTION_TOL {
        Some(format!("𝕋 via derivatives differs by {transform_gap:e}"))
    } else {
        None
    };
    let params = json!({"draws": INVOLUTION_DRAWS, "sizes": sizes, "max_deviation": worst, "derivative_form_gap": transform_gap});
    Ok(IdentityReport::new("transform_involutions", params, counterexample))
}

fn thdt(m: usize, n: usize, draw: u64) -> Result<IdentityReport> {
    let f = random_vector_sf(m, &mut rng(3, draw))?;
    thdt_check(&f, n)
}

fn vexp(m: usize, n: usize, draw: u64) -> Result<IdentityReport> {
    let f = random_vector_sf(m, &mut rng(4, draw))?;
    vexp_coefficient_check(&f, n)
}

fn leibniz(m: usize, n: usize, draw: u64) -> Result<IdentityReport> {
    let mut r = rng(5, draw);
    let f = GaussianSF::new(random_gaussian_parameter(m, &mut r, false), c(0.8, 0.1))?;
    let g = GaussianSF::new(random_gaussian_parameter(m, &mut r, false), c(-0.2, 1.1))?;
    leibniz_check(&f, &g, n)
}

fn quadrature_gate() -> Result<IdentityReport> {
    let cases = [(c(0.0, 1.0), [0.0, 0.0]), (c(0.0, 1.0), [0.7, -0.4]), (c(0.6, 1.5), [0.3, 1.1])];
    let mut worst = 0.0f64;
    let mut counterexample = None;
    for (b, phi) in cases {
        let gate = t_quadrature_gate(b, phi)?;
        worst = worst.max(gate.deviation);
        if !gate.pass && counterexample.is_none() {
            counterexample = Some(format!("B = {b}, φ′ = {phi:?}: deviation {:e}", gate.deviation));
        }
    }
    Ok(IdentityReport::new("transform_quadrature_gate", json!({"cases": cases.len(), "max_deviation": worst}), counterexample))
}

/// Greens fixed point, Gaussian fixed point and −4A_E at the interior quartiles of I_{A,K}.
fn lambda0_grid(ks: &[usize], ms: &[usize]) -> Result<IdentityReport> {
    let mut worst = 0.0f64;
    let mut counterexample = None;
    let mut points = 0;
    for &k in ks {
        for &m in ms {
            let a = RMat::from_fn(m, m, |i, j| if i == j { 0.5 * i as f64 - 0.25 * (m - 1) as f64 } else { 0.0 });
            let params = validate_params(k, m, a, 0.0, DisorderSpec::Zero)?;
            let (lo, hi) = spectral_interval(&params).expect("interval is nonempty for these A");
            for frac in [0.25, 0.5, 0.75] {
                let r = lambda0_agreement_check(&params, ComplexEnergy::new(lo + frac * (hi - lo), 1e-8))?;
                points += 1;
                worst = worst.max(r.parameters["max_deviation"].as_f64().unwrap_or(f64::INFINITY));
                if !r.pass && counterexample.is_none() {
                    counterexample = Some(format!("K={k} m={m} frac={frac}: {}", r.counterexample.unwrap_or_default()));
                }
            }
        }
    }
    Ok(IdentityReport::new("lambda0_three_way", json!({"K": ks, "m": ms, "points": points, "max_deviation": worst}), counterexample))
}

fn level_checks(level: VerifyLevel, sgn_fn: SgnFn) -> Vec<Check> {
    let mut checks: Vec<Check> = Vec::new();
    let (pairing, sgn2_max, det_max, thdt_sizes, small): (&[(usize, usize)], usize, usize, &[(usize, usize)], &[(usize, usize)]) =
        match level {
            VerifyLevel::Fast => (&[(1, 1), (2, 1), (2, 2)], 2, 3, &[(1, 1), (2, 1)], &[(1, 1), (2, 1), (2, 2)]),
            VerifyLevel::Full => (
                &[(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)],
                3,
                4,
                &[(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)],
                &[(1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2)],
            ),
        };
    for &(m, n) in pairing {
        checks.push(Box::new(move || pairing_expansion_check(m, n)));
    }
    checks.push(Box::new(move || berezin_convention_check(sgn2_max, sgn2_max)));
    for m in 1..=sgn2_max {
        for n in 1..=sgn2_max {
            checks.push(Box::new(move || sgn2_agreement_check_with(m, n, sgn_fn)));
        }
    }
    for m in 1..=det_max {
        for which in DeterminantIdentity::ALL {
            if m == 4 && which != DeterminantIdentity::CofactorTranspose {
                continue;
            }
            checks.push(Box::new(move || determinant_identity_check(m, which)));
        }
    }
    for (i, &(m, n)) in small.iter().enumerate() {
        if 2 * n >= m {
            checks.push(Box::new(move || super_taylor(m, n, i as u64)));
        }
        checks.push(Box::new(move || vexp(m, n, i as u64)));
        checks.push(Box::new(move || leibniz(m, n, i as u64)));
    }
    let sizes: Vec<usize> = if level == VerifyLevel::Full { vec![1, 2, 3] } else { vec![1, 2] };
    checks.push(Box::new(move || involutions(&sizes)));
    for (i, &(m, n)) in thdt_sizes.iter().enumerate() {
        checks.push(Box::new(move || thdt(m, n, i as u64)));
    }
    checks.push(Box::new(quadrature_gate));
    checks.push(Box::new(|| lambda0_grid(&[2, 4], &[1, 2])));
    checks
}

fn point_checks(m: usize, n: usize, sgn_fn: SgnFn) -> Vec<Check> {
    let mut checks: Vec<Check> = vec![
        Box::new(move || pairing_expansion_check(m, n)),
        Box::new(move || berezin_convention_check(m, n)),
        Box::new(move || sgn2_agreement_check_with(m, n, sgn_fn)),
        Box::new(move || vexp(m, n, 0)),
        Box::new(move || leibniz(m, n, 0)),
        Box::new(move || involutions(&[m])),
        Box::new(move || thdt(m, n, 0)),
        Box::new(move || lambda0_grid(&[2, 4], &[m])),
    ];
    if 2 * n >= m {
        checks.push(Box::new(move || super_taylor(m, n, 0)));
    }
    for which in DeterminantIdentity::ALL {
        checks.push(Box::new(move || determinant_identity_check(m, which)));
    }
    checks
}

fn execute(level: VerifyLevel, m: Option<usize>, n: Option<usize>, checks: Vec<Check>) -> VerifyReport {
    let start = Instant::now();
    let identities: Vec<IdentityReport> = checks
        .par_iter()
        .map(|check| {
            check().unwrap_or_else(|e| IdentityReport::new("check_error", json!({"error": e.exit_code()}), Some(e.to_string())))
        })
        .collect();
    let passed = identities.iter().filter(|r| r.pass).count();
    let failed = identities.len() - passed;
    VerifyReport { level, m, n, passed, failed, pass: failed == 0, identities, seconds: start.elapsed().as_secs_f64() }
}

/// Every exact identity check at the given level.
pub fn verify_suite(level: VerifyLevel) -> VerifyReport {
    verify_suite_with(level, sgn)
}

/// The suite with sgn(·) replaced, for mutation testing of the sign checks.
pub fn verify_suite_with(level: VerifyLevel, sgn_fn: SgnFn) -> VerifyReport {
    execute(level, None, None, level_checks(level, sgn_fn))
}

/// The identity checks at one (m, n).
pub fn verify_at(m: usize, n: usize) -> VerifyReport {
    execute(VerifyLevel::Fast, Some(m), Some(n), point_checks(m, n, sgn))
}
