use serde::Serialize;
use serde_json::json;

use super::gaussian::PairGaussianSF;
use crate::error::{LabError, Result};
use crate::grassmann::IdentityReport;
use crate::greens::{
    damped_iteration, halfspace_green_fixedpoint, minus_four_a_e, ComplexEnergy, FIXED_POINT_MAX_ITER, FIXED_POINT_TOL,
};
use crate::linalg::{invert, max_abs_diff, re, sym_function, CMat, RMat, I};
use crate::model::{spectral_interval, ModelParams};

/// Gaussian parameter of ξ_{0,z}: the solution of B = −4(K·B + 4(z − A))⁻¹ with Im B ≻ 0.
pub fn lambda0_fixed_point(params: &ModelParams, energy: ComplexEnergy) -> Result<CMat> {
    if !params.is_deterministic() {
        return Err(LabError::Config("the Gaussian fixed point requires lambda = 0".into()));
    }
    if energy.eta < 0.0 || !energy.eta.is_finite() {
        return Err(LabError::RequiresPositiveEta(energy.eta));
    }
    if energy.eta == 0.0 {
        match spectral_interval(params) {
            Some((lo, hi)) if energy.e > lo && energy.e < hi => {}
            _ => return Err(LabError::UnsupportedEnergy(energy.e)),
        }
    }
    let m = params.m;
    let k = params.k as f64;
    let shift = (CMat::identity(m, m) * energy.z() - params.a.map(re)) * re(4.0);
    let start = CMat::identity(m, m) * I;
    damped_iteration(start, FIXED_POINT_TOL, FIXED_POINT_MAX_ITER, |b| {
        Ok(invert(&(b * re(k) + &shift))? * re(-4.0))
    })
}

/// Residual of the defining equation, in max-norm.
pub fn fixed_point_residual(params: &ModelParams, energy: ComplexEnergy, b: &CMat) -> Result<f64> {
    let m = params.m;
    let shift = (CMat::identity(m, m) * energy.z() - params.a.map(re)) * re(4.0);
    let image = invert(&(b * re(params.k as f64) + shift))? * re(-4.0);
    Ok(max_abs_diff(&image, b))
}

/// ξ_{0,z}(φ₊^{⊙2}, φ₋^{⊙2}) = e^{(i/4)Tr(Bφ₊^{⊙2} − B̄φ₋^{⊙2})} with B the fixed point.
pub fn xi_lambda0(params: &ModelParams, energy: ComplexEnergy) -> Result<PairGaussianSF> {
    let b = lambda0_fixed_point(params, energy)?;
    let m = params.m;
    Ok(PairGaussianSF { b_minus: b.map(|x| x.conj()), b_plus: b, prefactor: CMat::identity(m, m) })
}

/// θ = −2(∂₊ + ∂₋)𝛏 on a pair Gaussian: prefactor −(i/2)(B₊ − B₋)P.
pub fn theta_from_xi(xi: &PairGaussianSF) -> PairGaussianSF {
    let factor = (&xi.b_plus - &xi.b_minus) * (-I * 0.5);
    PairGaussianSF { b_plus: xi.b_plus.clone(), b_minus: xi.b_minus.clone(), prefactor: factor * &xi.prefactor }
}

/// λ = 0 values of ⟨⟨ξ|ξ⟩⟩, ⟨⟨ξ|θ⟩⟩, ⟨⟨θ|θ⟩⟩ and the matrix relating θ_{0,E} to ξ_{0,E}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bilinears {
    pub e: f64,
    pub xi_xi: f64,
    pub xi_theta: f64,
    pub theta_theta: f64,
    pub theta_factor: Vec<Vec<f64>>,
}

pub fn closed_form_bilinears(params: &ModelParams, e: f64) -> Result<Bilinears> {
    match spectral_interval(params) {
        Some((lo, hi)) if e > lo && e < hi => {}
        _ => return Err(LabError::UnsupportedEnergy(e)),
    }
    let k = params.k as f64;
    let channels: Vec<f64> = params.a_eigenvalues().iter().map(|a| e - a).collect();
    let denom = |x: f64| (k + 1.0) * (k + 1.0) - 4.0 * x * x;
    let xi_xi = channels.iter().map(|&x| 4.0 * k / denom(x)).sum();
    let xi_theta = channels.iter().map(|&x| 8.0 * (k - x * x).sqrt() / denom(x)).sum();
    let theta_theta = channels.iter().map(|&x| 16.0 * (k - x * x) / (k * denom(x))).sum();
    let shifted: RMat = RMat::identity(params.m, params.m) * e - &params.a;
    let factor = sym_function(&shifted, |x| re(2.0 * (k - x * x).sqrt() / k));
    let theta_factor = (0..params.m).map(|i| (0..params.m).map(|j| factor[(i, j)].re).collect()).collect();
    Ok(Bilinears { e, xi_xi, xi_theta, theta_theta, theta_factor })
}

pub const AGREEMENT_TOL: f64 = 1e-6;

/// Entrywise agreement of the Gaussian fixed point, the half-space Green's fixed
/// point and −4A_E at E + iη.
pub fn lambda0_agreement_check(params: &ModelParams, energy: ComplexEnergy) -> Result<IdentityReport> {
    let b = lambda0_fixed_point(params, energy)?;
    let g = halfspace_green_fixedpoint(params, energy)?;
    let limit = minus_four_a_e(params, energy.e)?;
    let dev = max_abs_diff(&b, &g).max(max_abs_diff(&b, &limit)).max(max_abs_diff(&g, &limit));
    let counterexample = (dev > AGREEMENT_TOL).then(|| format!("max entrywise deviation {dev:e}"));
    let json = json!({"K": params.k, "m": params.m, "E": energy.e, "eta": energy.eta, "max_deviation": dev});
    Ok(IdentityReport::new("lambda0_three_way", json, counterexample))
}
