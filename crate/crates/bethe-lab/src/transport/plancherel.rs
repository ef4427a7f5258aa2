//! Time/energy form of the transport sum on a finite tree, per configuration.

use serde::{Deserialize, Serialize};

use super::quadrature::integrate_real_line;
use super::wavepacket::BallSpectrum;
use crate::error::{LabError, Result};
use crate::greens::{hamiltonian_dense, Potential};
use crate::linalg::{complexify, CMat};
use crate::model::{ModelParams, TreeGeometry};

/// How far the finite integration window extends past the spectrum, in η.
pub const WINDOW_PAD: f64 = 40.0;

/// ∫₀^∞ e^{−ηt} r²(t) dt in closed form: Σ_{n,n′} C_{nn′} η/(η² + (E_n − E_n′)²).
pub fn laplace_r2(spectrum: &BallSpectrum, eta: f64) -> f64 {
    let u = &spectrum.vectors;
    let n = spectrum.energies.len();
    let m = spectrum.m;
    let weighted = {
        let mut w = u.clone();
        for (row, &x2) in spectrum.weights.iter().enumerate() {
            w.row_mut(row).scale_mut(x2);
        }
        u.transpose() * w
    };
    let origin = u.rows(0, m).transpose() * u.rows(0, m);
    let mut total = 0.0;
    for a in 0..n {
        for b in 0..n {
            let d = spectrum.energies[a] - spectrum.energies[b];
            total += weighted[(a, b)] * origin[(a, b)] * eta / (eta * eta + d * d);
        }
    }
    total
}

/// Resolvent columns at the origin, reused across energies.
pub struct OriginResolvent {
    h: CMat,
    m: usize,
    weights: Vec<f64>,
}

impl OriginResolvent {
    pub fn new(params: &ModelParams, potential: &Potential, tree: &TreeGeometry) -> Result<Self> {
        let h = complexify(&hamiltonian_dense(params, potential, tree)?);
        let m = params.m;
        let weights = (0..h.nrows()).map(|i| (tree.depth(i / m) as f64).powi(2)).collect();
        Ok(OriginResolvent { h, m, weights })
    }

    /// Σ_x |x|² Tr|G(0,x;w)|².
    pub fn weighted_sum(&self, w: num_complex::Complex64) -> Result<f64> {
        let n = self.h.nrows();
        let mut a = self.h.clone();
        for i in 0..n {
            a[(i, i)] -= w;
        }
        let rhs = CMat::identity(n, self.m);
        let cols = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| LabError::NumericalBreakdown("singular resolvent".into()))?;
        let mut total = 0.0;
        for row in 0..n {
            let x2 = self.weights[row];
            if x2 > 0.0 {
                total += x2 * cols.row(row).iter().map(|c| c.norm_sqr()).sum::<f64>();
            }
        }
        Ok(total)
    }
}

/// The E-integrand Σ_x |x|² Tr|G(0,x;E + iη/2)|².
pub fn plancherel_integrand(params: &ModelParams, potential: &Potential, tree: &TreeGeometry, eta: f64, e: f64) -> Result<f64> {
    OriginResolvent::new(params, potential, tree)?.weighted_sum(num_complex::Complex64::new(e, eta / 2.0))
}

/// ∫ dE Σ_x |x|² Tr|G(0,x;E + iη/2)|² by adaptive quadrature of direct solves.
pub fn energy_integral(params: &ModelParams, potential: &Potential, tree: &TreeGeometry, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(LabError::RequiresPositiveEta(eta));
    }
    let spectrum = BallSpectrum::new(params, potential, tree)?;
    let lo = spectrum.energies[0] - WINDOW_PAD * eta;
    let hi = spectrum.energies[spectrum.energies.len() - 1] + WINDOW_PAD * eta;
    let resolvent = OriginResolvent::new(params, potential, tree)?;
    let q = integrate_real_line(|e| resolvent.weighted_sum(num_complex::Complex64::new(e, eta / 2.0)), lo, hi, WINDOW_PAD * eta)?;
    Ok(q.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlancherelReport {
    pub eta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub reldiff: f64,
}

/// ∫₀^∞ e^{−ηt} r²(t) dt against (1/2π) ∫ dE Σ_x |x|² Tr|G(0,x;E + iη/2)|².
pub fn plancherel_check(params: &ModelParams, potential: &Potential, tree: &TreeGeometry, eta: f64) -> Result<PlancherelReport> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(LabError::RequiresPositiveEta(eta));
    }
    let spectrum = BallSpectrum::new(params, potential, tree)?;
    let lhs = laplace_r2(&spectrum, eta);
    let rhs = energy_integral(params, potential, tree, eta)? / (2.0 * std::f64::consts::PI);
    Ok(PlancherelReport { eta, lhs, rhs, reldiff: (lhs - rhs).abs() / lhs.abs().max(rhs.abs()) })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub eta: f64,
    pub value: f64,
    pub bound: f64,
    /// 1 − value/bound.
    pub margin: f64,
    pub holds: bool,
}

/// The E-integral against 4πm²K/η³ (‖½Δ‖² = K on the Bethe lattice).
pub fn upper_bound_check(params: &ModelParams, potential: &Potential, tree: &TreeGeometry, eta: f64) -> Result<UpperBound> {
    let value = energy_integral(params, potential, tree, eta)?;
    let m = params.m as f64;
    let bound = 4.0 * std::f64::consts::PI * m * m * params.k as f64 / eta.powi(3);
    Ok(UpperBound { eta, value, bound, margin: 1.0 - value / bound, holds: value <= bound })
}
