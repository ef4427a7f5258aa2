use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use super::expansion::{assemble, first_column_dot, gaussian_soul, vexp_closed_form};
use super::gaussian::{matrix_derivative_single, CVec, GaussianSF, VectorGaussianSF};
use crate::error::{LabError, Result};
use crate::grassmann::{pairing_exponential, subset, GElem, GeneratorId, IdentityReport, Universe};
use crate::linalg::{invert, re, CMat, I};
use crate::transport::quadrature::{integrate_complex, QUAD_MAX_SEGMENTS, QUAD_REL_TOL};

pub const THDT_TOL: f64 = 1e-9;
pub const QUADRATURE_GATE_TOL: f64 = 1e-10;

/// B̂ = −4B⁻¹, symmetrized.
pub fn hat(b: &CMat) -> Result<CMat> {
    let inv = invert(b)? * re(-4.0);
    Ok((&inv + inv.transpose()) * re(0.5))
}

/// Supersymmetric Fourier transform of a Gaussian: parameter B ↦ −4B⁻¹, prefactor unchanged.
pub fn t_gaussian(f: &GaussianSF) -> Result<GaussianSF> {
    f.require_integrable()?;
    Ok(GaussianSF { b: hat(&f.b)?, c: f.c })
}

/// 𝕋𝐟 = 2∂T𝐟: vector (i/2)B̂v on the transformed Gaussian.
pub fn bbt_gaussian(f: &VectorGaussianSF) -> Result<VectorGaussianSF> {
    let body = t_gaussian(&f.body)?;
    let v = (&body.b * &f.v) * (I * 0.5);
    Ok(VectorGaussianSF { body, v })
}

/// 2∂(T𝐟) assembled entry by entry from D_{{j},{k}} applied to T f_k.
pub fn bbt_via_derivatives(f: &VectorGaussianSF) -> Result<VectorGaussianSF> {
    let body = t_gaussian(&f.body)?;
    let m = f.m();
    let mut v = CVec::zeros(m);
    for j in 1..=m {
        for k in 1..=m {
            let d = matrix_derivative_single(&body, subset(&[j]), subset(&[k]))?;
            v[j - 1] += d.c / body.c * f.v[k - 1] * 2.0;
        }
    }
    Ok(VectorGaussianSF { body, v })
}

/// π^{−mn} ∫ e^{iφ·φ′} e^{(i/4)Tr(Bφ^{⊙2})} d^{2mn}φ / e^{(i/4)Tr(B̂φ′^{⊙2})} = det(−iB/4)^{−n}.
pub fn gaussian_ft_factor(b: &CMat, n: usize) -> Result<Complex64> {
    let d = (b * (-I * 0.25)).determinant();
    if d.norm() == 0.0 {
        return Err(LabError::NumericalBreakdown("singular Gaussian parameter".into()));
    }
    Ok(d.powi(-(n as i32)))
}

/// The same bosonic integral at m = 1 by adaptive quadrature, one real axis per component of φ′.
pub fn bosonic_quadrature_m1(b: Complex64, phi_prime: &[f64]) -> Result<Complex64> {
    if b.im <= 0.0 {
        return Err(LabError::NotIntegrable);
    }
    let width = 10.0 * (4.0 / b.im).sqrt() * 1.2;
    let mut total = re(1.0);
    for &p in phi_prime {
        // |integrand| ≤ e^{−25} beyond the window.
        let g = |x: f64| (I * (x * p) + I * 0.25 * b * x * x).exp();
        let (value, _) = integrate_complex(g, -width, width, QUAD_REL_TOL, QUAD_MAX_SEGMENTS)?;
        total *= value / PI.sqrt();
    }
    Ok(total)
}

/// Independent check of the Gaussian transform rule at m = n = 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureGate {
    pub b: [f64; 2],
    pub phi_prime: [f64; 2],
    /// Coefficients of 1 and ψ̄′ψ′ of (Tf)(Φ′^{⊙2}) from the closed form.
    pub closed: [[f64; 2]; 2],
    /// The same from quadrature times the exact Berezin integral.
    pub numeric: [[f64; 2]; 2],
    pub deviation: f64,
    pub pass: bool,
}

pub fn t_quadrature_gate(b: Complex64, phi_prime: [f64; 2]) -> Result<QuadratureGate> {
    let f = GaussianSF::unit(CMat::from_element(1, 1, b))?;
    let tf = t_gaussian(&f)?;
    let u = Universe::pair(1, 1)?;
    let integrand = pairing_exponential::<Complex64>(&u, 1, 1, 1)?.mul(&gaussian_soul(&u, 0, &f.b)?);
    let fermionic = u.berezin_all(&integrand, 0)?;
    let numeric = fermionic.scale(&bosonic_quadrature_m1(b, &phi_prime)?);
    let r2 = phi_prime[0] * phi_prime[0] + phi_prime[1] * phi_prime[1];
    let closed = gaussian_soul(&u, 1, &tf.b)?.scale(&(I * 0.25 * tf.b[(0, 0)] * r2).exp());
    let deviation = numeric.max_abs_diff(&closed) / closed.max_abs();
    let top = 1u64 << u.bit(GeneratorId::psibar(1, 1, 1))? | 1u64 << u.bit(GeneratorId::psi(1, 1, 1))?;
    let pack = |e: &GElem<Complex64>| {
        let (c0, c1) = (e.coefficient(0), e.coefficient(top));
        [[c0.re, c0.im], [c1.re, c1.im]]
    };
    Ok(QuadratureGate {
        b: [b.re, b.im],
        phi_prime,
        closed: pack(&closed),
        numeric: pack(&numeric),
        deviation,
        pass: deviation < QUADRATURE_GATE_TOL,
    })
}

/// Both equalities of Ψ̄′·𝕋𝐟(Φ′^{⊙2}) = ±i∫e^{±iΦ·Φ′} Ψ̄·𝐟(Φ^{⊙2}) DΦ and of its Ψ-variant.
///
/// The left side comes from the 𝔻 coefficients of 𝕋𝐟; the right side from the engine
/// and Berezin integration, times the bosonic Gaussian integral. The common factor
/// e^{(i/4)Tr(B̂φ′^{⊙2})} is divided out. At m = 1 the bosonic factor is also
/// recomputed by quadrature.
pub fn thdt_check(f: &VectorGaussianSF, n: usize) -> Result<IdentityReport> {
    let m = f.m();
    let u = Universe::pair(m, n)?;
    let tf = bbt_gaussian(f)?;
    let w = &tf.v * tf.body.c;
    let v = &f.v * f.body.c;
    let bosonic = gaussian_ft_factor(&f.body.b, n)?;
    let soul = gaussian_soul(&u, 0, &f.body.b)?;
    let mut worst = 0.0f64;
    let mut counterexample = None;
    for bar in [true, false] {
        let lhs = assemble(&u, 1, &vexp_closed_form(&tf.body.b_prime(), &w, n, bar)?)?;
        let vector = first_column_dot(&u, 0, &v, bar)?.mul(&soul);
        for sign in [1i64, -1] {
            let integrand = pairing_exponential::<Complex64>(&u, m, n, sign)?.mul(&vector);
            let rhs = u.berezin_all(&integrand, 0)?.scale(&(I * sign as f64 * bosonic));
            let dev = lhs.max_abs_diff(&rhs) / lhs.max_abs().max(f64::MIN_POSITIVE);
            worst = worst.max(dev);
            if dev > THDT_TOL && counterexample.is_none() {
                let name = if bar { "psibar" } else { "psi" };
                counterexample = Some(format!("{name} variant, sign {sign:+}: relative deviation {dev:e}"));
            }
        }
    }
    let mut params = json!({"m": m, "n": n, "max_deviation": worst});
    if m == 1 {
        let probe: Vec<f64> = (0..2 * n).map(|j| 0.3 - 0.25 * j as f64).collect();
        let r2: f64 = probe.iter().map(|x| x * x).sum();
        let closed = bosonic * (I * 0.25 * tf.body.b[(0, 0)] * r2).exp();
        let numeric = bosonic_quadrature_m1(f.body.b[(0, 0)], &probe)?;
        let dev = (numeric - closed).norm() / closed.norm();
        params["bosonic_quadrature_deviation"] = json!(dev);
        if dev > THDT_TOL && counterexample.is_none() {
            counterexample = Some(format!("bosonic quadrature deviates by {dev:e}"));
        }
    }
    Ok(IdentityReport::new("theorem_dt", params, counterexample))
}

/// T∘T = id and 𝕋∘𝕋 = id on one input, as a maximal deviation.
pub fn involution_deviation(f: &VectorGaussianSF) -> Result<f64> {
    let tt = t_gaussian(&t_gaussian(&f.body)?)?;
    let bb = bbt_gaussian(&bbt_gaussian(f)?)?;
    let scale = crate::linalg::max_abs(&f.body.b).max(1.0);
    let d1 = crate::linalg::max_abs_diff(&tt.b, &f.body.b) / scale;
    let d2 = crate::linalg::max_abs_diff(&bb.body.b, &f.body.b) / scale;
    let vnorm = |x: &CVec| x.iter().fold(0.0f64, |a, c| a.max(c.norm()));
    let d3 = vnorm(&(&bb.v - &f.v)) / vnorm(&f.v).max(1.0);
    Ok(d1.max(d2).max(d3).max((tt.c - f.body.c).norm()))
}
