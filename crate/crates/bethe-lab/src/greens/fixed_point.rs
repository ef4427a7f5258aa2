use super::{shifted, ComplexEnergy};
use crate::error::{LabError, Result};
use crate::linalg::{invert, max_abs_diff, re, sym_function, CMat, RMat, I};
use crate::model::{spectral_interval, ModelParams};

pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const FIXED_POINT_MAX_ITER: usize = 100_000;

/// Iterates `g ← map(g)` until successive iterates differ by less than `tol` in
/// max-norm. Once the step sizes stop improving on the best seen so far the
/// update switches to the half-damped form g ← (g + map(g))/2, which turns the
/// neutral rotation of the near-real-axis problem into a contraction.
pub fn damped_iteration(mut g: CMat, tol: f64, max_iter: usize, map: impl Fn(&CMat) -> Result<CMat>) -> Result<CMat> {
    let mut damped = false;
    let mut best = f64::INFINITY;
    let mut slow_steps = 0usize;
    for _ in 0..max_iter {
        let next = map(&g)?;
        let diff = max_abs_diff(&next, &g);
        if diff < tol {
            return Ok(next);
        }
        if !damped {
            if diff > 0.95 * best {
                slow_steps += 1;
            } else {
                slow_steps = 0;
            }
            if slow_steps >= 10 {
                damped = true;
            }
        }
        best = best.min(diff);
        g = if damped { (g + next) * re(0.5) } else { next };
    }
    Err(LabError::FixedPointDiverged(max_iter))
}

/// λ = 0 half-space fixed point G = [A − z − (K/4) G]⁻¹ of the infinite tree.
///
/// On the real axis (η = 0) the iteration starts from [A − E − i]⁻¹ so that it
/// stays in the upper half plane, whose only fixed point is the physical one.
pub fn halfspace_green_fixedpoint(params: &ModelParams, energy: ComplexEnergy) -> Result<CMat> {
    if !params.is_deterministic() {
        return Err(LabError::Config("the fixed-point recursion requires lambda = 0".into()));
    }
    if energy.eta < 0.0 || !energy.eta.is_finite() {
        return Err(LabError::RequiresPositiveEta(energy.eta));
    }
    let free = params.free();
    let base = shifted(&free, None, energy.z());
    let start = if energy.eta == 0.0 {
        let s = (params.k as f64).sqrt();
        if !(energy.e >= params.a_max() - s && energy.e <= params.a_min() + s) {
            return Err(LabError::UnsupportedEnergy(energy.e));
        }
        let mut b = base.clone();
        for k in 0..params.m {
            b[(k, k)] -= I;
        }
        invert(&b)?
    } else {
        invert(&base)?
    };
    let quarter_k = 0.25 * params.k as f64;
    damped_iteration(start, FIXED_POINT_TOL, FIXED_POINT_MAX_ITER, |g| invert(&(&base - g * re(quarter_k))))
}

/// The η ↓ 0 limit −4A_E = −(2/K)((E − A) − i√(K − (E − A)²)) for E in I_{A,K}.
pub fn minus_four_a_e(params: &ModelParams, e: f64) -> Result<CMat> {
    match spectral_interval(params) {
        Some((lo, hi)) if e > lo && e < hi => {}
        _ => return Err(LabError::UnsupportedEnergy(e)),
    }
    let k = params.k as f64;
    let shifted_a = RMat::identity(params.m, params.m) * e - &params.a;
    Ok(sym_function(&shifted_a, |x| {
        num_complex::Complex64::new(-2.0 * x / k, 2.0 * (k - x * x).sqrt() / k)
    }))
}
