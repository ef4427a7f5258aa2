//! Adaptive Gauss–Kronrod (7/15) integration.

use num_complex::Complex64;

use crate::error::{LabError, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let pair = f(c - x)? + f(c + x)?;
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Ok(Segment { a, b, value: kronrod * h, error: ((kronrod - gauss) * h).abs() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Bisects the segment with the largest error estimate until the total error
/// drops below `rel_tol·|I|` or `max_segments` is reached.
pub fn integrate(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, rel_tol: f64, max_segments: usize) -> Result<Quadrature> {
    let mut segments = vec![gk15(&mut f, a, b)?];
    let mut evaluations = 15;
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= rel_tol * value.abs() || segments.len() >= max_segments {
            return Ok(Quadrature { value, error, evaluations });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("nonempty");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(gk15(&mut f, s.a, mid)?);
        segments.push(gk15(&mut f, mid, s.b)?);
        evaluations += 30;
    }
}

/// Complex-valued variant of [`integrate`]; the error budget is relative to |I|.
pub fn integrate_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Result<(Complex64, f64)> {
    let seg = |a: f64, b: f64| -> Result<(Segment, Segment)> {
        Ok((gk15(&mut |x| Ok(f(x).re), a, b)?, gk15(&mut |x| Ok(f(x).im), a, b)?))
    };
    let mut segments = vec![seg(a, b)?];
    loop {
        let value: Complex64 = segments.iter().map(|(r, i)| Complex64::new(r.value, i.value)).sum();
        let error: f64 = segments.iter().map(|(r, i)| r.error + i.error).sum();
        if error <= rel_tol * value.norm() {
            return Ok((value, error));
        }
        if segments.len() >= max_segments {
            return Err(LabError::QuadratureNotConverged(error / value.norm()));
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| (x.1 .0.error + x.1 .1.error).total_cmp(&(y.1 .0.error + y.1 .1.error)))
            .map(|(i, _)| i)
            .expect("nonempty");
        let (s, _) = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(seg(s.a, mid)?);
        segments.push(seg(mid, s.b)?);
    }
}

pub const QUAD_REL_TOL: f64 = 1e-10;
pub const QUAD_ACCEPT: f64 = 1e-4;
pub const QUAD_MAX_SEGMENTS: usize = 4000;

/// ∫_ℝ f over the window [lo, hi] plus both tails, each tail mapped onto
/// (0, 1] by E = hi + L(1−u)/u (mirrored on the left). Integrands decaying
/// like E⁻² stay bounded under the map.
pub fn integrate_real_line(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64, scale: f64) -> Result<Quadrature> {
    let window = integrate(&mut f, lo, hi, QUAD_REL_TOL, QUAD_MAX_SEGMENTS)?;
    let right = integrate(|u: f64| Ok(f(hi + scale * (1.0 - u) / u)? * scale / (u * u)), 0.0, 1.0, QUAD_REL_TOL, QUAD_MAX_SEGMENTS)?;
    let left = integrate(|u: f64| Ok(f(lo - scale * (1.0 - u) / u)? * scale / (u * u)), 0.0, 1.0, QUAD_REL_TOL, QUAD_MAX_SEGMENTS)?;
    let total = Quadrature {
        value: window.value + right.value + left.value,
        error: window.error + right.error + left.error,
        evaluations: window.evaluations + right.evaluations + left.evaluations,
    };
    if !(total.error <= QUAD_ACCEPT * total.value.abs()) {
        return Err(LabError::QuadratureNotConverged(total.error / total.value.abs()));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x| Ok(x.powi(5) - 2.0 * x * x), -1.0, 2.0, 1e-14, 10).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - 2.0 * (8.0 + 1.0) / 3.0;
        assert!((q.value - exact).abs() < 1e-12);
    }

    #[test]
    fn lorentzian_over_the_line() {
        let eta = 0.3;
        let q = integrate_real_line(|x| Ok(eta / (x * x + eta * eta)), -12.0 * eta, 12.0 * eta, 12.0 * eta).unwrap();
        assert!((q.value - std::f64::consts::PI).abs() < 1e-9);
    }
}
