//! Small dense helpers shared by the Green's function and transport code.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{LabError, Result};

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn complexify(a: &RMat) -> CMat {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Inverse with closed forms for 1x1 and 2x2 blocks, LU otherwise.
pub fn invert(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let out = match n {
        1 => {
            let d = a[(0, 0)];
            if d.norm_sqr() == 0.0 {
                return Err(LabError::NumericalBreakdown("singular 1x1 block".into()));
            }
            CMat::from_element(1, 1, d.inv())
        }
        2 => {
            let (p, q, r, s) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
            let det = p * s - q * r;
            if det.norm_sqr() == 0.0 {
                return Err(LabError::NumericalBreakdown("singular 2x2 block".into()));
            }
            let inv = det.inv();
            CMat::from_row_slice(2, 2, &[s * inv, -q * inv, -r * inv, p * inv])
        }
        _ => a
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| LabError::NumericalBreakdown(format!("singular {n}x{n} block")))?,
    };
    if out.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(LabError::NumericalBreakdown("non-finite inverse".into()));
    }
    Ok(out)
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Entrywise imaginary part.
pub fn imag(a: &CMat) -> RMat {
    a.map(|x| x.im)
}

/// Tr(A* A), the squared Frobenius norm.
pub fn trace_abs2(a: &CMat) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn is_exactly_symmetric(a: &RMat) -> bool {
    a.is_square() && (0..a.nrows()).all(|i| (0..i).all(|j| a[(i, j)] == a[(j, i)]))
}

/// Largest singular value.
pub fn op_norm(a: &CMat) -> f64 {
    a.clone().singular_values().iter().fold(0.0, |acc: f64, &x| acc.max(x))
}

/// Eigenvalues of a real symmetric matrix in ascending order together with eigenvectors.
pub fn sym_eigen(a: &RMat) -> (Vec<f64>, RMat) {
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = RMat::from_fn(a.nrows(), a.ncols(), |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// Applies a scalar function channelwise: U diag(f(a_i)) Uᵀ for a real symmetric `a`.
pub fn sym_function(a: &RMat, f: impl Fn(f64) -> Complex64) -> CMat {
    let (values, u) = sym_eigen(a);
    let n = a.nrows();
    let uc = complexify(&u);
    let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(n, values.iter().map(|&x| f(x))));
    &uc * d * uc.transpose()
}

/// Smallest eigenvalue of the real symmetric matrix (X + Xᵀ)/2.
pub fn min_sym_eigenvalue(a: &RMat) -> f64 {
    let s = (a + a.transpose()) * 0.5;
    sym_eigen(&s).0.first().copied().unwrap_or(f64::INFINITY)
}
