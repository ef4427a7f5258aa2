use nalgebra::DVector;
use num_complex::Complex64;
use serde_json::json;

use crate::error::{LabError, Result};
use crate::grassmann::{card, class_pairs, elements, full_set, sgn, sgn4, IdentityReport, IndexTuplePair, Subset};
use crate::linalg::{imag, max_abs, max_abs_diff, min_sym_eigenvalue, re, CMat, RMat, I};

pub type CVec = DVector<Complex64>;

const SYMMETRY_TOL: f64 = 1e-12;

/// c·e^{(i/4)Tr(B φ^{⊙2})} with complex symmetric B.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSF {
    pub b: CMat,
    pub c: Complex64,
}

impl GaussianSF {
    pub fn new(b: CMat, c: Complex64) -> Result<Self> {
        if !b.is_square() || b.nrows() == 0 {
            return Err(LabError::InvalidMatrix("Gaussian parameter must be a nonempty square matrix".into()));
        }
        if max_abs_diff(&b, &b.transpose()) > SYMMETRY_TOL * (1.0 + max_abs(&b)) {
            return Err(LabError::InvalidMatrix("Gaussian parameter must be symmetric".into()));
        }
        Ok(GaussianSF { b, c })
    }

    pub fn unit(b: CMat) -> Result<Self> {
        GaussianSF::new(b, re(1.0))
    }

    pub fn m(&self) -> usize {
        self.b.nrows()
    }

    /// (i/4)B, the matrix of ∂̃ acting on the Gaussian.
    pub fn b_prime(&self) -> CMat {
        &self.b * (I * 0.25)
    }

    /// f(M) for a symmetric argument M.
    pub fn eval_matrix(&self, mat: &CMat) -> Complex64 {
        self.c * (I * 0.25 * (&self.b * mat).trace()).exp()
    }

    /// f(φ^{⊙2}) for φ ∈ ℝ^{m×2n}.
    pub fn eval(&self, phi: &RMat) -> Complex64 {
        let sq = phi * phi.transpose();
        self.eval_matrix(&sq.map(re))
    }

    pub fn is_integrable(&self) -> bool {
        min_sym_eigenvalue(&imag(&self.b)) > 0.0
    }

    pub fn require_integrable(&self) -> Result<()> {
        if self.is_integrable() {
            Ok(())
        } else {
            Err(LabError::NotIntegrable)
        }
    }

    pub fn product(&self, other: &GaussianSF) -> Result<GaussianSF> {
        if self.m() != other.m() {
            return Err(LabError::InvalidMatrix("Gaussian factors of different size".into()));
        }
        GaussianSF::new(&self.b + &other.b, self.c * other.c)
    }
}

/// det of the (rows, cols) submatrix; 1 for (∅, ∅).
pub fn submatrix_det(a: &CMat, rows: Subset, cols: Subset) -> Result<Complex64> {
    let all = full_set(a.nrows());
    if rows & !all != 0 || cols & !all != 0 {
        return Err(LabError::InvalidIndex(format!("index outside 1..{}", a.nrows())));
    }
    if card(rows) != card(cols) {
        return Err(LabError::InvalidIndex("minor needs |ā| = |a|".into()));
    }
    let (r, c) = (elements(rows), elements(cols));
    if r.is_empty() {
        return Ok(re(1.0));
    }
    Ok(CMat::from_fn(r.len(), c.len(), |i, j| a[(r[i] - 1, c[j] - 1)]).determinant())
}

/// Π_ℓ det(B′[ā_ℓ, a_ℓ]) with B′ = (i/4)B: the factor D_{ā,a} produces on a Gaussian.
pub fn derivative_factor(f: &GaussianSF, p: &IndexTuplePair) -> Result<Complex64> {
    if p.m != f.m() {
        return Err(LabError::InvalidIndex(format!("index pair over m = {} applied to m = {}", p.m, f.m())));
    }
    minor_product(&f.b_prime(), p)
}

/// Π_ℓ det(M[ā_ℓ, a_ℓ]).
pub fn minor_product(mat: &CMat, p: &IndexTuplePair) -> Result<Complex64> {
    p.bar.iter().zip(&p.unbar).try_fold(re(1.0), |acc, (&b, &a)| Ok(acc * submatrix_det(mat, b, a)?))
}

/// D_{ā,a} f for a single pair (ā, a) ∈ 𝒫.
pub fn matrix_derivative_single(f: &GaussianSF, bar: Subset, unbar: Subset) -> Result<GaussianSF> {
    let d = submatrix_det(&f.b_prime(), bar, unbar)?;
    Ok(GaussianSF { b: f.b.clone(), c: f.c * d })
}

/// D_{ā,a} f = Π_ℓ D_{ā_ℓ,a_ℓ} f for (ā, a) ∈ 𝒫ⁿ.
pub fn matrix_derivative(f: &GaussianSF, p: &IndexTuplePair) -> Result<GaussianSF> {
    let d = derivative_factor(f, p)?;
    Ok(GaussianSF { b: f.b.clone(), c: f.c * d })
}

/// f_k = v_k e^{(i/4)Tr(B φ^{⊙2})}.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorGaussianSF {
    pub body: GaussianSF,
    pub v: CVec,
}

impl VectorGaussianSF {
    pub fn new(body: GaussianSF, v: CVec) -> Result<Self> {
        if v.len() != body.m() {
            return Err(LabError::InvalidMatrix("vector prefactor length differs from m".into()));
        }
        Ok(VectorGaussianSF { body, v })
    }

    pub fn m(&self) -> usize {
        self.body.m()
    }
}

/// P·e^{(i/4)Tr(B₊φ₊^{⊙2} − B₋φ₋^{⊙2})}.
#[derive(Clone, Debug, PartialEq)]
pub struct PairGaussianSF {
    pub b_plus: CMat,
    pub b_minus: CMat,
    pub prefactor: CMat,
}

impl PairGaussianSF {
    pub fn eval(&self, m_plus: &CMat, m_minus: &CMat) -> CMat {
        let phase = (I * 0.25 * ((&self.b_plus * m_plus).trace() - (&self.b_minus * m_minus).trace())).exp();
        &self.prefactor * phase
    }
}

/// Leibniz rule for D_{ā,a}(fg) on two Gaussians, for every (ā, a) ∈ 𝒫ⁿ.
pub fn leibniz_check(f: &GaussianSF, g: &GaussianSF, n: usize) -> Result<IdentityReport> {
    let m = f.m();
    let fg = f.product(g)?;
    let mut worst = 0.0f64;
    let mut counterexample = None;
    let pairs = class_pairs(m, n, 0);
    for a in &pairs {
        let lhs = matrix_derivative(&fg, a)?.c;
        let mut rhs = re(0.0);
        for b in &pairs {
            let inside = b.bar.iter().zip(&a.bar).all(|(x, y)| x & !y == 0)
                && b.unbar.iter().zip(&a.unbar).all(|(x, y)| x & !y == 0);
            if !inside {
                continue;
            }
            let bp = a.minus(b)?;
            if !bp.is_balanced() {
                continue;
            }
            let s = sgn(&b.unbar) * sgn(&bp.unbar) * sgn(&a.unbar) * sgn4(b, &bp)?;
            rhs += matrix_derivative(g, b)?.c * matrix_derivative(f, &bp)?.c * s as f64;
        }
        let dev = (lhs - rhs).norm() / (1.0 + lhs.norm());
        worst = worst.max(dev);
        if dev > 1e-12 && counterexample.is_none() {
            counterexample = Some(format!("ā={:?} a={:?}: {lhs} vs {rhs}", a.bar, a.unbar));
        }
    }
    Ok(IdentityReport::new("leibniz", json!({"m": m, "n": n, "pairs": pairs.len(), "max_deviation": worst}), counterexample))
}
