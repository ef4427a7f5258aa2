//! Bethe-strip Hamiltonian data: connectivity, vertical operator, disorder law
//! and the spectral intervals derived from them.

mod tree;

pub use tree::{build_tree, build_tree_with_cap, TreeGeometry, TreeKind, DEFAULT_VERTEX_CAP};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::{is_exactly_symmetric, sym_eigen, RMat};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DisorderSpec {
    /// Diagonal entries iid N(0, σ²), off-diagonal entries zero.
    DiagonalGaussianIid { sigma: f64 },
    /// Symmetric Gaussian matrix, diagonal variance 2σ², off-diagonal variance σ².
    Goe { sigma: f64 },
    Zero,
}

impl DisorderSpec {
    pub fn is_zero(&self) -> bool {
        match *self {
            DisorderSpec::Zero => true,
            DisorderSpec::DiagonalGaussianIid { sigma } | DisorderSpec::Goe { sigma } => sigma == 0.0,
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> RMat {
        match *self {
            DisorderSpec::Zero => RMat::zeros(m, m),
            DisorderSpec::DiagonalGaussianIid { sigma } => {
                let mut v = RMat::zeros(m, m);
                for k in 0..m {
                    let g: f64 = rng.sample(StandardNormal);
                    v[(k, k)] = sigma * g;
                }
                v
            }
            DisorderSpec::Goe { sigma } => {
                let mut v = RMat::zeros(m, m);
                for j in 0..m {
                    let g: f64 = rng.sample(StandardNormal);
                    v[(j, j)] = sigma * std::f64::consts::SQRT_2 * g;
                    for k in (j + 1)..m {
                        let g: f64 = rng.sample(StandardNormal);
                        v[(j, k)] = sigma * g;
                        v[(k, j)] = sigma * g;
                    }
                }
                v
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub k: usize,
    pub m: usize,
    pub a: RMat,
    pub lambda: f64,
    pub disorder: DisorderSpec,
    pub theorems_applicable: bool,
    a_eigenvalues: Vec<f64>,
}

impl ModelParams {
    /// Eigenvalues of A in ascending order.
    pub fn a_eigenvalues(&self) -> &[f64] {
        &self.a_eigenvalues
    }

    pub fn a_min(&self) -> f64 {
        self.a_eigenvalues[0]
    }

    pub fn a_max(&self) -> f64 {
        *self.a_eigenvalues.last().unwrap()
    }

    /// True when the random part vanishes and every quantity is deterministic.
    pub fn is_deterministic(&self) -> bool {
        self.lambda == 0.0 || self.disorder.is_zero()
    }

    /// A new parameter set with the disorder switched off.
    pub fn free(&self) -> ModelParams {
        ModelParams { lambda: 0.0, ..self.clone() }
    }
}

pub fn validate_params(k: usize, m: usize, a: RMat, lambda: f64, disorder: DisorderSpec) -> Result<ModelParams> {
    if k < 2 {
        return Err(LabError::InvalidConnectivity(k));
    }
    if m == 0 || a.nrows() != m || a.ncols() != m {
        return Err(LabError::InvalidMatrix(format!("A must be {m}x{m}, got {}x{}", a.nrows(), a.ncols())));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(LabError::InvalidMatrix("A has non-finite entries".into()));
    }
    if !is_exactly_symmetric(&a) {
        return Err(LabError::InvalidMatrix("A is not symmetric".into()));
    }
    if !lambda.is_finite() {
        return Err(LabError::Config("lambda must be finite".into()));
    }
    match disorder {
        DisorderSpec::DiagonalGaussianIid { sigma } | DisorderSpec::Goe { sigma } if !(sigma >= 0.0 && sigma.is_finite()) => {
            return Err(LabError::Config(format!("disorder sigma must be finite and >= 0, got {sigma}")));
        }
        _ => {}
    }
    let (a_eigenvalues, _) = sym_eigen(&a);
    let spread = a_eigenvalues[m - 1] - a_eigenvalues[0];
    let theorems_applicable = spread < 2.0 * (k as f64).sqrt();
    Ok(ModelParams { k, m, a, lambda, disorder, theorems_applicable, a_eigenvalues })
}

/// The open interval (−√K + a_max, √K + a_min), or `None` when it is empty.
pub fn spectral_interval(params: &ModelParams) -> Option<(f64, f64)> {
    let s = (params.k as f64).sqrt();
    let (lo, hi) = (params.a_max() - s, params.a_min() + s);
    (lo < hi).then_some((lo, hi))
}

/// Merged union of [a_i − √K, a_i + √K].
pub fn free_spectrum(params: &ModelParams) -> Vec<(f64, f64)> {
    let s = (params.k as f64).sqrt();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for &a in params.a_eigenvalues() {
        let (lo, hi) = (a - s, a + s);
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// `count` iid potentials drawn sequentially from one stream.
pub fn sample_potential(disorder: &DisorderSpec, m: usize, stream: &RngStream, count: usize) -> Vec<RMat> {
    let mut rng = stream.rng();
    (0..count).map(|_| disorder.draw(m, &mut rng)).collect()
}

/// h(M) = E exp(−i Tr(M V)) for real symmetric M.
///
/// Tr(MV) is a centred Gaussian. For the diagonal law its variance is
/// σ² Σ_k M_kk². For GOE, Tr(MV) = Σ_k M_kk V_kk + 2 Σ_{j<k} M_jk V_jk, so the
/// variance is 2σ² Σ_k M_kk² + 4σ² Σ_{j<k} M_jk² = 2σ² Tr(M²) and
/// h(M) = exp(−σ² Tr(M²)).
pub fn char_function(disorder: &DisorderSpec, m: &RMat) -> Result<Complex64> {
    if !is_exactly_symmetric(m) {
        return Err(LabError::InvalidMatrix("characteristic function needs a symmetric argument".into()));
    }
    let value = match *disorder {
        DisorderSpec::Zero => 1.0,
        DisorderSpec::DiagonalGaussianIid { sigma } => {
            let s: f64 = (0..m.nrows()).map(|k| m[(k, k)].powi(2)).sum();
            (-0.5 * sigma * sigma * s).exp()
        }
        DisorderSpec::Goe { sigma } => {
            let tr2: f64 = m.iter().map(|x| x * x).sum();
            (-sigma * sigma * tr2).exp()
        }
    };
    Ok(Complex64::new(value, 0.0))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DisorderJson {
    pub variant: String,
    #[serde(default)]
    pub sigma: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModelParamsJson {
    #[serde(rename = "K")]
    pub k: usize,
    pub m: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub lambda: f64,
    pub disorder: DisorderJson,
}

impl ModelParamsJson {
    pub fn into_params(self) -> Result<ModelParams> {
        let rows = self.a.len();
        if rows != self.m || self.a.iter().any(|r| r.len() != self.m) {
            return Err(LabError::InvalidMatrix(format!("A must be a {}x{} nested array", self.m, self.m)));
        }
        let a = DMatrix::from_fn(self.m, self.m, |i, j| self.a[i][j]);
        let sigma = self.disorder.sigma;
        let disorder = match self.disorder.variant.as_str() {
            "DiagonalGaussianIID" => DisorderSpec::DiagonalGaussianIid { sigma },
            "GOE" => DisorderSpec::Goe { sigma },
            "Zero" => DisorderSpec::Zero,
            other => return Err(LabError::Config(format!("unknown disorder variant {other:?}"))),
        };
        validate_params(self.k, self.m, a, self.lambda, disorder)
    }
}

impl From<&ModelParams> for ModelParamsJson {
    fn from(p: &ModelParams) -> Self {
        let (variant, sigma) = match p.disorder {
            DisorderSpec::DiagonalGaussianIid { sigma } => ("DiagonalGaussianIID", sigma),
            DisorderSpec::Goe { sigma } => ("GOE", sigma),
            DisorderSpec::Zero => ("Zero", 0.0),
        };
        ModelParamsJson {
            k: p.k,
            m: p.m,
            a: (0..p.m).map(|i| (0..p.m).map(|j| p.a[(i, j)]).collect()).collect(),
            lambda: p.lambda,
            disorder: DisorderJson { variant: variant.into(), sigma },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[f64]) -> RMat {
        RMat::from_diagonal(&nalgebra::DVector::from_row_slice(d))
    }

    #[test]
    fn validation_examples() {
        let p = validate_params(4, 2, diag(&[-0.5, 0.5]), 0.0, DisorderSpec::Zero).unwrap();
        assert!(p.theorems_applicable);
        assert_eq!(
            validate_params(1, 1, RMat::zeros(1, 1), 0.0, DisorderSpec::Zero),
            Err(LabError::InvalidConnectivity(1))
        );
        let p = validate_params(2, 2, diag(&[0.0, 5.0]), 0.0, DisorderSpec::Zero).unwrap();
        assert!(!p.theorems_applicable);
        assert!(spectral_interval(&p).is_none());
        let mut a = RMat::zeros(2, 2);
        a[(0, 1)] = 1.0;
        a[(1, 0)] = 1.0 + 1e-15;
        assert!(matches!(validate_params(2, 2, a, 0.0, DisorderSpec::Zero), Err(LabError::InvalidMatrix(_))));
    }

    #[test]
    fn interval_examples() {
        let p = validate_params(4, 1, RMat::zeros(1, 1), 0.0, DisorderSpec::Zero).unwrap();
        assert_eq!(spectral_interval(&p), Some((-2.0, 2.0)));
        let p = validate_params(4, 2, diag(&[-0.5, 0.5]), 0.0, DisorderSpec::Zero).unwrap();
        assert_eq!(spectral_interval(&p), Some((-1.5, 1.5)));
        let p = validate_params(4, 2, diag(&[-2.0, 2.0]), 0.0, DisorderSpec::Zero).unwrap();
        assert_eq!(spectral_interval(&p), None);
    }

    #[test]
    fn free_spectrum_examples() {
        let p = validate_params(4, 1, RMat::zeros(1, 1), 0.0, DisorderSpec::Zero).unwrap();
        assert_eq!(free_spectrum(&p), vec![(-2.0, 2.0)]);
        let p = validate_params(4, 2, diag(&[-3.0, 3.0]), 0.0, DisorderSpec::Zero).unwrap();
        assert_eq!(free_spectrum(&p), vec![(-5.0, -1.0), (1.0, 5.0)]);
        let p = validate_params(3, 2, RMat::zeros(2, 2), 0.0, DisorderSpec::Zero).unwrap();
        assert_eq!(free_spectrum(&p), vec![(-(3f64.sqrt()), 3f64.sqrt())]);
    }

    #[test]
    fn potential_samples() {
        let s = RngStream::new(11);
        assert!(sample_potential(&DisorderSpec::Zero, 3, &s, 3).iter().all(|v| v.iter().all(|&x| x == 0.0)));
        let v = &sample_potential(&DisorderSpec::Goe { sigma: 1.3 }, 4, &s, 1)[0];
        assert!(is_exactly_symmetric(v));
        let n = 100_000;
        let vs = sample_potential(&DisorderSpec::DiagonalGaussianIid { sigma: 1.0 }, 2, &s, n);
        let mean: f64 = vs.iter().map(|v| v[(0, 0)].powi(2)).sum::<f64>() / n as f64;
        let w = 3.0 * (2.0 / n as f64).sqrt();
        assert!((mean - 1.0).abs() < w, "mean {mean}");
        assert!(vs.iter().all(|v| v[(0, 1)] == 0.0));
    }

    #[test]
    fn char_function_examples() {
        let d = DisorderSpec::DiagonalGaussianIid { sigma: 1.0 };
        assert_eq!(char_function(&d, &RMat::zeros(2, 2)).unwrap(), Complex64::new(1.0, 0.0));
        let h = char_function(&d, &RMat::identity(2, 2)).unwrap();
        assert!((h.re - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn goe_char_function_matches_sampling() {
        let d = DisorderSpec::Goe { sigma: 0.7 };
        let mut mm = RMat::zeros(2, 2);
        mm[(0, 0)] = 0.4;
        mm[(1, 1)] = -0.9;
        mm[(0, 1)] = 0.6;
        mm[(1, 0)] = 0.6;
        let n = 200_000;
        let vs = sample_potential(&d, 2, &RngStream::new(5), n);
        let est: f64 = vs.iter().map(|v| (mm.component_mul(v)).sum().cos()).sum::<f64>() / n as f64;
        let h = char_function(&d, &mm).unwrap().re;
        assert!((est - h).abs() < 5.0 / (n as f64).sqrt(), "{est} vs {h}");
    }

    #[test]
    fn json_round_trip() {
        let p = validate_params(4, 2, diag(&[-0.5, 0.5]), 0.3, DisorderSpec::Goe { sigma: 1.0 }).unwrap();
        let text = serde_json::to_string(&ModelParamsJson::from(&p)).unwrap();
        let back: ModelParamsJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_params().unwrap(), p);
    }
}
