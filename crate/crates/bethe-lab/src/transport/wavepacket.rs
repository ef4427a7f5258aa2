//! Wave-packet spreading on a finite ball via dense eigendecomposition.

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::greens::{hamiltonian_dense, Potential};
use crate::linalg::{sym_eigen, RMat};
use crate::model::{ModelParams, TreeGeometry};

/// Eigenpairs of the truncated H together with the |x|² weights.
#[derive(Clone, Debug)]
pub struct BallSpectrum {
    pub m: usize,
    pub energies: Vec<f64>,
    /// Columns are eigenvectors, rows indexed by x·m + k.
    pub vectors: RMat,
    pub weights: Vec<f64>,
}

impl BallSpectrum {
    pub fn new(params: &ModelParams, potential: &Potential, tree: &TreeGeometry) -> Result<Self> {
        let h = hamiltonian_dense(params, potential, tree)?;
        let (energies, vectors) = sym_eigen(&h);
        let m = params.m;
        let weights = (0..tree.len() * m).map(|i| (tree.depth(i / m) as f64).powi(2)).collect();
        Ok(BallSpectrum { m, energies, vectors, weights })
    }

    /// Σ_{x,k} |x|² |⟨x,k|e^{−itH}|0,j⟩|², channel j counted from 1.
    pub fn r2(&self, t: f64, j: usize) -> Result<f64> {
        if j == 0 || j > self.m {
            return Err(LabError::InvalidIndex(format!("channel {j} outside 1..={}", self.m)));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let start = j - 1;
        let n = self.energies.len();
        let coeffs: Vec<Complex64> =
            (0..n).map(|e| Complex64::from_polar(self.vectors[(start, e)], -t * self.energies[e])).collect();
        let mut total = 0.0;
        for row in 0..n {
            if self.weights[row] == 0.0 {
                continue;
            }
            let mut amp = Complex64::new(0.0, 0.0);
            for (e, c) in coeffs.iter().enumerate() {
                amp += c * self.vectors[(row, e)];
            }
            total += self.weights[row] * amp.norm_sqr();
        }
        Ok(total)
    }

    pub fn r2_origin(&self, t: f64) -> Result<f64> {
        (1..=self.m).map(|j| self.r2(t, j)).sum()
    }
}

fn require_ball(tree: &TreeGeometry) -> Result<()> {
    if matches!(tree.kind, crate::model::TreeKind::Ball(_)) {
        Ok(())
    } else {
        Err(LabError::Config("wave-packet observables are defined on Ball trees".into()))
    }
}

/// r²_{0,j}(t) on the truncated ball; meaningful while the front stays inside.
pub fn wavepacket_r2(params: &ModelParams, potential: &Potential, tree: &TreeGeometry, t: f64, j: usize) -> Result<f64> {
    require_ball(tree)?;
    BallSpectrum::new(params, potential, tree)?.r2(t, j)
}

/// Σ_j r²_{0,j}(t).
pub fn r2_origin(params: &ModelParams, potential: &Potential, tree: &TreeGeometry, t: f64) -> Result<f64> {
    require_ball(tree)?;
    BallSpectrum::new(params, potential, tree)?.r2_origin(t)
}
