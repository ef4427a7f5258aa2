//! Matrix Green's functions G(x,y;z) = ⟨x|(H − z)⁻¹|y⟩ on truncated Bethe strips.

mod dense;
mod fixed_point;
mod recursion;

pub use dense::{dense_green, hamiltonian_dense, DENSE_DIM_CAP};
pub use fixed_point::{damped_iteration, halfspace_green_fixedpoint, minus_four_a_e, FIXED_POINT_MAX_ITER, FIXED_POINT_TOL};
pub use recursion::{
    full_green_diag, halfspace_green_finite, level_greens, offdiag_green_path, path_product, subtree_greens, PathInput,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::{complexify, max_abs, CMat, RMat};
use crate::model::{ModelParams, TreeGeometry};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexEnergy {
    pub e: f64,
    pub eta: f64,
}

impl ComplexEnergy {
    pub fn new(e: f64, eta: f64) -> Self {
        ComplexEnergy { e, eta }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.e, self.eta)
    }

    pub fn require_positive(&self) -> Result<()> {
        if self.eta > 0.0 && self.eta.is_finite() && self.e.is_finite() {
            Ok(())
        } else {
            Err(LabError::RequiresPositiveEta(self.eta))
        }
    }
}

/// Random part of the on-site operator, before scaling by λ.
#[derive(Clone, Debug, PartialEq)]
pub enum Potential {
    Zero,
    /// One symmetric matrix per vertex, in the tree's breadth-first order.
    PerVertex(Vec<RMat>),
}

impl Potential {
    /// Independent draws for every vertex of `tree`, consumed in index order.
    pub fn sample(params: &ModelParams, tree: &TreeGeometry, stream: &RngStream) -> Potential {
        Potential::PerVertex(crate::model::sample_potential(&params.disorder, params.m, stream, tree.len()))
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        match self {
            Potential::PerVertex(v) if v.len() != n => {
                Err(LabError::Config(format!("potential has {} vertices, tree has {n}", v.len())))
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn at(&self, v: usize) -> Option<&RMat> {
        match self {
            Potential::Zero => None,
            Potential::PerVertex(p) => Some(&p[v]),
        }
    }
}

/// A + λV − z·1 as a complex matrix.
pub fn shifted(params: &ModelParams, v: Option<&RMat>, z: Complex64) -> CMat {
    let mut h = params.a.clone();
    if let Some(v) = v {
        if params.lambda != 0.0 {
            h += v * params.lambda;
        }
    }
    let mut out = complexify(&h);
    for k in 0..params.m {
        out[(k, k)] -= z;
    }
    out
}

/// Entrywise imaginary part (G − conj G)/(2i) of a symmetric Green's matrix.
pub fn green_imaginary(g: &CMat) -> Result<RMat> {
    if !g.is_square() {
        return Err(LabError::InvalidGreen("not square".into()));
    }
    let scale = 1.0 + max_abs(g);
    let asym = crate::linalg::max_abs_diff(g, &g.transpose());
    if asym > 1e-10 * scale {
        return Err(LabError::InvalidGreen(format!("asymmetry {asym:e}")));
    }
    Ok(g.map(|x| x.im))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GreenJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&CMat> for GreenJson {
    fn from(g: &CMat) -> Self {
        let rows = |f: fn(&Complex64) -> f64| (0..g.nrows()).map(|i| (0..g.ncols()).map(|j| f(&g[(i, j)])).collect()).collect();
        GreenJson { re: rows(|x| x.re), im: rows(|x| x.im) }
    }
}
