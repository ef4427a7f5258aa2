#![allow(dead_code)]

use bethe_lab::linalg::RMat;
use bethe_lab::model::{validate_params, DisorderSpec, ModelParams};

pub fn diag(d: &[f64]) -> RMat {
    RMat::from_diagonal(&nalgebra::DVector::from_row_slice(d))
}

pub fn free(k: usize, a: RMat) -> ModelParams {
    let m = a.nrows();
    validate_params(k, m, a, 0.0, DisorderSpec::Zero).unwrap()
}

pub fn scalar_free(k: usize) -> ModelParams {
    free(k, RMat::zeros(1, 1))
}

pub fn disordered(k: usize, m: usize, lambda: f64) -> ModelParams {
    let mut a = RMat::zeros(m, m);
    for i in 0..m {
        a[(i, i)] = 0.3 * i as f64 - 0.1;
    }
    if m > 1 {
        a[(0, 1)] = 0.2;
        a[(1, 0)] = 0.2;
    }
    validate_params(k, m, a, lambda, DisorderSpec::Goe { sigma: 1.0 }).unwrap()
}

pub fn rel_err(a: &bethe_lab::linalg::CMat, b: &bethe_lab::linalg::CMat) -> f64 {
    bethe_lab::linalg::max_abs_diff(a, b) / bethe_lab::linalg::max_abs(b).max(1e-300)
}
