//! Direct resolvent of the truncated operator, used as an oracle.

use super::{ComplexEnergy, Potential};
use crate::error::{LabError, Result};
use crate::linalg::{complexify, CMat, RMat};
use crate::model::{ModelParams, TreeGeometry};

/// Largest m·|Λ| handled by dense factorizations and eigendecompositions.
pub const DENSE_DIM_CAP: usize = 4000;

/// H restricted to the tree with Dirichlet boundary; index (x, k) ↦ x·m + k.
pub fn hamiltonian_dense(params: &ModelParams, potential: &Potential, tree: &TreeGeometry) -> Result<RMat> {
    let m = params.m;
    let n = tree.len() * m;
    if n > DENSE_DIM_CAP {
        return Err(LabError::TreeTooLarge { size: n as u128, cap: DENSE_DIM_CAP });
    }
    potential.check_len(tree.len())?;
    let mut h = RMat::zeros(n, n);
    for x in 0..tree.len() {
        let mut block = params.a.clone();
        if let Some(v) = potential.at(x) {
            block += v * params.lambda;
        }
        h.view_mut((x * m, x * m), (m, m)).copy_from(&block);
        if let Some(p) = tree.parent(x) {
            for k in 0..m {
                h[(x * m + k, p * m + k)] = 0.5;
                h[(p * m + k, x * m + k)] = 0.5;
            }
        }
    }
    Ok(h)
}

/// Blocks ⟨x|(H_Λ − z)⁻¹|y⟩ for the requested (x, y) pairs.
pub fn dense_green(
    params: &ModelParams,
    potential: &Potential,
    tree: &TreeGeometry,
    energy: ComplexEnergy,
    pairs: &[(usize, usize)],
) -> Result<Vec<CMat>> {
    energy.require_positive()?;
    let h = hamiltonian_dense(params, potential, tree)?;
    let m = params.m;
    let n = h.nrows();
    for &(x, y) in pairs {
        if x >= tree.len() || y >= tree.len() {
            return Err(LabError::InvalidIndex(format!("vertex pair ({x}, {y}) outside tree")));
        }
    }
    let mut a = complexify(&h);
    for i in 0..n {
        a[(i, i)] -= energy.z();
    }
    let lu = a.lu();
    let mut columns: Vec<usize> = pairs.iter().map(|&(_, y)| y).collect();
    columns.sort_unstable();
    columns.dedup();
    let mut solved = std::collections::HashMap::new();
    for &y in &columns {
        let mut rhs = CMat::zeros(n, m);
        for k in 0..m {
            rhs[(y * m + k, k)] = num_complex::Complex64::new(1.0, 0.0);
        }
        let sol = lu
            .solve(&rhs)
            .ok_or_else(|| LabError::NumericalBreakdown("singular H - z".into()))?;
        solved.insert(y, sol);
    }
    Ok(pairs
        .iter()
        .map(|&(x, y)| solved[&y].view((x * m, 0), (m, m)).into_owned())
        .collect())
}
