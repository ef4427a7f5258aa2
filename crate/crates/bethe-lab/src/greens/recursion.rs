//! Leaf-to-root Schur-complement recursion. With hopping ½ every removed
//! neighbour contributes ¼ G^{(y|x)} to the inverse at x.

use super::{shifted, ComplexEnergy, Potential};
use crate::error::{LabError, Result};
use crate::linalg::{invert, re, CMat};
use crate::model::{build_tree, ModelParams, TreeGeometry, TreeKind};

/// Subtree Green's matrices for every vertex: the root block of H restricted to
/// the descendants of `v` (including `v`).
pub fn subtree_greens(params: &ModelParams, tree: &TreeGeometry, potential: &Potential, energy: ComplexEnergy) -> Result<Vec<CMat>> {
    energy.require_positive()?;
    potential.check_len(tree.len())?;
    let z = energy.z();
    let m = params.m;
    let n = tree.len();
    let mut sums = vec![CMat::zeros(m, m); n];
    let mut out = vec![CMat::zeros(m, m); n];
    for v in (0..n).rev() {
        let g = invert(&(shifted(params, potential.at(v), z) - &sums[v] * re(0.25)))?;
        if let Some(p) = tree.parent(v) {
            sums[p] += &g;
        }
        out[v] = g;
    }
    Ok(out)
}

/// Half-space Green's matrices of the free recursion by height: entry h is the
/// root block of a λ = 0 half-space of height h.
pub fn level_greens(params: &ModelParams, energy: ComplexEnergy, depth: usize) -> Result<Vec<CMat>> {
    energy.require_positive()?;
    let base = shifted(params, None, energy.z());
    let quarter_k = 0.25 * params.k as f64;
    let mut out = Vec::with_capacity(depth + 1);
    out.push(invert(&base)?);
    for h in 1..=depth {
        let g = invert(&(&base - &out[h - 1] * re(quarter_k)))?;
        out.push(g);
    }
    Ok(out)
}

fn last_level(params: &ModelParams, energy: ComplexEnergy, depth: usize) -> Result<CMat> {
    energy.require_positive()?;
    let base = shifted(params, None, energy.z());
    let quarter_k = 0.25 * params.k as f64;
    let mut g = invert(&base)?;
    for _ in 0..depth {
        g = invert(&(&base - &g * re(quarter_k)))?;
    }
    Ok(g)
}

/// Root block of H restricted to HalfSpace(depth).
pub fn halfspace_green_finite(params: &ModelParams, potential: &Potential, energy: ComplexEnergy, depth: usize) -> Result<CMat> {
    match potential {
        Potential::Zero => last_level(params, energy, depth),
        Potential::PerVertex(_) => {
            let tree = build_tree(params.k, TreeKind::HalfSpace(depth))?;
            Ok(subtree_greens(params, &tree, potential, energy)?.swap_remove(0))
        }
    }
}

/// G(0,0;z) on Ball(depth), assembled from the K+1 branches at the root.
pub fn full_green_diag(params: &ModelParams, potential: &Potential, energy: ComplexEnergy, depth: usize) -> Result<CMat> {
    match potential {
        Potential::Zero => {
            let base = shifted(params, None, energy.z());
            if depth == 0 {
                energy.require_positive()?;
                return invert(&base);
            }
            let branch = last_level(params, energy, depth - 1)?;
            invert(&(base - branch * re(0.25 * (params.k + 1) as f64)))
        }
        Potential::PerVertex(_) => {
            let tree = build_tree(params.k, TreeKind::Ball(depth))?;
            Ok(subtree_greens(params, &tree, potential, energy)?.swap_remove(0))
        }
    }
}

/// Data along a path x₀, …, x_r: the shifted on-site blocks A + λV − z and, at
/// every x_j, the sum of the half-space matrices of the neighbours that are
/// neither on the path nor at x_{j−1}. For j < r the next path vertex is
/// excluded; at x_r all remaining neighbours are included.
#[derive(Clone, Debug)]
pub struct PathInput {
    pub shifted: Vec<CMat>,
    pub side_sum: Vec<CMat>,
}

/// G(0,x_r) = (−½)^r G^{(x₀|x₁)} ⋯ G^{(x_{r−1}|x_r)} G(x_r,x_r), where each
/// G^{(x_j|x_{j+1})} is rooted at x_j with the branch through x_{j+1} removed.
pub fn path_product(input: &PathInput) -> Result<CMat> {
    let r = input.shifted.len() - 1;
    let mut product: Option<CMat> = None;
    let mut previous: Option<CMat> = None;
    for j in 0..r {
        let mut s = input.side_sum[j].clone();
        if let Some(p) = &previous {
            s += p;
        }
        let b = invert(&(&input.shifted[j] - s * re(0.25)))?;
        product = Some(match product {
            None => b.clone(),
            Some(acc) => acc * &b,
        });
        previous = Some(b);
    }
    let mut s = input.side_sum[r].clone();
    if let Some(p) = &previous {
        s += p;
    }
    let g_rr = invert(&(&input.shifted[r] - s * re(0.25)))?;
    let scale = (-0.5f64).powi(r as i32);
    Ok(match product {
        None => g_rr,
        Some(acc) => acc * g_rr * re(scale),
    })
}

/// G(0,x_r;z) on Ball(depth) along the first-child path.
pub fn offdiag_green_path(params: &ModelParams, potential: &Potential, energy: ComplexEnergy, r: usize, depth: usize) -> Result<CMat> {
    energy.require_positive()?;
    if r > depth {
        return Err(LabError::InvalidIndex(format!("path length {r} exceeds depth {depth}")));
    }
    let z = energy.z();
    let k = params.k as f64;
    let input = match potential {
        Potential::Zero => {
            let levels = if depth > 0 { level_greens(params, energy, depth - 1)? } else { Vec::new() };
            let m = params.m;
            let base = shifted(params, None, z);
            let mut side_sum = Vec::with_capacity(r + 1);
            for j in 0..=r {
                let below = depth - j;
                let count = if below == 0 {
                    0.0
                } else if j == 0 {
                    if r == 0 { k + 1.0 } else { k }
                } else if j < r {
                    k - 1.0
                } else {
                    k
                };
                side_sum.push(if count == 0.0 { CMat::zeros(m, m) } else { &levels[below - 1] * re(count) });
            }
            PathInput { shifted: vec![base; r + 1], side_sum }
        }
        Potential::PerVertex(_) => {
            let tree = build_tree(params.k, TreeKind::Ball(depth))?;
            let sub = subtree_greens(params, &tree, potential, energy)?;
            let path = tree.canonical_path(r)?;
            let mut shifted_blocks = Vec::with_capacity(r + 1);
            let mut side_sum = Vec::with_capacity(r + 1);
            for (j, &x) in path.iter().enumerate() {
                shifted_blocks.push(shifted(params, potential.at(x), z));
                let next = path.get(j + 1).copied();
                let mut s = CMat::zeros(params.m, params.m);
                for c in tree.children(x) {
                    if Some(c) != next {
                        s += &sub[c];
                    }
                }
                side_sum.push(s);
            }
            PathInput { shifted: shifted_blocks, side_sum }
        }
    };
    path_product(&input)
}
