//! Half-space Green's matrix samplers and random paths through the ball.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::greens::{halfspace_green_fixedpoint, halfspace_green_finite, shifted, ComplexEnergy, Potential};
use crate::linalg::{imag, invert, max_abs, max_abs_diff, re, CMat, RMat};
use crate::model::ModelParams;
use crate::rng::RngStream;

pub const DOMAIN_POOL: u64 = 1;
pub const DOMAIN_SAMPLE: u64 = 2;

pub const DEFAULT_POOL_SIZE: usize = 1 << 16;
const POOL_CHUNK: usize = 1024;
/// Depth ceiling of the doubling stability check.
pub const DEPTH_CAP: usize = 1 << 20;
pub const DEPTH_STABILITY_TOL: f64 = 1e-10;
/// Largest K^depth accepted by the exact subtree sampler.
pub const EXACT_LEAF_CAP: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    /// Deterministic when λV vanishes, population pool otherwise.
    #[default]
    Auto,
    Deterministic,
    /// A fresh random subtree of the full truncation depth for every draw.
    Exact,
    /// Population dynamics: a pool of half-space matrices regenerated
    /// generation by generation from K random parents each.
    Pool,
}

/// ⌈ln(1/η)/ln K⌉ + 10.
pub fn default_depth(k: usize, eta: f64) -> usize {
    let levels = ((1.0 / eta).ln() / (k as f64).ln()).ceil();
    levels.max(0.0) as usize + 10
}

/// Doubles the default depth until the λ = 0 half-space recursion changes by
/// less than [`DEPTH_STABILITY_TOL`] relative between depth d and 2d.
pub fn resolve_depth(params: &ModelParams, energy: ComplexEnergy) -> Result<usize> {
    energy.require_positive()?;
    let free = params.free();
    let base = shifted(&free, None, energy.z());
    let quarter_k = re(0.25 * params.k as f64);
    let step = |g: &CMat| invert(&(&base - g * quarter_k));
    let mut depth = default_depth(params.k, energy.eta);
    let mut g = invert(&base)?;
    for _ in 0..depth {
        g = step(&g)?;
    }
    while depth < DEPTH_CAP {
        let mut h = g.clone();
        for _ in 0..depth {
            h = step(&h)?;
        }
        if max_abs_diff(&g, &h) <= DEPTH_STABILITY_TOL * max_abs(&h) {
            return Ok(depth);
        }
        g = h;
        depth *= 2;
    }
    Err(LabError::NumericalBreakdown(format!(
        "half-space recursion not stable by depth {DEPTH_CAP} at eta = {}",
        energy.eta
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    #[serde(default)]
    pub kind: SamplerKind,
    /// Explicit truncation depth; resolved automatically when absent.
    #[serde(default)]
    pub depth: Option<usize>,
    #[serde(default = "default_pool_size")]
    pub pool_size: usize,
}

fn default_pool_size() -> usize {
    DEFAULT_POOL_SIZE
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { kind: SamplerKind::Auto, depth: None, pool_size: DEFAULT_POOL_SIZE }
    }
}

/// Source of i.i.d. (or, for the pool, approximately i.i.d.) half-space
/// Green's matrices G^{(y|x)} at a fixed energy.
#[derive(Clone, Debug)]
pub enum HalfSpaceSampler {
    Deterministic(CMat),
    Exact { depth: usize },
    Pool(Vec<CMat>),
}

#[derive(Clone, Debug)]
pub struct PreparedSampler {
    pub sampler: HalfSpaceSampler,
    /// `None` when the deterministic sampler uses the infinite-tree fixed point.
    pub depth: Option<usize>,
}

impl PreparedSampler {
    pub fn new(params: &ModelParams, energy: ComplexEnergy, config: &SamplerConfig, stream: &RngStream) -> Result<Self> {
        energy.require_positive()?;
        let kind = match config.kind {
            SamplerKind::Auto if params.is_deterministic() => SamplerKind::Deterministic,
            SamplerKind::Auto => SamplerKind::Pool,
            k => k,
        };
        match kind {
            SamplerKind::Deterministic => {
                if !params.is_deterministic() {
                    return Err(LabError::Config("deterministic sampler requires lambda = 0 or zero disorder".into()));
                }
                let free = params.free();
                let (g, depth) = match config.depth {
                    Some(d) => (halfspace_green_finite(&free, &Potential::Zero, energy, d)?, Some(d)),
                    None => (halfspace_green_fixedpoint(&free, energy)?, None),
                };
                Ok(PreparedSampler { sampler: HalfSpaceSampler::Deterministic(g), depth })
            }
            SamplerKind::Exact => {
                let depth = config.depth.unwrap_or_else(|| default_depth(params.k, energy.eta));
                let leaves = (params.k as u128).checked_pow(depth as u32).unwrap_or(u128::MAX);
                if leaves > EXACT_LEAF_CAP {
                    return Err(LabError::TreeTooLarge { size: leaves, cap: EXACT_LEAF_CAP as usize });
                }
                Ok(PreparedSampler { sampler: HalfSpaceSampler::Exact { depth }, depth: Some(depth) })
            }
            SamplerKind::Pool => {
                if config.pool_size == 0 {
                    return Err(LabError::Config("pool_size must be positive".into()));
                }
                let depth = match config.depth {
                    Some(d) => d,
                    None => resolve_depth(params, energy)?,
                };
                let pool = build_pool(params, energy, depth, config.pool_size, &stream.child(DOMAIN_POOL, 0))?;
                Ok(PreparedSampler { sampler: HalfSpaceSampler::Pool(pool), depth: Some(depth) })
            }
            SamplerKind::Auto => unreachable!(),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self.sampler, HalfSpaceSampler::Deterministic(_))
    }

    pub fn draw(&self, params: &ModelParams, energy: ComplexEnergy, rng: &mut ChaCha8Rng) -> Result<CMat> {
        match &self.sampler {
            HalfSpaceSampler::Deterministic(g) => Ok(g.clone()),
            HalfSpaceSampler::Pool(pool) => Ok(pool[rng.random_range(0..pool.len())].clone()),
            HalfSpaceSampler::Exact { depth } => exact_subtree(params, energy, *depth, rng),
        }
    }
}

fn onsite(params: &ModelParams, energy: ComplexEnergy, rng: &mut ChaCha8Rng) -> CMat {
    if params.is_deterministic() {
        shifted(params, None, energy.z())
    } else {
        let v = params.disorder.draw(params.m, rng);
        shifted(params, Some(&v), energy.z())
    }
}

fn exact_subtree(params: &ModelParams, energy: ComplexEnergy, height: usize, rng: &mut ChaCha8Rng) -> Result<CMat> {
    let sh = onsite(params, energy, rng);
    if height == 0 {
        return invert(&sh);
    }
    let mut sum = CMat::zeros(params.m, params.m);
    for _ in 0..params.k {
        sum += exact_subtree(params, energy, height - 1, rng)?;
    }
    invert(&(sh - sum * re(0.25)))
}

fn build_pool(params: &ModelParams, energy: ComplexEnergy, generations: usize, size: usize, stream: &RngStream) -> Result<Vec<CMat>> {
    let chunks = size.div_ceil(POOL_CHUNK);
    let generation = |gen: usize, previous: Option<&Vec<CMat>>| -> Result<Vec<CMat>> {
        let parts: Vec<Result<Vec<CMat>>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = stream.child(gen as u64, c as u64).rng();
                let len = POOL_CHUNK.min(size - c * POOL_CHUNK);
                let mut out = Vec::with_capacity(len);
                for _ in 0..len {
                    let sh = onsite(params, energy, &mut rng);
                    let g = match previous {
                        None => invert(&sh)?,
                        Some(prev) => {
                            let mut sum = CMat::zeros(params.m, params.m);
                            for _ in 0..params.k {
                                sum += &prev[rng.random_range(0..prev.len())];
                            }
                            invert(&(sh - sum * re(0.25)))?
                        }
                    };
                    out.push(g);
                }
                Ok(out)
            })
            .collect();
        let mut pool = Vec::with_capacity(size);
        for p in parts {
            pool.extend(p?);
        }
        Ok(pool)
    };
    let mut pool = generation(0, None)?;
    for gen in 1..=generations {
        pool = generation(gen, Some(&pool))?;
    }
    Ok(pool)
}

/// One disorder sample of the Green's function along the path x₀ = 0, …, x_R.
///
/// The path vertices carry explicit potentials; every other branch is a draw
/// from the half-space sampler. The root has K forward children (x₁ among
/// them) and one extra neighbour 0′.
#[derive(Clone, Debug)]
pub struct PathSample {
    /// K^{r/2} G(0,x_r), so that Tr|·|² is the shell-weighted moment K^r Tr|G|².
    pub scaled: Vec<CMat>,
    /// Mean of Im G^{(y|x_r)} over the K forward children y of x_r.
    pub forward_im: Vec<RMat>,
    /// Im G^{(0′|0)}.
    pub extra_im: RMat,
}

pub fn sample_path(
    params: &ModelParams,
    energy: ComplexEnergy,
    sampler: &PreparedSampler,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PathSample> {
    let m = params.m;
    let k = params.k;
    let onsites: Vec<CMat> = (0..=len).map(|_| onsite(params, energy, rng)).collect();
    let mut branches: Vec<CMat> = vec![CMat::zeros(m, m); len + 1];
    let mut forward_im = vec![RMat::zeros(m, m); len + 1];
    let inv_k = 1.0 / k as f64;
    let mut next: Option<CMat> = None;
    for j in (0..=len).rev() {
        let mut sum = CMat::zeros(m, m);
        let mut im = RMat::zeros(m, m);
        let fresh = if next.is_some() { k - 1 } else { k };
        for _ in 0..fresh {
            let g = sampler.draw(params, energy, rng)?;
            im += imag(&g);
            sum += g;
        }
        if let Some(n) = &next {
            im += imag(n);
            sum += n;
        }
        forward_im[j] = im * inv_k;
        if j == 0 {
            let extra = sampler.draw(params, energy, rng)?;
            let extra_im = imag(&extra);
            let g00 = invert(&(&onsites[0] - (sum + extra) * re(0.25)))?;
            let factor = re(-0.5 * (k as f64).sqrt());
            let mut scaled = Vec::with_capacity(len + 1);
            scaled.push(g00);
            for r in 1..=len {
                let g = &scaled[r - 1] * &branches[r] * factor;
                scaled.push(g);
            }
            return Ok(PathSample { scaled, forward_im, extra_im });
        }
        let f = invert(&(&onsites[j] - sum * re(0.25)))?;
        branches[j] = f.clone();
        next = Some(f);
    }
    unreachable!()
}

/// Tr(P G†G), Tr(G†G) and friends are real; the helpers below return them as such.
pub fn tr_abs2(g: &CMat) -> f64 {
    g.iter().map(|x| x.norm_sqr()).sum()
}

/// Re Tr(P G† G) for real symmetric P.
pub fn tr_weighted(p: &RMat, g: &CMat) -> f64 {
    let gg = g.adjoint() * g;
    let mut t = 0.0;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            t += p[(i, j)] * gg[(j, i)].re;
        }
    }
    t
}

/// Re Tr(P G† Q G) for real symmetric P, Q.
pub fn tr_sandwich(p: &RMat, q: &RMat, g: &CMat) -> f64 {
    let inner = g.adjoint() * crate::linalg::complexify(q) * g;
    let mut t = 0.0;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            t += p[(i, j)] * inner[(j, i)].re;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_params, DisorderSpec};

    #[test]
    fn default_depth_formula() {
        assert_eq!(default_depth(2, 0.25), 12);
        assert_eq!(default_depth(3, 1.0), 10);
        assert_eq!(default_depth(2, 4.0), 10);
    }

    #[test]
    fn deterministic_path_is_geometric() {
        let p = validate_params(2, 1, RMat::zeros(1, 1), 0.0, DisorderSpec::Zero).unwrap();
        let e = ComplexEnergy::new(0.0, 0.1);
        let s = PreparedSampler::new(&p, e, &SamplerConfig::default(), &RngStream::new(0)).unwrap();
        assert!(s.is_deterministic());
        let path = sample_path(&p, e, &s, 4, &mut RngStream::new(1).rng()).unwrap();
        let g = halfspace_green_fixedpoint(&p, e).unwrap()[(0, 0)];
        let g00 = path.scaled[0][(0, 0)];
        assert!((g00 - 1.0 / (-e.z() - 0.75 * g)).norm() < 1e-12);
        for r in 1..=4 {
            let expected = g00 * (-0.5 * 2f64.sqrt() * g).powi(r as i32);
            assert!((path.scaled[r][(0, 0)] - expected).norm() < 100.0 * crate::greens::FIXED_POINT_TOL);
        }
    }

    #[test]
    fn pool_is_reproducible() {
        let p = validate_params(2, 1, RMat::zeros(1, 1), 0.3, DisorderSpec::DiagonalGaussianIid { sigma: 1.0 }).unwrap();
        let e = ComplexEnergy::new(0.0, 0.5);
        let cfg = SamplerConfig { kind: SamplerKind::Pool, depth: Some(8), pool_size: 3000 };
        let a = PreparedSampler::new(&p, e, &cfg, &RngStream::new(5)).unwrap();
        let b = PreparedSampler::new(&p, e, &cfg, &RngStream::new(5)).unwrap();
        match (&a.sampler, &b.sampler) {
            (HalfSpaceSampler::Pool(x), HalfSpaceSampler::Pool(y)) => assert_eq!(x, y),
            _ => panic!("expected pools"),
        }
    }
}
