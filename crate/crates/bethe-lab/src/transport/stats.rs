//! Mean/variance accumulation for disorder averages.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Samples per work unit. Fixing the unit size (rather than deriving it from
/// the thread count) keeps the merge order, and therefore every bit of the
/// result, independent of the worker pool.
pub const CHUNK: usize = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Welford {
    pub n: u64,
    pub mean: f64,
    m2: f64,
}

impl Welford {
    /// `n` copies of the same value.
    pub fn constant(n: u64, value: f64) -> Self {
        Welford { n, mean: value, m2: 0.0 }
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Welford) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            f64::NAN
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        }
    }

    pub fn stderr(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
}

/// Runs `f` on every sample index in `0..n` and accumulates the returned
/// vectors componentwise. Chunks run in parallel on the current rayon pool and
/// are merged in index order.
pub fn parallel_moments<E, F>(n: usize, dims: usize, f: F) -> Result<Vec<Welford>, E>
where
    E: Send,
    F: Fn(usize) -> Result<Vec<f64>, E> + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<Result<Vec<Welford>, E>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![Welford::default(); dims];
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                let values = f(i)?;
                for (a, v) in acc.iter_mut().zip(values) {
                    a.push(v);
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = vec![Welford::default(); dims];
    for p in partial {
        for (t, w) in total.iter_mut().zip(p?) {
            t.merge(&w);
        }
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct EstimatorMeta {
    pub r: usize,
    #[serde(rename = "E")]
    pub e: f64,
    pub eta: f64,
    /// Truncation depth of the half-space samples; `None` for the exact
    /// infinite-tree fixed point.
    pub depth: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct EstimatorResult {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub metadata: EstimatorMeta,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 113) as f64 * 0.37 - 3.0).collect();
        let mut seq = Welford::default();
        xs.iter().for_each(|&x| seq.push(x));
        let par = parallel_moments::<(), _>(xs.len(), 1, |i| Ok(vec![xs[i]])).unwrap();
        assert_eq!(par[0].n, 1000);
        assert!((par[0].mean - seq.mean).abs() < 1e-12);
        assert!((par[0].variance() - seq.variance()).abs() < 1e-10);
        let mean = xs.iter().sum::<f64>() / 1000.0;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 999.0;
        assert!((seq.variance() - var).abs() < 1e-10);
    }

    #[test]
    fn constant_samples_have_zero_spread() {
        let mut w = Welford::default();
        for _ in 0..10 {
            w.push(0.8888);
        }
        assert_eq!(w.stderr(), 0.0);
        assert_eq!(w.mean, 0.8888);
    }
}
