use serde::Serialize;

use crate::error::{LabError, Result};

/// Subset of 𝓘 = {1..m} as a bitmask (bit k−1 ↔ k).
pub type Subset = u32;

pub fn card(s: Subset) -> usize {
    s.count_ones() as usize
}

/// Elements in increasing order, 1-based.
pub fn elements(s: Subset) -> Vec<usize> {
    (0..32).filter(|b| s >> b & 1 == 1).map(|b| b as usize + 1).collect()
}

pub fn subset(elems: &[usize]) -> Subset {
    elems.iter().fold(0, |s, &k| s | 1 << (k - 1))
}

pub fn full_set(m: usize) -> Subset {
    if m >= 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

/// Position (1-based) of `k` among the elements of `s`, if present.
pub fn rank_in(s: Subset, k: usize) -> Option<usize> {
    if s >> (k - 1) & 1 == 0 {
        return None;
    }
    Some(card(s & ((1u32 << (k - 1)) - 1)) + 1)
}

/// |a| = Σ_ℓ |a_ℓ|.
pub fn tuple_card(a: &[Subset]) -> usize {
    a.iter().map(|&s| card(s)).sum()
}

/// ⟦j⟧ = ({j}, ∅, …, ∅).
pub fn unit_tuple(j: usize, n: usize) -> Vec<Subset> {
    let mut t = vec![0; n];
    t[0] = subset(&[j]);
    t
}

/// A pair (ā, a) of n-tuples of subsets of 𝓘.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IndexTuplePair {
    pub m: usize,
    pub bar: Vec<Subset>,
    pub unbar: Vec<Subset>,
}

impl IndexTuplePair {
    pub fn new(m: usize, bar: Vec<Subset>, unbar: Vec<Subset>) -> Result<Self> {
        if bar.len() != unbar.len() || bar.is_empty() {
            return Err(LabError::InvalidIndex("ā and a must be nonempty tuples of equal length".into()));
        }
        let all = full_set(m);
        if bar.iter().chain(unbar.iter()).any(|&s| s & !all != 0) {
            return Err(LabError::InvalidIndex(format!("subset outside {{1..{m}}}")));
        }
        Ok(IndexTuplePair { m, bar, unbar })
    }

    pub fn n(&self) -> usize {
        self.bar.len()
    }

    pub fn empty(m: usize, n: usize) -> Self {
        IndexTuplePair { m, bar: vec![0; n], unbar: vec![0; n] }
    }

    /// (𝐈, 𝐈).
    pub fn full(m: usize, n: usize) -> Self {
        IndexTuplePair { m, bar: vec![full_set(m); n], unbar: vec![full_set(m); n] }
    }

    /// k with (ā, a) ∈ 𝒫ⁿ_k, if any.
    pub fn class(&self) -> Option<i32> {
        let same = self.bar.iter().zip(&self.unbar).skip(1).all(|(&b, &a)| card(b) == card(a));
        same.then(|| card(self.bar[0]) as i32 - card(self.unbar[0]) as i32)
    }

    pub fn in_class(&self, k: i32) -> bool {
        self.class() == Some(k)
    }

    /// Membership in 𝒫ⁿ.
    pub fn is_balanced(&self) -> bool {
        self.in_class(0)
    }

    pub fn complement(&self) -> Self {
        let all = full_set(self.m);
        IndexTuplePair {
            m: self.m,
            bar: self.bar.iter().map(|s| all & !s).collect(),
            unbar: self.unbar.iter().map(|s| all & !s).collect(),
        }
    }

    /// (a, ā).
    pub fn swapped(&self) -> Self {
        IndexTuplePair { m: self.m, bar: self.unbar.clone(), unbar: self.bar.clone() }
    }

    pub fn addable(&self, other: &Self) -> bool {
        self.n() == other.n()
            && self.bar.iter().zip(&other.bar).all(|(a, b)| a & b == 0)
            && self.unbar.iter().zip(&other.unbar).all(|(a, b)| a & b == 0)
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if !self.addable(other) {
            return Err(LabError::NotAddable);
        }
        Ok(IndexTuplePair {
            m: self.m,
            bar: self.bar.iter().zip(&other.bar).map(|(a, b)| a | b).collect(),
            unbar: self.unbar.iter().zip(&other.unbar).map(|(a, b)| a | b).collect(),
        })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        let contained = self.bar.iter().zip(&other.bar).all(|(a, b)| b & !a == 0)
            && self.unbar.iter().zip(&other.unbar).all(|(a, b)| b & !a == 0);
        if self.n() != other.n() || !contained {
            return Err(LabError::NotAddable);
        }
        Ok(IndexTuplePair {
            m: self.m,
            bar: self.bar.iter().zip(&other.bar).map(|(a, b)| a & !b).collect(),
            unbar: self.unbar.iter().zip(&other.unbar).map(|(a, b)| a & !b).collect(),
        })
    }

    pub fn total_card(&self) -> usize {
        tuple_card(&self.bar) + tuple_card(&self.unbar)
    }
}

/// All n-tuples of subsets of {1..m}.
pub fn all_tuples(m: usize, n: usize) -> Vec<Vec<Subset>> {
    let per = 1usize << m;
    let count = per.pow(n as u32);
    (0..count)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let s = (idx % per) as Subset;
                    idx /= per;
                    s
                })
                .collect()
        })
        .collect()
}

/// All pairs in 𝔓(𝓘)ⁿ × 𝔓(𝓘)ⁿ.
pub fn all_pairs(m: usize, n: usize) -> Vec<IndexTuplePair> {
    let tuples = all_tuples(m, n);
    let mut out = Vec::with_capacity(tuples.len() * tuples.len());
    for bar in &tuples {
        for unbar in &tuples {
            out.push(IndexTuplePair { m, bar: bar.clone(), unbar: unbar.clone() });
        }
    }
    out
}

/// 𝒫ⁿ_k.
pub fn class_pairs(m: usize, n: usize, k: i32) -> Vec<IndexTuplePair> {
    all_pairs(m, n).into_iter().filter(|p| p.in_class(k)).collect()
}
