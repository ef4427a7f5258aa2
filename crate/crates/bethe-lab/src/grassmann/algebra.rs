use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex64;

use super::coeff::Coeff;
use crate::error::{LabError, Result};

/// One odd generator ψ̄_{k,ℓ} (`bar = true`) or ψ_{k,ℓ} of the supermatrix `tag`.
/// Indices `k` and `l` are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorId {
    pub tag: usize,
    pub bar: bool,
    pub k: usize,
    pub l: usize,
}

impl GeneratorId {
    pub fn psi(tag: usize, k: usize, l: usize) -> Self {
        GeneratorId { tag, bar: false, k, l }
    }

    pub fn psibar(tag: usize, k: usize, l: usize) -> Self {
        GeneratorId { tag, bar: true, k, l }
    }

    fn key(&self) -> (usize, usize, usize, bool) {
        (self.tag, self.l, self.k, !self.bar)
    }
}

impl Ord for GeneratorId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for GeneratorId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub name: String,
    pub m: usize,
    pub n: usize,
    offset: u32,
}

/// The set of supermatrices whose generators may appear in a computation.
///
/// Generators are laid out on the bits of a `u64`, ascending in the canonical
/// order, so a monomial is a bitmask and its canonical form is read off bit by bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    blocks: Vec<Block>,
}

impl Universe {
    pub fn new(blocks: &[(&str, usize, usize)]) -> Result<Self> {
        let mut offset = 0u32;
        let mut out = Vec::with_capacity(blocks.len());
        for &(name, m, n) in blocks {
            if m == 0 || n == 0 {
                return Err(LabError::InvalidIndex(format!("supermatrix {name} needs m, n >= 1")));
            }
            out.push(Block { name: name.to_string(), m, n, offset });
            offset += (2 * m * n) as u32;
            if offset > 64 {
                return Err(LabError::InvalidIndex("more than 64 Grassmann generators".into()));
            }
        }
        Ok(Universe { blocks: out })
    }

    /// Universe of a single m×2n supermatrix Φ.
    pub fn single(m: usize, n: usize) -> Result<Self> {
        Universe::new(&[("Φ", m, n)])
    }

    /// Universe of two independent supermatrices Φ (tag 0) and Φ′ (tag 1).
    pub fn pair(m: usize, n: usize) -> Result<Self> {
        Universe::new(&[("Φ", m, n), ("Φ′", m, n)])
    }

    pub fn disjoint_union(&self, other: &Universe) -> Result<Universe> {
        let specs: Vec<(&str, usize, usize)> = self
            .blocks
            .iter()
            .chain(other.blocks.iter())
            .map(|b| (b.name.as_str(), b.m, b.n))
            .collect();
        Universe::new(&specs)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, tag: usize) -> Result<&Block> {
        self.blocks.get(tag).ok_or_else(|| LabError::InvalidIndex(format!("unknown supermatrix tag {tag}")))
    }

    pub fn generator_count(&self) -> usize {
        self.blocks.iter().map(|b| 2 * b.m * b.n).sum()
    }

    pub fn bit(&self, g: GeneratorId) -> Result<u32> {
        let b = self.block(g.tag)?;
        if g.k == 0 || g.k > b.m || g.l == 0 || g.l > b.n {
            return Err(LabError::InvalidIndex(format!(
                "generator (k={}, l={}) outside {}x{} block {}",
                g.k, g.l, b.m, b.n, b.name
            )));
        }
        Ok(b.offset + (((g.l - 1) * b.m + (g.k - 1)) * 2) as u32 + if g.bar { 0 } else { 1 })
    }

    pub fn generator_of(&self, bit: u32) -> Option<GeneratorId> {
        self.blocks.iter().enumerate().find_map(|(tag, b)| {
            let local = bit.checked_sub(b.offset)? as usize;
            if local >= 2 * b.m * b.n {
                return None;
            }
            let pair = local / 2;
            Some(GeneratorId { tag, bar: local % 2 == 0, k: pair % b.m + 1, l: pair / b.m + 1 })
        })
    }

    pub fn gen<C: Coeff>(&self, g: GeneratorId) -> Result<GElem<C>> {
        Ok(GElem::monomial(1u64 << self.bit(g)?, C::one()))
    }

    pub fn psi<C: Coeff>(&self, tag: usize, k: usize, l: usize) -> Result<GElem<C>> {
        self.gen(GeneratorId::psi(tag, k, l))
    }

    pub fn psibar<C: Coeff>(&self, tag: usize, k: usize, l: usize) -> Result<GElem<C>> {
        self.gen(GeneratorId::psibar(tag, k, l))
    }

    /// ∫ F dψ̄_{k,ℓ} dψ_{k,ℓ} = −F₃ for F = F₀ + F₁ψ̄ + F₂ψ + F₃ψ̄ψ.
    pub fn berezin<C: Coeff>(&self, e: &GElem<C>, tag: usize, k: usize, l: usize) -> Result<GElem<C>> {
        let bar = self.bit(GeneratorId::psibar(tag, k, l))?;
        let pair = (1u64 << bar) | (1u64 << (bar + 1));
        // ψ̄ψ is even and its two generators are adjacent, so no sign arises from
        // pulling it to the right.
        let mut out = GElem::zero();
        for (&mask, c) in &e.terms {
            if mask & pair == pair {
                out.accumulate(mask & !pair, c.neg());
            }
        }
        Ok(out)
    }

    /// Integration against DΨ = Π_{k,ℓ} dψ̄_{k,ℓ} dψ_{k,ℓ} over all generators of `tag`.
    pub fn berezin_all<C: Coeff>(&self, e: &GElem<C>, tag: usize) -> Result<GElem<C>> {
        let b = self.block(tag)?.clone();
        let mut out = e.clone();
        for k in 1..=b.m {
            for l in 1..=b.n {
                out = self.berezin(&out, tag, k, l)?;
            }
        }
        Ok(out)
    }
}

/// Element of the exterior algebra: a map from canonical monomials (bitmasks)
/// to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GElem<C> {
    terms: BTreeMap<u64, C>,
}

/// Sign of reordering the concatenation of two canonical monomials.
pub fn merge_sign(a: u64, b: u64) -> i32 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += if j == 63 { 0 } else { (a >> (j + 1)).count_ones() };
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl<C: Coeff> GElem<C> {
    pub fn zero() -> Self {
        GElem { terms: BTreeMap::new() }
    }

    pub fn scalar(c: C) -> Self {
        GElem::monomial(0, c)
    }

    pub fn one() -> Self {
        GElem::scalar(C::one())
    }

    pub fn monomial(mask: u64, c: C) -> Self {
        let mut e = GElem::zero();
        e.accumulate(mask, c);
        e
    }

    pub fn terms(&self) -> &BTreeMap<u64, C> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: u64) -> C {
        self.terms.get(&mask).cloned().unwrap_or_else(C::zero)
    }

    pub fn body(&self) -> C {
        self.coefficient(0)
    }

    fn accumulate(&mut self, mask: u64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&mask);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&mask, c) in &other.terms {
            out.accumulate(mask, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&C::one().neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = GElem::zero();
        for (&mask, v) in &self.terms {
            out.accumulate(mask, v.mul(c));
        }
        out
    }

    /// Product in canonical form.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = GElem::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let v = ca.mul(cb);
                let v = if merge_sign(a, b) < 0 { v.neg() } else { v };
                out.accumulate(a | b, v);
            }
        }
        out
    }

    /// exp(N) = Σ N^k/k! for an element without scalar part.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.body().is_zero() {
            return Err(LabError::NoClosedForm("exponential of an element with nonzero scalar part".into()));
        }
        let mut out = GElem::one();
        let mut power = GElem::one();
        let mut k = 1i64;
        loop {
            power = power.mul(self).scale(&C::ratio(1, k));
            if power.is_empty() {
                return Ok(out);
            }
            out = out.add(&power);
            k += 1;
        }
    }

    pub fn to_complex(&self) -> GElem<Complex64> {
        let mut out = GElem::zero();
        for (&mask, c) in &self.terms {
            out.accumulate(mask, c.to_complex());
        }
        out
    }

    pub fn map<F: Fn(&C) -> C>(&self, f: F) -> Self {
        let mut out = GElem::zero();
        for (&mask, c) in &self.terms {
            out.accumulate(mask, f(c));
        }
        out
    }
}

impl GElem<Complex64> {
    /// Largest coefficient-wise deviation between two float elements.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
