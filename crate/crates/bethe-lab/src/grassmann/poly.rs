use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::index::{card, elements, full_set, subset, Subset};
use super::report::IdentityReport;
use crate::error::{LabError, Result};

/// Integer polynomial in the commuting indeterminates x_{jk} = x_{kj}, which
/// stand for the derivatives ∂̃_{jk}.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    m: usize,
    terms: BTreeMap<Vec<u8>, i64>,
}

fn var_index(m: usize, j: usize, k: usize) -> usize {
    let (a, b) = if j <= k { (j - 1, k - 1) } else { (k - 1, j - 1) };
    a * m - a * (a + 1) / 2 + b
}

impl Poly {
    fn nvars(m: usize) -> usize {
        m * (m + 1) / 2
    }

    pub fn constant(m: usize, c: i64) -> Self {
        let mut p = Poly { m, terms: BTreeMap::new() };
        if c != 0 {
            p.terms.insert(vec![0; Self::nvars(m)], c);
        }
        p
    }

    pub fn var(m: usize, j: usize, k: usize) -> Self {
        let mut e = vec![0; Self::nvars(m)];
        e[var_index(m, j, k)] = 1;
        Poly { m, terms: BTreeMap::from([(e, 1)]) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn accumulate(&mut self, e: Vec<u8>, c: i64) {
        let v = self.terms.entry(e.clone()).or_insert(0);
        *v += c;
        if *v == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &o.terms {
            out.accumulate(e.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut out = Poly { m: self.m, terms: BTreeMap::new() };
        for (e, &c) in &self.terms {
            out.accumulate(e.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Poly { m: self.m, terms: BTreeMap::new() };
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &o.terms {
                let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.accumulate(e, ca * cb);
            }
        }
        out
    }
}

/// D_{ā,a}: determinant of the symbolic submatrix with rows ā and columns a; 1 for (∅,∅).
pub fn minor(m: usize, rows: Subset, cols: Subset) -> Result<Poly> {
    if card(rows) != card(cols) {
        return Err(LabError::InvalidIndex("minor needs |ā| = |a|".into()));
    }
    Ok(det(m, &elements(rows), &elements(cols)))
}

fn det(m: usize, rows: &[usize], cols: &[usize]) -> Poly {
    if rows.is_empty() {
        return Poly::constant(m, 1);
    }
    let mut out = Poly::constant(m, 0);
    let rest_rows = &rows[1..];
    for (i, &c) in cols.iter().enumerate() {
        let rest_cols: Vec<usize> = cols.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        let term = Poly::var(m, rows[0], c).mul(&det(m, rest_rows, &rest_cols));
        out = out.add(&if i % 2 == 0 { term } else { term.scale(-1) });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeterminantIdentity {
    /// ∂∂̸ = ∂̸∂ = det(∂)·1.
    CofactorTranspose,
    /// Expansion of D_{ā₁, a₁∪{a^c_{1j}}} along the inserted column.
    ColumnExpansion,
    /// The expansion with a repeated column index k′ ∈ a₁ vanishes.
    RepeatedRow,
}

impl DeterminantIdentity {
    pub const ALL: [DeterminantIdentity; 3] =
        [DeterminantIdentity::CofactorTranspose, DeterminantIdentity::ColumnExpansion, DeterminantIdentity::RepeatedRow];

    pub fn name(&self) -> &'static str {
        match self {
            DeterminantIdentity::CofactorTranspose => "cofactor_transpose",
            DeterminantIdentity::ColumnExpansion => "column_expansion",
            DeterminantIdentity::RepeatedRow => "repeated_row",
        }
    }
}

pub const DETERMINANT_M_CAP: usize = 4;

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Pairs (ā₁, a₁) of subsets of {1..m} with |ā₁| = |a₁| + 1.
fn class_one(m: usize) -> Vec<(Subset, Subset)> {
    let all = full_set(m);
    let mut out = Vec::new();
    for bar in 0..=all {
        for unbar in 0..=all {
            if card(bar) == card(unbar) + 1 {
                out.push((bar, unbar));
            }
        }
    }
    out
}

/// Σ_k (−1)^{k−1} D_{ā₁∖{ā₁ₖ}, a₁} x_{ā₁ₖ, col}.
fn alternating_expansion(m: usize, bar: Subset, unbar: Subset, col: usize) -> Result<Poly> {
    let mut sum = Poly::constant(m, 0);
    for (idx, r) in elements(bar).into_iter().enumerate() {
        let term = minor(m, bar & !subset(&[r]), unbar)?.mul(&Poly::var(m, r, col));
        sum = sum.add(&term.scale(sign(idx)));
    }
    Ok(sum)
}

fn check_cofactor(m: usize) -> Result<(usize, Option<String>)> {
    let all = full_set(m);
    let entry = |j: usize, k: usize| Poly::var(m, j, k);
    let mut cof = vec![vec![Poly::constant(m, 0); m]; m];
    for j in 1..=m {
        for k in 1..=m {
            cof[j - 1][k - 1] = minor(m, all & !subset(&[k]), all & !subset(&[j]))?.scale(sign(j + k));
        }
    }
    let delta = minor(m, all, all)?;
    let mut checked = 0;
    for j in 1..=m {
        for k in 1..=m {
            let expected = if j == k { delta.clone() } else { Poly::constant(m, 0) };
            let mut left = Poly::constant(m, 0);
            let mut right = Poly::constant(m, 0);
            for i in 1..=m {
                left = left.add(&entry(j, i).mul(&cof[i - 1][k - 1]));
                right = right.add(&cof[j - 1][i - 1].mul(&entry(i, k)));
            }
            checked += 2;
            if left != expected || right != expected {
                return Ok((checked, Some(format!("entry ({j},{k}) of ∂∂̸ or ∂̸∂ differs from det(∂)δ_jk"))));
            }
        }
    }
    Ok((checked, None))
}

fn check_column(m: usize) -> Result<(usize, Option<String>)> {
    let all = full_set(m);
    let mut checked = 0;
    for (bar, unbar) in class_one(m) {
        let bar_elems = elements(bar);
        for (jdx, c) in elements(all & !unbar).into_iter().enumerate() {
            let j = jdx + 1;
            let lhs = minor(m, bar, unbar | subset(&[c]))?;
            let mut rhs = Poly::constant(m, 0);
            for (kdx, &r) in bar_elems.iter().enumerate() {
                let k = kdx + 1;
                let term = minor(m, bar & !subset(&[r]), unbar)?.mul(&Poly::var(m, r, c));
                rhs = rhs.add(&term.scale(sign(k + c + 1 - j)));
            }
            let alternating = alternating_expansion(m, bar, unbar, c)?;
            checked += 1;
            if lhs != rhs || alternating != lhs.scale(sign(c - j)) {
                return Ok((checked, Some(format!("ā₁={:?} a₁={:?} column {c}", elements(bar), elements(unbar)))));
            }
        }
    }
    Ok((checked, None))
}

fn check_repeated(m: usize) -> Result<(usize, Option<String>)> {
    let mut checked = 0;
    for (bar, unbar) in class_one(m) {
        for kp in elements(unbar) {
            checked += 1;
            if !alternating_expansion(m, bar, unbar, kp)?.is_zero() {
                return Ok((checked, Some(format!("ā₁={:?} a₁={:?} k′={kp}", elements(bar), elements(unbar)))));
            }
        }
    }
    Ok((checked, None))
}

/// Verifies one determinant identity as an exact polynomial identity.
pub fn determinant_identity_check(m: usize, which: DeterminantIdentity) -> Result<IdentityReport> {
    if m == 0 || m > DETERMINANT_M_CAP {
        return Err(LabError::InvalidIndex(format!("determinant identities need 1 <= m <= {DETERMINANT_M_CAP}")));
    }
    let (instances, counterexample) = match which {
        DeterminantIdentity::CofactorTranspose => check_cofactor(m)?,
        DeterminantIdentity::ColumnExpansion => check_column(m)?,
        DeterminantIdentity::RepeatedRow => check_repeated(m)?,
    };
    Ok(IdentityReport::new(&format!("determinant_{}", which.name()), json!({"m": m, "instances": instances}), counterexample))
}
