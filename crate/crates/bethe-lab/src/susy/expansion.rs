use num_complex::Complex64;
use serde_json::json;

use super::gaussian::{derivative_factor, minor_product, CVec, GaussianSF, VectorGaussianSF};
use crate::error::{LabError, Result};
use crate::grassmann::{card, class_pairs, elements, monomial, sgn, subset, GElem, IdentityReport, IndexTuplePair, Universe};
use crate::linalg::{re, CMat, RMat, I};

pub const TAYLOR_TOL: f64 = 1e-12;

/// Entries (Ψ^{⊙2})_{jk} = Σ_ℓ ½(ψ̄_{j,ℓ}ψ_{k,ℓ} + ψ̄_{k,ℓ}ψ_{j,ℓ}) of the supermatrix `tag`.
pub fn psi_square(u: &Universe, tag: usize) -> Result<Vec<Vec<GElem<Complex64>>>> {
    let b = u.block(tag)?;
    let (m, n) = (b.m, b.n);
    let half = re(0.5);
    let mut out = vec![vec![GElem::zero(); m]; m];
    for j in 1..=m {
        for k in 1..=m {
            let mut e = GElem::zero();
            for l in 1..=n {
                e = e
                    .add(&u.psibar(tag, j, l)?.mul(&u.psi(tag, k, l)?))
                    .add(&u.psibar(tag, k, l)?.mul(&u.psi(tag, j, l)?));
            }
            out[j - 1][k - 1] = e.scale(&half);
        }
    }
    Ok(out)
}

/// Tr(B Ψ^{⊙2}) as a Grassmann element.
pub fn trace_pairing(u: &Universe, tag: usize, b: &CMat) -> Result<GElem<Complex64>> {
    let sq = psi_square(u, tag)?;
    let mut out = GElem::zero();
    for (j, row) in sq.iter().enumerate() {
        for (k, e) in row.iter().enumerate() {
            out = out.add(&e.scale(&b[(k, j)]));
        }
    }
    Ok(out)
}

/// Grassmann part e^{(i/4)Tr(BΨ^{⊙2})} of a Gaussian superfunction.
pub fn gaussian_soul(u: &Universe, tag: usize, b: &CMat) -> Result<GElem<Complex64>> {
    trace_pairing(u, tag, b)?.scale(&(I * 0.25)).exp_nilpotent()
}

fn check_block(u: &Universe, tag: usize, m: usize) -> Result<usize> {
    let b = u.block(tag)?;
    if b.m != m {
        return Err(LabError::InvalidIndex(format!("supermatrix has m = {}, function has m = {m}", b.m)));
    }
    Ok(b.n)
}

/// f(Φ^{⊙2}) = f(φ^{⊙2} + Ψ^{⊙2}) expanded in the Grassmann generators.
pub fn gaussian_superfunction(u: &Universe, tag: usize, f: &GaussianSF, phi: &RMat) -> Result<GElem<Complex64>> {
    let n = check_block(u, tag, f.m())?;
    if phi.nrows() != f.m() || phi.ncols() != 2 * n {
        return Err(LabError::InvalidMatrix(format!("φ must be {}x{}", f.m(), 2 * n)));
    }
    Ok(gaussian_soul(u, tag, &f.b)?.scale(&f.eval(phi)))
}

/// Super-Taylor expansion f(Φ^{⊙2}) = Σ_{𝒫ⁿ} D_{ā,a}f(φ^{⊙2}) sgn(a) Ψ_{ā,a} on a Gaussian.
pub fn super_taylor_check(f: &GaussianSF, n: usize, phi: &RMat) -> Result<IdentityReport> {
    let m = f.m();
    let u = Universe::single(m, n)?;
    if phi.nrows() == m && phi.ncols() == 2 * n && (phi * phi.transpose()).determinant().abs() < 1e-12 {
        return Err(LabError::InvalidMatrix("φ^{⊙2} must be nondegenerate".into()));
    }
    let engine = gaussian_superfunction(&u, 0, f, phi)?;
    let base = f.eval(phi);
    let mut taylor = GElem::zero();
    for p in class_pairs(m, n, 0) {
        let coeff = derivative_factor(f, &p)? * base * sgn(&p.unbar) as f64;
        taylor = taylor.add(&monomial::<Complex64>(&u, 0, &p)?.scale(&coeff));
    }
    let dev = engine.max_abs_diff(&taylor) / engine.max_abs().max(1.0);
    let counterexample = (dev > TAYLOR_TOL).then(|| format!("max coefficient deviation {dev:e}"));
    Ok(IdentityReport::new("super_taylor", json!({"m": m, "n": n, "max_deviation": dev}), counterexample))
}

/// 𝔻_{ā,a}𝐟 on a Gaussian vector, (ā, a) ∈ 𝒫ⁿ₁: sgn(a) Σ_k (−1)^{k−1} D_{ā−⟦ā₁ₖ⟧,a} v_{ā₁ₖ},
/// with D the minors of `bp` = (i/4)B.
pub fn dd_coefficient(bp: &CMat, v: &CVec, p: &IndexTuplePair) -> Result<Complex64> {
    if !p.in_class(1) {
        return Err(LabError::InvalidIndex("𝔻 is defined on 𝒫ⁿ₁".into()));
    }
    let mut sum = re(0.0);
    for (idx, r) in elements(p.bar[0]).into_iter().enumerate() {
        let mut reduced = p.clone();
        reduced.bar[0] &= !subset(&[r]);
        let term = minor_product(bp, &reduced)? * v[r - 1];
        sum += if idx % 2 == 0 { term } else { -term };
    }
    Ok(sum * sgn(&p.unbar) as f64)
}

/// Coefficients of Ψ̄⃗·𝐟 (`bar`) or Ψ⃗·𝐟 on Ψ_{ā,a} from the alternating-minor closed form.
pub fn vexp_closed_form(bp: &CMat, v: &CVec, n: usize, bar: bool) -> Result<Vec<(IndexTuplePair, Complex64)>> {
    let m = bp.nrows();
    let class = if bar { 1 } else { -1 };
    class_pairs(m, n, class)
        .into_iter()
        .map(|p| {
            let c = if bar {
                dd_coefficient(bp, v, &p)?
            } else {
                let s = if card(p.bar[0]) % 2 == 0 { 1.0 } else { -1.0 };
                dd_coefficient(bp, v, &p.swapped())? * s
            };
            Ok((p, c))
        })
        .collect()
}

pub fn assemble(u: &Universe, tag: usize, coeffs: &[(IndexTuplePair, Complex64)]) -> Result<GElem<Complex64>> {
    coeffs.iter().try_fold(GElem::zero(), |acc, (p, c)| Ok(acc.add(&monomial::<Complex64>(u, tag, p)?.scale(c))))
}

/// Σ_k ψ̄_{k,1} v_k (`bar`) or Σ_k ψ_{k,1} v_k, as a Grassmann element.
pub fn first_column_dot(u: &Universe, tag: usize, v: &CVec, bar: bool) -> Result<GElem<Complex64>> {
    (1..=v.len()).try_fold(GElem::zero(), |acc, k| {
        let g = if bar { u.psibar(tag, k, 1)? } else { u.psi(tag, k, 1)? };
        Ok(acc.add(&g.scale(&v[k - 1])))
    })
}

/// Ψ̄⃗·𝐟(Φ^{⊙2}) (or Ψ⃗·𝐟) expanded by the engine at φ = 0.
pub fn vexp_engine(u: &Universe, tag: usize, f: &VectorGaussianSF, bar: bool) -> Result<GElem<Complex64>> {
    check_block(u, tag, f.m())?;
    let soul = gaussian_soul(u, tag, &f.body.b)?.scale(&f.body.c);
    Ok(first_column_dot(u, tag, &f.v, bar)?.mul(&soul))
}

pub fn vexp_coefficient_check(f: &VectorGaussianSF, n: usize) -> Result<IdentityReport> {
    let m = f.m();
    let u = Universe::single(m, n)?;
    let bp = f.body.b_prime();
    let mut worst = 0.0f64;
    for bar in [true, false] {
        let engine = vexp_engine(&u, 0, f, bar)?;
        let closed = assemble(&u, 0, &vexp_closed_form(&bp, &(&f.v * f.body.c), n, bar)?)?;
        worst = worst.max(engine.max_abs_diff(&closed) / engine.max_abs().max(1.0));
    }
    let counterexample = (worst > TAYLOR_TOL).then(|| format!("max coefficient deviation {worst:e}"));
    Ok(IdentityReport::new("vector_expansion", json!({"m": m, "n": n, "max_deviation": worst}), counterexample))
}
