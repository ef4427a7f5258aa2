use serde_json::json;

use super::algebra::{merge_sign, GElem, GeneratorId, Universe};
use super::coeff::{Coeff, GaussQ};
use super::index::{card, class_pairs, elements, all_pairs, IndexTuplePair, Subset};
use super::report::IdentityReport;
use crate::error::{LabError, Result};

/// Signature of the sgn(a) function, injectable for mutation testing.
pub type SgnFn = fn(&[Subset]) -> i32;

/// sgn(a) = Π_ℓ (−1)^{|a_ℓ|(|a_ℓ|−1)/2}.
pub fn sgn(a: &[Subset]) -> i32 {
    a.iter().fold(1, |s, &x| {
        let c = card(x);
        if (c * c.saturating_sub(1) / 2) % 2 == 0 {
            s
        } else {
            -s
        }
    })
}

fn parity(k: usize) -> i32 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Product of generators in the given order, as (canonical mask, sign); sign 0 if it vanishes.
pub fn ordered_product(u: &Universe, gens: &[GeneratorId]) -> Result<(u64, i32)> {
    let mut mask = 0u64;
    let mut sign = 1;
    for &g in gens {
        let bit = 1u64 << u.bit(g)?;
        if mask & bit != 0 {
            return Ok((0, 0));
        }
        sign *= merge_sign(mask, bit);
        mask |= bit;
    }
    Ok((mask, sign))
}

fn signed<C: Coeff>((mask, sign): (u64, i32)) -> GElem<C> {
    if sign == 0 {
        GElem::zero()
    } else {
        GElem::monomial(mask, C::sign(sign))
    }
}

fn block_gens(tag: usize, bar: Subset, unbar: Subset, l: usize) -> Vec<GeneratorId> {
    elements(bar)
        .into_iter()
        .map(|k| GeneratorId::psibar(tag, k, l))
        .chain(elements(unbar).into_iter().map(|k| GeneratorId::psi(tag, k, l)))
        .collect()
}

fn tuple_gens(tag: usize, p: &IndexTuplePair) -> Vec<GeneratorId> {
    (0..p.n()).flat_map(|i| block_gens(tag, p.bar[i], p.unbar[i], i + 1)).collect()
}

/// Ψ_{ā,a,ℓ} = (Π ψ̄_{k̄_j,ℓ})(Π ψ_{k_j,ℓ}).
pub fn monomial_l<C: Coeff>(u: &Universe, tag: usize, bar: Subset, unbar: Subset, l: usize) -> Result<GElem<C>> {
    Ok(signed(ordered_product(u, &block_gens(tag, bar, unbar, l))?))
}

/// Ψ_{ā,a} = Π_ℓ Ψ_{ā_ℓ,a_ℓ,ℓ}.
pub fn monomial<C: Coeff>(u: &Universe, tag: usize, p: &IndexTuplePair) -> Result<GElem<C>> {
    Ok(signed(ordered_product(u, &tuple_gens(tag, p))?))
}

/// Ψ^{(ℓ)}_{ā,a} = Π_j ψ̄_{k̄_j,ℓ} ψ_{k_j,ℓ} for |ā| = |a|.
pub fn monomial_paired<C: Coeff>(u: &Universe, tag: usize, bar: Subset, unbar: Subset, l: usize) -> Result<GElem<C>> {
    if card(bar) != card(unbar) {
        return Err(LabError::InvalidIndex("paired monomial needs |ā| = |a|".into()));
    }
    let gens: Vec<GeneratorId> = elements(bar)
        .into_iter()
        .zip(elements(unbar))
        .flat_map(|(kb, k)| [GeneratorId::psibar(tag, kb, l), GeneratorId::psi(tag, k, l)])
        .collect();
    Ok(signed(ordered_product(u, &gens)?))
}

/// sgn(ā,a,b̄,b), defined by Ψ_{ā,a}Ψ_{b̄,b} = sgn(ā,a,b̄,b) Ψ_{ā+b̄,a+b}.
pub fn sgn4(p: &IndexTuplePair, q: &IndexTuplePair) -> Result<i32> {
    let sum = p.plus(q)?;
    let u = Universe::single(p.m, p.n())?;
    let mut gens = tuple_gens(0, p);
    gens.extend(tuple_gens(0, q));
    let (_, product) = ordered_product(&u, &gens)?;
    let (_, target) = ordered_product(&u, &tuple_gens(0, &sum))?;
    Ok(product * target)
}

fn require_balanced(p: &IndexTuplePair) -> Result<()> {
    if p.is_balanced() {
        Ok(())
    } else {
        Err(LabError::InvalidIndex("pair must lie in 𝒫ⁿ".into()))
    }
}

/// sgn(ā,a) from its defining Berezin integral, with a given sgn(·).
pub fn sgn2_berezin_with(p: &IndexTuplePair, sgn_fn: SgnFn) -> Result<i32> {
    require_balanced(p)?;
    let u = Universe::single(p.m, p.n())?;
    let pc = p.complement();
    let integrand = monomial::<GaussQ>(&u, 0, p)?
        .mul(&monomial(&u, 0, &pc)?)
        .scale(&GaussQ::from_int((sgn_fn(&p.unbar) * sgn_fn(&pc.unbar)) as i64));
    let value = u.berezin_all(&integrand, 0)?;
    let c = value.body();
    if value.len() > 1 || !(c == GaussQ::one() || c == GaussQ::one().neg()) {
        return Err(LabError::NumericalBreakdown("Berezin integral of a top monomial is not ±1".into()));
    }
    Ok(if c == GaussQ::one() { 1 } else { -1 })
}

/// sgn(ā,a) = (−1)^{mn} sgn(a) sgn(a^c) sgn(𝐈) / sgn(ā,a,ā^c,a^c), with a given sgn(·).
pub fn sgn2_closed_with(p: &IndexTuplePair, sgn_fn: SgnFn) -> Result<i32> {
    require_balanced(p)?;
    let pc = p.complement();
    let full = IndexTuplePair::full(p.m, p.n());
    Ok(parity(p.m * p.n()) * sgn_fn(&p.unbar) * sgn_fn(&pc.unbar) * sgn_fn(&full.unbar) * sgn4(p, &pc)?)
}

pub fn sgn2(p: &IndexTuplePair) -> Result<i32> {
    sgn2_closed_with(p, sgn)
}

/// Exhaustive agreement of both sgn(ā,a) computations over 𝒫ⁿ.
pub fn sgn2_agreement_check_with(m: usize, n: usize, sgn_fn: SgnFn) -> Result<IdentityReport> {
    let mut counterexample = None;
    let pairs = class_pairs(m, n, 0);
    for p in &pairs {
        let a = sgn2_berezin_with(p, sgn_fn)?;
        let b = sgn2_closed_with(p, sgn_fn)?;
        if a != b {
            counterexample = Some(format!("ā={:?} a={:?}: Berezin {a}, closed form {b}", p.bar, p.unbar));
            break;
        }
    }
    Ok(IdentityReport::new("sgn2_double_computation", json!({"m": m, "n": n, "pairs": pairs.len()}), counterexample))
}

pub fn sgn2_agreement_check(m: usize, n: usize) -> Result<IdentityReport> {
    sgn2_agreement_check_with(m, n, sgn)
}

/// s(ā,a) = Π_{ℓ<ℓ′} (−1)^{(|ā_ℓ|+|a_ℓ|)(|ā_ℓ′|+|a_ℓ′|)}.
pub fn pair_sign(p: &IndexTuplePair) -> i32 {
    let w: Vec<usize> = (0..p.n()).map(|i| card(p.bar[i]) + card(p.unbar[i])).collect();
    let mut s = 1;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            s *= parity(w[i] * w[j]);
        }
    }
    s
}

/// Π_{k,ℓ} (1 + (i/2)ψ̄_{k,ℓ}ψ′_{k,ℓ})(1 + (i/2)ψ̄′_{k,ℓ}ψ_{k,ℓ}) in the universe (Φ, Φ′).
pub fn pairing_product<C: Coeff>(u: &Universe, m: usize, n: usize, sign: i64) -> Result<GElem<C>> {
    let half_i = C::imag_unit().mul(&C::ratio(sign, 2));
    let mut out = GElem::one();
    for k in 1..=m {
        for l in 1..=n {
            let f1 = GElem::one().add(&u.psibar::<C>(0, k, l)?.mul(&u.psi(1, k, l)?).scale(&half_i));
            let f2 = GElem::one().add(&u.psibar::<C>(1, k, l)?.mul(&u.psi(0, k, l)?).scale(&half_i));
            out = out.mul(&f1).mul(&f2);
        }
    }
    Ok(out)
}

/// exp((±i/2) Σ_{k,ℓ} (ψ̄_{k,ℓ}ψ′_{k,ℓ} + ψ̄′_{k,ℓ}ψ_{k,ℓ})), the Grassmann part of e^{±iΦ·Φ′}.
pub fn pairing_exponential<C: Coeff>(u: &Universe, m: usize, n: usize, sign: i64) -> Result<GElem<C>> {
    let half_i = C::imag_unit().mul(&C::ratio(sign, 2));
    let mut exponent = GElem::zero();
    for k in 1..=m {
        for l in 1..=n {
            exponent = exponent
                .add(&u.psibar::<C>(0, k, l)?.mul(&u.psi(1, k, l)?))
                .add(&u.psibar::<C>(1, k, l)?.mul(&u.psi(0, k, l)?));
        }
    }
    exponent.scale(&half_i).exp_nilpotent()
}

/// Σ_{ā,a} (i/2)^{|(ā,a)|} (sgn(a)/sgn(ā)) (−1)^{|a|} s(ā,a) Ψ′_{ā,a} Ψ_{a,ā}.
pub fn pairing_closed_form<C: Coeff>(u: &Universe, m: usize, n: usize) -> Result<GElem<C>> {
    let half_i = C::imag_unit().mul(&C::ratio(1, 2));
    let mut out = GElem::zero();
    for p in all_pairs(m, n) {
        let a_card = super::index::tuple_card(&p.unbar);
        let s = sgn(&p.unbar) * sgn(&p.bar) * parity(a_card) * pair_sign(&p);
        let coeff = half_i.pow(p.total_card()).mul(&C::sign(s));
        let term = monomial::<C>(u, 1, &p)?.mul(&monomial(u, 0, &p.swapped())?);
        out = out.add(&term.scale(&coeff));
    }
    Ok(out)
}

/// Human-readable canonical monomial.
pub fn describe(u: &Universe, mask: u64) -> String {
    if mask == 0 {
        return "1".into();
    }
    let mut s = String::new();
    let mut rest = mask;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        match u.generator_of(bit) {
            Some(g) => {
                let name = &u.blocks()[g.tag].name;
                let prime = name.strip_prefix('Φ').unwrap_or(name);
                let letter = if g.bar { "ψ̄" } else { "ψ" };
                s.push_str(&format!("{letter}{prime}[{},{}]", g.k, g.l));
            }
            None => s.push_str(&format!("?{bit}")),
        }
    }
    s
}

fn first_difference(u: &Universe, a: &GElem<GaussQ>, b: &GElem<GaussQ>) -> Option<String> {
    let d = a.sub(b);
    d.terms().iter().next().map(|(&mask, _)| {
        format!("{}: {:?} vs {:?}", describe(u, mask), a.coefficient(mask).to_complex(), b.coefficient(mask).to_complex())
    })
}

pub const PAIRING_COST_CAP: usize = 6;

/// Exact comparison of the product form of the Grassmann part of e^{iΦ·Φ′}
/// with its closed-form monomial sum.
pub fn pairing_expansion_check(m: usize, n: usize) -> Result<IdentityReport> {
    if m * n > PAIRING_COST_CAP || m == 0 || n == 0 {
        return Err(LabError::InvalidIndex(format!("pairing expansion needs 1 <= m*n <= {PAIRING_COST_CAP}")));
    }
    let u = Universe::pair(m, n)?;
    let product = pairing_product::<GaussQ>(&u, m, n, 1)?;
    let closed = pairing_closed_form::<GaussQ>(&u, m, n)?;
    let mut counterexample = first_difference(&u, &product, &closed);
    if counterexample.is_none() {
        let exp = pairing_exponential::<GaussQ>(&u, m, n, 1)?;
        counterexample = first_difference(&u, &exp, &product).map(|d| format!("exponential vs product: {d}"));
    }
    if counterexample.is_none() {
        let mi = m as i32;
        counterexample = (-mi..=mi)
            .flat_map(|k| class_pairs(m, n, k))
            .find(|p| pair_sign(p) != 1)
            .map(|p| format!("s(ā,a) = -1 at ā={:?} a={:?}", p.bar, p.unbar));
    }
    Ok(IdentityReport::new(
        "pairing_expansion",
        json!({"m": m, "n": n, "monomials": product.len()}),
        counterexample,
    ))
}

/// ∫ψ̄ψ dψ̄dψ = −1, ∫ψψ̄ dψ̄dψ = 1, and ∫Ψ_{𝐈,𝐈} DΨ = (−1)^{mn} sgn(𝐈) for every m, n up to the given sizes.
pub fn berezin_convention_check(max_m: usize, max_n: usize) -> Result<IdentityReport> {
    let mut counterexample = None;
    let u = Universe::single(1, 1)?;
    let pb = u.psibar::<GaussQ>(0, 1, 1)?;
    let p = u.psi::<GaussQ>(0, 1, 1)?;
    let minus_one = GElem::scalar(GaussQ::from_int(-1));
    if u.berezin(&pb.mul(&p), 0, 1, 1)? != minus_one || u.berezin(&p.mul(&pb), 0, 1, 1)? != GElem::one() {
        counterexample = Some("single-pair convention violated".to_string());
    }
    for m in 1..=max_m {
        for n in 1..=max_n {
            let u = Universe::single(m, n)?;
            let full = IndexTuplePair::full(m, n);
            let value = u.berezin_all(&monomial::<GaussQ>(&u, 0, &full)?, 0)?;
            let expected = parity(m * n) * sgn(&full.unbar);
            if value != GElem::scalar(GaussQ::from_int(expected as i64)) && counterexample.is_none() {
                counterexample = Some(format!("m={m} n={n}: top integral is not {expected}"));
            }
        }
    }
    Ok(IdentityReport::new("berezin_convention", json!({"max_m": max_m, "max_n": max_n}), counterexample))
}
