//! Exact exterior algebra over the generators of one supermatrix: products,
//! Berezin integration and the two computations of sgn(ā, a).

use bethe_lab::grassmann::{
    berezin_convention_check, class_pairs, describe, elements, sgn2, sgn2_agreement_check, Coeff, GElem, GaussQ, Universe,
};

fn main() -> bethe_lab::Result<()> {
    let u = Universe::single(2, 1)?;
    let psi1 = u.psi::<GaussQ>(0, 1, 1)?;
    let bar1 = u.psibar::<GaussQ>(0, 1, 1)?;
    let psi2 = u.psi::<GaussQ>(0, 2, 1)?;
    let bar2 = u.psibar::<GaussQ>(0, 2, 1)?;

    let x = bar1.mul(&psi1).add(&bar2.mul(&psi2).scale(&GaussQ::ratio(1, 2)));
    let e = x.exp_nilpotent()?;
    for (&mask, c) in e.terms() {
        println!("  exp term {:>12}: {}", describe(&u, mask), c.to_complex());
    }
    println!("∫ exp(ψ̄₁ψ₁ + ½ψ̄₂ψ₂) DΨ = {}", u.berezin_all(&e, 0)?.body().to_complex());
    println!("ψ₁ψ₁ = 0: {}", psi1.mul(&psi1) == GElem::zero());
    println!("ψ₁ψ̄₁ = −ψ̄₁ψ₁: {}", psi1.mul(&bar1) == bar1.mul(&psi1).neg());

    let report = berezin_convention_check(2, 2)?;
    println!("{}: pass={}", report.identity, report.pass);

    for p in class_pairs(2, 2, 0).iter().take(6) {
        let bar: Vec<_> = p.bar.iter().map(|&s| elements(s)).collect();
        let unbar: Vec<_> = p.unbar.iter().map(|&s| elements(s)).collect();
        println!("  sgn(ā={bar:?}, a={unbar:?}) = {:+}", sgn2(p)?);
    }
    let report = sgn2_agreement_check(2, 2)?;
    println!("{}: pass={} {}", report.identity, report.pass, report.parameters);
    Ok(())
}
