//! The supersymmetric Fourier transform on Gaussian superfunctions: closed form,
//! involution, quadrature cross-check and the identity relating 𝕋 to Berezin
//! integrals.

use bethe_lab::linalg::{c, max_abs_diff, CMat};
use bethe_lab::susy::{
    bbt_gaussian, involution_deviation, t_gaussian, t_quadrature_gate, thdt_check, CVec, GaussianSF, VectorGaussianSF,
};

fn main() -> bethe_lab::Result<()> {
    let b = CMat::from_row_slice(2, 2, &[c(0.3, 1.2), c(0.1, 0.2), c(0.1, 0.2), c(-0.4, 0.9)]);
    let f = GaussianSF::new(b, c(1.0, 0.0))?;
    let tf = t_gaussian(&f)?;
    println!("B̂ = −4B⁻¹ =\n{}", tf.b);
    println!("T²f = f: deviation {:.2e}", max_abs_diff(&t_gaussian(&tf)?.b, &f.b));

    let vf = VectorGaussianSF::new(f, CVec::from_row_slice(&[c(1.0, 0.0), c(0.5, -0.5)]))?;
    println!("𝕋 vector = {}", bbt_gaussian(&vf)?.v.transpose());
    println!("𝕋² = identity: deviation {:.2e}", involution_deviation(&vf)?);

    let gate = t_quadrature_gate(c(0.6, 1.5), [0.3, 1.1])?;
    println!("quadrature against closed form at m=1: deviation {:.2e}, pass={}", gate.deviation, gate.pass);

    for n in [1, 2] {
        let report = thdt_check(&vf, n)?;
        println!("{} at (m, n) = (2, {n}): pass={} {}", report.identity, report.pass, report.parameters);
    }
    Ok(())
}
