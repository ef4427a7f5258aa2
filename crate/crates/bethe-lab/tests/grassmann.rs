use bethe_lab::error::LabError;
use bethe_lab::grassmann::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(re: i64, im: i64) -> GaussQ {
    GaussQ::from_parts((re, 1), (im, 1))
}

/// Sign of sorting a word of distinct generators by adjacent transpositions.
fn bubble_sign(word: &[GeneratorId]) -> i32 {
    let mut w = word.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    sign
}

fn random_elem(u: &Universe, rng: &mut ChaCha8Rng) -> GElem<GaussQ> {
    let bits = u.generator_count() as u32;
    let mut e = GElem::zero();
    for _ in 0..rng.random_range(1..5) {
        let mask = rng.random_range(0..1u64 << bits);
        let c = GaussQ::from_parts((rng.random_range(-3..4), rng.random_range(1..4)), (rng.random_range(-3..4), 1));
        e = e.add(&GElem::monomial(mask, c));
    }
    e
}

#[test]
fn generator_squares_vanish() {
    let u = Universe::single(2, 2).unwrap();
    for k in 1..=2 {
        for l in 1..=2 {
            let p = u.psi::<GaussQ>(0, k, l).unwrap();
            let pb = u.psibar::<GaussQ>(0, k, l).unwrap();
            assert!(p.mul(&p).is_empty());
            assert!(pb.mul(&pb).is_empty());
            assert_eq!(p.mul(&pb), pb.mul(&p).neg());
        }
    }
}

#[test]
fn even_pairs_multiply_with_transposition_sign() {
    let u = Universe::single(2, 1).unwrap();
    let g = |bar, k| if bar { GeneratorId::psibar(0, k, 1) } else { GeneratorId::psi(0, k, 1) };
    let pair = |k| u.gen::<GaussQ>(g(true, k)).unwrap().mul(&u.gen(g(false, k)).unwrap());
    let prod = pair(1).mul(&pair(2));
    let word = [g(true, 1), g(false, 1), g(true, 2), g(false, 2)];
    let (mask, _) = ordered_product(&u, &word).unwrap();
    assert_eq!(prod.len(), 1);
    assert_eq!(prod.coefficient(mask), GaussQ::from_int(bubble_sign(&word) as i64));
    assert_eq!(prod.coefficient(mask), GaussQ::one());

    // Odd words: ψ₂ψ̄₁ψ₁ needs two swaps, ψ₁ψ̄₁ one.
    for word in [vec![g(false, 2), g(true, 1), g(false, 1)], vec![g(false, 1), g(true, 1)], vec![g(false, 2), g(true, 2), g(false, 1), g(true, 1)]] {
        let e = word.iter().fold(GElem::<GaussQ>::one(), |acc, &x| acc.mul(&u.gen(x).unwrap()));
        let (mask, s) = ordered_product(&u, &word).unwrap();
        assert_eq!(s, bubble_sign(&word));
        assert_eq!(e.coefficient(mask), GaussQ::from_int(s as i64));
    }
}

#[test]
fn product_is_associative_on_random_triples() {
    let u = Universe::pair(2, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let (a, b, c) = (random_elem(&u, &mut rng), random_elem(&u, &mut rng), random_elem(&u, &mut rng));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }
}

#[test]
fn generator_layout_follows_canonical_order() {
    let u = Universe::pair(2, 2).unwrap();
    let mut gens = Vec::new();
    for tag in 0..2 {
        for k in 1..=2 {
            for l in 1..=2 {
                gens.push(GeneratorId::psi(tag, k, l));
                gens.push(GeneratorId::psibar(tag, k, l));
            }
        }
    }
    let mut by_order = gens.clone();
    by_order.sort();
    let mut by_bit = gens.clone();
    by_bit.sort_by_key(|&g| u.bit(g).unwrap());
    assert_eq!(by_order, by_bit);
    for g in gens {
        assert_eq!(u.generator_of(u.bit(g).unwrap()), Some(g));
    }
    assert!(u.bit(GeneratorId::psi(0, 3, 1)).is_err());
}

#[test]
fn berezin_conventions() {
    let u = Universe::single(1, 1).unwrap();
    let pb = u.psibar::<GaussQ>(0, 1, 1).unwrap();
    let p = u.psi::<GaussQ>(0, 1, 1).unwrap();
    assert_eq!(u.berezin(&pb.mul(&p), 0, 1, 1).unwrap(), GElem::scalar(GaussQ::from_int(-1)));
    assert_eq!(u.berezin(&p.mul(&pb), 0, 1, 1).unwrap(), GElem::one());
    assert!(u.berezin(&GElem::<GaussQ>::one(), 0, 1, 1).unwrap().is_empty());
    assert!(u.berezin(&pb, 0, 1, 1).unwrap().is_empty());
}

#[test]
fn top_monomial_integral() {
    for m in 1..=2 {
        for n in 1..=2 {
            let u = Universe::single(m, n).unwrap();
            let full = IndexTuplePair::full(m, n);
            let value = u.berezin_all(&monomial::<GaussQ>(&u, 0, &full).unwrap(), 0).unwrap();
            let expected = if (m * n) % 2 == 0 { 1 } else { -1 } * sgn(&full.unbar);
            assert_eq!(value, GElem::scalar(GaussQ::from_int(expected as i64)), "m={m} n={n}");
        }
    }
}

#[test]
fn monomial_conventions() {
    let u = Universe::single(3, 2).unwrap();
    for l in 1..=2 {
        assert_eq!(monomial_l::<GaussQ>(&u, 0, 0, 0, l).unwrap(), GElem::one());
    }
    for p in class_pairs(3, 1, 0) {
        let (b, a) = (p.bar[0], p.unbar[0]);
        let c = card(a);
        let s = if (c * c.saturating_sub(1) / 2) % 2 == 0 { 1 } else { -1 };
        for l in 1..=2 {
            let lhs = monomial_l::<GaussQ>(&u, 0, b, a, l).unwrap();
            let rhs = monomial_paired::<GaussQ>(&u, 0, b, a, l).unwrap().scale(&GaussQ::from_int(s));
            assert_eq!(lhs, rhs, "ā={b:b} a={a:b}");
        }
    }
    let top = monomial::<GaussQ>(&u, 0, &IndexTuplePair::full(3, 2)).unwrap();
    assert_eq!(top.len(), 1);
    let c = top.terms().values().next().unwrap();
    assert!(*c == GaussQ::one() || *c == GaussQ::one().neg());
}

#[test]
fn paired_product_relation_over_tuples() {
    let u = Universe::single(2, 2).unwrap();
    for p in class_pairs(2, 2, 0) {
        let paired = (0..2).fold(GElem::<GaussQ>::one(), |acc, i| {
            acc.mul(&monomial_paired(&u, 0, p.bar[i], p.unbar[i], i + 1).unwrap())
        });
        let rhs = monomial::<GaussQ>(&u, 0, &p).unwrap().scale(&GaussQ::from_int(sgn(&p.unbar) as i64));
        assert_eq!(paired, rhs);
    }
}

#[test]
fn sign_function_values() {
    assert_eq!(sgn(&[0, 0]), 1);
    assert_eq!(sgn(&[subset(&[1, 2])]), -1);
    assert_eq!(sgn(&[subset(&[1, 2, 3])]), -1);
    assert_eq!(sgn(&[subset(&[1, 2, 3, 4])]), 1);
    assert_eq!(sgn(&[subset(&[1, 2]), subset(&[1, 3])]), 1);
}

#[test]
fn unit_pair_sign() {
    let m = 2;
    for n in 1..=2 {
        for j in 1..=m {
            for k in 1..=m {
                let p = IndexTuplePair::new(m, unit_tuple(j, n), unit_tuple(k, n)).unwrap();
                let expected = if (m * n + j + k) % 2 == 0 { 1 } else { -1 };
                assert_eq!(sgn2(&p).unwrap(), expected, "n={n} j={j} k={k}");
                assert_eq!(sgn2_berezin_with(&p, sgn).unwrap(), expected);
            }
        }
    }
}

#[test]
fn sgn4_requires_addability() {
    let p = IndexTuplePair::new(2, vec![subset(&[1])], vec![subset(&[2])]).unwrap();
    assert_eq!(sgn4(&p, &p), Err(LabError::NotAddable));
    assert_eq!(sgn4(&p, &IndexTuplePair::empty(2, 1)), Ok(1));
}

#[test]
fn sgn2_double_computation_is_exhaustively_consistent() {
    for m in 1..=2 {
        for n in 1..=2 {
            let r = sgn2_agreement_check(m, n).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}

#[test]
fn flipped_sgn_is_detected() {
    fn flipped(a: &[Subset]) -> i32 {
        -sgn(a)
    }
    let r = sgn2_agreement_check_with(2, 1, flipped).unwrap();
    assert!(!r.pass);
    assert!(r.counterexample.is_some());
}

#[test]
fn complementary_integrals_match_sgn4() {
    for (m, n) in [(1, 1), (2, 1), (2, 2)] {
        let u = Universe::single(m, n).unwrap();
        let full = IndexTuplePair::full(m, n);
        let top = u.berezin_all(&monomial::<GaussQ>(&u, 0, &full).unwrap(), 0).unwrap();
        for p in class_pairs(m, n, 0) {
            let pc = p.complement();
            let integrand = monomial::<GaussQ>(&u, 0, &p).unwrap().mul(&monomial(&u, 0, &pc).unwrap());
            let s = sgn4(&p, &pc).unwrap();
            assert_eq!(u.berezin_all(&integrand, 0).unwrap(), top.scale(&GaussQ::from_int(s as i64)));
        }
    }
}

#[test]
fn pairing_expansion_small_cases() {
    let r = pairing_expansion_check(1, 1).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.parameters["monomials"], 4);
    for (m, n) in [(2, 1), (2, 2), (1, 3), (3, 2)] {
        let r = pairing_expansion_check(m, n).unwrap();
        assert!(r.pass, "{r:?}");
    }
    assert!(pairing_expansion_check(3, 3).is_err());
}

#[test]
fn exact_and_float_modes_agree() {
    let u = Universe::pair(2, 1).unwrap();
    let exact = pairing_closed_form::<GaussQ>(&u, 2, 1).unwrap().to_complex();
    let float = pairing_closed_form::<Complex64>(&u, 2, 1).unwrap();
    assert!(exact.max_abs_diff(&float) < 1e-12);
    let exact = pairing_exponential::<GaussQ>(&u, 2, 1, -1).unwrap().to_complex();
    let float = pairing_exponential::<Complex64>(&u, 2, 1, -1).unwrap();
    assert!(exact.max_abs_diff(&float) < 1e-12);
}

#[test]
fn determinant_identities_hold() {
    for m in 1..=3 {
        for which in DeterminantIdentity::ALL {
            let r = determinant_identity_check(m, which).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
    assert!(determinant_identity_check(4, DeterminantIdentity::CofactorTranspose).unwrap().pass);
    assert!(determinant_identity_check(5, DeterminantIdentity::RepeatedRow).is_err());
}

#[test]
fn scalar_determinant_case_is_trivial() {
    let x = Poly::var(1, 1, 1);
    assert_eq!(minor(1, 1, 1).unwrap(), x);
    assert_eq!(minor(1, 0, 0).unwrap(), Poly::constant(1, 1));
    let r = determinant_identity_check(1, DeterminantIdentity::RepeatedRow).unwrap();
    assert_eq!(r.parameters["instances"], 0);
}

#[test]
fn two_by_two_minor_expansion() {
    let d = minor(2, 0b11, 0b11).unwrap();
    let expected = Poly::var(2, 1, 1).mul(&Poly::var(2, 2, 2)).sub(&Poly::var(2, 1, 2).mul(&Poly::var(2, 2, 1)));
    assert_eq!(d, expected);
    assert_eq!(d.term_count(), 2);
}

#[test]
fn report_json_shape() {
    let r = pairing_expansion_check(1, 1).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["identity"], "pairing_expansion");
    assert_eq!(v["pass"], true);
    assert!(v.get("counterexample").is_none());
    let bad = sgn2_agreement_check_with(1, 1, |a| -sgn(a)).unwrap();
    assert!(serde_json::to_value(&bad).unwrap()["counterexample"].is_string());
}

#[test]
fn nilpotent_exponential() {
    let u = Universe::single(1, 1).unwrap();
    let x = u.psibar::<GaussQ>(0, 1, 1).unwrap().mul(&u.psi(0, 1, 1).unwrap()).scale(&q(0, 1));
    assert_eq!(x.exp_nilpotent().unwrap(), GElem::one().add(&x));
    assert!(GElem::<GaussQ>::one().exp_nilpotent().is_err());
}

proptest! {
    #[test]
    fn bilinear_and_anticommuting(seed in 0u64..10_000, scale in -5i64..5) {
        let u = Universe::single(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_elem(&u, &mut rng), random_elem(&u, &mut rng), random_elem(&u, &mut rng));
        let s = GaussQ::from_int(scale);
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.scale(&s).mul(&b), a.mul(&b).scale(&s));
        let g1 = u.psi::<GaussQ>(0, rng.random_range(1..=2), 1).unwrap();
        let g2 = u.psibar::<GaussQ>(0, rng.random_range(1..=2), 1).unwrap();
        prop_assert_eq!(g1.mul(&g2), g2.mul(&g1).neg());
        prop_assert_eq!(a.mul(&GElem::one()), a.clone());
        prop_assert!(a.terms().values().all(|v| !v.is_zero()));
    }
}
