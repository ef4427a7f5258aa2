mod common;

use bethe_lab::greens::*;
use bethe_lab::linalg::{complexify, invert, max_abs_diff, min_sym_eigenvalue, op_norm, CMat, I};
use bethe_lab::model::{build_tree, TreeKind};
use bethe_lab::rng::RngStream;
use common::*;
use num_complex::Complex64;

fn scalar(g: &CMat) -> Complex64 {
    g[(0, 0)]
}

#[test]
fn halfspace_base_case() {
    let p = scalar_free(2);
    let g = halfspace_green_finite(&p, &Potential::Zero, ComplexEnergy::new(0.0, 1.0), 0).unwrap();
    assert!((scalar(&g) - I).norm() < 1e-15);
}

#[test]
fn non_positive_eta_is_rejected() {
    let p = scalar_free(2);
    for eta in [0.0, -0.1] {
        let e = ComplexEnergy::new(0.0, eta);
        assert!(matches!(halfspace_green_finite(&p, &Potential::Zero, e, 3), Err(bethe_lab::LabError::RequiresPositiveEta(_))));
        assert!(full_green_diag(&p, &Potential::Zero, e, 3).is_err());
    }
}

#[test]
fn recursion_matches_dense_solve() {
    for k in [2usize, 3] {
        for m in [1usize, 2] {
            let p = disordered(k, m, 0.5);
            for depth in 0..=4usize {
                let e = ComplexEnergy::new(0.17, 0.3);
                for s in 0..20u64 {
                    let stream = RngStream::new(1000 + s).child(k as u64, (m * 10 + depth) as u64);
                    let half = build_tree(k, TreeKind::HalfSpace(depth)).unwrap();
                    let pot = Potential::sample(&p, &half, &stream);
                    let g = halfspace_green_finite(&p, &pot, e, depth).unwrap();
                    let d = dense_green(&p, &pot, &half, e, &[(0, 0)]).unwrap();
                    assert!(rel_err(&g, &d[0]) < 1e-9, "half-space K={k} m={m} depth={depth}");

                    let ball = build_tree(k, TreeKind::Ball(depth)).unwrap();
                    let pot = Potential::sample(&p, &ball, &stream);
                    let g = full_green_diag(&p, &pot, e, depth).unwrap();
                    let d = dense_green(&p, &pot, &ball, e, &[(0, 0)]).unwrap();
                    assert!(rel_err(&g, &d[0]) < 1e-9, "diagonal K={k} m={m} depth={depth}");

                    for r in 0..=depth {
                        let x = *ball.canonical_path(r).unwrap().last().unwrap();
                        let g = offdiag_green_path(&p, &pot, e, r, depth).unwrap();
                        let d = dense_green(&p, &pot, &ball, e, &[(0, x)]).unwrap();
                        assert!(rel_err(&g, &d[0]) < 1e-9, "path K={k} m={m} depth={depth} r={r}");
                    }
                }
            }
        }
    }
}

#[test]
fn path_on_ball_six_matches_dense() {
    let p = disordered(2, 2, 0.4);
    let ball = build_tree(2, TreeKind::Ball(6)).unwrap();
    let pot = Potential::sample(&p, &ball, &RngStream::new(42));
    let e = ComplexEnergy::new(-0.3, 0.05);
    let x3 = ball.canonical_path(3).unwrap()[3];
    let g = offdiag_green_path(&p, &pot, e, 3, 6).unwrap();
    let d = dense_green(&p, &pot, &ball, e, &[(0, x3)]).unwrap();
    assert!(rel_err(&g, &d[0]) < 1e-9);
    let g0 = offdiag_green_path(&p, &pot, e, 0, 6).unwrap();
    assert!(rel_err(&g0, &full_green_diag(&p, &pot, e, 6).unwrap()) < 1e-12);
}

#[test]
fn zero_potential_shortcut_matches_explicit_zero() {
    let p = free(3, diag(&[-0.2, 0.4]));
    let e = ComplexEnergy::new(0.1, 0.2);
    let depth = 4;
    let ball = build_tree(3, TreeKind::Ball(depth)).unwrap();
    let zeros = Potential::PerVertex(vec![bethe_lab::linalg::RMat::zeros(2, 2); ball.len()]);
    for r in 0..=depth {
        let a = offdiag_green_path(&p, &Potential::Zero, e, r, depth).unwrap();
        let b = offdiag_green_path(&p, &zeros, e, r, depth).unwrap();
        assert!(rel_err(&a, &b) < 1e-12);
    }
    let half = build_tree(3, TreeKind::HalfSpace(depth)).unwrap();
    let zeros = Potential::PerVertex(vec![bethe_lab::linalg::RMat::zeros(2, 2); half.len()]);
    let a = halfspace_green_finite(&p, &Potential::Zero, e, depth).unwrap();
    let b = halfspace_green_finite(&p, &zeros, e, depth).unwrap();
    assert!(rel_err(&a, &b) < 1e-12);
}

#[test]
fn path_product_scalar_closed_form() {
    let p = scalar_free(2);
    let e = ComplexEnergy::new(0.0, 0.1);
    let g = scalar(&halfspace_green_fixedpoint(&p, e).unwrap());
    let z = e.z();
    let g00 = 1.0 / (-z - 0.75 * g);
    let expected = (-0.5f64).powi(3) * g * g * g * g00;
    let got = scalar(&offdiag_green_path(&p, &Potential::Zero, e, 3, 2000).unwrap());
    assert!((got - expected).norm() < 1e-12 * expected.norm(), "{got} vs {expected}");
}

#[test]
fn symmetry_positivity_and_norm_bound() {
    let p = disordered(2, 2, 0.6);
    let ball = build_tree(2, TreeKind::Ball(4)).unwrap();
    for s in 0..100u64 {
        let eta = 0.05 + 0.01 * s as f64;
        let e = ComplexEnergy::new(-1.0 + 0.02 * s as f64, eta);
        let pot = Potential::sample(&p, &ball, &RngStream::new(s));
        let g = full_green_diag(&p, &pot, e, 4).unwrap();
        assert!(max_abs_diff(&g, &g.transpose()) < 1e-13);
        assert!(min_sym_eigenvalue(&green_imaginary(&g).unwrap()) > 0.0);
        if s % 10 == 0 {
            let pairs: Vec<(usize, usize)> = (0..ball.len()).step_by(5).map(|x| (0, x)).collect();
            for b in dense_green(&p, &pot, &ball, e, &pairs).unwrap() {
                assert!(op_norm(&b) <= 1.0 / eta * (1.0 + 1e-12));
            }
            let xy = dense_green(&p, &pot, &ball, e, &[(3, 17), (17, 3)]).unwrap();
            assert!(max_abs_diff(&xy[0], &xy[1].transpose()) < 1e-13);
        }
    }
}

#[test]
fn dense_green_at_unit_eta() {
    let p = disordered(3, 1, 1.0);
    let ball = build_tree(3, TreeKind::Ball(3)).unwrap();
    let pot = Potential::sample(&p, &ball, &RngStream::new(3));
    assert!(dense_green(&p, &pot, &ball, ComplexEnergy::new(0.0, 1.0), &[(0, 0)]).is_ok());
}

#[test]
fn fixed_point_examples() {
    let p = scalar_free(4);
    let g = halfspace_green_fixedpoint(&p, ComplexEnergy::new(0.0, 1e-8)).unwrap();
    assert!((scalar(&g) - I).norm() < 1e-6);

    let p = free(4, diag(&[-0.5, 0.5]));
    let e = ComplexEnergy::new(0.0, 1e-8);
    let g = halfspace_green_fixedpoint(&p, e).unwrap();
    let root = 15f64.sqrt() / 4.0;
    assert!((g[(0, 0)] - Complex64::new(-0.25, root)).norm() < 1e-6);
    assert!((g[(1, 1)] - Complex64::new(0.25, root)).norm() < 1e-6);
    assert!(g[(0, 1)].norm() < 1e-12);
    let mut base = complexify(&p.a);
    for k in 0..2 {
        base[(k, k)] -= e.z();
    }
    let rhs = invert(&(base - &g * Complex64::new(1.0, 0.0))).unwrap();
    assert!(max_abs_diff(&g, &rhs) < 1e-10);
}

#[test]
fn fixed_point_converges_monotonically_to_limit() {
    for (k, a) in [(2usize, diag(&[0.0])), (4, diag(&[-0.5, 0.5])), (3, diag(&[0.3, -0.2]))] {
        let p = free(k, a);
        let e = 0.2;
        let limit = minus_four_a_e(&p, e).unwrap();
        let mut last = f64::INFINITY;
        for j in 2..=8 {
            let eta = 10f64.powi(-j);
            let g = halfspace_green_fixedpoint(&p, ComplexEnergy::new(e, eta)).unwrap();
            let err = max_abs_diff(&g, &limit);
            assert!(err < last, "K={k} eta={eta}: {err} !< {last}");
            last = err;
        }
        assert!(last < 1e-6);
        let g0 = halfspace_green_fixedpoint(&p, ComplexEnergy::new(e, 0.0)).unwrap();
        assert!(max_abs_diff(&g0, &limit) < 1e-9);
    }
}

#[test]
fn fixed_point_guards() {
    let p = scalar_free(2);
    assert!(matches!(
        halfspace_green_fixedpoint(&p, ComplexEnergy::new(5.0, 0.0)),
        Err(bethe_lab::LabError::UnsupportedEnergy(_))
    ));
    assert!(minus_four_a_e(&p, 2.0).is_err());
    let q = disordered(2, 1, 0.3);
    assert!(halfspace_green_fixedpoint(&q, ComplexEnergy::new(0.0, 0.1)).is_err());
}

#[test]
fn finite_depth_approaches_fixed_point_at_moderate_eta() {
    let p = scalar_free(4);
    let e = ComplexEnergy::new(0.0, 0.05);
    let fp = halfspace_green_fixedpoint(&p, e).unwrap();
    let mut last = f64::INFINITY;
    for depth in [10usize, 50, 200, 800] {
        let g = halfspace_green_finite(&p, &Potential::Zero, e, depth).unwrap();
        let err = max_abs_diff(&g, &fp);
        assert!(err <= last);
        last = err;
    }
    assert!(last < 1e-10);
}

#[test]
fn green_json_shape() {
    let g = CMat::from_row_slice(1, 1, &[Complex64::new(0.5, -2.0)]);
    let j = serde_json::to_value(GreenJson::from(&g)).unwrap();
    assert_eq!(j, serde_json::json!({"re": [[0.5]], "im": [[-2.0]]}));
}

/// Root diagonal of the infinite λ = 0 tree: K + 1 copies of the half-space fixed point.
fn infinite_tree_diag(p: &bethe_lab::model::ModelParams, e: ComplexEnergy) -> CMat {
    let g = halfspace_green_fixedpoint(p, e).unwrap();
    invert(&(shifted(p, None, e.z()) - g * Complex64::new(0.25 * (p.k + 1) as f64, 0.0))).unwrap()
}

#[test]
fn infinite_tree_diagonal_matches_trace_formula() {
    for k in [2usize, 3, 4] {
        for a in [diag(&[0.0]), diag(&[-0.3, 0.2])] {
            let p = free(k, a.clone());
            let (lo, hi) = bethe_lab::model::spectral_interval(&p).unwrap();
            for frac in [0.2, 0.5, 0.8] {
                let e = lo + frac * (hi - lo);
                let g = infinite_tree_diag(&p, ComplexEnergy::new(e, 1e-9));
                let tr = bethe_lab::linalg::trace_abs2(&g);
                let kf = k as f64;
                let formula: f64 =
                    (0..p.m).map(|i| 4.0 * kf / ((kf + 1.0).powi(2) - 4.0 * (e - a[(i, i)]).powi(2))).sum();
                assert!((tr - formula).abs() < 1e-6 * formula, "K={k} E={e}: {tr} vs {formula}");
            }
        }
    }
    let g = infinite_tree_diag(&scalar_free(2), ComplexEnergy::new(0.0, 1e-6));
    assert!((scalar(&g).norm_sqr() - 8.0 / 9.0).abs() < 1e-3);
}

/// At E = 0 and η ≪ 1/depth the truncated recursion has not left its period-2
/// transient: the root value depends on the parity of the depth.
#[test]
fn truncated_recursion_at_tiny_eta_alternates_with_depth_parity() {
    let p = scalar_free(2);
    let e = ComplexEnergy::new(0.0, 1e-6);
    let even = scalar(&full_green_diag(&p, &Potential::Zero, e, 200).unwrap()).norm_sqr();
    let odd = scalar(&full_green_diag(&p, &Potential::Zero, e, 201).unwrap()).norm_sqr();
    assert!(even > 1e6 && odd < 1e-6, "{even} {odd}");
    let p = scalar_free(4);
    let e = ComplexEnergy::new(0.0, 1e-8);
    let g = scalar(&halfspace_green_finite(&p, &Potential::Zero, e, 200).unwrap());
    assert!((g - I).norm() > 1.0, "{g}");
    let fp = scalar(&halfspace_green_fixedpoint(&p, e).unwrap());
    assert!((fp - I).norm() < 1e-4);
}
