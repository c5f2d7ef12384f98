mod common;

use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use symspace::matfun::{eigenvalues, mat_sqrt_principal};
use symspace::{d2exp, dexp, mat_exp, mat_log_principal, spectrum_check, sym_signature, thin_svd, Signature};

#[test]
fn exp_matches_power_series() {
    let mut r = rng(1);
    for _ in 0..50 {
        let a = with_norm(&mut r, 4, 1.0);
        let err = (mat_exp(&a).unwrap() - series_exp(&a, 30)).norm();
        assert!(err < 1e-12, "{err:e}");
    }
}

#[test]
fn exp_inverse_identity() {
    let mut r = rng(2);
    for norm in [0.1, 1.0, 5.0, 10.0] {
        for _ in 0..20 {
            let a = with_norm(&mut r, 5, norm);
            let e = mat_exp(&a).unwrap();
            let prod = &e * mat_exp(&-&a).unwrap();
            let err = (prod - DMatrix::identity(5, 5)).norm();
            assert!(err <= 1e-10 * e.norm(), "norm={norm} err={err:e}");
        }
    }
}

#[test]
fn log_of_exp_round_trip() {
    let mut r = rng(3);
    for _ in 0..100 {
        let norm = r.random_range(0.05..1.0);
        let x = with_norm(&mut r, 4, norm);
        let back = mat_log_principal(&mat_exp(&x).unwrap()).unwrap();
        assert!((back - &x).norm() < 1e-9);
    }
}

#[test]
fn log_reconstructs_and_has_principal_spectrum() {
    let mut r = rng(4);
    for _ in 0..50 {
        let a = DMatrix::identity(4, 4) + with_norm(&mut r, 4, 0.9);
        if spectrum_check(&a, 1e-10).has_negative_real_eigenvalue {
            continue;
        }
        let l = mat_log_principal(&a).unwrap();
        let rel = (mat_exp(&l).unwrap() - &a).norm() / a.norm();
        assert!(rel < 1e-10, "{rel:e}");
        for ev in eigenvalues(&l).iter() {
            assert!(ev.im.abs() < std::f64::consts::PI);
        }
    }
}

#[test]
fn sqrt_matches_eigendecomposition_on_spd() {
    let mut r = rng(5);
    for _ in 0..50 {
        let s = random_spd(&mut r, 5, 3.0).into_matrix();
        let root = mat_sqrt_principal(&s).unwrap();
        let oracle = eig_fn(&s, f64::sqrt);
        assert!((root - oracle).norm() < 1e-10);
    }
}

#[test]
fn sqrt_squares_back_and_agrees_with_half_log() {
    let mut r = rng(6);
    for _ in 0..50 {
        let a = DMatrix::identity(4, 4) + with_norm(&mut r, 4, 0.8);
        if spectrum_check(&a, 1e-10).has_negative_real_eigenvalue {
            continue;
        }
        let s = mat_sqrt_principal(&a).unwrap();
        assert!((&s * &s - &a).norm() < 1e-10 * a.norm());
        for ev in eigenvalues(&s).iter() {
            assert!(ev.re > 0.0);
        }
        let half = mat_exp(&(mat_log_principal(&a).unwrap() * 0.5)).unwrap();
        assert!((half - s).norm() < 1e-9);
    }
}

#[test]
fn dexp_matches_central_differences() {
    let mut r = rng(7);
    let h = 1e-5;
    for n in [3, 4] {
        for _ in 0..100 {
            let x = with_norm(&mut r, n, 1.0);
            let y = with_norm(&mut r, n, 1.0);
            let fd = (mat_exp(&(&x + &y * h)).unwrap() - mat_exp(&(&x - &y * h)).unwrap()) / (2.0 * h);
            let err = (dexp(&x, &y).unwrap() - fd).norm();
            assert!(err < 5e-8, "n={n} err={err:e}");
        }
    }
}

#[test]
fn dexp_commuting_pair() {
    let x = diag(&[0.3, -1.0, 2.0]);
    let y = diag(&[1.0, 2.0, -0.5]);
    let expect = mat_exp(&x).unwrap() * &y;
    assert!((dexp(&x, &y).unwrap() - expect).norm() < 1e-13);
}

#[test]
fn dexp_block_diagonal_consistency() {
    let mut r = rng(8);
    let x = with_norm(&mut r, 3, 1.5);
    let y = with_norm(&mut r, 3, 1.0);
    let mut block = DMatrix::zeros(6, 6);
    block.view_mut((0, 0), (3, 3)).copy_from(&x);
    block.view_mut((3, 3), (3, 3)).copy_from(&x);
    block.view_mut((0, 3), (3, 3)).copy_from(&y);
    let e = mat_exp(&block).unwrap();
    let ex = mat_exp(&x).unwrap();
    assert!((e.view((0, 0), (3, 3)) - &ex).norm() < 1e-12);
    assert!((e.view((3, 3), (3, 3)) - &ex).norm() < 1e-12);
}

#[test]
fn d2exp_matches_mixed_differences() {
    let mut r = rng(9);
    let h = 1e-4;
    for n in [3, 4] {
        for _ in 0..100 {
            let [x, y, z, w] = [0; 4].map(|_| with_norm(&mut r, n, 1.0));
            let f = |s: f64, t: f64| mat_exp(&(&x + &y * t + &z * s + &w * (s * t))).unwrap();
            let fd = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
            let err = (d2exp(&x, &y, &z, &w).unwrap() - fd).norm();
            assert!(err < 1e-5, "n={n} err={err:e}");
        }
    }
}

#[test]
fn d2exp_without_first_order_terms_is_dexp() {
    let mut r = rng(10);
    let x = with_norm(&mut r, 3, 1.0);
    let w = with_norm(&mut r, 3, 1.0);
    let zero = DMatrix::zeros(3, 3);
    let a = d2exp(&x, &zero, &zero, &w).unwrap();
    assert!((a - dexp(&x, &w).unwrap()).norm() < 1e-12);
}

#[test]
fn svd_reconstruction() {
    let mut r = rng(11);
    for _ in 0..50 {
        let a = gaussian(&mut r, 6, 2);
        let svd = thin_svd(&a).unwrap();
        assert!((svd.reconstruct() - &a).norm() <= 1e-12 * a.norm());
        assert!((svd.u.tr_mul(&svd.u) - DMatrix::identity(2, 2)).amax() < 1e-12);
        assert!(svd.sigma[0] >= svd.sigma[1] && svd.sigma[1] >= 0.0);
    }
}

#[test]
fn svd_of_rank_deficient_input() {
    let mut r = rng(13);
    for (n, p, rank) in [(6, 5, 1), (7, 5, 2), (4, 4, 2), (9, 8, 3), (3, 3, 0)] {
        let a = gaussian(&mut r, n, rank.max(1)) * gaussian(&mut r, rank.max(1), p) * if rank == 0 { 0.0 } else { 1.0 };
        let svd = thin_svd(&a).unwrap();
        assert!((svd.reconstruct() - &a).norm() <= 1e-12 * a.norm().max(1.0));
        assert!((svd.u.tr_mul(&svd.u) - DMatrix::identity(p, p)).amax() < 1e-12);
        assert!((svd.v.tr_mul(&svd.v) - DMatrix::identity(p, p)).amax() < 1e-12);
        // Frobenius norm is the 2-norm of the singular values.
        assert!((svd.sigma.norm() - a.norm()).abs() <= 1e-12 * a.norm().max(1.0));
        for j in rank..p {
            assert!(svd.sigma[j] <= 1e-12 * a.norm().max(1.0));
        }
    }
}

#[test]
fn log_of_near_identity_with_clustered_spectrum() {
    // Rounding residue of a converged mean; defeats QR deflation at exactly ε.
    let v = [
        1.0000000000000002,
        2.7755575615628914e-17,
        3.469446951953614e-17,
        -5.551115123125783e-17,
        5.551115123125783e-17,
        1.0000000000000002,
        2.7755575615628914e-17,
        -4.440892098500626e-16,
        -4.163336342344337e-17,
        -1.3877787807814457e-17,
        1.0000000000000002,
        -2.7755575615628914e-17,
        1.1102230246251565e-16,
        1.1102230246251565e-16,
        0.0,
        0.9999999999999997,
    ];
    let a = DMatrix::from_column_slice(4, 4, &v);
    for ev in eigenvalues(&a).iter() {
        assert!((ev - nalgebra::Complex::new(1.0, 0.0)).norm() < 1e-12);
    }
    let l = mat_log_principal(&a).unwrap();
    assert!(l.norm() < 1e-14);
}

#[test]
fn spectrum_of_quarter_rotation_is_off_axis() {
    let rot = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    assert!(!spectrum_check(&rot, 1e-12).has_negative_real_eigenvalue);
}

#[test]
fn sylvester_law_of_inertia() {
    let mut r = rng(12);
    let s = diag(&[-2.0, -0.5, 1.0, 3.0]);
    for _ in 0..100 {
        let q = gaussian(&mut r, 4, 4);
        let c = &q * &s * q.transpose();
        match sym_signature(&c) {
            Ok(sig) => assert_eq!(sig, Signature::new(2, 2)),
            Err(e) => assert_eq!(e.kind(), "degenerate-signature"),
        }
    }
}

fn small_matrix(n: usize, scale: f64) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0..1.0f64, n * n).prop_map(move |v| DMatrix::from_vec(n, n, v) * scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_log_exp_round_trip(x in small_matrix(4, 0.45)) {
        // ‖X‖_F ≤ 0.45·4 < 2
        let e = mat_exp(&x).unwrap();
        prop_assume!(!spectrum_check(&e, 1e-10).has_negative_real_eigenvalue);
        let back = mat_log_principal(&e).unwrap();
        prop_assert!((back - &x).norm() < 1e-9);
    }

    #[test]
    fn prop_d2exp_symmetric_in_mixed_directions(
        x in small_matrix(3, 0.5), y in small_matrix(3, 0.5),
        z in small_matrix(3, 0.5), w in small_matrix(3, 0.5),
    ) {
        let a = d2exp(&x, &y, &z, &w).unwrap();
        let b = d2exp(&x, &z, &y, &w).unwrap();
        prop_assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn prop_sqrt_squares(x in small_matrix(3, 0.3)) {
        let a = DMatrix::identity(3, 3) + x;
        let s = mat_sqrt_principal(&a).unwrap();
        prop_assert!((&s * &s - &a).norm() < 1e-10 * a.norm());
    }
}
