mod common;

use common::*;
use proptest::prelude::*;
use svd_update::kernels::{jacobi_svd, mgs_qr};
use svd_update::krylov::{adjoint_mismatch, gkl_bidiagonalize, SparseView, Stacked, XLambdaSettings};
use svd_update::update::{build_z_basic, build_z_enhanced, rr_svd, UpdateOptions};
use svd_update::{Direction, TruncatedSvd, UpdateProblem};

fn small_config() -> ProptestConfig {
    ProptestConfig {
        cases: 32,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(small_config())]

    #[test]
    fn sparse_adjoint_is_consistent(m in 1usize..30, n in 1usize..30, d in 0.05f64..0.9, seed in any::<u64>()) {
        let a = sparse_random(m, n, d, seed);
        prop_assert!(adjoint_mismatch(&a, seed) < 1e-12);
        prop_assert!(adjoint_mismatch(&SparseView::transposed(&a), seed) < 1e-12);
    }

    #[test]
    fn stacked_adjoint_is_consistent(m in 1usize..20, s in 1usize..10, n in 1usize..20, seed in any::<u64>()) {
        let b = sparse_random(m, n, 0.4, seed);
        let e = sparse_random(s, n, 0.4, seed ^ 7);
        let op = Stacked::rows(SparseView::new(&b), SparseView::new(&e)).unwrap();
        prop_assert!(adjoint_mismatch(&op, seed) < 1e-12);
    }

    #[test]
    fn split_then_stack_roundtrips(m in 2usize..30, n in 1usize..20, at in 1usize..29, seed in any::<u64>()) {
        prop_assume!(at < m);
        let a = sparse_random(m, n, 0.3, seed);
        let (top, bottom) = a.split_rows(at).unwrap();
        prop_assert_eq!(top.vstack(&bottom).unwrap(), a.clone());
        let t = a.transpose();
        prop_assert_eq!(t.transpose(), a);
    }

    #[test]
    fn matvec_agrees_with_dense(m in 1usize..25, n in 1usize..25, seed in any::<u64>()) {
        let a = sparse_random(m, n, 0.3, seed);
        let x = gaussian(n, 1, seed ^ 1).into_data();
        let y = gaussian(m, 1, seed ^ 2).into_data();
        let d = a.to_dense();
        prop_assert!(rel_diff(&a.matvec(&x).unwrap(), &brute_matvec(&d, &x)) < 1e-12);
        prop_assert!(rel_diff(&a.rmatvec(&y).unwrap(), &brute_matvec(&d.transpose(), &y)) < 1e-12);
    }

    #[test]
    fn qr_and_svd_factor_their_input(m in 1usize..15, n in 1usize..15, seed in any::<u64>()) {
        let a = gaussian(m, n, seed);
        let f = mgs_qr(&a);
        prop_assert!(f.q.orthonormality_error() < 1e-10);
        prop_assert!(f.q.matmul(&f.r).sub(&a).frobenius_norm() < 1e-10 * a.frobenius_norm().max(1.0));
        let s = jacobi_svd(&a).unwrap();
        prop_assert!(s.u.orthonormality_error() < 1e-10);
        prop_assert!(s.v.orthonormality_error() < 1e-10);
        prop_assert!(s.reconstruct().sub(&a).frobenius_norm() < 1e-10 * a.frobenius_norm().max(1.0));
        prop_assert!(s.s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn gkl_full_length_recovers_the_spectrum(m in 2usize..20, n in 2usize..20, seed in any::<u64>()) {
        let a = dense_random(m, n, seed);
        let steps = m.min(n);
        let f = gkl_bidiagonalize(&a, steps, seed).unwrap();
        let r = f.ritz(steps).unwrap();
        let exact = oracle(&a.to_dense()).s;
        for (x, y) in r.s.iter().zip(&exact) {
            prop_assert!((x - y).abs() < 1e-9 * exact[0]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn rayleigh_ritz_invariants(m in 8usize..30, n in 6usize..20, s in 1usize..8, k in 1usize..5, seed in any::<u64>()) {
        prop_assume!(k < n.min(m));
        let a = sparse_random(m + s, n, 0.4, seed);
        let (b, e) = a.split_rows(m).unwrap();
        let svd = TruncatedSvd::compute(&b, k, seed).unwrap();
        let p = UpdateProblem::new(&b, &svd, &e, Direction::Rows).unwrap();
        let fb = oracle(&b.to_dense());
        let sk1 = fb.s.get(k).copied().unwrap_or(0.0);
        let exact = oracle(&a.to_dense()).s;
        let lambda = 1.01 * fb.s[0] * fb.s[0];

        let zb = build_z_basic(&svd, s, Direction::Rows).unwrap();
        let (basic, _) = rr_svd(&p, &zb, &UpdateOptions::default()).unwrap();
        let r = k.min(s);
        let ze = build_z_enhanced(&p, lambda, &XLambdaSettings::new(r, k, seed)).unwrap();
        let (enh, _) = rr_svd(&p, &ze, &UpdateOptions::default()).unwrap();

        for out in [&basic, &enh] {
            prop_assert!(out.u.orthonormality_error() < 1e-8);
            for (i, sv) in out.s.iter().enumerate() {
                prop_assert!(*sv >= sk1 - 1e-8);
                prop_assert!(*sv <= exact[i] + 1e-8);
            }
        }
        let kk = basic.k().min(enh.k());
        let eb = max_rel_sigma_err(&basic.s[..kk], &exact[..kk]);
        let ee = max_rel_sigma_err(&enh.s[..kk], &exact[..kk]);
        prop_assert!(ee <= eb + 1e-12, "enhanced {} > basic {}", ee, eb);
    }

    #[test]
    fn updates_are_deterministic(seed in any::<u64>()) {
        let a = sparse_random(24, 14, 0.4, seed);
        let (b, e) = a.split_rows(18).unwrap();
        let svd = TruncatedSvd::compute(&b, 3, seed).unwrap();
        let p = UpdateProblem::new(&b, &svd, &e, Direction::Rows).unwrap();
        let lambda = 1.01 * oracle(&b.to_dense()).s[0].powi(2);
        let run = || {
            let z = build_z_enhanced(&p, lambda, &XLambdaSettings::new(3, 3, seed)).unwrap();
            rr_svd(&p, &z, &UpdateOptions::default()).unwrap().0
        };
        let (x, y) = (run(), run());
        prop_assert_eq!(x.s, y.s);
        prop_assert_eq!(x.u, y.u);
        prop_assert_eq!(x.v, y.v);
    }
}
