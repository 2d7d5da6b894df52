mod common;

use common::*;
use svd_update::baselines::*;
use svd_update::harness::max_principal_angle;
use svd_update::krylov::LanczosSettings;
use svd_update::update::{build_z_basic, rr_svd, UpdateOptions};
use svd_update::{Direction, SparseMatrix, TruncatedSvd, UpdateProblem};

fn rows(m: usize, n: usize, s: usize, k: usize, seed: u64) -> (SparseMatrix, SparseMatrix, TruncatedSvd) {
    let a = sparse_random(m + s, n, 0.4, seed);
    let (b, e) = a.split_rows(m).unwrap();
    let svd = TruncatedSvd::compute(&b, k, seed).unwrap();
    (b, e, svd)
}

#[test]
fn zha_simon_is_exact_for_rank_k_base() {
    let b = low_rank(24, 15, 4, 1);
    let e = sparse_random(5, 15, 0.5, 2);
    let svd = TruncatedSvd::compute(&b, 4, 0).unwrap();
    let p = UpdateProblem::new(&b, &svd, &e, Direction::Rows).unwrap();
    let out = zha_simon_rows(&p).unwrap();
    let full = oracle(&b.vstack(&e).unwrap().to_dense());
    assert!(max_rel_sigma_err(&out.s, &full.s[..4]) < 1e-9);
    assert!(max_principal_angle(&out.u, &full.u.columns(0..4)).unwrap() < 1e-6);
}

#[test]
fn zha_simon_cols_exact_for_rank_k_base() {
    let b = low_rank(15, 10, 4, 3);
    let e = sparse_random(15, 3, 0.5, 4);
    let svd = TruncatedSvd::compute(&b, 4, 0).unwrap();
    let p = UpdateProblem::new(&b, &svd, &e, Direction::Columns).unwrap();
    let out = zha_simon_cols(&p).unwrap();
    let full = oracle(&b.hstack(&e).unwrap().to_dense());
    assert!(max_rel_sigma_err(&out.s, &full.s[..4]) < 1e-9);
    assert!(zha_simon_rows(&p).is_err());
}

#[test]
fn zero_update_keeps_the_triplets() {
    let (b, _, svd) = rows(14, 9, 3, 3, 5);
    let zero = SparseMatrix::zeros(3, 9);
    let p = UpdateProblem::new(&b, &svd, &zero, Direction::Rows).unwrap();
    for out in [zha_simon_rows(&p).unwrap(), vecharynski_rows(&p, 2, 0).unwrap()] {
        assert!(max_rel_sigma_err(&out.s, &svd.s) < 1e-12);
        assert!(max_principal_angle(&out.v, &svd.v).unwrap() < 1e-8);
    }
    let zc = SparseMatrix::zeros(14, 2);
    let p = UpdateProblem::new(&b, &svd, &zc, Direction::Columns).unwrap();
    let out = zha_simon_cols(&p).unwrap();
    assert!(max_rel_sigma_err(&out.s, &svd.s) < 1e-12);
}

#[test]
fn transpose_symmetry() {
    let (b, e, svd) = rows(16, 10, 4, 3, 6);
    let p = UpdateProblem::new(&b, &svd, &e, Direction::Rows).unwrap();
    let r = zha_simon_rows(&p).unwrap();
    let (bt, et, st) = (b.transpose(), e.transpose(), svd.transpose());
    let q = UpdateProblem::new(&bt, &st, &et, Direction::Columns).unwrap();
    let c = zha_simon_cols(&q).unwrap();
    for (x, y) in r.s.iter().zip(&c.s) {
        assert!((x - y).abs() < 1e-10 * r.s[0]);
    }
    let vr = vecharynski_rows(&p, 4, 3).unwrap();
    let vc = vecharynski_cols(&q, 4, 3).unwrap();
    for (x, y) in vr.s.iter().zip(&vc.s) {
        assert!((x - y).abs() < 1e-10 * vr.s[0]);
    }
}

#[test]
fn sv_without_truncation_matches_zha_simon() {
    for seed in 0..4 {
        let (b, e, svd) = rows(30, 20, 6, 5, seed);
        let p = UpdateProblem::new(&b, &svd, &e, Direction::Rows).unwrap();
        let zs = zha_simon_rows(&p).unwrap();
        let sv = vecharynski_rows(&p, 6, seed).unwrap();
        for (x, y) in zs.s.iter().zip(&sv.s) {
            assert!((x - y).abs() <= 1e-8 * y);
        }
    }
}

#[test]
fn sv_truncation_never_helps() {
    for seed in 0..5 {
        let (b, e, svd) = rows(30, 20, 8, 5, seed + 10);
        let p = UpdateProblem::new(&b, &svd, &e, Direction::Rows).unwrap();
        let exact = oracle(&p.assembled().unwrap().to_dense()).s;
        let zs = max_rel_sigma_err(&zha_simon_rows(&p).unwrap().s, &exact[..5]);
        let sv = max_rel_sigma_err(&vecharynski_rows(&p, 4, seed).unwrap().s, &exact[..5]);
        assert!(sv >= zs - 1e-10, "seed {seed}: {sv} < {zs}");
    }
}

#[test]
fn projection_with_basic_basis_equals_zha_simon() {
    for seed in 0..5 {
        let (b, e, svd) = rows(30, 18, 6, 4, seed + 30);
        let p = UpdateProblem::new(&b, &svd, &e, Direction::Rows).unwrap();
        let z = build_z_basic(&svd, 6, Direction::Rows).unwrap();
        let opts = UpdateOptions {
            lanczos: LanczosSettings {
                tol: 1e-12,
                max_steps: Some(z.total_cols()),
                seed,
            },
            ..UpdateOptions::default()
        };
        let (rr, _) = rr_svd(&p, &z, &opts).unwrap();
        let zs = zha_simon_rows(&p).unwrap();
        assert!(max_rel_sigma_err(&rr.s, &zs.s) < 1e-8);
        assert!(max_principal_angle(&rr.u, &zs.u).unwrap() < 1e-5);
        assert!(max_principal_angle(&rr.v, &zs.v).unwrap() < 1e-5);
    }
}

#[test]
fn outputs_are_orthonormal() {
    let (b, e, svd) = rows(28, 16, 5, 4, 50);
    let p = UpdateProblem::new(&b, &svd, &e, Direction::Rows).unwrap();
    for out in [zha_simon_rows(&p).unwrap(), vecharynski_rows(&p, 3, 0).unwrap()] {
        assert!(out.u.orthonormality_error() < 1e-8);
        assert!(out.v.orthonormality_error() < 1e-8);
    }
    assert!(vecharynski_rows(&p, 0, 0).is_err());
    assert!(vecharynski_rows(&p, 6, 0).is_err());
}

#[test]
fn phase_flops_are_reported() {
    let (b, e, svd) = rows(40, 30, 3, 8, 60);
    let p = UpdateProblem::new(&b, &svd, &e, Direction::Rows).unwrap();
    let out = run_baseline(&p, BaselineChoice::ZhaSimon, 0).unwrap();
    assert!(out.flops_build_w > 0 && out.flops_solve > 0 && out.flops_other > 0);
    assert_eq!(out.w_extra, 3);
    let out = run_baseline(&p, BaselineChoice::VecharynskiSv { r: 2 }, 0).unwrap();
    assert!(out.w_extra <= 2);
}

#[test]
fn zha_simon_on_very_sparse_updates() {
    // updates with empty rows make the inner matrix rank deficient
    for (m, n, s, k, density, seed) in [(15, 10, 2, 1, 0.1, 800), (18, 11, 5, 4, 0.25, 803), (30, 15, 5, 1, 0.25, 815)] {
        let a = sparse_random(m + s, n, density, seed);
        let (b, e) = a.split_rows(m).unwrap();
        let svd = TruncatedSvd::compute(&b, k, 0).unwrap();
        let p = UpdateProblem::new(&b, &svd, &e, Direction::Rows).unwrap();
        let out = zha_simon_rows(&p).unwrap();
        assert!(out.u.orthonormality_error() < 1e-8);
        assert!(out.v.orthonormality_error() < 1e-8);
        let exact = oracle(&a.to_dense()).s;
        for (x, y) in out.s.iter().zip(&exact) {
            assert!(*x <= y + 1e-8);
        }
    }
}
