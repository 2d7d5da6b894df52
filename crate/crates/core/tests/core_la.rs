mod common;

use common::*;
use svd_update::krylov::LinearOperator;
use svd_update::mm::{read_matrix_market, read_triplets, write_matrix_market};
use svd_update::{flops, DenseMatrix, Error, SparseMatrix};

#[test]
fn coo_empty_and_duplicates() {
    let e = SparseMatrix::from_coo(&[], 2, 2).unwrap();
    assert_eq!((e.nrows(), e.ncols(), e.nnz()), (2, 2, 0));
    let d = SparseMatrix::from_coo(&[(0, 0, 1.0), (0, 0, 2.0)], 1, 1).unwrap();
    assert_eq!(d.nnz(), 1);
    assert_eq!(d.values(), &[3.0]);
}

#[test]
fn coo_drops_cancelled_entries_and_sorts() {
    let a = SparseMatrix::from_coo(&[(1, 2, 1.0), (0, 1, 4.0), (1, 0, 2.0), (1, 2, -1.0)], 2, 3).unwrap();
    assert_eq!(a.nnz(), 2);
    assert_eq!(a.row_ptr(), &[0, 1, 2]);
    assert_eq!(a.col_idx(), &[1, 0]);
}

#[test]
fn coo_rejects_out_of_range() {
    let err = SparseMatrix::from_coo(&[(2, 0, 1.0)], 2, 2).unwrap_err();
    assert!(matches!(err, Error::IndexOutOfRange { row: 2, col: 0, .. }));
}

#[test]
fn matvec_identity_zero_and_random() {
    let i3 = SparseMatrix::identity(3);
    assert_eq!(i3.matvec(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    let a = sparse_random(5, 4, 0.6, 11);
    assert_eq!(a.matvec(&[0.0; 4]).unwrap(), vec![0.0; 5]);
    let x = gaussian(4, 1, 2).into_data();
    let y = a.matvec(&x).unwrap();
    assert!(rel_diff(&y, &brute_matvec(&a.to_dense(), &x)) < 1e-12);
    assert!(matches!(a.matvec(&[1.0]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn rmatvec_identity_ones_and_random() {
    let i3 = SparseMatrix::identity(3);
    assert_eq!(i3.rmatvec(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    let ones = SparseMatrix::from_dense(&DenseMatrix::from_fn(2, 3, |_, _| 1.0));
    assert_eq!(ones.rmatvec(&[1.0, 1.0]).unwrap(), vec![2.0, 2.0, 2.0]);
    let a = sparse_random(6, 4, 0.5, 5);
    let y = gaussian(6, 1, 9).into_data();
    let x = a.rmatvec(&y).unwrap();
    assert!(rel_diff(&x, &brute_matvec(&a.to_dense().transpose(), &y)) < 1e-12);
    assert!(a.rmatvec(&[1.0; 4]).is_err());
}

#[test]
fn matvec_counts_two_flops_per_nonzero() {
    let a = sparse_random(7, 9, 0.4, 3);
    let x = vec![1.0; 9];
    let (_, f) = flops::measure(|| a.matvec(&x).unwrap());
    assert_eq!(f, 2 * a.nnz() as u64);
    let (_, f) = flops::measure(|| a.rmatvec(&[1.0; 7]).unwrap());
    assert_eq!(f, 2 * a.nnz() as u64);
}

#[test]
fn adjoint_consistency() {
    for seed in 0..5 {
        let a = sparse_random(12, 8, 0.3, seed);
        assert!(svd_update::krylov::adjoint_mismatch(&a, seed) < 1e-12);
        let x = gaussian(8, 1, seed).into_data();
        let y = gaussian(12, 1, seed + 100).into_data();
        let lhs: f64 = y.iter().zip(a.apply(&x)).map(|(p, q)| p * q).sum();
        let rhs: f64 = a.apply_adjoint(&y).iter().zip(&x).map(|(p, q)| p * q).sum();
        assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }
}

#[test]
fn split_rows_partitions_and_conserves() {
    let a = sparse_random(4, 3, 0.7, 1);
    let (top, bottom) = a.split_rows(2).unwrap();
    assert_eq!(top.shape(), (2, 3));
    assert_eq!(bottom.shape(), (2, 3));
    assert_eq!(top.vstack(&bottom).unwrap(), a);
    assert_eq!(top.nnz() + bottom.nnz(), a.nnz());
    assert!(matches!(a.split_rows(0), Err(Error::IndexOutOfRange { .. })));
    assert!(matches!(a.split_rows(4), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn half_split_of_a_tall_matrix() {
    let m = 5735usize;
    let a = SparseMatrix::from_coo(&[(0, 0, 1.0), (m - 1, 2, 1.0)], m, 3).unwrap();
    let (b, e) = a.split_rows(m.div_ceil(2)).unwrap();
    assert_eq!(b.nrows(), 2868);
    assert_eq!(e.nrows(), m - 2868);
}

#[test]
fn split_cols_and_hstack() {
    let a = sparse_random(5, 6, 0.5, 8);
    let (l, r) = a.split_cols(4).unwrap();
    assert_eq!(l.hstack(&r).unwrap(), a);
}

#[test]
fn matrix_market_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("eye.mtx");
    std::fs::write(&p, "%%MatrixMarket matrix coordinate real general\n% comment\n2 2 2\n1 1 1.0\n2 2 1.0\n").unwrap();
    let a = read_matrix_market(&p).unwrap();
    assert_eq!(a.nnz(), 2);
    assert_eq!(a.values(), &[1.0, 1.0]);

    let empty = dir.path().join("empty.mtx");
    std::fs::write(&empty, "%%MatrixMarket matrix coordinate real general\n3 4 0\n").unwrap();
    let e = read_matrix_market(&empty).unwrap();
    assert_eq!((e.shape(), e.nnz()), ((3, 4), 0));

    let pat = dir.path().join("pat.mtx");
    std::fs::write(&pat, "%%MatrixMarket matrix coordinate pattern general\n2 3 2\n1 3\n2 1\n").unwrap();
    assert_eq!(read_matrix_market(&pat).unwrap().to_dense()[(0, 2)], 1.0);

    let int = dir.path().join("int.mtx");
    std::fs::write(&int, "%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 7\n").unwrap();
    assert_eq!(read_matrix_market(&int).unwrap().values(), &[7.0]);

    let sym = dir.path().join("sym.mtx");
    std::fs::write(&sym, "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 1\n").unwrap();
    assert!(matches!(read_matrix_market(&sym), Err(Error::UnsupportedFormat(_))));
    let cplx = dir.path().join("c.mtx");
    std::fs::write(&cplx, "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n").unwrap();
    assert!(matches!(read_matrix_market(&cplx), Err(Error::UnsupportedFormat(_))));

    let bad = dir.path().join("bad.mtx");
    std::fs::write(&bad, "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 x 2.0\n").unwrap();
    match read_matrix_market(&bad) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("expected a parse error, got {other:?}"),
    }

    let missing = dir.path().join("nope.mtx");
    let err = read_matrix_market(&missing).unwrap_err();
    assert!(err.to_string().contains("nope.mtx"));
}

#[test]
fn matrix_market_roundtrip_and_triplets() {
    let dir = tempfile::tempdir().unwrap();
    let a = sparse_random(9, 7, 0.3, 4);
    let p = dir.path().join("a.mtx");
    write_matrix_market(&p, &a).unwrap();
    assert_eq!(read_matrix_market(&p).unwrap(), a);

    let raw = dir.path().join("ratings.dat");
    std::fs::write(&raw, "1::2::5::978300760\n2::1::3::978302109\n").unwrap();
    let r = read_triplets(&raw).unwrap();
    assert_eq!(r.shape(), (2, 2));
    assert_eq!(r.to_dense()[(0, 1)], 5.0);
}
