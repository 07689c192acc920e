mod common;

use common::{gaussian, random_orthogonal};
use ftw_core::error::Error;
use ftw_core::linalg::{
    cholesky, det, projection_complement, read_matrix, sym_eigen, sym_eigenvalues, write_matrix,
    Matrix,
};
use proptest::prelude::*;

fn symmetric(n: usize, seed: u64) -> Matrix {
    let g = gaussian(n, n, seed, 0);
    let mut s = g.add(&g.transpose());
    s.symmetrize();
    s
}

fn orthogonality_defect(q: &Matrix) -> f64 {
    q.transpose().matmul(q).sub(&Matrix::identity(q.cols())).frobenius()
}

#[test]
fn eigen_residual_50() {
    let s = symmetric(50, 1);
    let e = sym_eigen(&s).unwrap();
    assert!(e.reconstruct().sub(&s).frobenius() <= 1e-9 * (1.0 + s.frobenius()));
    assert!(orthogonality_defect(&e.vectors) <= 1e-9 * 50.0);
    assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn eigen_hand_cases() {
    let e = sym_eigen(&Matrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
    assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
    for j in 0..3 {
        let col = e.vectors.column(j);
        assert_eq!(col.iter().filter(|v| v.abs() == 1.0).count(), 1);
    }
    let v = sym_eigenvalues(&Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap()).unwrap();
    assert!((v[0] - 3.0).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
}

#[test]
fn eigen_rejects_bad_input() {
    let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
    assert!(matches!(sym_eigen(&a), Err(Error::NotSymmetric(_))));
    assert!(matches!(sym_eigen(&Matrix::zeros(2, 3)), Err(Error::DimensionMismatch(_))));
    assert!(Matrix::from_vec(1, 1, vec![f64::NAN]).is_err());
}

#[test]
fn cholesky_hand_and_residual() {
    let a = Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
    let l = cholesky(&a).unwrap();
    let want = [2.0, 0.0, 1.0, 2f64.sqrt()];
    for (x, y) in l.as_slice().iter().zip(want) {
        assert!((x - y).abs() < 1e-15);
    }
    assert_eq!(cholesky(&Matrix::identity(3)).unwrap(), Matrix::identity(3));
    let g = gaussian(30, 30, 2, 0);
    let s = g.transpose().matmul(&g).add(&Matrix::identity(30));
    let l = cholesky(&s).unwrap();
    assert!(l.matmul(&l.transpose()).sub(&s).frobenius() <= 1e-10 * s.frobenius());
    assert!(matches!(
        cholesky(&Matrix::from_diag(&[1.0, -1.0])),
        Err(Error::NotPositiveDefinite { pivot: 1 })
    ));
}

#[test]
fn projection_cases() {
    let e1 = Matrix::from_rows(&[vec![1.0], vec![0.0], vec![0.0]]).unwrap();
    let p = projection_complement(&e1).unwrap();
    assert!(p.sub(&Matrix::from_diag(&[0.0, 1.0, 1.0])).frobenius() < 1e-15);
    let p = projection_complement(&Matrix::identity(4)).unwrap();
    assert!(p.frobenius() < 1e-14);
    let w = gaussian(20, 8, 3, 0);
    let p = projection_complement(&w).unwrap();
    assert!((p.trace() - 12.0).abs() < 1e-8);
    assert!(p.matmul(&w).frobenius() < 1e-10 * w.frobenius());
    let mut w = gaussian(6, 3, 3, 1);
    for i in 0..6 {
        w[(i, 2)] = 2.0 * w[(i, 0)];
    }
    assert!(matches!(projection_complement(&w), Err(Error::RankDeficient)));
}

#[test]
fn determinant_values() {
    let a = Matrix::from_rows(&[vec![0.0, 2.0], vec![3.0, 1.0]]).unwrap();
    assert!((det(&a) + 6.0).abs() < 1e-14);
    assert_eq!(det(&Matrix::zeros(3, 3)), 0.0);
}

#[test]
fn csv_round_trip() {
    let m = gaussian(7, 4, 9, 0);
    let mut buf = Vec::new();
    write_matrix(&mut buf, &m).unwrap();
    let back = read_matrix(&buf[..], false).unwrap();
    assert_eq!(back, m);
    let text = "a,b\n1,2\n# note\n3, 4\n";
    let r = read_matrix(text.as_bytes(), true).unwrap();
    assert_eq!(r.as_slice(), &[1.0, 2.0, 3.0, 4.0]);
    assert!(read_matrix("1,2\n3\n".as_bytes(), false).is_err());
    assert!(read_matrix("1,x\n".as_bytes(), false).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn eigen_reconstructs(n in 1usize..25, seed in 0u64..10_000) {
        let s = symmetric(n, seed);
        let e = sym_eigen(&s).unwrap();
        prop_assert!(e.reconstruct().sub(&s).frobenius() <= 1e-9 * (1.0 + s.frobenius()));
        prop_assert!(orthogonality_defect(&e.vectors) <= 1e-9 * n as f64);
    }

    #[test]
    fn eigen_similarity_invariant(n in 2usize..15, seed in 0u64..10_000) {
        let s = symmetric(n, seed);
        let q = random_orthogonal(n, seed + 1);
        let mut r = q.matmul(&s).matmul(&q.transpose());
        r.symmetrize();
        let (a, b) = (sym_eigenvalues(&s).unwrap(), sym_eigenvalues(&r).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-8 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn cholesky_recovers_factor(n in 1usize..15, seed in 0u64..10_000) {
        let mut l = gaussian(n, n, seed, 2);
        for i in 0..n {
            for j in i + 1..n {
                l[(i, j)] = 0.0;
            }
            l[(i, i)] = l[(i, i)].abs() + 0.5;
        }
        let got = cholesky(&l.gram()).unwrap();
        prop_assert!(got.sub(&l).frobenius() <= 1e-9 * (1.0 + l.frobenius()));
    }

    #[test]
    fn projection_is_idempotent(rows in 2usize..20, frac in 0.1f64..0.9, seed in 0u64..10_000) {
        let cols = ((rows as f64 * frac) as usize).max(1);
        let w = gaussian(rows, cols, seed, 3);
        let p = projection_complement(&w).unwrap();
        prop_assert!(p.matmul(&p).sub(&p).frobenius() <= 1e-10 * rows as f64);
        prop_assert!((p.trace() - (rows - cols) as f64).abs() <= 1e-8);
        for v in sym_eigenvalues(&p).unwrap() {
            prop_assert!(v.abs() <= 1e-7 || (v - 1.0).abs() <= 1e-7);
        }
    }
}
