#![allow(dead_code)]

use ftw_core::ensembles::{sample_matrix, EntryDistribution, Seed};
use ftw_core::linalg::Matrix;

pub fn gaussian(rows: usize, cols: usize, base: u64, stream: u64) -> Matrix {
    sample_matrix(EntryDistribution::Gaussian, rows, cols, Seed::new(base, stream)).unwrap()
}

/// Dense row-major copy.
pub fn to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Sign of the determinant by Gaussian elimination with partial pivoting.
pub fn det_sign(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut sign = 1.0;
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        if a[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            a.swap(piv, k);
            sign = -sign;
        }
        if a[k][k] < 0.0 {
            sign = -sign;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot = &top[k];
        for row in rest {
            let f = row[k] / pivot[k];
            for (x, y) in row[k..].iter_mut().zip(&pivot[k..]) {
                *x -= f * y;
            }
        }
    }
    sign
}

fn pencil(lambda: f64, a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| lambda * x - y).collect())
        .collect()
}

/// Largest root of `det(λ A − B)` in `(lo, hi)`: scans a log-spaced grid
/// downward for the first sign change and bisects it to `1e-13` relative.
pub fn largest_root_oracle(a: &Matrix, b: &Matrix, lo: f64, hi: f64) -> f64 {
    let (a, b) = (to_rows(a), to_rows(b));
    let f = |l: f64| det_sign(pencil(l, &a, &b));
    let steps = 20000;
    let ratio = (hi / lo).powf(1.0 / steps as f64);
    let mut upper = hi;
    let mut s_upper = f(upper);
    for k in 1..=steps {
        let lower = hi / ratio.powi(k);
        let s_lower = f(lower);
        if s_lower != s_upper {
            let (mut l, mut u) = (lower, upper);
            while u - l > 1e-13 * u {
                let mid = 0.5 * (l + u);
                if f(mid) == s_upper {
                    u = mid;
                } else {
                    l = mid;
                }
            }
            return 0.5 * (l + u);
        }
        upper = lower;
        s_upper = s_lower;
    }
    panic!("no sign change of det(λA − B) in ({lo}, {hi})");
}

/// `A = Y Yᵀ/m̆`, `B = X Xᵀ/n̆` for factors `Y` (`p×m`) and `X` (`p×n`).
pub fn pencil_matrices(y: &Matrix, x: &Matrix) -> (Matrix, Matrix) {
    let (p, m, n) = (y.rows(), y.cols(), x.cols());
    let mb = m.max(p) as f64;
    let nb = n.min(m + n - p) as f64;
    (y.gram().scaled(1.0 / mb), x.gram().scaled(1.0 / nb))
}

/// Largest root of `det(θ (A + B) − B)` below the unit cluster.
pub fn beta_pencil_oracle(a: &Matrix, b: &Matrix) -> f64 {
    largest_root_oracle(&a.add(b), b, 1e-9, 1.0 - 1e-7)
}

/// Random orthogonal matrix from Gram–Schmidt on gaussian columns.
pub fn random_orthogonal(n: usize, base: u64) -> Matrix {
    let g = gaussian(n, n, base, 991);
    let mut q: Vec<Vec<f64>> = Vec::new();
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for u in &q {
                let d: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        q.push(v);
    }
    Matrix::from_rows(&q).unwrap().transpose()
}
