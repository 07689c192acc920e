use super::Matrix;
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor `L` with `S = L L^T` and positive diagonal.
pub fn cholesky(s: &Matrix) -> Result<Matrix> {
    cholesky_with_floor(s, 0.0)
}

/// Cholesky that also fails when a pivot drops below `rel_floor * S_jj`.
pub(crate) fn cholesky_with_floor(s: &Matrix, rel_floor: f64) -> Result<Matrix> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch("Cholesky needs a square matrix".into()));
    }
    if !s.is_finite() {
        return Err(Error::NotFinite);
    }
    let n = s.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut diag = s[(j, j)];
        for k in 0..j {
            diag -= l[(j, k)] * l[(j, k)];
        }
        if diag <= rel_floor * s[(j, j)] || diag <= 0.0 || !diag.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let ljj = diag.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut v = s[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / ljj;
        }
    }
    Ok(l)
}

/// Solves `L X = B` for lower-triangular `L`.
pub fn solve_lower(l: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(l.rows(), b.rows());
    let n = l.rows();
    let mut x = b.clone();
    for j in 0..b.cols() {
        for i in 0..n {
            let mut v = x[(i, j)];
            for k in 0..i {
                v -= l[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = v / l[(i, i)];
        }
    }
    x
}

/// `L^{-1} S L^{-T}` for a symmetric `S`, symmetrized.
pub fn whiten(l: &Matrix, s: &Matrix) -> Matrix {
    let half = solve_lower(l, s); // L^{-1} S
    let mut out = solve_lower(l, &half.transpose()); // L^{-1} (L^{-1} S)^T
    out.symmetrize();
    out
}

/// Relative pivot floor below which `W^T W` counts as singular.
const RANK_FLOOR: f64 = 1e-13;

/// Orthogonal projector onto the complement of the column space of `w`:
/// `I - W (W^T W)^{-1} W^T`.
pub fn projection_complement(w: &Matrix) -> Result<Matrix> {
    let (n, k) = w.shape();
    if k > n {
        return Err(Error::RankDeficient);
    }
    let wt = w.transpose();
    let l = cholesky_with_floor(&wt.gram(), RANK_FLOOR).map_err(|e| match e {
        Error::NotPositiveDefinite { .. } => Error::RankDeficient,
        other => other,
    })?;
    // rows of Q^T = L^{-1} W^T are orthonormal
    let qt = solve_lower(&l, &wt);
    let mut p = Matrix::identity(n);
    for i in 0..n {
        for j in 0..=i {
            let v: f64 = (0..k).map(|r| qt[(r, i)] * qt[(r, j)]).sum();
            p[(i, j)] -= v;
            if i != j {
                p[(j, i)] -= v;
            }
        }
    }
    Ok(p)
}

/// Sign and log-magnitude of the determinant via LU with partial pivoting.
pub fn lu_log_det(a: &Matrix) -> (f64, f64) {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for k in 0..n {
        let (piv, piv_abs) = (k..n)
            .map(|i| (i, m[(i, k)].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_abs == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        if piv != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(piv, j)];
                m[(piv, j)] = t;
            }
            sign = -sign;
        }
        let pivot = m[(k, k)];
        if pivot < 0.0 {
            sign = -sign;
        }
        log_abs += pivot.abs().ln();
        for i in k + 1..n {
            let factor = m[(i, k)] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in k + 1..n {
                m[(i, j)] -= factor * m[(k, j)];
            }
        }
    }
    (sign, log_abs)
}

/// Determinant via LU with partial pivoting.
pub fn det(a: &Matrix) -> f64 {
    let (sign, log_abs) = lu_log_det(a);
    sign * log_abs.exp()
}
