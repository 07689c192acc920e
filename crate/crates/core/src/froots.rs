//! Largest root of `det(λ A − B) = 0` with `A = Y Yᵀ/m̆`, `B = X Xᵀ/n̆`.
//!
//! When `p <= m` the pencil is reduced to a symmetric eigenproblem through
//! a Cholesky factor of `A`. When `p > m`, `A` is singular and the pencil is
//! first projected onto the range of `Y Yᵀ`, where the finite roots live.

use serde::{Deserialize, Serialize};

use crate::edge::DimensionTriple;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, projection_complement, sym_eigen, whiten, Matrix};

/// Relative threshold below which an eigenvalue of `Y Yᵀ` counts as zero.
const RANK_TOL: f64 = 1e-12;
/// Relative threshold below which a root is reported as zero.
const ZERO_ROOT_TOL: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PencilPath {
    Invertible,
    Reduced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilResult {
    pub lambda1: f64,
    pub path: PencilPath,
    /// Dimension of the symmetric problem that was solved.
    pub reduced_dim: usize,
    /// Nonzero roots, descending.
    pub all_nonzero_roots: Vec<f64>,
}

/// `Y` (`p×m`) and `X` (`p×n`) with their dimension triple.
#[derive(Debug, Clone)]
pub struct FactorPair {
    pub y: Matrix,
    pub x: Matrix,
    pub triple: DimensionTriple,
}

impl FactorPair {
    pub fn new(y: Matrix, x: Matrix) -> Result<Self> {
        if y.rows() != x.rows() {
            return Err(Error::DimensionMismatch(format!(
                "Y has {} rows but X has {}",
                y.rows(),
                x.rows()
            )));
        }
        let (p, m, n) = (y.rows(), y.cols(), x.cols());
        if p == 0 || m == 0 || n == 0 {
            return Err(Error::DimensionMismatch(format!(
                "empty factor (p, m, n) = ({p}, {m}, {n})"
            )));
        }
        if m + n <= p {
            return Err(Error::DegeneratePencil { p, sum: m + n });
        }
        if !y.is_finite() || !x.is_finite() {
            return Err(Error::NotFinite);
        }
        let triple = DimensionTriple::new(p, m, n)?;
        Ok(FactorPair { y, x, triple })
    }
}

pub fn largest_root(f: &FactorPair) -> Result<PencilResult> {
    let t = &f.triple;
    let mb = t.m_breve() as f64;
    let nb = t.n_breve() as f64;
    if t.is_invertible() {
        let a = f.y.gram().scaled(1.0 / mb);
        let b = f.x.gram().scaled(1.0 / nb);
        let l = cholesky(&a).map_err(|e| match e {
            Error::NotPositiveDefinite { .. } => {
                Error::NumericalRankLoss("Y Yᵀ is not numerically positive definite".into())
            }
            other => other,
        })?;
        return Ok(symmetric_result(whiten(&l, &b), PencilPath::Invertible));
    }
    reduced(f, mb, nb)
}

fn reduced(f: &FactorPair, mb: f64, nb: f64) -> Result<PencilResult> {
    let (p, m) = (f.triple.p, f.triple.m);
    let eig = sym_eigen(&f.y.gram().scaled(1.0 / mb))?;
    let d = &eig.values[..m];
    let d_max = d[0];
    let d_min = d[m - 1];
    if !(d_max > 0.0) || d_min < RANK_TOL * d_max {
        return Err(Error::NumericalRankLoss(format!(
            "Y Yᵀ eigenvalue {d_min:.3e} below {RANK_TOL:e} of the largest {d_max:.3e}"
        )));
    }
    let ut = eig.vectors.transpose();
    let row_block = |rows: std::ops::Range<usize>| {
        Matrix::from_fn(rows.len(), p, |i, j| ut[(rows.start + i, j)])
    };
    let u1 = row_block(0..m);
    let u2 = row_block(m..p);
    let xs = f.x.scaled(1.0 / nb.sqrt());
    let w = xs.transpose().matmul(&u2.transpose());
    let proj = projection_complement(&w).map_err(|e| match e {
        Error::RankDeficient | Error::NotPositiveDefinite { .. } => Error::NumericalRankLoss(
            "Xᵀ U2ᵀ is rank deficient; the projected pencil is degenerate".into(),
        ),
        other => other,
    })?;
    let mut g = u1.matmul(&xs);
    for (i, &di) in d.iter().enumerate() {
        let s = 1.0 / di.sqrt();
        g.row_mut(i).iter_mut().for_each(|v| *v *= s);
    }
    let mut core = g.matmul(&proj).matmul(&g.transpose());
    core.symmetrize();
    Ok(symmetric_result(core, PencilPath::Reduced))
}

fn symmetric_result(s: Matrix, path: PencilPath) -> PencilResult {
    let dim = s.rows();
    let values = sym_eigen(&s)
        .expect("symmetrized finite matrix")
        .values;
    let lambda1 = values[0];
    let floor = ZERO_ROOT_TOL * lambda1.abs();
    PencilResult {
        lambda1,
        path,
        reduced_dim: dim,
        all_nonzero_roots: values.into_iter().filter(|&v| v > floor).collect(),
    }
}

/// Largest root for explicit symmetric `A` (positive definite) and `B`.
pub fn largest_root_matrices(a: &Matrix, b: &Matrix) -> Result<PencilResult> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "A is {:?}, B is {:?}",
            a.shape(),
            b.shape()
        )));
    }
    for s in [a, b] {
        if !s.is_finite() {
            return Err(Error::NotFinite);
        }
        let asym = s.relative_asymmetry();
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
    }
    let l = cholesky(a)?;
    Ok(symmetric_result(whiten(&l, b), PencilPath::Invertible))
}

/// `λ/(1+λ)`: the matching root of `det(θ (A + B) − B) = 0`.
pub fn beta_transform(lambda1: f64) -> f64 {
    lambda1 / (1.0 + lambda1)
}
