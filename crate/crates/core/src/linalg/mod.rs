//! Dense real linear algebra used throughout the crate.

mod csv;
mod eigen;
mod factor;
mod matrix;

pub use self::csv::{read_matrix, read_matrix_file, write_matrix};
pub use eigen::{sym_eigen, sym_eigenvalues, SymEigen};
pub use factor::{cholesky, det, lu_log_det, projection_complement, solve_lower, whiten};
pub use matrix::Matrix;
