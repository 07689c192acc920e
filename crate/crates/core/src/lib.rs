//! Largest root of F-type matrix pencils, Tracy–Widom laws, edge constants
//! and a Monte-Carlo harness for the two-sample covariance test.

// negated comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod edge;
pub mod ensembles;
pub mod error;
pub mod froots;
pub mod inference;
pub mod linalg;
pub mod mc;
pub mod quad;
pub mod tw;

pub use error::{Error, Result};
