//! Exact graded-slice computations for affine Kac-Moody self-extensions.

pub mod algebra;
pub mod chevalley;
pub mod deformation;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod loop_rep;
pub mod opers;
pub mod rational;
pub mod vertex;

pub use error::{Error, Result};
