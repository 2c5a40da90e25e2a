//! Exact recursive computation of extreme-eigenvalue distributions for the β-Jacobi
//! ensemble, plus the β-circular gap probability and an independent verification harness.

pub mod error;
pub mod exact;
pub mod circular;
pub mod cli;
pub mod gap;
pub mod recurrence;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
