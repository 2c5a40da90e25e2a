//! Independent ground truth: a quadrature oracle and a Monte Carlo matrix-model sampler
//! with a Kolmogorov–Smirnov gate.

pub mod ks;
pub mod quadrature;
pub mod sampler;
pub mod suite;

pub use ks::{empirical_gap, ks_bounds, ks_distance, ks_gate, ks_gate_bracketed, EmpiricalCDF, KsBounds, VerificationReport};
pub use quadrature::{quadrature_circular_gap, quadrature_gap, quadrature_gap_lower};
pub use sampler::{sample_cs_spectrum, sample_lambda_max, sample_lambda_min, CSModelParams};
pub use suite::run_suite;
