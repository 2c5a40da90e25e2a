//! Floating-point special functions: log-Gamma, beta, the Selberg integral and Gauss ₂F₁.

pub mod gamma;
pub mod hyp2f1;
pub mod selberg;

pub use gamma::{beta_value, beta_value_exact_int, exact_gamma_ratio, ln_gamma};
pub use hyp2f1::{gauss_2f1, gauss_2f1_deriv, hyp2f1_deriv_float, hyp2f1_float, HypParams};
pub use selberg::{selberg_log, selberg_quotient_exact, selberg_quotient_ln, selberg_ratio_exact, SelbergParams};
