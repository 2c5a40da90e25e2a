//! Exact arithmetic shared by every recursion.

pub mod field;
pub mod laurent;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod series;

pub use field::Field;
pub use laurent::{ComplexQ, MuLaurent};
pub use poly::{Poly, Var};
pub use ratfunc::RatFunc;
pub use scalar::{parse_scalar, q, qi, scalar_to_string, Scalar};
pub use series::{LambdaSeries, SeriesKey};
