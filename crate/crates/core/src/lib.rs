//! Exact intersection theory on the Segre threefold X = P¹×P¹×P¹ and a numeric
//! classifier for globally generated vector bundles on it.

pub mod chow;
pub mod chow_parse;
pub mod classifier;
pub mod cohomology;
pub mod bundles;
pub mod curves;
pub mod fixtures;
pub mod verify;
mod text;

pub use chow::{ChowClass, ChowError, CurveClass, Divisor3, Permutation};
pub use text::ParseError;
