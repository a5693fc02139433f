//! Numerical toolkit for variable-exponent Lebesgue norms, multilinear
//! Fourier multipliers, maximal functions and power weights, plus the
//! experiment harness driving the `vlmult` binary.

pub mod error;
pub mod exponents;
pub mod grid;
pub mod harness;
pub mod maximal;
pub mod norms;
pub mod operators;
pub mod symbol;
pub mod weights;

pub use error::{Error, Result};
pub use exponents::ExponentField;
pub use grid::{forward_transform, integrate, inverse_transform, Domain, GridSpec, SampledFunction};
pub use norms::{luxemburg_norm, modular, norm_auto, quasi_norm, NormResult};
pub use symbol::{Symbol, SymbolDescriptor};
