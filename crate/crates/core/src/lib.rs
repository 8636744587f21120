//! Numerical laboratory for norm estimates on power-bounded operators.
//!
//! The crate covers:
//!
//! * [`series`]: exact and floating formal power series, Lagrange inversion,
//!   fixed-point inversion of `f / h`, class-P certification and radius
//!   estimates;
//! * [`admissible`]: critical points of admissible functions, the sharp
//!   threshold constants, and the Sinclair-type and Gorin-type scans;
//! * [`matrix`]: dense complex operators with induced norms, the matrix
//!   exponential and the finite functional calculus on nilpotent matrices;
//! * [`volterra`]: Fourier symbols and Nyström discretizations of fractional
//!   Volterra operators;
//! * [`l1multiplier`]: the `L_1` multiplier whose powers grow like `log n`;
//! * [`seqdiag`]: scalar bound sequences of the bi-orthogonal construction;
//! * [`reproduce`]: the acceptance experiments, shared by tests and the CLI.
//!
//! Series and matrix code is generic over the scalar type; the aliases below
//! name the instantiations used in practice.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissible;
pub mod error;
pub mod experiment;
pub mod family;
pub mod l1multiplier;
pub mod matrix;
pub mod quad;
pub mod reproduce;
pub mod scalar;
pub mod seqdiag;
pub mod series;
pub mod volterra;

pub use error::{Error, Result};
pub use experiment::ExperimentSeries;
pub use family::FunctionSpec;
pub use matrix::{DenseOperator, NormKind};
pub use scalar::Coefficient;
pub use series::PowerSeries;

/// Arbitrary-precision rational coefficients.
pub type Rational = num_rational::BigRational;

/// Series with exact rational coefficients.
pub type ExactSeries = PowerSeries<Rational>;

/// Series with double-precision coefficients.
pub type FloatSeries = PowerSeries<f64>;

/// Double-precision complex operators.
pub type Operator = DenseOperator<f64>;

/// Single-precision complex operators.
pub type Operator32 = DenseOperator<f32>;
