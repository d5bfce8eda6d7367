//! Free-probability computation toolkit.
//!
//! * [`measures`]: probability measures, moments, the `ψ` and Krein `K` transforms.
//! * [`series`], [`transforms`]: exact truncated power series; boolean and free cumulants.
//! * [`nc`], [`word_engine`]: non-crossing partitions and mixed moments of free variables.
//! * [`convolution`]: additive and multiplicative free convolution, subordination, and
//!   fractional-moment diagnostics.
//! * [`characterize`]: moment-level freeness tests for linear and quadratic forms.
//! * [`matrix_lab`]: random-matrix models and noncommutative `L^p` inequality checks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod characterize;
pub mod convolution;
pub mod error;
pub mod matrix_lab;
pub mod measures;
pub mod nc;
pub mod quadrature;
pub mod rational;
pub mod series;
pub mod transforms;
pub mod word_engine;

pub use error::{Error, Result};
pub use measures::{AtomicMeasure, Measure, MomentSequence};
pub use num_complex::Complex64;
pub use rational::Rational;
pub use series::PowerSeries;
pub use transforms::{BooleanCumulants, FreeCumulants};
pub use word_engine::{FreeFamily, Word};
