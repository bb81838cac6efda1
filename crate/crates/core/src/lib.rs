//! Transient response of a semi-infinite Kelvin–Voigt viscoelastic medium.
//!
//! The medium is driven at its boundary by a step, a delta, or a sampled
//! pulse. Responses are evaluated from integral representations in the
//! dimensionless coordinates `xi = x / (c' t_eps)` and `tau = t / t_eps`,
//! with a contour-integral inverse Laplace transform as an independent check
//! and three earlier published formulations for comparison.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod asymptotic;
pub mod error;
pub mod ilt;
pub mod kernel;
pub mod literature;
pub mod material;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use material::{to_dimensionless, DimensionlessCoord, MaterialParams};
pub use quadrature::{DecayHint, EvalOutcome, QuadSpec};
pub use specfun::SeriesControl;
