//! Library side of the `kvwave` command: method dispatch, sweeps,
//! comparisons and benchmarks over the Kelvin–Voigt response.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod compare;
pub mod methods;
pub mod sweep;
