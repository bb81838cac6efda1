//! Closed-form asymptotic approximations of the step and delta responses.
//!
//! None of these carries a validity check: they are evaluated wherever asked.
//! How far each one can be trusted is measured against the exact responses
//! in the tests.

use std::f64::consts::PI;

use crate::error::Result;
use crate::material::DimensionlessCoord;
use crate::specfun::{erfc, hyp0f2, SeriesControl};

/// Step response for `tau -> 0` or `xi -> inf`: `erfc(xi / (2 sqrt tau))`.
pub fn step_asym_small_tau(c: &DimensionlessCoord) -> f64 {
    erfc(c.xi / (2.0 * c.tau.sqrt()))
}

/// Step response for `tau -> inf`:
/// `1 - xi^2 e^{-tau} [ 1/2 0F2(;1/2,2;z) + 2 xi sqrt(tau) / (3 sqrt pi) 0F2(;3/2,5/2;z) ]`,
/// `z = xi^2 tau / 4`.
pub fn step_asym_large_tau(c: &DimensionlessCoord, ctl: &SeriesControl) -> Result<f64> {
    let DimensionlessCoord { xi, tau } = *c;
    if xi == 0.0 {
        return Ok(1.0);
    }
    let z = xi * xi * tau / 4.0;
    let even = 0.5 * hyp0f2(0.5, 2.0, z, ctl)?;
    let odd = 2.0 * xi * tau.sqrt() / (3.0 * PI.sqrt()) * hyp0f2(1.5, 2.5, z, ctl)?;
    Ok(1.0 - xi * xi * (-tau).exp() * (even + odd))
}

/// Step response for `xi -> 0`:
/// `1 - e^{-tau} xi / sqrt(pi tau) - (1 + e^{-tau}) xi^2 / 2`.
pub fn step_asym_small_xi(c: &DimensionlessCoord) -> f64 {
    let DimensionlessCoord { xi, tau } = *c;
    let decay = (-tau).exp();
    1.0 - decay * xi / (PI * tau).sqrt() - 0.5 * (1.0 + decay) * xi * xi
}

/// Delta response for `tau -> 0` or `xi -> inf`:
/// `xi / (2 sqrt(pi) tau^{3/2}) exp(-xi^2/(4 tau) - tau)`.
pub fn delta_asym_small_tau(c: &DimensionlessCoord) -> f64 {
    let DimensionlessCoord { xi, tau } = *c;
    if xi == 0.0 {
        return 0.0;
    }
    let log = xi.ln() - (2.0 * PI.sqrt()).ln() - 1.5 * tau.ln() - xi * xi / (4.0 * tau) - tau;
    log.exp()
}

/// Delta response for `tau -> inf`:
/// `xi e^{-tau} [ 2 xi^2 sqrt(tau)/(9 sqrt pi) 0F2(;5/2,5/2;z) + xi/2 0F2(;3/2,2;z)
///   + 1/sqrt(pi tau) 0F2(;3/2,3/2;z) ]`, `z = xi^2 tau / 4`.
pub fn delta_asym_large_tau(c: &DimensionlessCoord, ctl: &SeriesControl) -> Result<f64> {
    let DimensionlessCoord { xi, tau } = *c;
    if xi == 0.0 {
        return Ok(0.0);
    }
    let z = xi * xi * tau / 4.0;
    let sqrt_pi = PI.sqrt();
    let a = 2.0 * xi * xi * tau.sqrt() / (9.0 * sqrt_pi) * hyp0f2(2.5, 2.5, z, ctl)?;
    let b = 0.5 * xi * hyp0f2(1.5, 2.0, z, ctl)?;
    let d = hyp0f2(1.5, 1.5, z, ctl)? / (PI * tau).sqrt();
    Ok(xi * (-tau).exp() * (a + b + d))
}

/// Delta response for `xi -> 0`:
/// `xi e^{-tau} [ xi/2 + (1 + 1/(2 tau)) / sqrt(pi tau) ]`.
pub fn delta_asym_small_xi(c: &DimensionlessCoord) -> f64 {
    let DimensionlessCoord { xi, tau } = *c;
    xi * (-tau).exp() * (0.5 * xi + (1.0 + 0.5 / tau) / (PI * tau).sqrt())
}
