//! Earlier published integral solutions, kept for cross-validation.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::material::DimensionlessCoord;
use crate::quadrature::{integrate_finite, integrate_semi_infinite, DecayHint, EvalOutcome, QuadSpec};

/// Morrison's integral is refused above this `tau` unless overridden.
pub const MORRISON_DEFAULT_MAX_TAU: f64 = 8.0;

/// Dozio's oscillatory tail needs far more panels than the kernel integrals.
const DOZIO_MIN_SUBDIVISIONS: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiteratureMethod {
    HaninDelta,
    MorrisonStep,
    DozioDelta,
}

impl LiteratureMethod {
    /// Dozio's formula does not reproduce the delta response.
    pub fn known_defect(self) -> bool {
        matches!(self, LiteratureMethod::DozioDelta)
    }

    pub fn evaluate(self, c: &DimensionlessCoord, spec: &QuadSpec) -> Result<EvalOutcome> {
        match self {
            LiteratureMethod::HaninDelta => hanin_delta(c, spec),
            LiteratureMethod::MorrisonStep => morrison_step(c, spec),
            LiteratureMethod::DozioDelta => dozio_delta(c, spec),
        }
    }
}

fn require_positive_xi(c: &DimensionlessCoord) -> Result<()> {
    if c.xi > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("literature formulations need xi > 0, got {}", c.xi)))
    }
}

/// Hanin's delta-pulse solution:
/// `2 xi/(pi tau) int_0^1 e^{-2 tau u^2} cos(2u [xi - tau sqrt(1-u^2)]) du
///  + e^{-2 tau}/pi int_0^inf e^{-tau u} [sin((2+u) xi / sqrt(1+u)) - sin(2 xi)] du`.
pub fn hanin_delta(c: &DimensionlessCoord, spec: &QuadSpec) -> Result<EvalOutcome> {
    require_positive_xi(c)?;
    let DimensionlessCoord { xi, tau } = *c;
    let part_spec = spec.scaled(0.25);
    let finite = integrate_finite(
        |u: f64| (-2.0 * tau * u * u).exp() * (2.0 * u * (xi - tau * (1.0 - u * u).max(0.0).sqrt())).cos(),
        0.0,
        1.0,
        &part_spec,
    )?;
    let sin_2xi = (2.0 * xi).sin();
    let tail = integrate_semi_infinite(
        |u: f64| (-tau * u).exp() * (((2.0 + u) / (1.0 + u).sqrt() * xi).sin() - sin_2xi),
        0.0,
        &DecayHint::exponential(2f64.ln(), tau),
        &part_spec,
    )?;
    let out = finite.scale(2.0 * xi / (PI * tau)).combine(tail.scale((-2.0 * tau).exp() / PI));
    Ok(out.certify(spec))
}

/// Morrison's step-pulse solution
/// `e^{-tau}/pi int_0^tau cos(2 sqrt(u(tau-u))) / sqrt(u(tau-u)) exp(2u - xi^2/(4u)) du`,
/// evaluated after `u = tau sin^2(theta)`:
/// `2 e^{-tau}/pi int_0^{pi/2} cos(tau sin 2theta) exp(2 tau sin^2 theta - xi^2/(4 tau sin^2 theta)) dtheta`.
pub fn morrison_step(c: &DimensionlessCoord, spec: &QuadSpec) -> Result<EvalOutcome> {
    morrison_step_with_limit(c, spec, MORRISON_DEFAULT_MAX_TAU)
}

/// [`morrison_step`] with an explicit refusal threshold on `tau`.
///
/// Above `max_tau` the factor `exp(2 tau sin^2 theta)` against `e^{-tau}`
/// cancels away more digits than an f64 holds; the outcome is returned as
/// non-converged without a value.
pub fn morrison_step_with_limit(c: &DimensionlessCoord, spec: &QuadSpec, max_tau: f64) -> Result<EvalOutcome> {
    require_positive_xi(c)?;
    let DimensionlessCoord { xi, tau } = *c;
    if tau > max_tau {
        return Ok(EvalOutcome::refused(0));
    }
    let q = xi * xi / (4.0 * tau);
    let integrand = |theta: f64| {
        let s = theta.sin();
        let s2 = s * s;
        if s2 == 0.0 {
            return 0.0;
        }
        // e^{-tau} folded into the exponent: 2 tau sin^2 - tau = -tau cos 2theta
        (tau * (2.0 * theta).sin()).cos() * (-tau * (2.0 * theta).cos() - q / s2).exp()
    };
    let out = integrate_finite(integrand, 0.0, FRAC_PI_2, &spec.scaled(0.5))?;
    Ok(out.scale(2.0 / PI).certify(spec))
}

/// Dozio's delta-pulse formula as published:
/// `e^{-tau} [ xi^2/2 + 2/pi int_0^inf u e^{-tau u^2} sin(xi (1/u + u)) du ]`.
///
/// It disagrees with the delta response; it is evaluated only to document
/// the discrepancy. The integral is split at `u = 1`. On `(0, 1]` the
/// substitution `w = 1/u` gives `int_1^inf e^{-tau/w^2} sin(xi (w + 1/w)) w^{-3} dw`,
/// whose tail past `W` is handled by one integration by parts: the boundary
/// term `h(W) cos(phi(W)) / phi'(W)` is added and the remainder bounded by
/// `h(W) / phi'(W)`, with `h = e^{-tau/w^2} w^{-3}`, `phi = xi (w + 1/w)`.
pub fn dozio_delta(c: &DimensionlessCoord, spec: &QuadSpec) -> Result<EvalOutcome> {
    require_positive_xi(c)?;
    let DimensionlessCoord { xi, tau } = *c;
    let part_spec =
        QuadSpec { max_subdivisions: spec.max_subdivisions.max(DOZIO_MIN_SUBDIVISIONS), ..spec.scaled(0.25) };

    // u >= 1: Gaussian-damped, envelope u e^{-tau u^2}
    let outer = integrate_semi_infinite(
        |u: f64| u * (-tau * u * u).exp() * (xi * (1.0 / u + u)).sin(),
        1.0,
        &DecayHint::log_concave(1.0, move |u| u.ln() - tau * u * u, move |u| 1.0 / u - 2.0 * tau * u),
        &part_spec,
    )?;

    // w >= 1 from u in (0, 1]
    let h = |w: f64| (-tau / (w * w)).exp() / (w * w * w);
    let dphi = |w: f64| xi * (1.0 - 1.0 / (w * w));
    let remainder = |w: f64| h(w) / dphi(w);
    let budget = part_spec.tail_tol_fraction * part_spec.tolerance_for(0.0).max(part_spec.abs_tol);
    let budget = if budget > 0.0 { budget } else { part_spec.rel_tol * 1e-3 };
    // h/phi' decreases once w^2 > max(3, 2 tau / 3); start the search there.
    let start = 2f64.max((2.0 * tau / 3.0).sqrt() + 1.0);
    let mut cutoff = start;
    while remainder(cutoff) > budget {
        cutoff *= 2.0;
        if !cutoff.is_finite() || cutoff > 1e12 {
            return Err(Error::Configuration("Dozio tail cutoff not found".into()));
        }
    }
    let (mut lo, mut hi) = (cutoff / 2.0, cutoff);
    if lo < start {
        lo = start;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if remainder(mid) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let cutoff = hi;
    let inner_body = integrate_finite(|w: f64| h(w) * (xi * (w + 1.0 / w)).sin(), 1.0, cutoff, &part_spec)?;
    let boundary = h(cutoff) * (xi * (cutoff + 1.0 / cutoff)).cos() / dphi(cutoff);
    let inner = EvalOutcome {
        value: inner_body.value + boundary,
        error_estimate: inner_body.error_estimate + remainder(cutoff),
        ..inner_body
    };

    let decay = (-tau).exp();
    let out = outer.combine(inner).scale(2.0 / PI).combine(EvalOutcome::exact(0.5 * xi * xi)).scale(decay);
    Ok(out.certify(spec))
}
