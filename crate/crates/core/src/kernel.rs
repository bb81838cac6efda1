//! Kernels `f`, `g` and the step, delta and general pulse responses.
//!
//! All integrands run over `v in [xi, inf)` and share the factor
//! `0F1~(;1; xi (v - xi)) = I0(2 sqrt(xi (v - xi)))`. That factor is taken in
//! scaled form so its exponential growth `2 sqrt(xi (v - xi))` can be merged
//! with the Gaussian `-v^2 / (4 tau)` before anything is exponentiated.

use std::cell::Cell;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::material::{DimensionlessCoord, MaterialParams};
use crate::quadrature::{integrate_finite, integrate_semi_infinite, DecayHint, EvalOutcome, QuadSpec};
use crate::specfun::{erfcx_nonneg, hyp0f1_reg1_scaled, SeriesControl};

/// `(mantissa, log_scale)` of `I0(2 sqrt(xi (v - xi)))`; NaN if the series fails.
fn bessel_factor(xi: f64, v: f64) -> (f64, f64) {
    let z = (xi * (v - xi)).max(0.0);
    hyp0f1_reg1_scaled(z, &SeriesControl::default()).unwrap_or((f64::NAN, 0.0))
}

/// `2 sqrt(xi (v - xi))` and its derivative in `v`.
fn growth(xi: f64, v: f64) -> (f64, f64) {
    let z = (xi * (v - xi)).max(0.0);
    let r = z.sqrt();
    let d = if r > 0.0 { xi / r } else { f64::INFINITY };
    (2.0 * r, d)
}

/// `f(xi, tau) = 1/sqrt(pi tau) int_xi^inf exp(-v^2/(4 tau)) 0F1~(;1; xi(v - xi)) dv`.
pub fn kernel_f(c: &DimensionlessCoord, spec: &QuadSpec) -> Result<EvalOutcome> {
    let DimensionlessCoord { xi, tau } = *c;
    if xi == 0.0 {
        return Ok(EvalOutcome::exact(1.0));
    }
    let log_pref = -0.5 * (PI * tau).ln();
    let integrand = |v: f64| {
        let (m, l) = bessel_factor(xi, v);
        m * (l - v * v / (4.0 * tau) + log_pref).exp()
    };
    let hint = DecayHint::log_concave(
        xi,
        move |v| log_pref - v * v / (4.0 * tau) + growth(xi, v).0,
        move |v| -v / (2.0 * tau) + growth(xi, v).1,
    );
    integrate_semi_infinite(integrand, xi, &hint, spec)
}

/// `g(xi, tau) = d f / d tau
///   = 1/(4 sqrt(pi) tau^{5/2}) int_xi^inf (v^2 - 2 tau) exp(-v^2/(4 tau)) 0F1~(;1; xi(v - xi)) dv`.
pub fn kernel_g(c: &DimensionlessCoord, spec: &QuadSpec) -> Result<EvalOutcome> {
    let DimensionlessCoord { xi, tau } = *c;
    if xi == 0.0 {
        return Ok(EvalOutcome::exact(0.0));
    }
    let log_pref = -(4.0 * PI.sqrt()).ln() - 2.5 * tau.ln();
    let integrand = |v: f64| {
        let (m, l) = bessel_factor(xi, v);
        (v * v - 2.0 * tau) * m * (l - v * v / (4.0 * tau) + log_pref).exp()
    };
    // |v^2 - 2 tau| <= v^2 + 2 tau, whose log is concave once v >= sqrt(2 tau)
    let hint = DecayHint::log_concave(
        xi.max((2.0 * tau).sqrt()),
        move |v| log_pref + (v * v + 2.0 * tau).ln() - v * v / (4.0 * tau) + growth(xi, v).0,
        move |v| 2.0 * v / (v * v + 2.0 * tau) - v / (2.0 * tau) + growth(xi, v).1,
    );
    integrate_semi_infinite(integrand, xi, &hint, spec)
}

/// Response to a unit step applied at the boundary.
///
/// The bracket `E/sqrt(pi tau) + e^{-v}/2 erfc(a) - e^{v}/2 erfc(b)`, with
/// `E = exp(-v^2/(4 tau) - tau)`, `a = (v - 2 tau)/(2 sqrt tau)` and
/// `b = (v + 2 tau)/(2 sqrt tau)`, is rewritten through
/// `e^{-v} erfc(a) = E erfcx(a)` and `e^{v} erfc(b) = E erfcx(b)`. For
/// `a < 0` the reflection `erfc(a) = 2 - erfc(-a)` leaves a bounded
/// `e^{-v}` term outside the common factor `E`.
pub fn step_response(c: &DimensionlessCoord, spec: &QuadSpec) -> Result<EvalOutcome> {
    let DimensionlessCoord { xi, tau } = *c;
    if xi == 0.0 {
        return Ok(EvalOutcome::exact(1.0));
    }
    let sqrt_tau = tau.sqrt();
    let inv_sqrt_pi_tau = 1.0 / (PI * tau).sqrt();
    let integrand = |v: f64| {
        let (m, l) = bessel_factor(xi, v);
        let a = (v - 2.0 * tau) / (2.0 * sqrt_tau);
        let b = (v + 2.0 * tau) / (2.0 * sqrt_tau);
        let common = l - v * v / (4.0 * tau) - tau;
        if a >= 0.0 {
            let bracket = inv_sqrt_pi_tau + 0.5 * (erfcx_nonneg(a) - erfcx_nonneg(b));
            m * common.exp() * bracket
        } else {
            let bracket = inv_sqrt_pi_tau - 0.5 * (erfcx_nonneg(-a) + erfcx_nonneg(b));
            m * (common.exp() * bracket + (l - v).exp())
        }
    };
    // For v >= 2 tau: |bracket| <= E (1/sqrt(pi tau) + 1/2)
    let log_amp = (inv_sqrt_pi_tau + 0.5).ln();
    let hint = DecayHint::log_concave(
        xi.max(2.0 * tau),
        move |v| log_amp - v * v / (4.0 * tau) - tau + growth(xi, v).0,
        move |v| -v / (2.0 * tau) + growth(xi, v).1,
    );
    integrate_semi_infinite(integrand, xi, &hint, spec)
}

/// Response to a unit impulse: `exp(-tau) g(xi, tau)`.
pub fn delta_response(c: &DimensionlessCoord, spec: &QuadSpec) -> Result<EvalOutcome> {
    Ok(kernel_g(c, spec)?.scale((-c.tau).exp()))
}

/// Boundary excitation `r0(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum PulseSignal {
    /// Heaviside step `theta(t)`.
    Step,
    /// Impulse `delta(t / t_eps)`.
    Delta,
    /// Piecewise-linear signal through `(t, r0)` samples, `t` in seconds.
    Sampled(SampledPulse),
}

/// Samples `(t, r0(t))` with strictly increasing `t >= 0`, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPulse {
    samples: Vec<(f64, f64)>,
}

impl SampledPulse {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidParameter("a sampled pulse needs at least 2 samples".into()));
        }
        if samples.iter().any(|&(t, r)| !(t >= 0.0 && t.is_finite() && r.is_finite())) {
            return Err(Error::InvalidParameter("sample times must be finite and >= 0, values finite".into()));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidParameter("sample times must be strictly increasing".into()));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Covered time window `[first, last]`.
    pub fn support(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }

    /// Linear interpolation; clamps to the end values outside the support.
    pub fn value_at(&self, t: f64) -> f64 {
        let s = &self.samples;
        if t <= s[0].0 {
            return s[0].1;
        }
        let idx = s.partition_point(|&(ti, _)| ti < t);
        if idx >= s.len() {
            return s[s.len() - 1].1;
        }
        let (t0, r0) = s[idx - 1];
        let (t1, r1) = s[idx];
        r0 + (r1 - r0) * (t - t0) / (t1 - t0)
    }
}

/// Response to an arbitrary pulse:
/// `r(xi, tau) = int_0^tau r0(t_eps (tau - tau')) exp(-tau') g(xi, tau') dtau'`.
///
/// Delta pulses go straight to [`delta_response`]. At `xi = 0` the response
/// is the boundary signal itself.
pub fn general_response(
    pulse: &PulseSignal,
    c: &DimensionlessCoord,
    p: &MaterialParams,
    spec: &QuadSpec,
) -> Result<EvalOutcome> {
    let DimensionlessCoord { xi, tau } = *c;
    let t_eps = p.t_eps();
    let signal: Box<dyn Fn(f64) -> f64 + '_> = match pulse {
        PulseSignal::Delta => return delta_response(c, spec),
        PulseSignal::Step => Box::new(|_| 1.0),
        PulseSignal::Sampled(sp) => {
            let (start, end) = sp.support();
            let need = t_eps * tau;
            if start > 0.0 || end < need * (1.0 - 1e-12) {
                return Err(Error::Domain(format!(
                    "sampled pulse covers [{start}, {end}] s but [0, {need}] s is required"
                )));
            }
            Box::new(move |t| sp.value_at(t))
        }
    };
    if xi == 0.0 {
        return Ok(EvalOutcome::exact(signal(t_eps * tau)));
    }

    // Kinks of the interpolant become breakpoints in tau'.
    let mut breaks = vec![0.0];
    if let PulseSignal::Sampled(sp) = pulse {
        for &(t, _) in sp.samples() {
            let bp = tau - t / t_eps;
            if bp > 0.0 && bp < tau {
                breaks.push(bp);
            }
        }
    }
    breaks.push(tau);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let inner_spec = spec.scaled(0.1);
    let inner_failed = Cell::new(false);
    let inner_evals = Cell::new(0usize);
    let inner_err = Cell::new(0.0f64);
    let integrand = |tp: f64| {
        if tp <= 0.0 {
            return 0.0;
        }
        let point = DimensionlessCoord { xi, tau: tp };
        match kernel_g(&point, &inner_spec) {
            Ok(g) => {
                inner_evals.set(inner_evals.get() + g.function_evals);
                if !g.converged {
                    inner_failed.set(true);
                }
                let weight = signal(t_eps * (tau - tp)) * (-tp).exp();
                inner_err.set(inner_err.get().max((weight * g.error_estimate).abs()));
                weight * g.value
            }
            Err(_) => {
                inner_failed.set(true);
                f64::NAN
            }
        }
    };

    let outer_spec = spec.scaled(0.5);
    let mut total = EvalOutcome::exact(0.0);
    for w in breaks.windows(2) {
        let piece = integrate_finite(integrand, w[0], w[1], &outer_spec)?;
        total = total.combine(piece);
    }
    total.function_evals += inner_evals.get();
    total.error_estimate += tau * inner_err.get();
    total.converged &= !inner_failed.get();
    Ok(total.certify(spec))
}
