//! Pulse kinds, evaluation methods and their dispatch onto the core library.

use std::time::{Duration, Instant};

use clap::ValueEnum;
use kelvin_voigt::asymptotic::{
    delta_asym_large_tau, delta_asym_small_tau, delta_asym_small_xi, step_asym_large_tau, step_asym_small_tau,
    step_asym_small_xi,
};
use kelvin_voigt::ilt::{invert_delta, invert_step, IltConfig};
use kelvin_voigt::kernel::{delta_response, step_response};
use kelvin_voigt::literature::{dozio_delta, hanin_delta, morrison_step_with_limit, MORRISON_DEFAULT_MAX_TAU};
use kelvin_voigt::{DimensionlessCoord, Error, EvalOutcome, QuadSpec, SeriesControl};
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_NUMERICAL: u8 = 2;

/// Exit status for a failed evaluation.
pub fn exit_code(err: &Error) -> u8 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pulse {
    Step,
    Delta,
}

impl Pulse {
    pub fn name(self) -> &'static str {
        match self {
            Pulse::Step => "step",
            Pulse::Delta => "delta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Method {
    Integral,
    Ilt,
    AsymSmallTau,
    AsymLargeTau,
    AsymSmallXi,
    Hanin,
    Morrison,
    Dozio,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Integral => "integral",
            Method::Ilt => "ilt",
            Method::AsymSmallTau => "asym-small-tau",
            Method::AsymLargeTau => "asym-large-tau",
            Method::AsymSmallXi => "asym-small-xi",
            Method::Hanin => "hanin",
            Method::Morrison => "morrison",
            Method::Dozio => "dozio",
        }
    }

    /// Hanin and Dozio solved the delta problem only, Morrison the step problem.
    pub fn supports(self, pulse: Pulse) -> bool {
        match self {
            Method::Hanin | Method::Dozio => pulse == Pulse::Delta,
            Method::Morrison => pulse == Pulse::Step,
            _ => true,
        }
    }

    /// Formulas whose value is known not to be the response.
    pub fn known_defect(self) -> bool {
        self == Method::Dozio
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

pub fn check_support(pulse: Pulse, methods: &[Method]) -> Result<(), Error> {
    match methods.iter().find(|m| !m.supports(pulse)) {
        Some(m) => {
            Err(Error::InvalidParameter(format!("method {} does not apply to the {} pulse", m.name(), pulse.name())))
        }
        None => Ok(()),
    }
}

/// Numerical controls shared by all methods.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub quad: QuadSpec,
    pub ilt: IltConfig,
    pub series: SeriesControl,
    pub morrison_max_tau: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            quad: QuadSpec::default(),
            ilt: IltConfig::default(),
            series: SeriesControl::default(),
            morrison_max_tau: MORRISON_DEFAULT_MAX_TAU,
        }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<(), Error> {
        self.quad.validate()?;
        self.ilt.validate()?;
        if !(self.morrison_max_tau > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "morrison tau limit must be positive, got {}",
                self.morrison_max_tau
            )));
        }
        Ok(())
    }
}

/// Closed-form values carry no error estimate.
fn closed_form(value: f64) -> EvalOutcome {
    EvalOutcome { value, error_estimate: f64::NAN, function_evals: 0, converged: value.is_finite() }
}

pub fn evaluate(pulse: Pulse, method: Method, c: &DimensionlessCoord, s: &Settings) -> Result<EvalOutcome, Error> {
    check_support(pulse, &[method])?;
    let ctl = &s.series;
    match (method, pulse) {
        (Method::Integral, Pulse::Step) => step_response(c, &s.quad),
        (Method::Integral, Pulse::Delta) => delta_response(c, &s.quad),
        (Method::Ilt, Pulse::Step) => invert_step(c.xi, c.tau, &s.ilt),
        (Method::Ilt, Pulse::Delta) => invert_delta(c.xi, c.tau, &s.ilt),
        (Method::AsymSmallTau, Pulse::Step) => Ok(closed_form(step_asym_small_tau(c))),
        (Method::AsymSmallTau, Pulse::Delta) => Ok(closed_form(delta_asym_small_tau(c))),
        (Method::AsymLargeTau, Pulse::Step) => step_asym_large_tau(c, ctl).map(closed_form),
        (Method::AsymLargeTau, Pulse::Delta) => delta_asym_large_tau(c, ctl).map(closed_form),
        (Method::AsymSmallXi, Pulse::Step) => Ok(closed_form(step_asym_small_xi(c))),
        (Method::AsymSmallXi, Pulse::Delta) => Ok(closed_form(delta_asym_small_xi(c))),
        (Method::Hanin, _) => hanin_delta(c, &s.quad),
        (Method::Morrison, _) => morrison_step_with_limit(c, &s.quad, s.morrison_max_tau),
        (Method::Dozio, _) => dozio_delta(c, &s.quad),
    }
}

/// One evaluation with its wall time.
#[derive(Debug, Clone)]
pub struct Timed {
    pub outcome: Result<EvalOutcome, Error>,
    pub elapsed: Duration,
}

impl Timed {
    pub fn ok(&self) -> bool {
        matches!(&self.outcome, Ok(o) if o.converged)
    }

    pub fn value(&self) -> Option<f64> {
        match &self.outcome {
            Ok(o) if o.converged => Some(o.value),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        if self.ok() {
            "ok"
        } else {
            "no_converge"
        }
    }
}

pub fn evaluate_timed(pulse: Pulse, method: Method, c: &DimensionlessCoord, s: &Settings) -> Timed {
    let start = Instant::now();
    let outcome = evaluate(pulse, method, c, s);
    Timed { outcome, elapsed: start.elapsed() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(xi: f64, tau: f64) -> DimensionlessCoord {
        DimensionlessCoord::new(xi, tau).unwrap()
    }

    #[test]
    fn pulse_method_compatibility() {
        assert!(check_support(Pulse::Delta, &[Method::Hanin, Method::Dozio, Method::Ilt]).is_ok());
        assert!(check_support(Pulse::Step, &[Method::Hanin]).is_err());
        assert!(check_support(Pulse::Delta, &[Method::Morrison]).is_err());
        let err = evaluate(Pulse::Step, Method::Dozio, &at(0.5, 0.5), &Settings::default()).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_USAGE);
    }

    #[test]
    fn names_round_trip_through_clap() {
        for m in Method::value_variants() {
            assert_eq!(Method::from_str(m.name(), false).unwrap(), *m);
        }
    }

    #[test]
    fn closed_forms_have_no_error_estimate() {
        let out = evaluate(Pulse::Step, Method::AsymSmallXi, &at(0.05, 0.5), &Settings::default()).unwrap();
        assert!(out.converged);
        assert!(out.error_estimate.is_nan());
    }

    #[test]
    fn refusals_map_to_numerical_exit() {
        let s = Settings::default();
        let refused = evaluate_timed(Pulse::Step, Method::Morrison, &at(0.5, 10.0), &s);
        assert!(!refused.ok());
        assert_eq!(refused.status(), "no_converge");
        let guard = evaluate(Pulse::Step, Method::Ilt, &at(0.5, 1e-4), &s).unwrap_err();
        assert_eq!(exit_code(&guard), EXIT_NUMERICAL);
    }
}
