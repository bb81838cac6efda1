//! Repeated timing of methods over a point set.

use kelvin_voigt::{DimensionlessCoord, Error};
use serde::Serialize;

use crate::methods::{check_support, evaluate_timed, Method, Pulse, Settings};

pub const MIN_REPEATS: usize = 3;

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub pulse: Pulse,
    pub points: Vec<DimensionlessCoord>,
    pub methods: Vec<Method>,
    pub repeats: usize,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if self.repeats < MIN_REPEATS {
            return Err(Error::InvalidParameter(format!("repeats must be >= {MIN_REPEATS}, got {}", self.repeats)));
        }
        if self.points.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidParameter("bench needs at least one point and one method".into()));
        }
        check_support(self.pulse, &self.methods)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub xi: f64,
    pub tau: f64,
    pub method: Method,
    pub median_ms: f64,
    pub samples_ms: Vec<f64>,
    pub function_evals: Option<usize>,
    pub status: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodTotal {
    pub method: Method,
    /// Sum over points of the per-point medians.
    pub median_ms: f64,
    pub function_evals: usize,
    pub failed_points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub pulse: Pulse,
    pub repeats: usize,
    pub rows: Vec<BenchRow>,
    pub totals: Vec<MethodTotal>,
}

impl BenchReport {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.status == "ok")
    }
}

pub fn median(samples: &[f64]) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs sequentially so timings are not perturbed by other workers.
pub fn run_bench(spec: &BenchSpec, s: &Settings) -> Result<BenchReport, Error> {
    spec.validate()?;
    s.validate()?;
    let mut rows = Vec::new();
    for c in &spec.points {
        for &method in &spec.methods {
            let runs: Vec<_> = (0..spec.repeats).map(|_| evaluate_timed(spec.pulse, method, c, s)).collect();
            let samples: Vec<f64> = runs.iter().map(|r| r.elapsed.as_secs_f64() * 1e3).collect();
            let last = runs.last().expect("repeats >= 3");
            rows.push(BenchRow {
                xi: c.xi,
                tau: c.tau,
                method,
                median_ms: median(&samples),
                samples_ms: samples,
                function_evals: last.outcome.as_ref().ok().map(|o| o.function_evals),
                status: last.status(),
            });
        }
    }
    let totals = spec
        .methods
        .iter()
        .map(|&method| {
            let mine = rows.iter().filter(|r| r.method == method);
            MethodTotal {
                method,
                median_ms: mine.clone().map(|r| r.median_ms).sum(),
                function_evals: mine.clone().filter_map(|r| r.function_evals).sum(),
                failed_points: mine.filter(|r| r.status != "ok").count(),
            }
        })
        .collect();
    Ok(BenchReport { pulse: spec.pulse, repeats: spec.repeats, rows, totals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn single_point_three_samples() {
        let spec = BenchSpec {
            pulse: Pulse::Delta,
            points: vec![DimensionlessCoord::new(0.5, 0.5).unwrap()],
            methods: vec![Method::Integral, Method::Ilt, Method::Hanin],
            repeats: 3,
        };
        let r = run_bench(&spec, &Settings::default()).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(r.rows.iter().all(|row| row.samples_ms.len() == 3));
        assert_eq!(r.totals.len(), 3);
        assert!(r.all_converged());
    }

    #[test]
    fn too_few_repeats() {
        let spec = BenchSpec {
            pulse: Pulse::Step,
            points: vec![DimensionlessCoord::new(0.5, 0.5).unwrap()],
            methods: vec![Method::Integral],
            repeats: 2,
        };
        assert!(run_bench(&spec, &Settings::default()).is_err());
    }
}
