//! Pointwise comparison of two methods over a sweep grid.

use std::time::Instant;

use kelvin_voigt::{DimensionlessCoord, Error};
use rayon::prelude::*;
use serde::Serialize;

use crate::methods::{evaluate_timed, Method, Pulse, Settings, Timed};
use crate::sweep::SweepSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub xi: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridEntry {
    pub xi: f64,
    pub tau: f64,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub abs_diff: Option<f64>,
    pub a_error_estimate: Option<f64>,
    pub b_error_estimate: Option<f64>,
    pub a_status: &'static str,
    pub b_status: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WallTime {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub pulse: Pulse,
    pub method_a: Method,
    pub method_b: Method,
    pub grid: Vec<GridEntry>,
    /// Over the points where both methods converged.
    pub max_abs_discrepancy: Option<f64>,
    pub argmax: Option<Point>,
    pub wall_time_ms: WallTime,
    /// Set when either formula is known not to give the response.
    pub known_defect: bool,
    pub failed_points: usize,
}

impl ComparisonReport {
    pub fn all_converged(&self) -> bool {
        self.failed_points == 0
    }
}

fn run_method(pulse: Pulse, method: Method, grid: &[DimensionlessCoord], s: &Settings) -> (Vec<Timed>, f64) {
    let start = Instant::now();
    let results = grid.par_iter().map(|c| evaluate_timed(pulse, method, c, s)).collect();
    (results, start.elapsed().as_secs_f64() * 1e3)
}

fn error_estimate(t: &Timed) -> Option<f64> {
    t.outcome.as_ref().ok().map(|o| o.error_estimate).filter(|e| e.is_finite())
}

pub fn run_compare(spec: &SweepSpec, a: Method, b: Method, s: &Settings) -> Result<ComparisonReport, Error> {
    let spec = SweepSpec { methods: vec![a, b], ..spec.clone() };
    spec.validate()?;
    s.validate()?;
    let grid = spec.grid()?;
    let (ra, time_a) = run_method(spec.pulse, a, &grid, s);
    let (rb, time_b) = run_method(spec.pulse, b, &grid, s);

    let mut entries = Vec::with_capacity(grid.len());
    let mut best: Option<(f64, Point)> = None;
    let mut failed = 0;
    for ((c, ta), tb) in grid.iter().zip(&ra).zip(&rb) {
        let (va, vb) = (ta.value(), tb.value());
        let diff = va.zip(vb).map(|(x, y)| (x - y).abs());
        if diff.is_none() {
            failed += 1;
        }
        if let Some(d) = diff {
            if best.is_none_or(|(m, _)| d > m) {
                best = Some((d, Point { xi: c.xi, tau: c.tau }));
            }
        }
        entries.push(GridEntry {
            xi: c.xi,
            tau: c.tau,
            a: va,
            b: vb,
            abs_diff: diff,
            a_error_estimate: error_estimate(ta),
            b_error_estimate: error_estimate(tb),
            a_status: ta.status(),
            b_status: tb.status(),
        });
    }

    Ok(ComparisonReport {
        pulse: spec.pulse,
        method_a: a,
        method_b: b,
        grid: entries,
        max_abs_discrepancy: best.map(|(d, _)| d),
        argmax: best.map(|(_, p)| p),
        wall_time_ms: WallTime { a: time_a, b: time_b },
        known_defect: a.known_defect() || b.known_defect(),
        failed_points: failed,
    })
}
