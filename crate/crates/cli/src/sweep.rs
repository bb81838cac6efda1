//! One-dimensional parameter sweeps and their CSV/JSON output.

use std::io::{self, Write};

use clap::ValueEnum;
use kelvin_voigt::{DimensionlessCoord, Error};
use rayon::prelude::*;
use serde::Serialize;

use crate::methods::{check_support, evaluate_timed, Method, Pulse, Settings, Timed};

pub const CSV_HEADER: [&str; 7] = ["xi", "tau", "method", "value", "error_estimate", "function_evals", "status"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Xi,
    Tau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

/// Parse `xi=0.5` or `tau=2`.
pub fn parse_fix(s: &str) -> Result<(Axis, f64), String> {
    let (axis, value) = s.split_once('=').ok_or_else(|| format!("expected AXIS=VALUE, got '{s}'"))?;
    let axis = Axis::from_str(axis.trim(), true).map_err(|_| format!("unknown axis '{axis}', use xi or tau"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("bad value '{value}': {e}"))?;
    Ok((axis, value))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub pulse: Pulse,
    pub fixed_axis: Axis,
    pub fixed_value: f64,
    pub var_from: f64,
    pub var_to: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub methods: Vec<Method>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.points < 2 {
            return bad(format!("a sweep needs at least 2 points, got {}", self.points));
        }
        if !(self.var_from < self.var_to) || !self.var_to.is_finite() {
            return bad(format!("sweep range must satisfy from < to, got [{}, {}]", self.var_from, self.var_to));
        }
        if self.spacing == Spacing::Log && !(self.var_from > 0.0) {
            return bad(format!("log spacing needs from > 0, got {}", self.var_from));
        }
        if self.methods.is_empty() {
            return bad("no methods given".into());
        }
        check_support(self.pulse, &self.methods)?;
        // every grid point must be a valid coordinate
        for c in [self.var_from, self.var_to] {
            self.coord(c)?;
        }
        Ok(())
    }

    fn coord(&self, var: f64) -> Result<DimensionlessCoord, Error> {
        match self.fixed_axis {
            Axis::Xi => DimensionlessCoord::new(self.fixed_value, var),
            Axis::Tau => DimensionlessCoord::new(var, self.fixed_value),
        }
    }

    /// Sweep variable values, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.var_to;
                }
                let frac = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.var_from + frac * (self.var_to - self.var_from),
                    Spacing::Log => (self.var_from.ln() + frac * (self.var_to / self.var_from).ln()).exp(),
                }
            })
            .collect()
    }

    pub fn grid(&self) -> Result<Vec<DimensionlessCoord>, Error> {
        self.values().into_iter().map(|v| self.coord(v)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    pub coord: DimensionlessCoord,
    pub method: Method,
    pub result: Timed,
}

impl Row {
    /// Fields in [`CSV_HEADER`] order. A row that did not converge has an empty value.
    pub fn csv_record(&self) -> [String; 7] {
        let (value, error, evals) = match &self.result.outcome {
            Ok(o) => (
                self.result.value().map(fmt_float).unwrap_or_default(),
                if o.error_estimate.is_finite() { fmt_float(o.error_estimate) } else { String::new() },
                o.function_evals.to_string(),
            ),
            Err(_) => (String::new(), String::new(), String::new()),
        };
        [
            fmt_float(self.coord.xi),
            fmt_float(self.coord.tau),
            self.method.name().to_string(),
            value,
            error,
            evals,
            self.result.status().to_string(),
        ]
    }

    fn json(&self) -> JsonRow {
        let outcome = self.result.outcome.as_ref().ok();
        JsonRow {
            xi: self.coord.xi,
            tau: self.coord.tau,
            method: self.method,
            value: self.result.value(),
            error_estimate: outcome.map(|o| o.error_estimate).filter(|e| e.is_finite()),
            function_evals: outcome.map(|o| o.function_evals),
            status: self.result.status(),
            diagnostic: self.result.outcome.as_ref().err().map(|e| e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct JsonRow {
    xi: f64,
    tau: f64,
    method: Method,
    value: Option<f64>,
    error_estimate: Option<f64>,
    function_evals: Option<usize>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<String>,
}

/// Scientific notation with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Evaluate every (point, method) pair. Points run in parallel; rows come
/// back grid-major, then in the order the methods were given.
pub fn run_sweep(spec: &SweepSpec, settings: &Settings) -> Result<Vec<Row>, Error> {
    spec.validate()?;
    settings.validate()?;
    let grid = spec.grid()?;
    let jobs: Vec<(DimensionlessCoord, Method)> =
        grid.iter().flat_map(|c| spec.methods.iter().map(move |m| (*c, *m))).collect();
    Ok(jobs
        .into_par_iter()
        .map(|(coord, method)| Row { coord, method, result: evaluate_timed(spec.pulse, method, &coord, settings) })
        .collect())
}

pub fn write_csv(rows: &[Row], out: &mut dyn Write) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.csv_record())?;
    }
    w.flush()
}

pub fn write_json(rows: &[Row], out: &mut dyn Write) -> io::Result<()> {
    let rows: Vec<JsonRow> = rows.iter().map(Row::json).collect();
    serde_json::to_writer_pretty(&mut *out, &rows)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SweepSpec {
        SweepSpec {
            pulse: Pulse::Step,
            fixed_axis: Axis::Xi,
            fixed_value: 0.5,
            var_from: 0.05,
            var_to: 5.0,
            points: 100,
            spacing: Spacing::Linear,
            methods: vec![Method::Integral, Method::Ilt],
        }
    }

    #[test]
    fn fix_parsing() {
        assert_eq!(parse_fix("xi=0.5").unwrap(), (Axis::Xi, 0.5));
        assert_eq!(parse_fix("TAU = 2").unwrap(), (Axis::Tau, 2.0));
        assert!(parse_fix("xi").is_err());
        assert!(parse_fix("x=1").is_err());
        assert!(parse_fix("tau=abc").is_err());
    }

    #[test]
    fn grids_hit_both_endpoints() {
        let lin = spec().values();
        assert_eq!(lin.len(), 100);
        assert_eq!((lin[0], lin[99]), (0.05, 5.0));
        assert!(lin.windows(2).all(|w| w[0] < w[1]));
        let log = SweepSpec { spacing: Spacing::Log, points: 3, var_from: 0.1, var_to: 10.0, ..spec() }.values();
        assert!((log[1] - 1.0).abs() < 1e-15);
        assert_eq!(log[2], 10.0);
    }

    #[test]
    fn spec_validation() {
        assert!(spec().validate().is_ok());
        assert!(SweepSpec { points: 1, ..spec() }.validate().is_err());
        assert!(SweepSpec { var_from: 5.0, ..spec() }.validate().is_err());
        assert!(SweepSpec { var_from: 0.0, spacing: Spacing::Log, ..spec() }.validate().is_err());
        assert!(SweepSpec { fixed_value: -1.0, ..spec() }.validate().is_err());
        assert!(SweepSpec { var_from: 0.0, ..spec() }.validate().is_err());
        assert!(SweepSpec { methods: vec![Method::Hanin], ..spec() }.validate().is_err());
        assert!(SweepSpec { methods: vec![], ..spec() }.validate().is_err());
    }

    #[test]
    fn rows_are_grid_major() {
        let s = SweepSpec { points: 3, ..spec() };
        let rows = run_sweep(&s, &Settings::default()).unwrap();
        let order: Vec<(f64, &str)> = rows.iter().map(|r| (r.coord.tau, r.method.name())).collect();
        let taus = s.values();
        assert_eq!(order.len(), 6);
        for (i, (tau, name)) in order.iter().enumerate() {
            assert_eq!(*tau, taus[i / 2]);
            assert_eq!(*name, ["integral", "ilt"][i % 2]);
        }
    }

    #[test]
    fn failed_rows_have_empty_values() {
        let s = SweepSpec {
            pulse: Pulse::Step,
            fixed_axis: Axis::Xi,
            fixed_value: 0.5,
            var_from: 5.0,
            var_to: 10.0,
            points: 2,
            spacing: Spacing::Linear,
            methods: vec![Method::Morrison],
        };
        let rows = run_sweep(&s, &Settings::default()).unwrap();
        assert!(rows[0].result.ok());
        let line = rows[1].csv_record().join(",");
        assert_eq!(line, "5.0000000000000000e-1,1.0000000000000000e1,morrison,,,0,no_converge");
    }

    #[test]
    fn float_format_is_fixed_width_mantissa() {
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
    }
}
