use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kelvin_voigt::ilt::IltConfig;
use kelvin_voigt::{to_dimensionless, DimensionlessCoord, Error, MaterialParams, QuadSpec};
use kvwave::bench::{run_bench, BenchSpec};
use kvwave::compare::run_compare;
use kvwave::methods::{evaluate, exit_code, Method, Pulse, Settings, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};
use kvwave::sweep::{fmt_float, parse_fix, run_sweep, write_csv, write_json, Axis, Spacing, SweepSpec, CSV_HEADER};
use serde_json::json;

/// Transient response of a semi-infinite Kelvin–Voigt medium to boundary pulses
#[derive(Parser, Debug)]
#[command(name = "kvwave", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one point
    Eval(EvalArgs),
    /// Evaluate methods along a one-dimensional grid
    Sweep(SweepArgs),
    /// Compare two methods along a grid and report the largest discrepancy
    Compare(CompareArgs),
    /// Time methods over a set of points
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct Numerics {
    /// Relative quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,

    /// Absolute quadrature tolerance
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,

    /// Fixed number of contour nodes for the inverse Laplace transform.
    /// Without it the inversion starts at 32 nodes and doubles up to 64.
    #[arg(long)]
    ilt_nodes: Option<usize>,

    /// Morrison's integral is refused above this tau
    #[arg(long, default_value_t = 8.0)]
    morrison_max_tau: f64,
}

impl Numerics {
    fn settings(&self) -> Result<Settings, Error> {
        let defaults = QuadSpec::default();
        let s = Settings {
            quad: QuadSpec::new(self.rel_tol, self.abs_tol, defaults.max_subdivisions, defaults.tail_tol_fraction)?,
            ilt: self.ilt_nodes.map(IltConfig::with_nodes).unwrap_or_default(),
            morrison_max_tau: self.morrison_max_tau,
            ..Settings::default()
        };
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, value_enum)]
    pulse: Pulse,

    #[arg(long, value_enum, default_value = "integral")]
    method: Method,

    /// Dimensionless distance
    #[arg(long, required_unless_present = "material")]
    xi: Option<f64>,

    /// Dimensionless time
    #[arg(long, required_unless_present = "material")]
    tau: Option<f64>,

    /// Distance in metres (with --material)
    #[arg(long, requires = "material", conflicts_with = "xi")]
    x: Option<f64>,

    /// Time in seconds (with --material)
    #[arg(long, requires = "material", conflicts_with = "tau")]
    t: Option<f64>,

    /// Density, equilibrium modulus and retardation time: rho,Ge,t_eps
    #[arg(long, value_parser = parse_material, requires_all = ["x", "t"])]
    material: Option<(f64, f64, f64)>,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    #[command(flatten)]
    numerics: Numerics,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, value_enum)]
    pulse: Pulse,

    /// Fixed coordinate, e.g. xi=0.5 or tau=0.5
    #[arg(long, value_parser = parse_fix)]
    fix: (Axis, f64),

    /// Start of the swept coordinate
    #[arg(long)]
    from: f64,

    /// End of the swept coordinate
    #[arg(long)]
    to: f64,

    #[arg(long, default_value_t = 100)]
    points: usize,

    #[arg(long, value_enum, default_value = "linear")]
    spacing: Spacing,
}

fn parse_material(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad number '{p}': {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [rho, ge, t_eps] => Ok((rho, ge, t_eps)),
        _ => Err(format!("expected rho,Ge,t_eps, got '{s}'")),
    }
}

impl GridArgs {
    fn spec(&self, methods: Vec<Method>) -> SweepSpec {
        SweepSpec {
            pulse: self.pulse,
            fixed_axis: self.fix.0,
            fixed_value: self.fix.1,
            var_from: self.from,
            var_to: self.to,
            points: self.points,
            spacing: self.spacing,
            methods,
        }
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,

    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    methods: Vec<Method>,

    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    format: Format,

    #[command(flatten)]
    numerics: Numerics,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    grid: GridArgs,

    /// Exactly two methods: a,b
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    methods: Vec<Method>,

    #[arg(long)]
    out: Option<PathBuf>,

    #[command(flatten)]
    numerics: Numerics,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum)]
    pulse: Pulse,

    /// Distances; the grid is every xi against every tau
    #[arg(long, value_delimiter = ',', required = true)]
    xi: Vec<f64>,

    #[arg(long, value_delimiter = ',', required = true)]
    tau: Vec<f64>,

    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    methods: Vec<Method>,

    #[arg(long, default_value_t = 3)]
    repeats: usize,

    #[arg(long)]
    out: Option<PathBuf>,

    #[command(flatten)]
    numerics: Numerics,
}

/// Failure with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure { code: EXIT_USAGE, message: format!("csv output error: {e}") }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: format!("i/o error: {e}") }
    }
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn eval_cmd(args: &EvalArgs) -> Result<u8, Failure> {
    let settings = args.numerics.settings()?;
    let coord = match &args.material {
        Some((rho, ge, t_eps)) => {
            let p = MaterialParams::new(*rho, *ge, *t_eps)?;
            to_dimensionless(args.x.unwrap_or_default(), args.t.unwrap_or_default(), &p)?
        }
        None => DimensionlessCoord::new(args.xi.unwrap_or_default(), args.tau.unwrap_or_default())?,
    };
    let start = Instant::now();
    let outcome = evaluate(args.pulse, args.method, &coord, &settings)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let status = if outcome.converged { "ok" } else { "no_converge" };
    let mut out = io::stdout().lock();
    match args.format {
        Format::Text => {
            writeln!(out, "xi              {}", fmt_float(coord.xi))?;
            writeln!(out, "tau             {}", fmt_float(coord.tau))?;
            writeln!(out, "method          {}", args.method.name())?;
            writeln!(out, "value           {}", fmt_float(outcome.value))?;
            writeln!(out, "error_estimate  {}", fmt_float(outcome.error_estimate))?;
            writeln!(out, "function_evals  {}", outcome.function_evals)?;
            writeln!(out, "wall_time_ms    {wall_ms:.3}")?;
            writeln!(out, "status          {status}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            let mut header = CSV_HEADER.to_vec();
            header.push("wall_time_ms");
            w.write_record(header)?;
            w.write_record([
                fmt_float(coord.xi),
                fmt_float(coord.tau),
                args.method.name().to_string(),
                if outcome.converged { fmt_float(outcome.value) } else { String::new() },
                if outcome.error_estimate.is_finite() { fmt_float(outcome.error_estimate) } else { String::new() },
                outcome.function_evals.to_string(),
                status.to_string(),
                format!("{wall_ms:.3}"),
            ])?;
            w.flush()?;
        }
        Format::Json => {
            let v = json!({
                "xi": coord.xi,
                "tau": coord.tau,
                "pulse": args.pulse,
                "method": args.method,
                "value": outcome.value.is_finite().then_some(outcome.value),
                "error_estimate": outcome.error_estimate.is_finite().then_some(outcome.error_estimate),
                "function_evals": outcome.function_evals,
                "wall_time_ms": wall_ms,
                "status": status,
            });
            serde_json::to_writer_pretty(&mut out, &v).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    if outcome.converged {
        Ok(EXIT_OK)
    } else {
        eprintln!("kvwave: {} did not converge (error estimate {:e})", args.method.name(), outcome.error_estimate);
        Ok(EXIT_NUMERICAL)
    }
}

fn sweep_cmd(args: &SweepArgs) -> Result<u8, Failure> {
    let settings = args.numerics.settings()?;
    let rows = run_sweep(&args.grid.spec(args.methods.clone()), &settings)?;
    let mut out = output(&args.out)?;
    match args.format {
        Format::Json => write_json(&rows, &mut out)?,
        _ => write_csv(&rows, &mut out)?,
    }
    out.flush()?;
    let mut failed = 0;
    for r in rows.iter().filter(|r| !r.result.ok()) {
        failed += 1;
        if let Err(e) = &r.result.outcome {
            eprintln!("kvwave: {} at ({}, {}): {e}", r.method.name(), r.coord.xi, r.coord.tau);
        }
    }
    if failed > 0 {
        eprintln!("kvwave: {failed} of {} rows did not converge", rows.len());
        return Ok(EXIT_NUMERICAL);
    }
    Ok(EXIT_OK)
}

fn compare_cmd(args: &CompareArgs) -> Result<u8, Failure> {
    let settings = args.numerics.settings()?;
    let [a, b] = args.methods[..] else {
        return Err(
            Error::InvalidParameter(format!("compare takes exactly two methods, got {}", args.methods.len())).into()
        );
    };
    let report = run_compare(&args.grid.spec(vec![a, b]), a, b, &settings)?;
    let mut out = output(&args.out)?;
    serde_json::to_writer_pretty(&mut out, &report).map_err(io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    if let (Some(d), Some(p)) = (report.max_abs_discrepancy, report.argmax) {
        eprintln!("kvwave: max |{} - {}| = {d:e} at xi = {}, tau = {}", a.name(), b.name(), p.xi, p.tau);
    }
    if !report.all_converged() {
        eprintln!("kvwave: {} points did not converge", report.failed_points);
        return Ok(EXIT_NUMERICAL);
    }
    Ok(EXIT_OK)
}

fn bench_cmd(args: &BenchArgs) -> Result<u8, Failure> {
    let settings = args.numerics.settings()?;
    let mut points = Vec::new();
    for &xi in &args.xi {
        for &tau in &args.tau {
            points.push(DimensionlessCoord::new(xi, tau)?);
        }
    }
    let spec = BenchSpec { pulse: args.pulse, points, methods: args.methods.clone(), repeats: args.repeats };
    let report = run_bench(&spec, &settings)?;
    let mut out = output(&args.out)?;
    serde_json::to_writer_pretty(&mut out, &report).map_err(io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(if report.all_converged() { EXIT_OK } else { EXIT_NUMERICAL })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => eval_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Compare(a) => compare_cmd(a),
        Command::Bench(a) => bench_cmd(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("kvwave: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
