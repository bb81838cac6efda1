//! Adaptive Gauss–Kronrod integration on finite and semi-infinite intervals.
//!
//! Finite intervals use a 7/15-point Gauss–Kronrod pair with global
//! bisection of the interval carrying the largest error. Semi-infinite
//! intervals are truncated at a point chosen from a caller-supplied decay
//! envelope, and the envelope's tail integral is added to the error budget.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (positive half, descending) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// 7-point Gauss weights, at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and budgets for one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Share of the error budget that may be spent on a truncated tail.
    pub tail_tol_fraction: f64,
}

impl QuadSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize, tail_tol_fraction: f64) -> Result<Self> {
        let spec = Self { rel_tol, abs_tol, max_subdivisions, tail_tol_fraction };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return bad(format!("rel_tol must be > 0, got {}", self.rel_tol));
        }
        if !(self.abs_tol >= 0.0) || !self.abs_tol.is_finite() {
            return bad(format!("abs_tol must be >= 0, got {}", self.abs_tol));
        }
        if self.rel_tol < 1e3 * f64::EPSILON && self.abs_tol < f64::MIN_POSITIVE {
            return bad("rel_tol and abs_tol are both effectively zero".into());
        }
        if self.max_subdivisions == 0 {
            return bad("max_subdivisions must be >= 1".into());
        }
        if !(self.tail_tol_fraction > 0.0 && self.tail_tol_fraction < 1.0) {
            return bad(format!("tail_tol_fraction must lie in (0, 1), got {}", self.tail_tol_fraction));
        }
        Ok(())
    }

    /// Acceptable absolute error for a result of size `value`.
    pub fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    /// Same budgets, both tolerances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { rel_tol: self.rel_tol * factor, abs_tol: self.abs_tol * factor, ..*self }
    }
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_subdivisions: 200, tail_tol_fraction: 0.1 }
    }
}

/// Result of a numerical evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOutcome {
    pub value: f64,
    pub error_estimate: f64,
    pub function_evals: usize,
    pub converged: bool,
}

impl EvalOutcome {
    /// A value known in closed form.
    pub fn exact(value: f64) -> Self {
        Self { value, error_estimate: 0.0, function_evals: 0, converged: true }
    }

    /// A refused evaluation: no value, flagged as not converged.
    pub fn refused(function_evals: usize) -> Self {
        Self { value: f64::NAN, error_estimate: f64::INFINITY, function_evals, converged: false }
    }

    /// Multiply value and error by a constant factor.
    pub fn scale(self, factor: f64) -> Self {
        Self { value: self.value * factor, error_estimate: self.error_estimate * factor.abs(), ..self }
    }

    /// Sum of two outcomes; errors and costs add.
    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            function_evals: self.function_evals + other.function_evals,
            converged: self.converged && other.converged,
        }
    }

    /// Re-check the convergence flag against `spec` for the final value.
    pub fn certify(mut self, spec: &QuadSpec) -> Self {
        self.converged =
            self.converged && self.value.is_finite() && self.error_estimate <= spec.tolerance_for(self.value);
        self
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // Largest error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One 15-point Kronrod evaluation with the QUADPACK error heuristic.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Segment { a, b, value, error }
}

fn sum_in_order(segments: &[Segment]) -> (f64, f64) {
    let mut sorted: Vec<Segment> = segments.to_vec();
    sorted.sort_by(|x, y| x.a.total_cmp(&y.a));
    sorted.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
}

/// Integrate `f` over `[a, b]`.
///
/// Running out of subdivisions yields a non-converged outcome carrying the
/// best available value and its error estimate.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<EvalOutcome> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidParameter(format!(
            "integration interval must be finite with a <= b, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(EvalOutcome::exact(0.0));
    }

    let first = gk15(&f, a, b);
    let mut evals = 15;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut total_value = first.value;
    let mut total_error = first.error;

    loop {
        if total_error.is_finite() && total_error <= spec.tolerance_for(total_value) {
            break;
        }
        if heap.len() >= spec.max_subdivisions {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval can no longer be split in f64
            heap.push(worst);
            break;
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        evals += 30;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if !total_error.is_finite() && heap.iter().any(|s| !s.value.is_finite()) {
            break;
        }
    }

    // Recompute the totals in a fixed order to drop the running-sum drift.
    let segments = heap.into_vec();
    let (value, error) = sum_in_order(&segments);
    let converged = value.is_finite() && error <= spec.tolerance_for(value);
    Ok(EvalOutcome { value, error_estimate: error, function_evals: evals, converged })
}

enum Envelope<'a> {
    /// `E(v) = exp(phi(v))` with `phi` concave on the validity range.
    LogConcave { phi: Box<dyn Fn(f64) -> f64 + Sync + 'a>, dphi: Box<dyn Fn(f64) -> f64 + Sync + 'a> },
    /// `E(v) = coeff * v^(-exponent)`, `exponent > 1`.
    PowerLaw { coeff: f64, exponent: f64 },
}

/// Certified upper envelope `E(v) >= |f(v)|` for `v >= valid_from`, with a
/// closed-form bound on its tail integral.
pub struct DecayHint<'a> {
    envelope: Envelope<'a>,
    valid_from: f64,
}

impl<'a> DecayHint<'a> {
    /// `E(v) = exp(phi(v))` where `phi` is concave for `v >= valid_from`.
    /// `dphi` must be the derivative of `phi`. The tail past a point `V`
    /// where `phi'(V) < 0` is bounded by `exp(phi(V)) / |phi'(V)|`.
    pub fn log_concave(
        valid_from: f64,
        phi: impl Fn(f64) -> f64 + Sync + 'a,
        dphi: impl Fn(f64) -> f64 + Sync + 'a,
    ) -> Self {
        Self { envelope: Envelope::LogConcave { phi: Box::new(phi), dphi: Box::new(dphi) }, valid_from }
    }

    /// `E(v) = exp(log_amplitude - rate * v)`.
    pub fn exponential(log_amplitude: f64, rate: f64) -> Self {
        Self::log_concave(f64::NEG_INFINITY, move |v| log_amplitude - rate * v, move |_| -rate)
    }

    /// `E(v) = exp(log_amplitude - (v / width)^2)`.
    pub fn gaussian(log_amplitude: f64, width: f64) -> Self {
        let w2 = width * width;
        Self::log_concave(f64::NEG_INFINITY, move |v| log_amplitude - v * v / w2, move |v| -2.0 * v / w2)
    }

    /// `E(v) = coeff * v^(-exponent)` for `v >= valid_from > 0`.
    pub fn power_law(valid_from: f64, coeff: f64, exponent: f64) -> Self {
        Self { envelope: Envelope::PowerLaw { coeff, exponent }, valid_from }
    }

    pub fn valid_from(&self) -> f64 {
        self.valid_from
    }

    /// Upper bound on `int_v^inf E`, or infinity when no bound is available at `v`.
    pub fn tail_bound(&self, v: f64) -> f64 {
        if v < self.valid_from {
            return f64::INFINITY;
        }
        match &self.envelope {
            Envelope::LogConcave { phi, dphi } => {
                let slope = dphi(v);
                if slope < 0.0 && slope.is_finite() {
                    (phi(v) - (-slope).ln()).exp()
                } else {
                    f64::INFINITY
                }
            }
            Envelope::PowerLaw { coeff, exponent } => {
                if *exponent > 1.0 && v > 0.0 {
                    coeff * v.powf(1.0 - exponent) / (exponent - 1.0)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    fn check(&self) -> Result<()> {
        if let Envelope::PowerLaw { coeff, exponent } = self.envelope {
            if !(exponent > 1.0) || !(coeff >= 0.0) || !(self.valid_from > 0.0) {
                return Err(Error::Configuration(format!(
                    "power-law envelope is not integrable (coeff {coeff}, exponent {exponent}, from {})",
                    self.valid_from
                )));
            }
        }
        Ok(())
    }

    /// Smallest `V >= start` (to bisection accuracy) whose tail bound is within `budget`.
    pub fn truncation_point(&self, start: f64, budget: f64) -> Result<f64> {
        self.check()?;
        let lo0 = start.max(self.valid_from);
        if !lo0.is_finite() || !(budget > 0.0) {
            return Err(Error::Configuration(format!(
                "cannot place truncation point from {start} with budget {budget}"
            )));
        }
        let ok = |v: f64| self.tail_bound(v) <= budget;
        if ok(lo0) {
            return Ok(lo0);
        }
        let mut step = lo0.abs().max(1.0);
        let mut lo = lo0;
        let mut hi = lo0 + step;
        let mut tries = 0;
        while !ok(hi) {
            lo = hi;
            step *= 2.0;
            hi = lo0 + step;
            tries += 1;
            if tries > 200 || !hi.is_finite() {
                return Err(Error::Configuration(format!(
                    "no truncation point found beyond {start} for tail budget {budget:e}"
                )));
            }
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if !(mid > lo && mid < hi) {
                break;
            }
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-6 * hi.abs().max(1.0) {
                break;
            }
        }
        Ok(hi)
    }
}

/// Integrate `f` over `[a, inf)` using `decay` to place a truncation point.
///
/// The returned error estimate includes the envelope's tail bound.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    decay: &DecayHint<'_>,
    spec: &QuadSpec,
) -> Result<EvalOutcome> {
    spec.validate()?;
    if !a.is_finite() {
        return Err(Error::InvalidParameter(format!("lower limit must be finite, got {a}")));
    }
    let budget = if spec.abs_tol > 0.0 {
        spec.tail_tol_fraction * spec.abs_tol
    } else {
        // Pure relative tolerance: size the tail against a pilot estimate.
        let v0 = decay.truncation_point(a, 1e-3)?;
        let pilot = integrate_finite(&f, a, v0.max(a), &spec.scaled(1e3))?;
        let scale = pilot.value.abs().max(f64::MIN_POSITIVE);
        spec.tail_tol_fraction * spec.rel_tol * scale
    };
    let cutoff = decay.truncation_point(a, budget)?;
    let tail = decay.tail_bound(cutoff);
    let finite_spec = spec.scaled(1.0 - spec.tail_tol_fraction);
    let body = integrate_finite(&f, a, cutoff, &finite_spec)?;
    let out = EvalOutcome {
        value: body.value,
        error_estimate: body.error_estimate + tail,
        function_evals: body.function_evals,
        converged: body.converged,
    };
    Ok(out.certify(spec))
}
