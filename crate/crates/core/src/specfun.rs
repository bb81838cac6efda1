//! Special functions used by the response integrands.
//!
//! Everything here is real-valued and tuned for the argument ranges the
//! kernels produce: `erfc`/`erfcx` over the whole real line, and the
//! hypergeometric series for non-negative arguments.

use crate::error::{Error, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Below this the positive erf series is used, above it the continued fraction.
const ERF_SERIES_LIMIT: f64 = 1.0;

/// Above `2 sqrt(z)` = this value the scaled I0 switches to its asymptotic expansion.
const BESSEL_ASYMPTOTIC_FROM: f64 = 40.0;

/// Truncation control for the power series in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    rel_tol: f64,
    max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::InvalidParameter(format!("series rel_tol must lie in (0, 1), got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::InvalidParameter("series max_terms must be >= 1".into()));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-15, max_terms: 500 }
    }
}

/// `exp(-x^2)` with the rounding error of `x*x` folded back in.
fn exp_neg_sq(x: f64) -> f64 {
    let sq = x * x;
    let lo = x.mul_add(x, -sq);
    (-sq).exp() * (-lo).exp()
}

/// `erf(x)` for `0 <= x < ERF_SERIES_LIMIT`, from the all-positive series
/// `erf(x) = 2x/sqrt(pi) e^{-x^2} sum (2x^2)^n / (2n+1)!!`.
fn erf_series(x: f64) -> f64 {
    let two_x2 = 2.0 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= two_x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * x * exp_neg_sq(x) * sum
}

/// `erfcx(x)` for `x >= ERF_SERIES_LIMIT`: even contraction of the Laplace
/// continued fraction, evaluated with modified Lentz.
fn erfcx_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let base = 2.0 * x * x + 1.0;
    let mut f = base;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..=500 {
        let nf = n as f64;
        let a = -(2.0 * nf - 1.0) * (2.0 * nf);
        let b = base + 4.0 * nf;
        d = b + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            break;
        }
    }
    FRAC_2_SQRT_PI * x / f
}

/// `erfcx` restricted to `x >= 0`; always finite and in `(0, 1]`.
pub(crate) fn erfcx_nonneg(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < ERF_SERIES_LIMIT {
        (x * x).exp() * (1.0 - erf_series(x))
    } else if x < 1e8 {
        erfcx_continued_fraction(x)
    } else {
        // 1/(x sqrt(pi)) (1 - 1/(2x^2)); the correction is below an ulp here
        FRAC_1_SQRT_PI / x
    }
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < ERF_SERIES_LIMIT {
        1.0 - erf_series(x)
    } else if x > 27.3 {
        0.0
    } else {
        erfcx_nonneg(x) * exp_neg_sq(x)
    }
}

/// Exponentially scaled complementary error function `exp(x^2) erfc(x)`.
///
/// Fails with [`Error::Overflow`] for negative `x` where `exp(x^2)` is not
/// representable.
pub fn erfcx(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Ok(f64::NAN);
    }
    if x >= 0.0 {
        return Ok(erfcx_nonneg(x));
    }
    let sq = x * x;
    if sq > 709.0 {
        return Err(Error::Overflow(x));
    }
    let lo = x.mul_add(x, -sq);
    let grown = 2.0 * sq.exp() * lo.exp();
    let value = grown - erfcx_nonneg(-x);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(x))
    }
}

fn check_nonneg(z: f64) -> Result<()> {
    if z >= 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("hypergeometric argument must be finite and >= 0, got {z}")))
    }
}

/// Sum of a positive series given its term-ratio function.
///
/// Stops once terms have started to shrink and the latest is below
/// `rel_tol` times the partial sum.
fn positive_series(ctl: &SeriesControl, mut ratio: impl FnMut(f64) -> f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..ctl.max_terms {
        let r = ratio(k as f64);
        term *= r;
        sum += term;
        if r < 1.0 && term <= ctl.rel_tol * sum {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNonConvergence { terms: ctl.max_terms })
}

/// Regularized confluent limit function `0F1~(;1;z) = sum z^k / (k!)^2`,
/// i.e. `I0(2 sqrt z)`.
pub fn hyp0f1_reg1(z: f64, ctl: &SeriesControl) -> Result<f64> {
    check_nonneg(z)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    positive_series(ctl, |k| z / (k * k))
}

/// Scaled form of [`hyp0f1_reg1`]: returns `(mantissa, log_scale)` with
/// `log_scale = 2 sqrt(z)` and `mantissa * exp(log_scale)` equal to the
/// function value. The mantissa lies in `(0, 1]` for every `z >= 0`.
pub fn hyp0f1_reg1_scaled(z: f64, ctl: &SeriesControl) -> Result<(f64, f64)> {
    check_nonneg(z)?;
    let x = 2.0 * z.sqrt();
    if x <= BESSEL_ASYMPTOTIC_FROM {
        let sum = if z == 0.0 { 1.0 } else { positive_series(ctl, |k| z / (k * k))? };
        return Ok((sum * (-x).exp(), x));
    }
    // I0(x) e^{-x} ~ 1/sqrt(2 pi x) sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut converged = false;
    for k in 1..ctl.max_terms {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * kf * x);
        if next > term {
            break;
        }
        term = next;
        sum += term;
        if term <= ctl.rel_tol * sum {
            converged = true;
            break;
        }
    }
    if !converged && term > 1e3 * ctl.rel_tol * sum {
        return Err(Error::SeriesNonConvergence { terms: ctl.max_terms });
    }
    Ok((sum / (2.0 * std::f64::consts::PI * x).sqrt(), x))
}

/// Generalized hypergeometric `0F2(;b1,b2;z)` for `b1, b2 > 0`, `z >= 0`.
pub fn hyp0f2(b1: f64, b2: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(b1 > 0.0 && b2 > 0.0 && b1.is_finite() && b2.is_finite()) {
        return Err(Error::InvalidParameter(format!("0F2 lower parameters must be positive, got ({b1}, {b2})")));
    }
    check_nonneg(z)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    positive_series(ctl, |k| z / ((b1 + k - 1.0) * (b2 + k - 1.0) * k))
}
