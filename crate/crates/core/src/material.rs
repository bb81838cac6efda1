//! Medium constants and the dimensionless coordinates `(xi, tau)`.

use crate::error::{Error, Result};

/// Kelvin–Voigt medium: density, equilibrium modulus and retardation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    rho: f64,
    ge: f64,
    t_eps: f64,
}

impl MaterialParams {
    pub fn new(rho: f64, ge: f64, t_eps: f64) -> Result<Self> {
        for (name, v) in [("rho", rho), ("Ge", ge), ("t_eps", t_eps)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { rho, ge, t_eps })
    }

    /// Unit material: `rho = Ge = t_eps = 1`, so dimensional and dimensionless coordinates coincide.
    pub fn unit() -> Self {
        Self { rho: 1.0, ge: 1.0, t_eps: 1.0 }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn ge(&self) -> f64 {
        self.ge
    }

    pub fn t_eps(&self) -> f64 {
        self.t_eps
    }

    /// Velocity scale `c' = sqrt(Ge / rho)`.
    pub fn velocity(&self) -> f64 {
        (self.ge / self.rho).sqrt()
    }
}

/// Evaluation point in dimensionless distance and time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessCoord {
    pub xi: f64,
    pub tau: f64,
}

impl DimensionlessCoord {
    /// Requires `xi >= 0` and `tau > 0`.
    pub fn new(xi: f64, tau: f64) -> Result<Self> {
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::InvalidParameter(format!("xi must be finite and >= 0, got {xi}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau must be finite and > 0, got {tau}")));
        }
        Ok(Self { xi, tau })
    }
}

/// Map a physical point `(x, t)` to `(xi, tau) = (x / (c' t_eps), t / t_eps)`.
pub fn to_dimensionless(x: f64, t: f64, p: &MaterialParams) -> Result<DimensionlessCoord> {
    if !(x >= 0.0) {
        return Err(Error::InvalidParameter(format!("x must be >= 0, got {x}")));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be > 0, got {t}")));
    }
    DimensionlessCoord::new(x / (p.velocity() * p.t_eps), t / p.t_eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn material_validation() {
        assert!(MaterialParams::new(0.0, 1.0, 1.0).is_err());
        assert!(MaterialParams::new(1.0, -1.0, 1.0).is_err());
        assert!(MaterialParams::new(1.0, 1.0, f64::NAN).is_err());
        assert_eq!(MaterialParams::new(4.0, 1.0, 2.0).unwrap().velocity(), 0.5);
    }

    #[test]
    fn mapping_examples() {
        let unit = MaterialParams::unit();
        assert_eq!(to_dimensionless(0.0, 3.0, &unit).unwrap().xi, 0.0);
        let c = to_dimensionless(0.5, 0.5, &unit).unwrap();
        assert_eq!((c.xi, c.tau), (0.5, 0.5));
        let p = MaterialParams::new(4.0, 1.0, 2.0).unwrap();
        let c = to_dimensionless(1.0, 1.0, &p).unwrap();
        assert_eq!((c.xi, c.tau), (1.0, 0.5));
    }

    #[test]
    fn coordinate_domain() {
        assert!(DimensionlessCoord::new(-0.1, 1.0).is_err());
        assert!(DimensionlessCoord::new(0.1, 0.0).is_err());
        assert!(to_dimensionless(1.0, 0.0, &MaterialParams::unit()).is_err());
        assert!(to_dimensionless(-1.0, 1.0, &MaterialParams::unit()).is_err());
    }
}
