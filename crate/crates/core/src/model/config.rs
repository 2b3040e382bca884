use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::algebra::{AlgebraError, ExactParams, ParamValues};
use crate::matrix::GaugeError;
use crate::ring::{rat, rational_sqrt, JMode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
}

/// Coupling points with rational `s = √(g² + gp²)`.
pub const PYTHAGOREAN_TRIPLES: [(i64, i64, i64); 3] = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub g: BigRational,
    pub gp: BigRational,
    pub r: BigRational,
    pub jmode: JMode,
    pub seed: u64,
    pub samples: usize,
    /// Exact rational arithmetic; requires a rational `s`.
    pub exact: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { g: rat(3, 1), gp: rat(4, 1), r: rat(2, 1), jmode: JMode::Nilpotent, seed: 42, samples: 1000, exact: true }
    }
}

impl ModelConfig {
    pub fn exact(g: BigRational, gp: BigRational, r: BigRational) -> Result<Self, ModelError> {
        let cfg = Self { g, gp, r, exact: true, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn triple(g: i64, gp: i64, r: i64) -> Result<Self, ModelError> {
        Self::exact(rat(g, 1), rat(gp, 1), rat(r, 1))
    }

    pub fn float(g: f64, gp: f64, r: f64) -> Result<Self, ModelError> {
        let conv = |name: &str, v: f64| {
            BigRational::from_float(v).ok_or_else(|| ModelError::Parameter(format!("{name} = {v} is not finite")))
        };
        let cfg = Self { g: conv("g", g)?, gp: conv("gp", gp)?, r: conv("R", r)?, exact: false, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_mode(mut self, mode: JMode) -> Self {
        self.jmode = mode;
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, v) in [("g", &self.g), ("gp", &self.gp), ("R", &self.r)] {
            if !v.is_positive() {
                return Err(ModelError::Parameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.exact && self.s_exact().is_none() {
            return Err(ModelError::Parameter(format!("sqrt(g^2 + gp^2) is irrational for g = {}, gp = {}", self.g, self.gp)));
        }
        Ok(())
    }

    pub fn s_exact(&self) -> Option<BigRational> {
        rational_sqrt(&(&self.g * &self.g + &self.gp * &self.gp))
    }

    /// Exact values of (g, gp, s, R) for instantiating symbolic expressions.
    pub fn exact_params(&self) -> Result<ExactParams, ModelError> {
        let s = self.s_exact().ok_or_else(|| ModelError::Parameter("sqrt(g^2 + gp^2) is irrational".into()))?;
        Ok(ExactParams { g: Some(self.g.clone()), gp: Some(self.gp.clone()), s: Some(s), r: Some(self.r.clone()) })
    }

    pub fn param_values(&self) -> ParamValues {
        let f = |v: &BigRational| v.to_f64().unwrap_or(f64::NAN);
        ParamValues::new(f(&self.g), f(&self.gp), f(&self.r))
    }

    pub fn label(&self) -> String {
        if self.exact {
            format!("g={} gp={} R={}", self.g, self.gp, self.r)
        } else {
            let p = self.param_values();
            format!("g={} gp={} R={}", p.g, p.gp, p.r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_validation() {
        let c = ModelConfig::default();
        assert_eq!(c.s_exact(), Some(rat(5, 1)));
        assert!(ModelConfig::triple(1, 1, 1).is_err());
        assert!(ModelConfig::triple(-3, 4, 2).is_err());
        let f = ModelConfig::float(0.652, 0.357, 2.0).unwrap();
        assert!(!f.exact);
        assert!((f.param_values().s - 0.652f64.hypot(0.357)).abs() < 1e-15);
        assert!(f.exact_params().is_err());
    }
}
