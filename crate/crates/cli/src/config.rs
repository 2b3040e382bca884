//! Model configuration from a JSON file and command-line overrides.

use std::path::Path;

use ewlimit_core::model::ModelConfig;
use ewlimit_core::ring::{parse_rational, rational_sqrt};
use ewlimit_core::JMode;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid config key `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: &str, message: impl Into<String>) -> Self {
        Self { key: key.into(), message: message.into() }
    }
}

/// Raw settings before validation. Later sources override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub g: Option<String>,
    pub gp: Option<String>,
    pub r: Option<String>,
    pub jmode: Option<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub exact: Option<bool>,
}

impl Settings {
    pub fn merge(self, over: Settings) -> Settings {
        Settings {
            g: over.g.or(self.g),
            gp: over.gp.or(self.gp),
            r: over.r.or(self.r),
            jmode: over.jmode.or(self.jmode),
            seed: over.seed.or(self.seed),
            samples: over.samples.or(self.samples),
            exact: over.exact.or(self.exact),
        }
    }

    pub fn from_json(text: &str) -> Result<Settings, ConfigError> {
        if text.trim().is_empty() {
            return Ok(Settings::default());
        }
        let v: Value = serde_json::from_str(text).map_err(|e| ConfigError::new("<file>", e.to_string()))?;
        let Value::Object(map) = v else {
            return Err(ConfigError::new("<file>", "expected a JSON object"));
        };
        let mut s = Settings::default();
        for (key, val) in map {
            match key.as_str() {
                "g" => s.g = Some(scalar_text(&key, &val)?),
                "gp" => s.gp = Some(scalar_text(&key, &val)?),
                "R" => s.r = Some(scalar_text(&key, &val)?),
                "jmode" => s.jmode = Some(scalar_text(&key, &val)?),
                "seed" => s.seed = Some(val.as_u64().ok_or_else(|| ConfigError::new(&key, "expected a non-negative integer"))?),
                "samples" => {
                    let n = val.as_u64().ok_or_else(|| ConfigError::new(&key, "expected a positive integer"))?;
                    s.samples = Some(n as usize);
                }
                "exact" => s.exact = Some(val.as_bool().ok_or_else(|| ConfigError::new(&key, "expected true or false"))?),
                _ => return Err(ConfigError::new(&key, "unknown key")),
            }
        }
        Ok(s)
    }

    /// Validated configuration. Without an explicit `exact`, exact arithmetic
    /// is used whenever `√(g² + gp²)` is rational.
    pub fn resolve(&self) -> Result<ModelConfig, ConfigError> {
        let d = ModelConfig::default();
        let g = positive("g", self.g.as_deref(), d.g)?;
        let gp = positive("gp", self.gp.as_deref(), d.gp)?;
        let r = positive("R", self.r.as_deref(), d.r)?;
        let jmode = match &self.jmode {
            Some(t) => JMode::parse(t).map_err(|e| ConfigError::new("jmode", e.to_string()))?,
            None => d.jmode,
        };
        let samples = self.samples.unwrap_or(d.samples);
        if samples == 0 {
            return Err(ConfigError::new("samples", "must be at least 1"));
        }
        let rational_s = rational_sqrt(&(&g * &g + &gp * &gp)).is_some();
        let exact = match self.exact {
            Some(true) if !rational_s => {
                return Err(ConfigError::new("exact", "sqrt(g^2 + gp^2) is irrational for these couplings"));
            }
            Some(e) => e,
            None => rational_s,
        };
        let cfg = ModelConfig { g, gp, r, jmode, seed: self.seed.unwrap_or(d.seed), samples, exact };
        cfg.validate().map_err(|e| ConfigError::new("<config>", e.to_string()))?;
        Ok(cfg)
    }
}

fn scalar_text(key: &str, v: &Value) -> Result<String, ConfigError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(ConfigError::new(key, "expected a number or a string")),
    }
}

fn positive(key: &str, text: Option<&str>, default: BigRational) -> Result<BigRational, ConfigError> {
    let Some(t) = text else { return Ok(default) };
    let v = parse_rational(t).ok_or_else(|| ConfigError::new(key, format!("cannot parse {t:?} as a number")))?;
    if !v.is_positive() {
        return Err(ConfigError::new(key, format!("must be positive, got {t}")));
    }
    Ok(v)
}

/// Reads and validates a JSON config file.
pub fn load_config(path: &Path) -> Result<ModelConfig, ConfigError> {
    load_settings(path)?.resolve()
}

pub fn load_settings(path: &Path) -> Result<Settings, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new("<file>", format!("{}: {e}", path.display())))?;
    Settings::from_json(&text)
}
