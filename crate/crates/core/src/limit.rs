//! Behaviour of the graded Lagrangian as `j → 0`: power-law suppression of the
//! fiber and quartic parts, decoupling of the base field equations, and the
//! mode independence of the mass spectrum.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{euler_lagrange, eval_numeric, AlgebraError, Expression, Field, Params, RandomFields, Rule, Substitution};
use crate::model::{build_graded_symbolic, extract_masses, GradedForm, MassSpectrum, ModelConfig, ModelError};
use crate::report::{DecisionPath, ReportBuilder, VerificationReport};
use crate::ring::{rat, JMode};
use crate::rng::seeded;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("invalid sweep input: {0}")]
    Input(String),
    #[error("degenerate sample: |L_b| stayed below {threshold} after {attempts} draws")]
    DegenerateSample { threshold: f64, attempts: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Draws with `|L_b|` below this are discarded and redrawn.
pub const DEGENERATE_THRESHOLD: f64 = 1e-12;
const MAX_REDRAWS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub j_values: Vec<f64>,
    /// Mean of `|j²L_f| / |L_b|` per `j`.
    pub ratios_f: Vec<f64>,
    /// Mean of `|j⁴L_h| / |L_b|` per `j`.
    pub ratios_h: Vec<f64>,
    pub slope_f: f64,
    pub slope_h: f64,
    /// The smaller of the two coefficients of determination.
    pub fit_r2: f64,
    pub redraws: usize,
}

impl ScalingReport {
    /// Rows `j,ratio_f,ratio_h` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,ratio_f,ratio_h\n");
        for ((j, f), h) in self.j_values.iter().zip(&self.ratios_f).zip(&self.ratios_h) {
            out.push_str(&format!("{j:e},{f:e},{h:e}\n"));
        }
        out
    }
}

/// `count` values spaced evenly in `log j` from `hi` down to `lo`.
pub fn log_spaced(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    let (a, b) = (hi.ln(), lo.ln());
    let n = count.max(2) - 1;
    (0..=n).map(|k| (a + (b - a) * k as f64 / n as f64).exp()).collect()
}

/// Least-squares slope and R² of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, r2)
}

/// `L_b`, `j²L_f` and `j⁴L_h`, each keeping its power of `j`.
fn graded_parts(cfg: &ModelConfig) -> Result<[Expression; 3], LimitError> {
    let l = build_graded_symbolic(GradedForm::Consistent);
    let l = if cfg.exact { l.instantiate(&cfg.exact_params()?) } else { l };
    let parts = l.j_decompose();
    let grade = |k| parts.get(&k).cloned().unwrap_or_else(Expression::zero);
    Ok([grade(0), grade(2).mul_j(2), grade(4).mul_j(4)])
}

fn sample_seed(seed: u64, i: usize) -> u64 {
    seeded(seed, "sweep").random::<u64>() ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Mean suppression ratios of the fiber and quartic parts over random field
/// configurations with real fields real and `W⁻ = conj(W⁺)`.
pub fn scaling_sweep(j_values: &[f64], samples: usize, cfg: &ModelConfig, seed: u64) -> Result<ScalingReport, LimitError> {
    if j_values.len() < 2 {
        return Err(LimitError::Input("need at least two j values".into()));
    }
    if let Some(j) = j_values.iter().find(|j| !(**j > 0.0 && **j < 1.0)) {
        return Err(LimitError::Input(format!("j = {j} is outside (0, 1)")));
    }
    if j_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(LimitError::Input("j values must be strictly decreasing".into()));
    }
    if samples < 10 {
        return Err(LimitError::Input(format!("samples = {samples}, need at least 10")));
    }
    cfg.validate()?;
    let [base, fiber, quartic] = graded_parts(cfg)?;
    let params = cfg.param_values();
    let free = BTreeMap::new();
    let mut sum_f = vec![0.0; j_values.len()];
    let mut sum_h = vec![0.0; j_values.len()];
    let mut redraws = 0;
    let mut draw = 0;
    for _ in 0..samples {
        let mut attempts = 0;
        let mut fields = loop {
            let mut f = RandomFields::physical(sample_seed(seed, draw));
            draw += 1;
            let b = eval_numeric(&base, &mut f, &params, 1.0, &free)?.norm();
            if b >= DEGENERATE_THRESHOLD {
                break f;
            }
            redraws += 1;
            attempts += 1;
            if attempts >= MAX_REDRAWS {
                return Err(LimitError::DegenerateSample { threshold: DEGENERATE_THRESHOLD, attempts });
            }
        };
        for (k, &j) in j_values.iter().enumerate() {
            let b = eval_numeric(&base, &mut fields, &params, j, &free)?.norm();
            sum_f[k] += eval_numeric(&fiber, &mut fields, &params, j, &free)?.norm() / b;
            sum_h[k] += eval_numeric(&quartic, &mut fields, &params, j, &free)?.norm() / b;
        }
    }
    let n = samples as f64;
    let ratios_f: Vec<f64> = sum_f.iter().map(|s| s / n).collect();
    let ratios_h: Vec<f64> = sum_h.iter().map(|s| s / n).collect();
    let lx: Vec<f64> = j_values.iter().map(|j| j.ln()).collect();
    let ln = |v: &[f64]| v.iter().map(|x| x.ln()).collect::<Vec<_>>();
    let (slope_f, r2_f) = linear_fit(&lx, &ln(&ratios_f));
    let (slope_h, r2_h) = linear_fit(&lx, &ln(&ratios_h));
    Ok(ScalingReport { j_values: j_values.to_vec(), ratios_f, ratios_h, slope_f, slope_h, fit_r2: r2_f.min(r2_h), redraws })
}

/// Sweep acceptance: slopes `2 ± 0.01` and `4 ± 0.02` with R² ≥ 0.999.
pub fn scaling_verdict(r: &ScalingReport) -> VerificationReport {
    let mut b = ReportBuilder::new("scaling_sweep", "numeric", DecisionPath::NumericOracle, 0.02);
    b.error((r.slope_f - 2.0).abs() * 2.0, || format!("slope_f = {}", r.slope_f));
    b.error((r.slope_h - 4.0).abs(), || format!("slope_h = {}", r.slope_h));
    b.require(r.fit_r2 >= 0.999, || format!("fit R^2 = {}", r.fit_r2));
    b.note(format!("slope_f = {:.6}, slope_h = {:.6}, R^2 = {:.9}, redraws = {}", r.slope_f, r.slope_h, r.fit_r2, r.redraws));
    b.finish()
}

pub fn verify_scaling(j_values: &[f64], samples: usize, cfg: &ModelConfig, seed: u64) -> VerificationReport {
    match scaling_sweep(j_values, samples, cfg, seed) {
        Ok(r) => scaling_verdict(&r),
        Err(e) => {
            let mut b = ReportBuilder::new("scaling_sweep", "numeric", DecisionPath::NumericOracle, 0.02);
            b.require(false, || e.to_string());
            b.finish()
        }
    }
}

/// The graded Lagrangian with `ρ` frozen at `R`.
pub fn frozen_lagrangian(cfg: &ModelConfig) -> Result<Expression, LimitError> {
    let rules: Substitution = [(Field::Rho, Rule::scalar(Expression::param(Params::r(1)))?)].into_iter().collect();
    let l = build_graded_symbolic(GradedForm::Consistent).substitute(&rules)?;
    Ok(if cfg.exact { l.instantiate(&cfg.exact_params()?) } else { l })
}

/// Field equation of `field` reduced in `mode`. In Nilpotent mode the lowest
/// power of `j` is cancelled first, so the equation keeps its leading part.
pub fn field_equation(l: &Expression, field: Field, mode: JMode) -> Result<Expression, LimitError> {
    let eq = euler_lagrange(l, field, false, "mu")?;
    Ok(match mode {
        JMode::Nilpotent => eq.nilpotent_leading(),
        m => eq.reduce_j(m),
    })
}

const W_PAIR: [Field; 2] = [Field::WPlus, Field::WMinus];
const BASE: [Field; 2] = [Field::Z, Field::Aem];

/// Base equations free of `W±` at `j = ι`, coupled at `j = 1`; the `W⁺`
/// equation still sees `Z` and `Aem` at `j = ι`.
pub fn decoupling_check(cfg: &ModelConfig) -> VerificationReport {
    let mut b = ReportBuilder::new("decoupling", "iota,1", DecisionPath::ExactSymbolic, 0.0);
    let res = (|| -> Result<(), LimitError> {
        let l = frozen_lagrangian(cfg)?;
        for f in BASE {
            let nil = field_equation(&l, f, JMode::Nilpotent)?;
            b.require(!nil.is_zero(), || format!("{} equation vanishes at j=iota", f.name()));
            b.require(!nil.contains_any(&W_PAIR), || format!("{} equation at j=iota: {nil}", f.name()));
            let one = field_equation(&l, f, JMode::One)?;
            b.require(one.contains_any(&W_PAIR), || format!("{} equation at j=1 has no W terms: {one}", f.name()));
            b.note(format!("{} at j=iota: {nil}", f.name()));
        }
        let w = field_equation(&l, Field::WPlus, JMode::Nilpotent)?;
        b.require(w.contains_any(&BASE), || format!("W+ equation at j=iota: {w}"));
        b.note(format!("W+ at j=iota: {w}"));
        Ok(())
    })();
    if let Err(e) = res {
        b.require(false, || e.to_string());
    }
    b.finish()
}

fn spectrum_distance(a: &MassSpectrum, b: &MassSpectrum) -> f64 {
    if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
        return if x == y { 0.0 } else { f64::INFINITY };
    }
    [(a.m_a, b.m_a), (a.m_z, b.m_z), (a.m_w, b.m_w), (a.e_charge, b.e_charge), (a.cos_theta_w, b.cos_theta_w)]
        .iter()
        .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// Spectrum at `j = 1` against the spectrum at `j = ι`.
pub fn mass_invariance_check(cfg: &ModelConfig) -> VerificationReport {
    let tol = if cfg.exact { 0.0 } else { 1e-12 };
    let path = if cfg.exact { DecisionPath::ExactSymbolic } else { DecisionPath::NumericOracle };
    let mut b = ReportBuilder::new("mass_invariance", cfg.label(), path, tol);
    let one = extract_masses(&cfg.clone().with_mode(JMode::One));
    let nil = extract_masses(&cfg.clone().with_mode(JMode::Nilpotent));
    match (one, nil) {
        (Ok(x), Ok(y)) => {
            b.error(spectrum_distance(&x, &y), || format!("j=1: {x:?}, j=iota: {y:?}"));
        }
        (Err(e), _) | (_, Err(e)) => {
            b.require(false, || e.to_string());
        }
    }
    b.finish()
}

/// A random exact configuration: `(g, gp, s) = k(m² − n², 2mn, m² + n²)`
/// with a random rational radius.
pub fn random_exact_config(rng: &mut impl Rng) -> ModelConfig {
    loop {
        let m: i64 = rng.random_range(2..=9);
        let n: i64 = rng.random_range(1..m);
        let k = rat(rng.random_range(1..=5), rng.random_range(1..=4));
        let (a, c) = (rat(m * m - n * n, 1) * &k, rat(2 * m * n, 1) * &k);
        let (g, gp) = if rng.random::<bool>() { (a, c) } else { (c, a) };
        let r = rat(rng.random_range(1..=12), rng.random_range(1..=5));
        if !g.is_zero() {
            if let Ok(cfg) = ModelConfig::exact(g, gp, r) {
                return cfg;
            }
        }
    }
}

/// [`mass_invariance_check`] over `count` random exact configurations.
pub fn mass_invariance_sweep(count: usize, seed: u64) -> VerificationReport {
    let mut b = ReportBuilder::new("mass_invariance", "random", DecisionPath::ExactSymbolic, 0.0);
    let mut rng = seeded(seed, "mass_invariance");
    for _ in 0..count {
        let cfg = random_exact_config(&mut rng);
        let r = mass_invariance_check(&cfg);
        b.error(r.max_abs_error, || format!("{}: {}", cfg.label(), r.witness.clone().unwrap_or_default()));
        b.require(r.passed(), || format!("{}: {}", cfg.label(), r.witness.clone().unwrap_or_default()));
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_power_law() {
        let x: Vec<f64> = [0.1f64, 0.01, 0.001].iter().map(|j| j.ln()).collect();
        let y: Vec<f64> = x.iter().map(|l| 3.0 * l + 1.0).collect();
        let (s, r2) = linear_fit(&x, &y);
        assert!((s - 3.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_spacing_is_decreasing() {
        let v = log_spaced(1e-1, 1e-3, 5);
        assert_eq!(v.len(), 5);
        assert!((v[2] - 1e-2).abs() < 1e-15);
        assert!(v.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn sweep_rejects_bad_input() {
        let cfg = ModelConfig::default();
        assert!(scaling_sweep(&[0.1, 0.2], 10, &cfg, 1).is_err());
        assert!(scaling_sweep(&[1.0, 0.1], 10, &cfg, 1).is_err());
        assert!(scaling_sweep(&[0.1, 0.01], 5, &cfg, 1).is_err());
    }

    #[test]
    fn halving_j_quarters_fiber_ratio() {
        let cfg = ModelConfig::default();
        let r = scaling_sweep(&[0.2, 0.1], 10, &cfg, 3).unwrap();
        assert!((r.ratios_f[0] / r.ratios_f[1] - 4.0).abs() < 1e-9, "{r:?}");
        assert!((r.ratios_h[0] / r.ratios_h[1] - 16.0).abs() < 1e-9);
        assert!(r.to_csv().starts_with("j,ratio_f,ratio_h\n"));
    }

    #[test]
    fn base_decouples_at_iota() {
        let r = decoupling_check(&ModelConfig::default());
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn masses_survive_contraction() {
        let r = mass_invariance_check(&ModelConfig::default());
        assert!(r.passed(), "{r:?}");
        let r = mass_invariance_sweep(5, 9);
        assert!(r.passed(), "{r:?}");
    }
}
