//! Mass spectrum read off the quadratic, derivative-free terms at `ρ = R`.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::basis::transformed_lagrangian;
use super::config::{ModelConfig, ModelError};
use crate::algebra::{Expression, Field, Params, Rule, Substitution, Term};
use crate::ring::{cr_to_f64, rational_sqrt, JMode};

fn as_string<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Rational values, present when every mass is rational.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactSpectrum {
    #[serde(serialize_with = "as_string")]
    pub m_a: BigRational,
    #[serde(serialize_with = "as_string")]
    pub m_z: BigRational,
    #[serde(serialize_with = "as_string")]
    pub m_w: BigRational,
    #[serde(serialize_with = "as_string")]
    pub e_charge: BigRational,
    #[serde(serialize_with = "as_string")]
    pub cos_theta_w: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassSpectrum {
    pub m_a: f64,
    pub m_z: f64,
    pub m_w: f64,
    pub e_charge: f64,
    pub cos_theta_w: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactSpectrum>,
}

/// Quadratic coefficients of `Z·Z`, `Aem·Aem`, `Z·Aem` and `W⁺·W⁻`.
struct Quadratic<T> {
    zz: T,
    aa: T,
    za: T,
    ww: T,
}

fn is_mass_term(t: &Term, a: Field, b: Field) -> bool {
    match t.factors.as_slice() {
        [x, y] => {
            x.derivs.is_empty()
                && y.derivs.is_empty()
                && x.indices == y.indices
                && ((x.field, y.field) == (a, b) || (x.field, y.field) == (b, a))
        }
        _ => false,
    }
}

fn coefficient(l: &Expression, a: Field, b: Field) -> Expression {
    l.filter(|t| is_mass_term(t, a, b))
}

/// The Lagrangian at `ρ = R` whose mass terms are read in `mode`.
fn mass_sources(mode: JMode) -> Result<(Expression, Expression), ModelError> {
    let rules: Substitution = [(Field::Rho, Rule::scalar(Expression::param(Params::r(1)))?)].into_iter().collect();
    let l = transformed_lagrangian().substitute(&rules)?;
    Ok(match mode {
        JMode::Nilpotent => {
            let parts = l.j_decompose();
            let grade = |k| parts.get(&k).cloned().unwrap_or_else(Expression::zero);
            (grade(0), grade(2))
        }
        _ => {
            let one = l.reduce_j(JMode::One);
            (one.clone(), one)
        }
    })
}

fn quadratic(mode: JMode) -> Result<Quadratic<Expression>, ModelError> {
    let (base, fiber) = mass_sources(mode)?;
    Ok(Quadratic {
        zz: coefficient(&base, Field::Z, Field::Z),
        aa: coefficient(&base, Field::Aem, Field::Aem),
        za: coefficient(&base, Field::Z, Field::Aem),
        ww: coefficient(&fiber, Field::WPlus, Field::WMinus),
    })
}

fn exact_sum(e: &Expression) -> BigRational {
    e.terms().iter().fold(BigRational::zero(), |acc, t| acc + &t.coeff.re)
}

fn float_sum(e: &Expression, cfg: &ModelConfig) -> f64 {
    let p = cfg.param_values();
    e.terms().iter().map(|t| cr_to_f64(&t.coeff).re * p.monomial(&t.params)).sum()
}

fn mass_from_square(m2: f64) -> Result<f64, ModelError> {
    if m2 < -1e-12 * m2.abs().max(1.0) {
        return Err(ModelError::Parameter(format!("negative squared mass {m2}")));
    }
    Ok(m2.max(0.0).sqrt())
}

/// Reads `½m²VV` for `Z` and `Aem` and `m²W⁺W⁻` for the charged pair.
///
/// Nilpotent mode reads the neutral masses from the base grade and the
/// charged mass from the leading fiber grade; mode One from the full sum.
pub fn extract_masses(cfg: &ModelConfig) -> Result<MassSpectrum, ModelError> {
    cfg.validate()?;
    let q = quadratic(cfg.jmode)?;
    if cfg.exact {
        let p = cfg.exact_params()?;
        let v = Quadratic {
            zz: exact_sum(&q.zz.instantiate(&p)),
            aa: exact_sum(&q.aa.instantiate(&p)),
            za: exact_sum(&q.za.instantiate(&p)),
            ww: exact_sum(&q.ww.instantiate(&p)),
        };
        if !v.za.is_zero() {
            return Err(ModelError::Parameter(format!("Z-Aem mixing coefficient {}", v.za)));
        }
        let two = BigRational::from_integer(2.into());
        let squares = [&v.aa * &two, &v.zz * &two, v.ww.clone()];
        if squares.iter().any(|m2| m2.is_negative()) {
            return Err(ModelError::Parameter("negative squared mass".into()));
        }
        let s = p.s.expect("exact s");
        let e_charge = &cfg.g * &cfg.gp / &s;
        let cos = &cfg.g / &s;
        let roots: Option<Vec<BigRational>> = squares.iter().map(rational_sqrt).collect();
        let f = |v: &BigRational| v.to_f64().unwrap_or(f64::NAN);
        let fm = |m2: &BigRational| f(m2).max(0.0).sqrt();
        return Ok(MassSpectrum {
            m_a: fm(&squares[0]),
            m_z: fm(&squares[1]),
            m_w: fm(&squares[2]),
            e_charge: f(&e_charge),
            cos_theta_w: f(&cos),
            exact: roots.map(|r| {
                let [m_a, m_z, m_w]: [BigRational; 3] = r.try_into().expect("three masses");
                ExactSpectrum { m_a, m_z, m_w, e_charge, cos_theta_w: cos }
            }),
        });
    }
    let v = Quadratic {
        zz: float_sum(&q.zz, cfg),
        aa: float_sum(&q.aa, cfg),
        za: float_sum(&q.za, cfg),
        ww: float_sum(&q.ww, cfg),
    };
    let p = cfg.param_values();
    if v.za.abs() > 1e-12 * v.zz.abs().max(1.0) {
        return Err(ModelError::Parameter(format!("Z-Aem mixing coefficient {}", v.za)));
    }
    Ok(MassSpectrum {
        m_a: mass_from_square(2.0 * v.aa)?,
        m_z: mass_from_square(2.0 * v.zz)?,
        m_w: mass_from_square(v.ww)?,
        e_charge: p.g * p.gp / p.s,
        cos_theta_w: p.g / p.s,
        exact: None,
    })
}

/// Float inputs with `m_W = w` and `cos θ = w/z`, so that `m_Z = z` is expected.
pub fn calibrated_config(w: f64, z: f64, g: f64) -> Result<ModelConfig, ModelError> {
    let gp = g * (z * z - w * w).sqrt() / w;
    ModelConfig::float(g, gp, 2.0 * w / g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn default_triple_spectrum() {
        for mode in [JMode::One, JMode::Nilpotent] {
            let m = extract_masses(&ModelConfig::default().with_mode(mode)).unwrap();
            let x = m.exact.unwrap();
            assert_eq!((x.m_w, x.m_z, x.m_a), (rat(3, 1), rat(5, 1), rat(0, 1)));
            assert_eq!((x.e_charge, x.cos_theta_w), (rat(12, 5), rat(3, 5)));
        }
    }

    #[test]
    fn calibrated_masses() {
        let cfg = calibrated_config(80.0, 91.0, 0.652).unwrap();
        let m = extract_masses(&cfg).unwrap();
        assert!((m.m_w - 80.0).abs() / 80.0 < 1e-10);
        assert!((m.m_z - 91.0).abs() / 91.0 < 1e-10);
        assert!((m.cos_theta_w - 80.0 / 91.0).abs() < 1e-12);
        assert_eq!(m.m_a, 0.0);
    }

    #[test]
    fn serializes_rationals_as_strings() {
        let m = extract_masses(&ModelConfig::default()).unwrap();
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["exact"]["e_charge"], "12/5");
        assert_eq!(v["m_z"], 5.0);
    }
}
