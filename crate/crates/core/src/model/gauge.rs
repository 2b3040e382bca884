//! First-order gauge variations of the Lagrangians.
//!
//! The parameters `omega` and `eps1..3` are ordinary fields, so `omega` and
//! `d[mu]omega` are independent jet symbols and `δL = 0` is a polynomial
//! identity.

use super::basis::{build_graded_symbolic, coupling_normal_form, GradedForm};
use super::config::{ModelConfig, ModelError};
use super::fields::{build_la_with, build_lphi, ex, gauge_potential, su2_components, ExprMatrix, NonlinearSign};
use crate::algebra::{Expression, Field, Rule, Substitution};
use crate::matrix::generator_graded;
use crate::report::{DecisionPath, ReportBuilder, VerificationReport};
use crate::ring::JMode;

fn vector(text: &str) -> Rule {
    Rule::vector("a", ex(text)).expect("rule image carries the hole index")
}

fn vector_expr(e: Expression) -> Result<Rule, ModelError> {
    Ok(Rule::vector("a", e)?)
}

/// Infinitesimal U(1) laws on the physical fields, with `e = g·gp/s`.
pub fn u1_physical_rules() -> Substitution {
    [
        (Field::WPlus, vector("-2*i*omega*W+[a]")),
        (Field::WMinus, vector("2*i*omega*W-[a]")),
        (Field::W3, vector("2*g^-1*d[a]omega")),
        (Field::Aem, vector("2*s*g^-1*gp^-1*d[a]omega")),
    ]
    .into_iter()
    .collect()
}

/// Infinitesimal U(1) laws on the doublet and `B`.
pub fn u1_doublet_rules() -> Substitution {
    [
        (Field::Phi1, Rule::scalar(ex("i*omega*phi1")).expect("scalar image")),
        (Field::Phi2, Rule::scalar(ex("i*omega*phi2")).expect("scalar image")),
        (Field::B, vector("-2*gp^-1*d[a]omega")),
    ]
    .into_iter()
    .collect()
}

/// Infinitesimal SU(2;j) laws for `Ω = 1 + Σ ε_k T_k(j)`:
/// `δφ = εφ`, `δA = [ε, A] − ∂ε`, `δB = 0`.
pub fn su2_rules() -> Result<Substitution, ModelError> {
    let mut eps = ExprMatrix::zero();
    for (k, f) in (1u8..=3).zip([Field::Eps1, Field::Eps2, Field::Eps3]) {
        let t = ExprMatrix::from_gauge(&generator_graded(k)?);
        eps = eps.add(&t.scale(&Expression::field(f, &[])?)?);
    }
    let a = gauge_potential("a", [Field::A1, Field::A2, Field::A3]);
    let da = eps.commutator(&a)?.sub(&eps.derive("a")?);
    let [d1, d2, d3] = su2_components(&da)?;
    let moved = eps.apply(&[ex("phi1"), ex("j*phi2")])?;
    Ok([
        (Field::Phi1, Rule::scalar(moved[0].clone())?),
        (Field::Phi2, Rule::scalar(moved[1].div_j()?)?),
        (Field::A1, vector_expr(d1)?),
        (Field::A2, vector_expr(d2)?),
        (Field::A3, vector_expr(d3)?),
    ]
    .into_iter()
    .collect())
}

/// Records whether `delta` vanishes in `mode`, grade by grade and after reduction.
fn require_zero(b: &mut ReportBuilder, label: &str, delta: &Expression, mode: JMode, cfg: Option<&ModelConfig>) {
    for (grade, part) in delta.j_decompose() {
        let nf = coupling_normal_form(&part);
        b.require(nf.is_zero(), || format!("{label}: grade {grade} leaves {} term(s), first {}", nf.len(), nf.terms()[0]));
    }
    let reduced = delta.reduce_j(mode);
    let reduced = match cfg.map(|c| c.exact_params()) {
        Some(Ok(p)) => reduced.instantiate(&p),
        Some(Err(e)) => {
            b.require(false, || e.to_string());
            return;
        }
        None => coupling_normal_form(&reduced),
    };
    b.require(reduced.is_zero(), || format!("{label}: reduced variation {reduced}"));
}

fn finish(mut b: ReportBuilder, res: Result<(), ModelError>) -> VerificationReport {
    if let Err(e) = res {
        b.require(false, || e.to_string());
    }
    b.finish()
}

/// `δL = 0` for the graded Lagrangian in physical fields under U(1).
pub fn check_u1_invariance(cfg: &ModelConfig) -> VerificationReport {
    check_u1_invariance_of(cfg, GradedForm::Consistent)
}

pub fn check_u1_invariance_of(cfg: &ModelConfig, form: GradedForm) -> VerificationReport {
    let mode = cfg.jmode;
    let mut b = ReportBuilder::new("u1_invariance", mode.label(), DecisionPath::ExactSymbolic, 0.0);
    let res = (|| {
        let l = build_graded_symbolic(form);
        let delta = l.vary(&u1_physical_rules())?;
        let exact = if cfg.exact { Some(cfg) } else { None };
        require_zero(&mut b, "physical fields", &delta, mode, exact);
        let orig = build_la_with(NonlinearSign::Consistent).add(&build_lphi());
        let delta = orig.vary(&u1_doublet_rules())?;
        require_zero(&mut b, "doublet", &delta, mode, exact);
        Ok(())
    })();
    finish(b, res)
}

/// `δ(L_A + L_φ) = 0` under infinitesimal SU(2;j).
pub fn check_su2_invariance(mode: JMode) -> VerificationReport {
    check_su2_invariance_with(mode, NonlinearSign::Consistent)
}

pub fn check_su2_invariance_with(mode: JMode, sign: NonlinearSign) -> VerificationReport {
    let mut b = ReportBuilder::new("su2j_invariance", mode.label(), DecisionPath::ExactSymbolic, 0.0);
    let res = (|| {
        let rules = su2_rules()?;
        let la = build_la_with(sign);
        require_zero(&mut b, "gauge part", &la.vary(&rules)?, mode, None);
        require_zero(&mut b, "matter part", &build_lphi().vary(&rules)?, mode, None);
        Ok(())
    })();
    finish(b, res)
}

/// Constant `ε = ε₃T₃` acting on the doublet alone: a global phase rotation.
pub fn global_phase_variation() -> Result<Expression, ModelError> {
    let t3 = ExprMatrix::from_gauge(&generator_graded(3)?).scale(&ex("eps3"))?;
    let moved = t3.apply(&[ex("phi1"), ex("j*phi2")])?;
    let rules: Substitution = [
        (Field::Phi1, Rule::scalar(moved[0].clone())?),
        (Field::Phi2, Rule::scalar(moved[1].div_j()?)?),
    ]
    .into_iter()
    .collect();
    let free = ex("1/2*conj(phi1)*phi1 + 1/2*j^2*conj(phi2)*phi2");
    Ok(free.vary(&rules)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u1_laws_leave_lagrangians_invariant() {
        for mode in [JMode::One, JMode::Nilpotent] {
            let r = check_u1_invariance(&ModelConfig::default().with_mode(mode));
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn z_mass_term_is_u1_invariant() {
        let d = ex("1/8*s^2*R^2*Z[mu]*Z[mu]").vary(&u1_physical_rules()).unwrap();
        assert!(d.is_zero());
        let d = ex("d[mu]Aem[nu] - d[nu]Aem[mu]").vary(&u1_physical_rules()).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn u1_check_detects_wrong_laws() {
        let cfg = ModelConfig::default();
        assert!(!check_u1_invariance_of(&cfg, GradedForm::Flipped).passed());
        let mut rules = u1_physical_rules();
        rules.insert(Field::Aem, vector("2*d[a]omega"));
        let delta = build_graded_symbolic(GradedForm::Consistent).vary(&rules).unwrap();
        assert!(!coupling_normal_form(&delta).is_zero());
    }

    #[test]
    fn su2_laws_leave_lagrangians_invariant() {
        for mode in [JMode::One, JMode::Nilpotent] {
            let r = check_su2_invariance(mode);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn flipped_commutator_sign_breaks_invariance() {
        let r = check_su2_invariance_with(JMode::One, NonlinearSign::Flipped);
        assert!(!r.passed());
    }

    #[test]
    fn global_phase_is_symmetry() {
        assert!(global_phase_variation().unwrap().is_zero());
    }
}
