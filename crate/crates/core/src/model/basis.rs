//! Physical fields W±, Z, Aem and the graded form `L_b + j²L_f + j⁴L_h`.

use std::sync::OnceLock;

use super::config::{ModelConfig, ModelError};
use super::fields::{build_la, build_matter_radial, ex, matter_radial_display};
use crate::algebra::{equals, EqualityPolicy, Expression, Field, Params, Rule, Substitution, Term};
use crate::report::{DecisionPath, ReportBuilder, VerificationReport};
use crate::ring::{rat, JMode};

fn vector_rule(text: &str) -> Rule {
    Rule::vector("a", ex(text)).expect("rule image carries the hole index")
}

/// `X → jX` for each listed field.
pub fn contraction_rules(fields: &[Field]) -> Substitution {
    fields.iter().map(|f| (*f, vector_rule(&format!("j*{}[a]", f.name())))).collect()
}

/// Renames the SU(2) potentials `A^k` to the radial-gauge fields `W^k`.
pub fn rename_gauge_to_radial(e: &Expression) -> Result<Expression, ModelError> {
    let rules: Substitution =
        [(Field::A1, "W1[a]"), (Field::A2, "W2[a]"), (Field::A3, "W3[a]")].into_iter().map(|(f, t)| (f, vector_rule(t))).collect();
    Ok(e.substitute(&rules)?)
}

/// Rewrites `W¹, W², W³, B` in terms of `W±, Z, Aem`, keeping `s` symbolic.
///
/// `W¹ = (W⁺ + W⁻)/√2` and `W² = i(W⁺ − W⁻)/√2`. The `1/√2` factors are
/// collected per term, so every term must hold an even number of `W¹, W²`.
pub fn physical_basis_symbolic(e: &Expression) -> Result<Expression, ModelError> {
    let mut scaled = Vec::with_capacity(e.len());
    for t in e.terms() {
        let m = t.factors.iter().filter(|f| matches!(f.field, Field::W1 | Field::W2)).count();
        if m % 2 == 1 {
            return Err(ModelError::Parameter(format!("term {t} has an odd number of W1/W2 factors; its image involves sqrt(2)")));
        }
        let half = crate::algebra::rational_pow(&rat(1, 2), (m / 2) as i32);
        scaled.push(Term { coeff: num_complex::Complex::new(&t.coeff.re * &half, &t.coeff.im * &half), ..t.clone() });
    }
    let e = Expression::from_terms(scaled)?;
    let rules: Substitution = [
        (Field::W3, "s^-1*(g*Z[a] + gp*Aem[a])"),
        (Field::B, "s^-1*(gp*Z[a] - g*Aem[a])"),
        (Field::W1, "W+[a] + W-[a]"),
        (Field::W2, "i*(W+[a] - W-[a])"),
    ]
    .into_iter()
    .map(|(f, t)| (f, vector_rule(t)))
    .collect();
    Ok(e.substitute(&rules)?)
}

/// [`physical_basis_symbolic`], instantiated at the exact couplings when the
/// configuration is exact.
pub fn physical_basis(e: &Expression, cfg: &ModelConfig) -> Result<Expression, ModelError> {
    let sym = physical_basis_symbolic(e)?;
    if cfg.exact {
        Ok(sym.instantiate(&cfg.exact_params()?))
    } else {
        Ok(sym)
    }
}

/// Reduces modulo `gp² = s² − g²` after clearing negative powers of `gp`.
/// Two expressions are equal as functions of (g, gp) iff the normal form of
/// their difference vanishes.
pub fn coupling_normal_form(e: &Expression) -> Expression {
    let lift = e.terms().iter().map(|t| t.params.gp).min().unwrap_or(0).min(0);
    let mut work: Vec<Term> = e.scale_params(Params::gp(-lift)).into_terms();
    let mut done = Vec::new();
    while let Some(t) = work.pop() {
        if t.params.gp < 2 {
            done.push(t);
            continue;
        }
        let lower = Params { gp: t.params.gp - 2, ..t.params };
        work.push(Term { params: lower * Params::s(2), ..t.clone() });
        work.push(Term { params: lower * Params::g(2), coeff: -t.coeff.clone(), ..t });
    }
    Expression::from_terms(done).expect("parameter rewriting keeps indices")
}

/// Sign and coefficient set used when assembling the graded Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradedForm {
    /// Signs following from `D = ∂ + A`, quartic coefficient `g²/(2s²)`.
    Consistent,
    /// `H = −ig(...)`, `+igP/(2s)` and `g²S/(2s)`.
    Flipped,
}

/// The graded Lagrangian assembled from its named pieces, `s` symbolic.
pub fn build_graded_symbolic(form: GradedForm) -> Expression {
    let w_plus = ex("d[mu]W+[nu] - d[nu]W+[mu]");
    let w_minus = ex("d[mu]W-[nu] - d[nu]W-[mu]");
    let z_t = ex("d[mu]Z[nu] - d[nu]Z[mu]");
    let a_t = ex("d[mu]Aem[nu] - d[nu]Aem[mu]");
    let (h, p_sign, s_power) = match form {
        GradedForm::Consistent => (ex("i*g*(W+[mu]*W-[nu] - W-[mu]*W+[nu])"), -1, -2),
        GradedForm::Flipped => (ex("-i*g*(W+[mu]*W-[nu] - W-[mu]*W+[nu])"), 1, -1),
    };
    // W^±_μ (gZ_ν + g'A_ν) − (μ ↔ ν)
    let v_plus = ex("W+[mu]*(g*Z[nu] + gp*Aem[nu]) - W+[nu]*(g*Z[mu] + gp*Aem[mu])");
    let v_minus = ex("W-[mu]*(g*Z[nu] + gp*Aem[nu]) - W-[nu]*(g*Z[mu] + gp*Aem[mu])");
    let m = |a: &Expression, b: &Expression| a.mul(b).expect("indices pair up");
    let p = m(&w_plus, &v_minus).sub(&m(&w_minus, &v_plus));
    let s = m(&v_plus, &v_minus);

    let l_b = ex("1/2*d[mu]rho*d[mu]rho + 1/8*s^2*rho^2*Z[mu]*Z[mu]")
        .sub(&m(&a_t, &a_t).scale_rational(1, 4))
        .sub(&m(&z_t, &z_t).scale_rational(1, 4));
    let zh = m(&ex("g*(d[mu]Z[nu] - d[nu]Z[mu]) + gp*(d[mu]Aem[nu] - d[nu]Aem[mu])"), &h);
    let l_f = m(&w_plus, &w_minus)
        .scale_rational(-1, 2)
        .add(&ex("1/4*g^2*rho^2*W+[mu]*W-[mu]"))
        .add(&p.scale(&crate::ring::cr_int(0, p_sign)).scale_params(Params { g: 1, s: -1, ..Params::ONE }).scale_rational(1, 2))
        .sub(&s.scale_params(Params { g: 2, s: s_power, ..Params::ONE }).scale_rational(1, 2))
        .sub(&zh.scale_params(Params::s(-1)).scale_rational(1, 2));
    let l_h = m(&h, &h).scale_rational(-1, 4);
    l_b.add(&l_f.mul_j(2)).add(&l_h.mul_j(4))
}

pub fn build_graded_lagrangian(cfg: &ModelConfig, form: GradedForm) -> Result<Expression, ModelError> {
    let sym = build_graded_symbolic(form);
    if cfg.exact {
        Ok(sym.instantiate(&cfg.exact_params()?))
    } else {
        Ok(sym)
    }
}

struct Routes {
    /// Graded gauge part plus radial matter part, then physical fields.
    direct: Expression,
    /// Ungraded Lagrangian, contraction `W¹,² → jW¹,²`, then physical fields.
    contract_first: Expression,
    /// Ungraded Lagrangian in physical fields, then `W± → jW±`.
    contract_last: Expression,
}

fn routes() -> &'static Routes {
    static CELL: OnceLock<Routes> = OnceLock::new();
    CELL.get_or_init(|| {
        let la = rename_gauge_to_radial(&build_la()).expect("renaming");
        let radial = build_matter_radial();
        let direct = physical_basis_symbolic(&la.add(&radial)).expect("even W1/W2 counts");
        let ungraded = la.reduce_j(JMode::One).add(&radial.reduce_j(JMode::One));
        let contracted = ungraded.substitute(&contraction_rules(&[Field::W1, Field::W2])).expect("contraction");
        let contract_first = physical_basis_symbolic(&contracted).expect("even W1/W2 counts");
        let contract_last = physical_basis_symbolic(&ungraded)
            .and_then(|e| Ok(e.substitute(&contraction_rules(&[Field::WPlus, Field::WMinus]))?))
            .expect("contraction");
        Routes { direct, contract_first, contract_last }
    })
}

/// The full Lagrangian after the radial change of variables, in physical fields
/// with `s` symbolic.
pub fn transformed_lagrangian() -> &'static Expression {
    &routes().direct
}

fn compare(
    b: &mut ReportBuilder,
    label: &str,
    lhs: &Expression,
    rhs: &Expression,
    cfg: &ModelConfig,
) -> Result<(), ModelError> {
    if cfg.exact {
        let params = cfg.exact_params()?;
        let diff = lhs.instantiate(&params).sub(&rhs.instantiate(&params));
        let err = diff.terms().iter().map(|t| crate::ring::cr_to_f64(&t.coeff).norm()).fold(0.0, f64::max);
        let first = diff.terms().first().map(|t| t.to_string()).unwrap_or_default();
        b.error(if diff.is_zero() { 0.0 } else { err.max(f64::MIN_POSITIVE) }, || {
            format!("{label}: {} residual term(s), first {first}", diff.len())
        });
    } else {
        let policy = EqualityPolicy { params: cfg.param_values(), seed: cfg.seed, ..EqualityPolicy::default() };
        let eq = equals(lhs, rhs, &policy)?;
        if eq.path == DecisionPath::NumericOracle {
            b.path(DecisionPath::NumericOracle);
        }
        b.error(eq.residual, || format!("{label}: {}", eq.witness.clone().unwrap_or_default()));
    }
    Ok(())
}

/// Checks that the radially transformed Lagrangian in physical fields equals
/// the assembled graded form, by three independent routes.
pub fn verify_grading(cfg: &ModelConfig) -> VerificationReport {
    verify_grading_against(cfg, GradedForm::Consistent)
}

pub fn verify_grading_against(cfg: &ModelConfig, form: GradedForm) -> VerificationReport {
    let (path, tol) = if cfg.exact { (DecisionPath::ExactSymbolic, 0.0) } else { (DecisionPath::NumericOracle, 1e-9) };
    let mut b = ReportBuilder::new("grading_identity", format!("{} {}", cfg.jmode.label(), cfg.label()), path, tol);
    let r = routes();
    let rhs = build_graded_symbolic(form);
    b.require(rhs.j_grades() == [0, 2, 4].into(), || format!("assembled grades {:?}", rhs.j_grades()));
    for (label, lhs) in [("direct", &r.direct), ("contract-first", &r.contract_first), ("contract-last", &r.contract_last)] {
        b.require(lhs.j_grades() == [0, 2, 4].into(), || format!("{label}: grades {:?}", lhs.j_grades()));
        if let Err(e) = compare(&mut b, label, lhs, &rhs, cfg) {
            b.require(false, || format!("{label}: {e}"));
        }
    }
    if cfg.exact {
        let symbolic = coupling_normal_form(&r.direct.sub(&rhs)).is_zero();
        b.note(format!("identity modulo s^2 = g^2 + gp^2 for all couplings: {symbolic}"));
    }
    b.finish()
}

/// Radial matter Lagrangian against its displayed physical-field form.
pub fn verify_matter_radial(cfg: &ModelConfig) -> VerificationReport {
    let (path, tol) = if cfg.exact { (DecisionPath::ExactSymbolic, 0.0) } else { (DecisionPath::NumericOracle, 1e-9) };
    let mut b = ReportBuilder::new("matter_radial_identity", format!("{} {}", cfg.jmode.label(), cfg.label()), path, tol);
    match physical_basis_symbolic(&build_matter_radial()) {
        Ok(lhs) => {
            let rhs = matter_radial_display();
            if let Err(e) = compare(&mut b, "matter", &lhs, &rhs, cfg) {
                b.require(false, || e.to_string());
            }
            let zz = lhs.filter(|t| t.factors.iter().all(|f| matches!(f.field, Field::Z | Field::Rho)) && t.factors.len() == 4);
            b.note(format!("rho^2 Z Z coefficient: {zz}"));
        }
        Err(e) => {
            b.require(false, || e.to_string());
        }
    }
    b.finish()
}
