//! Derivatives, substitution, first-order variation and field equations.

use std::collections::BTreeMap;

use super::{AlgebraError, Expression, Field, FieldFactor, Index, Term};

/// Replacement for one field. Vector fields carry a placeholder index that is
/// renamed to the index of each occurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    hole: Option<Index>,
    image: Expression,
}

pub type Substitution = BTreeMap<Field, Rule>;

impl Rule {
    pub fn vector(hole: &str, image: Expression) -> Result<Self, AlgebraError> {
        let hole = Index::new(hole);
        for t in image.terms() {
            let free = t.free_indices();
            if free.len() != 1 || !free.contains(&hole) {
                return Err(AlgebraError::Arity { field: format!("image of [{hole}]"), expected: 1, found: free.len() });
            }
        }
        Ok(Self { hole: Some(hole), image })
    }

    pub fn scalar(image: Expression) -> Result<Self, AlgebraError> {
        for t in image.terms() {
            let free = t.free_indices();
            if !free.is_empty() {
                return Err(AlgebraError::Arity { field: "scalar image".into(), expected: 0, found: free.len() });
            }
        }
        Ok(Self { hole: None, image })
    }

    pub fn image(&self) -> &Expression {
        &self.image
    }

    /// Image of one occurrence, with its derivatives and conjugation applied.
    fn apply(&self, f: &FieldFactor) -> Result<Expression, AlgebraError> {
        let arity_err = || AlgebraError::Arity {
            field: f.field.name().into(),
            expected: f.indices.len(),
            found: usize::from(self.hole.is_some()),
        };
        let mut map = BTreeMap::new();
        match (&self.hole, f.indices.as_slice()) {
            (Some(h), [i]) => {
                map.insert(h.clone(), i.clone());
            }
            (None, []) => {}
            _ => return Err(arity_err()),
        }
        let terms = self.image.terms().iter().map(|t| {
            let mut t = t.rename_dummies_apart("r");
            t.rename(&map);
            t
        });
        let mut img = Expression::from_terms(terms)?;
        if f.conj {
            img = img.conj();
        }
        for d in &f.derivs {
            img = derive(&img, d)?;
        }
        Ok(img)
    }
}

fn scalar_part(t: &Term) -> Expression {
    Expression::from_canonical_terms(vec![Term { factors: Vec::new(), ..t.clone() }])
}

pub(crate) fn derive(e: &Expression, idx: &Index) -> Result<Expression, AlgebraError> {
    let mut out = Vec::new();
    for t in e.terms() {
        let t = t.rename_dummies_apart("d");
        for k in 0..t.factors.len() {
            let mut nt = t.clone();
            nt.factors[k].derivs.push(idx.clone());
            out.push(nt);
        }
    }
    Expression::from_terms(out)
}

pub(crate) fn substitute(e: &Expression, rules: &Substitution) -> Result<Expression, AlgebraError> {
    let mut total = Expression::zero();
    for t in e.terms() {
        let t = t.rename_dummies_apart("o");
        let mut acc = scalar_part(&t);
        for f in &t.factors {
            let img = match rules.get(&f.field) {
                Some(rule) => rule.apply(f)?,
                None => Expression::from_factor(f.clone())?,
            };
            acc = acc.mul(&img)?;
            if acc.is_zero() {
                break;
            }
        }
        total = total.add(&acc);
    }
    Ok(total)
}

pub(crate) fn vary(e: &Expression, rules: &Substitution) -> Result<Expression, AlgebraError> {
    let mut total = Expression::zero();
    for t in e.terms() {
        let t = t.rename_dummies_apart("o");
        for (p, target) in t.factors.iter().enumerate() {
            let Some(rule) = rules.get(&target.field) else { continue };
            let mut acc = scalar_part(&t);
            for (k, f) in t.factors.iter().enumerate() {
                let img = if k == p { rule.apply(f)? } else { Expression::from_factor(f.clone())? };
                acc = acc.mul(&img)?;
            }
            total = total.add(&acc);
        }
    }
    Ok(total)
}

/// Formal partial derivative by the component `field[free]` (with one
/// derivative `d[deriv]` when given); conjugate components are independent.
fn partial(e: &Expression, field: Field, conj: bool, free: Option<&Index>, deriv: Option<&Index>) -> Result<Expression, AlgebraError> {
    let mut out = Vec::new();
    for t in e.terms() {
        let t = t.rename_dummies_apart("o");
        for (k, f) in t.factors.iter().enumerate() {
            if f.field != field || f.conj != conj || f.derivs.len() != usize::from(deriv.is_some()) {
                continue;
            }
            let mut rest = t.clone();
            rest.factors.remove(k);
            let counts = rest.index_counts();
            let mut map = BTreeMap::new();
            let pairs = f.indices.iter().zip(free).chain(f.derivs.iter().zip(deriv));
            for (own, target) in pairs {
                if counts.get(own) != Some(&1) {
                    return Err(AlgebraError::Unsupported(format!(
                        "index {own} of {} is not contracted with another factor",
                        f.field
                    )));
                }
                map.insert(own.clone(), target.clone());
            }
            rest.rename(&map);
            out.push(rest);
        }
    }
    Expression::from_terms(out)
}

/// Euler–Lagrange expression `∂L/∂X − ∂_μ ∂L/∂(∂_μ X)` for the component `X`
/// (a conjugate component when `conj`). Vector fields get the free index `free`.
pub fn euler_lagrange(l: &Expression, field: Field, conj: bool, free: &str) -> Result<Expression, AlgebraError> {
    if !l.free_indices().is_empty() {
        let names: Vec<String> = l.free_indices().iter().map(|i| i.to_string()).collect();
        return Err(AlgebraError::NotScalar(names.join(",")));
    }
    if l.terms().iter().flat_map(|t| t.factors.iter()).any(|f| f.field == field && f.derivs.len() > 1) {
        return Err(AlgebraError::Unsupported("field equations for higher-derivative terms".into()));
    }
    let free = Index::new(free);
    let target = (field.arity() == 1).then_some(&free);
    let mu = Index::new("_e0");
    let direct = partial(l, field, conj, target, None)?;
    let momentum = partial(l, field, conj, target, Some(&mu))?;
    Ok(direct.sub(&derive(&momentum, &mu)?))
}

/// [`euler_lagrange`] with the component given by name, e.g. `"W+"` or `"conj(phi1)"`.
pub fn euler_lagrange_named(l: &Expression, name: &str, free: &str) -> Result<Expression, AlgebraError> {
    let (inner, conj) = match name.strip_prefix("conj(").and_then(|s| s.strip_suffix(')')) {
        Some(inner) => (inner, true),
        None => (name, false),
    };
    let field = Field::from_name(inner).ok_or_else(|| AlgebraError::UnknownField(name.into()))?;
    euler_lagrange(l, field, conj, free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse;

    fn p(s: &str) -> Expression {
        parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn derivative_obeys_leibniz() {
        assert_eq!(p("Z[mu]*rho").derive("nu").unwrap(), p("d[nu]Z[mu]*rho + Z[mu]*d[nu]rho"));
        // summed labels inside the operand never capture the new index
        let e = p("Z[mu]*Z[mu]").derive("mu").unwrap();
        assert_eq!(e, p("2*Z[nu]*d[mu]Z[nu]"));
        assert_eq!(p("3").derive("mu").unwrap(), Expression::zero());
    }

    #[test]
    fn substitution_threads_indices_and_derivatives() {
        let mut rules = Substitution::new();
        rules.insert(Field::W3, Rule::vector("a", p("s^-1*g*Z[a] + s^-1*gp*Aem[a]")).unwrap());
        let e = p("d[mu]W3[nu]*d[mu]W3[nu]").substitute(&rules).unwrap();
        let want = p("s^-2*(g*d[mu]Z[nu] + gp*d[mu]Aem[nu])*(g*d[mu]Z[nu] + gp*d[mu]Aem[nu])");
        assert_eq!(e, want);
    }

    #[test]
    fn substitution_checks_arity() {
        assert!(Rule::vector("a", p("rho")).is_err());
        assert!(Rule::scalar(p("Z[mu]")).is_err());
        let mut rules = Substitution::new();
        rules.insert(Field::Rho, Rule::vector("a", p("Z[a]")).unwrap());
        assert!(matches!(p("rho").substitute(&rules), Err(AlgebraError::Arity { .. })));
    }

    #[test]
    fn conjugate_occurrences_take_conjugate_image() {
        let mut rules = Substitution::new();
        rules.insert(Field::Phi1, Rule::scalar(p("i*rho")).unwrap());
        assert_eq!(p("conj(phi1)*phi1").substitute(&rules).unwrap(), p("rho^2"));
    }

    #[test]
    fn variation_is_first_order() {
        let mut rules = Substitution::new();
        rules.insert(Field::Rho, Rule::scalar(p("omega")).unwrap());
        assert_eq!(p("rho^3").vary(&rules).unwrap(), p("3*rho^2*omega"));
    }

    #[test]
    fn field_equation_of_free_vector() {
        // L = -1/4 F F, F = dA - dA, gives d_mu F_mu_nu
        let l = p("-1/2*d[mu]Z[nu]*d[mu]Z[nu] + 1/2*d[mu]Z[nu]*d[nu]Z[mu] + 1/2*R^2*Z[mu]*Z[mu]");
        let eq = euler_lagrange(&l, Field::Z, false, "nu").unwrap();
        assert_eq!(eq, p("d[mu]d[mu]Z[nu] - d[mu]d[nu]Z[mu] + R^2*Z[nu]"));
    }

    #[test]
    fn field_equation_of_complex_scalar() {
        let l = p("d[mu]conj(phi1)*d[mu]phi1 - conj(phi1)*phi1*conj(phi1)*phi1");
        let eq = euler_lagrange_named(&l, "conj(phi1)", "nu").unwrap();
        assert_eq!(eq, p("-d[mu]d[mu]phi1 - 2*conj(phi1)*phi1*phi1"));
        assert!(euler_lagrange_named(&l, "phi9", "nu").is_err());
    }
}
