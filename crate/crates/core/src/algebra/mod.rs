//! Symbolic polynomials in classical field components.
//!
//! An [`Expression`] is a sum of [`Term`]s. Each term carries an exact complex
//! rational coefficient, a power of the contraction parameter `j`, a Laurent
//! monomial in the couplings (`g`, `gp`, `s = √(g²+gp²)`, `R`) and a product of
//! [`FieldFactor`]s. Lorentz indices are abstract: an index name occurring
//! once in a term is free, twice is summed, and more than twice is an error.
//!
//! Expressions are always kept canonical: factors sorted, summed indices
//! renamed to the lexicographically smallest labelling, like terms merged and
//! zero terms dropped. Two expressions that differ only by relabelling of
//! summed indices or by reordering of commuting factors compare equal.

mod calculus;
mod canon;
mod numeric;
mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ring::{cr, cr_int, cr_is_zero, ComplexRational, JMode};

pub use calculus::{euler_lagrange, euler_lagrange_named, Rule, Substitution};
pub use numeric::{
    equals, eval_numeric, Equality, EqualityPolicy, FieldInstance, FixedAssignment, ParamValues, RandomFields, Valuation,
};
pub use parse::{parse, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("index {0} used more than twice in one term")]
    Index(String),
    #[error("field {field} takes {expected} index(es), got {found}")]
    Arity { field: String, expected: usize, found: usize },
    #[error("unknown field {0}")]
    UnknownField(String),
    #[error("no value assigned to {0}")]
    MissingAssignment(String),
    #[error("free index {0} is not bound")]
    UnboundIndex(String),
    #[error("expression is not a scalar: free indices {0}")]
    NotScalar(String),
    #[error("division by j undefined: a term has j-degree 0")]
    DivisionUndefined,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Declared field symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    A1,
    A2,
    A3,
    B,
    W1,
    W2,
    W3,
    WPlus,
    WMinus,
    Z,
    Aem,
    Rho,
    Phi1,
    Phi2,
    Omega,
    Eps1,
    Eps2,
    Eps3,
}

/// How a field behaves under complex conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reality {
    Real,
    Complex,
    /// The conjugate of this field is another declared field.
    Partner(Field),
}

impl Field {
    pub const ALL: [Field; 18] = [
        Field::A1,
        Field::A2,
        Field::A3,
        Field::B,
        Field::W1,
        Field::W2,
        Field::W3,
        Field::WPlus,
        Field::WMinus,
        Field::Z,
        Field::Aem,
        Field::Rho,
        Field::Phi1,
        Field::Phi2,
        Field::Omega,
        Field::Eps1,
        Field::Eps2,
        Field::Eps3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Field::A1 => "A1",
            Field::A2 => "A2",
            Field::A3 => "A3",
            Field::B => "B",
            Field::W1 => "W1",
            Field::W2 => "W2",
            Field::W3 => "W3",
            Field::WPlus => "W+",
            Field::WMinus => "W-",
            Field::Z => "Z",
            Field::Aem => "Aem",
            Field::Rho => "rho",
            Field::Phi1 => "phi1",
            Field::Phi2 => "phi2",
            Field::Omega => "omega",
            Field::Eps1 => "eps1",
            Field::Eps2 => "eps2",
            Field::Eps3 => "eps3",
        }
    }

    pub fn from_name(name: &str) -> Option<Field> {
        let name = name.replace('−', "-").replace('⁺', "+").replace('⁻', "-");
        Field::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Number of Lorentz indices.
    pub fn arity(self) -> usize {
        match self {
            Field::Rho | Field::Phi1 | Field::Phi2 | Field::Omega | Field::Eps1 | Field::Eps2 | Field::Eps3 => 0,
            _ => 1,
        }
    }

    pub fn reality(self) -> Reality {
        match self {
            Field::WPlus => Reality::Partner(Field::WMinus),
            Field::WMinus => Reality::Partner(Field::WPlus),
            Field::Phi1 | Field::Phi2 => Reality::Complex,
            _ => Reality::Real,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Abstract Lorentz index label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index(Box<str>);

impl Index {
    pub fn new(name: &str) -> Self {
        Index(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Index {
    fn from(s: &str) -> Self {
        Index::new(s)
    }
}

/// One field component, with its outer derivatives and conjugation flag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldFactor {
    pub field: Field,
    pub indices: Vec<Index>,
    /// Outer derivatives; derivatives commute, so this is kept sorted.
    pub derivs: Vec<Index>,
    pub conj: bool,
}

impl FieldFactor {
    pub fn new(field: Field, indices: &[&str]) -> Result<Self, AlgebraError> {
        if indices.len() != field.arity() {
            return Err(AlgebraError::Arity { field: field.name().into(), expected: field.arity(), found: indices.len() });
        }
        Ok(Self { field, indices: indices.iter().map(|s| Index::new(s)).collect(), derivs: Vec::new(), conj: false })
    }

    pub fn with_derivs(mut self, derivs: &[&str]) -> Self {
        self.derivs.extend(derivs.iter().map(|s| Index::new(s)));
        self.derivs.sort();
        self
    }

    pub fn conjugated(&self) -> Self {
        let mut f = self.clone();
        f.conj = !f.conj;
        f.normalize_conj();
        f
    }

    /// Real fields drop the flag; partnered fields swap to their partner.
    fn normalize_conj(&mut self) {
        if !self.conj {
            return;
        }
        match self.field.reality() {
            Reality::Real => self.conj = false,
            Reality::Partner(p) => {
                self.field = p;
                self.conj = false;
            }
            Reality::Complex => {}
        }
    }

    pub(crate) fn all_indices(&self) -> impl Iterator<Item = &Index> {
        self.indices.iter().chain(self.derivs.iter())
    }

    fn rename(&mut self, map: &BTreeMap<Index, Index>) {
        for i in self.indices.iter_mut().chain(self.derivs.iter_mut()) {
            if let Some(n) = map.get(i) {
                *i = n.clone();
            }
        }
        self.derivs.sort();
    }
}

/// Laurent monomial g^g · gp^gp · s^s · R^r in the model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Params {
    pub g: i32,
    pub gp: i32,
    pub s: i32,
    pub r: i32,
}

impl Params {
    pub const ONE: Params = Params { g: 0, gp: 0, s: 0, r: 0 };

    pub fn g(n: i32) -> Self {
        Params { g: n, ..Self::ONE }
    }
    pub fn gp(n: i32) -> Self {
        Params { gp: n, ..Self::ONE }
    }
    pub fn s(n: i32) -> Self {
        Params { s: n, ..Self::ONE }
    }
    pub fn r(n: i32) -> Self {
        Params { r: n, ..Self::ONE }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn inv(self) -> Params {
        Params { g: -self.g, gp: -self.gp, s: -self.s, r: -self.r }
    }
}

impl std::ops::Mul for Params {
    type Output = Params;

    fn mul(self, o: Params) -> Params {
        Params { g: self.g + o.g, gp: self.gp + o.gp, s: self.s + o.s, r: self.r + o.r }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: ComplexRational,
    pub jdeg: u32,
    pub params: Params,
    pub factors: Vec<FieldFactor>,
}

type TermKey = (u32, Params, Vec<FieldFactor>);

impl Term {
    pub fn constant(coeff: ComplexRational) -> Self {
        Term { coeff, jdeg: 0, params: Params::ONE, factors: Vec::new() }
    }

    pub fn from_factors(factors: Vec<FieldFactor>) -> Self {
        Term { coeff: cr_int(1, 0), jdeg: 0, params: Params::ONE, factors }
    }

    /// Index names with their occurrence counts.
    pub fn index_counts(&self) -> BTreeMap<Index, usize> {
        let mut counts = BTreeMap::new();
        for i in self.factors.iter().flat_map(|f| f.all_indices()) {
            *counts.entry(i.clone()).or_insert(0) += 1;
        }
        counts
    }

    pub fn free_indices(&self) -> BTreeSet<Index> {
        self.index_counts().into_iter().filter(|(_, c)| *c == 1).map(|(i, _)| i).collect()
    }

    /// Renames summed indices to `_{tag}{n}` so they cannot clash with anything
    /// supplied from outside.
    pub(crate) fn rename_dummies_apart(&self, tag: &str) -> Term {
        let mut map = BTreeMap::new();
        for (n, (i, _)) in self.index_counts().into_iter().filter(|(_, c)| *c == 2).enumerate() {
            map.insert(i, Index::new(&format!("_{tag}{n}")));
        }
        if map.is_empty() {
            return self.clone();
        }
        let mut t = self.clone();
        for f in &mut t.factors {
            f.rename(&map);
        }
        t
    }

    pub(crate) fn rename(&mut self, map: &BTreeMap<Index, Index>) {
        for f in &mut self.factors {
            f.rename(map);
        }
    }

    pub fn contains_field(&self, field: Field) -> bool {
        self.factors.iter().any(|f| f.field == field)
    }

    fn key(self) -> (TermKey, ComplexRational) {
        ((self.jdeg, self.params, self.factors), self.coeff)
    }
}

/// Canonical sum of terms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expression {
    terms: Vec<Term>,
}

impl Expression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(cr_int(1, 0))
    }

    pub fn constant(c: ComplexRational) -> Self {
        Self::from_canonical_terms(vec![Term::constant(c)])
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Self::constant(cr(crate::ring::rat(n, d), BigRational::zero()))
    }

    pub fn imag(n: i64, d: i64) -> Self {
        Self::constant(cr(BigRational::zero(), crate::ring::rat(n, d)))
    }

    /// `j^k`.
    pub fn j_pow(k: u32) -> Self {
        Self::from_canonical_terms(vec![Term { jdeg: k, ..Term::constant(cr_int(1, 0)) }])
    }

    pub fn param(p: Params) -> Self {
        Self::from_canonical_terms(vec![Term { params: p, ..Term::constant(cr_int(1, 0)) }])
    }

    /// A single field component, e.g. `field(Field::Z, &["mu"])`.
    pub fn field(field: Field, indices: &[&str]) -> Result<Self, AlgebraError> {
        Self::from_factor(FieldFactor::new(field, indices)?)
    }

    pub fn from_factor(f: FieldFactor) -> Result<Self, AlgebraError> {
        Self::from_terms(vec![Term::from_factors(vec![f])])
    }

    /// Canonicalizes and merges arbitrary terms.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Result<Self, AlgebraError> {
        let mut acc: BTreeMap<TermKey, ComplexRational> = BTreeMap::new();
        for t in terms {
            if cr_is_zero(&t.coeff) {
                continue;
            }
            let t = canon::canonical_term(t)?;
            let (k, c) = t.key();
            match acc.get_mut(&k) {
                Some(v) => *v = &*v + c,
                None => {
                    acc.insert(k, c);
                }
            }
        }
        Ok(Self::from_map(acc))
    }

    fn from_map(acc: BTreeMap<TermKey, ComplexRational>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !cr_is_zero(c))
            .map(|((jdeg, params, factors), coeff)| Term { coeff, jdeg, params, factors })
            .collect();
        Self { terms }
    }

    /// Merges terms that are already individually canonical.
    fn from_canonical_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc: BTreeMap<TermKey, ComplexRational> = BTreeMap::new();
        for t in terms {
            let (k, c) = t.key();
            match acc.get_mut(&k) {
                Some(v) => *v = &*v + c,
                None => {
                    acc.insert(k, c);
                }
            }
        }
        Self::from_map(acc)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-canonicalizes; a no-op on values built through this API.
    pub fn normalize(&self) -> Result<Self, AlgebraError> {
        Self::from_terms(self.terms.iter().cloned())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_canonical_terms(self.terms.iter().chain(rhs.terms.iter()).cloned())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&cr_int(-1, 0))
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        if cr_is_zero(c) {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|t| Term { coeff: &t.coeff * c, ..t.clone() }).collect() }
    }

    pub fn scale_rational(&self, n: i64, d: i64) -> Self {
        self.scale(&cr(crate::ring::rat(n, d), BigRational::zero()))
    }

    pub fn scale_params(&self, p: Params) -> Self {
        Self::from_canonical_terms(self.terms.iter().map(|t| Term { params: t.params * p, ..t.clone() }))
    }

    /// Multiplies by `j^k`.
    pub fn mul_j(&self, k: u32) -> Self {
        Self::from_canonical_terms(self.terms.iter().map(|t| Term { jdeg: t.jdeg + k, ..t.clone() }))
    }

    /// Cancels one factor of `j` from every term.
    pub fn div_j(&self) -> Result<Self, AlgebraError> {
        if self.terms.iter().any(|t| t.jdeg == 0) {
            return Err(AlgebraError::DivisionUndefined);
        }
        Ok(Self::from_canonical_terms(self.terms.iter().map(|t| Term { jdeg: t.jdeg - 1, ..t.clone() })))
    }

    /// Product; shared free indices become summed.
    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        let left: Vec<Term> = self.terms.iter().map(|t| t.rename_dummies_apart("a")).collect();
        let right: Vec<Term> = rhs.terms.iter().map(|t| t.rename_dummies_apart("b")).collect();
        for a in &left {
            for b in &right {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                out.push(Term {
                    coeff: &a.coeff * &b.coeff,
                    jdeg: a.jdeg + b.jdeg,
                    params: a.params * b.params,
                    factors,
                });
            }
        }
        Self::from_terms(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self, AlgebraError> {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Complex conjugate; `j` and the parameters are real.
    pub fn conj(&self) -> Self {
        let terms = self.terms.iter().map(|t| Term {
            coeff: t.coeff.conj(),
            jdeg: t.jdeg,
            params: t.params,
            factors: t.factors.iter().map(FieldFactor::conjugated).collect(),
        });
        Self::from_terms(terms).expect("conjugation preserves index structure")
    }

    /// Renames free indices.
    pub fn rename_free(&self, map: &[(&str, &str)]) -> Result<Self, AlgebraError> {
        let map: BTreeMap<Index, Index> = map.iter().map(|(a, b)| (Index::new(a), Index::new(b))).collect();
        let terms = self.terms.iter().map(|t| {
            let mut t = t.rename_dummies_apart("n");
            t.rename(&map);
            t
        });
        Self::from_terms(terms)
    }

    /// Free indices of the first term (all terms of a well-formed sum agree).
    pub fn free_indices(&self) -> BTreeSet<Index> {
        self.terms.first().map(Term::free_indices).unwrap_or_default()
    }

    pub fn fields(&self) -> BTreeSet<Field> {
        self.terms.iter().flat_map(|t| t.factors.iter().map(|f| f.field)).collect()
    }

    pub fn contains_any(&self, fields: &[Field]) -> bool {
        self.terms.iter().any(|t| fields.iter().any(|f| t.contains_field(*f)))
    }

    pub fn filter(&self, keep: impl Fn(&Term) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|t| keep(t)).cloned().collect() }
    }

    pub fn map_terms(&self, f: impl Fn(&Term) -> Option<Term>) -> Result<Self, AlgebraError> {
        Self::from_terms(self.terms.iter().filter_map(f))
    }

    /// Splits by power of `j`; the parts have their `j` stripped.
    pub fn j_decompose(&self) -> BTreeMap<u32, Expression> {
        let mut parts: BTreeMap<u32, Vec<Term>> = BTreeMap::new();
        for t in &self.terms {
            parts.entry(t.jdeg).or_default().push(Term { jdeg: 0, ..t.clone() });
        }
        parts.into_iter().map(|(d, ts)| (d, Self::from_canonical_terms(ts))).collect()
    }

    /// Inverse of [`Expression::j_decompose`].
    pub fn j_recompose(parts: &BTreeMap<u32, Expression>) -> Self {
        parts.iter().fold(Self::zero(), |acc, (d, e)| acc.add(&e.mul_j(*d)))
    }

    pub fn j_grades(&self) -> BTreeSet<u32> {
        self.terms.iter().map(|t| t.jdeg).collect()
    }

    /// Reduction of the grading: `One` sets j = 1, `Nilpotent` drops j² and
    /// higher. `Numeric` leaves the grading in place (it is applied at evaluation).
    pub fn reduce_j(&self, mode: JMode) -> Self {
        match mode {
            JMode::One => Self::from_canonical_terms(self.terms.iter().map(|t| Term { jdeg: 0, ..t.clone() })),
            JMode::Nilpotent => self.filter(|t| t.jdeg < 2),
            JMode::Numeric(_) => self.clone(),
        }
    }

    /// Cancels the largest common power of `j`, then truncates at `ι² = 0`.
    /// This is the leading field equation in the contracted theory.
    pub fn nilpotent_leading(&self) -> Self {
        let Some(min) = self.terms.iter().map(|t| t.jdeg).min() else {
            return Self::zero();
        };
        Self::from_canonical_terms(self.terms.iter().map(|t| Term { jdeg: t.jdeg - min, ..t.clone() })).reduce_j(JMode::Nilpotent)
    }

    /// Substitutes exact values for the given parameters.
    pub fn instantiate(&self, values: &ExactParams) -> Self {
        let terms = self.terms.iter().map(|t| {
            let mut coeff = t.coeff.clone();
            let mut params = t.params;
            let mut apply = |exp: &mut i32, v: &Option<BigRational>| {
                if let Some(v) = v {
                    let p = rational_pow(v, *exp);
                    coeff = cr(&coeff.re * &p, &coeff.im * &p);
                    *exp = 0;
                }
            };
            apply(&mut params.g, &values.g);
            apply(&mut params.gp, &values.gp);
            apply(&mut params.s, &values.s);
            apply(&mut params.r, &values.r);
            Term { coeff, jdeg: t.jdeg, params, factors: t.factors.clone() }
        });
        Self::from_canonical_terms(terms)
    }

    pub fn derive(&self, idx: &str) -> Result<Self, AlgebraError> {
        calculus::derive(self, &Index::new(idx))
    }

    pub fn substitute(&self, rules: &Substitution) -> Result<Self, AlgebraError> {
        calculus::substitute(self, rules)
    }

    /// First-order variation: every occurrence of a field with a rule is
    /// replaced, one at a time, by its variation.
    pub fn vary(&self, rules: &Substitution) -> Result<Self, AlgebraError> {
        calculus::vary(self, rules)
    }
}

/// Exact values for model parameters; `None` leaves a parameter symbolic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExactParams {
    pub g: Option<BigRational>,
    pub gp: Option<BigRational>,
    pub s: Option<BigRational>,
    pub r: Option<BigRational>,
}

pub(crate) fn rational_pow(v: &BigRational, exp: i32) -> BigRational {
    let mut p = BigRational::one();
    for _ in 0..exp.unsigned_abs() {
        p *= v;
    }
    if exp < 0 {
        p.recip()
    } else {
        p
    }
}
