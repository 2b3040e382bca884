//! Numeric evaluation and randomized identity testing.
//!
//! Summed indices run over four values. Each distinct component with its
//! derivatives (a jet variable) receives an independent value, which is sound
//! for polynomial identities in commuting derivatives.

use std::collections::{BTreeMap, HashMap};

use arrayvec::ArrayVec;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{AlgebraError, Expression, Field, Index, Params, Reality, Term};
use crate::report::DecisionPath;
use crate::ring::cr_to_f64;
use crate::rng::seeded;

pub const MAX_DERIVS: usize = 6;

/// A concrete component: field, numeric index, sorted derivative indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldInstance {
    pub field: Field,
    pub index: Option<u8>,
    pub derivs: ArrayVec<u8, MAX_DERIVS>,
    pub conj: bool,
}

impl FieldInstance {
    pub fn new(field: Field, index: Option<u8>, derivs: &[u8], conj: bool) -> Self {
        let mut d: ArrayVec<u8, MAX_DERIVS> = derivs.iter().copied().collect();
        d.sort_unstable();
        Self { field, index, derivs: d, conj }
    }

    fn conjugate(&self) -> Self {
        Self { conj: !self.conj, ..self.clone() }
    }
}

pub trait Valuation {
    fn value(&mut self, inst: &FieldInstance) -> Result<Complex64, AlgebraError>;
}

/// Explicit values; missing conjugates fall back to the conjugated value.
#[derive(Debug, Clone, Default)]
pub struct FixedAssignment {
    values: HashMap<FieldInstance, Complex64>,
}

impl FixedAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, inst: FieldInstance, v: Complex64) -> &mut Self {
        self.values.insert(inst, v);
        self
    }
}

impl Valuation for FixedAssignment {
    fn value(&mut self, inst: &FieldInstance) -> Result<Complex64, AlgebraError> {
        if let Some(v) = self.values.get(inst) {
            return Ok(*v);
        }
        if let Some(v) = self.values.get(&inst.conjugate()) {
            return Ok(v.conj());
        }
        if let Reality::Partner(p) = inst.field.reality() {
            let other = FieldInstance { field: p, ..inst.clone() };
            if let Some(v) = self.values.get(&other) {
                return Ok(v.conj());
            }
        }
        Err(AlgebraError::MissingAssignment(format!("{inst:?}")))
    }
}

/// Gaussian values drawn on first use.
///
/// In generic mode every jet variable is an independent complex number. In
/// physical mode real fields get real values, conjugate components get
/// conjugate values and `W-` is the conjugate of `W+`.
#[derive(Debug, Clone)]
pub struct RandomFields {
    rng: ChaCha8Rng,
    physical: bool,
    memo: HashMap<FieldInstance, Complex64>,
}

impl RandomFields {
    pub fn generic(seed: u64) -> Self {
        Self { rng: seeded(seed, "fields"), physical: false, memo: HashMap::new() }
    }

    pub fn physical(seed: u64) -> Self {
        Self { rng: seeded(seed, "fields"), physical: true, memo: HashMap::new() }
    }

    fn draw(&mut self, real: bool) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = if real { 0.0 } else { self.rng.sample(StandardNormal) };
        Complex64::new(re, im)
    }
}

impl Valuation for RandomFields {
    fn value(&mut self, inst: &FieldInstance) -> Result<Complex64, AlgebraError> {
        if let Some(v) = self.memo.get(inst) {
            return Ok(*v);
        }
        let v = if !self.physical {
            self.draw(false)
        } else {
            match inst.field.reality() {
                Reality::Real => self.draw(true),
                Reality::Complex if inst.conj => self.value(&inst.conjugate())?.conj(),
                Reality::Complex => self.draw(false),
                Reality::Partner(p) if inst.field == Field::WMinus => {
                    self.value(&FieldInstance { field: p, ..inst.clone() })?.conj()
                }
                Reality::Partner(_) => self.draw(false),
            }
        };
        self.memo.insert(inst.clone(), v);
        Ok(v)
    }
}

/// Floating values of the couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamValues {
    pub g: f64,
    pub gp: f64,
    pub s: f64,
    pub r: f64,
}

impl ParamValues {
    /// `s` is tied to the couplings as `√(g² + gp²)`.
    pub fn new(g: f64, gp: f64, r: f64) -> Self {
        Self { g, gp, s: g.hypot(gp), r }
    }

    pub fn monomial(&self, p: &Params) -> f64 {
        self.g.powi(p.g) * self.gp.powi(p.gp) * self.s.powi(p.s) * self.r.powi(p.r)
    }
}

impl Default for ParamValues {
    fn default() -> Self {
        Self::new(0.652, 0.357, 1.37)
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Fixed(u8),
    Summed(usize),
}

/// Returns the value and the sum of absolute values of the summands, the
/// latter being the scale against which cancellation is judged.
fn eval_term(
    t: &Term,
    val: &mut dyn Valuation,
    params: &ParamValues,
    j: f64,
    free: &BTreeMap<Index, u8>,
) -> Result<(Complex64, f64), AlgebraError> {
    let counts = t.index_counts();
    let mut slot_of: BTreeMap<&Index, Slot> = BTreeMap::new();
    let mut nsum = 0;
    for (i, c) in &counts {
        if *c == 2 {
            slot_of.insert(i, Slot::Summed(nsum));
            nsum += 1;
        } else {
            let v = free.get(i).ok_or_else(|| AlgebraError::UnboundIndex(i.to_string()))?;
            slot_of.insert(i, Slot::Fixed(*v));
        }
    }
    let plan: Vec<(Field, bool, Option<Slot>, Vec<Slot>)> = t
        .factors
        .iter()
        .map(|f| {
            if f.derivs.len() > MAX_DERIVS {
                return Err(AlgebraError::Unsupported(format!("more than {MAX_DERIVS} derivatives")));
            }
            Ok((f.field, f.conj, f.indices.first().map(|i| slot_of[i]), f.derivs.iter().map(|d| slot_of[d]).collect()))
        })
        .collect::<Result<_, _>>()?;
    let pick = |s: Slot, a: &[u8]| match s {
        Slot::Fixed(v) => v,
        Slot::Summed(k) => a[k],
    };
    let front = cr_to_f64(&t.coeff) * j.powi(t.jdeg as i32) * params.monomial(&t.params);
    let mut assign = vec![0u8; nsum];
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    loop {
        let mut prod = front;
        for (field, conj, idx, derivs) in &plan {
            let d: ArrayVec<u8, MAX_DERIVS> = derivs.iter().map(|s| pick(*s, &assign)).collect();
            let inst = FieldInstance::new(*field, idx.map(|s| pick(s, &assign)), &d, *conj);
            prod *= val.value(&inst)?;
        }
        sum += prod;
        mag += prod.norm();
        // odometer over the summed indices
        let mut k = 0;
        while k < nsum {
            assign[k] += 1;
            if assign[k] < 4 {
                break;
            }
            assign[k] = 0;
            k += 1;
        }
        if k == nsum {
            break;
        }
    }
    Ok((sum, mag))
}

fn eval_scaled(
    e: &Expression,
    val: &mut dyn Valuation,
    params: &ParamValues,
    j: f64,
    free: &BTreeMap<Index, u8>,
) -> Result<(Complex64, f64), AlgebraError> {
    let mut total = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for t in e.terms() {
        let (v, m) = eval_term(t, val, params, j, free)?;
        total += v;
        mag += m;
    }
    Ok((total, mag))
}

/// Value at the given field values, couplings and `j`, with free indices bound
/// by `free`.
pub fn eval_numeric(
    e: &Expression,
    val: &mut dyn Valuation,
    params: &ParamValues,
    j: f64,
    free: &BTreeMap<Index, u8>,
) -> Result<Complex64, AlgebraError> {
    eval_scaled(e, val, params, j, free).map(|(v, _)| v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EqualityPolicy {
    pub trials: usize,
    /// Bound on |a − b| relative to the sum of absolute term values.
    pub rel_tol: f64,
    pub seed: u64,
    pub j: f64,
    pub params: ParamValues,
    /// When false, only the canonical comparison is used.
    pub allow_numeric: bool,
}

impl Default for EqualityPolicy {
    fn default() -> Self {
        Self { trials: 20, rel_tol: 1e-9, seed: 7, j: 0.731, params: ParamValues::default(), allow_numeric: true }
    }
}

impl EqualityPolicy {
    pub fn exact_only() -> Self {
        Self { allow_numeric: false, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equality {
    pub equal: bool,
    pub path: DecisionPath,
    /// Largest relative residual seen (0 when decided symbolically).
    pub residual: f64,
    pub witness: Option<String>,
}

/// Compares canonical forms; if they differ and the policy allows, falls back
/// to randomized evaluation, which also sees the relation s² = g² + gp².
pub fn equals(a: &Expression, b: &Expression, policy: &EqualityPolicy) -> Result<Equality, AlgebraError> {
    let diff = a.sub(b);
    if diff.is_zero() {
        return Ok(Equality { equal: true, path: DecisionPath::ExactSymbolic, residual: 0.0, witness: None });
    }
    if !policy.allow_numeric {
        let first = diff.terms()[0].to_string();
        return Ok(Equality {
            equal: false,
            path: DecisionPath::ExactSymbolic,
            residual: f64::INFINITY,
            witness: Some(format!("difference has {} term(s), first {first}", diff.len())),
        });
    }
    let free: Vec<Index> = a.free_indices().union(&b.free_indices()).cloned().collect();
    let mut rng = seeded(policy.seed, "equals");
    let mut worst = 0.0f64;
    let mut witness = None;
    for trial in 0..policy.trials {
        let mut val = RandomFields::generic(policy.seed.wrapping_add(trial as u64));
        let binding: BTreeMap<Index, u8> = free.iter().map(|i| (i.clone(), rng.random_range(0..4u8))).collect();
        let (va, ma) = eval_scaled(a, &mut val, &policy.params, policy.j, &binding)?;
        let (vb, mb) = eval_scaled(b, &mut val, &policy.params, policy.j, &binding)?;
        let scale = ma.max(mb).max(f64::MIN_POSITIVE);
        let r = (va - vb).norm() / scale;
        if r > worst || r.is_nan() {
            worst = r;
            if r.is_nan() || r > policy.rel_tol {
                witness = Some(format!("trial {trial}: lhs {va}, rhs {vb}"));
            }
        }
    }
    Ok(Equality { equal: worst <= policy.rel_tol, path: DecisionPath::NumericOracle, residual: worst, witness })
}
