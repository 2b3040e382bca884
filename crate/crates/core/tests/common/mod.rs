//! Random canonical expressions for round-trip and property tests.

#![allow(dead_code)]

use ewlimit_core::algebra::{Expression, Field, FieldFactor, Params, Term};
use ewlimit_core::ring::{cr, rat};
use rand::seq::SliceRandom;
use rand::Rng;

const VECTORS: [Field; 11] = [
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
];
const SCALARS: [Field; 7] = [Field::Rho, Field::Phi1, Field::Phi2, Field::Omega, Field::Eps1, Field::Eps2, Field::Eps3];
const DUMMIES: [&str; 3] = ["mu", "nu", "rho"];

fn small_rational(rng: &mut impl Rng) -> num_rational::BigRational {
    rat(rng.random_range(-9..=9), rng.random_range(1..=6))
}

/// One term whose summed indices each appear twice; `free` is added once.
pub fn random_term(rng: &mut impl Rng, free: Option<&str>) -> Term {
    let pairs = rng.random_range(0..=2);
    let mut slots: Vec<&str> = DUMMIES[..pairs].iter().flat_map(|d| [*d, *d]).collect();
    slots.extend(free);
    slots.shuffle(rng);
    let mut factors = Vec::new();
    while !slots.is_empty() || (factors.is_empty() && rng.random_bool(0.7)) {
        let vector = !slots.is_empty() && rng.random_bool(0.6);
        let mut f = if vector {
            let idx = slots.pop().unwrap();
            FieldFactor::new(VECTORS[rng.random_range(0..VECTORS.len())], &[idx]).unwrap()
        } else {
            FieldFactor::new(SCALARS[rng.random_range(0..SCALARS.len())], &[]).unwrap()
        };
        let nd = rng.random_range(0..=slots.len().min(2));
        let d: Vec<&str> = (0..nd).map(|_| slots.pop().unwrap()).collect();
        f = f.with_derivs(&d);
        if rng.random_bool(0.3) {
            f = f.conjugated();
        }
        factors.push(f);
    }
    let mut coeff = cr(small_rational(rng), rat(0, 1));
    if rng.random_bool(0.3) {
        coeff.im = small_rational(rng);
    }
    if coeff.re == rat(0, 1) && coeff.im == rat(0, 1) {
        coeff.re = rat(1, 1);
    }
    let params = Params {
        g: rng.random_range(-2..=2),
        gp: rng.random_range(-2..=2),
        s: rng.random_range(-2..=2),
        r: rng.random_range(0..=2),
    };
    Term { coeff, jdeg: rng.random_range(0..=4), params, factors }
}

/// A canonical expression with up to four terms, all sharing the same free index.
pub fn random_expression(rng: &mut impl Rng) -> Expression {
    let free = if rng.random_bool(0.4) { Some("sigma") } else { None };
    let n = rng.random_range(1..=4);
    let terms: Vec<Term> = (0..n).map(|_| random_term(rng, free)).collect();
    Expression::from_terms(terms).expect("generated terms are well formed")
}
