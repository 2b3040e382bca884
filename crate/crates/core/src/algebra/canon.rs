//! Canonical ordering of factors and relabelling of summed indices.

use std::collections::{BTreeMap, BTreeSet};

use super::{AlgebraError, FieldFactor, Index, Term};

const POOL: [&str; 12] = ["mu", "nu", "rho", "sigma", "alpha", "beta", "gamma", "delta", "kappa", "lambda", "tau", "chi"];

/// Above this many summed indices the exhaustive search is replaced by a
/// first-occurrence labelling.
const EXHAUSTIVE_LIMIT: usize = 6;

pub(crate) fn canonical_term(mut t: Term) -> Result<Term, AlgebraError> {
    for f in &mut t.factors {
        f.normalize_conj();
        f.derivs.sort();
    }
    let counts = t.index_counts();
    if let Some((i, _)) = counts.iter().find(|(_, c)| **c > 2) {
        return Err(AlgebraError::Index(i.to_string()));
    }
    let dummies: Vec<Index> = counts.iter().filter(|(_, c)| **c == 2).map(|(i, _)| i.clone()).collect();
    if dummies.is_empty() {
        t.factors.sort();
        return Ok(t);
    }
    let free: BTreeSet<&Index> = counts.iter().filter(|(_, c)| **c == 1).map(|(i, _)| i).collect();
    let names = fresh_names(dummies.len(), &free);
    t.factors = if dummies.len() <= EXHAUSTIVE_LIMIT {
        exhaustive(&t.factors, &dummies, &names)
    } else {
        first_occurrence(&t.factors, &dummies, &names)
    };
    Ok(t)
}

fn fresh_names(n: usize, free: &BTreeSet<&Index>) -> Vec<Index> {
    let mut out = Vec::with_capacity(n);
    let extra = (0..).map(|k| format!("x{k}"));
    for name in POOL.iter().map(|s| s.to_string()).chain(extra) {
        if out.len() == n {
            break;
        }
        let idx = Index::new(&name);
        if !free.contains(&idx) {
            out.push(idx);
        }
    }
    // sorted so that permutation 0 assigns the smallest label to the first dummy
    out.sort();
    out
}

fn relabel(factors: &[FieldFactor], map: &BTreeMap<Index, Index>) -> Vec<FieldFactor> {
    let mut fs: Vec<FieldFactor> = factors.to_vec();
    for f in &mut fs {
        f.rename(map);
    }
    fs.sort();
    fs
}

/// Minimum over all assignments of the fresh labels to the summed indices.
fn exhaustive(factors: &[FieldFactor], dummies: &[Index], names: &[Index]) -> Vec<FieldFactor> {
    let k = dummies.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best: Option<Vec<FieldFactor>> = None;
    loop {
        let map = dummies.iter().cloned().zip(perm.iter().map(|&p| names[p].clone())).collect();
        let cand = relabel(factors, &map);
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.expect("at least one permutation")
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut k = n - 1;
    while p[k] <= p[i - 1] {
        k -= 1;
    }
    p.swap(i - 1, k);
    p[i..].reverse();
    true
}

/// Sorts with summed indices masked, then labels them in order of appearance.
fn first_occurrence(factors: &[FieldFactor], dummies: &[Index], names: &[Index]) -> Vec<FieldFactor> {
    let blank = Index::new("");
    let masked: BTreeMap<Index, Index> = dummies.iter().map(|d| (d.clone(), blank.clone())).collect();
    let mut order: Vec<(FieldFactor, usize)> = factors
        .iter()
        .enumerate()
        .map(|(n, f)| {
            let mut m = f.clone();
            m.rename(&masked);
            (m, n)
        })
        .collect();
    order.sort();
    let dset: BTreeSet<&Index> = dummies.iter().collect();
    let mut map = BTreeMap::new();
    for (_, n) in &order {
        for i in factors[*n].all_indices() {
            if dset.contains(i) && !map.contains_key(i) {
                map.insert(i.clone(), names[map.len()].clone());
            }
        }
    }
    relabel(factors, &map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn permutations_are_enumerated() {
        let mut p = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut p) {
            n += 1;
        }
        assert_eq!(n, 6);
    }

    #[test]
    fn fresh_names_skip_free_indices() {
        let mu = Index::new("mu");
        let free = BTreeSet::from([&mu]);
        let names = fresh_names(2, &free);
        assert!(!names.contains(&mu));
    }

    #[test]
    fn large_contractions_use_heuristic() {
        // seven summed pairs
        let fields = [Field::A1, Field::A2, Field::A3, Field::B, Field::W1, Field::W2, Field::W3];
        let mut factors = Vec::new();
        for (k, f) in fields.iter().enumerate() {
            let name = format!("q{k}");
            factors.push(FieldFactor::new(*f, &[&name]).unwrap());
            factors.push(FieldFactor::new(*f, &[&name]).unwrap());
        }
        let t = canonical_term(Term::from_factors(factors)).unwrap();
        assert!(t.factors.iter().all(|f| !f.indices[0].as_str().starts_with('q')));
        let again = canonical_term(t.clone()).unwrap();
        assert_eq!(again, t);
    }
}
