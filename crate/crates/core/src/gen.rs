//! Seeded random instances and exhaustive enumerations of small structures.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::finstruct::{tuples, FinAlgebra, FinCoalgebra, Step};
use crate::lattice::TransitionSystem;
use crate::sigterm::{Signature, SymId, Term};

/// The generator used everywhere a `--seed` is accepted.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn state_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn carrier(k: usize) -> Vec<String> {
    (0..k).map(|i| i.to_string()).collect()
}

/// States `s0..s{n-1}`, each successor present with probability one half;
/// `init` and `safe` are empty.
pub fn random_transition_system(rng: &mut impl Rng, n: usize) -> TransitionSystem {
    let delta = (0..n)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    TransitionSystem::new(state_names("s", n), delta, Vec::new(), Vec::new())
        .expect("generated systems are well-formed")
}

/// `1..=max_symbols` symbols `f0, f1, …` with arities in `0..=max_arity`.
pub fn random_signature(
    rng: &mut impl Rng,
    max_symbols: usize,
    max_arity: usize,
) -> Arc<Signature> {
    let n = rng.gen_range(1..=max_symbols);
    Arc::new(
        Signature::new((0..n).map(|i| (format!("f{i}"), rng.gen_range(0..=max_arity))))
            .expect("generated names are distinct"),
    )
}

pub fn random_coalgebra(rng: &mut impl Rng, sig: &Arc<Signature>, n: usize) -> FinCoalgebra {
    let steps = (0..n)
        .map(|_| {
            let op = SymId(rng.gen_range(0..sig.len()) as u32);
            let args = (0..sig.arity(op)).map(|_| rng.gen_range(0..n)).collect();
            Step { op, args }
        })
        .collect();
    FinCoalgebra::new(sig.clone(), state_names("x", n), steps).expect("generated steps are valid")
}

/// A uniformly random algebra on carrier `{0..k-1}`; `k` must be positive
/// when the signature has a constant.
pub fn random_algebra(rng: &mut impl Rng, sig: &Arc<Signature>, k: usize) -> FinAlgebra {
    let tables = sig
        .ids()
        .map(|s| {
            (0..k.pow(sig.arity(s) as u32))
                .map(|_| rng.gen_range(0..k))
                .collect()
        })
        .collect();
    FinAlgebra::from_tables(sig.clone(), carrier(k), tables).expect("generated tables are total")
}

/// A random term over `vars` whose depth is at most `max_depth`.
///
/// # Panics
///
/// If there are neither variables nor constants to put at the leaves.
pub fn random_term(rng: &mut impl Rng, sig: &Signature, vars: &[String], max_depth: usize) -> Term {
    let leaf_ok = !vars.is_empty();
    let ops: Vec<SymId> = sig.ids().collect();
    let constants: Vec<SymId> = ops.iter().copied().filter(|&s| sig.arity(s) == 0).collect();
    assert!(leaf_ok || !constants.is_empty(), "no leaves available");
    if max_depth == 0 || (leaf_ok && rng.gen_bool(0.35)) {
        if leaf_ok && (constants.is_empty() || rng.gen_bool(0.7)) {
            return Term::var(vars[rng.gen_range(0..vars.len())].clone());
        }
        if !constants.is_empty() {
            let c = constants[rng.gen_range(0..constants.len())];
            return Term::constant(sig.name(c));
        }
    }
    let op = ops[rng.gen_range(0..ops.len())];
    let args = (0..sig.arity(op))
        .map(|_| random_term(rng, sig, vars, max_depth.saturating_sub(1)))
        .collect();
    Term::app(sig.name(op), args)
}

/// Every flat term over `targets`, by symbol and then argument tuple.
fn flat_terms(sig: &Signature, targets: &[usize]) -> Vec<Step> {
    let mut out = Vec::new();
    for op in sig.ids() {
        for idx in tuples(targets.len(), sig.arity(op)) {
            out.push(Step {
                op,
                args: idx.into_iter().map(|i| targets[i]).collect(),
            });
        }
    }
    out
}

/// Odometer over a product of choice lists, first position most significant.
struct Product<T> {
    choices: Vec<Vec<T>>,
    cursor: Option<Vec<usize>>,
}

impl<T: Clone> Product<T> {
    fn new(choices: Vec<Vec<T>>) -> Self {
        let cursor = if choices.iter().any(Vec::is_empty) {
            None
        } else {
            Some(vec![0; choices.len()])
        };
        Product { choices, cursor }
    }
}

impl<T: Clone> Iterator for Product<T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        let cur = self.cursor.as_mut()?;
        let item = cur
            .iter()
            .zip(&self.choices)
            .map(|(&i, c)| c[i].clone())
            .collect();
        let mut k = cur.len();
        loop {
            if k == 0 {
                self.cursor = None;
                break;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < self.choices[k].len() {
                break;
            }
            cur[k] = 0;
        }
        Some(item)
    }
}

/// Every coalgebra on `n` states, in lexicographic order of step choices.
pub fn all_coalgebras(sig: &Arc<Signature>, n: usize) -> impl Iterator<Item = FinCoalgebra> {
    let targets: Vec<usize> = (0..n).collect();
    let per_state = flat_terms(sig, &targets);
    let sig = sig.clone();
    let names = state_names("x", n);
    Product::new(vec![per_state; n]).map(move |steps| {
        FinCoalgebra::new(sig.clone(), names.clone(), steps).expect("enumerated steps are valid")
    })
}

/// Every coalgebra on `n` states whose successors of state `i` all lie
/// above `i`. Up to renaming these are all the acyclic ones.
pub fn acyclic_coalgebras(sig: &Arc<Signature>, n: usize) -> impl Iterator<Item = FinCoalgebra> {
    let choices = (0..n)
        .map(|i| flat_terms(sig, &(i + 1..n).collect::<Vec<_>>()))
        .collect();
    let sig = sig.clone();
    let names = state_names("x", n);
    Product::new(choices).map(move |steps| {
        FinCoalgebra::new(sig.clone(), names.clone(), steps).expect("enumerated steps are valid")
    })
}

/// Every algebra on carrier `{0..k-1}`, tables enumerated as one odometer.
pub fn all_algebras(sig: &Arc<Signature>, k: usize) -> impl Iterator<Item = FinAlgebra> {
    let sizes: Vec<usize> = sig.ids().map(|s| k.pow(sig.arity(s) as u32)).collect();
    let total: usize = sizes.iter().sum();
    let sig = sig.clone();
    Product::new(vec![(0..k).collect::<Vec<_>>(); total]).map(move |flat| {
        let mut rest = flat.as_slice();
        let tables = sizes
            .iter()
            .map(|&n| {
                let (head, tail) = rest.split_at(n);
                rest = tail;
                head.to_vec()
            })
            .collect();
        FinAlgebra::from_tables(sig.clone(), carrier(k), tables)
            .expect("enumerated tables are total")
    })
}

/// The signatures with at most two symbols of arity at most two, up to
/// renaming and reordering.
pub fn small_signatures() -> Vec<Arc<Signature>> {
    let mut out = Vec::new();
    for a in 0..=2 {
        out.push(Arc::new(Signature::new([("f", a)]).unwrap()));
    }
    for a in 0..=2 {
        for b in a..=2 {
            out.push(Arc::new(Signature::new([("f", a), ("g", b)]).unwrap()));
        }
    }
    out
}

/// Every subset of `0..n` in mask order, for `n < 64`.
pub fn all_subsets(n: usize) -> impl Iterator<Item = BitSet> {
    BitSet::all_subsets(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_counts() {
        let sig = Arc::new(Signature::new([("f", 0), ("g", 2)]).unwrap());
        // Per state: 1 + n² flat terms.
        assert_eq!(all_coalgebras(&sig, 2).count(), 25);
        assert_eq!(all_coalgebras(&sig, 0).count(), 1);
        // 10 · 5 · 2 · 1
        assert_eq!(acyclic_coalgebras(&sig, 4).count(), 100);
        assert!(acyclic_coalgebras(&sig, 4).all(|b| b.is_wellfounded()));
        // 2 choices for the constant, 2⁴ for g.
        assert_eq!(all_algebras(&sig, 2).count(), 32);
        assert_eq!(all_algebras(&sig, 0).count(), 0);
        let unary = Arc::new(Signature::new([("s", 1)]).unwrap());
        assert_eq!(all_algebras(&unary, 0).count(), 1);
        assert_eq!(small_signatures().len(), 9);
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_transition_system(&mut rng_from_seed(7), 5);
        let b = random_transition_system(&mut rng_from_seed(7), 5);
        assert_eq!(a, b);
        let mut rng = rng_from_seed(3);
        let sig = random_signature(&mut rng, 3, 2);
        let vars = state_names("x", 3);
        for _ in 0..50 {
            let t = random_term(&mut rng, &sig, &vars, 4);
            assert!(t.depth() <= 4);
            crate::sigterm::validate_term(&sig, &t).unwrap();
        }
    }
}
