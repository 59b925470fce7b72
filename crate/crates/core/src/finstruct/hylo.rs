//! Coalgebra-to-algebra morphisms and the Hylo solver.
//!
//! A map `f: B → A` is a ca-morphism when `f(x) = a(σ(f(x₁)..f(xₖ)))` for every
//! state `x` with `b(x) = σ(x₁..xₖ)`. Each state contributes one functional
//! constraint; the solver keeps a candidate set per state, prunes it to
//! arc consistency and branches on the earliest undecided state.

use std::collections::VecDeque;

use super::algebra::FinAlgebra;
use super::coalgebra::FinCoalgebra;
use crate::bits::BitSet;
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// A solution `f: B → A`, indexed by state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaMorphism(pub Vec<usize>);

impl CaMorphism {
    pub fn get(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `(state, element)` name pairs in state order.
    pub fn named<'a>(
        &'a self,
        b: &'a FinCoalgebra,
        a: &'a FinAlgebra,
    ) -> impl Iterator<Item = (&'a str, &'a str)> + 'a {
        self.0
            .iter()
            .enumerate()
            .map(|(x, &v)| (b.state_name(x), a.element_name(v)))
    }
}

fn check_shapes(b: &FinCoalgebra, a: &FinAlgebra) -> Result<()> {
    if b.signature() != a.signature() {
        return Err(Error::SignatureMismatch);
    }
    Ok(())
}

/// First state at which `f` breaks the ca-equation.
pub fn first_violation(b: &FinCoalgebra, a: &FinAlgebra, f: &[usize]) -> Result<Option<usize>> {
    check_shapes(b, a)?;
    if f.len() != b.len() || f.iter().any(|&v| v >= a.len()) {
        return Err(Error::Invalid(
            "map must send every state to a carrier element".into(),
        ));
    }
    let mut vals = Vec::new();
    Ok((0..b.len()).find(|&x| {
        let step = b.step(x);
        vals.clear();
        vals.extend(step.args.iter().map(|&y| f[y]));
        a.apply(step.op, &vals) != f[x]
    }))
}

pub fn is_ca_morphism(b: &FinCoalgebra, a: &FinAlgebra, f: &[usize]) -> Result<bool> {
    Ok(first_violation(b, a, f)?.is_none())
}

/// Fails with [`Error::NotCaMorphism`] naming the first offending state.
pub fn require_ca_morphism(b: &FinCoalgebra, a: &FinAlgebra, f: &[usize]) -> Result<()> {
    match first_violation(b, a, f)? {
        None => Ok(()),
        Some(x) => Err(Error::NotCaMorphism(b.state_name(x).to_string())),
    }
}

struct Solver<'a> {
    b: &'a FinCoalgebra,
    a: &'a FinAlgebra,
    // Constraints mentioning each state (its own and its predecessors').
    watchers: Vec<Vec<usize>>,
}

impl<'a> Solver<'a> {
    fn new(b: &'a FinCoalgebra, a: &'a FinAlgebra) -> Self {
        let mut watchers = vec![Vec::new(); b.len()];
        for x in 0..b.len() {
            watchers[x].push(x);
            for &y in &b.step(x).args {
                if !watchers[y].contains(&x) {
                    watchers[y].push(x);
                }
            }
        }
        Solver { b, a, watchers }
    }

    /// Restricts the domains touched by constraint `x` to supported values.
    /// Returns the states whose domains shrank, or `None` on a wipe-out.
    fn revise(&self, x: usize, doms: &mut [BitSet]) -> Option<Vec<usize>> {
        let step = self.b.step(x);
        let mut vars: Vec<usize> = Vec::with_capacity(step.args.len() + 1);
        for &y in std::iter::once(&x).chain(&step.args) {
            if !vars.contains(&y) {
                vars.push(y);
            }
        }
        // Position of each argument (and of x) within `vars`.
        let arg_pos: Vec<usize> = step
            .args
            .iter()
            .map(|y| vars.iter().position(|v| v == y).unwrap())
            .collect();
        let choices: Vec<Vec<usize>> = vars.iter().map(|&v| doms[v].iter().collect()).collect();
        if choices.iter().any(Vec::is_empty) {
            return None;
        }
        let n = self.a.len();
        let mut support: Vec<BitSet> = vars.iter().map(|_| BitSet::empty(n)).collect();
        let mut cursor = vec![0usize; vars.len()];
        let mut args = vec![0usize; step.args.len()];
        'tuples: loop {
            for (slot, &p) in args.iter_mut().zip(&arg_pos) {
                *slot = choices[p][cursor[p]];
            }
            // vars[0] is x itself.
            if self.a.apply(step.op, &args) == choices[0][cursor[0]] {
                for (k, s) in support.iter_mut().enumerate() {
                    s.insert(choices[k][cursor[k]]);
                }
            }
            let mut k = vars.len();
            loop {
                if k == 0 {
                    break 'tuples;
                }
                k -= 1;
                cursor[k] += 1;
                if cursor[k] < choices[k].len() {
                    break;
                }
                cursor[k] = 0;
            }
        }
        let mut changed = Vec::new();
        for (k, &v) in vars.iter().enumerate() {
            if support[k].is_empty() {
                return None;
            }
            if support[k] != doms[v] {
                doms[v] = std::mem::replace(&mut support[k], BitSet::empty(0));
                changed.push(v);
            }
        }
        Some(changed)
    }

    /// Arc consistency from the given constraints outward. `false` on wipe-out.
    fn propagate(&self, doms: &mut [BitSet], seed: impl IntoIterator<Item = usize>) -> bool {
        let mut queue: VecDeque<usize> = VecDeque::new();
        let mut queued = vec![false; self.b.len()];
        for c in seed {
            if !queued[c] {
                queued[c] = true;
                queue.push_back(c);
            }
        }
        while let Some(c) = queue.pop_front() {
            queued[c] = false;
            match self.revise(c, doms) {
                None => return false,
                Some(changed) => {
                    for v in changed {
                        for &w in &self.watchers[v] {
                            if !queued[w] {
                                queued[w] = true;
                                queue.push_back(w);
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn search(&self, doms: &[BitSet], out: &mut Vec<CaMorphism>) {
        match (0..doms.len()).find(|&x| doms[x].count() > 1) {
            None => out.push(CaMorphism(
                doms.iter()
                    .map(|d| d.first().expect("non-empty domain"))
                    .collect(),
            )),
            Some(x) => {
                for v in doms[x].iter().collect::<Vec<_>>() {
                    let mut next = doms.to_vec();
                    next[x] = BitSet::from_indices(self.a.len(), [v]);
                    if self.propagate(&mut next, self.watchers[x].iter().copied()) {
                        self.search(&next, out);
                    }
                }
            }
        }
    }
}

fn search_space(doms: &[BitSet]) -> u128 {
    doms.iter()
        .fold(1u128, |acc, d| acc.saturating_mul(d.count() as u128))
}

/// All ca-morphisms `b → a`, in lexicographic order of their value vectors
/// (states in declared order, values in carrier order).
///
/// Fails with [`Error::BudgetExceeded`] when the candidate space left after
/// the initial propagation is larger than `budget`.
pub fn enumerate_hylo(b: &FinCoalgebra, a: &FinAlgebra, budget: u128) -> Result<Vec<CaMorphism>> {
    check_shapes(b, a)?;
    let solver = Solver::new(b, a);
    let mut doms: Vec<BitSet> = (0..b.len()).map(|_| BitSet::full(a.len())).collect();
    if !solver.propagate(&mut doms, 0..b.len()) {
        return Ok(Vec::new());
    }
    let space = search_space(&doms);
    if space > budget {
        return Err(Error::BudgetExceeded(space));
    }
    let mut out = Vec::new();
    solver.search(&doms, &mut out);
    Ok(out)
}

pub fn count_hylo(b: &FinCoalgebra, a: &FinAlgebra, budget: u128) -> Result<usize> {
    Ok(enumerate_hylo(b, a, budget)?.len())
}

/// Whether `b` has exactly one ca-morphism into every algebra supplied.
/// The family is finite, so this is a bounded check of recursivity.
pub fn check_recursive_on<'a>(
    b: &FinCoalgebra,
    algebras: impl IntoIterator<Item = &'a FinAlgebra>,
    budget: u128,
) -> Result<bool> {
    for a in algebras {
        if count_hylo(b, a, budget)? != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every coalgebra supplied has exactly one ca-morphism into `a`.
pub fn check_corecursive_on<'a>(
    a: &FinAlgebra,
    coalgebras: impl IntoIterator<Item = &'a FinCoalgebra>,
    budget: u128,
) -> Result<bool> {
    for b in coalgebras {
        if count_hylo(b, a, budget)? != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigterm::Signature;
    use std::sync::Arc;

    fn stream_sig() -> Arc<Signature> {
        Arc::new(Signature::new([("chk", 1), ("cross", 1)]).unwrap())
    }

    fn parity() -> FinAlgebra {
        FinAlgebra::from_fn(stream_sig(), vec!["0".into(), "1".into()], |s, a| {
            if s.0 == 0 {
                1 - a[0]
            } else {
                a[0]
            }
        })
        .unwrap()
    }

    #[test]
    fn is_ca_morphism_examples() {
        let a = parity();
        let cross = FinCoalgebra::from_named(stream_sig(), &[("q", "cross", &["q"])]).unwrap();
        assert!(is_ca_morphism(&cross, &a, &[0]).unwrap());
        let chk = FinCoalgebra::from_named(stream_sig(), &[("q", "chk", &["q"])]).unwrap();
        assert!(!is_ca_morphism(&chk, &a, &[0]).unwrap());
        assert_eq!(
            require_ca_morphism(&chk, &a, &[0]),
            Err(Error::NotCaMorphism("q".into()))
        );
        assert!(is_ca_morphism(&FinCoalgebra::empty(stream_sig()), &a, &[]).unwrap());
    }

    #[test]
    fn signature_mismatch() {
        let other = Arc::new(Signature::new([("chk", 1)]).unwrap());
        let b = FinCoalgebra::from_named(other, &[("q", "chk", &["q"])]).unwrap();
        assert_eq!(
            is_ca_morphism(&b, &parity(), &[0]),
            Err(Error::SignatureMismatch)
        );
    }

    #[test]
    fn enumerate_examples() {
        let a = parity();
        let chk1 = FinCoalgebra::from_named(stream_sig(), &[("q", "chk", &["q"])]).unwrap();
        assert!(enumerate_hylo(&chk1, &a, DEFAULT_BUDGET)
            .unwrap()
            .is_empty());

        let chk2 = FinCoalgebra::from_named(
            stream_sig(),
            &[("q0", "chk", &["q1"]), ("q1", "chk", &["q0"])],
        )
        .unwrap();
        assert_eq!(
            enumerate_hylo(&chk2, &a, DEFAULT_BUDGET).unwrap(),
            vec![CaMorphism(vec![0, 1]), CaMorphism(vec![1, 0])]
        );

        let empty = FinCoalgebra::empty(stream_sig());
        assert_eq!(
            enumerate_hylo(&empty, &a, DEFAULT_BUDGET).unwrap(),
            vec![CaMorphism(vec![])]
        );
    }

    #[test]
    fn budget_is_enforced() {
        let a = parity();
        let n = 30;
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let steps = (0..n)
            .map(|i| super::super::Step {
                op: crate::sigterm::SymId(1),
                args: vec![i],
            })
            .collect();
        let b = FinCoalgebra::new(stream_sig(), names, steps).unwrap();
        // 30 independent cross-loops: 2^30 solutions.
        assert_eq!(
            enumerate_hylo(&b, &a, 1000),
            Err(Error::BudgetExceeded(1 << 30))
        );
    }

    #[test]
    fn recursive_and_corecursive_checks() {
        let a = parity();
        let chk1 = FinCoalgebra::from_named(stream_sig(), &[("q", "chk", &["q"])]).unwrap();
        let cross1 = FinCoalgebra::from_named(stream_sig(), &[("q", "cross", &["q"])]).unwrap();
        assert!(!check_recursive_on(&chk1, [&a], DEFAULT_BUDGET).unwrap());
        assert!(!check_recursive_on(&cross1, [&a], DEFAULT_BUDGET).unwrap());
        assert!(!check_corecursive_on(&a, [&chk1], DEFAULT_BUDGET).unwrap());
        let empty = FinCoalgebra::empty(stream_sig());
        assert!(check_corecursive_on(&a, [&empty], DEFAULT_BUDGET).unwrap());
    }
}
