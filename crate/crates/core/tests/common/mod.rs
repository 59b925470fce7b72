//! Reference implementations used to check the library. None of them calls
//! into the algorithms under test; they only read the input structures.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use relfix::bits::BitSet;
use relfix::finstruct::{FinAlgebra, FinCoalgebra};
use relfix::lattice::TransitionSystem;
use relfix::sigterm::Term;

/// Decides `s ≈_b t` by saturating a boolean relation matrix over every
/// subterm of the queries and of the generators `x = b(x)`. Reflexivity,
/// symmetry, transitivity and the congruence rule are applied until nothing
/// changes. On a subterm-closed universe this is complete for ground
/// equations.
pub struct NaiveClosure {
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
    // Row i holds the terms related to term i, one bit each.
    rel: Vec<Vec<u64>>,
}

fn get(row: &[u64], j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

fn set(row: &mut [u64], j: usize) {
    row[j / 64] |= 1 << (j % 64);
}

impl NaiveClosure {
    pub fn new(b: &FinCoalgebra, queries: &[&Term]) -> Self {
        let mut nc = NaiveClosure {
            terms: Vec::new(),
            index: HashMap::new(),
            rel: Vec::new(),
        };
        let mut gens = Vec::new();
        for x in 0..b.len() {
            let l = nc.intern(&Term::var(b.state_name(x)));
            let r = nc.intern(&b.step_term(x));
            gens.push((l, r));
        }
        for q in queries {
            nc.intern(q);
        }
        let n = nc.terms.len();
        nc.rel = vec![vec![0; n.div_ceil(64)]; n];
        for (i, row) in nc.rel.iter_mut().enumerate() {
            set(row, i);
        }
        for (l, r) in gens {
            set(&mut nc.rel[l], r);
            set(&mut nc.rel[r], l);
        }
        nc.saturate();
        nc
    }

    fn intern(&mut self, t: &Term) -> usize {
        if let Term::App(_, args) = t {
            for a in args {
                self.intern(a);
            }
        }
        if let Some(&i) = self.index.get(t) {
            return i;
        }
        self.terms.push(t.clone());
        self.index.insert(t.clone(), self.terms.len() - 1);
        self.terms.len() - 1
    }

    fn saturate(&mut self) {
        let n = self.terms.len();
        let kids: Vec<Option<(&str, Vec<usize>)>> = self
            .terms
            .iter()
            .map(|t| match t {
                Term::Var(_) => None,
                Term::App(op, args) => {
                    Some((op.as_str(), args.iter().map(|a| self.index[a]).collect()))
                }
            })
            .collect();
        loop {
            let mut changed = false;
            // Transitive closure; every rule keeps the relation symmetric.
            for k in 0..n {
                let row_k = self.rel[k].clone();
                for i in 0..n {
                    if get(&self.rel[i], k) {
                        for (w, &bits) in self.rel[i].iter_mut().zip(&row_k) {
                            if *w | bits != *w {
                                *w |= bits;
                                changed = true;
                            }
                        }
                    }
                }
            }
            for i in 0..n {
                for j in 0..i {
                    if get(&self.rel[i], j) {
                        continue;
                    }
                    if let (Some((f, xs)), Some((g, ys))) = (&kids[i], &kids[j]) {
                        if f == g
                            && xs.len() == ys.len()
                            && xs.iter().zip(ys).all(|(&x, &y)| get(&self.rel[x], y))
                        {
                            set(&mut self.rel[i], j);
                            set(&mut self.rel[j], i);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    pub fn equal(&self, s: &Term, t: &Term) -> bool {
        get(&self.rel[self.index[s]], self.index[t])
    }
}

pub fn naive_equal(b: &FinCoalgebra, s: &Term, t: &Term) -> bool {
    NaiveClosure::new(b, &[s, t]).equal(s, t)
}

fn depth(t: &Term) -> usize {
    match t {
        Term::Var(_) => 0,
        Term::App(_, args) => args.iter().map(|a| depth(a) + 1).max().unwrap_or(0),
    }
}

/// All terms reachable from `t` by one rewrite `x → b(x)` or `b(x) → x` at
/// any position.
fn one_step(rules: &[(Term, Term)], t: &Term, out: &mut Vec<Term>) {
    for (var, step) in rules {
        if t == var {
            out.push(step.clone());
        }
        if t == step {
            out.push(var.clone());
        }
    }
    if let Term::App(op, args) = t {
        let mut inner = Vec::new();
        for (i, a) in args.iter().enumerate() {
            inner.clear();
            one_step(rules, a, &mut inner);
            for r in inner.drain(..) {
                let mut args2 = args.clone();
                args2[i] = r;
                out.push(Term::App(op.clone(), args2));
            }
        }
    }
}

/// Searches rewrite sequences from `s` to `t` through terms of depth at
/// most `max_depth`, giving up after `cap` distinct terms. A `true` answer
/// is a derivation; `false` only means none was found within the bounds.
pub fn rewrite_reaches(b: &FinCoalgebra, s: &Term, t: &Term, max_depth: usize, cap: usize) -> bool {
    let rules: Vec<(Term, Term)> = (0..b.len())
        .map(|x| (Term::var(b.state_name(x)), b.step_term(x)))
        .collect();
    let mut seen = HashSet::from([s.clone()]);
    let mut queue = VecDeque::from([s.clone()]);
    let mut next = Vec::new();
    while let Some(u) = queue.pop_front() {
        if u == *t {
            return true;
        }
        next.clear();
        one_step(&rules, &u, &mut next);
        for v in next.drain(..) {
            if depth(&v) <= max_depth && seen.insert(v.clone()) {
                if seen.len() > cap {
                    return false;
                }
                queue.push_back(v);
            }
        }
    }
    false
}

/// Every `f: B → A` satisfying the ca-equation, by trying all `|A|^|B|`
/// maps in lexicographic order.
pub fn brute_force_hylo(b: &FinCoalgebra, a: &FinAlgebra) -> Vec<Vec<usize>> {
    let (n, k) = (b.len(), a.len());
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut f = vec![0usize; n];
    loop {
        let ok = (0..n).all(|x| {
            let st = b.step(x);
            let args: Vec<usize> = st.args.iter().map(|&y| f[y]).collect();
            a.apply(st.op, &args) == f[x]
        });
        if ok {
            out.push(f.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            f[i] += 1;
            if f[i] < k {
                break;
            }
            f[i] = 0;
        }
    }
}

/// States reachable from `init` (including `init`), by breadth-first search.
pub fn reachable(ts: &TransitionSystem, init: &BitSet) -> BitSet {
    let n = ts.len();
    let mut seen = init.clone();
    let mut queue: VecDeque<usize> = init.iter().collect();
    while let Some(x) = queue.pop_front() {
        for y in 0..n {
            if ts.successors(x).contains(y) && !seen.contains(y) {
                seen.insert(y);
                queue.push_back(y);
            }
        }
    }
    seen
}

/// `⋃_{x∈X} δ(x)` computed from the successor lists.
pub fn union_image(ts: &TransitionSystem, x: &BitSet) -> BitSet {
    let mut out = BitSet::empty(ts.len());
    for s in 0..ts.len() {
        if x.contains(s) {
            for y in ts.successors(s).iter() {
                out.insert(y);
            }
        }
    }
    out
}

/// For a coalgebra whose symbols are all unary: whether every cycle passes
/// an even number of times through states whose symbol is `odd_symbol`.
pub fn cycles_even(b: &FinCoalgebra, odd_symbol: &str) -> bool {
    let n = b.len();
    let succ = |x: usize| b.step(x).args[0];
    let weight = |x: usize| (b.signature().name(b.step(x).op) == odd_symbol) as usize;
    // Each component of a functional graph has exactly one cycle; walking
    // n steps from any state lands on it.
    for start in 0..n {
        let mut x = start;
        for _ in 0..n {
            x = succ(x);
        }
        let entry = x;
        let mut parity = weight(x);
        x = succ(x);
        while x != entry {
            parity += weight(x);
            x = succ(x);
        }
        if parity % 2 == 1 {
            return false;
        }
    }
    true
}

/// Subsets `P` with `P = ○P`, computed directly from the definition.
pub fn cartesian_by_definition(b: &FinCoalgebra) -> Vec<Vec<bool>> {
    let n = b.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let p: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let next: Vec<bool> = (0..n)
            .map(|x| b.step(x).args.iter().all(|&y| p[y]))
            .collect();
        if next == p {
            out.push(p);
        }
    }
    out
}

/// Maps `B → {0,1}` satisfying `f(x) = ⋀ f(successors of x)`, by brute force.
pub fn meet_solutions(b: &FinCoalgebra) -> Vec<Vec<bool>> {
    let n = b.len();
    (0u32..(1 << n))
        .map(|mask| (0..n).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|f| (0..n).all(|x| f[x] == b.step(x).args.iter().all(|&y| f[y])))
        .collect()
}
