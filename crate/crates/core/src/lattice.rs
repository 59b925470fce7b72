//! Fixed points of monotone maps on finite powerset lattices.
//!
//! For a monotone `F` on `℘(S)`, the least fixed point above a post-fixed
//! `I` and the greatest fixed point below a pre-fixed `P` are reached by
//! Kleene iteration within `|S|` steps, and they form a Galois connection:
//! `μ(I) ⊆ P ⟺ I ⊆ ν(P)`. The safety checker unfolds both sides at once.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Largest universe accepted for table-defined operators.
pub const MAX_TABLE_STATES: usize = 16;

/// A finite transition system `(S, I, δ)` together with a safe set `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    states: Vec<String>,
    delta: Vec<BitSet>,
    init: BitSet,
    safe: BitSet,
}

impl TransitionSystem {
    pub fn new(
        states: Vec<String>,
        delta: Vec<Vec<usize>>,
        init: Vec<usize>,
        safe: Vec<usize>,
    ) -> Result<Self> {
        let n = states.len();
        let mut seen = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if seen.insert(s.as_str(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate state `{s}`")));
            }
        }
        if delta.len() != n {
            return Err(Error::Invalid(
                "delta must list successors of every state".into(),
            ));
        }
        let in_range = |xs: &[usize]| xs.iter().all(|&x| x < n);
        if !delta.iter().all(|d| in_range(d)) || !in_range(&init) || !in_range(&safe) {
            return Err(Error::Invalid("subset mentions an unknown state".into()));
        }
        Ok(TransitionSystem {
            delta: delta
                .into_iter()
                .map(|d| BitSet::from_indices(n, d))
                .collect(),
            init: BitSet::from_indices(n, init),
            safe: BitSet::from_indices(n, safe),
            states,
        })
    }

    /// Builds a system from state names; `delta` lists `(state, successors)`
    /// in state order.
    pub fn from_named(delta: &[(&str, &[&str])], init: &[&str], safe: &[&str]) -> Result<Self> {
        let states: Vec<String> = delta.iter().map(|(s, _)| s.to_string()).collect();
        let idx = |name: &str| {
            states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::Invalid(format!("unknown state `{name}`")))
        };
        let resolve = |xs: &[&str]| xs.iter().map(|x| idx(x)).collect::<Result<Vec<_>>>();
        let succ = delta
            .iter()
            .map(|(_, ys)| resolve(ys))
            .collect::<Result<Vec<_>>>()?;
        Self::new(states.clone(), succ, resolve(init)?, resolve(safe)?)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn successors(&self, x: usize) -> &BitSet {
        &self.delta[x]
    }

    pub fn init(&self) -> &BitSet {
        &self.init
    }

    pub fn safe(&self) -> &BitSet {
        &self.safe
    }

    pub fn with_sets(&self, init: BitSet, safe: BitSet) -> Self {
        TransitionSystem {
            init,
            safe,
            ..self.clone()
        }
    }

    /// `F(X) = ⋃_{x∈X} δ(x)`.
    pub fn op(&self) -> MonotoneOp {
        MonotoneOp {
            names: self.states.clone(),
            kind: OpKind::Union(self.delta.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum OpKind {
    Union(Vec<BitSet>),
    // Indexed by subset mask.
    Table(Vec<BitSet>),
}

/// A monotone endofunction on `℘(S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneOp {
    names: Vec<String>,
    kind: OpKind,
}

impl MonotoneOp {
    /// An operator given by its value on every subset, indexed by mask.
    /// Monotonicity is checked on every comparable pair when `|S| ≤ 4` and
    /// on a fixed pseudo-random sample otherwise.
    pub fn from_table(names: Vec<String>, table: Vec<BitSet>) -> Result<Self> {
        let n = names.len();
        if n > MAX_TABLE_STATES {
            return Err(Error::BoundExceeded {
                size: n,
                bound: MAX_TABLE_STATES,
            });
        }
        if table.len() != 1 << n || table.iter().any(|t| t.universe() != n) {
            return Err(Error::Invalid(format!(
                "table needs {} entries over {n} states",
                1u64 << n
            )));
        }
        let op = MonotoneOp {
            names,
            kind: OpKind::Table(table),
        };
        op.check_monotone()?;
        Ok(op)
    }

    fn check_monotone(&self) -> Result<()> {
        let n = self.len();
        let check = |x: u64, y: u64| -> Result<()> {
            let (fx, fy) = (
                self.apply(&BitSet::from_mask(n, x)),
                self.apply(&BitSet::from_mask(n, y)),
            );
            if fx.is_subset(&fy) {
                Ok(())
            } else {
                Err(Error::NotMonotone(format!(
                    "{:?} ⊆ {:?} but F({:?}) ⊄ F({:?})",
                    BitSet::from_mask(n, x),
                    BitSet::from_mask(n, y),
                    BitSet::from_mask(n, x),
                    BitSet::from_mask(n, y)
                )))
            }
        };
        if n <= 4 {
            for y in 0..1u64 << n {
                // Every submask of y.
                let mut x = y;
                loop {
                    check(x, y)?;
                    if x == 0 {
                        break;
                    }
                    x = (x - 1) & y;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f6e6f);
            for _ in 0..4096 {
                let y: u64 = rng.gen_range(0..1u64 << n);
                let x = y & rng.gen::<u64>();
                check(x, y)?;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn apply(&self, x: &BitSet) -> BitSet {
        match &self.kind {
            OpKind::Union(delta) => {
                let mut out = BitSet::empty(self.len());
                for s in x.iter() {
                    out.union_with(&delta[s]);
                }
                out
            }
            OpKind::Table(table) => table[x.mask() as usize].clone(),
        }
    }
}

pub fn f_apply(op: &MonotoneOp, x: &BitSet) -> BitSet {
    op.apply(x)
}

fn require_post_fixed(op: &MonotoneOp, i: &BitSet) -> Result<()> {
    match i.first_not_in(&op.apply(i)) {
        None => Ok(()),
        Some(w) => Err(Error::NotPostFixed {
            witness: op.name(w).to_string(),
        }),
    }
}

fn require_pre_fixed(op: &MonotoneOp, p: &BitSet) -> Result<()> {
    match op.apply(p).first_not_in(p) {
        None => Ok(()),
        Some(w) => Err(Error::NotPreFixed {
            witness: op.name(w).to_string(),
        }),
    }
}

/// The increasing chain `I, I ∪ F(I), …` up to and including its first
/// repeated element.
pub fn mu_chain(op: &MonotoneOp, i: &BitSet) -> Result<Vec<BitSet>> {
    require_post_fixed(op, i)?;
    let mut chain = vec![i.clone()];
    loop {
        let last = chain.last().unwrap();
        let next = last.union(&op.apply(last));
        if &next == last {
            return Ok(chain);
        }
        chain.push(next);
    }
}

/// The decreasing chain `P, P ∩ F(P), …` up to its first repeated element.
pub fn nu_chain(op: &MonotoneOp, p: &BitSet) -> Result<Vec<BitSet>> {
    require_pre_fixed(op, p)?;
    let mut chain = vec![p.clone()];
    loop {
        let last = chain.last().unwrap();
        let next = last.intersection(&op.apply(last));
        if &next == last {
            return Ok(chain);
        }
        chain.push(next);
    }
}

/// Least fixed point containing the post-fixed point `i`.
pub fn mu_post(op: &MonotoneOp, i: &BitSet) -> Result<BitSet> {
    Ok(mu_chain(op, i)?.pop().unwrap())
}

/// Greatest fixed point contained in the pre-fixed point `p`.
pub fn nu_pre(op: &MonotoneOp, p: &BitSet) -> Result<BitSet> {
    Ok(nu_chain(op, p)?.pop().unwrap())
}

/// `(μ(I) ⊆ P) = (I ⊆ ν(P))`.
pub fn galois_check(op: &MonotoneOp, i: &BitSet, p: &BitSet) -> Result<bool> {
    let left = mu_post(op, i)?.is_subset(p);
    let right = i.is_subset(&nu_pre(op, p)?);
    Ok(left == right)
}

/// Which inclusion of the simultaneous unfolding failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnsafeSide {
    /// `Fⁿ(I) ⊄ P`
    Forward,
    /// `I ⊄ Fⁿ(P)`
    Backward,
}

impl UnsafeSide {
    pub fn as_str(self) -> &'static str {
        match self {
            UnsafeSide::Forward => "F^n(I) ⊄ P",
            UnsafeSide::Backward => "I ⊄ F^n(P)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SafetyVerdict {
    /// Either chain reached its fixed point at `stage` with no failure.
    Safe { stage: usize },
    /// The first falsified inclusion; `witness` is a state index.
    Unsafe {
        stage: usize,
        side: UnsafeSide,
        witness: usize,
    },
}

impl SafetyVerdict {
    pub fn is_safe(&self) -> bool {
        matches!(self, SafetyVerdict::Safe { .. })
    }
}

/// Decides `μ_F(I) ⊆ P` by unfolding `I` upwards and `P` downwards in
/// lockstep. At stage `n` it checks `Fⁿ(I) ⊆ P` and then `I ⊆ Fⁿ(P)`; it
/// answers unsafe at the first failure and safe once either side is stable.
pub fn safety_check(ts: &TransitionSystem) -> Result<SafetyVerdict> {
    let op = ts.op();
    let (init, safe) = (ts.init(), ts.safe());
    require_post_fixed(&op, init)?;
    require_pre_fixed(&op, safe)?;
    let mut up = init.clone();
    let mut down = safe.clone();
    for stage in 0.. {
        if let Some(w) = up.first_not_in(safe) {
            return Ok(SafetyVerdict::Unsafe {
                stage,
                side: UnsafeSide::Forward,
                witness: w,
            });
        }
        if let Some(w) = init.first_not_in(&down) {
            return Ok(SafetyVerdict::Unsafe {
                stage,
                side: UnsafeSide::Backward,
                witness: w,
            });
        }
        let next_up = up.union(&op.apply(&up));
        let next_down = down.intersection(&op.apply(&down));
        if next_up == up || next_down == down {
            return Ok(SafetyVerdict::Safe { stage });
        }
        up = next_up;
        down = next_down;
    }
    unreachable!("chains in a finite lattice stabilize")
}
