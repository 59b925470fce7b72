//! Rational trees and the coextension of ca-morphisms into `ν(a)`.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use super::prefix::{is_a_guided, TreePrefix};
use crate::error::{Error, Result};
use crate::finstruct::{enumerate_hylo, require_ca_morphism, CaMorphism, FinAlgebra, FinCoalgebra};

/// The regular labeled tree obtained by unfolding `machine` from `start`,
/// each node labeled by `labeling` of the state it came from.
#[derive(Debug, Clone)]
pub struct RationalTree {
    machine: Arc<FinCoalgebra>,
    labeling: Arc<[usize]>,
    start: usize,
}

impl RationalTree {
    pub fn new(machine: Arc<FinCoalgebra>, labeling: Arc<[usize]>, start: usize) -> Result<Self> {
        if labeling.len() != machine.len() || start >= machine.len() {
            return Err(Error::Invalid(
                "labeling must cover the machine and start must be a state".into(),
            ));
        }
        Ok(RationalTree {
            machine,
            labeling,
            start,
        })
    }

    pub fn machine(&self) -> &FinCoalgebra {
        &self.machine
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// The label at the root; this is the counit `ε` applied to the tree.
    pub fn root_label(&self) -> usize {
        self.labeling[self.start]
    }

    /// The depth-`depth` prefix.
    pub fn unfold(&self, depth: usize) -> TreePrefix {
        self.unfold_from(self.start, depth)
    }

    fn unfold_from(&self, x: usize, depth: usize) -> TreePrefix {
        if depth == 0 {
            return TreePrefix::leaf(self.labeling[x]);
        }
        let step = self.machine.step(x);
        TreePrefix::expanded(
            self.labeling[x],
            step.op,
            step.args
                .iter()
                .map(|&y| self.unfold_from(y, depth - 1))
                .collect(),
        )
    }

    /// Equality of the infinite trees, decided on the product of the two
    /// machines: every reachable pair must agree on label and symbol.
    pub fn bisimilar(&self, other: &RationalTree) -> bool {
        if self.machine.signature() != other.machine.signature() {
            return false;
        }
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([(self.start, other.start)]);
        seen.insert((self.start, other.start));
        while let Some((x, y)) = queue.pop_front() {
            if self.labeling[x] != other.labeling[y] {
                return false;
            }
            let (sx, sy) = (self.machine.step(x), other.machine.step(y));
            if sx.op != sy.op {
                return false;
            }
            for pair in sx.args.iter().copied().zip(sy.args.iter().copied()) {
                if seen.insert(pair) {
                    queue.push_back(pair);
                }
            }
        }
        true
    }
}

/// The coalgebra morphism `b → ν(a)` determined by the ca-morphism `f`: state
/// `x` goes to the tree of labels seen while running `b` from `x`. Returned
/// as one rational tree per state, sharing the machine.
pub fn coextension(b: &FinCoalgebra, a: &FinAlgebra, f: &CaMorphism) -> Result<Vec<RationalTree>> {
    require_ca_morphism(b, a, f.as_slice())?;
    let machine = Arc::new(b.clone());
    let labeling: Arc<[usize]> = f.as_slice().into();
    Ok((0..b.len())
        .map(|x| RationalTree {
            machine: machine.clone(),
            labeling: labeling.clone(),
            start: x,
        })
        .collect())
}

/// Default unfolding depth for the guidedness part of the roundtrip.
pub const ROUNDTRIP_DEPTH: usize = 4;

/// `|Hylo(b, a)|`, cross-checked against coalgebra morphisms `b → ν(a)`.
///
/// Every solution `f` is coextended; the result must land in `ν(a)` (each
/// unfolding up to `depth` is `a`-guided), its root labels must give back
/// `f`, and distinct solutions must give non-bisimilar tree families.
pub fn count_coalg_homs_to_nu(
    b: &FinCoalgebra,
    a: &FinAlgebra,
    budget: u128,
    depth: usize,
) -> Result<usize> {
    let sols = enumerate_hylo(b, a, budget)?;
    let mut families = Vec::with_capacity(sols.len());
    for f in &sols {
        let trees = coextension(b, a, f)?;
        for (x, tree) in trees.iter().enumerate() {
            if tree.root_label() != f.get(x) {
                return Err(Error::BijectionViolation(format!(
                    "root label of the tree at `{}` does not recover the solution",
                    b.state_name(x)
                )));
            }
            for d in 0..=depth {
                if !is_a_guided(a, &tree.unfold(d))? {
                    return Err(Error::BijectionViolation(format!(
                        "unfolding of `{}` at depth {d} is not guided",
                        b.state_name(x)
                    )));
                }
            }
        }
        families.push(trees);
    }
    for i in 0..families.len() {
        for j in 0..i {
            let same = families[i]
                .iter()
                .zip(&families[j])
                .all(|(s, t)| s.bisimilar(t));
            if same {
                return Err(Error::BijectionViolation(format!(
                    "solutions #{j} and #{i} coextend to the same morphism"
                )));
            }
        }
    }
    Ok(families.len())
}
