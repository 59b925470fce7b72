use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sigterm::{Signature, SymId, Term};

/// One flat step `σ(x₁..xₖ)` of a coalgebra, arguments as state indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub op: SymId,
    pub args: Vec<usize>,
}

/// A coalgebra `b: B → FB` on a finite, ordered state set.
///
/// Read as a flat recursive equation system, state `x` stands for the
/// equation `x ≈ b(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCoalgebra {
    sig: Arc<Signature>,
    states: Vec<String>,
    index: HashMap<String, usize>,
    steps: Vec<Step>,
}

impl FinCoalgebra {
    pub fn new(sig: Arc<Signature>, states: Vec<String>, steps: Vec<Step>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate state `{s}`")));
            }
        }
        if steps.len() != states.len() {
            return Err(Error::Invalid(format!(
                "{} states but {} steps",
                states.len(),
                steps.len()
            )));
        }
        for (x, step) in steps.iter().enumerate() {
            if step.op.index() >= sig.len() {
                return Err(Error::UnknownSymbol(format!("#{}", step.op.0)));
            }
            let expected = sig.arity(step.op);
            if step.args.len() != expected {
                return Err(Error::ArityMismatch {
                    op: sig.name(step.op).to_string(),
                    expected,
                    got: step.args.len(),
                });
            }
            if let Some(&bad) = step.args.iter().find(|&&a| a >= states.len()) {
                return Err(Error::Invalid(format!(
                    "step of `{}` refers to state #{bad}",
                    states[x]
                )));
            }
        }
        Ok(FinCoalgebra {
            sig,
            states,
            index,
            steps,
        })
    }

    /// Builds a coalgebra from `(state, op, [args])` triples; state order is
    /// the order of the triples.
    pub fn from_named(sig: Arc<Signature>, steps: &[(&str, &str, &[&str])]) -> Result<Self> {
        let states: Vec<String> = steps.iter().map(|(s, _, _)| s.to_string()).collect();
        let lookup: HashMap<&str, usize> = steps
            .iter()
            .enumerate()
            .map(|(i, (s, _, _))| (*s, i))
            .collect();
        let mut out = Vec::with_capacity(steps.len());
        for (_, op, args) in steps {
            let op = sig.resolve(op)?;
            let args = args
                .iter()
                .map(|a| {
                    lookup
                        .get(a)
                        .copied()
                        .ok_or_else(|| Error::Invalid(format!("unknown state `{a}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(Step { op, args });
        }
        Self::new(sig, states, out)
    }

    pub fn empty(sig: Arc<Signature>) -> Self {
        FinCoalgebra {
            sig,
            states: Vec::new(),
            index: HashMap::new(),
            steps: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
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

    pub fn state_name(&self, x: usize) -> &str {
        &self.states[x]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn step(&self, x: usize) -> &Step {
        &self.steps[x]
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// `b(x)` as a depth-1 term over the state names.
    pub fn step_term(&self, x: usize) -> Term {
        let step = &self.steps[x];
        Term::app(
            self.sig.name(step.op),
            step.args
                .iter()
                .map(|&a| Term::var(self.states[a].clone()))
                .collect(),
        )
    }

    /// Whether the successor graph `x → xᵢ` is acyclic. For finite
    /// polynomial coalgebras this is the recursivity witness.
    pub fn is_wellfounded(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let mut mark = vec![Mark::New; self.len()];
        for root in 0..self.len() {
            if mark[root] != Mark::New {
                continue;
            }
            // (state, next argument position)
            let mut stack = vec![(root, 0usize)];
            mark[root] = Mark::Active;
            while let Some(&mut (x, ref mut pos)) = stack.last_mut() {
                match self.steps[x].args.get(*pos) {
                    Some(&y) => {
                        *pos += 1;
                        match mark[y] {
                            Mark::Active => return false,
                            Mark::New => {
                                mark[y] = Mark::Active;
                                stack.push((y, 0));
                            }
                            Mark::Done => {}
                        }
                    }
                    None => {
                        mark[x] = Mark::Done;
                        stack.pop();
                    }
                }
            }
        }
        true
    }
}
