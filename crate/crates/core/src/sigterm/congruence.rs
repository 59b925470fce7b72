//! Ground congruence closure over the hash-consed term DAG.
//!
//! Union-find keyed by [`TermId`], with per-class use lists and a signature
//! table for upward propagation. Variables are constants, so every equation
//! is ground and the procedure decides the generated congruence exactly.

use std::collections::HashMap;
use std::sync::Arc;

use super::signature::Signature;
use super::term::{validate_term, Head, Term, TermId, TermStore};
use crate::error::Result;

/// A finite list of ground equations over one signature.
#[derive(Debug, Clone)]
pub struct EquationSet {
    sig: Arc<Signature>,
    equations: Vec<(Term, Term)>,
}

impl EquationSet {
    pub fn new(sig: Arc<Signature>, equations: Vec<(Term, Term)>) -> Result<Self> {
        for (l, r) in &equations {
            validate_term(&sig, l)?;
            validate_term(&sig, r)?;
        }
        Ok(EquationSet { sig, equations })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn equations(&self) -> &[(Term, Term)] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CongruenceClosure {
    store: TermStore,
    parent: Vec<TermId>,
    // Applications having a member of the class as an argument; only
    // meaningful at class representatives.
    uses: Vec<Vec<TermId>>,
    sigs: HashMap<(Head, Box<[TermId]>), TermId>,
    pending: Vec<(TermId, TermId)>,
}

impl CongruenceClosure {
    pub fn new(sig: Arc<Signature>) -> Self {
        CongruenceClosure {
            store: TermStore::new(sig),
            parent: Vec::new(),
            uses: Vec::new(),
            sigs: HashMap::new(),
            pending: Vec::new(),
        }
    }

    /// Registers both sides of every equation and merges them.
    pub fn from_equations(eqs: &EquationSet) -> Result<Self> {
        let mut cc = CongruenceClosure::new(eqs.signature().clone());
        for (l, r) in eqs.equations() {
            let l = cc.add(l)?;
            let r = cc.add(r)?;
            cc.merge(l, r);
        }
        Ok(cc)
    }

    pub fn store(&self) -> &TermStore {
        &self.store
    }

    /// Interns `t` and registers any new subterms with the closure. Newly
    /// added applications are immediately merged with congruent ones.
    pub fn add(&mut self, t: &Term) -> Result<TermId> {
        let mut fresh = Vec::new();
        let id = self.store.intern_with(t, &mut |_, id| fresh.push(id))?;
        for n in fresh {
            self.register(n);
        }
        self.propagate();
        Ok(id)
    }

    fn register(&mut self, n: TermId) {
        debug_assert_eq!(n.index(), self.parent.len());
        self.parent.push(n);
        self.uses.push(Vec::new());
        let head = self.store.head(n);
        let key = self.signature_of(n);
        if !self.store.args(n).is_empty() {
            let mut reps: Vec<TermId> = key.clone().into_vec();
            reps.dedup();
            for r in reps {
                if !self.uses[r.index()].contains(&n) {
                    self.uses[r.index()].push(n);
                }
            }
        }
        match self.sigs.get(&(head, key.clone())) {
            Some(&other) => self.pending.push((n, other)),
            None => {
                self.sigs.insert((head, key), n);
            }
        }
    }

    fn signature_of(&self, n: TermId) -> Box<[TermId]> {
        self.store.args(n).iter().map(|&a| self.find(a)).collect()
    }

    /// Representative of `id`'s class. Read-only: no path compression, so
    /// queries can share the closure.
    pub fn find(&self, mut id: TermId) -> TermId {
        while self.parent[id.index()] != id {
            id = self.parent[id.index()];
        }
        id
    }

    fn find_compress(&mut self, id: TermId) -> TermId {
        let root = self.find(id);
        let mut cur = id;
        while self.parent[cur.index()] != root {
            let next = self.parent[cur.index()];
            self.parent[cur.index()] = root;
            cur = next;
        }
        root
    }

    /// Asserts `a = b` and closes under congruence.
    pub fn merge(&mut self, a: TermId, b: TermId) {
        self.pending.push((a, b));
        self.propagate();
    }

    fn propagate(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let ra = self.find_compress(a);
            let rb = self.find_compress(b);
            if ra == rb {
                continue;
            }
            // Lower insertion index stays representative.
            let (winner, loser) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[loser.index()] = winner;
            let moved = std::mem::take(&mut self.uses[loser.index()]);
            for &p in &moved {
                let key = (self.store.head(p), self.signature_of(p));
                match self.sigs.get(&key) {
                    Some(&q) if self.find(q) != self.find(p) => self.pending.push((p, q)),
                    Some(_) => {}
                    None => {
                        self.sigs.insert(key, p);
                    }
                }
            }
            let winner_uses = &mut self.uses[winner.index()];
            for p in moved {
                if !winner_uses.contains(&p) {
                    winner_uses.push(p);
                }
            }
        }
    }

    pub fn equal(&self, a: TermId, b: TermId) -> bool {
        self.find(a) == self.find(b)
    }

    /// Groups `ids` by class; groups and members keep first-occurrence order
    /// and hold positions into `ids`.
    pub fn partition(&self, ids: &[TermId]) -> Vec<Vec<usize>> {
        let mut groups: Vec<(TermId, Vec<usize>)> = Vec::new();
        for (i, &id) in ids.iter().enumerate() {
            let r = self.find(id);
            match groups.iter_mut().find(|(g, _)| *g == r) {
                Some((_, members)) => members.push(i),
                None => groups.push((r, vec![i])),
            }
        }
        groups.into_iter().map(|(_, m)| m).collect()
    }
}

/// Decides whether `s` and `t` are equal in the smallest congruence
/// containing `eqs`, with variables read as fresh constants.
pub fn congruence_decide(eqs: &EquationSet, s: &Term, t: &Term) -> Result<bool> {
    let mut cc = CongruenceClosure::from_equations(eqs)?;
    let s = cc.add(s)?;
    let t = cc.add(t)?;
    Ok(cc.equal(s, t))
}

/// The generated congruence restricted to `terms`, as groups of positions.
pub fn congruence_classes(eqs: &EquationSet, terms: &[Term]) -> Result<Vec<Vec<usize>>> {
    let mut cc = CongruenceClosure::from_equations(eqs)?;
    let ids = terms
        .iter()
        .map(|t| cc.add(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(cc.partition(&ids))
}
