//! The relatively initial algebra `μ(b)` of a finite coalgebra.
//!
//! For a polynomial functor, `μ(b)` is the term algebra over the states
//! quotiented by the congruence generated by `x ≈ b(x)`. The quotient is
//! usually infinite, so it is only ever presented through its word problem:
//! a [`MuPresentation`] holds the generating equations, and a [`MuClosure`]
//! answers equality queries against them.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finstruct::{count_hylo, require_ca_morphism, CaMorphism, FinAlgebra, FinCoalgebra};
use crate::sigterm::{validate_term, CongruenceClosure, EquationSet, Term, TermId};

/// The generators `{ x ≈ b(x) | x ∈ B }` of `≈_b`, in state order.
#[derive(Debug, Clone)]
pub struct MuPresentation {
    base: FinCoalgebra,
    eqs: EquationSet,
}

impl MuPresentation {
    pub fn new(b: &FinCoalgebra) -> Self {
        let equations = (0..b.len())
            .map(|x| (Term::var(b.state_name(x)), b.step_term(x)))
            .collect();
        let eqs = EquationSet::new(b.signature().clone(), equations)
            .expect("steps of a coalgebra are well-formed flat terms");
        MuPresentation {
            base: b.clone(),
            eqs,
        }
    }

    pub fn coalgebra(&self) -> &FinCoalgebra {
        &self.base
    }

    pub fn equations(&self) -> &EquationSet {
        &self.eqs
    }

    /// Builds the closure of the generators once; queries are then read-only.
    pub fn closure(&self) -> MuClosure<'_> {
        let cc = CongruenceClosure::from_equations(&self.eqs)
            .expect("generators were validated on construction");
        MuClosure { pres: self, cc }
    }

    /// Checks that `t` is a term over the signature whose variables are states.
    pub fn validate(&self, t: &Term) -> Result<()> {
        validate_term(self.base.signature(), t)?;
        for v in t.vars() {
            if self.base.state_index(v).is_none() {
                return Err(Error::UnboundVariable(v.to_string()));
            }
        }
        Ok(())
    }
}

pub fn mu_presentation(b: &FinCoalgebra) -> MuPresentation {
    MuPresentation::new(b)
}

/// Word-problem oracle for `T^Σ(B)/≈_b`.
#[derive(Debug, Clone)]
pub struct MuClosure<'p> {
    pres: &'p MuPresentation,
    cc: CongruenceClosure,
}

impl MuClosure<'_> {
    /// Registers query terms. After this, [`MuClosure::equal_ids`] and
    /// [`MuClosure::class_of`] take `&self` and can be shared.
    pub fn add(&mut self, t: &Term) -> Result<TermId> {
        self.pres.validate(t)?;
        self.cc.add(t)
    }

    pub fn equal_ids(&self, s: TermId, t: TermId) -> bool {
        self.cc.equal(s, t)
    }

    /// The class representative, a term chosen by the lowest insertion index.
    pub fn class_of(&self, id: TermId) -> Term {
        self.cc.store().to_term(self.cc.find(id))
    }

    pub fn equal(&mut self, s: &Term, t: &Term) -> Result<bool> {
        let s = self.add(s)?;
        let t = self.add(t)?;
        Ok(self.equal_ids(s, t))
    }
}

/// `s ≈_b t`.
pub fn mu_equal(b: &FinCoalgebra, s: &Term, t: &Term) -> Result<bool> {
    MuPresentation::new(b).closure().equal(s, t)
}

/// Number of algebra morphisms `μ(b) → a`, computed as `|Hylo(b, a)|`
/// through the defining bijection.
pub fn mu_hom_count(b: &FinCoalgebra, a: &FinAlgebra, budget: u128) -> Result<usize> {
    count_hylo(b, a, budget)
}

/// Evaluates `s` and `t` in `a` with the states interpreted by `f`.
///
/// For a genuine solution `f` and `s ≈_b t` the two values always agree,
/// since evaluating under `f` factors through the quotient. Returns whether
/// they do; a `false` would mean the decision procedure is unsound.
pub fn mu_soundness_check(
    b: &FinCoalgebra,
    a: &FinAlgebra,
    f: &CaMorphism,
    s: &Term,
    t: &Term,
) -> Result<bool> {
    require_ca_morphism(b, a, f.as_slice())?;
    if !mu_equal(b, s, t)? {
        return Err(Error::Invalid(format!("`{s}` and `{t}` are not ≈_b-equal")));
    }
    let env: HashMap<&str, usize> = (0..b.len()).map(|x| (b.state_name(x), f.get(x))).collect();
    let lookup = |v: &str| env.get(v).copied();
    Ok(a.eval(&lookup, s)? == a.eval(&lookup, t)?)
}
