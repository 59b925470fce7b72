//! Signatures, terms, and ground congruence closure.

mod congruence;
mod signature;
mod term;

pub use congruence::{congruence_classes, congruence_decide, CongruenceClosure, EquationSet};
pub use signature::{Signature, SymId, Symbol};
pub use term::{parse_term, validate_term, Head, Term, TermId, TermStore, DEFAULT_DEPTH_LIMIT};
