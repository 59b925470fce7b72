//! Finite coalgebras and algebras for polynomial functors, and the solver
//! for coalgebra-to-algebra morphisms between them.

mod algebra;
mod coalgebra;
mod hylo;
mod morphism;

pub use algebra::{eval_term, tuples, FinAlgebra, MAX_TABLE_ENTRIES};
pub use coalgebra::{FinCoalgebra, Step};
pub use hylo::{
    check_corecursive_on, check_recursive_on, count_hylo, enumerate_hylo, first_violation,
    is_ca_morphism, require_ca_morphism, CaMorphism, DEFAULT_BUDGET,
};
pub use morphism::{is_algebra_morphism, is_coalgebra_morphism};
