//! Relative fixed points of functors, made executable on finite structures.
//!
//! Two settings are covered. On a finite powerset lattice a monotone map has
//! a least fixed point above every post-fixed point and a greatest one below
//! every pre-fixed point ([`lattice`]). For a polynomial functor over a finite
//! signature, a finite coalgebra `b` and a finite algebra `a` are related by
//! the set `Hylo(b, a)` of coalgebra-to-algebra morphisms ([`finstruct`]),
//! represented on one side by the term quotient `μ(b)` ([`mu`]) and on the
//! other by the coalgebra of guided trees `ν(a)` ([`nu`]).
//!
//! ```
//! use std::sync::Arc;
//! use relfix::finstruct::{count_hylo, FinAlgebra, FinCoalgebra, DEFAULT_BUDGET};
//! use relfix::sigterm::Signature;
//!
//! let sig = Arc::new(Signature::new([("chk", 1), ("cross", 1)])?);
//! let cycle = FinCoalgebra::from_named(sig.clone(), &[("q0", "chk", &["q1"]), ("q1", "chk", &["q0"])])?;
//! let parity = FinAlgebra::from_fn(sig, vec!["0".into(), "1".into()], |s, x| {
//!     if s.index() == 0 { 1 - x[0] } else { x[0] }
//! })?;
//! assert_eq!(count_hylo(&cycle, &parity, DEFAULT_BUDGET)?, 2);
//! # Ok::<(), relfix::Error>(())
//! ```
//!
//! [`fractal`] treats the Sierpinski carpet as an intersection of
//! approximants, and [`cli`] exposes everything behind one binary.

pub mod bits;
pub mod cli;
pub mod error;
pub mod finstruct;
pub mod format;
pub mod fractal;
pub mod gen;
pub mod lattice;
pub mod mu;
pub mod nu;
pub mod sigterm;

pub use error::{Error, Result};

/// The guide's chapters, compiled here so that their snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/terms.md")]
    mod terms {}
    #[doc = include_str!("../../../book/src/hylo.md")]
    mod hylo {}
    #[doc = include_str!("../../../book/src/nu.md")]
    mod nu {}
    #[doc = include_str!("../../../book/src/cartesian.md")]
    mod cartesian {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/carpet.md")]
    mod carpet {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
