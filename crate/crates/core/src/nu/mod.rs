//! The relatively terminal coalgebra `ν(a)`: `A`-labeled Σ-trees in which
//! every node is `a`-guided.
//!
//! The carrier is generally uncountable and is never built. It is observed
//! through finite prefixes, rational trees produced by coextension, and the
//! classifier of Cartesian subcoalgebras obtained from `ν(⋀)`.

mod modality;
mod prefix;
mod rational;

pub use modality::{
    cartesian_subcoalgebras, characteristic_map, classify_cartesian, greatest_subcoalgebra_below,
    meet_algebra, next_time, CARTESIAN_BOUND,
};
pub use prefix::{
    count_nu_prefixes, enum_nu_prefixes, is_a_guided, prefixes_to_json, Fibers, PrefixNode,
    TreePrefix,
};
pub use rational::{coextension, count_coalg_homs_to_nu, RationalTree, ROUNDTRIP_DEPTH};
