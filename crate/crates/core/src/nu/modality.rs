//! The next-time modality and the classifier of Cartesian subcoalgebras.

use std::sync::Arc;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::finstruct::{enumerate_hylo, CaMorphism, FinAlgebra, FinCoalgebra};
use crate::sigterm::Signature;

/// Largest carrier for which all subsets are enumerated.
pub const CARTESIAN_BOUND: usize = 16;

/// `○U = { x | b(x) = σ(x₁..xₖ) with every xᵢ ∈ U }`.
pub fn next_time(coalg: &FinCoalgebra, u: &BitSet) -> BitSet {
    let mut out = BitSet::empty(coalg.len());
    for x in 0..coalg.len() {
        if coalg.step(x).args.iter().all(|&y| u.contains(y)) {
            out.insert(x);
        }
    }
    out
}

/// Every `P` with `P = ○P`, in mask order (state `i` is bit `i`).
pub fn cartesian_subcoalgebras(coalg: &FinCoalgebra) -> Result<Vec<BitSet>> {
    if coalg.len() > CARTESIAN_BOUND {
        return Err(Error::BoundExceeded {
            size: coalg.len(),
            bound: CARTESIAN_BOUND,
        });
    }
    Ok(BitSet::all_subsets(coalg.len())
        .filter(|p| next_time(coalg, p) == *p)
        .collect())
}

/// The largest subcoalgebra (`P ⊆ ○P`) inside `u`, by iterating
/// `Z ↦ u ∩ ○Z` down from `u`. Usable on carriers of any size.
pub fn greatest_subcoalgebra_below(coalg: &FinCoalgebra, u: &BitSet) -> BitSet {
    let mut z = u.clone();
    loop {
        let next = u.intersection(&next_time(coalg, &z));
        if next == z {
            return z;
        }
        z = next;
    }
}

/// The algebra `⋀` on `{0, 1}`: a flat term goes to 1 iff all its arguments
/// are 1, so nullary symbols go to 1.
pub fn meet_algebra(sig: Arc<Signature>) -> FinAlgebra {
    FinAlgebra::from_fn(sig, vec!["0".into(), "1".into()], |_, args| {
        args.iter().all(|&v| v == 1) as usize
    })
    .expect("two-element tables are small")
}

/// `χ_P` as a map into the carrier of [`meet_algebra`].
pub fn characteristic_map(p: &BitSet) -> CaMorphism {
    CaMorphism((0..p.universe()).map(|x| p.contains(x) as usize).collect())
}

/// Pairs each Cartesian subcoalgebra `P` with its characteristic map and
/// checks that `P ↦ χ_P` is a bijection onto `Hylo(coalg, ⋀)`.
pub fn classify_cartesian(coalg: &FinCoalgebra) -> Result<Vec<(BitSet, CaMorphism)>> {
    let subsets = cartesian_subcoalgebras(coalg)?;
    let meet = meet_algebra(coalg.signature().clone());
    let sols = enumerate_hylo(coalg, &meet, 1u128 << CARTESIAN_BOUND)?;
    if sols.len() != subsets.len() {
        return Err(Error::BijectionViolation(format!(
            "{} Cartesian subcoalgebras but {} ca-morphisms into ⋀",
            subsets.len(),
            sols.len()
        )));
    }
    let mut pairs = Vec::with_capacity(subsets.len());
    for p in subsets {
        let chi = characteristic_map(&p);
        if sols.binary_search(&chi).is_err() {
            return Err(Error::BijectionViolation(format!(
                "characteristic map of {p:?} is not a ca-morphism"
            )));
        }
        pairs.push((p, chi));
    }
    Ok(pairs)
}
