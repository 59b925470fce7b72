use super::algebra::{tuples, FinAlgebra};
use super::coalgebra::FinCoalgebra;

/// Whether `g: B₁ → B₂` commutes with the coalgebra structures:
/// `b₂(g(x)) = σ(g(x₁)..g(xₖ))` whenever `b₁(x) = σ(x₁..xₖ)`.
pub fn is_coalgebra_morphism(src: &FinCoalgebra, dst: &FinCoalgebra, g: &[usize]) -> bool {
    if src.signature() != dst.signature() || g.len() != src.len() {
        return false;
    }
    if g.iter().any(|&y| y >= dst.len()) {
        return false;
    }
    (0..src.len()).all(|x| {
        let s = src.step(x);
        let t = dst.step(g[x]);
        s.op == t.op && s.args.iter().zip(&t.args).all(|(&xi, &yi)| g[xi] == yi)
    })
}

/// Whether `h: A₁ → A₂` commutes with the algebra structures:
/// `h(a₁(σ(x₁..xₖ))) = a₂(σ(h(x₁)..h(xₖ)))` for every flat term.
pub fn is_algebra_morphism(src: &FinAlgebra, dst: &FinAlgebra, h: &[usize]) -> bool {
    if src.signature() != dst.signature() || h.len() != src.len() {
        return false;
    }
    if h.iter().any(|&y| y >= dst.len()) {
        return false;
    }
    let sig = src.signature();
    sig.ids().all(|s| {
        tuples(src.len(), sig.arity(s)).all(|args| {
            let mapped: Vec<usize> = args.iter().map(|&x| h[x]).collect();
            h[src.apply(s, &args)] == dst.apply(s, &mapped)
        })
    })
}
