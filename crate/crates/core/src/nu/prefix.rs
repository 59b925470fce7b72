use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::finstruct::{tuples, FinAlgebra};
use crate::sigterm::SymId;

/// A finite truncation of an `A`-labeled Σ-tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreePrefix {
    pub label: usize,
    pub node: PrefixNode,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PrefixNode {
    /// Not expanded yet; imposes no condition.
    Leaf,
    Expanded {
        op: SymId,
        children: Vec<TreePrefix>,
    },
}

impl TreePrefix {
    pub fn leaf(label: usize) -> Self {
        TreePrefix {
            label,
            node: PrefixNode::Leaf,
        }
    }

    pub fn expanded(label: usize, op: SymId, children: Vec<TreePrefix>) -> Self {
        TreePrefix {
            label,
            node: PrefixNode::Expanded { op, children },
        }
    }

    /// Expansion levels along the deepest branch; a lone leaf has depth 0.
    pub fn depth(&self) -> usize {
        match &self.node {
            PrefixNode::Leaf => 0,
            PrefixNode::Expanded { children, .. } => {
                1 + children.iter().map(TreePrefix::depth).max().unwrap_or(0)
            }
        }
    }

    /// Cuts every node at depth `d` down to a leaf.
    pub fn truncate(&self, d: usize) -> TreePrefix {
        match &self.node {
            PrefixNode::Expanded { op, children } if d > 0 => TreePrefix::expanded(
                self.label,
                *op,
                children.iter().map(|c| c.truncate(d - 1)).collect(),
            ),
            _ => TreePrefix::leaf(self.label),
        }
    }

    /// Nested `{label, op, children}` objects; leaves carry only a label.
    pub fn to_json(&self, a: &FinAlgebra) -> Value {
        match &self.node {
            PrefixNode::Leaf => json!({ "label": a.element_name(self.label) }),
            PrefixNode::Expanded { op, children } => json!({
                "label": a.element_name(self.label),
                "op": a.signature().name(*op),
                "children": children.iter().map(|c| c.to_json(a)).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(a: &FinAlgebra, v: &Value) -> Result<TreePrefix> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Invalid("prefix node must be an object".into()))?;
        let label = obj
            .get("label")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Invalid("prefix node needs a string `label`".into()))?;
        let label = a
            .element_index(label)
            .ok_or_else(|| Error::Invalid(format!("label `{label}` is not in the carrier")))?;
        let Some(op) = obj.get("op") else {
            if obj.contains_key("children") {
                return Err(Error::Invalid("`children` without `op`".into()));
            }
            return Ok(TreePrefix::leaf(label));
        };
        let op = op
            .as_str()
            .ok_or_else(|| Error::Invalid("`op` must be a string".into()))?;
        let children = match obj.get("children") {
            None => Vec::new(),
            Some(Value::Array(cs)) => cs
                .iter()
                .map(|c| TreePrefix::from_json(a, c))
                .collect::<Result<_>>()?,
            Some(_) => return Err(Error::Invalid("`children` must be an array".into())),
        };
        let op = a.signature().check_application(op, children.len())?;
        Ok(TreePrefix::expanded(label, op, children))
    }

    fn validate(&self, a: &FinAlgebra) -> Result<()> {
        if self.label >= a.len() {
            return Err(Error::Invalid(format!(
                "label #{} outside carrier",
                self.label
            )));
        }
        if let PrefixNode::Expanded { op, children } = &self.node {
            let sig = a.signature();
            if op.index() >= sig.len() {
                return Err(Error::UnknownSymbol(format!("#{}", op.0)));
            }
            if sig.arity(*op) != children.len() {
                return Err(Error::ArityMismatch {
                    op: sig.name(*op).to_string(),
                    expected: sig.arity(*op),
                    got: children.len(),
                });
            }
            children.iter().try_for_each(|c| c.validate(a))?;
        }
        Ok(())
    }
}

/// Whether every expanded node `x --σ--> (y₁..yₖ)` satisfies
/// `a(σ(y₁..yₖ)) = x`.
pub fn is_a_guided(a: &FinAlgebra, t: &TreePrefix) -> Result<bool> {
    t.validate(a)?;
    Ok(guided(a, t))
}

fn guided(a: &FinAlgebra, t: &TreePrefix) -> bool {
    match &t.node {
        PrefixNode::Leaf => true,
        PrefixNode::Expanded { op, children } => {
            let labels: Vec<usize> = children.iter().map(|c| c.label).collect();
            a.apply(*op, &labels) == t.label && children.iter().all(|c| guided(a, c))
        }
    }
}

/// Preimages `a⁻¹(x)` for every carrier element, as flat terms in symbol
/// order and then argument-tuple order.
#[derive(Debug, Clone)]
pub struct Fibers {
    by_element: Vec<Vec<(SymId, Vec<usize>)>>,
}

impl Fibers {
    pub fn new(a: &FinAlgebra) -> Self {
        let mut by_element = vec![Vec::new(); a.len()];
        let sig = a.signature();
        for s in sig.ids() {
            for args in tuples(a.len(), sig.arity(s)) {
                by_element[a.apply(s, &args)].push((s, args));
            }
        }
        Fibers { by_element }
    }

    pub fn of(&self, x: usize) -> &[(SymId, Vec<usize>)] {
        &self.by_element[x]
    }
}

/// Number of prefixes `enum_nu_prefixes` would return, saturating.
pub fn count_nu_prefixes(a: &FinAlgebra, root: usize, depth: usize) -> u128 {
    let fibers = Fibers::new(a);
    let mut memo = HashMap::new();
    count_rec(&fibers, root, depth, &mut memo)
}

fn count_rec(
    fibers: &Fibers,
    x: usize,
    depth: usize,
    memo: &mut HashMap<(usize, usize), u128>,
) -> u128 {
    if depth == 0 {
        return 1;
    }
    if let Some(&c) = memo.get(&(x, depth)) {
        return c;
    }
    let mut total = 0u128;
    for (_, ys) in fibers.of(x) {
        let mut prod = 1u128;
        for &y in ys {
            prod = prod.saturating_mul(count_rec(fibers, y, depth - 1, memo));
        }
        total = total.saturating_add(prod);
    }
    memo.insert((x, depth), total);
    total
}

/// All depth-`depth` truncations of `a`-guided trees rooted at `root`: every
/// node above the cut is expanded and guided, nodes at the cut are leaves.
pub fn enum_nu_prefixes(
    a: &FinAlgebra,
    root: usize,
    depth: usize,
    budget: u128,
) -> Result<Vec<TreePrefix>> {
    if root >= a.len() {
        return Err(Error::Invalid(format!("root #{root} outside carrier")));
    }
    let total = count_nu_prefixes(a, root, depth);
    if total > budget {
        return Err(Error::BudgetExceeded(total));
    }
    let fibers = Fibers::new(a);
    Ok(enum_rec(&fibers, root, depth))
}

fn enum_rec(fibers: &Fibers, x: usize, depth: usize) -> Vec<TreePrefix> {
    if depth == 0 {
        return vec![TreePrefix::leaf(x)];
    }
    let mut out = Vec::new();
    for (op, ys) in fibers.of(x) {
        let options: Vec<Vec<TreePrefix>> =
            ys.iter().map(|&y| enum_rec(fibers, y, depth - 1)).collect();
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        let mut cursor = vec![0usize; options.len()];
        'product: loop {
            out.push(TreePrefix::expanded(
                x,
                *op,
                cursor
                    .iter()
                    .zip(&options)
                    .map(|(&i, o)| o[i].clone())
                    .collect(),
            ));
            let mut k = options.len();
            loop {
                if k == 0 {
                    break 'product;
                }
                k -= 1;
                cursor[k] += 1;
                if cursor[k] < options[k].len() {
                    break;
                }
                cursor[k] = 0;
            }
        }
    }
    out
}

/// Canonical JSON for a list of prefixes.
pub fn prefixes_to_json(a: &FinAlgebra, ps: &[TreePrefix]) -> Value {
    Value::Array(ps.iter().map(|p| p.to_json(a)).collect())
}
