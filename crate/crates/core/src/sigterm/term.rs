use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::signature::{Signature, SymId};
use crate::error::{Error, Result};

pub const DEFAULT_DEPTH_LIMIT: usize = 10_000;

/// A finite Σ-tree whose leaves are variables.
///
/// This is the surface syntax. Terms that take part in a decision procedure are
/// interned into a [`TermStore`], where equal subterms share one [`TermId`].
/// Nullary applications are written `c()`; a bare identifier is a variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(op.into(), args)
    }

    pub fn constant(op: impl Into<String>) -> Self {
        Term::App(op.into(), Vec::new())
    }

    pub fn parse(src: &str) -> Result<Self> {
        parse_term(src, DEFAULT_DEPTH_LIMIT)
    }

    /// Number of edges on the longest root-to-leaf path. Variables and
    /// constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        self.walk(&mut |t| {
            if let Term::Var(v) = t {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
        });
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        if let Term::App(_, args) = self {
            for a in args {
                a.walk(f);
            }
        }
    }

    /// Replaces every variable `v` by `subst(v)`, keeping it when `None`.
    pub fn substitute(&self, subst: &impl Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => subst(v).unwrap_or_else(|| self.clone()),
            Term::App(op, args) => Term::App(
                op.clone(),
                args.iter().map(|a| a.substitute(subst)).collect(),
            ),
        }
    }
}

/// Checks that every application names a symbol of `sig` with the right
/// number of arguments.
pub fn validate_term(sig: &Signature, t: &Term) -> Result<()> {
    match t {
        Term::Var(_) => Ok(()),
        Term::App(op, args) => {
            sig.check_application(op, args.len())?;
            args.iter().try_for_each(|a| validate_term(sig, a))
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Term::parse(s)
    }
}

fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'\''
}

/// Parses the text syntax `op(arg1,...,argk)` with bare identifiers for
/// variables. Iterative, so deep inputs fail with [`Error::DepthLimit`]
/// rather than exhausting the stack.
pub fn parse_term(src: &str, depth_limit: usize) -> Result<Term> {
    let bytes = src.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let err = |offset: usize, message: &str| Error::Parse {
        offset,
        message: message.to_string(),
    };

    // Open applications: (symbol, args collected so far).
    let mut stack: Vec<(String, Vec<Term>)> = Vec::new();
    loop {
        skip_ws(&mut pos);
        let start = pos;
        while pos < bytes.len() && is_ident_byte(bytes[pos]) {
            pos += 1;
        }
        if start == pos {
            // `op()` closes immediately with no arguments.
            if pos < bytes.len() && bytes[pos] == b')' {
                if let Some((_, args)) = stack.last() {
                    if args.is_empty() {
                        let (op, args) = stack.pop().unwrap();
                        pos += 1;
                        let done = finish(Term::App(op, args), &mut stack, bytes, &mut pos)?;
                        if let Some(t) = done {
                            return Ok(t);
                        }
                        continue;
                    }
                }
            }
            return Err(err(pos, "expected identifier"));
        }
        let name = src[start..pos].to_string();
        skip_ws(&mut pos);
        if pos < bytes.len() && bytes[pos] == b'(' {
            pos += 1;
            if stack.len() >= depth_limit {
                return Err(Error::DepthLimit(depth_limit));
            }
            stack.push((name, Vec::new()));
            continue;
        }
        if let Some(t) = finish(Term::Var(name), &mut stack, bytes, &mut pos)? {
            return Ok(t);
        }
    }

    // Attaches a completed term to its parent, closing parents as `)` are
    // met. Returns the whole term once the stack is empty and input ends.
    fn finish(
        mut t: Term,
        stack: &mut Vec<(String, Vec<Term>)>,
        bytes: &[u8],
        pos: &mut usize,
    ) -> Result<Option<Term>> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            let Some((_, args)) = stack.last_mut() else {
                if *pos != bytes.len() {
                    return Err(Error::Parse {
                        offset: *pos,
                        message: "trailing input".into(),
                    });
                }
                return Ok(Some(t));
            };
            args.push(t);
            match bytes.get(*pos) {
                Some(b',') => {
                    *pos += 1;
                    return Ok(None);
                }
                Some(b')') => {
                    *pos += 1;
                    let (op, args) = stack.pop().unwrap();
                    t = Term::App(op, args);
                }
                _ => {
                    return Err(Error::Parse {
                        offset: *pos,
                        message: "expected `,` or `)`".into(),
                    })
                }
            }
        }
    }
}

/// Identity of a node in a [`TermStore`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Head of a stored node. Variables are internalized as constants that are
/// distinct from every signature symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Head {
    Sym(SymId),
    Var(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Node {
    head: Head,
    args: Box<[TermId]>,
}

/// Hash-consed term DAG: structurally equal terms are interned to the same
/// [`TermId`], so the store holds one node per distinct subterm.
#[derive(Debug, Clone)]
pub struct TermStore {
    sig: Arc<Signature>,
    nodes: Vec<Node>,
    depth: Vec<u32>,
    dedup: HashMap<Node, TermId>,
    vars: Vec<String>,
    var_index: HashMap<String, u32>,
    depth_limit: usize,
}

impl TermStore {
    pub fn new(sig: Arc<Signature>) -> Self {
        TermStore {
            sig,
            nodes: Vec::new(),
            depth: Vec::new(),
            dedup: HashMap::new(),
            vars: Vec::new(),
            var_index: HashMap::new(),
            depth_limit: DEFAULT_DEPTH_LIMIT,
        }
    }

    pub fn with_depth_limit(mut self, limit: usize) -> Self {
        self.depth_limit = limit;
        self
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn head(&self, id: TermId) -> Head {
        self.nodes[id.index()].head
    }

    pub fn args(&self, id: TermId) -> &[TermId] {
        &self.nodes[id.index()].args
    }

    pub fn depth(&self, id: TermId) -> usize {
        self.depth[id.index()] as usize
    }

    pub fn var_name(&self, v: u32) -> &str {
        &self.vars[v as usize]
    }

    /// Interns a node; returns its id and whether it was newly created.
    fn insert(&mut self, head: Head, args: Box<[TermId]>) -> Result<(TermId, bool)> {
        let node = Node { head, args };
        if let Some(&id) = self.dedup.get(&node) {
            return Ok((id, false));
        }
        let depth = node
            .args
            .iter()
            .map(|a| self.depth[a.index()] + 1)
            .max()
            .unwrap_or(0);
        if depth as usize > self.depth_limit {
            return Err(Error::DepthLimit(self.depth_limit));
        }
        let id = TermId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.depth.push(depth);
        self.dedup.insert(node, id);
        Ok((id, true))
    }

    pub(crate) fn var_raw(&mut self, name: &str) -> (TermId, bool) {
        let v = match self.var_index.get(name) {
            Some(&v) => v,
            None => {
                let v = self.vars.len() as u32;
                self.vars.push(name.to_string());
                self.var_index.insert(name.to_string(), v);
                v
            }
        };
        self.insert(Head::Var(v), Box::new([]))
            .expect("variables have depth 0")
    }

    pub(crate) fn app_raw(&mut self, sym: SymId, args: &[TermId]) -> Result<(TermId, bool)> {
        let expected = self.sig.arity(sym);
        if expected != args.len() {
            return Err(Error::ArityMismatch {
                op: self.sig.name(sym).to_string(),
                expected,
                got: args.len(),
            });
        }
        self.insert(Head::Sym(sym), args.into())
    }

    pub fn var(&mut self, name: &str) -> TermId {
        self.var_raw(name).0
    }

    pub fn app(&mut self, sym: SymId, args: &[TermId]) -> Result<TermId> {
        Ok(self.app_raw(sym, args)?.0)
    }

    /// Validates `t` against the signature and interns it, reporting every
    /// newly created node to `on_new` in bottom-up order.
    pub(crate) fn intern_with(
        &mut self,
        t: &Term,
        on_new: &mut impl FnMut(&TermStore, TermId),
    ) -> Result<TermId> {
        let (id, fresh) = match t {
            Term::Var(v) => self.var_raw(v),
            Term::App(op, args) => {
                let sym = self.sig.check_application(op, args.len())?;
                let ids = args
                    .iter()
                    .map(|a| self.intern_with(a, on_new))
                    .collect::<Result<Vec<_>>>()?;
                self.app_raw(sym, &ids)?
            }
        };
        if fresh {
            on_new(self, id);
        }
        Ok(id)
    }

    pub fn intern(&mut self, t: &Term) -> Result<TermId> {
        self.intern_with(t, &mut |_, _| {})
    }

    pub fn to_term(&self, id: TermId) -> Term {
        match self.head(id) {
            Head::Var(v) => Term::Var(self.vars[v as usize].clone()),
            Head::Sym(s) => Term::App(
                self.sig.name(s).to_string(),
                self.args(id).iter().map(|&a| self.to_term(a)).collect(),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::new([("chk", 1), ("cross", 1), ("and", 2), ("c", 0)]).unwrap())
    }

    #[test]
    fn parse_and_display() {
        let t = Term::parse(" and( chk(q) ,\n c() ) ").unwrap();
        assert_eq!(
            t,
            Term::app(
                "and",
                vec![Term::app("chk", vec![Term::var("q")]), Term::constant("c")]
            )
        );
        assert_eq!(t.to_string(), "and(chk(q),c())");
        assert_eq!(Term::parse(&t.to_string()).unwrap(), t);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.vars(), vec!["q"]);
    }

    #[test]
    fn parse_errors_report_offsets() {
        match Term::parse("f(x,,y)") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match Term::parse("f(x) y") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        match Term::parse("f(x") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            Term::parse(""),
            Err(Error::Parse { offset: 0, .. })
        ));
    }

    #[test]
    fn depth_limit_is_an_error() {
        let deep = format!("{}x{}", "f(".repeat(50), ")".repeat(50));
        assert!(parse_term(&deep, 100).is_ok());
        assert_eq!(parse_term(&deep, 49), Err(Error::DepthLimit(49)));
        let huge = format!("{}x{}", "f(".repeat(20_000), ")".repeat(20_000));
        assert_eq!(
            Term::parse(&huge),
            Err(Error::DepthLimit(DEFAULT_DEPTH_LIMIT))
        );
    }

    #[test]
    fn validate_examples() {
        let s = Signature::new([("chk", 1), ("cross", 1)]).unwrap();
        assert!(validate_term(&s, &Term::parse("chk(cross(q))").unwrap()).is_ok());
        assert_eq!(
            validate_term(&s, &Term::parse("chk(q,q)").unwrap()),
            Err(Error::ArityMismatch {
                op: "chk".into(),
                expected: 1,
                got: 2
            })
        );
        let s = Signature::new([("and", 2)]).unwrap();
        assert_eq!(
            validate_term(&s, &Term::parse("or(x,y)").unwrap()),
            Err(Error::UnknownSymbol("or".into()))
        );
    }

    #[test]
    fn hash_consing_shares_subterms() {
        let mut store = TermStore::new(sig());
        let t = Term::parse("and(chk(q),chk(q))").unwrap();
        let a = store.intern(&t).unwrap();
        let b = store.intern(&t).unwrap();
        assert_eq!(a, b);
        // q, chk(q), and(..)
        assert_eq!(store.len(), 3);
        assert_eq!(store.args(a)[0], store.args(a)[1]);
        assert_eq!(store.to_term(a), t);
        assert_eq!(store.depth(a), 2);
    }

    #[test]
    fn store_depth_limit() {
        let mut store = TermStore::new(sig()).with_depth_limit(3);
        assert!(store
            .intern(&Term::parse("chk(chk(chk(q)))").unwrap())
            .is_ok());
        assert_eq!(
            store.intern(&Term::parse("chk(chk(chk(chk(q))))").unwrap()),
            Err(Error::DepthLimit(3))
        );
    }
}
