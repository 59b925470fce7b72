use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sigterm::{Signature, SymId, Term};

/// Largest table (per symbol) an algebra may carry.
pub const MAX_TABLE_ENTRIES: usize = 1 << 22;

/// An algebra `a: FA → A` on a finite, ordered carrier, stored as one dense
/// table per symbol. Argument tuples index the table in mixed radix with the
/// first argument most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinAlgebra {
    sig: Arc<Signature>,
    carrier: Vec<String>,
    index: HashMap<String, usize>,
    tables: Vec<Vec<usize>>,
}

fn table_size(carrier: usize, arity: usize) -> Result<usize> {
    u32::try_from(arity)
        .ok()
        .and_then(|k| carrier.checked_pow(k))
        .filter(|&n| n <= MAX_TABLE_ENTRIES)
        .ok_or_else(|| {
            Error::Invalid(format!(
                "table for arity {arity} over {carrier} elements is too large"
            ))
        })
}

impl FinAlgebra {
    /// Builds an algebra from explicit `(op, args, out)` entries. Entries not
    /// listed take `default`; without a default every entry must be listed.
    pub fn new(
        sig: Arc<Signature>,
        carrier: Vec<String>,
        entries: impl IntoIterator<Item = (SymId, Vec<usize>, usize)>,
        default: Option<usize>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, c) in carrier.iter().enumerate() {
            if index.insert(c.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate carrier element `{c}`")));
            }
        }
        let n = carrier.len();
        if let Some(d) = default {
            if d >= n {
                return Err(Error::Invalid("default value outside carrier".into()));
            }
        }
        let mut tables: Vec<Vec<Option<usize>>> = sig
            .ids()
            .map(|s| table_size(n, sig.arity(s)).map(|size| vec![None; size]))
            .collect::<Result<_>>()?;
        for (op, args, out) in entries {
            if op.index() >= sig.len() {
                return Err(Error::UnknownSymbol(format!("#{}", op.0)));
            }
            let expected = sig.arity(op);
            if args.len() != expected {
                return Err(Error::ArityMismatch {
                    op: sig.name(op).to_string(),
                    expected,
                    got: args.len(),
                });
            }
            if out >= n || args.iter().any(|&a| a >= n) {
                return Err(Error::Invalid(format!(
                    "entry for `{}` mentions a value outside the carrier",
                    sig.name(op)
                )));
            }
            let slot = &mut tables[op.index()][encode(n, &args)];
            match slot {
                Some(prev) if *prev != out => {
                    return Err(Error::Invalid(format!(
                        "conflicting entries for `{}`",
                        sig.name(op)
                    )))
                }
                _ => *slot = Some(out),
            }
        }
        let tables = tables
            .into_iter()
            .enumerate()
            .map(|(s, t)| {
                t.into_iter()
                    .map(|e| {
                        e.or(default).ok_or_else(|| {
                            Error::Invalid(format!(
                                "algebra is not total: missing entry for `{}`",
                                sig.name(SymId(s as u32))
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinAlgebra {
            sig,
            carrier,
            index,
            tables,
        })
    }

    /// Tabulates `f` over every symbol and argument tuple.
    pub fn from_fn(
        sig: Arc<Signature>,
        carrier: Vec<String>,
        f: impl Fn(SymId, &[usize]) -> usize,
    ) -> Result<Self> {
        let n = carrier.len();
        let mut entries = Vec::new();
        for s in sig.ids() {
            for args in tuples(n, sig.arity(s)) {
                let out = f(s, &args);
                entries.push((s, args, out));
            }
        }
        Self::new(sig, carrier, entries, None)
    }

    /// Builds an algebra directly from dense tables, one per symbol.
    pub fn from_tables(
        sig: Arc<Signature>,
        carrier: Vec<String>,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = carrier.len();
        if tables.len() != sig.len() {
            return Err(Error::Invalid("one table per symbol required".into()));
        }
        let mut entries = Vec::new();
        for (s, table) in sig.ids().zip(tables) {
            let ar = sig.arity(s);
            if table.len() != table_size(n, ar)? {
                return Err(Error::Invalid(format!(
                    "table for `{}` has the wrong size",
                    sig.name(s)
                )));
            }
            for (args, out) in tuples(n, ar).zip(table) {
                entries.push((s, args, out));
            }
        }
        Self::new(sig, carrier, entries, None)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn element_name(&self, x: usize) -> &str {
        &self.carrier[x]
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// `a(σ(x₁..xₖ))`.
    pub fn apply(&self, op: SymId, args: &[usize]) -> usize {
        self.tables[op.index()][encode(self.carrier.len(), args)]
    }

    pub fn table(&self, op: SymId) -> &[usize] {
        &self.tables[op.index()]
    }

    /// Evaluates `t` homomorphically with variables looked up in `env`.
    pub fn eval(&self, env: &impl Fn(&str) -> Option<usize>, t: &Term) -> Result<usize> {
        match t {
            Term::Var(v) => env(v).ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::App(op, args) => {
                let sym = self.sig.check_application(op, args.len())?;
                let vals = args
                    .iter()
                    .map(|a| self.eval(env, a))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.apply(sym, &vals))
            }
        }
    }
}

/// Evaluates a term in `alg` under a variable environment.
pub fn eval_term(alg: &FinAlgebra, env: &HashMap<String, usize>, t: &Term) -> Result<usize> {
    alg.eval(&|v| env.get(v).copied(), t)
}

pub(crate) fn encode(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// All `k`-tuples over `0..n` in lexicographic order.
pub fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if k == 0 {
        1
    } else {
        n.checked_pow(k as u32).unwrap_or(usize::MAX)
    };
    (0..total).map(move |mut code| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        t
    })
}
