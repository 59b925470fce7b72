use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a symbol within its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymId(pub u32);

impl SymId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// A finite ranked alphabet, the shape of the polynomial functor
/// `FX = Σ_σ X^ar(σ)`. Symbols keep their declaration order.
#[derive(Clone)]
pub struct Signature {
    symbols: Vec<Symbol>,
    index: HashMap<String, SymId>,
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut sig = Signature {
            symbols: Vec::new(),
            index: HashMap::new(),
        };
        for (name, arity) in symbols {
            let name = name.into();
            if sig.index.contains_key(&name) {
                return Err(Error::DuplicateSymbol(name));
            }
            sig.index
                .insert(name.clone(), SymId(sig.symbols.len() as u32));
            sig.symbols.push(Symbol { name, arity });
        }
        if sig.symbols.is_empty() {
            return Err(Error::EmptySignature);
        }
        Ok(sig)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn ids(&self) -> impl Iterator<Item = SymId> {
        (0..self.symbols.len() as u32).map(SymId)
    }

    pub fn lookup(&self, name: &str) -> Option<SymId> {
        self.index.get(name).copied()
    }

    pub fn resolve(&self, name: &str) -> Result<SymId> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn name(&self, id: SymId) -> &str {
        &self.symbols[id.index()].name
    }

    pub fn arity(&self, id: SymId) -> usize {
        self.symbols[id.index()].arity
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    pub fn has_nullary(&self) -> bool {
        self.symbols.iter().any(|s| s.arity == 0)
    }

    /// Resolves `name` and checks that it is applied to `got` arguments.
    pub fn check_application(&self, name: &str, got: usize) -> Result<SymId> {
        let id = self.resolve(name)?;
        let expected = self.arity(id);
        if expected != got {
            return Err(Error::ArityMismatch {
                op: name.to_string(),
                expected,
                got,
            });
        }
        Ok(id)
    }
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Signature {}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}/{}", s.name, s.arity)?;
        }
        f.write_str("}")
    }
}
