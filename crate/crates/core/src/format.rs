//! JSON documents for signatures, coalgebras, algebras, transition systems
//! and term pairs.
//!
//! Every document carries `"format": 1` and may name its `"kind"`. Output is
//! canonical: object keys sorted, no insignificant whitespace.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::finstruct::{tuples, FinAlgebra, FinCoalgebra, Step};
use crate::lattice::TransitionSystem;
use crate::sigterm::{Signature, Term};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolDoc {
    name: String,
    arity: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignatureDoc {
    symbols: Vec<SymbolDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepDoc {
    op: String,
    args: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoalgebraDoc {
    signature: SignatureDoc,
    states: Vec<String>,
    step: BTreeMap<String, StepDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    op: String,
    args: Vec<String>,
    out: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    signature: SignatureDoc,
    carrier: Vec<String>,
    table: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionSystemDoc {
    states: Vec<String>,
    delta: BTreeMap<String, Vec<String>>,
    init: Vec<String>,
    safe: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermPairDoc {
    signature: SignatureDoc,
    s: String,
    t: String,
}

/// A decoded document of any kind.
#[derive(Debug, Clone)]
pub enum ProblemFile {
    Signature(Arc<Signature>),
    Coalgebra(FinCoalgebra),
    Algebra(FinAlgebra),
    TransitionSystem(TransitionSystem),
    TermPair {
        signature: Arc<Signature>,
        s: Term,
        t: Term,
    },
}

const KINDS: [&str; 5] = [
    "signature",
    "coalgebra",
    "algebra",
    "transition-system",
    "term-pair",
];

impl ProblemFile {
    /// Decodes a document whose `kind` field selects the payload.
    pub fn from_value(v: &Value) -> Result<Self> {
        let kind =
            header(v, None)?.ok_or_else(|| Error::Invalid("document has no `kind`".into()))?;
        match kind.as_str() {
            "signature" => signature_from_json(v).map(ProblemFile::Signature),
            "coalgebra" => coalgebra_from_json(v).map(ProblemFile::Coalgebra),
            "algebra" => algebra_from_json(v).map(ProblemFile::Algebra),
            "transition-system" => {
                transition_system_from_json(v).map(ProblemFile::TransitionSystem)
            }
            "term-pair" => {
                let (signature, s, t) = term_pair_from_json(v)?;
                Ok(ProblemFile::TermPair { signature, s, t })
            }
            other => Err(Error::Invalid(format!(
                "unknown kind `{other}`; expected one of {}",
                KINDS.join(", ")
            ))),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ProblemFile::Signature(_) => "signature",
            ProblemFile::Coalgebra(_) => "coalgebra",
            ProblemFile::Algebra(_) => "algebra",
            ProblemFile::TransitionSystem(_) => "transition-system",
            ProblemFile::TermPair { .. } => "term-pair",
        }
    }
}

/// Checks `format` and returns `kind` if present. A `kind` other than
/// `expected` is rejected.
fn header(v: &Value, expected: Option<&str>) -> Result<Option<String>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Invalid("document must be a JSON object".into()))?;
    match obj.get("format").and_then(Value::as_u64) {
        Some(FORMAT_VERSION) => {}
        Some(n) => return Err(Error::Invalid(format!("unsupported format {n}"))),
        None => return Err(Error::Invalid("missing `\"format\": 1`".into())),
    }
    let kind = match obj.get("kind") {
        None => None,
        Some(Value::String(k)) => Some(k.clone()),
        Some(_) => return Err(Error::Invalid("`kind` must be a string".into())),
    };
    if let (Some(k), Some(e)) = (&kind, expected) {
        if k != e {
            return Err(Error::Invalid(format!(
                "expected a {e} document, found {k}"
            )));
        }
    }
    Ok(kind)
}

fn body<T: DeserializeOwned>(v: &Value, kind: &str) -> Result<T> {
    header(v, Some(kind))?;
    let mut obj: Map<String, Value> = v.as_object().cloned().unwrap_or_default();
    obj.remove("format");
    obj.remove("kind");
    serde_json::from_value(Value::Object(obj))
        .map_err(|e| Error::Invalid(format!("invalid {kind} document: {e}")))
}

fn with_header(kind: &str, payload: impl Serialize) -> Value {
    let mut v = serde_json::to_value(payload).expect("documents serialize");
    let obj = v.as_object_mut().expect("documents are objects");
    obj.insert("format".into(), json!(FORMAT_VERSION));
    obj.insert("kind".into(), json!(kind));
    v
}

fn sig_from_doc(doc: SignatureDoc) -> Result<Arc<Signature>> {
    Ok(Arc::new(Signature::new(
        doc.symbols.into_iter().map(|s| (s.name, s.arity)),
    )?))
}

fn sig_to_doc(sig: &Signature) -> SignatureDoc {
    SignatureDoc {
        symbols: sig
            .symbols()
            .iter()
            .map(|s| SymbolDoc {
                name: s.name.clone(),
                arity: s.arity,
            })
            .collect(),
    }
}

pub fn signature_from_json(v: &Value) -> Result<Arc<Signature>> {
    sig_from_doc(body(v, "signature")?)
}

pub fn signature_to_json(sig: &Signature) -> Value {
    with_header("signature", sig_to_doc(sig))
}

pub fn coalgebra_from_json(v: &Value) -> Result<FinCoalgebra> {
    let doc: CoalgebraDoc = body(v, "coalgebra")?;
    let sig = sig_from_doc(doc.signature)?;
    let index: BTreeMap<&str, usize> = doc
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let state = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("unknown state `{name}`")))
    };
    if let Some(extra) = doc.step.keys().find(|k| !index.contains_key(k.as_str())) {
        return Err(Error::Invalid(format!(
            "step given for unknown state `{extra}`"
        )));
    }
    let mut steps = Vec::with_capacity(doc.states.len());
    for s in &doc.states {
        let st = doc
            .step
            .get(s)
            .ok_or_else(|| Error::Invalid(format!("state `{s}` has no step")))?;
        let op = sig.check_application(&st.op, st.args.len())?;
        let args = st.args.iter().map(|a| state(a)).collect::<Result<_>>()?;
        steps.push(Step { op, args });
    }
    FinCoalgebra::new(sig, doc.states.clone(), steps)
}

pub fn coalgebra_to_json(b: &FinCoalgebra) -> Value {
    let sig = b.signature();
    let step = (0..b.len())
        .map(|x| {
            let st = b.step(x);
            let doc = StepDoc {
                op: sig.name(st.op).to_string(),
                args: st
                    .args
                    .iter()
                    .map(|&y| b.state_name(y).to_string())
                    .collect(),
            };
            (b.state_name(x).to_string(), doc)
        })
        .collect();
    with_header(
        "coalgebra",
        CoalgebraDoc {
            signature: sig_to_doc(sig),
            states: b.states().to_vec(),
            step,
        },
    )
}

pub fn algebra_from_json(v: &Value) -> Result<FinAlgebra> {
    let doc: AlgebraDoc = body(v, "algebra")?;
    let sig = sig_from_doc(doc.signature)?;
    let elem = |name: &str| {
        doc.carrier
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Invalid(format!("`{name}` is not in the carrier")))
    };
    let mut entries = Vec::with_capacity(doc.table.len());
    for e in &doc.table {
        let op = sig.check_application(&e.op, e.args.len())?;
        let args = e.args.iter().map(|a| elem(a)).collect::<Result<_>>()?;
        entries.push((op, args, elem(&e.out)?));
    }
    let default = doc.default.as_deref().map(elem).transpose()?;
    FinAlgebra::new(sig, doc.carrier.clone(), entries, default)
}

/// Emits every table entry explicitly, by symbol and then argument tuple.
pub fn algebra_to_json(a: &FinAlgebra) -> Value {
    let sig = a.signature();
    let mut table = Vec::new();
    for s in sig.ids() {
        for args in tuples(a.len(), sig.arity(s)) {
            table.push(EntryDoc {
                op: sig.name(s).to_string(),
                out: a.element_name(a.apply(s, &args)).to_string(),
                args: args
                    .iter()
                    .map(|&x| a.element_name(x).to_string())
                    .collect(),
            });
        }
    }
    with_header(
        "algebra",
        AlgebraDoc {
            signature: sig_to_doc(sig),
            carrier: a.carrier().to_vec(),
            table,
            default: None,
        },
    )
}

pub fn transition_system_from_json(v: &Value) -> Result<TransitionSystem> {
    let doc: TransitionSystemDoc = body(v, "transition-system")?;
    let idx = |name: &str| {
        doc.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::Invalid(format!("unknown state `{name}`")))
    };
    let resolve = |xs: &[String]| xs.iter().map(|x| idx(x)).collect::<Result<Vec<_>>>();
    if let Some(extra) = doc.delta.keys().find(|k| !doc.states.contains(k)) {
        return Err(Error::Invalid(format!(
            "delta given for unknown state `{extra}`"
        )));
    }
    // A state missing from `delta` has no successors.
    let delta = doc
        .states
        .iter()
        .map(|s| doc.delta.get(s).map_or(Ok(Vec::new()), |ys| resolve(ys)))
        .collect::<Result<Vec<_>>>()?;
    TransitionSystem::new(
        doc.states.clone(),
        delta,
        resolve(&doc.init)?,
        resolve(&doc.safe)?,
    )
}

pub fn transition_system_to_json(ts: &TransitionSystem) -> Value {
    let names = |set: &crate::bits::BitSet| -> Vec<String> {
        set.iter().map(|x| ts.states()[x].clone()).collect()
    };
    with_header(
        "transition-system",
        TransitionSystemDoc {
            states: ts.states().to_vec(),
            delta: (0..ts.len())
                .map(|x| (ts.states()[x].clone(), names(ts.successors(x))))
                .collect(),
            init: names(ts.init()),
            safe: names(ts.safe()),
        },
    )
}

pub fn term_pair_from_json(v: &Value) -> Result<(Arc<Signature>, Term, Term)> {
    let doc: TermPairDoc = body(v, "term-pair")?;
    let sig = sig_from_doc(doc.signature)?;
    let s = Term::parse(&doc.s)?;
    let t = Term::parse(&doc.t)?;
    crate::sigterm::validate_term(&sig, &s)?;
    crate::sigterm::validate_term(&sig, &t)?;
    Ok((sig, s, t))
}

pub fn term_pair_to_json(sig: &Signature, s: &Term, t: &Term) -> Value {
    with_header(
        "term-pair",
        TermPairDoc {
            signature: sig_to_doc(sig),
            s: s.to_string(),
            t: t.to_string(),
        },
    )
}

/// Compact JSON with sorted keys.
pub fn canonical(v: &Value) -> String {
    // serde_json's default map is ordered by key.
    serde_json::to_string(v).expect("values serialize")
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    start + column.saturating_sub(1)
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text)
}
