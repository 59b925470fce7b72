//! The `relfix` command line.
//!
//! Every command prints one line of canonical JSON on success. Failures print
//! a JSON object with `error`, `message` and, where there is one, `witness`
//! to standard error. Exit codes: 0 success, 1 budget exceeded, 2 invalid
//! input or failed precondition, 3 negative verdict (unsafe system).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::finstruct::{enumerate_hylo, FinAlgebra, FinCoalgebra, DEFAULT_BUDGET};
use crate::format::{
    algebra_from_json, canonical, coalgebra_from_json, read_json, transition_system_from_json,
};
use crate::fractal::{carpet_member, render, Coord};
use crate::gen::{random_transition_system, rng_from_seed};
use crate::lattice::{galois_check, safety_check, MonotoneOp, SafetyVerdict, TransitionSystem};
use crate::mu::mu_presentation;
use crate::nu::{
    classify_cartesian, count_coalg_homs_to_nu, enum_nu_prefixes, is_a_guided, prefixes_to_json,
    TreePrefix, ROUNDTRIP_DEPTH,
};
use crate::sigterm::Term;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BUDGET: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSAFE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "relfix",
    version,
    about = "Relative fixed points on finite structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether two terms over the states are identified by x ≈ b(x).
    MuEq {
        coalgebra: PathBuf,
        s: String,
        t: String,
    },
    /// Count or list the coalgebra-to-algebra morphisms.
    Hylo {
        coalgebra: PathBuf,
        algebra: PathBuf,
        /// Print only the number of morphisms (the default).
        #[arg(long, conflicts_with = "list")]
        count: bool,
        /// Print every morphism, in lexicographic order.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Check that every state reachable from `init` is in `safe`.
    Safety { system: PathBuf },
    /// Enumerate guided tree prefixes of the given depth.
    NuEnum {
        algebra: PathBuf,
        /// Root label, as a carrier element name.
        #[arg(long)]
        root: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Check whether a tree prefix is guided by the algebra.
    NuCheck { algebra: PathBuf, prefix: PathBuf },
    /// Count morphisms into the guided-tree coalgebra, cross-checked against
    /// the coalgebra-to-algebra morphisms.
    NuHoms {
        coalgebra: PathBuf,
        algebra: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long, default_value_t = ROUNDTRIP_DEPTH)]
        depth: usize,
    },
    /// List the subsets P with P = ○P and their characteristic maps.
    Cartesian { coalgebra: PathBuf },
    /// Check μ(I) ⊆ P ⟺ I ⊆ ν(P) for every post-fixed I and pre-fixed P.
    Galois {
        /// A transition system to check; random systems are used without one.
        system: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random systems.
        #[arg(long, default_value_t = 100)]
        systems: usize,
        /// Largest random state count.
        #[arg(long, default_value_t = 6)]
        states: usize,
    },
    /// Render a carpet approximant as a binary PGM.
    Sierpinski {
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        res: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Test a point against a carpet approximant. Coordinates may be exact
    /// fractions such as `1/3`.
    Member {
        x: String,
        y: String,
        #[arg(long)]
        depth: u32,
    },
}

/// Everything a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    match dispatch(cli.command) {
        Ok((value, code)) => Outcome {
            code,
            stdout: canonical(&value) + "\n",
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: canonical(&error_json(&e)) + "\n",
        },
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({ "error": e.kind(), "message": e.to_string() });
    let witness = match e {
        Error::NotPostFixed { witness } | Error::NotPreFixed { witness } => Some(witness.clone()),
        Error::NotCaMorphism(state) => Some(state.clone()),
        _ => None,
    };
    if let Some(w) = witness {
        v["witness"] = json!(w);
    }
    v
}

fn load_coalgebra(p: &Path) -> Result<FinCoalgebra> {
    coalgebra_from_json(&read_json(p)?)
}

fn load_algebra(p: &Path) -> Result<FinAlgebra> {
    algebra_from_json(&read_json(p)?)
}

fn dispatch(cmd: Command) -> Result<(Value, i32)> {
    let ok = |v: Value| Ok((v, EXIT_OK));
    match cmd {
        Command::MuEq { coalgebra, s, t } => {
            let b = load_coalgebra(&coalgebra)?;
            let pres = mu_presentation(&b);
            let equal = pres.closure().equal(&Term::parse(&s)?, &Term::parse(&t)?)?;
            let equations: Vec<String> = pres
                .equations()
                .equations()
                .iter()
                .map(|(l, r)| format!("{l} = {r}"))
                .collect();
            ok(json!({
                "result": if equal { "equal" } else { "distinct" },
                "equations": equations,
            }))
        }
        Command::Hylo {
            coalgebra,
            algebra,
            list,
            budget,
            ..
        } => {
            let b = load_coalgebra(&coalgebra)?;
            let a = load_algebra(&algebra)?;
            let sols = enumerate_hylo(&b, &a, budget)?;
            if !list {
                return ok(json!({ "count": sols.len() }));
            }
            let maps: Vec<Vec<&str>> = sols
                .iter()
                .map(|f| f.as_slice().iter().map(|&v| a.element_name(v)).collect())
                .collect();
            ok(json!({ "count": sols.len(), "states": b.states(), "morphisms": maps }))
        }
        Command::Safety { system } => {
            let ts = transition_system_from_json(&read_json(&system)?)?;
            Ok(match safety_check(&ts)? {
                SafetyVerdict::Safe { stage } => {
                    (json!({ "result": "safe", "stage": stage }), EXIT_OK)
                }
                SafetyVerdict::Unsafe {
                    stage,
                    side,
                    witness,
                } => (
                    json!({
                        "result": "unsafe",
                        "stage": stage,
                        "side": side.as_str(),
                        "witness": ts.states()[witness],
                    }),
                    EXIT_UNSAFE,
                ),
            })
        }
        Command::NuEnum {
            algebra,
            root,
            depth,
            budget,
        } => {
            let a = load_algebra(&algebra)?;
            let r = a
                .element_index(&root)
                .ok_or_else(|| Error::Invalid(format!("`{root}` is not in the carrier")))?;
            let ps = enum_nu_prefixes(&a, r, depth, budget)?;
            ok(json!({ "count": ps.len(), "prefixes": prefixes_to_json(&a, &ps) }))
        }
        Command::NuCheck { algebra, prefix } => {
            let a = load_algebra(&algebra)?;
            let p = TreePrefix::from_json(&a, &read_json(&prefix)?)?;
            ok(json!({ "guided": is_a_guided(&a, &p)?, "depth": p.depth() }))
        }
        Command::NuHoms {
            coalgebra,
            algebra,
            budget,
            depth,
        } => {
            let b = load_coalgebra(&coalgebra)?;
            let a = load_algebra(&algebra)?;
            ok(json!({ "count": count_coalg_homs_to_nu(&b, &a, budget, depth)? }))
        }
        Command::Cartesian { coalgebra } => {
            let b = load_coalgebra(&coalgebra)?;
            let pairs = classify_cartesian(&b)?;
            let names = |p: &BitSet| -> Vec<&str> { p.iter().map(|x| b.state_name(x)).collect() };
            let subsets: Vec<Vec<&str>> = pairs.iter().map(|(p, _)| names(p)).collect();
            let maps: Vec<&[usize]> = pairs.iter().map(|(_, chi)| chi.as_slice()).collect();
            ok(json!({
                "count": pairs.len(),
                "states": b.states(),
                "subcoalgebras": subsets,
                "characteristic_maps": maps,
            }))
        }
        Command::Galois {
            system,
            seed,
            systems,
            states,
        } => {
            let corpus: Vec<TransitionSystem> = match system {
                Some(p) => vec![transition_system_from_json(&read_json(&p)?)?],
                None => {
                    if states > 16 {
                        return Err(Error::BoundExceeded {
                            size: states,
                            bound: 16,
                        });
                    }
                    let mut rng = rng_from_seed(seed);
                    (0..systems)
                        .map(|i| random_transition_system(&mut rng, i % (states + 1)))
                        .collect()
                }
            };
            let mut pairs = 0usize;
            let mut violations = 0usize;
            for ts in &corpus {
                let (p, v) = galois_exhaustive(&ts.op())?;
                pairs += p;
                violations += v;
            }
            let code = if violations == 0 {
                EXIT_OK
            } else {
                EXIT_UNSAFE
            };
            Ok((
                json!({
                    "result": if violations == 0 { "holds" } else { "violated" },
                    "systems": corpus.len(),
                    "pairs": pairs,
                    "violations": violations,
                }),
                code,
            ))
        }
        Command::Sierpinski { depth, res, out } => {
            let raster = render(depth, res)?;
            std::fs::write(&out, raster.to_pgm())
                .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", out.display())))?;
            ok(json!({ "depth": depth, "res": res, "inside": raster.count_inside() }))
        }
        Command::Member { x, y, depth } => {
            let (cx, cy): (Coord, Coord) = (x.parse()?, y.parse()?);
            ok(json!({ "member": carpet_member(&cx, &cy, depth) }))
        }
    }
}

/// Runs [`galois_check`] on every post-fixed × pre-fixed pair; returns the
/// number of pairs and the number that failed.
pub fn galois_exhaustive(op: &MonotoneOp) -> Result<(usize, usize)> {
    let n = op.len();
    if n > 16 {
        return Err(Error::BoundExceeded { size: n, bound: 16 });
    }
    let subsets: Vec<BitSet> = BitSet::all_subsets(n).collect();
    let images: Vec<BitSet> = subsets.iter().map(|x| op.apply(x)).collect();
    let post: Vec<&BitSet> = subsets
        .iter()
        .zip(&images)
        .filter(|(x, fx)| x.is_subset(fx))
        .map(|(x, _)| x)
        .collect();
    let pre: Vec<&BitSet> = subsets
        .iter()
        .zip(&images)
        .filter(|(x, fx)| fx.is_subset(x))
        .map(|(x, _)| x)
        .collect();
    let mut failures = 0;
    for i in &post {
        for p in &pre {
            if !galois_check(op, i, p)? {
                failures += 1;
            }
        }
    }
    Ok((post.len() * pre.len(), failures))
}
