//! Command line front end. Every command writes one JSON document to stdout
//! or to `--out`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 malformed input,
//! 3 infeasible at the budget, 4 i/o error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use xisp::constructions::{build_dependent_sequence, build_exact_pair, hi_demo, PairKind};
use xisp::functionals::{Mode, SigmaRegistry, SpaceConfig};
use xisp::normsearch::{norm_certificate, Budget, SearchContext};
use xisp::num::{fmt_q, parse_nat, parse_q, Nat};
use xisp::scc::{generate_basic_scc, validate_basic_scc, IndexStream, SccBudget};
use xisp::schreier::{is_member, max_schreier_sum};
use xisp::suites::{describe, run_suites, Suite};
use xisp::tsirelson::tsirelson_norm;
use xisp::vectors::RationalVector;
use xisp::Result;

/// Environment variable naming the default session (coding registry) file.
const SESSION_ENV: &str = "XISP_SESSION";

#[derive(Parser)]
#[command(name = "xisp", version, about = "Exact norms, Schreier families and certified constructions for a Schreier-type HI space")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Tsirelson norm of a vector file `{"entries": [["i", "p/q"], ...]}`.
    Tnorm {
        vector: PathBuf,
        /// Include the norming functional.
        #[arg(long)]
        witness: bool,
    },
    /// Certified interval for the norm of the space, with a witness functional.
    Norm {
        vector: PathBuf,
        /// Search budget `depth,children,sizes`.
        #[arg(long, default_value = "6,8,64")]
        budget: Budget,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        session: SessionArgs,
    },
    /// Schreier family membership and maximal sums.
    Schreier {
        #[command(subcommand)]
        op: SchreierOp,
    },
    /// Generate and validate an (n, ε) basic special convex combination.
    Scc {
        #[arg(long)]
        n: u32,
        /// Tolerance ε as `p/q`.
        #[arg(long)]
        eps: String,
        /// First index of the stream M.
        #[arg(long, default_value = "1")]
        start: String,
        /// Gap between successive indices of M.
        #[arg(long, default_value = "1")]
        step: String,
    },
    /// Exact pairs, dependent sequences and the dependent-sequence demonstration.
    Build {
        #[command(subcommand)]
        what: BuildOp,
    },
    /// Run verification suites by name or criterion number, or `all`.
    Verify {
        suites: Vec<String>,
        /// Seed of the random corpora.
        #[arg(long, default_value_t = 2026)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum SchreierOp {
    /// Is the set in S_n? Prints the decomposition when it is.
    Member {
        #[arg(long)]
        n: u32,
        /// Elements of the set.
        #[arg(required = true, num_args = 1..)]
        set: Vec<String>,
    },
    /// Largest Σ|c_i| over a set of S_n, for a vector file.
    Maxsum {
        #[arg(long)]
        n: u32,
        weights: PathBuf,
    },
}

#[derive(Subcommand)]
enum BuildOp {
    /// One exact pair {x, f} of weight n.
    ExactPair {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        kind: u8,
        /// First index of the pair's support.
        #[arg(long, default_value = "2")]
        start: String,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        session: SessionArgs,
    },
    /// A dependent sequence of n exact pairs.
    Dependent {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        kind: u8,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        session: SessionArgs,
    },
    /// Dependent sequence of length 2n split into odd and even terms.
    HiDemo {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "6,8,64")]
        budget: Budget,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        session: SessionArgs,
    },
}

#[derive(Args, Clone, Copy)]
struct SpaceArgs {
    /// Parameter regime: `scaled` or `faithful`.
    #[arg(long, default_value = "scaled")]
    mode: Mode,
}

#[derive(Args, Clone)]
struct SessionArgs {
    /// Coding registry file, created if missing and saved after the run.
    /// Defaults to the XISP_SESSION environment variable.
    #[arg(long, env = SESSION_ENV)]
    session: Option<PathBuf>,
}

/// Echo of everything needed to replay a run.
#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    mode: Mode,
    session: Option<String>,
    seed: Option<u64>,
}

fn manifest(mode: Mode, session: Option<&Path>, seed: Option<u64>) -> Manifest {
    Manifest { tool: "xisp", version: env!("CARGO_PKG_VERSION"), mode, session: session.map(|p| p.display().to_string()), seed }
}

fn read_vector(path: &Path) -> Result<RationalVector> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn open_session(s: &SessionArgs, config: SpaceConfig) -> Result<SigmaRegistry> {
    match &s.session {
        Some(p) => SigmaRegistry::open(p, config),
        None => Ok(SigmaRegistry::new(config)),
    }
}

fn save_session(s: &SessionArgs, reg: &SigmaRegistry) -> Result<()> {
    match &s.session {
        Some(p) => reg.save(p),
        None => Ok(()),
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

/// Result document and whether every verification in it passed.
fn run(cli: &Cli) -> Result<(Value, bool)> {
    match &cli.command {
        Command::Tnorm { vector, witness } => {
            let v = read_vector(vector)?;
            let r = tsirelson_norm(&v)?;
            let mut out = json!({ "value": fmt_q(&r.value) });
            if *witness {
                out["witness"] = to_value(&r.witness)?;
            }
            Ok((out, true))
        }
        Command::Norm { vector, budget, space, session } => {
            let config = SpaceConfig::new(space.mode);
            let v = read_vector(vector)?;
            let reg = open_session(session, config)?;
            let cx = SearchContext { registry: session.session.as_ref().map(|_| &reg), blocks: None, hints: vec![] };
            let cert = norm_certificate(&v, *budget, config, &cx)?;
            let ok = cert.verify_with(config, cx.registry).is_ok();
            Ok((json!({ "manifest": manifest(space.mode, session.session.as_deref(), None), "certificate": cert }), ok))
        }
        Command::Schreier { op: SchreierOp::Member { n, set } } => {
            let mut xs: Vec<Nat> = set.iter().map(|s| parse_nat(s)).collect::<Result<_>>()?;
            xs.sort();
            xs.dedup();
            let tree = is_member(&xs, *n)?;
            Ok((json!({ "n": n, "set": xs.iter().map(Nat::to_string).collect::<Vec<_>>(), "member": tree.is_some(), "decomposition": tree }), true))
        }
        Command::Schreier { op: SchreierOp::Maxsum { n, weights } } => {
            let w = read_vector(weights)?;
            let s = max_schreier_sum(&w, *n)?;
            Ok((json!({ "n": n, "value": fmt_q(&s.value), "witness": s.witness.iter().map(Nat::to_string).collect::<Vec<_>>() }), true))
        }
        Command::Scc { n, eps, start, step } => {
            let eps = parse_q(eps)?;
            let stream = IndexStream::Arithmetic { from: parse_nat(start)?, step: parse_nat(step)? };
            let d = generate_basic_scc(&stream, *n, &eps, SccBudget::default())?;
            let report = validate_basic_scc(&d.coefficients, d.n, &d.eps)?;
            let ok = report.valid;
            Ok((json!({ "descriptor": d, "validation": report }), ok))
        }
        Command::Build { what } => build(what),
        Command::Verify { suites, seed } => {
            let chosen: Vec<Suite> = if suites.is_empty() || suites.iter().any(|s| s == "all") {
                Suite::ALL.to_vec()
            } else {
                suites.iter().map(|s| s.parse()).collect::<Result<_>>()?
            };
            let reports = run_suites(&chosen, *seed);
            for r in &reports {
                eprintln!("{}", describe(r));
            }
            let ok = reports.iter().all(|r| r.pass);
            Ok((json!({ "manifest": manifest(Mode::Scaled, None, Some(*seed)), "pass": ok, "reports": reports }), ok))
        }
    }
}

fn build(what: &BuildOp) -> Result<(Value, bool)> {
    match what {
        BuildOp::ExactPair { n, kind, start, space, session } => {
            let config = SpaceConfig::new(space.mode);
            let mut reg = open_session(session, config)?;
            let p = build_exact_pair(*n, PairKind::from_u8(*kind)?, &parse_nat(start)?, config, Some(&mut reg))?;
            save_session(session, &reg)?;
            let ok = p.f.eval(&p.x) == p.kind.target();
            Ok((json!({ "manifest": manifest(space.mode, session.session.as_deref(), None), "pair": p }), ok))
        }
        BuildOp::Dependent { n, kind, space, session } => {
            let config = SpaceConfig::new(space.mode);
            let mut reg = open_session(session, config)?;
            let s = build_dependent_sequence(*n, PairKind::from_u8(*kind)?, config, &mut reg)?;
            save_session(session, &reg)?;
            let ok = xisp::functionals::Validator::new(config).with_registry(&reg).is_valid(&s.witness);
            Ok((json!({ "manifest": manifest(space.mode, session.session.as_deref(), None), "sequence": s }), ok))
        }
        BuildOp::HiDemo { n, budget, space, session } => {
            let config = SpaceConfig::new(space.mode);
            let mut reg = open_session(session, config)?;
            let d = hi_demo(*n, config, &mut reg, *budget)?;
            save_session(session, &reg)?;
            let ok = [&d.lower, &d.upper, &d.kind_zero_upper].iter().all(|c| c.verify_with(config, Some(&reg)).is_ok());
            Ok((json!({ "manifest": manifest(space.mode, session.session.as_deref(), None), "demo": d }), ok))
        }
    }
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(value, ok)| emit(&value, cli.out.as_deref()).map(|_| ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("xisp: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            let doc = json!({ "error": e.code(), "message": e.to_string() });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap_or_default());
            eprintln!("xisp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
