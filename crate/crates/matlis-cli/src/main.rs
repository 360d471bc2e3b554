use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use matlis::classify::{classify, Path};
use matlis::functor::{tor_ext_k, tor_ext_u, Functor, FunctorError, ModValue, Side};
use matlis::instances::{EpiInstance, InstanceDesc};
use matlis_cli::describe::{describe, describe_instance, Entity};
use matlis_cli::{parse_instance, replay, run_suite, CaseRecord, Summary, SuiteName, SuiteSpec};

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "mk", about = "Comodule and contramodule computations over ring epimorphisms")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normalize an instance descriptor such as `kron:inf,2` and print level dimensions of K.
    Instance {
        #[arg(long)]
        instance: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Class flags of `{"instance": …, "module": …}` read from stdin.
    Classify {
        #[arg(long, default_value = "definitional")]
        path: String,
    },
    /// `{"instance": …, "value": ModValue}` from stdin through one functor.
    Functor {
        /// `u` or `k`.
        #[arg(long)]
        side: String,
        /// `tor0`, `tor1`, `ext0` or `ext1`.
        #[arg(long)]
        functor: String,
    },
    /// Run a named suite, or replay the failing cases of a saved report.
    Verify {
        #[arg(long, required_unless_present = "replay")]
        suite: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "kron:inf")]
        instance: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        dim_bound: usize,
        #[arg(long)]
        level_budget: Option<usize>,
        #[arg(long)]
        morphisms: Option<usize>,
        /// A JSON-lines report whose non-passing cases are re-run alone.
        #[arg(long)]
        replay: Option<std::path::PathBuf>,
        /// Human-readable summary instead of JSON lines.
        #[arg(long)]
        human: bool,
    },
    /// Normal form, flags and blocks of `{"instance": …, "module": …}` from stdin.
    Describe,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<FunctorError> for Failure {
    fn from(e: FunctorError) -> Failure {
        match e {
            FunctorError::Precondition(_) | FunctorError::SymbolicUnsupported(_) | FunctorError::Instance(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Compute(other.to_string()),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn stdin_json<T: for<'de> Deserialize<'de>>() -> Result<T, Failure> {
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s).map_err(usage)?;
    serde_json::from_str(&s).map_err(usage)
}

fn instance(d: &InstanceDesc) -> Result<EpiInstance, Failure> {
    EpiInstance::from_desc(d).map_err(usage)
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("values serialize"));
}

#[derive(Deserialize)]
struct FunctorInput {
    instance: InstanceDesc,
    value: ModValue,
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Instance { instance: s, levels } => {
            let inst = instance(&parse_instance(&s).map_err(usage)?)?;
            print(&describe_instance(&inst, levels));
            Ok(PASS)
        }
        Cmd::Classify { path } => {
            let path: Path = path.parse().map_err(usage)?;
            let e: Entity = stdin_json()?;
            let inst = instance(&e.instance)?;
            let m = e.module.ok_or_else(|| usage("missing module"))?.to_rep()?;
            print(&json!(classify(&inst, &m, path)?));
            Ok(PASS)
        }
        Cmd::Functor { side, functor } => {
            let side = match side.to_ascii_lowercase().as_str() {
                "u" => Side::U,
                "k" => Side::K,
                other => return Err(usage(format!("unknown side {other}"))),
            };
            let f: Functor = serde_json::from_value(json!(functor.to_ascii_lowercase())).map_err(usage)?;
            let i: FunctorInput = stdin_json()?;
            let inst = instance(&i.instance)?;
            let r = match side {
                Side::U => tor_ext_u(&inst, &i.value, f)?,
                Side::K => tor_ext_k(&inst, &i.value, f)?,
            };
            print(&json!(r));
            Ok(PASS)
        }
        Cmd::Verify { suite, seed, instance: inst, samples, dim_bound, level_budget, morphisms, replay: file, human } => {
            if let Some(file) = file {
                return replay_file(&file, human);
            }
            let suite: SuiteName = suite.expect("required by clap").parse().map_err(usage)?;
            let mut spec = SuiteSpec::new(suite, parse_instance(&inst).map_err(usage)?, seed, samples, dim_bound);
            spec.level_budget = level_budget;
            spec.morphisms = morphisms;
            let report = run_suite(&spec).map_err(usage)?;
            if human {
                print!("{}", report.to_human());
            } else {
                print!("{}", report.to_jsonl());
            }
            Ok(if report.summary.pass { PASS } else { FAIL })
        }
        Cmd::Describe => {
            let e: Entity = stdin_json()?;
            let inst = instance(&e.instance)?;
            match e.module {
                Some(m) => print(&describe(&inst, &m)?),
                None => print(&describe_instance(&inst, 3)),
            }
            Ok(PASS)
        }
    }
}

fn replay_file(file: &std::path::Path, human: bool) -> Result<u8, Failure> {
    let text = std::fs::read_to_string(file).map_err(usage)?;
    let mut records = Vec::new();
    let mut summary: Option<Summary> = None;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let v: Value = serde_json::from_str(line).map_err(usage)?;
        match v.get("summary") {
            Some(s) => summary = Some(serde_json::from_value(s.clone()).map_err(usage)?),
            None => records.push(serde_json::from_value::<CaseRecord>(v).map_err(usage)?),
        }
    }
    let spec = summary.ok_or_else(|| usage("report has no summary line"))?.spec;
    let mut all_pass = true;
    for r in records.iter().filter(|r| !r.verdict.passed()) {
        let again = replay(&spec, r).map_err(usage)?;
        all_pass &= again.verdict.passed();
        if human {
            println!("case {}: recorded {:?}, replayed {:?}", r.index, r.verdict, again.verdict);
        } else {
            print(&json!(again));
        }
    }
    Ok(if all_pass { PASS } else { FAIL })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(FAIL)
        }
    }
}
