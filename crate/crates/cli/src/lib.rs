//! Command-line front end: argument parsing, input handling and dispatch.
//!
//! Every command prints one JSON [`Report`]. Reports can be piped: when the
//! input of a command is itself a report, its `artifact` is used.

pub mod fixtures;
pub mod report;
pub mod run;
pub mod verify;

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opalg::{with_tolerance, Cplx, Error, GaussRat, Result, ToleranceConfig};
use serde_json::{json, Value};

use report::{InputDigest, Report, Status};
use run::{Ctx, Outcome, Task};

#[derive(Parser, Debug)]
#[command(
    name = "opalg",
    version,
    about = "Operator algebras on C^n: closure, antisymmetry, triangularization, quantum orders and channels"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Arithmetic: exact Gaussian rationals or complex floating point.
    /// `auto` picks numeric only when the input holds non-integer numbers.
    #[arg(long, global = true, value_enum, default_value_t = Backend::Auto)]
    pub backend: Backend,
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Attempt budget for randomized searches.
    #[arg(long, global = true, default_value_t = 50)]
    pub budget: usize,
    /// Numeric tolerance override, e.g. `eps_abs=1e-12`. Keys: eps_abs,
    /// eps_rel, rank_threshold.
    #[arg(long = "tolerance", global = true, value_name = "KEY=VALUE")]
    pub tolerance: Vec<String>,
    /// Leave `timing_ms` out of the report, for byte-stable output.
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Numeric,
    Auto,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Input document; `-` or omitted reads stdin.
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Close a generator list into an algebra.
    Close(Input),
    /// Is the algebra antisymmetric? Negative reports carry a witness.
    Antisym(Input),
    /// Is every subquotient antisymmetric?
    Hereditary(Input),
    /// Upper triangularizing basis, or a full subquotient obstruction.
    Triangularize(Input),
    /// Block ordered basis in which every element is Jordanesque.
    Jordanesque(Input),
    /// Spectral idempotent of a matrix, as a polynomial in it.
    Idempotent {
        /// Eigenvalue, in entry syntax (`2`, `1/2-i`, ...).
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[command(flatten)]
        input: Input,
    },
    /// Build a structured algebra.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Quantum order computations on a nilpotent algebra.
    #[command(subcommand)]
    Qposet(QposetCmd),
    /// Quantum channels and their reachability algebra.
    #[command(subcommand)]
    Channels(ChannelsCmd),
    /// Print a bundled example document.
    Fixture {
        /// Fixture name; omit to list them.
        name: Option<String>,
    },
    /// Re-check the certificates in a report.
    Verify(Input),
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    /// Upper triangular matrices T_n.
    Tn {
        #[arg(long)]
        n: usize,
    },
    /// Diagonal algebra in a basis.
    Dv(Input),
    /// Block diagonal plus strictly block upper triangular, in a block basis.
    Jv(Input),
    /// Algebra of a preorder in a basis (standard basis by default).
    Preorder {
        /// Basis document.
        #[arg(long)]
        basis: Option<PathBuf>,
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Subcommand, Debug)]
pub enum QposetCmd {
    /// A longest quantum chain.
    Chains(Input),
    /// Antichain partitions and width bounds.
    Antichains(Input),
    /// Longest chain against the two antichain partitions.
    Mirsky(Input),
    /// Partition of the space into few chains.
    Dilworth(Input),
}

#[derive(Subcommand, Debug)]
pub enum ChannelsCmd {
    /// Check that each Kraus set is trace preserving.
    Validate(Input),
    /// Reachability algebra of the channels.
    Reach(Input),
    /// Can one pure state reach another?
    Transition {
        /// Start vector: a JSON entry list or a vector document file.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// Target vector, same forms as `--from`.
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Ask instead on C^n ⊗ C^k with this k.
        #[arg(long)]
        lift: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
    /// Trap subspaces: nontrivial invariant subspaces of the reachability algebra.
    Traps(Input),
}

/// What a command reads besides its positional input.
struct Extras {
    basis: Option<PathBuf>,
    from: Option<String>,
    to: Option<String>,
    lambda: Option<String>,
}

enum Plan {
    Task(Task, Option<Input>, Extras),
    Fixture(Option<String>),
    Verify(Input),
}

impl Command {
    fn plan(self) -> Plan {
        let none = || Extras {
            basis: None,
            from: None,
            to: None,
            lambda: None,
        };
        // Tasks whose arguments are files are filled in after reading.
        let t = |task: Task, i: Input| Plan::Task(task, Some(i), none());
        match self {
            Command::Close(i) => t(Task::Close, i),
            Command::Antisym(i) => t(Task::Antisym, i),
            Command::Hereditary(i) => t(Task::Hereditary, i),
            Command::Triangularize(i) => t(Task::Triangularize, i),
            Command::Jordanesque(i) => t(Task::Jordanesque, i),
            Command::Idempotent { lambda, input } => Plan::Task(
                Task::Idempotent {
                    lambda: String::new(),
                },
                Some(input),
                Extras {
                    lambda: Some(lambda),
                    ..none()
                },
            ),
            Command::Family(FamilyCmd::Tn { n }) => Plan::Task(Task::FamilyTn { n }, None, none()),
            Command::Family(FamilyCmd::Dv(i)) => t(Task::FamilyDv, i),
            Command::Family(FamilyCmd::Jv(i)) => t(Task::FamilyJv, i),
            Command::Family(FamilyCmd::Preorder { basis, input }) => Plan::Task(
                Task::FamilyPreorder { basis: None },
                Some(input),
                Extras { basis, ..none() },
            ),
            Command::Qposet(QposetCmd::Chains(i)) => t(Task::Chains, i),
            Command::Qposet(QposetCmd::Antichains(i)) => t(Task::Antichains, i),
            Command::Qposet(QposetCmd::Mirsky(i)) => t(Task::Mirsky, i),
            Command::Qposet(QposetCmd::Dilworth(i)) => t(Task::Dilworth, i),
            Command::Channels(ChannelsCmd::Validate(i)) => t(Task::ChannelsValidate, i),
            Command::Channels(ChannelsCmd::Reach(i)) => t(Task::ChannelsReach, i),
            Command::Channels(ChannelsCmd::Transition {
                from,
                to,
                lift,
                input,
            }) => Plan::Task(
                Task::ChannelsTransition {
                    from: Value::Null,
                    to: Value::Null,
                    lift,
                },
                Some(input),
                Extras {
                    from: Some(from),
                    to: Some(to),
                    ..none()
                },
            ),
            Command::Channels(ChannelsCmd::Traps(i)) => t(Task::ChannelsTraps, i),
            Command::Fixture { name } => Plan::Fixture(name),
            Command::Verify(i) => Plan::Verify(i),
        }
    }
}

fn tolerance_from(args: &[String], base: ToleranceConfig) -> Result<ToleranceConfig> {
    let mut cfg = base;
    for a in args {
        let (key, value) = a
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("tolerance `{a}` is not KEY=VALUE")))?;
        let x: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("tolerance value `{value}` is not a number")))?;
        match key.trim() {
            "eps_abs" => cfg.eps_abs = x,
            "eps_rel" => cfg.eps_rel = x,
            "rank_threshold" => cfg.rank_threshold = x,
            other => return Err(Error::Parse(format!("unknown tolerance key `{other}`"))),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Any JSON number that is not an integer.
fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(x) => !(x.is_i64() || x.is_u64()),
        Value::Array(xs) => xs.iter().any(has_float),
        Value::Object(m) => m.values().any(has_float),
        _ => false,
    }
}

struct Loaded {
    value: Value,
    digest: InputDigest,
}

fn read_source(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<(String, Vec<u8>)> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let bytes = std::fs::read(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            Ok((p.display().to_string(), bytes))
        }
        _ => {
            let mut bytes = Vec::new();
            stdin
                .read_to_end(&mut bytes)
                .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
            Ok(("stdin".into(), bytes))
        }
    }
}

fn load(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<Loaded> {
    let (source, bytes) = read_source(path, stdin)?;
    let value: Value = serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("{source}: {e}")))?;
    Ok(Loaded {
        value,
        digest: InputDigest::of(source, &bytes),
    })
}

/// A document piped in as a report stands for its artifact.
fn unwrap_report(v: Value) -> Result<Value> {
    if !Report::looks_like(&v) {
        return Ok(v);
    }
    v.get("artifact")
        .cloned()
        .ok_or_else(|| Error::InvalidInput("the piped report has no artifact".into()))
}

/// `--from` / `--to`: inline JSON, else a file.
fn inline_or_file(arg: &str) -> Result<(Value, Option<InputDigest>)> {
    if let Ok(v) = serde_json::from_str::<Value>(arg) {
        return Ok((v, None));
    }
    let bytes = std::fs::read(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
    let v = serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
    Ok((unwrap_report(v)?, Some(InputDigest::of(arg, &bytes))))
}

fn elapsed_ms(start: Instant, no_timing: bool) -> Option<u64> {
    (!no_timing).then(|| start.elapsed().as_millis() as u64)
}

fn error_report(command: &str, g: &Global, backend: &str, inputs: Vec<InputDigest>, e: &Error) -> Report {
    Report {
        command: command.into(),
        backend: backend.into(),
        seed: g.seed,
        tolerance: None,
        inputs,
        status: Status::Error,
        detail: Some(run::error_detail(e).into()),
        message: Some(e.to_string()),
        verdicts: Default::default(),
        subject: None,
        artifact: None,
        timing_ms: None,
    }
}

fn backend_name(numeric: bool) -> &'static str {
    if numeric {
        "numeric"
    } else {
        "exact"
    }
}

/// Runs a parsed command line; stdin is passed in so tests can supply it.
pub fn execute(cli: Cli, stdin: &mut dyn Read) -> Report {
    let start = Instant::now();
    let g = cli.global;
    match cli.command.plan() {
        Plan::Fixture(name) => fixture_report(&g, name.as_deref()),
        Plan::Verify(input) => verify_report(&g, &input, stdin, start),
        Plan::Task(task, input, extras) => task_report(&g, task, input, extras, stdin, start),
    }
}

fn fixture_report(g: &Global, name: Option<&str>) -> Report {
    let mut r = Report {
        command: "fixture".into(),
        backend: "exact".into(),
        seed: g.seed,
        tolerance: None,
        inputs: vec![],
        status: Status::Ok,
        detail: None,
        message: None,
        verdicts: Default::default(),
        subject: None,
        artifact: None,
        timing_ms: None,
    };
    let Some(name) = name else {
        let list: Vec<Value> = fixtures::FIXTURES
            .iter()
            .map(|f| json!({ "name": f.name, "description": f.description }))
            .collect();
        r.verdicts.insert("fixtures".into(), Value::Array(list));
        return r;
    };
    let Some(f) = fixtures::find(name) else {
        let e = Error::InvalidInput(format!(
            "no fixture named `{name}`; run `opalg fixture` for the list"
        ));
        return error_report("fixture", g, "exact", vec![], &e);
    };
    let doc: Value = serde_json::from_str(f.bundled).expect("bundled fixtures are valid JSON");
    r.inputs.push(InputDigest::of(
        format!("fixture:{}", f.name),
        f.bundled.as_bytes(),
    ));
    r.verdicts.insert("name".into(), json!(f.name));
    r.verdicts.insert("description".into(), json!(f.description));
    r.artifact = Some(doc);
    r
}

fn task_report(
    g: &Global,
    mut task: Task,
    input: Option<Input>,
    extras: Extras,
    stdin: &mut dyn Read,
    start: Instant,
) -> Report {
    let command = task.name();
    let mut inputs = Vec::new();
    let guess = match g.backend {
        Backend::Numeric => "numeric",
        _ => "exact",
    };
    let prepared = (|| -> Result<(Option<Value>, bool, ToleranceConfig)> {
        let tol = tolerance_from(&g.tolerance, ToleranceConfig::default())?;
        let mut floats = false;
        let doc = match &input {
            Some(i) if task.needs_input() => {
                let l = load(i.input.as_ref(), stdin)?;
                inputs.push(l.digest);
                let v = unwrap_report(l.value)?;
                floats |= has_float(&v);
                Some(v)
            }
            _ => None,
        };
        match &mut task {
            Task::Idempotent { lambda } => *lambda = extras.lambda.clone().unwrap_or_default(),
            Task::FamilyPreorder { basis } => {
                if let Some(p) = &extras.basis {
                    let l = load(Some(p), stdin)?;
                    inputs.push(l.digest);
                    let v = unwrap_report(l.value)?;
                    floats |= has_float(&v);
                    *basis = Some(v);
                }
            }
            Task::ChannelsTransition { from, to, .. } => {
                for (slot, arg) in [(from, &extras.from), (to, &extras.to)] {
                    let (v, digest) = inline_or_file(arg.as_deref().unwrap_or("null"))?;
                    inputs.extend(digest);
                    floats |= has_float(&v);
                    *slot = v;
                }
            }
            _ => {}
        }
        let numeric = match g.backend {
            Backend::Exact => false,
            Backend::Numeric => true,
            Backend::Auto => floats,
        };
        Ok((doc, numeric, tol))
    })();
    let (doc, numeric, tol) = match prepared {
        Ok(p) => p,
        Err(e) => return error_report(command, g, guess, inputs, &e),
    };
    let ctx = Ctx {
        seed: g.seed,
        budget: g.budget,
    };
    let result = if numeric {
        with_tolerance(tol, || run::execute::<Cplx>(&task, doc.as_ref(), ctx))
    } else {
        run::execute::<GaussRat>(&task, doc.as_ref(), ctx)
    };
    let backend = backend_name(numeric);
    match result {
        Ok(Outcome {
            status,
            detail,
            verdicts,
            artifact,
        }) => Report {
            command: command.into(),
            backend: backend.into(),
            seed: g.seed,
            tolerance: numeric.then(|| serde_json::to_value(tol).expect("tolerance serializes")),
            inputs,
            status,
            detail,
            message: None,
            verdicts,
            subject: doc,
            artifact,
            timing_ms: elapsed_ms(start, g.no_timing),
        },
        Err(e) => {
            let mut r = error_report(command, g, backend, inputs, &e);
            r.subject = doc;
            r.timing_ms = elapsed_ms(start, g.no_timing);
            r
        }
    }
}

fn verify_report(g: &Global, input: &Input, stdin: &mut dyn Read, start: Instant) -> Report {
    let mut inputs = Vec::new();
    let checked = (|| -> Result<(Report, verify::Findings)> {
        let l = load(input.input.as_ref(), stdin)?;
        inputs.push(l.digest);
        let target: Report =
            serde_json::from_value(l.value).map_err(|e| Error::Parse(format!("not a report: {e}")))?;
        let base = match &target.tolerance {
            Some(t) => serde_json::from_value(t.clone()).map_err(|e| Error::Parse(e.to_string()))?,
            None => ToleranceConfig::default(),
        };
        let tol = tolerance_from(&g.tolerance, base)?;
        let findings = match target.backend.as_str() {
            "exact" => verify::verify::<GaussRat>(&target),
            "numeric" => with_tolerance(tol, || verify::verify::<Cplx>(&target)),
            other => Err(Error::Parse(format!("unknown backend `{other}`"))),
        }?;
        Ok((target, findings))
    })();
    match checked {
        Ok((target, findings)) => {
            let mut verdicts = serde_json::Map::new();
            verdicts.insert("command".into(), json!(target.command));
            verdicts.insert("claimed_status".into(), json!(target.status));
            verdicts.insert("checks".into(), Value::Object(findings.checks.clone()));
            Report {
                command: "verify".into(),
                backend: target.backend.clone(),
                seed: g.seed,
                tolerance: target.tolerance.clone(),
                inputs,
                status: findings.status(),
                detail: None,
                message: None,
                verdicts,
                subject: None,
                artifact: None,
                timing_ms: elapsed_ms(start, g.no_timing),
            }
        }
        Err(e) => error_report("verify", g, "exact", inputs, &e),
    }
}
