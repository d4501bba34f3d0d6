//! The `cfworld` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cfworld_core::axioms::{
    check_formulas, find_countermodel, schema_instances, Bounds, ClassDescriptor, ClassName, Countermodel, Schema,
    SearchOutcome, Verdict, Witness, DEFAULT_CAP,
};
use cfworld_core::bridge::{
    causal_to_structure, fresh_name, lprop_corpus, structure_to_causal, structure_to_causal_per_world, Corpus,
};
use cfworld_core::causal::eval_causal;
use cfworld_core::formula::{classify, parse, parse_assignment, ParseError};
use cfworld_core::model::Recursion;
use cfworld_core::proof::{check_proof, ProofOutcome};
use cfworld_core::{Assignment, Formula, Signature, Value, Variable};

use crate::format::{self, FormatError};
use crate::report::Recorder;
use crate::suite::{self, tuple, Fixtures};

/// Exit code for a passing run.
pub const PASS: i32 = 0;
/// Exit code when the verdict is negative.
pub const VERDICT_FALSE: i32 = 1;
/// Exit code for usage, input and parse errors.
pub const USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cfworld", version, about = "Causal models, counterfactual structures and the axioms relating them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArg {
    /// Write a JSON run report here.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Structure,
    Model,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Targeted,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every solution of a model at a context, after an optional intervention.
    Solve {
        #[arg(long)]
        model: PathBuf,
        /// Context, e.g. "U=0".
        #[arg(long, default_value = "")]
        context: String,
        /// Intervention, e.g. "X1<-1; X2<-0".
        #[arg(long, default_value = "")]
        set: String,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Evaluate a formula in a model at a context, or in a structure at a world.
    Eval {
        #[arg(long, conflicts_with = "structure", required_unless_present = "structure")]
        model: Option<PathBuf>,
        #[arg(long, requires = "world")]
        structure: Option<PathBuf>,
        #[arg(long, default_value = "")]
        context: String,
        #[arg(long)]
        world: Option<String>,
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Report the class of a model, a structure or a formula.
    Classify {
        #[arg(long, group = "what")]
        model: Option<PathBuf>,
        #[arg(long, group = "what")]
        structure: Option<PathBuf>,
        #[arg(long, group = "what")]
        formula: Option<String>,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Translate a recursive model into a structure, or a recursive structure and world into a model.
    Translate {
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// World the model is built from (with --to model).
        #[arg(long)]
        world: Option<String>,
        /// Size of the exogenous variable's range (with --to model).
        #[arg(long, default_value_t = 2)]
        contexts: usize,
        /// One model for the whole structure, a context per world (with --to model).
        #[arg(long, conflicts_with = "world")]
        per_world: bool,
        /// Check agreement on every depth-1 Lprop formula.
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Check a schema or formulas against a class of models or structures.
    Axcheck {
        #[arg(long, required_unless_present = "formula")]
        schema: Option<String>,
        /// Formulas to check instead of a schema (repeatable).
        #[arg(long, conflicts_with = "schema")]
        formula: Vec<String>,
        /// Trec, Tun, T, M, M+, Ma, Ma+, Mf, Mf+ or Mrec.
        #[arg(long)]
        class: String,
        /// Number of binary endogenous variables.
        #[arg(long, default_value_t = 2)]
        vars: usize,
        /// Range size of the single exogenous variable.
        #[arg(long, default_value_t = 2)]
        exo: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        /// Samples drawn in random mode.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long, required_if_eq("mode", "random"))]
        seed: Option<u64>,
        /// Depth of formulas substituted for formula metavariables.
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Atoms those formulas are built from.
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        /// World limit for classes that are not full.
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        /// Largest number of models or structures enumerated.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// Where to write a countermodel, if one is found.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Check a proof script.
    Prove {
        #[arg(long)]
        script: PathBuf,
        /// Disable schemas of the script's base (repeatable).
        #[arg(long)]
        without: Vec<String>,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Run every golden reproduction and print a pass/fail matrix.
    PaperSuite {
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Only claims whose id contains this text.
        #[arg(long)]
        only: Option<String>,
        #[command(flatten)]
        report: ReportArg,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error("{path}: {err}")]
    Format { path: String, err: FormatError },
    #[error("{what}: {err}")]
    Parse { what: String, err: ParseError },
    #[error("{0}")]
    Failed(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

struct Run {
    rec: Recorder,
    out: Vec<String>,
}

impl Run {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        self.rec.read(path).map_err(|err| CliError::Io { path: path.display().to_string(), err })
    }

    fn load<T>(&mut self, path: &Path, parse: fn(&str) -> Result<T, FormatError>) -> Result<T, CliError> {
        let text = self.read(path)?;
        parse(&text).map_err(|err| CliError::Format { path: path.display().to_string(), err })
    }

    fn say(&mut self, line: impl Into<String>) {
        self.out.push(line.into());
    }

    fn write(&mut self, path: &Path, text: &str) -> Result<(), CliError> {
        std::fs::write(path, text).map_err(|err| CliError::Io { path: path.display().to_string(), err })
    }
}

fn formula(what: &str, text: &str) -> Result<Formula, CliError> {
    parse(text).map_err(|err| CliError::Parse { what: what.into(), err })
}

fn assignment(what: &str, text: &str) -> Result<Assignment, CliError> {
    let pairs = parse_assignment(text).map_err(|err| CliError::Parse { what: what.into(), err })?;
    Ok(pairs.into_iter().collect())
}

fn intervention(text: &str) -> Result<Assignment, CliError> {
    let pairs =
        format::bindings("--set", text).map_err(|err| CliError::Format { path: "--set".into(), err })?;
    let mut a = Assignment::new();
    for (v, x) in pairs {
        if a.insert(v.clone(), x).is_some() {
            return Err(usage(format!("--set binds `{v}` twice")));
        }
    }
    Ok(a)
}

/// Parses argv, runs the subcommand, prints its output and returns the
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { USAGE } else { PASS };
        }
    };
    let shown: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(cli.command, shown) {
        Ok((lines, code)) => {
            for l in lines {
                println!("{l}");
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            USAGE
        }
    }
}

fn name_of(c: &Command) -> &'static str {
    match c {
        Command::Solve { .. } => "solve",
        Command::Eval { .. } => "eval",
        Command::Classify { .. } => "classify",
        Command::Translate { .. } => "translate",
        Command::Axcheck { .. } => "axcheck",
        Command::Prove { .. } => "prove",
        Command::PaperSuite { .. } => "paper-suite",
    }
}

fn report_path(c: &Command) -> Option<PathBuf> {
    match c {
        Command::Solve { report, .. }
        | Command::Eval { report, .. }
        | Command::Classify { report, .. }
        | Command::Translate { report, .. }
        | Command::Axcheck { report, .. }
        | Command::Prove { report, .. }
        | Command::PaperSuite { report, .. } => report.report.clone(),
    }
}

struct Outcome {
    verdict: String,
    passed: bool,
    details: serde_json::Value,
}

fn dispatch(cmd: Command, args: Vec<String>) -> Result<(Vec<String>, i32), CliError> {
    let report = report_path(&cmd);
    let mut run = Run { rec: Recorder::new(name_of(&cmd), args), out: Vec::new() };
    let outcome = match cmd {
        Command::Solve { model, context, set, .. } => solve(&mut run, &model, &context, &set)?,
        Command::Eval { model, structure, context, world, formula, .. } => {
            eval(&mut run, model.as_deref(), structure.as_deref(), &context, world.as_deref(), &formula)?
        }
        Command::Classify { model, structure, formula, .. } => {
            classify_cmd(&mut run, model.as_deref(), structure.as_deref(), formula.as_deref())?
        }
        Command::Translate { to, input, out, world, contexts, per_world, certify, .. } => {
            translate(&mut run, to, &input, &out, world.as_deref(), contexts, per_world, certify)?
        }
        Command::Axcheck {
            schema, formula, class, vars, exo, mode, budget, seed, depth, atoms, max_worlds, cap, witness, ..
        } => {
            run.rec.report.seed = seed;
            let q = Query { schema, formulas: formula, class, vars, exo, mode, budget, seed, depth, atoms, max_worlds, cap };
            axcheck(&mut run, &q, witness)?
        }
        Command::Prove { script, without, .. } => prove(&mut run, &script, &without)?,
        Command::PaperSuite { fixtures, only, .. } => paper_suite(&mut run, fixtures, only.as_deref())?,
    };
    let code = if outcome.passed { PASS } else { VERDICT_FALSE };
    let Run { mut rec, out } = run;
    rec.report.details = outcome.details;
    let rep = rec.finish(outcome.verdict, outcome.passed);
    if let Some(p) = report {
        rep.write(&p).map_err(|err| CliError::Io { path: p.display().to_string(), err })?;
    }
    Ok((out, code))
}

fn solve(run: &mut Run, model: &Path, context: &str, set: &str) -> Result<Outcome, CliError> {
    let t = run.load(model, format::read_model)?;
    let ctx = assignment("--context", context)?;
    let i = intervention(set)?;
    let sols = t.intervene(&i).map_err(failed)?.solutions(&ctx).map_err(failed)?;
    let shown: Vec<String> = sols.iter().map(|s| tuple(t.signature(), s)).collect();
    if shown.is_empty() {
        run.say("no solutions");
    }
    for s in &shown {
        run.say(s.clone());
    }
    Ok(Outcome {
        verdict: format!("{} solution(s)", shown.len()),
        passed: true,
        details: json!({ "context": ctx.to_string(), "intervention": set, "solutions": shown }),
    })
}

fn eval(
    run: &mut Run,
    model: Option<&Path>,
    structure: Option<&Path>,
    context: &str,
    world: Option<&str>,
    text: &str,
) -> Result<Outcome, CliError> {
    let f = formula("--formula", text)?;
    let value = match (model, structure) {
        (Some(p), _) => {
            let t = run.load(p, format::read_model)?;
            let ctx = assignment("--context", context)?;
            eval_causal(&t, &ctx, &f).map_err(failed)?
        }
        (None, Some(p)) => {
            let m = run.load(p, format::read_structure)?;
            let w = world.ok_or_else(|| usage("--structure needs --world"))?;
            m.eval_at(w, &f).map_err(failed)?
        }
        (None, None) => return Err(usage("give --model or --structure")),
    };
    run.say(value.to_string());
    Ok(Outcome { verdict: value.to_string(), passed: value, details: json!({ "formula": f.to_string() }) })
}

fn classify_cmd(
    run: &mut Run,
    model: Option<&Path>,
    structure: Option<&Path>,
    text: Option<&str>,
) -> Result<Outcome, CliError> {
    let details = if let Some(p) = model {
        let t = run.load(p, format::read_model)?;
        let class = t.class();
        run.say(format!("class: {class}"));
        let (order, cycle) = match t.recursion() {
            Recursion::Acyclic(o) => {
                run.say(format!("recursive: order {}", o.join(", ")));
                (Some(o), None)
            }
            Recursion::Cyclic(c) => {
                run.say(format!("not recursive: cycle {} -> {}", c.join(" -> "), c[0]));
                (None, Some(c))
            }
        };
        let tun = t.tun_violation();
        match &tun {
            None => run.say("unique solutions: every intervention, every context"),
            Some(v) => run.say(format!(
                "not in Tun: {} solution(s) under [{}] at {}",
                v.solutions, v.intervention, v.context
            )),
        }
        json!({
            "class": class.label(), "order": order, "cycle": cycle,
            "tun_violation": tun.map(|v| json!({
                "intervention": v.intervention.to_string(), "context": v.context.to_string(), "solutions": v.solutions
            })),
        })
    } else if let Some(p) = structure {
        let m = run.load(p, format::read_structure)?;
        let c = m.classify();
        for (name, flag) in [("acceptable", c.acceptable), ("full", c.full), ("total", c.total), ("recursive", c.recursive)] {
            run.say(format!("{name}: {flag}"));
        }
        if let Some(o) = &c.global_order {
            run.say(format!("global order: {}", o.join(", ")));
        }
        json!({
            "acceptable": c.acceptable, "full": c.full, "total": c.total,
            "recursive": c.recursive, "global_order": c.global_order,
        })
    } else if let Some(text) = text {
        let f = formula("--formula", text)?;
        let class = classify(&f);
        run.say(class.label());
        json!({ "formula": f.to_string(), "language": class.label() })
    } else {
        return Err(usage("give --model, --structure or --formula"));
    };
    Ok(Outcome { verdict: "classified".into(), passed: true, details })
}

#[allow(clippy::too_many_arguments)]
fn translate(
    run: &mut Run,
    to: Target,
    input: &Path,
    out: &Path,
    world: Option<&str>,
    contexts: usize,
    per_world: bool,
    certify: bool,
) -> Result<Outcome, CliError> {
    let (t, m, pairing) = match to {
        Target::Structure => {
            let t = run.load(input, format::read_model)?;
            let (m, naming) = causal_to_structure(&t).map_err(failed)?;
            run.write(out, &format::write_structure(&m))?;
            let pairing = naming.pairing();
            for (u, w) in &pairing {
                run.say(format!("{u} -> {}", m.ids()[*w]));
            }
            (t, m, pairing)
        }
        Target::Model => {
            let m = run.load(input, format::read_structure)?;
            let (t, pairing) = if per_world {
                let t = structure_to_causal_per_world(&m).map_err(failed)?;
                let exo = t.signature().exogenous()[0].name.clone();
                let pairing: Vec<_> =
                    (0..m.world_count()).map(|w| (Assignment::new().with(exo.clone(), w as Value), w)).collect();
                (t, pairing)
            } else {
                let id = world.ok_or_else(|| usage("--to model needs --world or --per-world"))?;
                let w = m.world(id).ok_or_else(|| usage(format!("no world `{id}`")))?;
                if contexts == 0 {
                    return Err(usage("--contexts must be positive"));
                }
                let exo = Variable::new(fresh_name(&m), (0..contexts as Value).collect::<Vec<_>>());
                let t = structure_to_causal(&m, w, vec![exo]).map_err(failed)?;
                let pairing: Vec<_> = t.signature().contexts().into_iter().map(|c| (c, w)).collect();
                (t, pairing)
            };
            run.write(out, &format::write_model(&t))?;
            (t, m, pairing)
        }
    };
    run.rec.witness(out.to_path_buf());
    let mut details = json!({ "out": out.display().to_string() });
    if !certify {
        run.say(format!("wrote {}", out.display()));
        return Ok(Outcome { verdict: "translated".into(), passed: true, details });
    }
    let corpus = Corpus::new(lprop_corpus(t.signature(), 1), t.signature()).map_err(failed)?;
    let r = corpus.certify(&t, &m, &pairing).map_err(failed)?;
    details["checked"] = json!(r.checked);
    match &r.disagreement {
        None => {
            run.say(format!("certified: {} evaluations agree", r.checked));
            Ok(Outcome { verdict: "certified".into(), passed: true, details })
        }
        Some(d) => {
            let msg = format!(
                "disagreement on {} at {} / world {}: model {}, structure {}",
                d.formula, d.context, d.world, d.causal, d.structure
            );
            run.say(msg.clone());
            details["disagreement"] = json!(msg);
            Ok(Outcome { verdict: "disagreement".into(), passed: false, details })
        }
    }
}

struct Query {
    schema: Option<String>,
    formulas: Vec<String>,
    class: String,
    vars: usize,
    exo: usize,
    mode: Mode,
    budget: u64,
    seed: Option<u64>,
    depth: usize,
    atoms: usize,
    max_worlds: usize,
    cap: u64,
}

fn write_witness(run: &mut Run, c: &Countermodel, path: Option<PathBuf>) -> Result<serde_json::Value, CliError> {
    let (text, at) = match &c.witness {
        Witness::Causal { model, context } => (format::write_model(model), json!({ "context": context.to_string() })),
        Witness::Structure { structure, world } => (format::write_structure(structure), json!({ "world": world })),
    };
    let mut out = json!({ "formula": c.formula.to_string(), "at": at });
    if let Some(p) = path {
        run.write(&p, &text)?;
        run.rec.witness(p.clone());
        out["file"] = json!(p.display().to_string());
    }
    Ok(out)
}

fn axcheck(run: &mut Run, q: &Query, witness_file: Option<PathBuf>) -> Result<Outcome, CliError> {
    let class = ClassName::from_label(&q.class).ok_or_else(|| usage(format!("unknown class `{}`", q.class)))?;
    if q.exo == 0 {
        return Err(usage("--exo must be positive"));
    }
    let mut cd = ClassDescriptor::binary(class, q.vars)
        .with_signature(Signature::binary(q.vars, q.exo))
        .with_max_worlds(q.max_worlds)
        .with_cap(q.cap);
    if q.mode == Mode::Targeted {
        cd = cd.targeted();
    }
    let bounds = Bounds { depth: q.depth, atoms: q.atoms, cap: q.cap };
    let (what, formulas) = match &q.schema {
        Some(s) => {
            let schema = Schema::from_name(s).ok_or_else(|| usage(format!("unknown schema `{s}`")))?;
            (schema.name().to_string(), schema_instances(schema, &cd, &bounds).map_err(failed)?)
        }
        None => {
            let fs = q.formulas.iter().map(|t| formula("--formula", t)).collect::<Result<Vec<_>, _>>()?;
            (format!("{} formula(s)", fs.len()), fs)
        }
    };
    let mut details = json!({
        "checked_against": what, "class": class.label(), "mode": format!("{:?}", q.mode).to_lowercase(),
        "vars": q.vars, "exo": q.exo, "instances": formulas.len(),
        "bounds": { "depth": q.depth, "atoms": q.atoms, "max_worlds": q.max_worlds, "cap": q.cap },
    });
    let found = match q.mode {
        Mode::Random => {
            let seed = q.seed.ok_or_else(|| usage("--mode random needs --seed"))?;
            details["budget"] = json!(q.budget);
            match find_countermodel(&formulas, &cd, q.budget, seed).map_err(failed)? {
                SearchOutcome::Found { countermodel, trial } => {
                    details["trial"] = json!(trial);
                    Some(countermodel)
                }
                SearchOutcome::NotFound { trials } => {
                    run.say(format!("not found: {what} over {} in {trials} random samples (seed {seed})", class.label()));
                    None
                }
            }
        }
        Mode::Exhaustive | Mode::Targeted => match check_formulas(&formulas, &cd).map_err(failed)? {
            Verdict::ValidAtBound { checked, points } => {
                details["checked"] = json!(checked);
                details["points"] = json!(points);
                run.say(format!("valid at bound: {what} over {} ({checked} checked, {points} points)", class.label()));
                None
            }
            Verdict::Countermodel(c) => Some(c),
        },
    };
    match found {
        None => {
            let verdict = if q.mode == Mode::Random { "not-found" } else { "valid-at-bound" };
            Ok(Outcome { verdict: verdict.into(), passed: true, details })
        }
        Some(c) => {
            let w = write_witness(run, &c, witness_file)?;
            let place = match &c.witness {
                Witness::Causal { context, .. } => format!("context {context}"),
                Witness::Structure { world, .. } => format!("world {world}"),
            };
            run.say(format!("countermodel: {} fails at {place}", c.formula));
            if let Some(f) = w.get("file").and_then(|f| f.as_str()) {
                run.say(format!("witness written to {f}"));
            }
            details["countermodel"] = w;
            Ok(Outcome { verdict: "countermodel".into(), passed: false, details })
        }
    }
}

fn prove(run: &mut Run, script: &Path, without: &[String]) -> Result<Outcome, CliError> {
    let (mut base, s) = run.load(script, format::read_proof)?;
    for name in without {
        let schema = Schema::from_name(name).ok_or_else(|| usage(format!("unknown schema `{name}`")))?;
        base = base.without(schema);
    }
    match check_proof(&base, &s) {
        ProofOutcome::Verified(c) => {
            run.say(format!("verified: {c}"));
            Ok(Outcome { verdict: "verified".into(), passed: true, details: json!({ "conclusion": c.to_string(), "lines": s.lines.len() }) })
        }
        ProofOutcome::FirstFailure { line, violation } => {
            run.say(format!("line {}: {violation}", line + 1));
            Ok(Outcome {
                verdict: "rejected".into(),
                passed: false,
                details: json!({ "line": line + 1, "violation": violation.to_string() }),
            })
        }
    }
}

fn paper_suite(run: &mut Run, dir: Option<PathBuf>, only: Option<&str>) -> Result<Outcome, CliError> {
    let dir = dir.unwrap_or_else(suite::default_fixture_dir);
    for name in [suite::TSTAR, suite::EXAMPLE_C5, suite::FOREST_FIRE, suite::LEMMA_A1, suite::NEG_PHI] {
        run.read(&dir.join(name))?;
    }
    let fx = Fixtures::load(&dir).map_err(|e| usage(e.to_string()))?;
    let results = suite::run(&fx, only);
    if results.is_empty() {
        return Err(usage(format!("no claim matches `{}`", only.unwrap_or(""))));
    }
    let width = results.iter().map(|r| r.id.len()).max().unwrap_or(0);
    for r in &results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        run.say(format!("{mark}  {:width$}  {}  [{}; {:.0} ms]", r.id, r.claim, r.detail, r.millis));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    run.say(format!("{} of {} claims reproduced", results.len() - failed, results.len()));
    Ok(Outcome {
        verdict: if failed == 0 { "all-pass".into() } else { format!("{failed} failed") },
        passed: failed == 0,
        details: json!({ "fixtures": dir.display().to_string(), "claims": results }),
    })
}
