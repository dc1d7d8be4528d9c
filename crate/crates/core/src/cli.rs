//! Command-line front end.
//!
//! Exit codes: 0 success (or `check` true), 1 usage or evaluation error
//! (or `check` false, or a failing corpus entry), 2 unreadable input,
//! 10 SAT, 20 UNSAT, 30 UNSAT within the search bound. `valid` reports the
//! outcome for the negated formula, so 20 means valid and 10 means a
//! counter-model was found.

use crate::formula::{formula_to_string, parse, Formula};
use crate::frames::{FrameClass, Model};
use crate::gadgets::{
    atm_modal_pair, brute_force_tiling, bundled_atm, bundled_machine, bundled_tileset, corpus, gen_atm_formula,
    gen_tiling_formula, gen_tiling_witness, gen_tm_formula, gen_tm_witness, gen_tree_formula, gen_tree_witness,
    parse_modal, AlternatingTM, TileSet, TuringMachine,
};
use crate::random::DEFAULT_SEED;
use crate::semantics::check;
use crate::solver::{auto, sat_bounded, sat_forks, SolveOptions, SolveResult, Status};
use crate::transform::{dagger, eliminate_contacts, eq_normalize, fp_translate, rcc8_to_c, Fresh};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_UNSAT_WITHIN_BOUND: i32 = 30;

/// Environment variable capping solver worker threads.
pub const THREADS_ENV: &str = "TOPOSAT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "toposat", version, about = "Decide, check and translate topological logics with connectedness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide satisfiability.
    Sat(SolveArgs),
    /// Decide validity by refuting the negation.
    Valid(SolveArgs),
    /// Model-check a formula in a model file.
    Check {
        /// Model file (JSON).
        model: PathBuf,
        #[command(flatten)]
        input: FormulaInput,
        /// Print the value of every atom.
        #[arg(long)]
        trace: bool,
    },
    /// Rewrite a formula into another language.
    Translate {
        #[command(flatten)]
        input: FormulaInput,
        #[arg(long, value_enum)]
        to: Target,
        /// Relativise contact elimination to a connected region.
        #[arg(long)]
        connected: bool,
    },
    /// Emit a formula family and optionally its witness model.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Run the example corpus.
    Corpus {
        /// Run only the named entries.
        #[arg(long = "only")]
        only: Vec<String>,
        /// List entries without running them.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        run: RunFlags,
    },
}

#[derive(Args, Debug)]
struct FormulaInput {
    /// Formula file; `-` reads standard input.
    file: Option<PathBuf>,
    /// Formula text given inline.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
}

#[derive(Args, Debug)]
struct RunFlags {
    /// Single worker thread and no timing output, for byte-identical runs.
    #[arg(long)]
    deterministic: bool,
    /// Seed for randomised checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    input: FormulaInput,
    #[arg(long = "frame", value_parser = parse_class, default_value = "regc")]
    frame: FrameClass,
    /// Largest frame size for bounded search.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    bound: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Wall-clock budget for bounded search, in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Write the certificate to this file instead of standard output.
    #[arg(long = "model-out")]
    model_out: Option<PathBuf>,
    #[command(flatten)]
    run: RunFlags,
}

#[derive(Subcommand, Debug)]
enum GenerateKind {
    /// Space-bounded deterministic machine.
    Tm(MachineArgs),
    /// Space-bounded alternating machine.
    Atm(MachineArgs),
    /// Bounded tiling problem.
    Tiling(SpecArgs),
    /// Binary-tree encoding of two modal formulas.
    Tree {
        #[arg(long)]
        chi: String,
        #[arg(long)]
        psi: String,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Specification file (JSON).
    spec: Option<PathBuf>,
    /// Use a bundled specification instead of a file.
    #[arg(long, conflicts_with = "spec")]
    bundled: Option<String>,
    /// Formula output file; standard output when absent.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Also write the witness model to this file.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MachineArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Input word, one character per symbol.
    #[arg(long, default_value = "")]
    input: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    Auto,
    Forks,
    Bounded,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    /// Contact form of RCC8 atoms.
    C,
    /// Modal embedding over arbitrary sets.
    Dagger,
    /// Temporal formula over fence cells.
    Fp,
    /// Contact-free equisatisfiable rewrite.
    Bc,
    /// Equations as `t = 0`.
    Eq,
}

fn parse_class(s: &str) -> Result<FrameClass, String> {
    s.parse::<FrameClass>().map_err(|e| e.to_string())
}

/// Error carrying its exit code and a stable machine-readable tag.
struct Failure {
    code: i32,
    tag: &'static str,
    message: String,
}

impl Failure {
    fn usage(tag: &'static str, message: impl ToString) -> Self {
        Failure { code: EXIT_FAIL, tag, message: message.to_string() }
    }
    fn parse(tag: &'static str, message: impl ToString) -> Self {
        Failure { code: EXIT_PARSE, tag, message: message.to_string() }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::usage("io", e))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))
}

fn read_formula(input: &FormulaInput) -> Result<Formula, Failure> {
    let text = match (&input.expr, &input.file) {
        (Some(e), _) => e.clone(),
        (None, Some(p)) => read_text(p)?,
        (None, None) => return Err(Failure::usage("usage", "give a formula file or --expr")),
    };
    parse(&text).map_err(|e| Failure::parse("parse_error", e))
}

fn threads(deterministic: bool) -> Result<Option<usize>, Failure> {
    if deterministic {
        return Ok(Some(1));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Failure::usage("usage", format!("{THREADS_ENV} must be a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

fn solve(args: &SolveArgs, f: &Formula) -> Result<SolveResult, Failure> {
    let options = SolveOptions {
        max_points: args.bound as usize,
        timeout: if args.run.deterministic { None } else { args.timeout.map(Duration::from_secs_f64) },
        threads: threads(args.run.deterministic)?,
    };
    let res = match args.method {
        MethodArg::Auto => auto(f, args.frame, &options),
        MethodArg::Forks if args.frame == FrameClass::Regc => sat_forks(f),
        MethodArg::Forks => return Err(Failure::usage("usage", "the fork procedure decides frame class regc only")),
        MethodArg::Bounded => sat_bounded(f, args.frame, &options),
    };
    res.map_err(|e| Failure::usage(e.code(), e))
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Sat => EXIT_SAT,
        Status::Unsat => EXIT_UNSAT,
        Status::UnsatWithinBound => EXIT_UNSAT_WITHIN_BOUND,
    }
}

fn report(args: &SolveArgs, res: &SolveResult, out: &mut dyn Write, err: &mut dyn Write, dual: bool) -> Result<i32, Failure> {
    let line = res.verdict_line();
    let line = if dual {
        let status = match res.status {
            Status::Sat => "INVALID",
            Status::Unsat => "VALID",
            Status::UnsatWithinBound => "VALID_WITHIN_BOUND",
        };
        format!("{status}{}", &line[line.find(' ').unwrap_or(line.len())..])
    } else {
        line
    };
    let _ = writeln!(out, "{line}");
    if let Some(m) = &res.certificate {
        match &args.model_out {
            Some(p) => write_file(p, &m.to_json())?,
            None => {
                let _ = writeln!(out, "{}", m.to_json());
            }
        }
    }
    if !args.run.deterministic {
        let _ = writeln!(err, "nodes={} time_ms={}", res.stats.nodes, res.stats.time.as_millis());
    }
    Ok(status_code(res.status))
}

fn cmd_check(model: &Path, input: &FormulaInput, trace: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let m = Model::from_json(&read_text(model)?).map_err(|e| Failure::parse(e.code(), e))?;
    let f = read_formula(input)?;
    let v = check(&m, &f, trace).map_err(|e| Failure::usage(e.code(), e))?;
    let _ = writeln!(out, "{}", v.truth);
    for r in v.trace.unwrap_or_default() {
        let _ = writeln!(out, "{}\t{}", r.truth, formula_to_string(&r.atom));
    }
    Ok(if v.truth { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_translate(input: &FormulaInput, to: Target, connected: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let f = read_formula(input)?;
    let fail = |e: crate::transform::TransformError| Failure::usage(e.code(), e);
    let text = match to {
        Target::C => formula_to_string(&rcc8_to_c(&f)),
        Target::Dagger => formula_to_string(&dagger(&f).map_err(fail)?),
        Target::Fp => fp_translate(&f).map_err(fail)?.to_string(),
        Target::Bc => {
            let mut fresh = Fresh::new(&f).map_err(fail)?;
            formula_to_string(&eliminate_contacts(&f, connected, &mut fresh).map_err(fail)?)
        }
        Target::Eq => formula_to_string(&eq_normalize(&f)),
    };
    let _ = writeln!(out, "{text}");
    Ok(EXIT_OK)
}

fn spec_text(spec: &SpecArgs, bundled: impl Fn(&str) -> Option<String>) -> Result<String, Failure> {
    match (&spec.bundled, &spec.spec) {
        (Some(name), _) => bundled(name).ok_or_else(|| Failure::usage("usage", format!("no bundled specification '{name}'"))),
        (None, Some(p)) => read_text(p),
        (None, None) => Err(Failure::usage("usage", "give a specification file or --bundled")),
    }
}

fn emit(out_path: &Option<PathBuf>, f: &Formula, out: &mut dyn Write) -> Result<(), Failure> {
    let text = formula_to_string(f);
    match out_path {
        Some(p) => write_file(p, &format!("{text}\n")),
        None => {
            let _ = writeln!(out, "{text}");
            Ok(())
        }
    }
}

fn word(s: &str) -> Vec<String> {
    s.chars().map(|c| c.to_string()).collect()
}

fn cmd_generate(kind: &GenerateKind, out: &mut dyn Write) -> Result<i32, Failure> {
    let gadget = |e: crate::gadgets::GadgetError| {
        let parse_like = matches!(
            e,
            crate::gadgets::GadgetError::Json(_)
                | crate::gadgets::GadgetError::MalformedModal(_)
                | crate::gadgets::GadgetError::MalformedMachine(_)
                | crate::gadgets::GadgetError::MalformedTileSet(_)
        );
        Failure { code: if parse_like { EXIT_PARSE } else { EXIT_FAIL }, tag: e.code(), message: e.to_string() }
    };
    match kind {
        GenerateKind::Tm(a) => {
            let m = TuringMachine::from_json(&spec_text(&a.spec, |n| bundled_machine(n).map(|m| m.to_json()))?)
                .map_err(gadget)?;
            let input = word(&a.input);
            emit(&a.spec.out, &gen_tm_formula(&m, &input).map_err(gadget)?, out)?;
            if let Some(p) = &a.spec.witness {
                let run = m
                    .accepting_run(&input)
                    .map_err(gadget)?
                    .ok_or_else(|| Failure::usage("no_witness", "the machine does not accept the input"))?;
                write_file(p, &gen_tm_witness(&m, &input, &run).map_err(gadget)?.to_json())?;
            }
        }
        GenerateKind::Atm(a) => {
            let m = AlternatingTM::from_json(&spec_text(&a.spec, |n| bundled_atm(n).map(|m| m.to_json()))?)
                .map_err(gadget)?;
            let input = word(&a.input);
            emit(&a.spec.out, &gen_atm_formula(&m, &input).map_err(gadget)?, out)?;
            if let Some(p) = &a.spec.witness {
                if m.accepts(&input).map_err(gadget)? {
                    return Err(Failure::usage("no_witness", "the machine accepts the input"));
                }
                let tree = m.computation_tree(&input).map_err(gadget)?;
                let (chi, psi) = atm_modal_pair(&m, &input).map_err(gadget)?;
                write_file(p, &gen_tree_witness(&tree, &chi, &psi).map_err(gadget)?.to_json())?;
            }
        }
        GenerateKind::Tiling(s) => {
            let ts = TileSet::from_json(&spec_text(s, |n| bundled_tileset(n).map(|t| t.to_json()))?).map_err(gadget)?;
            emit(&s.out, &gen_tiling_formula(&ts).map_err(gadget)?, out)?;
            if let Some(p) = &s.witness {
                let tiling = brute_force_tiling(&ts)
                    .map_err(gadget)?
                    .ok_or_else(|| Failure::usage("no_witness", "the tile set has no tiling"))?;
                write_file(p, &gen_tiling_witness(&ts, &tiling).map_err(gadget)?.to_json())?;
            }
        }
        GenerateKind::Tree { chi, psi, out: path } => {
            let chi = parse_modal(chi).map_err(gadget)?;
            let psi = parse_modal(psi).map_err(gadget)?;
            emit(path, &gen_tree_formula(&chi, &psi).map_err(gadget)?, out)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_corpus(only: &[String], list: bool, run: &RunFlags, out: &mut dyn Write) -> Result<i32, Failure> {
    let entries = corpus();
    if let Some(missing) = only.iter().find(|n| !entries.iter().any(|e| e.name == n.as_str())) {
        return Err(Failure::usage("usage", format!("no corpus entry '{missing}'")));
    }
    let threads = threads(run.deterministic)?;
    let mut failures = 0;
    for e in entries.iter().filter(|e| only.is_empty() || only.iter().any(|n| n == e.name)) {
        if list {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", e.name, e.frame_class, e.expected, formula_to_string(&e.formula));
            continue;
        }
        let outcome = e.run(threads, run.seed);
        failures += usize::from(!outcome.pass);
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{verdict}\t{}\t{}\texpected={}\tobserved={}", e.name, e.frame_class, e.expected, outcome.observed);
    }
    if !list {
        let _ = writeln!(out, "failures={failures}");
    }
    Ok(if failures == 0 { EXIT_OK } else { EXIT_FAIL })
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Sat(args) => {
            let f = read_formula(&args.input)?;
            let res = solve(&args, &f)?;
            report(&args, &res, out, err, false)
        }
        Command::Valid(args) => {
            let f = read_formula(&args.input)?;
            let res = solve(&args, &Formula::not(f))?;
            report(&args, &res, out, err, true)
        }
        Command::Check { model, input, trace } => cmd_check(&model, &input, trace, out),
        Command::Translate { input, to, connected } => cmd_translate(&input, to, connected, out),
        Command::Generate { kind } => cmd_generate(&kind, out),
        Command::Corpus { only, list, run } => cmd_corpus(&only, list, &run, out),
    }
}

/// Run the command line `args` (program name first) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_FAIL
                }
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error[{}]: {}", f.tag, f.message);
            f.code
        }
    }
}
