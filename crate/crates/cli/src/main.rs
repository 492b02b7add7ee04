//! `qarrow`: check, run, normalize, prove and emit quantum arrow programs.
//!
//! Exit codes: 0 success, 1 parse/type/input error, 2 the sides are not
//! equal, 3 fuel ran out or equality is unknown, 64 bad usage.

mod ket;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qarrow_core::{
    load, parse_program, parse_term, run, translate_term, Basis, CheckedProgram, DensVal, Error, Evaluator, Expr,
    MatrixJson, ProofTrace, Rewriter, Term, TypeExpr, Verdict, VecVal,
};
use serde_json::{json, Value as Json};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "qarrow", version, about = "Quantum arrow calculus: check, run, normalize, prove, emit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Do not load the standard prelude.
    #[arg(long, global = true)]
    no_prelude: bool,
    /// Numerical tolerance for semantic comparisons.
    #[arg(long, global = true, default_value_t = qarrow_core::DEFAULT_TOL)]
    tol: f64,
    /// Maximum number of rewrite steps.
    #[arg(long, global = true, default_value_t = 10_000)]
    fuel: usize,
    /// Output format. `run` defaults to json, everything else to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "format")]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EmitMode {
    /// The classic-arrow combinator tree.
    Classic,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse and typecheck a file, listing each definition's type.
    Check { file: PathBuf },
    /// Evaluate a definition; arrows are applied to `--input`.
    Run {
        file: PathBuf,
        #[arg(long)]
        def: String,
        /// A ket such as "(|0> + |1>)/sqrt2", a JSON density, or @file.json.
        #[arg(long)]
        input: Option<String>,
    },
    /// Normalize a definition (or a term) and print the rewrite trace.
    Normalize {
        file: PathBuf,
        #[arg(long, required_unless_present = "term", conflicts_with = "term")]
        def: Option<String>,
        #[arg(long)]
        term: Option<String>,
    },
    /// Prove two definitions (or terms) equal.
    Prove {
        file: PathBuf,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Print the combinator translation of arrow definitions.
    Emit {
        file: PathBuf,
        /// Only this definition; by default every arrow in the file.
        #[arg(long)]
        def: Option<String>,
        #[arg(long, value_enum, default_value = "classic")]
        emit: EmitMode,
    },
}

/// Validated settings shared by every subcommand.
#[derive(Debug)]
struct CliConfig {
    command: Cmd,
    prelude: bool,
    tol: f64,
    fuel: usize,
    format: Format,
}

impl CliConfig {
    fn from_cli(cli: Cli) -> Result<Self, CliError> {
        if !(cli.tol > 0.0 && cli.tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", cli.tol)));
        }
        if cli.fuel == 0 {
            return Err(CliError::Usage("--fuel must be positive".into()));
        }
        let default = if matches!(cli.command, Cmd::Run { .. }) { Format::Json } else { Format::Text };
        let format = if cli.json { Format::Json } else { cli.format.unwrap_or(default) };
        Ok(CliConfig { command: cli.command, prelude: !cli.no_prelude, tol: cli.tol, fuel: cli.fuel, format })
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Input(_) => 1,
        }
    }
}

/// What a successful run printed, and how it ended.
struct Report {
    stdout: String,
    code: u8,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report { stdout, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = CliConfig::from_cli(cli).and_then(|cfg| execute(&cfg));
    match result {
        Ok(report) => {
            print!("{}", report.stdout);
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("qarrow: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn execute(cfg: &CliConfig) -> Result<Report, CliError> {
    match &cfg.command {
        Cmd::Check { file } => check(cfg, file),
        Cmd::Run { file, def, input } => run_def(cfg, file, def, input.as_deref()),
        Cmd::Normalize { file, def, term } => normalize(cfg, file, def.as_deref(), term.as_deref()),
        Cmd::Prove { file, lhs, rhs } => prove(cfg, file, lhs, rhs),
        Cmd::Emit { file, def, emit: EmitMode::Classic } => emit(cfg, file, def.as_deref()),
    }
}

// ---- loading ----

struct Loaded {
    program: CheckedProgram,
    /// Names defined in the file itself, in order.
    own: Vec<String>,
}

fn read(file: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(file).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))
}

fn diagnostic(file: &Path, e: &Error) -> String {
    let name = file.display().to_string();
    match e {
        Error::Parse(p) => format!("{name}:{}: parse error: {p}", p.pos),
        Error::Type(t) => t.render(&name),
        other => format!("{name}: {other}"),
    }
}

fn load_file(cfg: &CliConfig, file: &Path) -> Result<Loaded, CliError> {
    let source = read(file)?;
    let program = load(&source, cfg.prelude).map_err(|e| CliError::Input(diagnostic(file, &e)))?;
    let own = parse_program(&source)
        .map_err(|e| CliError::Input(diagnostic(file, &e.into())))?
        .defs
        .into_iter()
        .map(|d| d.name)
        .collect();
    Ok(Loaded { program, own })
}

fn lookup<'a>(loaded: &'a Loaded, name: &str) -> Result<&'a qarrow_core::typechecker::CheckedDef, CliError> {
    loaded.program.get(name).ok_or_else(|| CliError::Input(format!("no definition named `{name}`")))
}

/// A definition's body, or the argument parsed as a term.
fn name_or_term(loaded: &Loaded, s: &str) -> Result<Term, CliError> {
    match loaded.program.get(s) {
        Some(d) => Ok(d.def.body.clone()),
        None => parse_term(s).map_err(|e| CliError::Input(format!("`{s}` is neither a definition nor a term: {e}"))),
    }
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

// ---- check ----

fn check(cfg: &CliConfig, file: &Path) -> Result<Report, CliError> {
    let loaded = load_file(cfg, file)?;
    let defs: Vec<(String, String)> = loaded
        .own
        .iter()
        .map(|n| (n.clone(), loaded.program.get(n).expect("checked").ty.to_string()))
        .collect();
    let out = match cfg.format {
        Format::Text => defs.iter().fold(String::new(), |mut s, (n, t)| {
            let _ = writeln!(s, "{n} : {t}");
            s
        }),
        Format::Json => to_json(&json!({
            "file": file.display().to_string(),
            "definitions": defs.iter().map(|(n, t)| json!({"name": n, "type": t})).collect::<Vec<_>>(),
        })),
    };
    Ok(Report::ok(out))
}

// ---- run ----

fn parse_input(arg: &str, basis: &Basis) -> Result<DensVal, CliError> {
    let bad = |m: String| CliError::Input(format!("--input: {m}"));
    let arg = arg.trim();
    let json_text = if let Some(path) = arg.strip_prefix('@') {
        Some(read(Path::new(path))?)
    } else if arg.starts_with('{') {
        Some(arg.to_string())
    } else {
        None
    };
    let density = match json_text {
        Some(text) => {
            let m: MatrixJson = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
            DensVal::from_json(&m).map_err(|e| bad(e.to_string()))?
        }
        None => {
            let k = ket::parse(arg).map_err(|e| bad(e.to_string()))?;
            if 1usize << k.bits != basis.dim() {
                return Err(bad(format!("a {}-qubit ket does not fit {}", k.bits, basis.ty())));
            }
            DensVal::pure(&VecVal::from_amps(basis, k.amps))
        }
    };
    if density.basis.dim() != basis.dim() {
        return Err(bad(format!("density over {} does not fit {}", density.basis.ty(), basis.ty())));
    }
    // same dimension, so the flattened indices coincide
    Ok(DensVal::from_matrix(basis, density.mat))
}

fn run_def(cfg: &CliConfig, file: &Path, name: &str, input: Option<&str>) -> Result<Report, CliError> {
    let loaded = load_file(cfg, file)?;
    let def = lookup(&loaded, name)?;
    let ev = Evaluator::new(&loaded.program).map_err(|e| CliError::Input(e.to_string()))?;
    match def.ty.normalize() {
        TypeExpr::Super(a, _) => {
            let input = input.ok_or_else(|| CliError::Usage(format!("`{name}` is an arrow; pass --input")))?;
            let basis = Basis::new(&a).map_err(|e| CliError::Input(e.to_string()))?;
            let rho = parse_input(input, &basis)?;
            let s = ev.super_named(name).map_err(|e| CliError::Input(e.to_string()))?;
            let out = run(&s, &rho).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(Report::ok(match cfg.format {
                Format::Json => to_json(&out.to_json()),
                Format::Text => format!("{}\n", out.render()),
            }))
        }
        ty => {
            if input.is_some() {
                return Err(CliError::Usage(format!("`{name}` has type {ty}, which takes no --input")));
            }
            let v = ev.get(name).ok_or_else(|| CliError::Input(format!("`{name}` has no value")))?;
            Ok(Report::ok(match cfg.format {
                Format::Json => to_json(&json!({"name": name, "type": ty.to_string(), "value": v.to_string()})),
                Format::Text => format!("{v}\n"),
            }))
        }
    }
}

// ---- normalize ----

fn normalize(cfg: &CliConfig, file: &Path, def: Option<&str>, term: Option<&str>) -> Result<Report, CliError> {
    let loaded = load_file(cfg, file)?;
    let t = match (def, term) {
        (Some(d), _) => lookup(&loaded, d)?.def.body.clone(),
        (None, Some(src)) => parse_term(src).map_err(|e| CliError::Input(format!("--term: {e}")))?,
        (None, None) => unreachable!("clap requires one"),
    };
    let trace = Rewriter::new(&loaded.program).normalize(&Expr::Term(t), cfg.fuel);
    let stdout = match cfg.format {
        Format::Text => trace.render(),
        Format::Json => to_json(&trace.to_json()),
    };
    Ok(Report { stdout, code: if trace.exhausted { 3 } else { 0 } })
}

// ---- prove ----

fn verdict_json(v: &Verdict) -> Json {
    match v {
        Verdict::ProvedByNormalization { .. } => json!({"result": "equal", "by": "normalization"}),
        Verdict::ProvedSemantically { tolerance, difference } => {
            json!({"result": "equal", "by": "semantics", "tolerance": tolerance, "difference": difference})
        }
        Verdict::NotEqual(w) => json!({
            "result": "not-equal",
            "input": w.input.as_ref().map(|d| serde_json::to_value(d.to_json()).expect("serializable")),
            "argument": w.argument,
            "lhs": w.lhs,
            "rhs": w.rhs,
            "difference": w.difference,
        }),
        Verdict::Unknown(why) => json!({"result": "unknown", "reason": why}),
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::ProvedByNormalization { .. } => "equal: the normal forms coincide\n".into(),
        Verdict::ProvedSemantically { tolerance, difference } => {
            format!("equal: denotations agree within {tolerance:e} (largest difference {difference:.3e})\n")
        }
        Verdict::NotEqual(w) => {
            let mut s = format!("not equal: largest difference {:.6}\n", w.difference);
            if let Some(d) = &w.input {
                let _ = writeln!(s, "on input density\n{}", d.render());
            }
            if let Some(a) = &w.argument {
                let _ = writeln!(s, "on argument {a}");
            }
            let _ = write!(s, "lhs gives\n{}\nrhs gives\n{}\n", w.lhs, w.rhs);
            s
        }
        Verdict::Unknown(why) => format!("unknown: {why}\n"),
    }
}

fn prove(cfg: &CliConfig, file: &Path, lhs: &str, rhs: &str) -> Result<Report, CliError> {
    let loaded = load_file(cfg, file)?;
    let (a, b) = (name_or_term(&loaded, lhs)?, name_or_term(&loaded, rhs)?);
    let rw = Rewriter::new(&loaded.program);
    let verdict = rw.prove_equal(&a, &b, cfg.fuel, cfg.tol).map_err(|e| CliError::Input(e.to_string()))?;
    let (ta, tb): (ProofTrace, ProofTrace) = match &verdict {
        Verdict::ProvedByNormalization { lhs, rhs } => (lhs.clone(), rhs.clone()),
        _ => (rw.normalize(&Expr::Term(a), cfg.fuel), rw.normalize(&Expr::Term(b), cfg.fuel)),
    };
    let code = match verdict {
        Verdict::ProvedByNormalization { .. } | Verdict::ProvedSemantically { .. } => 0,
        Verdict::NotEqual(_) => 2,
        Verdict::Unknown(_) => 3,
    };
    let stdout = match cfg.format {
        Format::Text => {
            let mut s = ta.render();
            if !tb.steps.is_empty() || ta.end != tb.start {
                let _ = write!(s, "\n{}", tb.render());
            }
            s.push('\n');
            s.push_str(&verdict_text(&verdict));
            s
        }
        Format::Json => to_json(&json!({
            "lhs": ta.to_json(),
            "rhs": tb.to_json(),
            "verdict": verdict_json(&verdict),
        })),
    };
    Ok(Report { stdout, code })
}

// ---- emit ----

fn emit(cfg: &CliConfig, file: &Path, def: Option<&str>) -> Result<Report, CliError> {
    let loaded = load_file(cfg, file)?;
    let names: Vec<String> = match def {
        Some(d) => vec![d.to_string()],
        None => loaded
            .own
            .iter()
            .filter(|n| matches!(loaded.program.get(n).map(|d| d.ty.normalize()), Some(TypeExpr::Super(..))))
            .cloned()
            .collect(),
    };
    let mut emitted = Vec::new();
    for name in &names {
        let d = lookup(&loaded, name)?;
        let expr = translate_term(&d.typed).map_err(|e| CliError::Input(format!("`{name}`: {e}")))?;
        emitted.push((name.clone(), expr.emit()));
    }
    let stdout = match cfg.format {
        Format::Text if def.is_some() => format!("{}\n", emitted[0].1.trim_end()),
        Format::Text => emitted.iter().fold(String::new(), |mut s, (n, e)| {
            let _ = writeln!(s, ";; {n}\n{}", e.trim_end());
            s
        }),
        Format::Json => to_json(&emitted.iter().map(|(n, e)| json!({"name": n, "classic": e})).collect::<Vec<_>>()),
    };
    Ok(Report::ok(stdout))
}
