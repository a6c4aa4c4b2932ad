use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ltlf_synth::engine::{synthesize, synthesize_backward, EngineOptions, Status};
use ltlf_synth::sat::{min_model, SatResult};
use ltlf_synth::strategy::{read_strategy, strategy_dot, verify, write_strategy, Report};
use ltlf_synth::tdfa::{build_tdfa, DEFAULT_STATE_BUDGET};
use ltlf_synth::{FoldMode, Partition, SpecInstance, Store, SystemType};

#[derive(Parser)]
#[command(name = "ltlf-synth", version, about = "LTLf realizability, synthesis and satisfiability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide realizability of a specification and optionally emit a strategy.
    Synth(SynthArgs),
    /// Check satisfiability and print a shortest model.
    Sat(SatArgs),
    /// Print the explicit automaton of a formula in DOT.
    Translate(TranslateArgs),
    /// Check a strategy file against a specification.
    Verify(VerifyArgs),
    /// Run every instance of a directory and print a CSV table.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SpecArgs {
    /// File holding the LTLf formula.
    #[arg(long)]
    formula: PathBuf,
    /// Partition file with `.inputs:` and `.outputs:` lines.
    #[arg(long)]
    part: PathBuf,
}

fn flag_value() -> clap::builder::RangedI64ValueParser<u8> {
    clap::value_parser!(u8).range(0..=1)
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long = "type", default_value = "moore")]
    system_type: SystemType,
    /// Model-guided edge selection.
    #[arg(short = 'm', default_value_t = 1, value_parser = flag_value())]
    model_guided: u8,
    /// State entailment.
    #[arg(short = 'e', default_value_t = 1, value_parser = flag_value())]
    entailment: u8,
    /// Build the whole automaton and solve it backwards instead.
    #[arg(long)]
    backward: bool,
    /// Fold `p` and `!p` onto one canonical variable (default) or keep them apart.
    #[arg(long, default_value = "complementary", value_parser = parse_fold)]
    fold: FoldMode,
    #[arg(long)]
    strategy_out: Option<PathBuf>,
    /// DOT rendering of the strategy-restricted automaton.
    #[arg(long)]
    strategy_dot: Option<PathBuf>,
    /// JSON statistics.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Maximum number of explored states.
    #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
    budget: usize,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args)]
struct SatArgs {
    #[arg(long)]
    formula: PathBuf,
    /// Comma-separated propositions, fixing their order in the output.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct TranslateArgs {
    #[arg(long)]
    formula: PathBuf,
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    strategy: PathBuf,
    /// Defaults to the `type:` line of the strategy file.
    #[arg(long = "type")]
    system_type: Option<SystemType>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of paired `NAME.ltlf` / `NAME.part` files.
    #[arg(long)]
    dir: PathBuf,
    /// Per-run wall-clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    /// Run all four model-guided/entailment combinations.
    #[arg(long)]
    matrix: bool,
    #[arg(long = "type", default_value = "moore")]
    system_type: SystemType,
    #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
    budget: usize,
}

fn parse_fold(s: &str) -> Result<FoldMode, String> {
    match s {
        "complementary" => Ok(FoldMode::Complementary),
        "strict" => Ok(FoldMode::Strict),
        other => Err(format!("unknown folding mode `{other}` (complementary|strict)")),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn deadline(secs: Option<f64>) -> Result<Option<Instant>> {
    match secs {
        None => Ok(None),
        Some(s) if s.is_finite() && s >= 0.0 => Ok(Some(Instant::now() + Duration::from_secs_f64(s))),
        Some(s) => bail!("invalid timeout {s}"),
    }
}

fn load(args: &SpecArgs, fold: FoldMode, ty: SystemType) -> Result<(Store, SpecInstance)> {
    let formula = read(&args.formula)?;
    let part = Partition::parse(&read(&args.part)?)
        .with_context(|| format!("in partition file {}", args.part.display()))?;
    SpecInstance::load(fold, &formula, &part, ty).with_context(|| format!("in formula file {}", args.formula.display()))
}

/// Store over `vars` (in that order) followed by the formula's own
/// propositions; with explicit vars, other propositions are rejected.
fn formula_store(path: &Path, vars: &[String]) -> Result<(Store, ltlf_synth::Formula)> {
    let text = read(path)?;
    let mut store = Store::with_props(FoldMode::default(), vars)?;
    let f = if vars.is_empty() {
        store.parse(&text)
    } else {
        store.parse_declared(&text)
    }
    .with_context(|| format!("in formula file {}", path.display()))?;
    Ok((store, f))
}

fn synth(a: SynthArgs) -> Result<()> {
    let (mut store, spec) = load(&a.spec, a.fold, a.system_type)?;
    let opts = EngineOptions {
        model_guided: a.model_guided == 1,
        entailment: a.entailment == 1,
        budget: a.budget,
        deadline: deadline(a.timeout)?,
        strategies: a.strategy_out.is_some() || a.strategy_dot.is_some(),
    };
    let verdict = if a.backward {
        synthesize_backward(&mut store, &spec, &opts)?
    } else {
        synthesize(&mut store, &spec, &opts)?
    };
    println!("{}", verdict.status);
    if let Some(st) = &verdict.strategy {
        if let Some(path) = &a.strategy_out {
            fs::write(path, write_strategy(&mut store, &spec, st))
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        if let Some(path) = &a.strategy_dot {
            fs::write(path, strategy_dot(&mut store, &spec, st))
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
    } else if a.strategy_out.is_some() || a.strategy_dot.is_some() {
        eprintln!("no strategy written: the specification is unrealizable");
    }
    if let Some(path) = &a.stats {
        let json = serde_json::to_string_pretty(&verdict.stats)?;
        fs::write(path, json + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn sat(a: SatArgs) -> Result<()> {
    let (mut store, f) = formula_store(&a.formula, &a.vars)?;
    match min_model(&mut store, f, a.budget)? {
        SatResult::Sat(model) => {
            let vars: Vec<u32> = (0..store.num_props() as u32).collect();
            println!("SAT");
            println!("{}", model.render(&store.formulas, &vars));
        }
        SatResult::Unsat => println!("UNSAT"),
    }
    Ok(())
}

fn translate(a: TranslateArgs) -> Result<()> {
    let (mut store, f) = formula_store(&a.formula, &a.vars)?;
    let tdfa = build_tdfa(&mut store, f, a.budget)?;
    print!("{}", tdfa.export_dot(&store));
    eprintln!("{} states", tdfa.num_states());
    Ok(())
}

/// `type:` line of a strategy file, if any.
fn declared_type(text: &str) -> Option<SystemType> {
    text.lines()
        .find_map(|l| l.trim().strip_prefix("type:"))
        .and_then(|t| t.trim().parse().ok())
}

fn verify_cmd(a: VerifyArgs) -> Result<()> {
    let text = read(&a.strategy)?;
    let ty = a.system_type.or_else(|| declared_type(&text)).unwrap_or_default();
    let (mut store, spec) = load(&a.spec, FoldMode::default(), ty)?;
    let st = read_strategy(&mut store, &spec, &text)
        .with_context(|| format!("in strategy file {}", a.strategy.display()))?;
    match verify(&mut store, &spec, &st) {
        Report::Pass => println!("PASS"),
        Report::Fail(w) => {
            println!("FAIL");
            println!("{}", w.describe(&store));
        }
    }
    Ok(())
}

fn instances(dir: &Path) -> Result<Vec<(String, PathBuf, PathBuf)>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("cannot read {}", dir.display()))? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "ltlf") {
            let part = path.with_extension("part");
            if !part.exists() {
                bail!("{} has no matching .part file", path.display());
            }
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            out.push((name, path, part));
        }
    }
    out.sort();
    Ok(out)
}

fn bench(a: BenchArgs) -> Result<()> {
    let configs: Vec<(bool, bool)> = if a.matrix {
        vec![(false, false), (false, true), (true, false), (true, true)]
    } else {
        vec![(true, true)]
    };
    let mut out = csv::Writer::from_writer(std::io::stdout());
    out.write_record(["instance", "options", "status", "states_expanded", "sat_calls", "time_ms", "timeout"])?;
    let mut disagreements = Vec::new();
    for (name, formula, part) in instances(&a.dir)? {
        let spec_args = SpecArgs {
            formula,
            part,
        };
        let mut seen: Option<Status> = None;
        for &(m, e) in &configs {
            let (mut store, spec) = load(&spec_args, FoldMode::default(), a.system_type)?;
            let opts = EngineOptions {
                model_guided: m,
                entailment: e,
                budget: a.budget,
                deadline: deadline(Some(a.timeout))?,
                strategies: false,
            };
            let label = format!("-m {} -e {}", m as u8, e as u8);
            let started = Instant::now();
            let row = match synthesize(&mut store, &spec, &opts) {
                Ok(v) => {
                    if seen.is_some_and(|s| s != v.status) {
                        disagreements.push(name.clone());
                    }
                    seen = Some(v.status);
                    [
                        v.status.to_string(),
                        v.stats.states_expanded.to_string(),
                        v.stats.sat_calls.to_string(),
                        v.stats.time_ms.to_string(),
                        "false".into(),
                    ]
                }
                Err(err) if err.is_resource_limit() => {
                    let timeout = err == ltlf_synth::Error::Timeout;
                    if !timeout {
                        eprintln!("{name} {label}: {err}");
                    }
                    [
                        String::new(),
                        String::new(),
                        String::new(),
                        started.elapsed().as_millis().to_string(),
                        timeout.to_string(),
                    ]
                }
                Err(err) => return Err(err).with_context(|| format!("instance {name}")),
            };
            let mut record = vec![name.clone(), label];
            record.extend(row);
            out.write_record(&record)?;
        }
        out.flush()?;
    }
    out.flush()?;
    if !disagreements.is_empty() {
        bail!("option settings disagree on: {}", disagreements.join(", "));
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let limit = err
        .chain()
        .filter_map(|e| e.downcast_ref::<ltlf_synth::Error>())
        .any(ltlf_synth::Error::is_resource_limit);
    if limit {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Sat(a) => sat(a),
        Command::Translate(a) => translate(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => {
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
