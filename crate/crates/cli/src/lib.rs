//! Command-line driver: `solve`, `validate`, `score` and `bench`.
//!
//! Exit codes: 0 success or feasible result, 1 input error, 2 budget
//! exhausted without a feasible schedule, 3 validation failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ttp_core::neighborhood::{MoveKind, ProposalWeights};
use ttp_core::schedule::team_distances;
use ttp_core::{
    is_double_round_robin, parse_instance, parse_schedule_any, render_schedule, run_anneal, violations, write_solution,
    AnnealParams, IntInstance, Progress,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

pub const DEFAULT_STEPS: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "ttp", version, about = "Traveling Tournament Problem solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Anneal from a random schedule and write the best one found.
    Solve(SolveArgs),
    /// Check the double round-robin structure and count constraint violations.
    Validate { instance: PathBuf, schedule: PathBuf },
    /// Print per-team travel distances and the total.
    Score { instance: PathBuf, schedule: PathBuf },
    /// Run every instance in a directory once per seed.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Proposals per chain.
    #[arg(long)]
    pub steps: Option<u64>,
    #[arg(long)]
    pub chains: Option<usize>,
    /// Flat key=value file mirroring the annealing parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    /// Tabular schedule path; the signed matrix goes beside it with a `.sol` extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Stop once a feasible schedule at or below this distance is found.
    #[arg(long)]
    pub target: Option<f64>,
    /// Report progress on stderr every N proposals.
    #[arg(long)]
    pub progress: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Machine)]
    pub format: Format,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of instance files (`*.txt`) or a single instance file.
    pub dir: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub seeds: Vec<u64>,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Summary line only.
    Machine,
    /// Rendered schedule and per-move statistics before the summary line.
    Human,
}

/// Error carrying its exit status.
#[derive(Debug)]
struct Fail(i32, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(EXIT_INPUT, e.into())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out, err),
        Command::Validate { instance, schedule } => cmd_validate(&instance, &schedule, out),
        Command::Score { instance, schedule } => cmd_score(&instance, &schedule, out),
        Command::Bench(a) => cmd_bench(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(Fail(code, e)) => {
            let _ = writeln!(err, "error: {e:#}");
            code
        }
    }
}

pub fn load_instance(path: &Path) -> Result<IntInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_instance(&text).with_context(|| path.display().to_string())
}

fn load_schedule(path: &Path, inst: &IntInstance) -> Result<ttp_core::Schedule> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_schedule_any(&text, inst).with_context(|| path.display().to_string())
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| anyhow!("line {line}: invalid value {value:?} for {key}"))
}

/// Applies a key=value config file to `params`. Returns whether `beta` was set.
pub fn apply_config(params: &mut AnnealParams, text: &str) -> Result<bool> {
    let mut beta_set = false;
    let mut weights = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| anyhow!("line {line}: expected key=value"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "t0" => params.t0 = parse_value(key, value, line)?,
            "beta" => {
                params.beta = parse_value(key, value, line)?;
                beta_set = true;
            }
            "steps" => params.steps = parse_value(key, value, line)?,
            "w" => params.w = parse_value(key, value, line)?,
            "p_look" => params.p_look = parse_value(key, value, line)?,
            "p_exit" => params.p_exit = parse_value(key, value, line)?,
            "seed" => params.seed = parse_value(key, value, line)?,
            "chains" => params.chains = parse_value(key, value, line)?,
            "target" => params.target = Some(parse_value(key, value, line)?),
            "progress_stride" => params.progress_stride = parse_value(key, value, line)?,
            "weights" => {
                let parts: Vec<f64> = value
                    .split(',')
                    .map(|x| parse_value(key, x.trim(), line))
                    .collect::<Result<_>>()?;
                let arr: [f64; 7] = parts
                    .try_into()
                    .map_err(|_| anyhow!("line {line}: weights needs 7 comma-separated values"))?;
                weights = Some((line, arr));
            }
            _ => match key.strip_prefix("weight.").and_then(MoveKind::from_name) {
                Some(kind) => {
                    let (_, arr) = weights.get_or_insert((line, params.weights.as_array()));
                    arr[kind.index()] = parse_value(key, value, line)?;
                }
                None => bail!("line {line}: unknown key {key:?}"),
            },
        }
    }
    if let Some((line, arr)) = weights {
        params.weights = ProposalWeights::new(arr).map_err(|e| anyhow!("line {line}: {e}"))?;
    }
    Ok(beta_set)
}

/// Defaults for `inst`, then the config file, then flags.
pub fn build_params(
    inst: &IntInstance,
    ov: &Overrides,
    seed: Option<u64>,
    target: Option<f64>,
) -> Result<AnnealParams> {
    let mut params = AnnealParams::for_instance(inst, DEFAULT_STEPS);
    let mut beta_set = false;
    if let Some(path) = &ov.config {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        beta_set = apply_config(&mut params, &text).with_context(|| path.display().to_string())?;
    }
    if let Some(steps) = ov.steps {
        params.steps = steps;
    }
    if let Some(chains) = ov.chains {
        params.chains = chains;
    }
    if let Some(seed) = seed {
        params.seed = seed;
    }
    if target.is_some() {
        params.target = target;
    }
    if !beta_set {
        params.beta = AnnealParams::beta_for(params.steps, ttp_core::annealer::DEFAULT_COOLING_SPAN);
    }
    params.validate()?;
    Ok(params)
}

/// Tabular and signed-matrix output paths: `--out F` gives F and F with a
/// `.sol` extension; the default is `<instance stem>.sched` beside the instance.
pub fn output_paths(instance: &Path, out: Option<&Path>) -> (PathBuf, PathBuf) {
    let human = match out {
        Some(p) if p.extension().is_some_and(|e| e == "sol") => p.with_extension("sched"),
        Some(p) => p.to_path_buf(),
        None => instance.with_extension("sched"),
    };
    let sol = human.with_extension("sol");
    (human, sol)
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Fail> {
    let inst = load_instance(&a.instance)?;
    let mut params = build_params(&inst, &a.overrides, a.seed, a.target)?;
    if let Some(stride) = a.progress {
        params.progress_stride = stride;
    }
    let report = |p: &Progress| {
        let best = p.best_distance.map_or("-".to_string(), |d| d.to_string());
        eprintln!(
            "chain={} step={} temp={:.4} cost={:.1} best={best}",
            p.chain, p.step, p.temperature, p.cost
        );
    };
    let observer: Option<&dyn ttp_core::Observer> = if params.progress_stride > 0 {
        Some(&report)
    } else {
        None
    };
    let res = run_anneal(&inst, &params, observer)?;

    let (txt, sol) = output_paths(&a.instance, a.out.as_deref());
    let rendered = render_schedule(&res.best, &inst);
    fs::write(&txt, &rendered).with_context(|| format!("cannot write {}", txt.display()))?;
    fs::write(&sol, write_solution(&res.best)).with_context(|| format!("cannot write {}", sol.display()))?;

    if a.format == Format::Human {
        writeln!(out, "{rendered}")?;
        for kind in MoveKind::ALL {
            let s = res.stats(kind);
            writeln!(
                out,
                "{:<22} proposed={} accepted={}",
                kind.name(),
                s.proposed,
                s.accepted
            )?;
        }
        let v = violations(&res.best);
        writeln!(out, "atmost={} norepeat={} chain={}", v.atmost, v.norepeat, res.chain)?;
        writeln!(out, "wrote {} and {}", txt.display(), sol.display())?;
    }
    writeln!(
        out,
        "distance={} feasible={} proposals={}",
        res.best_distance, res.best_feasible, res.proposals
    )?;
    if !res.best_feasible {
        let _ = writeln!(err, "no feasible schedule found within the budget");
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(EXIT_OK)
}

fn cmd_validate(instance: &Path, schedule: &Path, out: &mut dyn Write) -> Result<i32, Fail> {
    let inst = load_instance(instance)?;
    let s = load_schedule(schedule, &inst)?;
    let drr = is_double_round_robin(&s);
    let v = violations(&s);
    writeln!(out, "drr={drr} atmost={} norepeat={}", v.atmost, v.norepeat)?;
    Ok(if drr && v.is_feasible() { EXIT_OK } else { EXIT_INVALID })
}

fn cmd_score(instance: &Path, schedule: &Path, out: &mut dyn Write) -> Result<i32, Fail> {
    let inst = load_instance(instance)?;
    let s = load_schedule(schedule, &inst)?;
    let per = team_distances(&s, &inst);
    let total: i64 = per.iter().sum();
    let cells: Vec<String> = per.iter().map(i64::to_string).collect();
    writeln!(out, "{} total={total}", cells.join(" "))?;
    Ok(EXIT_OK)
}

/// Instance files for `bench`: `*.txt` in a directory, sorted, or the path itself.
pub fn bench_inputs(path: &Path) -> Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files = Vec::new();
    for entry in fs::read_dir(path).with_context(|| format!("cannot read {}", path.display()))? {
        let p = entry?.path();
        if p.is_file() && p.extension().is_some_and(|e| e == "txt") {
            files.push(p);
        }
    }
    files.sort();
    if files.is_empty() {
        bail!("no *.txt instance files in {}", path.display());
    }
    Ok(files)
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32, Fail> {
    let files = bench_inputs(&a.dir)?;
    // Every instance must parse before any run starts.
    let instances: Vec<(String, IntInstance)> = files
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            load_instance(p).map(|inst| (name, inst))
        })
        .collect::<Result<_>>()?;

    // A malformed config file is an input error, not a per-run failure.
    if let (Some(path), Some((_, inst))) = (&a.overrides.config, instances.first()) {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        apply_config(&mut AnnealParams::for_instance(inst, DEFAULT_STEPS), &text)
            .with_context(|| path.display().to_string())?;
    }

    writeln!(out, "instance seed distance feasible seconds status")?;
    for (name, inst) in &instances {
        for &seed in &a.seeds {
            let start = Instant::now();
            let outcome = build_params(inst, &a.overrides, Some(seed), None).and_then(|p| {
                catch_unwind(AssertUnwindSafe(|| run_anneal(inst, &p, None)))
                    .map_err(|_| anyhow!("run panicked"))?
                    .map_err(anyhow::Error::from)
            });
            let secs = start.elapsed().as_secs_f64();
            match outcome {
                Ok(res) => writeln!(
                    out,
                    "{name} {seed} {} {} {secs:.3} ok",
                    res.best_distance, res.best_feasible
                )?,
                Err(e) => {
                    let msg: String = format!("{e:#}").split_whitespace().collect::<Vec<_>>().join("_");
                    writeln!(out, "{name} {seed} - false {secs:.3} error:{msg}")?
                }
            }
        }
    }
    Ok(EXIT_OK)
}
