use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use clap::{Args, Parser, Subcommand};
use genacc_core::cancel::Presentation;
use genacc_core::chains::{
    build_chain, build_chain_from, experiment_chain, free_chain_from, free_group_chain_baseline,
    sample_q_presentations, AccOptions, ChainReport, Outcome, Strategy,
};
use genacc_core::generic::{
    aggregate, check_lmk_condition, sample_density, sample_few_relator, sample_outcome,
    validate_params, ClauseVerdict, Clauses, EstimateOptions, GenericityParams, GenericityStats,
    LengthMode, LmkVerdict, DEFAULT_DENSITY_CAP, DEFAULT_NODE_CAP,
};
use genacc_core::minimize::{
    find_long_relator_overlap, membership, minimize, MinimizeOptions, MinimizeStep, SubgroupRep,
};
use genacc_core::rng::stream;
use genacc_core::Rational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::{read_file, write_file, CliError, EXIT_USAGE};
use crate::formats::*;

#[derive(Parser, Debug)]
#[command(
    name = "genacc",
    version,
    about = "Subgroup and genericity experiments for small-cancellation presentations"
)]
pub struct Cli {
    /// TOML file with default option values.
    #[arg(long, global = true)]
    pub config: Option<String>,
    /// Worker threads for sampling commands.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Suppress progress on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a random presentation.
    Sample(SampleArgs),
    /// Check parameter inequalities and the (λ,μ,k)-condition.
    Check(CheckArgs),
    /// Minimize the graph of a finitely generated subgroup.
    Minimize(MinimizeArgs),
    /// Decide membership in a minimized subgroup.
    Member(MemberArgs),
    /// Build one ascending chain of subgroups.
    Chain(ChainArgs),
    /// Run chains on many sampled presentations.
    Experiment(ExperimentArgs),
    /// Estimate how often sampled presentations pass the condition.
    Genericity(GenericityArgs),
}

#[derive(Args, Debug, Default)]
pub struct ParamArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// `few` or `density`.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Density, as `p/q` or a decimal.
    #[arg(long)]
    pub d: Option<String>,
    /// `exact` or `at-most`.
    #[arg(long)]
    pub mode: Option<String>,
    /// Largest relator count the density model may produce.
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, short)]
    pub presentation: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub node_cap: Option<u64>,
    /// `text` or `json`.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, short)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct MinimizeArgs {
    #[arg(long, short)]
    pub presentation: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Generator word; repeatable.
    #[arg(long = "gen")]
    pub gens: Vec<String>,
    /// Skip the (λ,μ,k)-condition check.
    #[arg(long)]
    pub skip_condition_check: bool,
    #[arg(long)]
    pub node_cap: Option<u64>,
    #[arg(long, short)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct MemberArgs {
    /// Subgroup file written by `minimize`.
    #[arg(long)]
    pub rep: Option<String>,
    #[arg(long)]
    pub word: Option<String>,
    /// `text` or `json`.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[arg(long, short)]
    pub presentation: Option<String>,
    /// Run in the free group of rank `--m` instead.
    #[arg(long)]
    pub free: bool,
    #[command(flatten)]
    pub params: ParamArgs,
    /// `replace`, `absorb`, `root` or `all`.
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Starting generator; repeatable. Random when absent.
    #[arg(long = "gen")]
    pub gens: Vec<String>,
    #[arg(long, short)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Relator length.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub presentations: Option<usize>,
    /// Chains per presentation.
    #[arg(long)]
    pub chains: Option<usize>,
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub strategy: Option<String>,
    /// Samples drawn per requested presentation before giving up.
    #[arg(long)]
    pub attempts: Option<u64>,
    #[arg(long)]
    pub node_cap: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: Option<String>,
    /// Summary CSV path.
    #[arg(long)]
    pub csv: Option<String>,
    /// Directory for counterexample-candidate dumps.
    #[arg(long)]
    pub dump: Option<String>,
}

#[derive(Args, Debug)]
pub struct GenericityArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Clauses to evaluate, e.g. `2` or `1,2,3`; repeatable.
    #[arg(long = "clause")]
    pub clauses: Vec<String>,
    /// Comma-separated relator lengths.
    #[arg(long)]
    pub lengths: Option<String>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// `exact` or `at-most`.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub node_cap: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `csv` or `json`.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, short)]
    pub out: Option<String>,
}

struct Ctx<'a> {
    cfg: Config,
    out: &'a mut dyn Write,
    workers: Option<usize>,
    quiet: bool,
}

impl Ctx<'_> {
    /// Writes to `path`, or to stdout when absent.
    fn emit(&mut self, path: Option<&str>, text: &str) -> Result<(), CliError> {
        match path {
            Some(p) => write_file(p, text),
            None => self
                .out
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                }),
        }
    }

    fn pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
        match self.workers {
            None => Ok(f()),
            Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map(|p| p.install(f))
                .map_err(|e| CliError::Usage(e.to_string())),
        }
    }
}

/// Periodic progress on stderr, one line per tenth of the work.
struct Progress {
    label: String,
    total: u64,
    done: AtomicU64,
    enabled: bool,
}

impl Progress {
    fn new(label: String, total: u64, enabled: bool) -> Progress {
        Progress {
            label,
            total,
            done: AtomicU64::new(0),
            enabled,
        }
    }

    fn tick(&self) {
        let d = self.done.fetch_add(1, Ordering::Relaxed) + 1;
        if self.enabled && self.total > 0 && d * 10 / self.total > (d - 1) * 10 / self.total {
            eprintln!("{}: {d}/{}", self.label, self.total);
        }
    }
}

/// Parses arguments, runs the command and returns the exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = out.write_all(text.as_bytes());
                0
            } else {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            };
        }
    };
    let result = Config::load(cli.config.as_deref()).and_then(|cfg| {
        let mut ctx = Ctx {
            workers: cfg.pick(cli.workers, "global", "workers")?,
            quiet: cli.quiet || cfg.or(None, "global", "quiet", false)?,
            cfg,
            out,
        };
        match &cli.command {
            Command::Sample(a) => cmd_sample(a, &mut ctx),
            Command::Check(a) => cmd_check(a, &mut ctx),
            Command::Minimize(a) => cmd_minimize(a, &mut ctx),
            Command::Member(a) => cmd_member(a, &mut ctx),
            Command::Chain(a) => cmd_chain(a, &mut ctx),
            Command::Experiment(a) => cmd_experiment(a, &mut ctx),
            Command::Genericity(a) => cmd_genericity(a, &mut ctx),
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            e.exit_code()
        }
    }
}

fn rational(
    cfg: &Config,
    flag: &Option<String>,
    cmd: &str,
    key: &str,
    default: &str,
) -> Result<Rational, CliError> {
    let text = cfg.or(flag.clone(), cmd, key, default.to_string())?;
    parse_rational(&text).map_err(|e| CliError::Usage(format!("--{key}: {e}")))
}

fn params(
    cfg: &Config,
    a: &ParamArgs,
    cmd: &str,
    defaults: (&str, &str),
) -> Result<GenericityParams, CliError> {
    Ok(GenericityParams {
        m: cfg.or(a.m, cmd, "m", 2)?,
        t: cfg.or(a.t, cmd, "t", 1)?,
        k: cfg.or(a.k, cmd, "k", 2)?,
        lambda: rational(cfg, &a.lambda, cmd, "lambda", defaults.0)?,
        mu: rational(cfg, &a.mu, cmd, "mu", defaults.1)?,
        density: None,
    })
}

/// Defaults for λ and μ where a presentation is given.
const GROUP_DEFAULTS: (&str, &str) = ("1/6", "1/10");
/// Defaults satisfying the parameter inequalities.
const VALID_DEFAULTS: (&str, &str) = ("1/100", "1/2");

fn load_presentation(
    cfg: &Config,
    flag: &Option<String>,
    cmd: &str,
) -> Result<(String, Presentation), CliError> {
    let path: String = cfg.require(flag.clone(), cmd, "presentation")?;
    let p = parse_presentation(&read_file(&path)?, &path)?;
    Ok((path, p))
}

fn length_mode(s: &str) -> Result<LengthMode, CliError> {
    match s {
        "exact" => Ok(LengthMode::Exact),
        "at-most" => Ok(LengthMode::AtMost),
        _ => Err(CliError::Usage(format!(
            "--mode must be `exact` or `at-most`, got {s:?}"
        ))),
    }
}

fn strategy(cfg: &Config, flag: &Option<String>, cmd: &str) -> Result<Strategy, CliError> {
    let s = cfg.or(flag.clone(), cmd, "strategy", "all".to_string())?;
    Strategy::parse(&s).ok_or_else(|| CliError::Usage(format!("unknown strategy {s:?}")))
}

fn cmd_sample(a: &SampleArgs, ctx: &mut Ctx) -> Result<u8, CliError> {
    let c = &ctx.cfg;
    let cmd = "sample";
    let model = c.or(a.model.clone(), cmd, "model", "few".to_string())?;
    let m = c.or(a.m, cmd, "m", 2)?;
    let n: usize = c.require(a.n, cmd, "n")?;
    let seed: u64 = c.require(a.seed, cmd, "seed")?;
    let out = c.pick(a.out.clone(), cmd, "out")?;
    let mut rng = stream(seed, &[]);
    let (p, comment) = match model.as_str() {
        "few" => {
            let t = c.or(a.t, cmd, "t", 1)?;
            let mode_name = c.or(a.mode.clone(), cmd, "mode", "exact".to_string())?;
            let p = sample_few_relator(m, t, n, length_mode(&mode_name)?, &mut rng)?;
            (
                p,
                format!("model=few m={m} t={t} n={n} mode={mode_name} seed={seed}"),
            )
        }
        "density" => {
            let d_text: String = c.require(a.d.clone(), cmd, "d")?;
            let d = parse_rational(&d_text).map_err(|e| CliError::Usage(format!("--d: {e}")))?;
            let cap = c.or(a.cap, cmd, "cap", DEFAULT_DENSITY_CAP)?;
            let p = sample_density(m, d, n, cap, &mut rng)?;
            (p, format!("model=density m={m} d={d} n={n} seed={seed}"))
        }
        other => {
            return Err(CliError::Usage(format!(
                "--model must be `few` or `density`, got {other:?}"
            )))
        }
    };
    ctx.emit(out.as_deref(), &write_presentation(&p, Some(&comment)))?;
    Ok(0)
}

fn clause_json<W>(v: &ClauseVerdict<W>, witness: impl FnOnce(&W) -> Value) -> Value {
    match v {
        ClauseVerdict::Pass => json!({ "verdict": "pass" }),
        ClauseVerdict::Fail(w) => json!({ "verdict": "fail", "witness": witness(w) }),
        ClauseVerdict::Indeterminate => json!({ "verdict": "indeterminate" }),
        ClauseVerdict::Skipped => json!({ "verdict": "skipped" }),
    }
}

fn clause_name<W>(v: &ClauseVerdict<W>) -> &'static str {
    match v {
        ClauseVerdict::Pass => "pass",
        ClauseVerdict::Fail(_) => "fail",
        ClauseVerdict::Indeterminate => "indeterminate",
        ClauseVerdict::Skipped => "skipped",
    }
}

fn occurrence_json(o: &genacc_core::cancel::Occurrence) -> Value {
    json!({ "relator": o.relator, "inverse": o.inverse, "offset": o.offset })
}

fn verdict_json(v: &LmkVerdict) -> Result<Value, CliError> {
    let mut readable_graph = None;
    if let ClauseVerdict::Fail(w) = &v.readable {
        readable_graph = Some(graph_block(&w.certificate.graph)?);
    }
    Ok(json!({
        "proper_power": clause_json(&v.proper_power, |w| json!({
            "relator": w.relator, "root": format_word(&w.root), "exponent": w.exponent,
        })),
        "c_prime": clause_json(&v.c_prime, |w| json!({
            "relator": w.relator,
            "relator_len": w.relator_len,
            "piece": format_word(&w.witness.piece),
            "piece_len": w.witness.piece.len(),
            "first": occurrence_json(&w.witness.first),
            "second": occurrence_json(&w.witness.second),
        })),
        "readable": clause_json(&v.readable, |w| json!({
            "relator": w.relator,
            "subword": format_word(&w.subword),
            "edge_count": w.certificate.edge_count,
            "betti": w.certificate.betti,
            "graph": readable_graph,
        })),
    }))
}

fn cmd_check(a: &CheckArgs, ctx: &mut Ctx) -> Result<u8, CliError> {
    let cmd = "check";
    let (path, p) = load_presentation(&ctx.cfg, &a.presentation, cmd)?;
    let mut gp = params(&ctx.cfg, &a.params, cmd, GROUP_DEFAULTS)?;
    gp.m = p.rank();
    gp.t = p.relators().len();
    let node_cap = ctx.cfg.or(a.node_cap, cmd, "node_cap", DEFAULT_NODE_CAP)?;
    let format = ctx
        .cfg
        .or(a.format.clone(), cmd, "format", "text".to_string())?;
    let out = ctx.cfg.pick(a.out.clone(), cmd, "out")?;

    let report = validate_params(&gp);
    let (zero, one) = (Rational::from_integer(0), Rational::from_integer(1));
    let evaluable =
        gp.lambda > zero && gp.lambda <= Rational::new(1, 6) && gp.mu > zero && gp.mu < one;
    let verdict = if evaluable {
        Some(check_lmk_condition(&p, &gp, node_cap)?)
    } else {
        None
    };
    let failed = verdict.as_ref().is_some_and(|v| {
        matches!(v.proper_power, ClauseVerdict::Fail(_))
            || matches!(v.c_prime, ClauseVerdict::Fail(_))
            || matches!(v.readable, ClauseVerdict::Fail(_))
    });
    let (name, code) = if !report.valid() || !evaluable || failed {
        ("fail", 1)
    } else if verdict.as_ref().is_some_and(|v| v.indeterminate()) {
        ("indeterminate", 2)
    } else {
        ("pass", 0)
    };

    let text = match format.as_str() {
        "json" => to_json(&json!({
            "format": "check v1",
            "presentation": path,
            "m": p.rank(),
            "relators": relator_strings(&p),
            "params": ParamsJson::from_params(&gp),
            "parameter_checks": report.checks.iter().map(|(n, ok)| json!({ "check": n, "holds": ok })).collect::<Vec<_>>(),
            "parameters_valid": report.valid(),
            "condition": verdict.as_ref().map(verdict_json).transpose()?,
            "verdict": name,
        })),
        "text" => {
            let mut s = format!(
                "presentation {path}: m={}, t={}, max |r|={}\nparameters λ={} μ={} k={}\n",
                p.rank(),
                p.relators().len(),
                p.max_relator_len(),
                gp.lambda,
                gp.mu,
                gp.k
            );
            for (n, ok) in &report.checks {
                s.push_str(&format!("  [{}] {n}\n", if *ok { "ok" } else { "FAIL" }));
            }
            match &verdict {
                None => {
                    s.push_str("condition not evaluated: λ must lie in (0, 1/6] and μ in (0, 1)\n")
                }
                Some(v) => {
                    s.push_str(&format!(
                        "clause 1 (no proper powers): {}\n",
                        clause_name(&v.proper_power)
                    ));
                    if let ClauseVerdict::Fail(w) = &v.proper_power {
                        s.push_str(&format!(
                            "  relator {} = ({})^{}\n",
                            w.relator, w.root, w.exponent
                        ));
                    }
                    s.push_str(&format!(
                        "clause 2 (C'({})): {}\n",
                        gp.lambda,
                        clause_name(&v.c_prime)
                    ));
                    if let ClauseVerdict::Fail(w) = &v.c_prime {
                        s.push_str(&format!(
                            "  piece {} of length {} in relator {} of length {}\n",
                            format_word(&w.witness.piece),
                            w.witness.piece.len(),
                            w.relator,
                            w.relator_len
                        ));
                    }
                    s.push_str(&format!(
                        "clause 3 (no readable half-relators): {}\n",
                        clause_name(&v.readable)
                    ));
                    if let ClauseVerdict::Fail(w) = &v.readable {
                        s.push_str(&format!(
                            "  {} is read by a graph with {} edges and rank {}\n",
                            w.subword, w.certificate.edge_count, w.certificate.betti
                        ));
                    }
                }
            }
            s.push_str(&format!("verdict: {name}\n"));
            s
        }
        other => {
            return Err(CliError::Usage(format!(
                "--format must be `text` or `json`, got {other:?}"
            )))
        }
    };
    ctx.emit(out.as_deref(), &text)?;
    Ok(code)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SubgroupFile {
    pub format: String,
    pub presentation: Option<String>,
    pub m: usize,
    pub relators: Vec<String>,
    pub params: ParamsJson,
    pub generators: Vec<String>,
    pub minimal_certified: bool,
    pub has_low_degree_vertex: bool,
    pub edge_count: usize,
    pub betti: usize,
    pub graph: String,
    #[serde(default)]
    pub trace: Vec<Value>,
}

fn step_json(s: &MinimizeStep) -> Value {
    match s {
        MinimizeStep::Fold {
            trace,
            edges_before,
            edges_after,
        } => json!({
            "kind": "fold",
            "folds": trace.records.len(),
            "singular": trace.singular_count(),
            "edges_before": edges_before,
            "edges_after": edges_after,
        }),
        MinimizeStep::Prune {
            edges_before,
            edges_after,
        } => json!({
            "kind": "prune", "edges_before": edges_before, "edges_after": edges_after,
        }),
        MinimizeStep::AoMove(r) => json!({
            "kind": "ao-move",
            "path_label": format_word(&r.path_label),
            "removed": format_word(&r.removed),
            "added": format_word(&r.added),
            "x": r.x,
            "y": r.y,
            "singular": r.singular,
            "edge_delta": r.edge_delta,
            "betti_delta": r.betti_delta,
        }),
    }
}

fn cmd_minimize(a: &MinimizeArgs, ctx: &mut Ctx) -> Result<u8, CliError> {
    let cmd = "minimize";
    let (path, p) = load_presentation(&ctx.cfg, &a.presentation, cmd)?;
    let mut gp = params(&ctx.cfg, &a.params, cmd, GROUP_DEFAULTS)?;
    gp.m = p.rank();
    gp.t = p.relators().len();
    let gen_text: Vec<String> = if a.gens.is_empty() {
        let joined: Option<String> = ctx.cfg.get(cmd, "gens")?;
        joined
            .map(|s| s.split(',').map(str::to_string).collect())
            .unwrap_or_default()
    } else {
        a.gens.clone()
    };
    let gens = gen_text
        .iter()
        .map(|g| parse_word(g, p.rank()))
        .collect::<Result<Vec<_>, _>>()?;
    let opts = MinimizeOptions {
        skip_condition_check: a.skip_condition_check
            || ctx.cfg.or(None, cmd, "skip_condition_check", false)?,
        node_cap: ctx.cfg.or(a.node_cap, cmd, "node_cap", DEFAULT_NODE_CAP)?,
    };
    let out = ctx.cfg.pick(a.out.clone(), cmd, "out")?;
    let result = minimize(&p, &gp, &gens, opts)?;
    let g = &result.rep.graph;
    let file = SubgroupFile {
        format: "subgroup v1".into(),
        presentation: Some(path),
        m: p.rank(),
        relators: relator_strings(&p),
        params: ParamsJson::from_params(&gp),
        generators: gens.iter().map(format_word).collect(),
        minimal_certified: result.rep.minimal_certified,
        has_low_degree_vertex: result.rep.has_low_degree_vertex,
        edge_count: g.edge_count(),
        betti: g.betti(),
        graph: graph_block(g)?,
        trace: result.steps.iter().map(step_json).collect(),
    };
    ctx.emit(out.as_deref(), &to_json(&file))?;
    Ok(0)
}

/// Rebuilds a subgroup from its file, re-verifying the certificate.
pub fn load_subgroup(text: &str, path: &str) -> Result<SubgroupRep, CliError> {
    let file: SubgroupFile = serde_json::from_str(text)?;
    if file.format != "subgroup v1" {
        return Err(CliError::Usage(format!(
            "{path}: unsupported format {:?}",
            file.format
        )));
    }
    let presentation = presentation_from_strings(file.m, &file.relators)?;
    let params = file.params.to_params()?;
    let graph = parse_agraph(&file.graph, path)?;
    if graph.rank() != file.m {
        return Err(CliError::Usage(format!(
            "{path}: graph rank differs from presentation rank"
        )));
    }
    let certified = file.minimal_certified
        && find_long_relator_overlap(&graph, &presentation, params.lambda)?.is_none();
    let has_low_degree_vertex = graph.degrees().iter().any(|&d| d < 2 * file.m);
    Ok(SubgroupRep {
        presentation,
        params,
        graph,
        minimal_certified: certified,
        has_low_degree_vertex,
    })
}

fn cmd_member(a: &MemberArgs, ctx: &mut Ctx) -> Result<u8, CliError> {
    let cmd = "member";
    let path: String = ctx.cfg.require(a.rep.clone(), cmd, "rep")?;
    let word_text: String = ctx.cfg.require(a.word.clone(), cmd, "word")?;
    let format = ctx
        .cfg
        .or(a.format.clone(), cmd, "format", "text".to_string())?;
    let rep = load_subgroup(&read_file(&path)?, &path)?;
    let w = parse_word(&word_text, rep.presentation.rank())?;
    let member = membership(&rep, &w)?;
    let text = match format.as_str() {
        "text" => format!("{}\n", if member { "member" } else { "non-member" }),
        "json" => to_json(&json!({ "word": format_word(&w), "member": member })),
        other => {
            return Err(CliError::Usage(format!(
                "--format must be `text` or `json`, got {other:?}"
            )))
        }
    };
    ctx.emit(None, &text)?;
    Ok(if member { 0 } else { 1 })
}

fn outcome_code(o: &Outcome) -> u8 {
    match o {
        Outcome::Stabilized => 0,
        Outcome::BudgetExhausted => 1,
        Outcome::Indeterminate(_) => 2,
    }
}

fn cmd_chain(a: &ChainArgs, ctx: &mut Ctx) -> Result<u8, CliError> {
    let cmd = "chain";
    let c = &ctx.cfg;
    let strategy = strategy(c, &a.strategy, cmd)?;
    let budget = c.or(a.budget, cmd, "budget", 25)?;
    let seed: u64 = c.require(a.seed, cmd, "seed")?;
    let out = c.pick(a.out.clone(), cmd, "out")?;
    let free = a.free || c.or(None, cmd, "free", false)?;
    let (report, gp): (ChainReport, Option<GenericityParams>) = if free {
        let m = c.or(a.params.m, cmd, "m", 2)?;
        let k = c.or(a.params.k, cmd, "k", 2)?;
        let report = if a.gens.is_empty() {
            free_group_chain_baseline(m, k, strategy, budget, seed)?
        } else {
            let start = a
                .gens
                .iter()
                .map(|g| parse_word(g, m))
                .collect::<Result<Vec<_>, _>>()?;
            free_chain_from(m, k, start, strategy, budget, seed, &mut stream(seed, &[]))?
        };
        (report, None)
    } else {
        let (_, p) = load_presentation(c, &a.presentation, cmd)?;
        let mut gp = params(c, &a.params, cmd, GROUP_DEFAULTS)?;
        gp.m = p.rank();
        gp.t = p.relators().len();
        let report = if a.gens.is_empty() {
            build_chain(&p, &gp, strategy, budget, seed)?
        } else {
            let start = a
                .gens
                .iter()
                .map(|g| parse_word(g, p.rank()))
                .collect::<Result<Vec<_>, _>>()?;
            build_chain_from(
                &p,
                &gp,
                start,
                strategy,
                budget,
                seed,
                &mut stream(seed, &[]),
            )?
        };
        (report, Some(gp))
    };
    ctx.emit(
        out.as_deref(),
        &to_json(&ChainJson::from_report(&report, gp.as_ref())),
    )?;
    Ok(outcome_code(&report.outcome))
}

fn cmd_experiment(a: &ExperimentArgs, ctx: &mut Ctx) -> Result<u8, CliError> {
    let cmd = "experiment";
    let c = &ctx.cfg;
    let gp = params(c, &a.params, cmd, VALID_DEFAULTS)?;
    let opts = AccOptions {
        presentations: c.or(a.presentations, cmd, "presentations", 20)?,
        chains_per_presentation: c.or(a.chains, cmd, "chains", 5)?,
        relator_len: c.or(a.n, cmd, "n", 60)?,
        budget: c.or(a.budget, cmd, "budget", 25)?,
        strategy: strategy(c, &a.strategy, cmd)?,
        attempts_per_presentation: c.or(a.attempts, cmd, "attempts", 1000)?,
        node_cap: c.or(a.node_cap, cmd, "node_cap", DEFAULT_NODE_CAP)?,
    };
    let seed: u64 = c.require(a.seed, cmd, "seed")?;
    let out = c.pick(a.out.clone(), cmd, "out")?;
    let csv = c.pick(a.csv.clone(), cmd, "csv")?;
    let dump = c.pick(a.dump.clone(), cmd, "dump")?;
    if opts.budget == 0 {
        return Err(genacc_core::Error::ZeroBudget.into());
    }

    let (accepted, sampled) = sample_q_presentations(&gp, &opts, seed)?;
    if !ctx.quiet {
        eprintln!(
            "experiment: {} of {} presentations after {sampled} samples",
            accepted.len(),
            opts.presentations
        );
    }
    let jobs: Vec<(usize, usize)> = (0..accepted.len())
        .flat_map(|i| (0..opts.chains_per_presentation).map(move |j| (i, j)))
        .collect();
    let progress = Progress::new("experiment chains".into(), jobs.len() as u64, !ctx.quiet);
    let chains = ctx.pool(|| {
        jobs.par_iter()
            .map(|&(i, j)| {
                let r = experiment_chain(&accepted[i], &gp, &opts, seed, i, j);
                progress.tick();
                r
            })
            .collect::<Result<Vec<_>, _>>()
    })??;

    let count = |name: &str| chains.iter().filter(|c| c.outcome.name() == name).count();
    let (stabilized, exhausted, indeterminate) = (
        count("stabilized"),
        count("budget-exhausted"),
        count("indeterminate"),
    );
    let candidates: Vec<(usize, usize)> = jobs
        .iter()
        .zip(&chains)
        .filter(|(_, c)| c.outcome == Outcome::BudgetExhausted)
        .map(|(&ij, _)| ij)
        .collect();
    let rejection_rate = if sampled == 0 {
        0.0
    } else {
        1.0 - accepted.len() as f64 / sampled as f64
    };
    if !candidates.is_empty() && !ctx.quiet {
        eprintln!("experiment: {} COUNTEREXAMPLE CANDIDATE(S): verified strict chains exhausted the budget", candidates.len());
    }

    if let Some(dir) = &dump {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        for (&(i, j), chain) in jobs.iter().zip(&chains) {
            if chain.outcome != Outcome::BudgetExhausted {
                continue;
            }
            let stem = Path::new(dir).join(format!("candidate-{i}-{j}"));
            let comment =
                format!("counterexample candidate: presentation {i}, chain {j}, seed {seed}");
            write_file(
                &format!("{}.txt", stem.display()),
                &write_presentation(&accepted[i], Some(&comment)),
            )?;
            write_file(
                &format!("{}.json", stem.display()),
                &to_json(&ChainJson::from_report(chain, Some(&gp))),
            )?;
        }
    }
    if let Some(path) = &csv {
        let text = format!(
            "requested,accepted,sampled,rejection_rate,chains,stabilized,budget_exhausted,indeterminate,candidates\n{},{},{},{:.6},{},{},{},{},{}\n",
            opts.presentations,
            accepted.len(),
            sampled,
            rejection_rate,
            chains.len(),
            stabilized,
            exhausted,
            indeterminate,
            candidates.len()
        );
        write_file(path, &text)?;
    }
    let report = json!({
        "format": "experiment v1",
        "params": ParamsJson::from_params(&gp),
        "relator_len": opts.relator_len,
        "strategy": opts.strategy.name(),
        "seed": seed,
        "budget": opts.budget,
        "chains_per_presentation": opts.chains_per_presentation,
        "requested": opts.presentations,
        "accepted": accepted.len(),
        "sampled": sampled,
        "rejection_rate": rejection_rate,
        "outcomes": { "stabilized": stabilized, "budget_exhausted": exhausted, "indeterminate": indeterminate },
        "counterexample_candidates": candidates.iter().map(|&(i, j)| json!({ "presentation": i, "chain": j })).collect::<Vec<_>>(),
        "presentations": accepted.iter().map(relator_strings).collect::<Vec<_>>(),
        "chains": chains.iter().map(|c| ChainJson::from_report(c, None)).collect::<Vec<_>>(),
    });
    ctx.emit(out.as_deref(), &to_json(&report))?;
    Ok(if !candidates.is_empty() {
        1
    } else if accepted.len() < opts.presentations || indeterminate > 0 {
        2
    } else {
        0
    })
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad {what} {s:?}")))
        })
        .collect()
}

fn cmd_genericity(a: &GenericityArgs, ctx: &mut Ctx) -> Result<u8, CliError> {
    let cmd = "genericity";
    let c = &ctx.cfg;
    let gp = params(c, &a.params, cmd, GROUP_DEFAULTS)?;
    let clause_text = if a.clauses.is_empty() {
        c.or(None, cmd, "clause", "1,2,3".to_string())?
    } else {
        a.clauses.join(",")
    };
    let mut clause_ids: Vec<u8> = parse_list(&clause_text, "clause")?;
    clause_ids.sort_unstable();
    clause_ids.dedup();
    if clause_ids.is_empty() || clause_ids.iter().any(|c| !(1..=3).contains(c)) {
        return Err(CliError::Usage("--clause takes values 1, 2 and 3".into()));
    }
    let clauses = Clauses {
        proper_power: clause_ids.contains(&1),
        c_prime: clause_ids.contains(&2),
        readable: clause_ids.contains(&3),
    };
    let lengths: Vec<usize> = parse_list(
        &c.require::<String>(a.lengths.clone(), cmd, "lengths")?,
        "length",
    )?;
    let samples = c.or(a.samples, cmd, "samples", 500)?;
    let mode = length_mode(&c.or(a.mode.clone(), cmd, "mode", "exact".to_string())?)?;
    let opts = EstimateOptions {
        clauses,
        node_cap: c.or(a.node_cap, cmd, "node_cap", DEFAULT_NODE_CAP)?,
        mode,
    };
    let seed: u64 = c.require(a.seed, cmd, "seed")?;
    let format = c.or(a.format.clone(), cmd, "format", "csv".to_string())?;
    let out = c.pick(a.out.clone(), cmd, "out")?;
    if !matches!(format.as_str(), "csv" | "json") {
        return Err(CliError::Usage(format!(
            "--format must be `csv` or `json`, got {format:?}"
        )));
    }

    let mut rows = Vec::with_capacity(lengths.len());
    for &n in &lengths {
        let progress = Progress::new(format!("genericity n={n}"), samples, !ctx.quiet);
        let outcomes = ctx.pool(|| {
            (0..samples)
                .into_par_iter()
                .map(|i| {
                    let r = sample_outcome(&gp, n, i, seed, &opts);
                    progress.tick();
                    r
                })
                .collect::<Result<Vec<_>, _>>()
        })??;
        rows.push(aggregate(n, &outcomes, clauses));
    }
    let stats = GenericityStats { rows };
    let indeterminate = stats.rows.iter().any(|r| r.indeterminate > 0);
    let text = if format == "csv" {
        stats_csv(&stats)
    } else {
        stats_json(&stats, &gp, &clause_ids, seed)
    };
    ctx.emit(out.as_deref(), &text)?;
    Ok(if indeterminate { 2 } else { 0 })
}
