use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lcllab::automaton::{build_automaton, classify_no_input, Certificate};
use lcllab::catalog;
use lcllab::gen::{sample_chain, superblock_instance};
use lcllab::mixing::{classify, ClassifyConfig, DeciderConfig};
use lcllab::normalize::{check_normalizable, normalize, project_solution};
use lcllab::oracle::{find_window_algorithm, SearchBudget, WindowSearch};
use lcllab::parse::{parse_family, parse_instance, parse_problem, serialize_instance, serialize_normal};
use lcllab::sim::{log_star, mark_gaps, ruling_set, run_view_algorithm, solve_ergodic, Phase, ViewAlgorithm};
use lcllab::solver::{count_solutions, solve_instance, verify_solution, Solution, DEFAULT_COUNT_CAP};
use lcllab::{par, Exec, LabeledInstance, Lcl, NormalLcl};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

mod check;
mod report;

use report::{replay, write_report, Report};

#[derive(Parser, Debug)]
#[command(name = "lcllab", version, about = "Classify, solve and simulate LCL problems on paths and cycles")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exhaustive mode: summarise every candidate, run full-size checks.
    #[arg(long, global = true)]
    full: bool,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true, env = "LCLLAB_JOBS")]
    jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest output alphabet the mixing decider accepts.
    #[arg(long, global = true, default_value_t = 6)]
    cap_out: usize,
    /// Wallclock cap for oracle searches, in milliseconds.
    #[arg(long, global = true, env = "LCLLAB_BUDGET_MS", default_value_t = 60_000)]
    budget_ms: u64,
    /// Re-run and compare against an earlier report (wallclock ignored).
    #[arg(long, global = true)]
    replay: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complexity class and mixing verdict of a problem.
    Classify {
        problem: PathBuf,
        /// Largest radius tried for a constant-round rule.
        #[arg(long, default_value_t = 1)]
        o1_radius: usize,
    },
    /// Normal form of a general-form problem.
    Normalize {
        problem: PathBuf,
        /// Also write the normal form as a problem file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Solve one instance exactly.
    Solve {
        problem: PathBuf,
        instance: PathBuf,
        /// Also count all solutions.
        #[arg(long)]
        count: bool,
    },
    /// Run a LOCAL algorithm on a cycle.
    Simulate {
        problem: PathBuf,
        #[arg(long, value_enum)]
        alg: Alg,
        /// Instance file; otherwise a cycle of `--n` copies of the first input letter.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        /// Spacing for `ruling`.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Radius for `view`.
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Generate a hard instance from a block family or superblocks.
    Gen {
        #[arg(long, conflicts_with = "superblock")]
        family: Option<PathBuf>,
        /// Superblock length and count.
        #[arg(long, num_args = 2, value_names = ["LEN", "M"])]
        superblock: Option<Vec<usize>>,
        /// Problem whose first two input letters play identity and swap.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Instance file to write; marks go to `<emit>.marks.json`.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Cross-check every engine against the brute-force oracles.
    Check,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Alg {
    View,
    Ruling,
    Ergodic,
}

/// Missing or unreadable inputs are usage errors.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

struct RunConfig {
    exec: Exec,
    budget: SearchBudget,
    decider: DeciderConfig,
}

impl RunConfig {
    fn new(g: &Global) -> anyhow::Result<Self> {
        if g.cap_out == 0 || g.budget_ms == 0 || g.jobs == Some(0) {
            return Err(Usage("--cap-out, --budget-ms and --jobs must be positive".into()).into());
        }
        let exec = if g.jobs == Some(1) { Exec::Sequential } else { Exec::Parallel };
        let budget = SearchBudget {
            wallclock_ms: g.budget_ms,
            ..SearchBudget::default()
        };
        Ok(RunConfig {
            exec,
            budget,
            decider: DeciderConfig {
                cap_out: g.cap_out,
                full: g.full,
                exec,
            },
        })
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())).into())
}

/// A problem file, or `builtin:<name>` for a catalog problem.
fn load_problem(path: &Path) -> anyhow::Result<Lcl> {
    if let Some(name) = path.to_str().and_then(|s| s.strip_prefix("builtin:")) {
        return catalog::by_name(name)
            .map(Lcl::Normal)
            .ok_or_else(|| Usage(format!("no built-in problem `{name}`; try one of {:?}", catalog::NAMES)).into());
    }
    parse_problem(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn as_normal(p: &Lcl) -> NormalLcl {
    match p {
        Lcl::Normal(p) => p.clone(),
        Lcl::General(g) => normalize(g),
    }
}

fn load_instance(path: &Path, p: &Lcl) -> anyhow::Result<LabeledInstance> {
    parse_instance(&read(path)?, p.sigma_in()).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize)]
struct ClassifyOut {
    source: String,
    normalized: bool,
    #[serde(flatten)]
    report: lcllab::mixing::ClassReport,
}

fn cmd_classify(cfg: &RunConfig, problem: &Path, o1_radius: usize) -> anyhow::Result<serde_json::Value> {
    let p = load_problem(problem)?;
    let np = as_normal(&p);
    let ccfg = ClassifyConfig {
        decider: cfg.decider,
        o1_radius,
        budget: cfg.budget,
    };
    let report = classify(&np, &ccfg)?;
    Ok(serde_json::to_value(ClassifyOut {
        source: p.name().to_string(),
        normalized: matches!(p, Lcl::General(_)),
        report,
    })?)
}

#[derive(Serialize)]
struct NormalizeOut {
    name: String,
    radius: usize,
    inputs: usize,
    window_letters: usize,
    allowed_pairs: usize,
    normal_form: String,
}

fn cmd_normalize(problem: &Path, emit: Option<&Path>) -> anyhow::Result<serde_json::Value> {
    let p = load_problem(problem)?;
    let radius = match &p {
        Lcl::General(g) => g.radius,
        Lcl::Normal(_) => 0,
    };
    let np = as_normal(&p);
    let text = serialize_normal(&np);
    if let Some(path) = emit {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(serde_json::to_value(NormalizeOut {
        name: np.name.clone(),
        radius,
        inputs: np.nin(),
        window_letters: np.nout(),
        allowed_pairs: np.num_allowed(),
        normal_form: text,
    })?)
}

#[derive(Serialize)]
struct SolveOut {
    problem: String,
    n: usize,
    topology: lcllab::Topology,
    sat: bool,
    coloring: Option<Vec<String>>,
    violations: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<String>,
}

fn cmd_solve(problem: &Path, instance: &Path, count: bool) -> anyhow::Result<serde_json::Value> {
    let p = load_problem(problem)?;
    let inst = load_instance(instance, &p)?;
    let np = as_normal(&p);
    if let Lcl::General(g) = &p {
        check_normalizable(g, &inst)?;
    }
    let sol = solve_instance(&np, &inst)?;
    let (coloring, violations) = match (&sol, &p) {
        (Solution::Unsat, _) => (None, Vec::new()),
        (Solution::Sat(c), Lcl::Normal(n)) => (Some(n.sigma_out.render_each(c)), verify_solution(n, &inst, c)?),
        (Solution::Sat(c), Lcl::General(g)) => {
            let proj = project_solution(g, c)?;
            let v = g.violations(&inst, &proj)?;
            (Some(g.sigma_out.render_each(&proj)), v)
        }
    };
    let count = if count {
        Some(count_solutions(&np, &inst, DEFAULT_COUNT_CAP)?.to_string())
    } else {
        None
    };
    Ok(serde_json::to_value(SolveOut {
        problem: p.name().to_string(),
        n: inst.n(),
        topology: inst.topology,
        sat: sol.is_sat(),
        coloring,
        violations,
        count,
    })?)
}

#[derive(Serialize)]
struct RulingOut {
    algorithm: &'static str,
    n: usize,
    k: usize,
    rounds_used: u64,
    log_star_max_id: u32,
    phases: Vec<Phase>,
    gaps: Vec<usize>,
    marks: Vec<bool>,
}

/// Ids are a seeded permutation of `0..n`.
fn generated_cycle(n: usize, seed: u64) -> LabeledInstance {
    let mut ids: Vec<u64> = (0..n as u64).collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    LabeledInstance::cycle(vec![0; n]).with_ids(ids).with_seed(seed)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    cfg: &RunConfig,
    problem: &Path,
    alg: Alg,
    instance: Option<&Path>,
    n: usize,
    k: usize,
    t: usize,
    seed: u64,
) -> anyhow::Result<serde_json::Value> {
    let p = load_problem(problem)?;
    let np = as_normal(&p);
    let inst = match instance {
        Some(path) => load_instance(path, &p)?,
        None => generated_cycle(n, seed),
    };
    match alg {
        Alg::View => {
            let rule = (0..=t)
                .find_map(|r| match find_window_algorithm(&np, r, &cfg.budget) {
                    Ok(WindowSearch::Found(rule)) => Some(Ok(rule)),
                    Ok(WindowSearch::None) => None,
                    Ok(WindowSearch::BudgetExceeded) => Some(Err(anyhow!("rule search exceeded its budget at radius {r}"))),
                    Err(e) => Some(Err(e.into())),
                })
                .transpose()?
                .ok_or_else(|| anyhow!("no certified input-only rule with radius <= {t}"))?;
            let alg = ViewAlgorithm::from_window_rule(rule);
            Ok(serde_json::to_value(run_view_algorithm(&alg, &np, &inst, cfg.exec)?)?)
        }
        Alg::Ruling => {
            let rs = ruling_set(&inst, k)?;
            let max_id = inst.ids.as_ref().and_then(|ids| ids.iter().max().copied()).unwrap_or(0);
            Ok(serde_json::to_value(RulingOut {
                algorithm: "ruling-set",
                n: inst.n(),
                k,
                rounds_used: rs.rounds_used,
                log_star_max_id: log_star(max_id),
                phases: rs.phases,
                gaps: mark_gaps(&rs.marks),
                marks: rs.marks,
            })?)
        }
        Alg::Ergodic => {
            let a = build_automaton(&np)?;
            let cert = match classify_no_input(&a).certificate {
                Certificate::Ergodic(c) => Some(c),
                _ => None,
            };
            Ok(serde_json::to_value(solve_ergodic(&np, &inst, cert.as_ref())?)?)
        }
    }
}

#[derive(Serialize)]
struct GenOut {
    kind: &'static str,
    source: String,
    requested_n: usize,
    n: usize,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    dropped_prefix: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<usize>>,
    instance_path: Option<String>,
    marks_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    instance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    marks: Option<serde_json::Value>,
}

fn emit_files(emit: Option<&Path>, text: &str, marks: &serde_json::Value, out: &mut GenOut) -> anyhow::Result<()> {
    match emit {
        Some(path) => {
            let mpath = PathBuf::from(format!("{}.marks.json", path.display()));
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            std::fs::write(&mpath, serde_json::to_string_pretty(marks)? + "\n")
                .with_context(|| format!("writing {}", mpath.display()))?;
            out.instance_path = Some(path.display().to_string());
            out.marks_path = Some(mpath.display().to_string());
        }
        None => {
            out.instance = Some(text.to_string());
            out.marks = Some(marks.clone());
        }
    }
    Ok(())
}

fn cmd_gen(
    family: Option<&Path>,
    superblock: Option<&[usize]>,
    problem: Option<&Path>,
    n: usize,
    seed: u64,
    emit: Option<&Path>,
) -> anyhow::Result<serde_json::Value> {
    if let Some(path) = family {
        let f = parse_family(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        let s = sample_chain(&f, n, seed)?;
        let mut out = GenOut {
            kind: "chain",
            source: f.name.clone(),
            requested_n: n,
            n: s.n,
            seed,
            dropped_prefix: Some(s.dropped_prefix),
            blocks: Some(s.block_sequence()),
            instance_path: None,
            marks_path: None,
            instance: None,
            marks: None,
        };
        let marks = serde_json::to_value(&s)?;
        emit_files(emit, &serialize_instance(&s.instance, &f.sigma_in), &marks, &mut out)?;
        return Ok(serde_json::to_value(out)?);
    }
    let Some(&[len, m]) = superblock else {
        return Err(Usage("gen needs --family FILE or --superblock LEN M".into()).into());
    };
    let p = match problem {
        Some(path) => as_normal(&load_problem(path)?),
        None => catalog::identity_swap(),
    };
    if p.nin() < 2 {
        bail!("superblocks need a problem with at least two input letters");
    }
    let inst = superblock_instance(0, 1, len, m)?;
    let starts: Vec<bool> = (0..inst.n()).map(|i| i % len == 0).collect();
    let marks = serde_json::json!({ "len": len, "m": m, "superblock_start": starts });
    let mut out = GenOut {
        kind: "superblock",
        source: p.name.clone(),
        requested_n: len * m,
        n: inst.n(),
        seed,
        dropped_prefix: None,
        blocks: None,
        instance_path: None,
        marks_path: None,
        instance: None,
        marks: None,
    };
    emit_files(emit, &serialize_instance(&inst, &p.sigma_in), &marks, &mut out)?;
    Ok(serde_json::to_value(out)?)
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let g = &cli.global;
    let cfg = RunConfig::new(g)?;
    let start = Instant::now();
    let (name, result, ok) = par::with_jobs(g.jobs, || -> anyhow::Result<_> {
        Ok(match &cli.command {
            Command::Classify { problem, o1_radius } => ("classify", cmd_classify(&cfg, problem, *o1_radius)?, true),
            Command::Normalize { problem, emit } => ("normalize", cmd_normalize(problem, emit.as_deref())?, true),
            Command::Solve { problem, instance, count } => ("solve", cmd_solve(problem, instance, *count)?, true),
            Command::Simulate { problem, alg, instance, n, k, t } => (
                "simulate",
                cmd_simulate(&cfg, problem, *alg, instance.as_deref(), *n, *k, *t, g.seed)?,
                true,
            ),
            Command::Gen { family, superblock, problem, n, emit } => (
                "gen",
                cmd_gen(family.as_deref(), superblock.as_deref(), problem.as_deref(), *n, g.seed, emit.as_deref())?,
                true,
            ),
            Command::Check => {
                let r = check::run(&cfg.budget, cfg.exec, g.full, g.seed);
                let ok = r.passed;
                ("check", serde_json::to_value(r)?, ok)
            }
        })
    })?;
    let report = Report::new(name, result, start.elapsed());
    if let Some(path) = &g.replay {
        replay(&report, &read(path)?)?;
    }
    write_report(&report, g.out.as_deref())?;
    Ok(ok)
}

trait RenderEach {
    fn render_each(&self, word: &[usize]) -> Vec<String>;
}

impl RenderEach for lcllab::Alphabet {
    fn render_each(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&i| self.label(i).to_string()).collect()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<Usage>() { 2 } else { 1 })
        }
    }
}
