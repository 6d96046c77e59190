//! Batch experiment runner: seeded, machine-readable experiments over the
//! library's protocols. Every run writes results.jsonl (per-trial records),
//! summary.csv (aggregates, with paper-formula bounds where one exists) and
//! config.json (the resolved configuration echo).
//!
//! Exit codes: 0 success, 1 configuration/validation error, 2 runtime error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use ldp_core::hypotest::{
    compound_test, simple_test, solve_event_game, CompoundInstance, EventDistribution, Hypothesis,
    SimpleTestInstance,
};
use ldp_core::mpj::{
    default_arity, group_count, paper_m, random_instance, solve_full, solve_sequential_cohorts,
};
use ldp_core::protocol::classify;
use ldp_core::reduction::reduction_expt;
use ldp_core::verify::{audit_protocol, enumerate_transcripts, Semantics};
use ldp_core::{corpus, FiniteDist, LdpError, Protocol, SeededRng};

#[derive(Parser)]
#[command(name = "ldp-interact", version, about = "interactive-LDP experiment runner")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Follow,
    Bayes,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineArg {
    None,
    SequentialCohorts,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Simple,
    Compound,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a fully interactive protocol into its sequentially
    /// interactive equivalent and measure fresh-sample consumption.
    Reduce {
        /// Corpus protocol name, or "example2" with --d/--hist-eps.
        #[arg(long)]
        protocol: String,
        /// Histogram depth when --protocol example2.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Per-protocol eps when --protocol example2.
        #[arg(long, default_value_t = 1.0)]
        hist_eps: f64,
        /// Simulated user count (example2 only; corpus entries fix their own).
        #[arg(long)]
        n: Option<usize>,
        /// Compilation privacy target.
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
    },
    /// Multi-party pointer jumping solver trials.
    Mpj {
        #[arg(long)]
        d: usize,
        /// Arity; defaults to d^4.
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        eps: f64,
        /// Per-group cohort size; defaults to the upper-bound formula.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = BaselineArg::None)]
        baseline: BaselineArg,
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
    },
    /// Locally private simple / compound hypothesis testing trials.
    Hypotest {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Simple mode: comma-separated probabilities of hypothesis 0.
        #[arg(long)]
        p0: Option<String>,
        /// Simple mode: comma-separated probabilities of hypothesis 1.
        #[arg(long)]
        p1: Option<String>,
        /// Compound mode: path to an instance JSON
        /// {"ground_set": [...], "h0_vertices": [[...]], "h1_vertices": [[...]]}.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        eps: f64,
        /// Per-trial sample count; defaults to the calibrated c/(eps^2 alpha^2).
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
    },
    /// Exhaustive worst-case privacy audit of a corpus protocol.
    Audit {
        #[arg(long)]
        protocol: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        hist_eps: f64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
    },
    /// Exact transcript-distribution enumeration of a corpus protocol.
    Enumerate {
        #[arg(long)]
        protocol: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        hist_eps: f64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Follow)]
        semantics: SemanticsArg,
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
    },
}

enum AppError {
    Validation(String),
    Runtime(String),
}

impl From<LdpError> for AppError {
    fn from(e: LdpError) -> Self {
        AppError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Runtime(format!("io error: {e}"))
    }
}

type AppResult<T> = Result<T, AppError>;

/// 17-significant-digit float rendering used in every artifact.
fn fnum(x: f64) -> String {
    format!("{x:.16e}")
}

fn init_threads() -> AppResult<()> {
    if let Ok(v) = std::env::var("LDP_INTERACT_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| AppError::Validation(format!("LDP_INTERACT_THREADS = {v:?} is not a number")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| AppError::Runtime(e.to_string()))?;
    }
    Ok(())
}

fn write_artifacts(
    dir: &Path,
    config: &serde_json::Value,
    jsonl: &[String],
    summary_header: &str,
    summary_rows: &[String],
) -> AppResult<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(
        dir.join("config.json"),
        serde_json::to_string_pretty(config).map_err(|e| AppError::Runtime(e.to_string()))? + "\n",
    )?;
    let mut out = String::new();
    for line in jsonl {
        out.push_str(line);
        out.push('\n');
    }
    std::fs::write(dir.join("results.jsonl"), out)?;
    let mut csv = String::from(summary_header);
    csv.push('\n');
    for row in summary_rows {
        csv.push_str(row);
        csv.push('\n');
    }
    std::fs::write(dir.join("summary.csv"), csv)?;
    Ok(())
}

/// Resolve a protocol reference to (name, protocol, prior, default n).
fn resolve_protocol(
    name: &str,
    d: usize,
    hist_eps: f64,
    n: Option<usize>,
) -> AppResult<(String, Protocol, FiniteDist, usize)> {
    if name == "example2" {
        if d < 1 {
            return Err(AppError::Validation("example2 needs --d >= 1".into()));
        }
        if hist_eps <= 0.0 {
            return Err(AppError::Validation("example2 needs --hist-eps > 0".into()));
        }
        let users = n.unwrap_or(1);
        let (p, prior) = corpus::example2_histogram(d, hist_eps, users);
        return Ok((format!("example2-d{d}"), p, prior, users));
    }
    for entry in corpus::corpus() {
        if entry.name == name {
            if let Some(n) = n {
                if n != entry.n {
                    return Err(AppError::Validation(format!(
                        "corpus protocol {name} fixes n = {}",
                        entry.n
                    )));
                }
            }
            return Ok((name.to_string(), entry.protocol, entry.prior, entry.n));
        }
    }
    let names: Vec<&str> = corpus::corpus().iter().map(|e| e.name).collect();
    Err(AppError::Validation(format!(
        "unknown protocol {name:?}; known: example2, {}",
        names.join(", ")
    )))
}

fn transcript_hash(key: &str) -> String {
    let mut h = Sha256::new();
    h.update(key.as_bytes());
    format!("{:x}", h.finalize())
}

fn run_reduce(
    protocol: String,
    d: usize,
    hist_eps: f64,
    n: Option<usize>,
    eps: f64,
    trials: u64,
    seed: u64,
    output_dir: PathBuf,
) -> AppResult<()> {
    if eps <= 0.0 {
        return Err(AppError::Validation("--eps must be > 0".into()));
    }
    if trials < 1 {
        return Err(AppError::Validation("--trials must be >= 1".into()));
    }
    let (name, p, prior, users) = resolve_protocol(&protocol, d, hist_eps, n)?;
    // the compositionality factor enters the paper bound; per-user sums are
    // user-count invariant so classify the n=1 histogram when applicable
    let k_worst = if protocol == "example2" {
        let (p1, _) = corpus::example2_histogram(d, hist_eps, 1);
        classify(&p1, 1, eps)?.k_worst
    } else {
        classify(&p, users, eps)?.k_worst
    };
    let root = SeededRng::new(seed);
    let runs: Vec<Result<(u64, usize, String), LdpError>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = root.child(t);
            let run = reduction_expt(&p, &prior, users, eps, &mut rng)?;
            Ok((
                run.samples_used,
                run.transcript.len(),
                transcript_hash(&run.transcript.key()),
            ))
        })
        .collect();
    let mut jsonl = Vec::with_capacity(trials as usize);
    let mut samples = Vec::with_capacity(trials as usize);
    for (t, r) in runs.into_iter().enumerate() {
        let (samples_used, rounds, hash) = r.map_err(AppError::from)?;
        samples.push(samples_used);
        jsonl.push(format!(
            "{{\"trial\":{t},\"seed\":{seed},\"samples_used\":{samples_used},\"rounds\":{rounds},\"transcript_hash\":\"{hash}\"}}"
        ));
    }
    let mut sorted = samples.clone();
    sorted.sort_unstable();
    let q = |x: f64| sorted[((sorted.len() as f64 * x).ceil() as usize).clamp(1, sorted.len()) - 1];
    let mean = samples.iter().sum::<u64>() as f64 / trials as f64;
    let bound = users as f64 * (2.0 * eps.exp() * eps / (1.0 - (-eps).exp()) * k_worst + 1.0);
    let config = serde_json::json!({
        "subcommand": "reduce",
        "params": {"protocol": name, "n": users, "eps": eps, "k_worst": k_worst},
        "seed": seed,
        "trials": trials,
        "output_dir": output_dir,
    });
    let row = format!(
        "{name},{},{users},{trials},{},{},{},{},{}",
        fnum(eps),
        fnum(mean),
        q(0.5),
        q(0.9),
        q(0.99),
        fnum(bound)
    );
    write_artifacts(
        &output_dir,
        &config,
        &jsonl,
        "protocol,eps,n,trials,mean_samples,q50,q90,q99,theorem_bound",
        &[row],
    )
}

#[allow(clippy::too_many_arguments)]
fn run_mpj(
    d: usize,
    s: Option<u32>,
    eps: f64,
    m: Option<usize>,
    trials: u64,
    seed: u64,
    baseline: BaselineArg,
    output_dir: PathBuf,
) -> AppResult<()> {
    if d < 1 || eps <= 0.0 || trials < 1 {
        return Err(AppError::Validation(
            "--d >= 1, --eps > 0 and --trials >= 1 required".into(),
        ));
    }
    let s = s.unwrap_or_else(|| default_arity(d));
    if s < 2 {
        return Err(AppError::Validation("--s must be >= 2".into()));
    }
    let m = m.unwrap_or_else(|| paper_m(d, eps));
    let u = group_count(s);
    let n_users = u * m;
    let run_baseline = matches!(baseline, BaselineArg::SequentialCohorts);
    let root = SeededRng::new(seed);
    let outcomes: Vec<Result<(bool, Option<bool>), LdpError>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = root.child(t);
            let inst = random_instance(d, s, &mut rng)?;
            let (_, ok) = solve_full(&inst, eps, m, &mut rng);
            let base = run_baseline.then(|| {
                // equal total user budget split across the d fresh cohorts
                let (_, bok) = solve_sequential_cohorts(&inst, eps, (m / d).max(1), &mut rng);
                bok
            });
            Ok((ok, base))
        })
        .collect();
    let mut jsonl = Vec::with_capacity(trials as usize);
    let mut successes = 0u64;
    let mut base_successes = 0u64;
    for (t, r) in outcomes.into_iter().enumerate() {
        let (ok, base) = r.map_err(AppError::from)?;
        successes += u64::from(ok);
        let base_field = match base {
            Some(b) => {
                base_successes += u64::from(b);
                format!(",\"baseline_success\":{b}")
            }
            None => String::new(),
        };
        jsonl.push(format!(
            "{{\"trial\":{t},\"success\":{ok},\"n_users\":{n_users},\"rounds\":{d}{base_field}}}"
        ));
    }
    let rate = successes as f64 / trials as f64;
    let target = 1.0 - 1.0 / d as f64;
    let config = serde_json::json!({
        "subcommand": "mpj",
        "params": {"d": d, "s": s, "eps": eps, "m": m, "n_users": n_users,
                    "baseline": if run_baseline { "sequential-cohorts" } else { "none" }},
        "seed": seed,
        "trials": trials,
        "output_dir": output_dir,
    });
    let mut row = format!(
        "{d},{s},{},{m},{n_users},{trials},{},{}",
        fnum(eps),
        fnum(rate),
        fnum(target)
    );
    if run_baseline {
        write!(row, ",{}", fnum(base_successes as f64 / trials as f64)).unwrap();
    } else {
        row.push(',');
    }
    write_artifacts(
        &output_dir,
        &config,
        &jsonl,
        "d,s,eps,m,n_users,trials,success_rate,paper_target_rate,baseline_success_rate",
        &[row],
    )
}

fn parse_probs(text: &str) -> AppResult<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| AppError::Validation(format!("bad probability {s:?}")))
        })
        .collect()
}

#[derive(serde::Deserialize)]
struct CompoundInstanceFile {
    ground_set: Vec<String>,
    h0_vertices: Vec<Vec<f64>>,
    h1_vertices: Vec<Vec<f64>>,
}

fn event_distribution_json(s: &EventDistribution) -> serde_json::Value {
    serde_json::json!({
        "ground_set": s.ground_set,
        "events": s.events,
        "weights": s.weights.iter().map(|w| fnum(*w)).collect::<Vec<_>>(),
        "value": fnum(s.value),
    })
}

#[allow(clippy::too_many_arguments)]
fn run_hypotest(
    mode: ModeArg,
    p0: Option<String>,
    p1: Option<String>,
    instance: Option<PathBuf>,
    eps: f64,
    n: Option<u64>,
    trials: u64,
    seed: u64,
    output_dir: PathBuf,
) -> AppResult<()> {
    if eps <= 0.0 || trials < 1 {
        return Err(AppError::Validation(
            "--eps > 0 and --trials >= 1 required".into(),
        ));
    }
    let root = SeededRng::new(seed);
    match mode {
        ModeArg::Simple => {
            let (p0, p1) = match (p0, p1) {
                (Some(a), Some(b)) => (parse_probs(&a)?, parse_probs(&b)?),
                _ => {
                    return Err(AppError::Validation(
                        "simple mode needs --p0 and --p1".into(),
                    ))
                }
            };
            if p0.len() != p1.len() {
                return Err(AppError::Validation("--p0 and --p1 lengths differ".into()));
            }
            let support: Vec<String> = (0..p0.len()).map(|i| format!("x{i}")).collect();
            let d0 = FiniteDist::new(support.clone(), p0).map_err(AppError::from)?;
            let d1 = FiniteDist::new(support, p1).map_err(AppError::from)?;
            let inst = SimpleTestInstance::new(d0, d1).map_err(AppError::from)?;
            let alpha = inst.alpha;
            let n = n.unwrap_or_else(|| (16.0 / (eps * eps * alpha * alpha)).ceil() as u64);
            let outcomes: Vec<Result<(bool, bool), LdpError>> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = root.child(t);
                    let truth_h1 = t % 2 == 1;
                    let gen = if truth_h1 { &inst.p1 } else { &inst.p0 };
                    let out = simple_test(&inst, eps, n, gen, &mut rng)?;
                    Ok((truth_h1, (out == Hypothesis::H1) == truth_h1))
                })
                .collect();
            summarize_tests(
                outcomes, trials, "simple", alpha, eps, n, seed, &output_dir,
                serde_json::json!({"mode": "simple", "alpha": alpha, "eps": eps, "n": n}),
            )
        }
        ModeArg::Compound => {
            let Some(path) = instance else {
                return Err(AppError::Validation(
                    "compound mode needs --instance".into(),
                ));
            };
            let text = std::fs::read_to_string(&path)
                .map_err(|e| AppError::Validation(format!("cannot read {}: {e}", path.display())))?;
            let file: CompoundInstanceFile = serde_json::from_str(&text)
                .map_err(|e| AppError::Validation(format!("{}: {e}", path.display())))?;
            let to_dists = |rows: Vec<Vec<f64>>| -> Result<Vec<FiniteDist>, LdpError> {
                rows.into_iter()
                    .map(|r| FiniteDist::new(file.ground_set.clone(), r))
                    .collect()
            };
            let inst = CompoundInstance::new(
                file.ground_set.clone(),
                to_dists(file.h0_vertices).map_err(AppError::from)?,
                to_dists(file.h1_vertices).map_err(AppError::from)?,
            )
            .map_err(AppError::from)?;
            let s = solve_event_game(&inst, 1e-6).map_err(AppError::from)?;
            let alpha = s.value;
            let n = n.unwrap_or_else(|| (64.0 / (eps * eps * alpha * alpha)).ceil() as u64);
            std::fs::create_dir_all(&output_dir)?;
            std::fs::write(
                output_dir.join("event_distribution.json"),
                serde_json::to_string_pretty(&event_distribution_json(&s))
                    .map_err(|e| AppError::Runtime(e.to_string()))?
                    + "\n",
            )?;
            let outcomes: Vec<Result<(bool, bool), LdpError>> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = root.child(t);
                    let truth_h1 = t % 2 == 1;
                    let gen = if truth_h1 {
                        &inst.h1_vertices[0]
                    } else {
                        &inst.h0_vertices[0]
                    };
                    let out = compound_test(&inst, &s, eps, n, gen, &mut rng)?;
                    Ok((truth_h1, (out == Hypothesis::H1) == truth_h1))
                })
                .collect();
            summarize_tests(
                outcomes, trials, "compound", alpha, eps, n, seed, &output_dir,
                serde_json::json!({"mode": "compound", "instance": path,
                                    "alpha": alpha, "eps": eps, "n": n}),
            )
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn summarize_tests(
    outcomes: Vec<Result<(bool, bool), LdpError>>,
    trials: u64,
    mode: &str,
    alpha: f64,
    eps: f64,
    n: u64,
    seed: u64,
    output_dir: &Path,
    params: serde_json::Value,
) -> AppResult<()> {
    let mut jsonl = Vec::with_capacity(trials as usize);
    let mut correct = 0u64;
    for (t, r) in outcomes.into_iter().enumerate() {
        let (truth_h1, ok) = r.map_err(AppError::from)?;
        correct += u64::from(ok);
        let truth = if truth_h1 { "H1" } else { "H0" };
        jsonl.push(format!(
            "{{\"trial\":{t},\"truth\":\"{truth}\",\"correct\":{ok}}}"
        ));
    }
    let rate = correct as f64 / trials as f64;
    let config = serde_json::json!({
        "subcommand": "hypotest",
        "params": params,
        "seed": seed,
        "trials": trials,
        "output_dir": output_dir,
    });
    let row = format!(
        "{mode},{},{},{n},{trials},{}",
        fnum(alpha),
        fnum(eps),
        fnum(rate)
    );
    write_artifacts(
        output_dir,
        &config,
        &jsonl,
        "mode,alpha,eps,n,trials,success_rate",
        &[row],
    )
}

fn run_audit(
    protocol: String,
    d: usize,
    hist_eps: f64,
    n: Option<usize>,
    output_dir: PathBuf,
) -> AppResult<()> {
    let (name, p, _prior, users) = resolve_protocol(&protocol, d, hist_eps, n)?;
    let report = audit_protocol(&p, users).map_err(AppError::from)?;
    std::fs::create_dir_all(&output_dir)?;
    let witness = report.witness.as_ref().map(|(t, u, x, xp)| {
        serde_json::json!({"transcript": t, "user": u, "datum": x, "datum_prime": xp})
    });
    let json = serde_json::json!({
        "protocol": name,
        "n": users,
        "realized_eps": fnum(report.realized_eps),
        "witness": witness,
    });
    std::fs::write(
        output_dir.join("audit.json"),
        serde_json::to_string_pretty(&json).map_err(|e| AppError::Runtime(e.to_string()))? + "\n",
    )?;
    let config = serde_json::json!({
        "subcommand": "audit",
        "params": {"protocol": name, "n": users},
        "seed": 0,
        "trials": 1,
        "output_dir": output_dir,
    });
    let row = format!("{name},{users},{}", fnum(report.realized_eps));
    write_artifacts(
        &output_dir,
        &config,
        &[serde_json::to_string(&json).map_err(|e| AppError::Runtime(e.to_string()))?],
        "protocol,n,realized_eps",
        &[row],
    )
}

fn run_enumerate(
    protocol: String,
    d: usize,
    hist_eps: f64,
    n: Option<usize>,
    semantics: SemanticsArg,
    output_dir: PathBuf,
) -> AppResult<()> {
    let (name, p, prior, users) = resolve_protocol(&protocol, d, hist_eps, n)?;
    let sem = match semantics {
        SemanticsArg::Follow => Semantics::Follow,
        SemanticsArg::Bayes => Semantics::Bayes,
    };
    let dist = enumerate_transcripts(&p, &prior, users, sem).map_err(AppError::from)?;
    std::fs::create_dir_all(&output_dir)?;
    let entries: serde_json::Map<String, serde_json::Value> = dist
        .entries
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(fnum(*v))))
        .collect();
    let json = serde_json::json!({"protocol": name, "n": users, "entries": entries});
    std::fs::write(
        output_dir.join("transcripts.json"),
        serde_json::to_string_pretty(&json).map_err(|e| AppError::Runtime(e.to_string()))? + "\n",
    )?;
    let config = serde_json::json!({
        "subcommand": "enumerate",
        "params": {"protocol": name, "n": users,
                    "semantics": if matches!(sem, Semantics::Follow) { "follow" } else { "bayes" }},
        "seed": 0,
        "trials": 1,
        "output_dir": output_dir,
    });
    let jsonl: Vec<String> = dist
        .entries
        .iter()
        .map(|(k, v)| format!("{{\"transcript\":{},\"prob\":\"{}\"}}", serde_json::Value::String(k.clone()), fnum(*v)))
        .collect();
    let row = format!("{name},{users},{}", dist.entries.len());
    write_artifacts(
        &output_dir,
        &config,
        &jsonl,
        "protocol,n,transcripts",
        &[row],
    )
}

fn dispatch(cmd: Cmd) -> AppResult<()> {
    init_threads()?;
    match cmd {
        Cmd::Reduce {
            protocol,
            d,
            hist_eps,
            n,
            eps,
            trials,
            seed,
            output_dir,
        } => run_reduce(protocol, d, hist_eps, n, eps, trials, seed, output_dir),
        Cmd::Mpj {
            d,
            s,
            eps,
            m,
            trials,
            seed,
            baseline,
            output_dir,
        } => run_mpj(d, s, eps, m, trials, seed, baseline, output_dir),
        Cmd::Hypotest {
            mode,
            p0,
            p1,
            instance,
            eps,
            n,
            trials,
            seed,
            output_dir,
        } => run_hypotest(mode, p0, p1, instance, eps, n, trials, seed, output_dir),
        Cmd::Audit {
            protocol,
            d,
            hist_eps,
            n,
            output_dir,
        } => run_audit(protocol, d, hist_eps, n, output_dir),
        Cmd::Enumerate {
            protocol,
            d,
            hist_eps,
            n,
            semantics,
            output_dir,
        } => run_enumerate(protocol, d, hist_eps, n, semantics, output_dir),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap treats --help/--version as "errors"; keep those exit 0
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Validation(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("runtime error: {msg}");
            ExitCode::from(2)
        }
    }
}
