use clap::{Args, Parser, Subcommand, ValueEnum};
use plantrank::certificate::{build_certificate, gamma_random, verify};
use plantrank::experiments::{estimate_alpha, rows_to_csv, run_sweep, Mode, Problem, SweepConfig};
use plantrank::generators::{
    gen_biclique_adversarial, gen_biclique_random, gen_clique_adversarial, gen_clique_random, AdversaryParams,
    RandomModelParams,
};
use plantrank::graph::{read_instance, write_instance, InstanceGraph, PlantedInstance};
use plantrank::oracle::{max_clique_exact, max_edge_biclique_exact};
use plantrank::rmt::{
    self, chernoff_bound, chernoff_sqrt_bound, decompose_random_w, empirical_binomial_deviation,
    empirical_binomial_tail, w1_clique_bound, TrialReport,
};
use plantrank::solver::{solve_biclique_relaxation, solve_clique_relaxation, Candidate, SolverConfig};
use plantrank::Error;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "plantrank", version, about = "Planted clique and biclique recovery experiments")]
struct Cli {
    /// Base random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for trial-level parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Flat key=value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted instance in planted-graph v1 format.
    Generate(GenerateArgs),
    /// Solve the nuclear-norm relaxation of an instance file.
    Solve { input: PathBuf },
    /// Build and strictly verify the dual certificate of an instance file.
    Certify {
        input: PathBuf,
        /// Certificate parameter; defaults to 0.
        #[arg(long, conflicts_with = "p")]
        gamma: Option<f64>,
        /// Use the random-model preset gamma = -p/(1-p).
        #[arg(long)]
        p: Option<f64>,
    },
    /// Exact maximum clique or maximum-edge biclique of a small instance.
    Oracle { input: PathBuf },
    /// Random-matrix checks.
    #[command(subcommand)]
    Rmt(RmtCommand),
    /// Run a parameter sweep described by --config.
    Sweep,
    /// Smallest multiplier c = n/sqrt(N) with reliable recovery on the --config grid.
    EstimateAlpha,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value = "clique")]
    problem: Problem,
    #[arg(long, default_value = "random")]
    mode: Mode,
    /// Vertex count (clique) or right side size (biclique).
    #[arg(long = "big-n")]
    big_n: usize,
    /// Planted clique size, or planted right side size.
    #[arg(long)]
    n: usize,
    /// Left side size (biclique).
    #[arg(long = "big-m")]
    big_m: Option<usize>,
    /// Planted left side size (biclique).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    r: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Reject adversarial budgets that fail the closed-form screen.
    #[arg(long)]
    screen: bool,
}

#[derive(Subcommand)]
enum RmtCommand {
    /// Spectral norm of symmetric two-point matrices against 3 sigma sqrt(n).
    FurediKomlos {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Scaled spectral norm of rectangular two-point matrices.
    Geman {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        y: f64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Empirical binomial tail against the Chernoff bound.
    Chernoff {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: f64,
        /// Relative deviation for the multiplicative form.
        #[arg(long, conflicts_with = "a", required_unless_present = "a")]
        delta: Option<f64>,
        /// Absolute deviation a for the sqrt form.
        #[arg(long)]
        a: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        draws: usize,
    },
    /// Squared Frobenius cost of column recentering, per column of N.
    Recenter {
        #[arg(long)]
        n: usize,
        #[arg(long = "big-n")]
        big_n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Split a random-model certificate into its five parts.
    WDecomp {
        input: PathBuf,
        #[arg(long)]
        p: f64,
    },
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeGuard { .. } => 2,
            Error::CertificateInfeasible { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Settings merged from the config file and the global flags.
struct Settings {
    sweep: Option<SweepConfig>,
    solver: SolverConfig,
    seed: u64,
    workers: usize,
}

fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let sweep = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
            Some(SweepConfig::parse(&text)?)
        }
        None => None,
    };
    let base = sweep.clone().unwrap_or_default();
    let workers = cli.workers.unwrap_or(base.workers);
    if workers == 0 {
        return Err(invalid("--workers must be at least 1"));
    }
    Ok(Settings {
        solver: base.solver,
        seed: cli.seed.unwrap_or(base.base_seed),
        workers,
        sweep,
    })
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string(value).map_err(|e| invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn load(path: &Path) -> Result<PlantedInstance, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(read_instance(&text)?)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let s = settings(cli)?;
    let format = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Generate(args) => {
            let inst = generate(args, s.seed)?;
            emit(cli, &write_instance(&inst))?;
        }
        Command::Solve { input } => {
            let inst = load(input)?;
            let start = Instant::now();
            let res = match &inst.graph {
                InstanceGraph::Clique(g) => solve_clique_relaxation(g, &s.solver)?,
                InstanceGraph::Biclique(g) => solve_biclique_relaxation(g, &s.solver)?,
            };
            #[derive(Serialize)]
            struct SolveRecord<'a> {
                converged: bool,
                iterations: usize,
                objective: f64,
                rank_one_gap: f64,
                candidate: Option<&'a Candidate>,
                runtime_ms: f64,
            }
            let record = SolveRecord {
                converged: res.converged,
                iterations: res.iterations,
                objective: res.objective,
                rank_one_gap: res.rank_one_gap,
                candidate: res.candidate.as_ref(),
                runtime_ms: start.elapsed().as_secs_f64() * 1e3,
            };
            emit(cli, &to_json(&record)?)?;
        }
        Command::Certify { input, gamma, p } => {
            let inst = load(input)?;
            let gamma = match (gamma, p) {
                (_, Some(p)) => {
                    if !(0.0..1.0).contains(p) {
                        return Err(invalid(format!("p = {p} not in [0, 1)")));
                    }
                    gamma_random(*p)
                }
                (Some(g), None) => *g,
                (None, None) => 0.0,
            };
            let cert = build_certificate(&inst, gamma)?;
            let report = verify(&cert, &inst, true)?;
            emit(cli, &to_json(&report)?)?;
            if !report.overall {
                return Ok(3);
            }
        }
        Command::Oracle { input } => {
            let inst = load(input)?;
            let res = match &inst.graph {
                InstanceGraph::Clique(g) => max_clique_exact(g)?,
                InstanceGraph::Biclique(g) => max_edge_biclique_exact(g)?,
            };
            emit(cli, &to_json(&res)?)?;
        }
        Command::Rmt(cmd) => {
            let text = with_pool(s.workers, || rmt_command(cmd, s.seed, format(Format::Csv)))??;
            emit(cli, &text)?;
        }
        Command::Sweep => {
            let cfg = sweep_config(cli, &s)?;
            let rows = run_sweep(&cfg)?;
            for row in rows.iter().filter(|r| r.failed_trials > 0) {
                eprintln!(
                    "warning: {} of {} trials failed at N={} n={}: {}",
                    row.failed_trials,
                    row.trials,
                    row.cell.big_n,
                    row.cell.n,
                    row.first_error.as_deref().unwrap_or("")
                );
            }
            let text = match format(Format::Csv) {
                Format::Csv => rows_to_csv(&rows),
                Format::Json => to_json(&rows)?,
            };
            emit(cli, &text)?;
        }
        Command::EstimateAlpha => {
            let cfg = sweep_config(cli, &s)?;
            let est = estimate_alpha(&cfg)?;
            let text = match format(Format::Json) {
                Format::Json => to_json(&est)?,
                Format::Csv => {
                    let c = est.c.map(|c| c.to_string()).unwrap_or_else(|| "not attained on grid".into());
                    format!("estimate,trials_per_cell\n{c},{}\n", est.trials_per_cell)
                }
            };
            if est.c.is_none() {
                eprintln!("estimate not attained on grid");
            }
            emit(cli, &text)?;
        }
    }
    Ok(0)
}

fn sweep_config(cli: &Cli, s: &Settings) -> Result<SweepConfig, Failure> {
    let mut cfg = s
        .sweep
        .clone()
        .ok_or_else(|| invalid("this command needs --config <file>"))?;
    if let Some(seed) = cli.seed {
        cfg.base_seed = seed;
    }
    cfg.workers = s.workers;
    Ok(cfg)
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn generate(args: &GenerateArgs, seed: u64) -> Result<PlantedInstance, Failure> {
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| invalid(format!("biclique generation needs --{name}")));
    let inst = match (args.problem, args.mode) {
        (Problem::Clique, Mode::Random) => {
            gen_clique_random(&RandomModelParams::clique(args.big_n, args.n, args.p, seed))?
        }
        (Problem::Biclique, Mode::Random) => gen_biclique_random(&RandomModelParams::biclique(
            need(args.big_m, "big-m")?,
            args.big_n,
            need(args.m, "m")?,
            args.n,
            args.p,
            seed,
        ))?,
        (problem, Mode::Adversarial) => {
            let adv = AdversaryParams {
                r: args.r,
                alpha: args.alpha,
                beta: args.beta,
                seed,
                require_screen: args.screen,
            };
            match problem {
                Problem::Clique => gen_clique_adversarial(args.n, args.big_n, &adv)?,
                Problem::Biclique => {
                    gen_biclique_adversarial(need(args.m, "m")?, args.n, need(args.big_m, "big-m")?, args.big_n, &adv)?
                }
            }
        }
    };
    Ok(inst)
}

#[derive(Serialize)]
struct RmtRow {
    trial_index: usize,
    statistic: f64,
    bound: Option<f64>,
    violated: bool,
}

fn report_rows(report: &TrialReport) -> Vec<RmtRow> {
    report
        .samples
        .iter()
        .enumerate()
        .map(|(t, &s)| RmtRow {
            trial_index: t,
            statistic: s,
            bound: Some(report.bound),
            violated: !(s <= report.bound),
        })
        .collect()
}

fn rmt_command(cmd: &RmtCommand, seed: u64, format: Format) -> Result<String, Failure> {
    let rows = match cmd {
        RmtCommand::FurediKomlos { n, p, trials } => report_rows(&rmt::check_furedi_komlos(*n, *p, *trials, seed)?),
        RmtCommand::Geman { n, y, p, trials } => report_rows(&rmt::check_geman(*n, *y, *p, *trials, seed)?),
        RmtCommand::Recenter { n, big_n, p, trials } => {
            report_rows(&rmt::check_recentering_bound(*n, *big_n, *p, *trials, seed)?)
        }
        RmtCommand::Chernoff { k, p, delta, a, draws } => {
            let (statistic, bound) = match (delta, a) {
                (Some(d), _) => {
                    let bound = chernoff_bound(*k, *p, *d)?;
                    let threshold = (1.0 + d) * *p * *k as f64;
                    (empirical_binomial_tail(*k, *p, threshold, *draws, seed)?, bound)
                }
                (None, Some(a)) => (
                    empirical_binomial_deviation(*k, *p, *a, *draws, seed)?,
                    chernoff_sqrt_bound(*k, *p, *a)?,
                ),
                (None, None) => return Err(invalid("chernoff needs --delta or --a")),
            };
            vec![RmtRow {
                trial_index: 0,
                statistic,
                bound: Some(bound),
                violated: !(statistic <= bound),
            }]
        }
        RmtCommand::WDecomp { input, p } => {
            if !(0.0..1.0).contains(p) {
                return Err(invalid(format!("p = {p} not in [0, 1)")));
            }
            let inst = load(input)?;
            let d = decompose_random_w(&inst, gamma_random(*p), seed)?;
            let clique = matches!(inst.graph, InstanceGraph::Clique(_));
            let n = inst.planted_left.len();
            // Row k is part W_{k+1}; bounds are given where one is known.
            (0..5)
                .map(|k| {
                    let bound = match (clique, k) {
                        (true, 0) => {
                            let big_n = match &inst.graph {
                                InstanceGraph::Clique(g) => g.num_vertices(),
                                InstanceGraph::Biclique(_) => unreachable!(),
                            };
                            Some(w1_clique_bound(big_n, n, *p))
                        }
                        (true, 2) if *p <= 0.5 => Some(2.0 / n as f64),
                        _ => None,
                    };
                    let statistic = d.norms[k].spectral;
                    RmtRow {
                        trial_index: k + 1,
                        statistic,
                        bound,
                        violated: bound.is_some_and(|b| !(statistic <= b)),
                    }
                })
                .collect()
        }
    };
    Ok(match format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut out = String::from("trial_index,statistic,bound,violated\n");
            for r in &rows {
                let bound = r.bound.map(|b| b.to_string()).unwrap_or_default();
                let _ = writeln!(out, "{},{},{},{}", r.trial_index, r.statistic, bound, r.violated);
            }
            out
        }
    })
}
