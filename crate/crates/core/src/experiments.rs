//! Seeded parameter sweeps over planted instances: generate, certify, solve,
//! and compare the rounded solution with the planted structure.

use crate::certificate::{build_certificate, gamma_random, verify, GAMMA_ADVERSARIAL};
use crate::generators::{
    gen_biclique_adversarial, gen_biclique_random, gen_clique_adversarial, gen_clique_random, AdversaryParams,
    RandomModelParams,
};
use crate::graph::{InstanceGraph, PlantedInstance};
use crate::solver::{solve_biclique_relaxation, solve_clique_relaxation, Candidate, SolverConfig};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

/// Recovery rate a cell needs for [`estimate_alpha`] to accept its multiplier.
pub const ALPHA_THRESHOLD: f64 = 0.95;

pub const CSV_HEADER: &str = "problem,N,M,n,m,p,r,alpha,beta,c,trials,recovered_fraction,cert_strict_fraction,mean_W_spectral,mean_iterations,mean_runtime_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Clique,
    Biclique,
}

impl FromStr for Problem {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "clique" => Ok(Problem::Clique),
            "biclique" => Ok(Problem::Biclique),
            _ => Err(format!("unknown problem `{s}` (expected clique or biclique)")),
        }
    }
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Clique => "clique",
            Problem::Biclique => "biclique",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Random,
    Adversarial,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "random" => Ok(Mode::Random),
            "adversarial" => Ok(Mode::Adversarial),
            _ => Err(format!("unknown mode `{s}` (expected random or adversarial)")),
        }
    }
}

/// Planted sizes: explicit values of `n`, or multipliers `c` with `n = round(c·√N)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeGrid {
    Explicit(Vec<usize>),
    Multipliers(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub problem: Problem,
    pub mode: Mode,
    pub big_n: Vec<usize>,
    pub sizes: SizeGrid,
    /// Biclique aspect ratios: `M = ceil(y·N)`, `m = ceil(z·n)`.
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    /// Edge probabilities (random mode).
    pub p: Vec<f64>,
    /// Diversionary edge budgets and cap fractions (adversarial mode).
    pub r: Vec<usize>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Adversarial cells must pass the closed-form budget screen.
    pub screen: bool,
    pub trials: usize,
    pub base_seed: u64,
    pub workers: usize,
    pub record_timing: bool,
    pub solver: SolverConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            problem: Problem::Clique,
            mode: Mode::Random,
            big_n: vec![200],
            sizes: SizeGrid::Multipliers(vec![1.0, 2.0, 3.0, 4.0, 5.0]),
            y: vec![1.0],
            z: vec![1.0],
            p: vec![0.5],
            r: vec![0],
            alpha: vec![0.5],
            beta: vec![0.5],
            screen: false,
            trials: 20,
            base_seed: 0,
            workers: 1,
            record_timing: true,
            solver: SolverConfig::default(),
        }
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str, line: usize) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>().map_err(|_| Error::Parse {
                line,
                message: format!("bad value `{s}` for `{key}`"),
            })
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.trim().parse::<T>().map_err(|_| Error::Parse {
        line,
        message: format!("bad value `{}` for `{key}`", value.trim()),
    })
}

impl SweepConfig {
    /// Parses a flat `key=value` file; `#` starts a comment and list values
    /// are comma separated. Unset keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected key=value, found `{content}`"),
            })?;
            let key = key.trim();
            match key {
                "problem" => {
                    cfg.problem = value.trim().parse().map_err(|message| Error::Parse { line, message })?
                }
                "mode" => cfg.mode = value.trim().parse().map_err(|message| Error::Parse { line, message })?,
                "N" => cfg.big_n = parse_list(key, value, line)?,
                "n" => cfg.sizes = SizeGrid::Explicit(parse_list(key, value, line)?),
                "c" => cfg.sizes = SizeGrid::Multipliers(parse_list(key, value, line)?),
                "y" => cfg.y = parse_list(key, value, line)?,
                "z" => cfg.z = parse_list(key, value, line)?,
                "p" => cfg.p = parse_list(key, value, line)?,
                "r" => cfg.r = parse_list(key, value, line)?,
                "alpha" => cfg.alpha = parse_list(key, value, line)?,
                "beta" => cfg.beta = parse_list(key, value, line)?,
                "screen" => cfg.screen = parse_one(key, value, line)?,
                "trials" => cfg.trials = parse_one(key, value, line)?,
                "seed" => cfg.base_seed = parse_one(key, value, line)?,
                "workers" => cfg.workers = parse_one(key, value, line)?,
                "record_timing" => cfg.record_timing = parse_one(key, value, line)?,
                "max_iterations" => cfg.solver.max_iterations = parse_one(key, value, line)?,
                "primal_tolerance" => cfg.solver.primal_tolerance = parse_one(key, value, line)?,
                "dual_tolerance" => cfg.solver.dual_tolerance = parse_one(key, value, line)?,
                "step_parameter" => cfg.solver.step_parameter = parse_one(key, value, line)?,
                "rounding_threshold" => cfg.solver.rounding_threshold = parse_one(key, value, line)?,
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown key `{key}`"),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let sizes_empty = match &self.sizes {
            SizeGrid::Explicit(v) => v.is_empty(),
            SizeGrid::Multipliers(v) => v.is_empty(),
        };
        let mut empty = self.big_n.is_empty() || sizes_empty;
        match self.mode {
            Mode::Random => empty |= self.p.is_empty(),
            Mode::Adversarial => empty |= self.r.is_empty() || self.alpha.is_empty() || self.beta.is_empty(),
        }
        if self.problem == Problem::Biclique {
            empty |= self.y.is_empty() || self.z.is_empty();
        }
        if empty {
            return Err(Error::InvalidParameter("sweep grid has an empty axis".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter("workers must be at least 1".into()));
        }
        if let SizeGrid::Multipliers(cs) = &self.sizes {
            if let Some(c) = cs.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
                return Err(Error::InvalidParameter(format!("multiplier c = {c} must be positive")));
            }
        }
        self.solver.validate()
    }

    /// Grid cells in output order: N, then size, then aspect, then the
    /// model parameters, each axis in the order given.
    pub fn cells(&self) -> Vec<Cell> {
        let aspects: Vec<(f64, f64)> = match self.problem {
            Problem::Clique => vec![(1.0, 1.0)],
            Problem::Biclique => self.y.iter().flat_map(|&y| self.z.iter().map(move |&z| (y, z))).collect(),
        };
        let models: Vec<Model> = match self.mode {
            Mode::Random => self.p.iter().map(|&p| Model::Random { p }).collect(),
            Mode::Adversarial => self
                .r
                .iter()
                .flat_map(|&r| {
                    self.alpha.iter().flat_map(move |&alpha| {
                        self.beta.iter().map(move |&beta| Model::Adversarial { r, alpha, beta })
                    })
                })
                .collect(),
        };
        let mut cells = Vec::new();
        for &big_n in &self.big_n {
            let sizes: Vec<(usize, f64)> = match &self.sizes {
                SizeGrid::Explicit(ns) => ns.iter().map(|&n| (n, n as f64 / (big_n as f64).sqrt())).collect(),
                SizeGrid::Multipliers(cs) => cs
                    .iter()
                    .map(|&c| ((c * (big_n as f64).sqrt()).round() as usize, c))
                    .collect(),
            };
            for &(n, c) in &sizes {
                for &(y, z) in &aspects {
                    for &model in &models {
                        let (big_m, m) = match self.problem {
                            Problem::Clique => (None, None),
                            Problem::Biclique => (
                                Some((y * big_n as f64).ceil() as usize),
                                Some((z * n as f64).ceil() as usize),
                            ),
                        };
                        cells.push(Cell {
                            problem: self.problem,
                            big_n,
                            big_m,
                            n,
                            m,
                            c,
                            model,
                        });
                    }
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Model {
    Random { p: f64 },
    Adversarial { r: usize, alpha: f64, beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub problem: Problem,
    #[serde(rename = "N")]
    pub big_n: usize,
    #[serde(rename = "M")]
    pub big_m: Option<usize>,
    pub n: usize,
    pub m: Option<usize>,
    pub c: f64,
    pub model: Model,
}

impl Cell {
    fn generate(&self, seed: u64, screen: bool) -> Result<PlantedInstance> {
        match (self.problem, self.model) {
            (Problem::Clique, Model::Random { p }) => {
                gen_clique_random(&RandomModelParams::clique(self.big_n, self.n, p, seed))
            }
            (Problem::Biclique, Model::Random { p }) => gen_biclique_random(&RandomModelParams::biclique(
                self.big_m.unwrap_or(0),
                self.big_n,
                self.m.unwrap_or(0),
                self.n,
                p,
                seed,
            )),
            (problem, Model::Adversarial { r, alpha, beta }) => {
                let adv = AdversaryParams {
                    r,
                    alpha,
                    beta,
                    seed,
                    require_screen: screen,
                };
                match problem {
                    Problem::Clique => gen_clique_adversarial(self.n, self.big_n, &adv),
                    Problem::Biclique => gen_biclique_adversarial(
                        self.m.unwrap_or(0),
                        self.n,
                        self.big_m.unwrap_or(0),
                        self.big_n,
                        &adv,
                    ),
                }
            }
        }
    }

    fn gamma(&self) -> f64 {
        match self.model {
            Model::Random { p } => gamma_random(p),
            Model::Adversarial { .. } => GAMMA_ADVERSARIAL,
        }
    }
}

/// Outcome of a single trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub seed: u64,
    pub recovered: bool,
    pub cert_strict: bool,
    /// `‖W‖` when the certificate could be built.
    pub w_spectral: Option<f64>,
    pub iterations: usize,
    pub runtime_ms: f64,
    /// Set when generation or solving failed; the trial then counts as
    /// neither recovered nor certified.
    pub error: Option<String>,
}

fn recovered(candidate: Option<&Candidate>, inst: &PlantedInstance) -> bool {
    match (candidate, &inst.graph) {
        (Some(Candidate::Clique { vertices }), InstanceGraph::Clique(_)) => *vertices == inst.planted_left,
        (Some(Candidate::Biclique { left, right }), InstanceGraph::Biclique(_)) => {
            *left == inst.planted_left && Some(right) == inst.planted_right.as_ref()
        }
        _ => false,
    }
}

/// Runs one trial of `cell`; errors are folded into the outcome.
pub fn run_trial(cell: &Cell, seed: u64, screen: bool, solver: &SolverConfig) -> TrialOutcome {
    let mut out = TrialOutcome {
        seed,
        recovered: false,
        cert_strict: false,
        w_spectral: None,
        iterations: 0,
        runtime_ms: 0.0,
        error: None,
    };
    let inst = match cell.generate(seed, screen) {
        Ok(inst) => inst,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    // Infeasible certificates (saturated vertices) simply do not certify.
    if let Ok(cert) = build_certificate(&inst, cell.gamma()) {
        match verify(&cert, &inst, true) {
            Ok(report) => {
                out.cert_strict = report.overall;
                out.w_spectral = Some(report.diagnostics.w_spectral);
            }
            Err(e) => {
                out.error = Some(e.to_string());
                return out;
            }
        }
    }
    let start = Instant::now();
    let solved = match &inst.graph {
        InstanceGraph::Clique(g) => solve_clique_relaxation(g, solver),
        InstanceGraph::Biclique(g) => solve_biclique_relaxation(g, solver),
    };
    out.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    match solved {
        Ok(res) => {
            out.iterations = res.iterations;
            out.recovered = recovered(res.candidate.as_ref(), &inst);
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub cell: Cell,
    pub trials: usize,
    pub recovered_fraction: f64,
    pub cert_strict_fraction: f64,
    /// Mean over trials whose certificate was built; NaN when none was.
    #[serde(rename = "mean_W_spectral")]
    pub mean_w_spectral: f64,
    pub mean_iterations: f64,
    /// Zero when timing is not recorded.
    pub mean_runtime_ms: f64,
    pub failed_trials: usize,
    /// Trials with a strict certificate whose solution missed the planted set.
    pub strict_unrecovered: usize,
    /// First failure message in the cell, if any.
    pub first_error: Option<String>,
}

fn aggregate(cell: Cell, outcomes: &[TrialOutcome], record_timing: bool) -> SweepRow {
    let t = outcomes.len() as f64;
    let frac = |f: &dyn Fn(&TrialOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as f64 / t;
    let ws: Vec<f64> = outcomes.iter().filter_map(|o| o.w_spectral).collect();
    SweepRow {
        cell,
        trials: outcomes.len(),
        recovered_fraction: frac(&|o| o.recovered),
        cert_strict_fraction: frac(&|o| o.cert_strict),
        mean_w_spectral: if ws.is_empty() {
            f64::NAN
        } else {
            ws.iter().sum::<f64>() / ws.len() as f64
        },
        mean_iterations: outcomes.iter().map(|o| o.iterations as f64).sum::<f64>() / t,
        mean_runtime_ms: if record_timing {
            outcomes.iter().map(|o| o.runtime_ms).sum::<f64>() / t
        } else {
            0.0
        },
        failed_trials: outcomes.iter().filter(|o| o.error.is_some()).count(),
        strict_unrecovered: outcomes.iter().filter(|o| o.cert_strict && !o.recovered).count(),
        first_error: outcomes.iter().find_map(|o| o.error.clone()),
    }
}

/// One row per grid cell, in grid order. Trial `t` of every cell uses seed
/// `base_seed + t`; trials run on a pool of `workers` threads and are
/// collected in order, so the output does not depend on scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let cells = cfg.cells();
    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| (0..cfg.trials as u64).map(move |t| (c, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let outcomes: Vec<TrialOutcome> = pool.install(|| {
        jobs.par_iter()
            .map(|&(c, t)| run_trial(&cells[c], cfg.base_seed.wrapping_add(t), cfg.screen, &cfg.solver))
            .collect()
    });
    Ok(cells
        .iter()
        .zip(outcomes.chunks(cfg.trials))
        .map(|(cell, chunk)| aggregate(*cell, chunk, cfg.record_timing))
        .collect())
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let c = &row.cell;
        let (p, r, alpha, beta) = match c.model {
            Model::Random { p } => (Some(p), None, None, None),
            Model::Adversarial { r, alpha, beta } => (None, Some(r), Some(alpha), Some(beta)),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.problem.name(),
            c.big_n,
            opt(c.big_m),
            c.n,
            opt(c.m),
            opt(p),
            opt(r),
            opt(alpha),
            opt(beta),
            c.c,
            row.trials,
            row.recovered_fraction,
            row.cert_strict_fraction,
            row.mean_w_spectral,
            row.mean_iterations,
            row.mean_runtime_ms,
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaEstimate {
    /// Smallest multiplier whose cells all reach [`ALPHA_THRESHOLD`];
    /// `None` when no multiplier on the grid does.
    pub c: Option<f64>,
    pub trials_per_cell: usize,
    pub rows: Vec<SweepRow>,
}

/// Smallest `c` in the grid at which every cell with that multiplier
/// recovers the planted set in at least 95% of trials.
pub fn estimate_alpha(cfg: &SweepConfig) -> Result<AlphaEstimate> {
    if cfg.mode != Mode::Random {
        return Err(Error::InvalidParameter("estimate-alpha needs random mode".into()));
    }
    let SizeGrid::Multipliers(cs) = &cfg.sizes else {
        return Err(Error::InvalidParameter("estimate-alpha needs a grid of multipliers c".into()));
    };
    let rows = run_sweep(cfg)?;
    let mut sorted = cs.clone();
    sorted.sort_by(f64::total_cmp);
    let c = sorted.into_iter().find(|&c| {
        rows.iter()
            .filter(|r| r.cell.c == c)
            .all(|r| r.recovered_fraction >= ALPHA_THRESHOLD)
    });
    Ok(AlphaEstimate {
        c,
        trials_per_cell: cfg.trials,
        rows,
    })
}
