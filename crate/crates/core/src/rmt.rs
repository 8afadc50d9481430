//! Random-matrix facts behind the random-model analysis, checked
//! empirically: spectral norms of Ω matrices, Chernoff tails, the column
//! recentering `Ã`, and the five-part split of the random-case certificate.
//!
//! The Ω distribution takes the value 1 with probability `p` and
//! `−p/(1−p)` otherwise, so it has mean 0 and variance `p/(1−p)`.

use crate::certificate::{build_certificate, certified_spectral_norm, Certificate};
use crate::error::{Error, Result};
use crate::generators::rng_from_seed;
use crate::graph::{InstanceGraph, PlantedInstance};
use crate::matrix::DenseMatrix;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaParams {
    pub p: f64,
}

impl OmegaParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!("p = {p} not in (0, 1)")));
        }
        Ok(Self { p })
    }

    pub fn sigma_squared(&self) -> f64 {
        self.p / (1.0 - self.p)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma_squared().sqrt()
    }

    /// The value taken with probability `1 − p`.
    pub fn low(&self) -> f64 {
        -self.p / (1.0 - self.p)
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        if rng.random_bool(self.p) {
            1.0
        } else {
            self.low()
        }
    }
}

pub fn sample_omega(rows: usize, cols: usize, params: OmegaParams, seed: u64) -> DenseMatrix {
    let mut rng = rng_from_seed(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| params.draw(&mut rng))
}

/// Symmetric Ω matrix: the lower triangle (with diagonal) is i.i.d. and
/// mirrored.
pub fn sample_omega_symmetric(n: usize, params: OmegaParams, seed: u64) -> DenseMatrix {
    let mut rng = rng_from_seed(seed);
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = params.draw(&mut rng);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Number of entries equal to 1 in each column.
fn column_ones(a: &DenseMatrix) -> Vec<usize> {
    (0..a.cols())
        .map(|j| (0..a.rows()).filter(|&i| a[(i, j)] == 1.0).count())
        .collect()
}

/// The recentered matrix `Ã`: ones are kept and every other entry of
/// column `j` becomes `−n_j/(n − n_j)`, so each column sums to zero.
pub fn recenter_columns(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.rows();
    let ones = column_ones(a);
    if let Some(column) = ones.iter().position(|&c| c == n) {
        return Err(Error::SaturatedColumn { column });
    }
    Ok(DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        if a[(i, j)] == 1.0 {
            1.0
        } else {
            -(ones[j] as f64) / ((n - ones[j]) as f64)
        }
    }))
}

/// Compensated (Neumaier) sum, used where a sum is compared against a
/// tolerance near machine precision.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

/// Monte-Carlo samples of one statistic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub trials: usize,
    pub samples: Vec<f64>,
    pub bound: f64,
    pub violation_count: usize,
    pub seed: u64,
}

impl TrialReport {
    fn new(samples: Vec<f64>, bound: f64, seed: u64) -> Self {
        let violation_count = samples.iter().filter(|&&s| !(s <= bound)).count();
        Self {
            trials: samples.len(),
            samples,
            bound,
            violation_count,
            seed,
        }
    }

    pub fn max_sample(&self) -> f64 {
        self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_sample(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

const POWER_TOLERANCE: f64 = 1e-8;
const POWER_MAX_ITERATIONS: usize = 20_000;

/// Spectral norm by power iteration, with a dense fallback when it does not
/// settle.
fn sample_spectral_norm(a: &DenseMatrix) -> Result<f64> {
    let est = a.power_spectral_norm(POWER_TOLERANCE, POWER_MAX_ITERATIONS)?;
    if est.converged {
        Ok(est.value)
    } else {
        a.spectral_norm()
    }
}

fn empirical_max(samples: &[f64]) -> f64 {
    let m = samples.iter().copied().filter(|s| s.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    if m.is_finite() {
        m
    } else {
        0.0
    }
}

/// `‖A‖` for symmetric `n x n` Ω matrices against `3σ√n`. Trial `t` uses
/// seed `seed + t`.
pub fn check_furedi_komlos(n: usize, p: f64, trials: usize, seed: u64) -> Result<TrialReport> {
    let params = OmegaParams::new(p)?;
    let samples = (0..trials)
        .into_par_iter()
        .map(|t| sample_spectral_norm(&sample_omega_symmetric(n, params, seed.wrapping_add(t as u64))))
        .collect::<Result<Vec<_>>>()?;
    let bound = 3.0 * params.sigma() * (n as f64).sqrt();
    Ok(TrialReport::new(samples, bound, seed))
}

/// `‖A‖/√n` for `⌈yn⌉ x n` Ω matrices. The theorem only asserts some
/// constant; `bound` is the empirical maximum.
pub fn check_geman(n: usize, y: f64, p: f64, trials: usize, seed: u64) -> Result<TrialReport> {
    let params = OmegaParams::new(p)?;
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::InvalidParameter(format!("aspect ratio y = {y} must be positive")));
    }
    let rows = (y * n as f64).ceil() as usize;
    let samples = (0..trials)
        .into_par_iter()
        .map(|t| {
            let a = sample_omega(rows, n, params, seed.wrapping_add(t as u64));
            Ok(sample_spectral_norm(&a)? / (n as f64).sqrt())
        })
        .collect::<Result<Vec<_>>>()?;
    let bound = empirical_max(&samples);
    Ok(TrialReport::new(samples, bound, seed))
}

fn check_binomial(k: u64, p: f64) -> Result<()> {
    if k == 0 || !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("need k ≥ 1 and p in (0, 1], got k = {k}, p = {p}")));
    }
    Ok(())
}

/// `(e^δ / (1+δ)^(1+δ))^(pk)`, the bound on `P(S > (1+δ)pk)` for
/// `S ~ Binomial(k, p)`, evaluated as `exp(pk (δ − (1+δ) ln(1+δ)))`.
pub fn chernoff_bound(k: u64, p: f64, delta: f64) -> Result<f64> {
    check_binomial(k, p)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be positive")));
    }
    let exponent = p * k as f64 * (delta - (1.0 + delta) * delta.ln_1p());
    Ok(exponent.exp())
}

/// `2 exp(−a²/p)`, the bound on `P(|S − pk| > a√k)` for `a ∈ (0, p√k)`.
pub fn chernoff_sqrt_bound(k: u64, p: f64, a: f64) -> Result<f64> {
    check_binomial(k, p)?;
    let top = p * (k as f64).sqrt();
    if !(a > 0.0 && a < top) {
        return Err(Error::InvalidParameter(format!("a = {a} not in (0, {top})")));
    }
    Ok(2.0 * (-a * a / p).exp())
}

/// Fraction of `draws` binomial samples with `S > threshold`.
pub fn empirical_binomial_tail(k: u64, p: f64, threshold: f64, draws: usize, seed: u64) -> Result<f64> {
    check_binomial(k, p)?;
    let dist = Binomial::new(k, p).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = rng_from_seed(seed);
    let hits = (0..draws).filter(|_| dist.sample(&mut rng) as f64 > threshold).count();
    Ok(hits as f64 / draws as f64)
}

/// Fraction of draws with `|S − pk| > a√k`.
pub fn empirical_binomial_deviation(k: u64, p: f64, a: f64, draws: usize, seed: u64) -> Result<f64> {
    check_binomial(k, p)?;
    let dist = Binomial::new(k, p).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = rng_from_seed(seed);
    let (mean, width) = (p * k as f64, a * (k as f64).sqrt());
    let hits = (0..draws)
        .filter(|_| (dist.sample(&mut rng) as f64 - mean).abs() > width)
        .count();
    Ok(hits as f64 / draws as f64)
}

/// One recentering trial on an `n x big_n` Ω matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecenteringTrial {
    /// `‖A − Ã‖_F²` computed entrywise; infinite when a column saturates.
    pub direct: f64,
    /// `Σ_j (n_j − pn)² / ((1−p)² (n − n_j))`.
    pub per_column: f64,
    /// Largest `|Σ_i Ã_ij|`.
    pub max_column_sum: f64,
    pub saturated: bool,
}

/// Per-column closed form of `‖A − Ã‖_F²`.
pub fn recentering_formula(ones: &[usize], n: usize, p: f64) -> f64 {
    ones.iter()
        .map(|&nj| {
            let d = nj as f64 - p * n as f64;
            d * d / ((1.0 - p) * (1.0 - p) * (n - nj) as f64)
        })
        .sum()
}

pub fn recentering_trial(n: usize, big_n: usize, p: f64, seed: u64) -> Result<RecenteringTrial> {
    let params = OmegaParams::new(p)?;
    let a = sample_omega(n, big_n, params, seed);
    match recenter_columns(&a) {
        Err(Error::SaturatedColumn { .. }) => Ok(RecenteringTrial {
            direct: f64::INFINITY,
            per_column: f64::INFINITY,
            max_column_sum: f64::NAN,
            saturated: true,
        }),
        Err(e) => Err(e),
        Ok(at) => {
            let direct = a.sub(&at)?.as_slice().iter().map(|x| x * x).sum();
            let per_column = recentering_formula(&column_ones(&a), n, p);
            let max_column_sum = (0..big_n)
                .map(|j| compensated_sum((0..n).map(|i| at[(i, j)])).abs())
                .fold(0.0, f64::max);
            Ok(RecenteringTrial {
                direct,
                per_column,
                max_column_sum,
                saturated: false,
            })
        }
    }
}

/// Samples `‖A − Ã‖_F² / N`; saturated trials count as infinite samples.
/// `bound` is the empirical maximum over finite samples.
pub fn check_recentering_bound(n: usize, big_n: usize, p: f64, trials: usize, seed: u64) -> Result<TrialReport> {
    let samples = (0..trials)
        .into_par_iter()
        .map(|t| Ok(recentering_trial(n, big_n, p, seed.wrapping_add(t as u64))?.direct / big_n as f64))
        .collect::<Result<Vec<_>>>()?;
    let bound = empirical_max(&samples);
    Ok(TrialReport::new(samples, bound, seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartNorms {
    pub spectral: f64,
    pub frobenius: f64,
}

/// `W = W1 + … + W5` for a random-model certificate.
///
/// Clique: `W1` has i.i.d. two-point entries (`1/n` or `γ/n`), freshly drawn
/// on the planted block and on the outside diagonal; `W2` cancels it on the
/// planted block, `W3` on the outside diagonal, and `W4`, `W5` correct the
/// non-edges between `V*` and the rest (`W4 = W5ᵀ`).
///
/// Biclique: `W1` and `W2` as above with scale `sqrt(mn)`; `W3 = 0`;
/// `W4` corrects non-edges in `U* x (V−V*)` and `W5` those in `(U−U*) x V*`.
#[derive(Debug, Clone)]
pub struct WDecomposition {
    pub certificate: Certificate,
    pub parts: [DenseMatrix; 5],
    pub norms: [PartNorms; 5],
    /// `max |W − Σ W_k|`.
    pub reconstruction_error: f64,
}

/// Splits the certificate built with `gamma` (which must be `−p/(1−p)` for
/// some `p ∈ [0, 1)`, i.e. `gamma ≤ 0`). The random draws use `seed`.
pub fn decompose_random_w(inst: &PlantedInstance, gamma: f64, seed: u64) -> Result<WDecomposition> {
    if !(gamma <= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must be a nonpositive number")));
    }
    let p = -gamma / (1.0 - gamma);
    let cert = build_certificate(inst, gamma)?;
    let w = &cert.w;
    let (rows, cols) = w.shape();
    let s = cert.scale;
    let (in_u, in_v) = (inst.planted_left.mask(), inst.planted_right.as_ref().unwrap_or(&inst.planted_left).mask());
    let mut rng = rng_from_seed(seed);
    let mut draw = || if rng.random_bool(p) { 1.0 / s } else { gamma / s };

    let mut w1 = DenseMatrix::zeros(rows, cols);
    let mut w2 = DenseMatrix::zeros(rows, cols);
    let mut w3 = DenseMatrix::zeros(rows, cols);
    let mut w4 = DenseMatrix::zeros(rows, cols);
    let mut w5 = DenseMatrix::zeros(rows, cols);
    match &inst.graph {
        InstanceGraph::Clique(g) => {
            for i in 0..rows {
                for j in 0..=i {
                    let (a, b) = (in_u[i], in_u[j]);
                    let edge = i == j || g.has_edge(i, j);
                    let v1 = if a && b {
                        draw()
                    } else if i == j {
                        draw()
                    } else if edge {
                        w[(i, j)]
                    } else {
                        gamma / s
                    };
                    w1[(i, j)] = v1;
                    w1[(j, i)] = v1;
                    if a && b {
                        w2[(i, j)] = -v1;
                        w2[(j, i)] = -v1;
                    } else if i == j {
                        w3[(i, i)] = w[(i, i)] - v1;
                    } else if !edge && (a || b) {
                        // Lower triangle: i > j. Put (row in V*, column outside) into W4.
                        let (r, c) = if a { (i, j) } else { (j, i) };
                        w4[(r, c)] = w[(r, c)] - v1;
                        w5[(c, r)] = w[(c, r)] - v1;
                    }
                }
            }
        }
        InstanceGraph::Biclique(g) => {
            for i in 0..rows {
                for j in 0..cols {
                    let v1 = if in_u[i] && in_v[j] {
                        draw()
                    } else if g.has_edge(i, j) {
                        1.0 / s
                    } else {
                        gamma / s
                    };
                    w1[(i, j)] = v1;
                    match (in_u[i], in_v[j], g.has_edge(i, j)) {
                        (true, true, _) => w2[(i, j)] = -v1,
                        (true, false, false) => w4[(i, j)] = w[(i, j)] - v1,
                        (false, true, false) => w5[(i, j)] = w[(i, j)] - v1,
                        _ => {}
                    }
                }
            }
        }
    }

    let parts = [w1, w2, w3, w4, w5];
    let mut reconstruction_error: f64 = 0.0;
    for k in 0..rows * cols {
        let total: f64 = parts.iter().map(|m| m.as_slice()[k]).sum();
        reconstruction_error = reconstruction_error.max((total - w.as_slice()[k]).abs());
    }
    if reconstruction_error > 1e-12 {
        return Err(Error::Numerical(format!(
            "certificate split does not reconstruct W (error {reconstruction_error:e})"
        )));
    }
    let mut norms = [PartNorms {
        spectral: 0.0,
        frobenius: 0.0,
    }; 5];
    for (slot, part) in norms.iter_mut().zip(&parts) {
        *slot = PartNorms {
            spectral: certified_spectral_norm(part)?.0,
            frobenius: part.frobenius_norm(),
        };
    }
    Ok(WDecomposition {
        certificate: cert,
        parts,
        norms,
        reconstruction_error,
    })
}

/// `3 sqrt(p/(1−p)) sqrt(N) / n`, the bound on `‖W1‖` for a clique.
pub fn w1_clique_bound(big_n: usize, n: usize, p: f64) -> f64 {
    3.0 * (p / (1.0 - p)).sqrt() * (big_n as f64).sqrt() / n as f64
}
