//! Explicit dual certificates for planted cliques and bicliques.
//!
//! For a planted pair `(U*, V*)` with characteristic vectors `ū`, `v̄` and
//! `s = sqrt(|U*| |V*|)` (`s = n` for a clique), a certificate is a triple
//! `(W, λ, μ)` with
//!
//! ```text
//! ū v̄ᵀ / s + W = μ e eᵀ + Σ_{(i,j) ∉ E} λ_ij e_i e_jᵀ,   W v̄ = 0,   ūᵀ W = 0.
//! ```
//!
//! `‖W‖ ≤ 1` makes `ū v̄ᵀ` optimal for the relaxation; `‖W‖ < 1` together
//! with `μ > 0` makes it the unique optimum.
//!
//! Non-edge entries with both endpoints outside the planted sets carry
//! `W = γ/s`, `λ = (γ − 1)/s`. With `γ = −p/(1−p)` these entries have the
//! same law as the centred random entries the norm analysis relies on;
//! `γ = 0` is the adversarial choice.

use crate::error::{Error, Result, Saturation, Side};
use crate::graph::{BipartiteGraph, Graph, InstanceGraph, PlantedInstance, VertexSet};
use crate::matrix::{thin_svd, DenseMatrix};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use std::collections::BTreeMap;

/// `γ` for the adversarial model.
pub const GAMMA_ADVERSARIAL: f64 = 0.0;

/// `γ` for the random model with edge probability `p`.
pub fn gamma_random(p: f64) -> f64 {
    -p / (1.0 - p)
}

/// Margin used by strict verification for `‖W‖ < 1` and `μ > 0`.
pub const STRICT_MARGIN: f64 = 1e-8;
/// Elementwise tolerance of the KKT identity.
pub const KKT_TOLERANCE: f64 = 1e-10;
/// Null-space residuals must be at most this times the larger planted size.
pub const NULL_TOLERANCE: f64 = 1e-12;

const POWER_TOLERANCE: f64 = 1e-10;
const POWER_MAX_ITERATIONS: usize = 3000;
/// Power-iteration estimates at or above this are recomputed by SVD.
const SVD_FALLBACK_ABOVE: f64 = 0.95;

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub w: DenseMatrix,
    /// Multipliers on the non-edges (ordered pairs; the clique diagonal is
    /// never a non-edge).
    pub lambda: BTreeMap<(usize, usize), f64>,
    pub mu: f64,
    pub gamma: f64,
    pub ubar: Vec<f64>,
    pub vbar: Vec<f64>,
    /// `sqrt(mn)`, or `n` for a clique.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub w_spectral: f64,
    pub w_frobenius: f64,
    /// Max elementwise violation of the KKT identity.
    pub kkt_residual: f64,
    /// `max |ūᵀ W|`.
    pub left_null_residual: f64,
    /// `max |W v̄|`.
    pub right_null_residual: f64,
    pub spectral_method: SpectralMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralMethod {
    Power,
    Svd,
}

/// Spectral norm by power iteration on `WᵀW`, recomputed by SVD when the
/// estimate is near 1 or the iteration did not settle.
pub fn certified_spectral_norm(w: &DenseMatrix) -> Result<(f64, SpectralMethod)> {
    let est = w.power_spectral_norm(POWER_TOLERANCE, POWER_MAX_ITERATIONS)?;
    if est.converged && est.value < SVD_FALLBACK_ABOVE {
        Ok((est.value, SpectralMethod::Power))
    } else {
        Ok((w.spectral_norm()?, SpectralMethod::Svd))
    }
}

fn planted_pair(inst: &PlantedInstance) -> (&VertexSet, &VertexSet) {
    match &inst.planted_right {
        Some(r) => (&inst.planted_left, r),
        None => (&inst.planted_left, &inst.planted_left),
    }
}

/// Whether `(i, j)` is a non-edge of the instance's constraint pattern.
fn is_non_edge(graph: &InstanceGraph, i: usize, j: usize) -> bool {
    match graph {
        InstanceGraph::Clique(g) => i != j && !g.has_edge(i, j),
        InstanceGraph::Biclique(g) => !g.has_edge(i, j),
    }
}

impl Certificate {
    /// Recomputes every diagnostic from `W`, `λ`, `μ` and the instance.
    pub fn diagnostics(&self, inst: &PlantedInstance) -> Result<Diagnostics> {
        let (rows, cols) = self.w.shape();
        let (ustar, vstar) = planted_pair(inst);
        if ustar.universe() != rows || vstar.universe() != cols {
            return Err(Error::DimensionMismatch("certificate does not match the instance".into()));
        }
        let ubar = ustar.characteristic_vector();
        let vbar = vstar.characteristic_vector();
        let right = self.w.matvec(&vbar);
        let left = self.w.tmatvec(&ubar);
        let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));

        let mut kkt: f64 = 0.0;
        for i in 0..rows {
            for j in 0..cols {
                let lhs = ubar[i] * vbar[j] / self.scale + self.w[(i, j)];
                let mut rhs = self.mu;
                if is_non_edge(&inst.graph, i, j) {
                    rhs += self.lambda.get(&(i, j)).copied().unwrap_or(f64::NAN);
                }
                let r = (lhs - rhs).abs();
                kkt = if r.is_nan() { f64::INFINITY } else { kkt.max(r) };
            }
        }
        let (w_spectral, spectral_method) = certified_spectral_norm(&self.w)?;
        Ok(Diagnostics {
            w_spectral,
            w_frobenius: self.w.frobenius_norm(),
            kkt_residual: kkt,
            left_null_residual: max_abs(&left),
            right_null_residual: max_abs(&right),
            spectral_method,
        })
    }
}

fn check_nonempty(s: &VertexSet, what: &str) -> Result<()> {
    if s.is_empty() {
        return Err(Error::InvalidParameter(format!("planted {what} set is empty")));
    }
    Ok(())
}

/// Clique certificate with `μ = 1/n`. Fails with `CertificateInfeasible`
/// listing every outside vertex adjacent to all of `V*`.
pub fn build_clique_certificate(g: &Graph, vstar: &VertexSet, gamma: f64) -> Result<Certificate> {
    check_nonempty(vstar, "clique")?;
    let big_n = g.num_vertices();
    if vstar.universe() != big_n {
        return Err(Error::DimensionMismatch("planted set does not match the graph".into()));
    }
    if !crate::graph::is_clique(g, vstar) {
        return Err(Error::InvalidParameter("planted set is not a clique".into()));
    }
    let n = vstar.len();
    let nf = n as f64;
    let inside = vstar.mask();
    // p[j]: planted neighbours of j (only used for j outside V*).
    let mut p = vec![0usize; big_n];
    for &(i, j) in g.edges() {
        if inside[i] && !inside[j] {
            p[j] += 1;
        }
        if inside[j] && !inside[i] {
            p[i] += 1;
        }
    }
    let saturated: Vec<Saturation> = (0..big_n)
        .filter(|&j| !inside[j] && p[j] == n)
        .map(|vertex| Saturation {
            side: Side::Left,
            vertex,
        })
        .collect();
    if !saturated.is_empty() {
        return Err(Error::CertificateInfeasible { saturated });
    }

    let correction = |j: usize| -(p[j] as f64) / (nf * (n - p[j]) as f64);
    let mut w = DenseMatrix::zeros(big_n, big_n);
    let mut lambda = BTreeMap::new();
    for i in 0..big_n {
        for j in 0..big_n {
            let edge = i == j || g.has_edge(i, j);
            let value = match (inside[i], inside[j], edge) {
                (true, true, _) => 0.0,
                (_, _, true) => 1.0 / nf,
                (false, false, false) => {
                    lambda.insert((i, j), (gamma - 1.0) / nf);
                    gamma / nf
                }
                (true, false, false) => {
                    let v = correction(j);
                    lambda.insert((i, j), v - 1.0 / nf);
                    v
                }
                (false, true, false) => {
                    let v = correction(i);
                    lambda.insert((i, j), v - 1.0 / nf);
                    v
                }
            };
            w[(i, j)] = value;
        }
    }
    let vbar = vstar.characteristic_vector();
    Ok(Certificate {
        w,
        lambda,
        mu: 1.0 / nf,
        gamma,
        ubar: vbar.clone(),
        vbar,
        scale: nf,
    })
}

/// Biclique certificate with `μ = 1/sqrt(mn)`. Saturated left vertices
/// (`p_i = n`) and right vertices (`q_j = m`) are reported together.
pub fn build_biclique_certificate(
    g: &BipartiteGraph,
    ustar: &VertexSet,
    vstar: &VertexSet,
    gamma: f64,
) -> Result<Certificate> {
    check_nonempty(ustar, "left")?;
    check_nonempty(vstar, "right")?;
    let deg = crate::graph::biclique_degrees(g, ustar, vstar)?;
    if !crate::graph::is_biclique(g, ustar, vstar) {
        return Err(Error::InvalidParameter("planted sets do not form a biclique".into()));
    }
    let (big_m, big_n) = (g.left_count(), g.right_count());
    let (m, n) = (ustar.len(), vstar.len());
    let s = ((m * n) as f64).sqrt();
    let (in_u, in_v) = (ustar.mask(), vstar.mask());

    let mut saturated: Vec<Saturation> = (0..big_m)
        .filter(|&i| !in_u[i] && deg.p[i] == n)
        .map(|vertex| Saturation {
            side: Side::Left,
            vertex,
        })
        .collect();
    saturated.extend((0..big_n).filter(|&j| !in_v[j] && deg.q[j] == m).map(|vertex| Saturation {
        side: Side::Right,
        vertex,
    }));
    if !saturated.is_empty() {
        return Err(Error::CertificateInfeasible { saturated });
    }

    let mut w = DenseMatrix::zeros(big_m, big_n);
    let mut lambda = BTreeMap::new();
    for i in 0..big_m {
        for j in 0..big_n {
            let value = match (in_u[i], in_v[j], g.has_edge(i, j)) {
                (true, true, _) => 0.0,
                (_, _, true) => 1.0 / s,
                (false, false, false) => {
                    lambda.insert((i, j), (gamma - 1.0) / s);
                    gamma / s
                }
                (false, true, false) => {
                    let v = -(deg.p[i] as f64) / ((n - deg.p[i]) as f64 * s);
                    lambda.insert((i, j), v - 1.0 / s);
                    v
                }
                (true, false, false) => {
                    let v = -(deg.q[j] as f64) / ((m - deg.q[j]) as f64 * s);
                    lambda.insert((i, j), v - 1.0 / s);
                    v
                }
            };
            w[(i, j)] = value;
        }
    }
    Ok(Certificate {
        w,
        lambda,
        mu: 1.0 / s,
        gamma,
        ubar: ustar.characteristic_vector(),
        vbar: vstar.characteristic_vector(),
        scale: s,
    })
}

/// Builds the certificate matching the instance kind.
pub fn build_certificate(inst: &PlantedInstance, gamma: f64) -> Result<Certificate> {
    match &inst.graph {
        InstanceGraph::Clique(g) => build_clique_certificate(g, &inst.planted_left, gamma),
        InstanceGraph::Biclique(g) => {
            let (_, l, r) = inst.as_biclique().expect("biclique instance has a right set");
            build_biclique_certificate(g, l, r, gamma)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub strict: bool,
    pub null_space_ok: bool,
    pub norm_ok: bool,
    pub mu_positive: bool,
    pub kkt_identity_ok: bool,
    pub overall: bool,
    pub mu: f64,
    pub diagnostics: Diagnostics,
}

/// Checks the certificate against the instance. Non-strict mode asks for
/// `‖W‖ ≤ 1` and `μ ≥ 0`; strict mode for `‖W‖ < 1 − 1e-8` and `μ > 1e-8`.
pub fn verify(cert: &Certificate, inst: &PlantedInstance, strict: bool) -> Result<VerificationReport> {
    let d = cert.diagnostics(inst)?;
    let (ustar, vstar) = planted_pair(inst);
    let size = ustar.len().max(vstar.len()) as f64;
    let null_space_ok = d.left_null_residual.max(d.right_null_residual) <= NULL_TOLERANCE * size;
    let (norm_ok, mu_positive) = if strict {
        (d.w_spectral < 1.0 - STRICT_MARGIN, cert.mu > STRICT_MARGIN)
    } else {
        (d.w_spectral <= 1.0, cert.mu >= 0.0)
    };
    let kkt_identity_ok = d.kkt_residual <= KKT_TOLERANCE;
    Ok(VerificationReport {
        strict,
        null_space_ok,
        norm_ok,
        mu_positive,
        kkt_identity_ok,
        overall: null_space_ok && norm_ok && mu_positive && kkt_identity_ok,
        mu: cert.mu,
        diagnostics: d,
    })
}

/// Squared Frobenius norms of the three off-planted blocks of a biclique
/// certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockNorms {
    /// `‖W(U−U*, V−V*)‖_F²`
    pub outside_sq: f64,
    /// `‖W(U*, V−V*)‖_F²`
    pub planted_left_sq: f64,
    /// `‖W(U−U*, V*)‖_F²`
    pub planted_right_sq: f64,
}

impl BlockNorms {
    /// The adversarial bounds `r/mn`, `r/((1−α)mn)`, `r/((1−β)mn)` for the
    /// three blocks, in field order.
    pub fn adversarial_bounds(m: usize, n: usize, r: usize, alpha: f64, beta: f64) -> [f64; 3] {
        let base = r as f64 / (m * n) as f64;
        [base, base / (1.0 - alpha), base / (1.0 - beta)]
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.outside_sq, self.planted_left_sq, self.planted_right_sq]
    }
}

pub fn block_norms(cert: &Certificate, ustar: &VertexSet, vstar: &VertexSet) -> BlockNorms {
    let (in_u, in_v) = (ustar.mask(), vstar.mask());
    let mut b = BlockNorms {
        outside_sq: 0.0,
        planted_left_sq: 0.0,
        planted_right_sq: 0.0,
    };
    for i in 0..cert.w.rows() {
        for j in 0..cert.w.cols() {
            let v = cert.w[(i, j)] * cert.w[(i, j)];
            match (in_u[i], in_v[j]) {
                (false, false) => b.outside_sq += v,
                (true, false) => b.planted_left_sq += v,
                (false, true) => b.planted_right_sq += v,
                (true, true) => {}
            }
        }
    }
    b
}

/// Screens an adversarial clique instance by building the `γ = 0`
/// certificate and testing `‖W‖_F < 1`, which implies `‖W‖ < 1`.
pub fn clique_adversarial_screen(g: &Graph, vstar: &VertexSet) -> Result<bool> {
    match build_clique_certificate(g, vstar, GAMMA_ADVERSARIAL) {
        Ok(c) => Ok(c.w.frobenius_norm() < 1.0),
        Err(Error::CertificateInfeasible { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Orthogonal split `Z = Z1 + … + Z5` with respect to a planted pair:
/// `Z5 = α ū v̄ᵀ`; `Z1` has `Z1 v̄ = 0`, `ūᵀ Z1 = 0`; `Z2 = x₂ v̄ᵀ` with `x₂`
/// outside `U*`; `Z3 = ū y₂ᵀ` with `y₂` outside `V*`; `Z4` lives on
/// `U* × V*` with zero entry sum.
#[derive(Debug, Clone)]
pub struct SubspaceParts {
    pub z1: DenseMatrix,
    pub z2: DenseMatrix,
    pub z3: DenseMatrix,
    pub z4: DenseMatrix,
    pub z5: DenseMatrix,
}

impl SubspaceParts {
    pub fn parts(&self) -> [&DenseMatrix; 5] {
        [&self.z1, &self.z2, &self.z3, &self.z4, &self.z5]
    }
}

pub fn subspace_decompose(z: &DenseMatrix, ustar: &VertexSet, vstar: &VertexSet) -> Result<SubspaceParts> {
    check_nonempty(ustar, "left")?;
    check_nonempty(vstar, "right")?;
    let (rows, cols) = z.shape();
    if ustar.universe() != rows || vstar.universe() != cols {
        return Err(Error::DimensionMismatch("planted sets do not match the matrix".into()));
    }
    let ubar = ustar.characteristic_vector();
    let vbar = vstar.characteristic_vector();
    let (m, n) = (ustar.len() as f64, vstar.len() as f64);

    let zv = z.matvec(&vbar);
    let alpha = ubar.iter().zip(&zv).map(|(a, b)| a * b).sum::<f64>() / (m * n);
    let z5 = DenseMatrix::outer(&ubar, &vbar).scaled(alpha);
    let zdot = z.sub(&z5)?;

    let x: Vec<f64> = zdot.matvec(&vbar).iter().map(|v| v / n).collect();
    let y: Vec<f64> = zdot.tmatvec(&ubar).iter().map(|v| v / m).collect();
    let (x1, x2) = split(&x, &ustar.mask());
    let (y1, y2) = split(&y, &vstar.mask());

    let z2 = DenseMatrix::outer(&x2, &vbar);
    let z3 = DenseMatrix::outer(&ubar, &y2);
    let mut z4 = DenseMatrix::outer(&x1, &vbar);
    z4.add_outer(1.0, &ubar, &y1);
    let mut z1 = zdot;
    z1.add_outer(-1.0, &x, &vbar);
    z1.add_outer(-1.0, &ubar, &y);
    Ok(SubspaceParts { z1, z2, z3, z4, z5 })
}

fn split(v: &[f64], inside: &[bool]) -> (Vec<f64>, Vec<f64>) {
    let a = v.iter().zip(inside).map(|(x, &b)| if b { *x } else { 0.0 }).collect();
    let b = v.iter().zip(inside).map(|(x, &b)| if b { 0.0 } else { *x }).collect();
    (a, b)
}

/// Outcome of [`subgradient_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubgradientReport {
    pub trials: usize,
    pub violations: usize,
    /// Smallest `‖Y‖_* − ‖X*‖_* − φ•(Y − X*)` over the samples.
    pub min_slack: f64,
}

impl SubgradientReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Samples `Y` around and away from `X*` and tests the subgradient
/// inequality `‖Y‖_* − ‖X*‖_* ≥ φ•(Y − X*)`, up to a rounding allowance of
/// `1e-10` times the size of the terms.
pub fn subgradient_check<R: Rng>(
    xstar: &DenseMatrix,
    phi: &DenseMatrix,
    trials: usize,
    rng: &mut R,
) -> Result<SubgradientReport> {
    if xstar.shape() != phi.shape() {
        return Err(Error::DimensionMismatch("X* and φ differ in shape".into()));
    }
    let (rows, cols) = xstar.shape();
    let base = xstar.nuclear_norm()?;
    let mut report = SubgradientReport {
        trials,
        violations: 0,
        min_slack: f64::INFINITY,
    };
    for t in 0..trials {
        let noise = DenseMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng));
        // Alternate between perturbations of X*, rescalings, and unrelated matrices.
        let y = match t % 3 {
            0 => {
                let eps = 10f64.powf(rng.random_range(-4.0..1.0));
                xstar.add(&noise.scaled(eps))?
            }
            1 => xstar.scaled(rng.random_range(-2.0..3.0)).add(&noise.scaled(0.1))?,
            _ => noise,
        };
        let diff = y.sub(xstar)?;
        let lhs = y.nuclear_norm()? - base;
        let rhs = phi.inner(&diff)?;
        let slack = lhs - rhs;
        let allowance = 1e-10 * (1.0 + lhs.abs() + rhs.abs());
        if slack < -allowance {
            report.violations += 1;
        }
        report.min_slack = report.min_slack.min(slack);
    }
    Ok(report)
}

/// `ū v̄ᵀ / s + W`, the subgradient the certificate exhibits at `ū v̄ᵀ`.
pub fn subgradient_matrix(cert: &Certificate) -> DenseMatrix {
    let mut phi = cert.w.clone();
    phi.add_outer(1.0 / cert.scale, &cert.ubar, &cert.vbar);
    phi
}

/// Top singular value of `W` by dense SVD; used where an exact value is
/// wanted regardless of its size.
pub fn exact_spectral_norm(w: &DenseMatrix) -> Result<f64> {
    Ok(thin_svd(w)?.s.first().copied().unwrap_or(0.0))
}
