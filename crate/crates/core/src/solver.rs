//! Nuclear-norm relaxations of the planted clique and biclique problems.
//!
//! Both problems have the form
//!
//! ```text
//! minimize ‖X‖_*  subject to  X_ij = 0 off the allowed pattern,  Σ X_ij ≥ 1
//! ```
//!
//! and are solved by ADMM on the split `X = Z`: `X` takes the nuclear-norm
//! prox (singular value soft-thresholding), `Z` the exact projection onto the
//! constraint set, and `U` is the scaled dual. Internally the sum bound is
//! `s = sqrt(rows * cols)`, which keeps the singular values of the iterates
//! at a scale where a unit step works; the result is divided by `s`.
//!
//! The prox only needs the singular triplets above the threshold. Once the
//! iterates are low rank, those come from a warm-started Lanczos run instead
//! of a dense decomposition. A convergence claim is only accepted on an
//! iteration that used the dense decomposition.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph, VertexSet};
use crate::matrix::lanczos::{eigenpairs_beyond, LanczosOptions};
use crate::matrix::{symmetric_eigen, thin_svd, weighted_outer_sum, DenseMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    pub primal_tolerance: f64,
    pub dual_tolerance: f64,
    /// ADMM penalty `rho`; the prox threshold is `1 / rho`.
    pub step_parameter: f64,
    pub rounding_threshold: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            primal_tolerance: 1e-6,
            dual_tolerance: 1e-6,
            step_parameter: 1.0,
            rounding_threshold: 0.5,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
        }
        for (name, v) in [
            ("primal_tolerance", self.primal_tolerance),
            ("dual_tolerance", self.dual_tolerance),
            ("step_parameter", self.step_parameter),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.rounding_threshold > 0.0 && self.rounding_threshold < 1.0) {
            return Err(Error::InvalidParameter("rounding_threshold must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Candidate {
    Clique { vertices: VertexSet },
    Biclique { left: VertexSet, right: VertexSet },
}

impl Candidate {
    pub fn clique_set(&self) -> Option<&VertexSet> {
        match self {
            Candidate::Clique { vertices } => Some(vertices),
            Candidate::Biclique { .. } => None,
        }
    }

    pub fn biclique_sets(&self) -> Option<(&VertexSet, &VertexSet)> {
        match self {
            Candidate::Biclique { left, right } => Some((left, right)),
            Candidate::Clique { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    /// Solution of the homogenized problem (`Σ X_ij ≥ 1`).
    pub x: DenseMatrix,
    /// `x` scaled so that its largest entry is 1.
    pub x_rescaled: DenseMatrix,
    pub converged: bool,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// `None` when the top singular value is (nearly) repeated.
    pub candidate: Option<Candidate>,
    /// `σ₂ / σ₁` of `x`; 1 for the zero matrix.
    pub rank_one_gap: f64,
    /// `‖x‖_*`.
    pub objective: f64,
    /// Iterations whose prox used a dense decomposition.
    pub dense_steps: usize,
}

/// Gap at or above which the top singular value counts as repeated.
pub const DEGENERATE_GAP: f64 = 0.99;

/// Nuclear-norm proximal map `U max(Σ - τ, 0) Vᵀ`.
pub fn svt(a: &DenseMatrix, tau: f64) -> Result<DenseMatrix> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidParameter(format!("threshold {tau} must be nonnegative")));
    }
    let d = thin_svd(a)?;
    let mut out = DenseMatrix::zeros(a.rows(), a.cols());
    for (k, &s) in d.s.iter().enumerate() {
        if s > tau {
            out.add_outer(s - tau, &d.u.column(k), &d.v.column(k));
        }
    }
    Ok(out)
}

/// [`svt`] for symmetric input through the eigendecomposition: singular
/// values are `|λ|` and the sign moves into the shrunken coefficient.
pub fn svt_symmetric(a: &DenseMatrix, tau: f64) -> Result<DenseMatrix> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidParameter(format!("threshold {tau} must be nonnegative")));
    }
    let e = symmetric_eigen(a)?;
    let mut out = DenseMatrix::zeros(a.rows(), a.cols());
    for (k, &l) in e.values.iter().enumerate() {
        if l.abs() > tau {
            let q = e.vectors.column(k);
            out.add_outer(l - tau.copysign(l), &q, &q);
        }
    }
    Ok(out)
}

/// Zero pattern plus the homogenized sum bound.
struct Constraint {
    allowed: Vec<bool>,
    count: usize,
    bound: f64,
}

impl Constraint {
    fn project(&self, y: &mut DenseMatrix) {
        let mut total = 0.0;
        for (v, &ok) in y.as_mut_slice().iter_mut().zip(&self.allowed) {
            if ok {
                total += *v;
            } else {
                *v = 0.0;
            }
        }
        if total < self.bound {
            let shift = (self.bound - total) / self.count as f64;
            for (v, &ok) in y.as_mut_slice().iter_mut().zip(&self.allowed) {
                if ok {
                    *v += shift;
                }
            }
        }
    }
}

/// Largest rank for which the prox tries the Lanczos path.
const PARTIAL_RANK_LIMIT: usize = 12;

struct Prox {
    symmetric: bool,
    /// Warm-start vectors: eigenvectors (symmetric) or singular vectors of
    /// the smaller side (general).
    warm: Vec<Vec<f64>>,
    rng: ChaCha8Rng,
}

impl Prox {
    fn new(symmetric: bool) -> Self {
        Self {
            symmetric,
            warm: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(0x5eed),
        }
    }

    /// Returns the prox and whether the dense path was used.
    fn apply(&mut self, a: &DenseMatrix, tau: f64, dense: bool) -> Result<(DenseMatrix, bool)> {
        if !dense && self.warm.len() <= PARTIAL_RANK_LIMIT {
            if let Some(x) = self.partial(a, tau) {
                return Ok((x, false));
            }
        }
        let x = if self.symmetric {
            let e = symmetric_eigen(a)?;
            let (mut vecs, mut weights) = (Vec::new(), Vec::new());
            for (k, &l) in e.values.iter().enumerate() {
                if l.abs() > tau {
                    vecs.push(e.vectors.column(k));
                    weights.push(l - tau.copysign(l));
                }
            }
            let out = weighted_outer_sum(a.rows(), a.cols(), &vecs, &weights, &vecs);
            self.warm = vecs;
            // Restore exact symmetry lost to the product's summation order.
            let t = out.transpose();
            out.add(&t)?.scaled(0.5)
        } else {
            let d = thin_svd(a)?;
            let (mut us, mut vs, mut weights) = (Vec::new(), Vec::new(), Vec::new());
            for (k, &s) in d.s.iter().enumerate() {
                if s > tau {
                    us.push(d.u.column(k));
                    vs.push(d.v.column(k));
                    weights.push(s - tau);
                }
            }
            let out = weighted_outer_sum(a.rows(), a.cols(), &us, &weights, &vs);
            self.warm = if a.cols() <= a.rows() { vs } else { us };
            out
        };
        Ok((x, true))
    }

    fn start_vector(&self, dim: usize) -> Vec<f64> {
        let mut start = vec![0.0; dim];
        if self.warm.is_empty() {
            start.iter_mut().for_each(|v| *v = 1.0);
        }
        for w in &self.warm {
            start.iter_mut().zip(w).for_each(|(s, x)| *s += x);
        }
        start
    }

    fn partial(&mut self, a: &DenseMatrix, tau: f64) -> Option<DenseMatrix> {
        let (rows, cols) = a.shape();
        let mut out = DenseMatrix::zeros(rows, cols);
        if self.symmetric {
            let opts = LanczosOptions {
                threshold: tau,
                two_sided: true,
                max_steps: (rows / 4).clamp(16, 80),
                ..Default::default()
            };
            let start = self.start_vector(rows);
            let pairs = eigenpairs_beyond(|x, y| a.matvec_into(x, y), rows, &start, &opts, &mut self.rng)?;
            for p in &pairs {
                out.add_outer(p.value - tau.copysign(p.value), &p.vector, &p.vector);
            }
            if !pairs.is_empty() {
                self.warm = pairs.into_iter().map(|p| p.vector).collect();
            }
        } else {
            let right_side = cols <= rows;
            let (dim, other) = if right_side { (cols, rows) } else { (rows, cols) };
            let opts = LanczosOptions {
                threshold: tau * tau,
                two_sided: false,
                max_steps: (dim / 4).clamp(16, 80),
                ..Default::default()
            };
            let start = self.start_vector(dim);
            let mut tmp = vec![0.0; other];
            let gram = |x: &[f64], y: &mut [f64]| {
                if right_side {
                    a.matvec_into(x, &mut tmp);
                    a.tmatvec_into(&tmp, y);
                } else {
                    a.tmatvec_into(x, &mut tmp);
                    a.matvec_into(&tmp, y);
                }
            };
            let pairs = eigenpairs_beyond(gram, dim, &start, &opts, &mut self.rng)?;
            for p in &pairs {
                let sigma = p.value.sqrt();
                let mut w = if right_side { a.matvec(&p.vector) } else { a.tmatvec(&p.vector) };
                w.iter_mut().for_each(|x| *x /= sigma);
                let c = sigma - tau;
                if right_side {
                    out.add_outer(c, &w, &p.vector);
                } else {
                    out.add_outer(c, &p.vector, &w);
                }
            }
            if !pairs.is_empty() {
                self.warm = pairs.into_iter().map(|p| p.vector).collect();
            }
        }
        Some(out)
    }
}

struct Iterate {
    z: DenseMatrix,
    converged: bool,
    iterations: usize,
    primal: f64,
    dual: f64,
    dense_steps: usize,
}

fn admm(constraint: &Constraint, rows: usize, cols: usize, symmetric: bool, cfg: &SolverConfig) -> Result<Iterate> {
    let tau = 1.0 / cfg.step_parameter;
    let mut z = DenseMatrix::zeros(rows, cols);
    constraint.project(&mut z);
    let mut u = DenseMatrix::zeros(rows, cols);
    let mut a = z.clone();
    let mut z_next = DenseMatrix::zeros(rows, cols);
    let mut prox = Prox::new(symmetric);

    // Set after a partial step met the tolerances; the next step is dense
    // and must meet them again.
    let mut confirming = false;
    let mut partial_allowed = true;
    let (mut primal, mut dual) = (f64::INFINITY, f64::INFINITY);
    let mut dense_steps = 0;
    for it in 1..=cfg.max_iterations {
        let want_dense = it == 1 || confirming || !partial_allowed;
        let (x, dense) = prox.apply(&a, tau, want_dense)?;
        dense_steps += dense as usize;

        // Z ← proj(X + U), U ← U + X − Z, residual norms and the next prox
        // argument, in two passes.
        let (xs, us) = (x.as_slice(), u.as_mut_slice());
        let mut total = 0.0;
        for ((zn, (&xv, &uv)), &ok) in z_next.as_mut_slice().iter_mut().zip(xs.iter().zip(us.iter())).zip(&constraint.allowed) {
            *zn = if ok { xv + uv } else { 0.0 };
            total += *zn;
        }
        let shift = if total < constraint.bound {
            (constraint.bound - total) / constraint.count as f64
        } else {
            0.0
        };
        let (mut dxz, mut dzz, mut nx, mut nz, mut nu) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for k in 0..xs.len() {
            let zn = &mut z_next.as_mut_slice()[k];
            if constraint.allowed[k] {
                *zn += shift;
            }
            let (xv, zv) = (xs[k], *zn);
            let d = xv - zv;
            us[k] += d;
            let dz = zv - z.as_slice()[k];
            dxz += d * d;
            dzz += dz * dz;
            nx += xv * xv;
            nz += zv * zv;
            nu += us[k] * us[k];
            a.as_mut_slice()[k] = zv - us[k];
        }
        std::mem::swap(&mut z, &mut z_next);

        primal = dxz.sqrt() / nx.max(nz).sqrt().max(f64::MIN_POSITIVE);
        dual = dzz.sqrt() / nu.sqrt().max(f64::MIN_POSITIVE);
        let ok = primal <= cfg.primal_tolerance && dual <= cfg.dual_tolerance;
        if ok && dense {
            return Ok(Iterate {
                z,
                converged: true,
                iterations: it,
                primal,
                dual,
                dense_steps,
            });
        }
        if confirming {
            // The partial iterates settled somewhere the dense prox disagrees with.
            partial_allowed = false;
        }
        confirming = ok;
    }
    Ok(Iterate {
        z,
        converged: false,
        iterations: cfg.max_iterations,
        primal,
        dual,
        dense_steps,
    })
}

/// Solves the clique relaxation on `g`, with every diagonal entry allowed.
pub fn solve_clique_relaxation(g: &Graph, cfg: &SolverConfig) -> Result<SolverResult> {
    cfg.validate()?;
    let n = g.num_vertices();
    if n == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    let mut allowed = vec![false; n * n];
    for i in 0..n {
        allowed[i * n + i] = true;
    }
    for &(i, j) in g.edges() {
        allowed[i * n + j] = true;
        allowed[j * n + i] = true;
    }
    let bound = n as f64;
    let constraint = Constraint {
        count: allowed.iter().filter(|&&a| a).count(),
        allowed,
        bound,
    };
    let it = admm(&constraint, n, n, true, cfg)?;
    finish(it, bound, cfg, Pattern::Clique(g))
}

/// Solves the biclique relaxation on the biadjacency pattern of `g`.
pub fn solve_biclique_relaxation(g: &BipartiteGraph, cfg: &SolverConfig) -> Result<SolverResult> {
    cfg.validate()?;
    let (rows, cols) = (g.left_count(), g.right_count());
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter("bipartite graph has an empty side".into()));
    }
    if g.num_edges() == 0 {
        return Err(Error::InvalidParameter("bipartite graph has no edges; the relaxation is infeasible".into()));
    }
    let mut allowed = vec![false; rows * cols];
    for &(u, v) in g.edges() {
        allowed[u * cols + v] = true;
    }
    let bound = ((rows * cols) as f64).sqrt();
    let constraint = Constraint {
        count: g.num_edges(),
        allowed,
        bound,
    };
    let it = admm(&constraint, rows, cols, false, cfg)?;
    finish(it, bound, cfg, Pattern::Biclique(g))
}

enum Pattern<'a> {
    Clique(&'a Graph),
    Biclique(&'a BipartiteGraph),
}

fn finish(it: Iterate, bound: f64, cfg: &SolverConfig, pattern: Pattern<'_>) -> Result<SolverResult> {
    let x = it.z.scaled(1.0 / bound);
    let d = thin_svd(&x)?;
    let objective: f64 = d.s.iter().sum();
    let rank_one_gap = match d.s.as_slice() {
        [s1, s2, ..] if *s1 > 0.0 => s2 / s1,
        [s1] if *s1 > 0.0 => 0.0,
        _ => 1.0,
    };
    let peak = x.max_abs();
    let x_rescaled = if peak > 0.0 { x.scaled(1.0 / peak) } else { x.clone() };

    let candidate = if rank_one_gap >= DEGENERATE_GAP {
        None
    } else {
        let mut u = d.u.column(0);
        let mut v = d.v.column(0);
        let k = argmax_abs(&u);
        if u[k] < 0.0 {
            u.iter_mut().for_each(|x| *x = -*x);
            v.iter_mut().for_each(|x| *x = -*x);
        }
        normalize_peak(&mut u);
        normalize_peak(&mut v);
        let thr = cfg.rounding_threshold;
        Some(match pattern {
            Pattern::Clique(g) => Candidate::Clique {
                vertices: VertexSet::new(g.num_vertices(), repair_clique(g, &u, thr))?,
            },
            Pattern::Biclique(g) => {
                let (l, r) = repair_biclique(g, &u, &v, thr);
                Candidate::Biclique {
                    left: VertexSet::new(g.left_count(), l)?,
                    right: VertexSet::new(g.right_count(), r)?,
                }
            }
        })
    };

    Ok(SolverResult {
        x,
        x_rescaled,
        converged: it.converged,
        iterations: it.iterations,
        primal_residual: it.primal,
        dual_residual: it.dual,
        candidate,
        rank_one_gap,
        objective,
        dense_steps: it.dense_steps,
    })
}

fn argmax_abs(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

fn normalize_peak(v: &mut [f64]) {
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak > 0.0 {
        v.iter_mut().for_each(|x| *x /= peak);
    }
}

/// Lowest score first; among equal scores the larger index goes first.
fn weakest(scored: impl Iterator<Item = (f64, usize)>) -> Option<(f64, usize)> {
    scored.min_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
}

/// Thresholds `score`, then deletes the weakest vertex that misses an edge
/// inside the set until the set is a clique.
fn repair_clique(g: &Graph, score: &[f64], thr: f64) -> Vec<usize> {
    let mut set: Vec<usize> = (0..score.len()).filter(|&i| score[i] > thr).collect();
    loop {
        let bad = set
            .iter()
            .copied()
            .filter(|&i| set.iter().any(|&j| j != i && !g.has_edge(i, j)));
        match weakest(bad.map(|i| (score[i], i))) {
            Some((_, i)) => set.retain(|&x| x != i),
            None => return set,
        }
    }
}

/// Biclique counterpart of [`repair_clique`]; left and right scores are
/// compared on the same scale (each normalized to peak 1).
fn repair_biclique(g: &BipartiteGraph, su: &[f64], sv: &[f64], thr: f64) -> (Vec<usize>, Vec<usize>) {
    let mut left: Vec<usize> = (0..su.len()).filter(|&i| su[i] > thr).collect();
    let mut right: Vec<usize> = (0..sv.len()).filter(|&j| sv[j] > thr).collect();
    loop {
        // Encode sides in one index space: right vertex j becomes su.len() + j.
        let bad_left = left
            .iter()
            .copied()
            .filter(|&i| right.iter().any(|&j| !g.has_edge(i, j)))
            .map(|i| (su[i], i));
        let bad_right = right
            .iter()
            .copied()
            .filter(|&j| left.iter().any(|&i| !g.has_edge(i, j)))
            .map(|j| (sv[j], su.len() + j));
        match weakest(bad_left.chain(bad_right)) {
            Some((_, k)) if k < su.len() => left.retain(|&x| x != k),
            Some((_, k)) => right.retain(|&x| x != k - su.len()),
            None => return (left, right),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_biclique_random, gen_clique_random, RandomModelParams};
    use rand::Rng;

    fn random_matrix(r: usize, c: usize, seed: u64) -> DenseMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseMatrix::from_fn(r, c, |_, _| rng.random::<f64>() * 2.0 - 1.0)
    }

    #[test]
    fn svt_zero_threshold_is_identity() {
        let a = random_matrix(4, 6, 1);
        assert!(svt(&a, 0.0).unwrap().sub(&a).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn svt_diagonal_example() {
        let out = svt(&DenseMatrix::diag(&[3.0, 1.0]), 2.0).unwrap();
        assert!(out.sub(&DenseMatrix::diag(&[1.0, 0.0])).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn svt_shrinks_singular_values() {
        let a = random_matrix(5, 5, 2);
        let s = a.singular_values().unwrap();
        for tau in [0.1, 0.5, 1.0, 3.0] {
            let got = svt(&a, tau).unwrap().singular_values().unwrap();
            for (g, s) in got.iter().zip(&s) {
                assert!((g - (s - tau).max(0.0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn symmetric_path_matches_general_path() {
        let b = random_matrix(30, 30, 3);
        let a = b.add(&b.transpose()).unwrap();
        for tau in [0.0, 0.7, 2.5] {
            let d = svt(&a, tau).unwrap().sub(&svt_symmetric(&a, tau).unwrap()).unwrap();
            assert!(d.max_abs() < 1e-10);
        }
    }

    #[test]
    fn complete_graph_gives_uniform_solution() {
        let r = solve_clique_relaxation(&Graph::complete(4), &SolverConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.candidate.unwrap().clique_set().unwrap().members(), &[0, 1, 2, 3]);
        assert!(r.x.as_slice().iter().all(|&v| (v - 1.0 / 16.0).abs() < 1e-5));
        assert!(r.rank_one_gap < 1e-4);
        assert!((r.objective - 0.25).abs() < 1e-5);
    }

    #[test]
    fn isolated_vertices_are_dropped() {
        let g = Graph::new(6, (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j)))).unwrap();
        let r = solve_clique_relaxation(&g, &SolverConfig::default()).unwrap();
        assert_eq!(r.candidate.unwrap().clique_set().unwrap().members(), &[0, 1, 2, 3]);
    }

    #[test]
    fn complete_bipartite_is_rank_one() {
        let r = solve_biclique_relaxation(&BipartiteGraph::complete(3, 3), &SolverConfig::default()).unwrap();
        assert!(r.converged && r.rank_one_gap < 1e-4);
        let c = r.candidate.unwrap();
        let (l, rr) = c.biclique_sets().unwrap();
        assert_eq!((l.len(), rr.len()), (3, 3));
    }

    #[test]
    fn planted_biclique_without_noise() {
        let inst = gen_biclique_random(&RandomModelParams::biclique(8, 10, 4, 5, 0.0, 0)).unwrap();
        let (g, l, r) = inst.as_biclique().unwrap();
        let res = solve_biclique_relaxation(g, &SolverConfig::default()).unwrap();
        let c = res.candidate.unwrap();
        assert_eq!(c.biclique_sets().unwrap(), (l, r));
    }

    #[test]
    fn planted_clique_recovered_and_feasible() {
        let inst = gen_clique_random(&RandomModelParams::clique(80, 30, 0.3, 11)).unwrap();
        let (g, s) = inst.as_clique().unwrap();
        let cfg = SolverConfig::default();
        let res = solve_clique_relaxation(g, &cfg).unwrap();
        assert!(res.converged);
        assert_eq!(res.candidate.as_ref().unwrap().clique_set().unwrap(), s);
        let n = g.num_vertices();
        for i in 0..n {
            for j in 0..n {
                if i != j && !g.has_edge(i, j) {
                    assert!(res.x[(i, j)].abs() <= cfg.primal_tolerance);
                }
            }
        }
        assert!(res.x.sum() >= 1.0 - cfg.primal_tolerance);
        assert!((res.x_rescaled.max_abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn planted_biclique_recovered_under_noise() {
        let inst = gen_biclique_random(&RandomModelParams::biclique(60, 50, 24, 20, 0.3, 5)).unwrap();
        let (g, l, r) = inst.as_biclique().unwrap();
        let res = solve_biclique_relaxation(g, &SolverConfig::default()).unwrap();
        assert!(res.converged);
        assert_eq!(res.candidate.unwrap().biclique_sets().unwrap(), (l, r));
    }

    #[test]
    fn repair_removes_weakest_offender() {
        // Path 0-1-2: thresholding keeps all three; vertex 2 scores lowest.
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(repair_clique(&g, &[1.0, 0.9, 0.8], 0.5), vec![0, 1]);
        let b = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 0)]).unwrap();
        assert_eq!(repair_biclique(&b, &[1.0, 0.6], &[1.0, 0.7], 0.5), (vec![0], vec![0, 1]));
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig {
            primal_tolerance: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(solve_clique_relaxation(&Graph::empty(0), &SolverConfig::default()).is_err());
    }
}
