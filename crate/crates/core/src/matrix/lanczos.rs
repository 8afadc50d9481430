//! Lanczos iteration with full reorthogonalization for the extreme part of
//! a symmetric spectrum.
//!
//! The solver needs every eigenpair of a symmetric operator whose eigenvalue
//! lies beyond a threshold (in absolute value, or above it for a Gram
//! operator). When that set is small, a few dozen matrix-vector products
//! replace a dense decomposition. The acceptance test below is the usual
//! practical one: wanted Ritz pairs converged, and at each end the first
//! Ritz value inside the threshold has settled. It is not a proof, so callers
//! confirm results with a dense decomposition before relying on them.

use super::{axpy, decomp, dot, norm2, DenseMatrix};
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    pub threshold: f64,
    /// Wanted eigenvalues satisfy `|λ| > threshold` when set, `λ > threshold` otherwise.
    pub two_sided: bool,
    pub initial_steps: usize,
    pub step_increment: usize,
    pub max_steps: usize,
    /// Relative residual for a wanted Ritz pair to count as converged.
    pub tol: f64,
    /// Relative residual required of the boundary Ritz values.
    pub boundary_tol: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            threshold: 0.0,
            two_sided: true,
            initial_steps: 8,
            step_increment: 6,
            max_steps: 160,
            tol: 1e-11,
            boundary_tol: 1e-2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Eigenpairs of the symmetric operator `op` (acting on vectors of length
/// `dim`) lying beyond `opts.threshold`, sorted by decreasing magnitude.
///
/// Returns `None` when the step budget runs out before the wanted part of
/// the spectrum is resolved.
pub fn eigenpairs_beyond<F, R>(
    mut op: F,
    dim: usize,
    start: &[f64],
    opts: &LanczosOptions,
    rng: &mut R,
) -> Option<Vec<EigenPair>>
where
    F: FnMut(&[f64], &mut [f64]),
    R: Rng,
{
    if dim == 0 {
        return Some(Vec::new());
    }
    let max_steps = opts.max_steps.min(dim);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_steps + 1);
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    let mut q = start.to_vec();
    let scale0 = norm2(&q);
    let jitter = if scale0 > 0.0 { 1e-2 * scale0 / (dim as f64).sqrt() } else { 1.0 };
    for x in q.iter_mut() {
        *x += jitter * (rng.random::<f64>() - 0.5);
    }
    let nq = norm2(&q);
    q.iter_mut().for_each(|x| *x /= nq);
    basis.push(q);

    let mut w = vec![0.0; dim];
    let mut target = opts.initial_steps.clamp(1, max_steps);
    // Norm of the residual vector after the latest step.
    let mut last_beta;
    let mut anorm: f64 = 0.0;

    loop {
        // Extend the basis to `target` vectors.
        loop {
            let k = alphas.len();
            op(&basis[k], &mut w);
            let a = dot(&basis[k], &w);
            alphas.push(a);
            anorm = anorm.max(a.abs());
            // Full reorthogonalization, applied twice.
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    axpy(-c, b, &mut w);
                }
            }
            last_beta = norm2(&w);
            anorm = anorm.max(last_beta);
            if basis.len() == dim || basis.len() >= target {
                break;
            }
            let next = if last_beta > 1e-12 * anorm.max(f64::MIN_POSITIVE) {
                betas.push(last_beta);
                w.iter().map(|x| x / last_beta).collect::<Vec<_>>()
            } else {
                // Invariant subspace found: continue from a fresh direction.
                betas.push(0.0);
                match fresh_direction(&basis, dim, rng) {
                    Some(v) => v,
                    None => break,
                }
            };
            basis.push(next);
        }

        let m = alphas.len();
        let mut t = DenseMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alphas[i];
            if i + 1 < m {
                t[(i, i + 1)] = betas[i];
                t[(i + 1, i)] = betas[i];
            }
        }
        let evd = decomp::symmetric_eigen(&t).ok()?;
        let exact = m == dim;
        let scale = evd.values.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
        let residual = |i: usize| if exact { 0.0 } else { (last_beta * evd.vectors[(m - 1, i)]).abs() };
        let wanted = |v: f64| {
            if opts.two_sided {
                v.abs() > opts.threshold
            } else {
                v > opts.threshold
            }
        };

        let mut ok = (0..m)
            .filter(|&i| wanted(evd.values[i]))
            .all(|i| residual(i) <= opts.tol * scale);
        if ok && !exact {
            // Values are ascending: the top boundary is the largest unwanted value.
            let top = (0..m).rev().find(|&i| !wanted(evd.values[i]));
            ok = top.is_some_and(|i| residual(i) <= opts.boundary_tol * scale);
            if opts.two_sided {
                let bottom = (0..m).find(|&i| !wanted(evd.values[i]));
                ok &= bottom.is_some_and(|i| residual(i) <= opts.boundary_tol * scale);
            }
        }

        if ok {
            let mut pairs: Vec<EigenPair> = (0..m)
                .filter(|&i| wanted(evd.values[i]))
                .map(|i| {
                    let mut x = vec![0.0; dim];
                    for (k, b) in basis.iter().enumerate().take(m) {
                        axpy(evd.vectors[(k, i)], b, &mut x);
                    }
                    let nx = norm2(&x);
                    x.iter_mut().for_each(|v| *v /= nx);
                    EigenPair {
                        value: evd.values[i],
                        vector: x,
                    }
                })
                .collect();
            pairs.sort_by(|a, b| b.value.abs().total_cmp(&a.value.abs()));
            return Some(pairs);
        }
        if m >= max_steps || exact {
            return None;
        }
        target = (target + opts.step_increment).min(max_steps);
        // Resume from the stored residual direction.
        let next = if last_beta > 1e-12 * anorm.max(f64::MIN_POSITIVE) {
            betas.push(last_beta);
            w.iter().map(|x| x / last_beta).collect::<Vec<_>>()
        } else {
            betas.push(0.0);
            fresh_direction(&basis, dim, rng)?
        };
        basis.push(next);
    }
}

fn fresh_direction<R: Rng>(basis: &[Vec<f64>], dim: usize, rng: &mut R) -> Option<Vec<f64>> {
    for _ in 0..4 {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
        for _ in 0..2 {
            for b in basis {
                let c = dot(b, &v);
                axpy(-c, b, &mut v);
            }
        }
        let n = norm2(&v);
        if n > 1e-8 {
            v.iter_mut().for_each(|x| *x /= n);
            return Some(v);
        }
    }
    None
}
