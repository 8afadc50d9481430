//! Planted instances under the random and the budget-constrained
//! adversarial noise models.
//!
//! Planted vertices always occupy the lowest indices. Every generator is a
//! pure function of its parameters; randomness comes from a `ChaCha8Rng`
//! seeded with `seed_from_u64`.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, GenerationParams, Graph, PlantedInstance, VertexSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parameters of the random model. Clique instances use `n` of `big_n`
/// vertices. Biclique instances plant `m x n` inside `big_m x big_n`, with
/// the left side first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomModelParams {
    pub p: f64,
    pub n: usize,
    pub big_n: usize,
    pub m: usize,
    pub big_m: usize,
    /// When set, `big_m = ceil(y * big_n)`.
    pub y: Option<f64>,
    /// When set, `m = ceil(z * n)`.
    pub z: Option<f64>,
    pub seed: u64,
}

impl RandomModelParams {
    pub fn clique(big_n: usize, n: usize, p: f64, seed: u64) -> Self {
        Self {
            p,
            n,
            big_n,
            m: 0,
            big_m: 0,
            y: None,
            z: None,
            seed,
        }
    }

    pub fn biclique(big_m: usize, big_n: usize, m: usize, n: usize, p: f64, seed: u64) -> Self {
        Self {
            p,
            n,
            big_n,
            m,
            big_m,
            y: None,
            z: None,
            seed,
        }
    }

    /// Biclique sizing from aspect ratios.
    pub fn biclique_aspect(big_n: usize, n: usize, y: f64, z: f64, p: f64, seed: u64) -> Self {
        Self {
            y: Some(y),
            z: Some(z),
            ..Self::biclique(0, big_n, 0, n, p, seed)
        }
    }

    /// `(big_m, m)` after applying the aspect ratios, if any.
    pub fn left_sizes(&self) -> Result<(usize, usize)> {
        let big_m = match self.y {
            Some(y) if y.is_finite() && y > 0.0 => (y * self.big_n as f64).ceil() as usize,
            Some(y) => return Err(Error::InvalidParameter(format!("aspect ratio y = {y} must be positive"))),
            None => self.big_m,
        };
        let m = match self.z {
            Some(z) if z.is_finite() && z > 0.0 => (z * self.n as f64).ceil() as usize,
            Some(z) => return Err(Error::InvalidParameter(format!("aspect ratio z = {z} must be positive"))),
            None => self.m,
        };
        Ok((big_m, m))
    }

    fn check_p(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!("edge probability {} not in [0, 1)", self.p)));
        }
        Ok(())
    }
}

/// Parameters of the adversarial model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversaryParams {
    pub r: usize,
    /// Cap fraction for right vertices outside `V*` into `U*`.
    pub alpha: f64,
    /// Cap fraction for left vertices outside `U*` into `V*`, and for clique
    /// vertices outside `V*` into `V*`.
    pub beta: f64,
    pub seed: u64,
    /// Reject parameters that fail [`adversarial_screen`] (biclique only).
    pub require_screen: bool,
}

impl AdversaryParams {
    fn check(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} = {v} not in (0, 1)")));
            }
        }
        Ok(())
    }

    fn record(&self) -> GenerationParams {
        GenerationParams {
            r: Some(self.r),
            alpha: Some(self.alpha),
            beta: Some(self.beta),
            seed: Some(self.seed),
            ..Default::default()
        }
    }
}

fn cap(frac: f64, size: usize) -> usize {
    ((frac * size as f64).floor() as usize).min(size)
}

fn check_sizes(small: usize, big: usize, what: &str) -> Result<()> {
    if small > big {
        return Err(Error::InvalidParameter(format!("planted {what} size {small} exceeds {big}")));
    }
    Ok(())
}

pub fn gen_clique_random(params: &RandomModelParams) -> Result<PlantedInstance> {
    params.check_p()?;
    let (big_n, n) = (params.big_n, params.n);
    check_sizes(n, big_n, "clique")?;
    let mut rng = rng_from_seed(params.seed);
    let mut edges = Vec::new();
    for i in 0..big_n {
        for j in i + 1..big_n {
            // Draw for every pair so the stream does not depend on n.
            let coin = rng.random_bool(params.p);
            if j < n || coin {
                edges.push((i, j));
            }
        }
    }
    let g = Graph::new(big_n, edges)?;
    let record = GenerationParams {
        p: Some(params.p),
        seed: Some(params.seed),
        ..Default::default()
    };
    PlantedInstance::clique(g, VertexSet::prefix(big_n, n)?, record)
}

pub fn gen_biclique_random(params: &RandomModelParams) -> Result<PlantedInstance> {
    params.check_p()?;
    let (big_m, m) = params.left_sizes()?;
    let (big_n, n) = (params.big_n, params.n);
    check_sizes(m, big_m, "left")?;
    check_sizes(n, big_n, "right")?;
    let mut rng = rng_from_seed(params.seed);
    let mut edges = Vec::new();
    for u in 0..big_m {
        for v in 0..big_n {
            let coin = rng.random_bool(params.p);
            if (u < m && v < n) || coin {
                edges.push((u, v));
            }
        }
    }
    let g = BipartiteGraph::new(big_m, big_n, edges)?;
    let record = GenerationParams {
        p: Some(params.p),
        y: params.y,
        z: params.z,
        seed: Some(params.seed),
        ..Default::default()
    };
    PlantedInstance::biclique(g, VertexSet::prefix(big_m, m)?, VertexSet::prefix(big_n, n)?, record)
}

/// Sufficient condition for the adversarial certificate to have norm
/// below one: `r (1 + 1/(1-alpha) + 1/(1-beta)) < m n`.
pub fn adversarial_screen(m: usize, n: usize, r: usize, alpha: f64, beta: f64) -> bool {
    let lhs = r as f64 * (1.0 + 1.0 / (1.0 - alpha) + 1.0 / (1.0 - beta));
    lhs < (m * n) as f64
}

/// Places up to `r` edges: cross slots first, shuffled and accepted while
/// the owning vertex is under its cap, then free slots.
fn greedy_place(
    cross: &mut [(usize, usize, usize)],
    caps: &mut [usize],
    free: &mut [(usize, usize)],
    r: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, usize)> {
    let mut placed = Vec::with_capacity(r);
    cross.shuffle(rng);
    for &(owner, a, b) in cross.iter() {
        if placed.len() == r {
            return placed;
        }
        if caps[owner] > 0 {
            caps[owner] -= 1;
            placed.push((a, b));
        }
    }
    free.shuffle(rng);
    placed.extend(free.iter().take(r - placed.len()).copied());
    placed
}

pub fn gen_biclique_adversarial(
    m: usize,
    n: usize,
    big_m: usize,
    big_n: usize,
    adv: &AdversaryParams,
) -> Result<PlantedInstance> {
    adv.check()?;
    check_sizes(m, big_m, "left")?;
    check_sizes(n, big_n, "right")?;
    if adv.require_screen && !adversarial_screen(m, n, adv.r, adv.alpha, adv.beta) {
        return Err(Error::InvalidParameter(format!(
            "r = {} fails the adversarial screen for m = {m}, n = {n}",
            adv.r
        )));
    }
    let (cap_left, cap_right) = (cap(adv.beta, n), cap(adv.alpha, m));
    let available = (big_m - m) * cap_left + (big_n - n) * cap_right + (big_m - m) * (big_n - n);
    if adv.r > available {
        return Err(Error::InfeasibleCaps {
            requested: adv.r,
            available,
        });
    }

    // Owners: left outside vertices are 0..big_m, right outside vertices big_m..big_m + big_n.
    let mut caps = vec![0usize; big_m + big_n];
    let mut cross = Vec::new();
    for u in m..big_m {
        caps[u] = cap_left;
        cross.extend((0..n).map(|v| (u, u, v)));
    }
    for v in n..big_n {
        caps[big_m + v] = cap_right;
        cross.extend((0..m).map(|u| (big_m + v, u, v)));
    }
    let mut free: Vec<(usize, usize)> = (m..big_m).flat_map(|u| (n..big_n).map(move |v| (u, v))).collect();
    let mut rng = rng_from_seed(adv.seed);
    let extra = greedy_place(&mut cross, &mut caps, &mut free, adv.r, &mut rng);

    let planted = (0..m).flat_map(|u| (0..n).map(move |v| (u, v)));
    let g = BipartiteGraph::new(big_m, big_n, planted.chain(extra))?;
    PlantedInstance::biclique(g, VertexSet::prefix(big_m, m)?, VertexSet::prefix(big_n, n)?, adv.record())
}

/// Adversarial clique instance. Each vertex outside the planted set is
/// adjacent to at most `floor(beta n)` planted vertices; `alpha` is unused.
pub fn gen_clique_adversarial(n: usize, big_n: usize, adv: &AdversaryParams) -> Result<PlantedInstance> {
    adv.check()?;
    check_sizes(n, big_n, "clique")?;
    let c = cap(adv.beta, n);
    let outside = big_n - n;
    let available = outside * c + outside * outside.saturating_sub(1) / 2;
    if adv.r > available {
        return Err(Error::InfeasibleCaps {
            requested: adv.r,
            available,
        });
    }
    let mut caps = vec![0usize; big_n];
    let mut cross = Vec::new();
    for j in n..big_n {
        caps[j] = c;
        cross.extend((0..n).map(|i| (j, i, j)));
    }
    let mut free: Vec<(usize, usize)> = (n..big_n).flat_map(|i| (i + 1..big_n).map(move |j| (i, j))).collect();
    let mut rng = rng_from_seed(adv.seed);
    let extra = greedy_place(&mut cross, &mut caps, &mut free, adv.r, &mut rng);

    let planted = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    let g = Graph::new(big_n, planted.chain(extra))?;
    PlantedInstance::clique(g, VertexSet::prefix(big_n, n)?, adv.record())
}

fn cap_violation(what: &str, vertex: usize, degree: usize, limit: usize) -> Error {
    Error::InvalidParameter(format!(
        "{what} vertex {vertex} has {degree} planted neighbours, cap {limit}"
    ))
}

/// Plants `K(m, n)` and adds the given diversionary edges, which must lie
/// outside the planted block, number at most `adv.r`, and respect the caps.
pub fn plant_biclique_with_edges(
    m: usize,
    n: usize,
    big_m: usize,
    big_n: usize,
    extra: &[(usize, usize)],
    adv: &AdversaryParams,
) -> Result<PlantedInstance> {
    adv.check()?;
    check_sizes(m, big_m, "left")?;
    check_sizes(n, big_n, "right")?;
    let planted = (0..m).flat_map(|u| (0..n).map(move |v| (u, v)));
    let g = BipartiteGraph::new(big_m, big_n, planted.chain(extra.iter().copied()))?;
    let count = g.num_edges() - m * n;
    if count > adv.r {
        return Err(Error::InvalidParameter(format!("{count} diversionary edges exceed r = {}", adv.r)));
    }
    let (cap_left, cap_right) = (cap(adv.beta, n), cap(adv.alpha, m));
    for u in m..big_m {
        let d = (0..n).filter(|&v| g.has_edge(u, v)).count();
        if d > cap_left {
            return Err(cap_violation("left", u, d, cap_left));
        }
    }
    for v in n..big_n {
        let d = (0..m).filter(|&u| g.has_edge(u, v)).count();
        if d > cap_right {
            return Err(cap_violation("right", v, d, cap_right));
        }
    }
    PlantedInstance::biclique(g, VertexSet::prefix(big_m, m)?, VertexSet::prefix(big_n, n)?, adv.record())
}

/// Clique counterpart of [`plant_biclique_with_edges`].
pub fn plant_clique_with_edges(
    n: usize,
    big_n: usize,
    extra: &[(usize, usize)],
    adv: &AdversaryParams,
) -> Result<PlantedInstance> {
    adv.check()?;
    check_sizes(n, big_n, "clique")?;
    let planted = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    let g = Graph::new(big_n, planted.chain(extra.iter().copied()))?;
    let count = g.num_edges() - n * n.saturating_sub(1) / 2;
    if count > adv.r {
        return Err(Error::InvalidParameter(format!("{count} diversionary edges exceed r = {}", adv.r)));
    }
    let c = cap(adv.beta, n);
    for j in n..big_n {
        let d = (0..n).filter(|&i| g.has_edge(i, j)).count();
        if d > c {
            return Err(cap_violation("outside", j, d, c));
        }
    }
    PlantedInstance::clique(g, VertexSet::prefix(big_n, n)?, adv.record())
}
