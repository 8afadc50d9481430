//! Property checks shared by the property-test suite and the acceptance
//! binary. Each check drives a deterministic proptest runner and returns
//! the failure message, if any.

#![allow(dead_code)]

use plantrank::certificate::{gamma_random, subgradient_check, subspace_decompose};
use plantrank::generators::{gen_biclique_random, gen_clique_random, RandomModelParams};
use plantrank::graph::VertexSet;
use plantrank::matrix::DenseMatrix;
use plantrank::rmt::decompose_random_w;
use plantrank::solver::{svt, svt_symmetric};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-10;

/// Runs `test` on `cases` deterministic draws from `strategy`.
pub fn check<S, F>(cases: u32, strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(-5.0f64..5.0, r * c)
            .prop_map(move |v| DenseMatrix::from_row_major(r, c, v).unwrap())
    })
}

fn symmetric(max: usize) -> impl Strategy<Value = DenseMatrix> {
    matrix(max, max).prop_map(|a| {
        let n = a.rows().min(a.cols());
        DenseMatrix::from_fn(n, n, |i, j| a[(i.min(j), i.max(j))])
    })
}

/// Nonempty subset of `0..universe` drawn from a membership mask.
fn subset(universe: usize) -> impl Strategy<Value = VertexSet> {
    prop::collection::vec(any::<bool>(), universe).prop_map(move |mask| {
        let mut members: Vec<usize> = (0..universe).filter(|&i| mask[i]).collect();
        if members.is_empty() {
            members.push(universe / 2);
        }
        VertexSet::new(universe, members).unwrap()
    })
}

/// A matrix together with nonempty planted sets on both sides.
fn matrix_with_sets(max: usize) -> impl Strategy<Value = (DenseMatrix, VertexSet, VertexSet)> {
    (2..=max, 2..=max).prop_flat_map(|(r, c)| {
        (
            prop::collection::vec(-5.0f64..5.0, r * c).prop_map(move |v| DenseMatrix::from_row_major(r, c, v).unwrap()),
            subset(r),
            subset(c),
        )
    })
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= TOL * (1.0 + scale)
}

pub fn norm_identities() -> Result<(), String> {
    check(64, matrix(10, 10), |x| {
        let s = x.singular_values().unwrap();
        let spec = x.spectral_norm().unwrap();
        let nuc = x.nuclear_norm().unwrap();
        let fro = x.frobenius_norm();
        let rank = s.iter().filter(|&&v| v > TOL * (1.0 + spec)).count().max(1);
        prop_assert!(fro >= spec - TOL * (1.0 + fro));
        prop_assert!(nuc >= spec - TOL * (1.0 + nuc));
        prop_assert!(nuc <= (rank as f64).sqrt() * fro + TOL * (1.0 + nuc));
        let sq: f64 = s.iter().map(|v| v * v).sum();
        prop_assert!(close(sq, fro * fro, fro * fro));
        Ok(())
    })?;
    check(64, (1usize..12, 1usize..12).prop_flat_map(|(r, c)| (subset(r), subset(c))), |(u, v)| {
        let x = DenseMatrix::outer(&u.characteristic_vector(), &v.characteristic_vector());
        let expect = ((u.len() * v.len()) as f64).sqrt();
        prop_assert!(close(x.nuclear_norm().unwrap(), expect, expect));
        prop_assert!(close(x.spectral_norm().unwrap(), expect, expect));
        prop_assert!(close(x.frobenius_norm(), expect, expect));
        Ok(())
    })
}

pub fn svt_contract() -> Result<(), String> {
    check(64, (matrix(9, 9), 0.0f64..2.0), |(a, frac)| {
        let s = a.singular_values().unwrap();
        let top = s.first().copied().unwrap_or(0.0);
        let tau = frac * top;
        let y = svt(&a, tau).unwrap();
        let got = y.singular_values().unwrap();
        for (k, &sv) in s.iter().enumerate() {
            prop_assert!(close(got[k], (sv - tau).max(0.0), top), "singular value {k}");
        }
        // A − svt(A, τ) = τ·(subgradient of the nuclear norm), so its norm is at most τ.
        let resid = a.sub(&y).unwrap().spectral_norm().unwrap();
        prop_assert!(resid <= tau + TOL * (1.0 + top));
        if tau >= top {
            prop_assert!(y.max_abs() <= TOL * (1.0 + top));
        }
        Ok(())
    })?;
    check(48, (symmetric(9), 0.0f64..1.5), |(a, frac)| {
        let tau = frac * a.spectral_norm().unwrap();
        let general = svt(&a, tau).unwrap();
        let sym = svt_symmetric(&a, tau).unwrap();
        prop_assert!(general.sub(&sym).unwrap().max_abs() <= TOL * (1.0 + a.max_abs()));
        Ok(())
    })
}

/// Projection of `g` onto `{W : W v̄ = 0, ūᵀ W = 0}`.
fn project_null(g: &DenseMatrix, u: &VertexSet, v: &VertexSet) -> DenseMatrix {
    let (ub, vb) = (u.characteristic_vector(), v.characteristic_vector());
    let (m, n) = (u.len() as f64, v.len() as f64);
    let mut w = g.clone();
    let gv = w.matvec(&vb);
    w.add_outer(-1.0 / n, &gv, &vb);
    let utw = w.tmatvec(&ub);
    w.add_outer(-1.0 / m, &ub, &utw);
    w
}

pub fn subgradient_pairs() -> Result<(), String> {
    let strategy = (matrix_with_sets(9), 0.0f64..=1.0, 0.1f64..5.0, any::<u64>());
    check(200, strategy, |((g, u, v), norm, scale, seed)| {
        let w = project_null(&g, &u, &v);
        let wn = w.spectral_norm().unwrap();
        let w = if wn > 0.0 { w.scaled(norm / wn) } else { w };
        let (ub, vb) = (u.characteristic_vector(), v.characteristic_vector());
        let s = ((u.len() * v.len()) as f64).sqrt();
        let xstar = DenseMatrix::outer(&ub, &vb).scaled(scale);
        let mut phi = w;
        phi.add_outer(1.0 / s, &ub, &vb);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let report = subgradient_check(&xstar, &phi, 1, &mut rng).unwrap();
        prop_assert!(report.holds(), "slack {}", report.min_slack);
        Ok(())
    })
}

pub fn subspace_parts() -> Result<(), String> {
    check(100, matrix_with_sets(10), |(z, u, v)| {
        let parts = subspace_decompose(&z, &u, &v).unwrap();
        let all = parts.parts();
        let scale = z.frobenius_norm().powi(2);
        let mut sum = DenseMatrix::zeros(z.rows(), z.cols());
        for p in all {
            sum = sum.add(p).unwrap();
        }
        prop_assert!(sum.sub(&z).unwrap().max_abs() <= TOL * (1.0 + z.max_abs()));
        for i in 0..5 {
            for j in i + 1..5 {
                let ip = all[i].inner(all[j]).unwrap();
                prop_assert!(ip.abs() <= TOL * (1.0 + scale), "Z{} . Z{} = {ip}", i + 1, j + 1);
            }
        }
        prop_assert!(parts.z4.sum().abs() <= TOL * (1.0 + z.max_abs()));
        let (ub, vb) = (u.characteristic_vector(), v.characteristic_vector());
        let n1 = parts.z1.matvec(&vb).iter().chain(parts.z1.tmatvec(&ub).iter()).fold(0.0f64, |a, x| a.max(x.abs()));
        prop_assert!(n1 <= TOL * (1.0 + z.max_abs()) * z.rows().max(z.cols()) as f64);
        for i in 0..z.rows() {
            for j in 0..z.cols() {
                let inside = u.contains(i) && v.contains(j);
                prop_assert!(inside || parts.z4[(i, j)] == 0.0);
                prop_assert!(!u.contains(i) || parts.z2[(i, j)] == 0.0);
                prop_assert!(!v.contains(j) || parts.z3[(i, j)] == 0.0);
            }
        }
        Ok(())
    })
}

pub fn w_decomposition() -> Result<(), String> {
    let strategy = (20usize..60, 0.25f64..0.5, 0.05f64..=0.5, any::<u64>(), any::<bool>());
    check(40, strategy, |(big_n, frac, p, seed, clique)| {
        let n = ((big_n as f64 * frac) as usize).max(4);
        let gamma = gamma_random(p);
        let inst = if clique {
            gen_clique_random(&RandomModelParams::clique(big_n, n, p, seed)).unwrap()
        } else {
            gen_biclique_random(&RandomModelParams::biclique(big_n - 3, big_n, n - 1, n, p, seed)).unwrap()
        };
        let d = match decompose_random_w(&inst, gamma, seed ^ 1) {
            Ok(d) => d,
            Err(plantrank::Error::CertificateInfeasible { .. }) => return Err(TestCaseError::reject("saturated")),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let mut sum = DenseMatrix::zeros(d.certificate.w.rows(), d.certificate.w.cols());
        for part in &d.parts {
            sum = sum.add(part).unwrap();
        }
        prop_assert!(sum.sub(&d.certificate.w).unwrap().max_abs() <= 1e-12);
        prop_assert!(d.reconstruction_error <= 1e-12);
        if clique {
            prop_assert!(d.parts[3].sub(&d.parts[4].transpose()).unwrap().max_abs() <= TOL);
            let w3 = d.parts[2].spectral_norm().unwrap();
            prop_assert!(w3 <= 2.0 / n as f64 + TOL, "‖W3‖ = {w3}, n = {n}");
        } else {
            prop_assert_eq!(d.parts[2].max_abs(), 0.0);
        }
        Ok(())
    })
}

/// Every suite above, in a fixed order.
pub fn all() -> Vec<(&'static str, fn() -> Result<(), String>)> {
    vec![
        ("norm identities", norm_identities),
        ("svt contract", svt_contract),
        ("subgradient inequality (200 pairs)", subgradient_pairs),
        ("subspace decomposition (100 inputs)", subspace_parts),
        ("W decomposition", w_decomposition),
    ]
}
