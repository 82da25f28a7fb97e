//! SVM fixtures and solver-vs-oracle checks shared by test targets.

use super::dual_oracle::{self, dense_dot};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surveycode::sparse::SparseVector;
use surveycode::svm::{solve_kernel_dual, solve_linear_dual, Kernel, TrainConfig};

pub struct Fixture {
    pub points: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}

pub fn separable_8() -> Fixture {
    let raw = [
        ([0.0, 0.0], -1.0),
        ([0.5, 0.2], -1.0),
        ([0.2, 0.9], -1.0),
        ([0.6, 0.7], -1.0),
        ([1.4, 1.1], 1.0),
        ([2.0, 0.4], 1.0),
        ([1.2, 2.0], 1.0),
        ([0.9, 0.8], 1.0),
    ];
    Fixture {
        points: raw.iter().map(|r| r.0.to_vec()).collect(),
        y: raw.iter().map(|r| r.1).collect(),
    }
}

pub fn random_fixture(seed: u64, n: usize, dim: usize) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    let mut y = Vec::new();
    for i in 0..n {
        let label = if i % 2 == 0 { 1.0 } else { -1.0 };
        let shift = if label > 0.0 { 0.6 } else { -0.6 };
        points.push((0..dim).map(|_| rng.gen_range(-1.0..1.0) + shift).collect());
        y.push(label);
    }
    Fixture { points, y }
}

/// Solver stopping tolerance for oracle comparisons. The decision-value
/// bound stays at 1e-3.
pub const ORACLE_SOLVER_TOL: f64 = 1e-6;

pub fn sparse(points: &[Vec<f64>]) -> Vec<SparseVector> {
    points.iter().map(|p| SparseVector::from_dense(p)).collect()
}

pub fn probes(dim: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    (0..20)
        .map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect()
}

pub fn check_linear(f: &Fixture, c: f64) -> f64 {
    let (w_ref, b_ref) = dual_oracle::linear_reference(&f.points, &f.y, c);
    let x = sparse(&f.points);
    let cfg = TrainConfig {
        tolerance: ORACLE_SOLVER_TOL,
        ..TrainConfig::linear(c)
    };
    let sol = solve_linear_dual(&x, &f.y, &cfg).unwrap();
    assert!(sol.converged);
    assert!(sol.alphas.iter().all(|&a| (0.0..=c).contains(&a)), "box violated");
    let model = sol.into_model();
    let dim = f.points[0].len();
    let mut worst = 0.0f64;
    for p in f.points.iter().chain(probes(dim).iter()) {
        let got = model.decision(&SparseVector::from_dense(p)).unwrap();
        let want = dense_dot(&w_ref, p) + b_ref;
        worst = worst.max((got - want).abs());
    }
    worst
}

pub fn check_rbf(f: &Fixture, c: f64, gamma: f64) -> f64 {
    let (a_ref, b_ref) = dual_oracle::rbf_reference(&f.points, &f.y, c, gamma);
    let x = sparse(&f.points);
    let cfg = TrainConfig {
        tolerance: ORACLE_SOLVER_TOL,
        ..TrainConfig::rbf(c, gamma)
    };
    let kernel = Kernel::Rbf { gamma };
    let sol = solve_kernel_dual(&x, &f.y, kernel, &cfg).unwrap();
    assert!(sol.converged);
    let dim = f.points[0].len();
    let model = sol.into_model(&x, &f.y, kernel, c, dim);
    assert!(model.kkt_violation() < 1e-9, "KKT violated: {}", model.kkt_violation());
    let mut worst = 0.0f64;
    for p in f.points.iter().chain(probes(dim).iter()) {
        let got = model.decision(&SparseVector::from_dense(p)).unwrap();
        let want = dual_oracle::rbf_decision(&f.points, &f.y, &a_ref, b_ref, gamma, p);
        worst = worst.max((got - want).abs());
    }
    worst
}

/// Every small fixture the oracle suites cover: the separable eight points
/// plus seeded random sets of 4 to 10 points.
pub fn small_fixtures() -> Vec<(String, Fixture)> {
    let mut out = vec![("separable_8".to_owned(), separable_8())];
    for seed in 0..14u64 {
        let n = 4 + (seed as usize % 7);
        out.push((format!("random_{seed}_n{n}"), random_fixture(seed, n, 2)));
    }
    out
}
