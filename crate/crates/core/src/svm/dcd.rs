use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{validate_problem, LinearModel, SvmError, TrainConfig};
use crate::sparse::SparseVector;

/// Result of dual coordinate descent for the linear hinge-loss SVM
///
/// min_w 1/2 |w~|^2 + C sum_i max(0, 1 - y_i <w~, x~_i>)
///
/// where x~ = (x, 1) carries the bias as its last coordinate.
#[derive(Debug, Clone)]
pub struct LinearDualSolution {
    pub alphas: Vec<f64>,
    /// Feature weights followed by the bias.
    pub w: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
    /// Dual objective after each sweep.
    pub objective_trace: Vec<f64>,
    /// Largest projected-gradient magnitude seen in the last sweep.
    pub final_violation: f64,
}

impl LinearDualSolution {
    pub fn into_model(self) -> LinearModel {
        let mut weights = self.w;
        let bias = weights.pop().unwrap_or(0.0);
        LinearModel { weights, bias }
    }

    pub fn dual_objective(&self) -> f64 {
        dual_objective(&self.alphas, &self.w)
    }
}

fn dual_objective(alphas: &[f64], w: &[f64]) -> f64 {
    alphas.iter().sum::<f64>() - 0.5 * w.iter().map(|v| v * v).sum::<f64>()
}

pub fn solve_linear_dual(x: &[SparseVector], y: &[f64], cfg: &TrainConfig) -> Result<LinearDualSolution, SvmError> {
    cfg.validate()?;
    let dim = validate_problem(x, y)?;
    let n = x.len();
    let c = cfg.c;
    let mut alphas = vec![0.0; n];
    let mut w = vec![0.0; dim + 1];
    // diagonal of Q, including the constant bias feature
    let qd: Vec<f64> = x.iter().map(|xi| xi.norm_sq() + 1.0).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut sweeps = 0;
    let mut violation = f64::INFINITY;

    while sweeps < cfg.max_iterations {
        sweeps += 1;
        order.shuffle(&mut rng);
        violation = 0.0f64;
        for &i in &order {
            let xi = &x[i];
            let yi = y[i];
            let g = yi * (xi.dot_dense(&w[..dim]) + w[dim]) - 1.0;
            let pg = if alphas[i] == 0.0 {
                g.min(0.0)
            } else if alphas[i] == c {
                g.max(0.0)
            } else {
                g
            };
            violation = violation.max(pg.abs());
            if pg != 0.0 {
                let old = alphas[i];
                let new = (old - g / qd[i]).clamp(0.0, c);
                let delta = (new - old) * yi;
                if delta != 0.0 {
                    for (j, v) in xi.iter() {
                        w[j] += delta * v;
                    }
                    w[dim] += delta;
                }
                alphas[i] = new;
            }
        }
        trace.push(dual_objective(&alphas, &w));
        if violation < cfg.tolerance {
            converged = true;
            break;
        }
    }

    Ok(LinearDualSolution {
        alphas,
        w,
        sweeps,
        converged,
        objective_trace: trace,
        final_violation: violation,
    })
}
