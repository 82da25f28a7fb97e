//! SMO with second-order working-set selection, without shrinking.

use std::collections::{HashMap, VecDeque};

use super::{validate_problem, Kernel, KernelModel, SvmError, TrainConfig};
use crate::sparse::SparseVector;

const TAU: f64 = 1e-12;
const CACHE_BYTES: usize = 256 << 20;

#[derive(Debug, Clone)]
pub struct KernelDualSolution {
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
}

impl KernelDualSolution {
    pub fn into_model(self, x: &[SparseVector], y: &[f64], kernel: Kernel, c: f64, dim: usize) -> KernelModel {
        let mut support_vectors = Vec::new();
        let mut coefficients = Vec::new();
        for (i, &a) in self.alphas.iter().enumerate() {
            if a > 0.0 {
                support_vectors.push(x[i].clone());
                coefficients.push(a * y[i]);
            }
        }
        KernelModel {
            support_vectors,
            coefficients,
            bias: self.bias,
            kernel,
            c,
            dim,
        }
    }
}

/// Kernel rows on demand with FIFO eviction once the byte budget is spent.
struct RowCache<'a> {
    x: &'a [SparseVector],
    kernel: Kernel,
    rows: HashMap<usize, Vec<f64>>,
    fifo: VecDeque<usize>,
    capacity: usize,
}

impl<'a> RowCache<'a> {
    fn new(x: &'a [SparseVector], kernel: Kernel, budget_bytes: usize) -> Self {
        let row_bytes = x.len().max(1) * std::mem::size_of::<f64>();
        Self {
            x,
            kernel,
            rows: HashMap::new(),
            fifo: VecDeque::new(),
            capacity: (budget_bytes / row_bytes).max(2),
        }
    }

    /// Loads row `i`, never evicting row `keep`.
    fn ensure(&mut self, i: usize, keep: Option<usize>) {
        if self.rows.contains_key(&i) {
            return;
        }
        if self.rows.len() >= self.capacity {
            if let Some(mut old) = self.fifo.pop_front() {
                if Some(old) == keep {
                    self.fifo.push_back(old);
                    old = self.fifo.pop_front().expect("capacity is at least two");
                }
                self.rows.remove(&old);
            }
        }
        let xi = &self.x[i];
        let row = self.x.iter().map(|xj| self.kernel.eval(xi, xj)).collect();
        self.rows.insert(i, row);
        self.fifo.push_back(i);
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.rows[&i]
    }
}

/// Solves max_a sum(a) - 1/2 a'Qa  s.t. 0 <= a <= C, y'a = 0,
/// with Q_ij = y_i y_j k(x_i, x_j). Stops when the maximal violating pair
/// gap falls below `cfg.tolerance`.
pub fn solve_kernel_dual(
    x: &[SparseVector],
    y: &[f64],
    kernel: Kernel,
    cfg: &TrainConfig,
) -> Result<KernelDualSolution, SvmError> {
    solve_with_cache(x, y, kernel, cfg, CACHE_BYTES)
}

fn solve_with_cache(
    x: &[SparseVector],
    y: &[f64],
    kernel: Kernel,
    cfg: &TrainConfig,
    cache_bytes: usize,
) -> Result<KernelDualSolution, SvmError> {
    cfg.validate()?;
    validate_problem(x, y)?;
    let n = x.len();
    let c = cfg.c;
    let eps = cfg.tolerance;
    let qd: Vec<f64> = x.iter().map(|xi| kernel.eval(xi, xi)).collect();
    let mut alpha = vec![0.0; n];
    // gradient of 1/2 a'Qa - e'a
    let mut grad = vec![-1.0; n];
    let mut cache = RowCache::new(x, kernel, cache_bytes);
    let max_iter = cfg.max_iterations.saturating_mul(n.max(1));
    let mut iterations = 0;
    let mut converged = false;

    let in_up = |a: f64, yi: f64| if yi > 0.0 { a < c } else { a > 0.0 };
    let in_low = |a: f64, yi: f64| if yi > 0.0 { a > 0.0 } else { a < c };

    while iterations < max_iter {
        // i: maximal violator from the "up" set
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..n {
            if in_up(alpha[t], y[t]) {
                let v = -y[t] * grad[t];
                if v > gmax {
                    gmax = v;
                    i_sel = Some(t);
                }
            }
        }
        let Some(i) = i_sel else {
            converged = true;
            break;
        };
        cache.ensure(i, None);

        // j: second-order choice from the "low" set
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j_sel = None;
        let mut best_obj = f64::INFINITY;
        {
            let ki = cache.row(i);
            for t in 0..n {
                if !in_low(alpha[t], y[t]) {
                    continue;
                }
                let yg = y[t] * grad[t];
                gmax2 = gmax2.max(yg);
                let b = gmax + yg;
                if b > 0.0 {
                    let mut a = qd[i] + qd[t] - 2.0 * ki[t];
                    if a <= 0.0 {
                        a = TAU;
                    }
                    let obj = -(b * b) / a;
                    if obj < best_obj {
                        best_obj = obj;
                        j_sel = Some(t);
                    }
                }
            }
        }
        if gmax + gmax2 < eps {
            converged = true;
            break;
        }
        let Some(j) = j_sel else {
            converged = true;
            break;
        };
        iterations += 1;
        cache.ensure(j, Some(i));

        let kij = cache.row(i)[j];
        let (yi, yj) = (y[i], y[j]);
        let (old_ai, old_aj) = (alpha[i], alpha[j]);
        if yi != yj {
            let quad = (qd[i] + qd[j] - 2.0 * kij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (qd[i] + qd[j] - 2.0 * kij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let dai = alpha[i] - old_ai;
        let daj = alpha[j] - old_aj;
        let ki = cache.row(i);
        let kj = cache.row(j);
        for t in 0..n {
            // Q_ti = y_t y_i k_ti
            grad[t] += y[t] * (yi * ki[t] * dai + yj * kj[t] * daj);
        }
    }

    let bias = -compute_rho(&alpha, &grad, y, c);
    let objective = alpha.iter().zip(&grad).map(|(a, g)| -0.5 * a * (g - 1.0)).sum::<f64>();
    Ok(KernelDualSolution {
        alphas: alpha,
        bias,
        iterations,
        converged,
        objective,
    })
}

fn compute_rho(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut sum_free = 0.0;
    let mut n_free = 0usize;
    for t in 0..alpha.len() {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    if n_free > 0 {
        sum_free / n_free as f64
    } else {
        match (ub.is_finite(), lb.is_finite()) {
            (true, true) => 0.5 * (ub + lb),
            (true, false) => ub,
            (false, true) => lb,
            _ => 0.0,
        }
    }
}
