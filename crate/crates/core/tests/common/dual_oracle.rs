//! Exact brute-force solver for small SVM duals.
//!
//! Every coordinate is assigned one of {0, C, free}; for each of the 3^n
//! assignments the stationarity system on the free coordinates is solved
//! exactly and the candidate is kept if it is feasible. Some optimal point
//! always has a nonsingular free system, so the best feasible candidate is the
//! global optimum. Independent of the solvers in `surveycode::svm`.

pub struct DualProblem {
    /// Q[i][j] = y_i y_j k(x_i, x_j)
    pub q: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub c: f64,
    /// Enforce sum_i alpha_i y_i = 0 (kernel SVM with free bias).
    pub equality: bool,
}

pub struct DualSolution {
    pub alphas: Vec<f64>,
    pub objective: f64,
}

const FREE: u8 = 2;

pub fn objective(q: &[Vec<f64>], alphas: &[f64]) -> f64 {
    let n = alphas.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alphas[i] * alphas[j] * q[i][j];
        }
    }
    alphas.iter().sum::<f64>() - 0.5 * quad
}

pub fn solve(p: &DualProblem) -> DualSolution {
    let n = p.y.len();
    assert!(n <= 12, "brute force is exponential");
    let total = 3usize.pow(n as u32);
    let mut best: Option<DualSolution> = None;
    let mut state = vec![0u8; n];
    for code in 0..total {
        let mut k = code;
        for s in state.iter_mut() {
            *s = (k % 3) as u8;
            k /= 3;
        }
        if let Some(alphas) = candidate(p, &state) {
            let obj = objective(&p.q, &alphas);
            if best.as_ref().is_none_or(|b| obj > b.objective) {
                best = Some(DualSolution { alphas, objective: obj });
            }
        }
    }
    best.expect("alpha = 0 is always feasible")
}

fn candidate(p: &DualProblem, state: &[u8]) -> Option<Vec<f64>> {
    let n = state.len();
    let mut alphas: Vec<f64> = state.iter().map(|&s| if s == 1 { p.c } else { 0.0 }).collect();
    let free: Vec<usize> = (0..n).filter(|&i| state[i] == FREE).collect();
    let tol = 1e-9 * p.c.max(1.0);
    if free.is_empty() {
        if p.equality {
            let s: f64 = (0..n).map(|i| alphas[i] * p.y[i]).sum();
            if s.abs() > tol {
                return None;
            }
        }
        return Some(alphas);
    }
    let m = free.len() + usize::from(p.equality);
    let mut a = vec![vec![0.0; m + 1]; m];
    for (r, &i) in free.iter().enumerate() {
        for (c, &j) in free.iter().enumerate() {
            a[r][c] = p.q[i][j];
        }
        let fixed: f64 = (0..n)
            .filter(|&j| state[j] != FREE)
            .map(|j| p.q[i][j] * alphas[j])
            .sum();
        a[r][m] = 1.0 - fixed;
        if p.equality {
            a[r][free.len()] = p.y[i];
        }
    }
    if p.equality {
        let r = free.len();
        for (c, &j) in free.iter().enumerate() {
            a[r][c] = p.y[j];
        }
        a[r][m] = -(0..n)
            .filter(|&j| state[j] != FREE)
            .map(|j| p.y[j] * alphas[j])
            .sum::<f64>();
    }
    let sol = gauss_solve(a)?;
    for (r, &i) in free.iter().enumerate() {
        let v = sol[r];
        if v < -tol || v > p.c + tol {
            return None;
        }
        alphas[i] = v.clamp(0.0, p.c);
    }
    Some(alphas)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
/// Returns None when the system is (numerically) singular.
pub fn gauss_solve(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let m = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r[..m].iter())
        .fold(0.0f64, |s, v| s.max(v.abs()))
        .max(1.0);
    for col in 0..m {
        let piv = (col..m).max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-10 * scale {
            return None;
        }
        a.swap(col, piv);
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    let pivot_row = a[col].clone();
                    for (v, p) in a[r][col..=m].iter_mut().zip(&pivot_row[col..=m]) {
                        *v -= f * p;
                    }
                }
            }
        }
    }
    Some((0..m).map(|r| a[r][m] / a[r][r]).collect())
}

pub fn dense_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d).exp()
}

/// Linear SVM with the bias folded in as a constant feature of value 1:
/// returns (weights, bias) of the optimal primal solution.
pub fn linear_reference(points: &[Vec<f64>], y: &[f64], c: f64) -> (Vec<f64>, f64) {
    let n = points.len();
    let q = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| y[i] * y[j] * (dense_dot(&points[i], &points[j]) + 1.0))
                .collect()
        })
        .collect();
    let sol = solve(&DualProblem {
        q,
        y: y.to_vec(),
        c,
        equality: false,
    });
    let d = points[0].len();
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    for i in 0..n {
        for k in 0..d {
            w[k] += sol.alphas[i] * y[i] * points[i][k];
        }
        b += sol.alphas[i] * y[i];
    }
    (w, b)
}

/// RBF SVM with a free bias: returns (alphas, bias).
pub fn rbf_reference(points: &[Vec<f64>], y: &[f64], c: f64, gamma: f64) -> (Vec<f64>, f64) {
    let n = points.len();
    let k: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| rbf(&points[i], &points[j], gamma)).collect())
        .collect();
    let q = (0..n)
        .map(|i| (0..n).map(|j| y[i] * y[j] * k[i][j]).collect())
        .collect();
    let sol = solve(&DualProblem {
        q,
        y: y.to_vec(),
        c,
        equality: true,
    });
    let a = sol.alphas;
    let tol = 1e-7 * c;
    // g_i = sum_j a_j y_j k_ij ; free points satisfy g_i + b = y_i
    let g: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[j] * y[j] * k[i][j]).sum()).collect();
    let free: Vec<usize> = (0..n).filter(|&i| a[i] > tol && a[i] < c - tol).collect();
    let b = if !free.is_empty() {
        free.iter().map(|&i| y[i] - g[i]).sum::<f64>() / free.len() as f64
    } else {
        // KKT interval for b from bounded points; take its midpoint
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..n {
            let r = y[i] - g[i];
            let at_upper = a[i] >= c - tol;
            // y_i f(x_i) >= 1 at alpha = 0, <= 1 at alpha = C
            if (y[i] > 0.0) != at_upper {
                lo = lo.max(r);
            } else {
                hi = hi.min(r);
            }
        }
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo,
            (false, true) => hi,
            _ => 0.0,
        }
    };
    (a, b)
}

pub fn rbf_decision(points: &[Vec<f64>], y: &[f64], alphas: &[f64], b: f64, gamma: f64, x: &[f64]) -> f64 {
    (0..points.len())
        .map(|i| alphas[i] * y[i] * rbf(&points[i], x, gamma))
        .sum::<f64>()
        + b
}
