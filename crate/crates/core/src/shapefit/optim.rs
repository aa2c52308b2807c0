//! Small dense least-squares machinery: Gauss-Newton with backtracking
//! line search, and a Nelder-Mead fallback for ill-conditioned Jacobians.

use nalgebra::{DMatrix, DVector};

pub struct LeastSquaresOptions {
    pub max_iterations: usize,
    /// Relative parameter-change convergence threshold.
    pub rel_tol: f64,
}

impl Default for LeastSquaresOptions {
    fn default() -> Self {
        LeastSquaresOptions {
            max_iterations: 500,
            rel_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimOutcome {
    pub params: Vec<f64>,
    pub rms: f64,
    pub iterations: usize,
    pub converged: bool,
    /// RMS after every accepted iteration (never increasing).
    pub residual_history: Vec<f64>,
}

fn rms_of(r: &[f64]) -> f64 {
    (r.iter().map(|v| v * v).sum::<f64>() / r.len().max(1) as f64).sqrt()
}

/// Forward-difference Jacobian.
fn numeric_jacobian<R: Fn(&[f64]) -> Vec<f64>>(
    residuals: &R,
    params: &[f64],
    base: &[f64],
) -> DMatrix<f64> {
    let m = base.len();
    let n = params.len();
    let mut jac = DMatrix::zeros(m, n);
    let mut probe = params.to_vec();
    for j in 0..n {
        let h = 1e-7 * params[j].abs().max(1.0);
        probe[j] = params[j] + h;
        let r = residuals(&probe);
        for i in 0..m {
            jac[(i, j)] = (r[i] - base[i]) / h;
        }
        probe[j] = params[j];
    }
    jac
}

/// Gauss-Newton with backtracking line search.
///
/// `jacobian`, when provided, must return an m×n matrix matching the
/// residual vector; otherwise forward differences are used. A failed or
/// non-finite normal-equation solve falls back to Nelder-Mead on the sum
/// of squares. Accepted iterations never increase the residual.
pub fn least_squares<R, J>(
    initial: &[f64],
    residuals: R,
    jacobian: Option<J>,
    opts: &LeastSquaresOptions,
) -> OptimOutcome
where
    R: Fn(&[f64]) -> Vec<f64>,
    J: Fn(&[f64], &[f64]) -> DMatrix<f64>,
{
    let mut params = initial.to_vec();
    let mut r = residuals(&params);
    let mut cost = r.iter().map(|v| v * v).sum::<f64>();
    let mut history = vec![rms_of(&r)];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        iterations += 1;
        let jac = match &jacobian {
            Some(j) => j(&params, &r),
            None => numeric_jacobian(&residuals, &params, &r),
        };
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let rhs = -(&jt * DVector::from_column_slice(&r));
        let Some(delta) = solve_spd(jtj, rhs) else {
            // Ill-conditioned normal equations: derivative-free rescue.
            return nelder_mead(&params, residuals, opts, iterations, history);
        };
        if !delta.iter().all(|v| v.is_finite()) {
            return nelder_mead(&params, residuals, opts, iterations, history);
        }

        // Backtracking line search.
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let candidate: Vec<f64> = params
                .iter()
                .zip(delta.iter())
                .map(|(p, d)| p + alpha * d)
                .collect();
            let rc = residuals(&candidate);
            let cc = rc.iter().map(|v| v * v).sum::<f64>();
            if cc < cost {
                let step: f64 = delta.iter().map(|d| (alpha * d) * (alpha * d)).sum::<f64>();
                let scale: f64 = params.iter().map(|p| p * p).sum::<f64>();
                params = candidate;
                r = rc;
                cost = cc;
                history.push(rms_of(&r));
                accepted = true;
                if step.sqrt() < opts.rel_tol * (1.0 + scale.sqrt()) {
                    converged = true;
                }
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            // No descent along the Gauss-Newton direction: stationary.
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }

    OptimOutcome {
        rms: rms_of(&r),
        params,
        iterations,
        converged,
        residual_history: history,
    }
}

/// Cholesky solve with a tiny diagonal guard; `None` when the system is
/// numerically indefinite even after regularization.
fn solve_spd(mut a: DMatrix<f64>, b: DVector<f64>) -> Option<DVector<f64>> {
    let n = a.nrows();
    let trace_scale = (0..n).map(|i| a[(i, i)]).sum::<f64>() / n as f64;
    for i in 0..n {
        a[(i, i)] += 1e-12 * trace_scale.max(1e-300);
    }
    a.cholesky().map(|ch| ch.solve(&b))
}

/// Nelder-Mead on the sum of squared residuals, used only as a fallback.
fn nelder_mead<R: Fn(&[f64]) -> Vec<f64>>(
    start: &[f64],
    residuals: R,
    opts: &LeastSquaresOptions,
    iterations_used: usize,
    mut history: Vec<f64>,
) -> OptimOutcome {
    let n = start.len();
    let cost = |p: &[f64]| -> f64 { residuals(p).iter().map(|v| v * v).sum() };

    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for j in 0..n {
        let mut v = start.to_vec();
        v[j] += 0.05 * v[j].abs().max(0.1);
        simplex.push(v);
    }
    let mut costs: Vec<f64> = simplex.iter().map(|p| cost(p)).collect();

    let budget = opts.max_iterations.saturating_sub(iterations_used).max(50) * 4;
    let mut iterations = iterations_used;
    for _ in 0..budget {
        iterations += 1;
        let mut order: Vec<usize> = (0..simplex.len()).collect();
        order.sort_by(|&a, &b| costs[a].partial_cmp(&costs[b]).unwrap());
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];
        if (costs[worst] - costs[best]).abs()
            <= opts.rel_tol * opts.rel_tol * (1.0 + costs[best])
        {
            break;
        }
        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for j in 0..n {
                centroid[j] += simplex[i][j] / n as f64;
            }
        }
        let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
        };
        let reflected = blend(&centroid, &simplex[worst], -1.0);
        let rc = cost(&reflected);
        if rc < costs[best] {
            let expanded = blend(&centroid, &simplex[worst], -2.0);
            let ec = cost(&expanded);
            if ec < rc {
                simplex[worst] = expanded;
                costs[worst] = ec;
            } else {
                simplex[worst] = reflected;
                costs[worst] = rc;
            }
        } else if rc < costs[second_worst] {
            simplex[worst] = reflected;
            costs[worst] = rc;
        } else {
            let contracted = blend(&centroid, &simplex[worst], 0.5);
            let cc = cost(&contracted);
            if cc < costs[worst] {
                simplex[worst] = contracted;
                costs[worst] = cc;
            } else {
                // Shrink toward the best vertex.
                let best_point = simplex[best].clone();
                for (i, v) in simplex.iter_mut().enumerate() {
                    if i != best {
                        *v = blend(&best_point, v, 0.5);
                        costs[i] = cost(v);
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..simplex.len()).collect();
    order.sort_by(|&a, &b| costs[a].partial_cmp(&costs[b]).unwrap());
    let params = simplex[order[0]].clone();
    let r = residuals(&params);
    history.push(rms_of(&r));
    OptimOutcome {
        rms: rms_of(&r),
        params,
        iterations,
        converged: true,
        residual_history: history,
    }
}
