//! Shared numerical kernels: preconditioned steepest descent with Armijo
//! backtracking and a damped Newton iteration on the gradient map.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::math::norm2;

/// Armijo line-search parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LineSearch {
    pub step_init: f64,
    pub backtrack: f64,
    pub armijo_c: f64,
}

/// Outcome of an iterative minimization or root-finding run.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Iterate {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

const MIN_STEP: f64 = 1e-18;

/// Minimizes `f` by steepest descent in the metric `diag(metric)`.
///
/// `f(x, g)` returns the value at `x` and writes the coordinate gradient into
/// `g`. Every trial point is passed through `project` before evaluation; the
/// Armijo test uses the projected displacement. Stops when the Euclidean norm
/// of the gradient reaches `tol`, after `max_iters` steps, or when the line
/// search cannot make progress.
pub(crate) fn descend<F, P>(
    mut f: F,
    x0: Vec<f64>,
    metric: &[f64],
    ls: &LineSearch,
    tol: f64,
    max_iters: usize,
    mut project: P,
) -> Iterate
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
    P: FnMut(&mut [f64]),
{
    let n = x0.len();
    let mut x = x0;
    project(&mut x);
    let mut g = vec![0.0; n];
    let mut value = f(&x, &mut g);
    let mut trial = vec![0.0; n];
    let mut g_trial = vec![0.0; n];
    let mut step = ls.step_init;
    let mut iterations = 0;
    loop {
        let grad_norm = norm2(&g);
        if grad_norm <= tol || iterations >= max_iters || !value.is_finite() {
            return Iterate { x, value, grad_norm, iterations, converged: grad_norm <= tol };
        }
        let mut t = step;
        let accepted = loop {
            for i in 0..n {
                trial[i] = x[i] - t * g[i] / metric[i];
            }
            project(&mut trial);
            let decrease: f64 = (0..n).map(|i| g[i] * (trial[i] - x[i])).sum();
            let v = f(&trial, &mut g_trial);
            if v.is_finite() && v <= value + ls.armijo_c * decrease && decrease < 0.0 {
                break true;
            }
            t *= ls.backtrack;
            if t < MIN_STEP {
                break false;
            }
        };
        if !accepted {
            return Iterate { x, value, grad_norm, iterations, converged: false };
        }
        core::mem::swap(&mut x, &mut trial);
        core::mem::swap(&mut g, &mut g_trial);
        value = f(&x, &mut g);
        iterations += 1;
        step = (t / ls.backtrack).min(ls.step_init * 1e6);
    }
}

/// Hessian of a functional by central differences of its gradient.
pub(crate) fn fd_hessian<G>(mut grad: G, x: &[f64], rel_step: f64) -> DMatrix<f64>
where
    G: FnMut(&[f64], &mut [f64]),
{
    let n = x.len();
    let mut h = DMatrix::zeros(n, n);
    let mut xp = x.to_vec();
    let mut gp = vec![0.0; n];
    let mut gm = vec![0.0; n];
    for j in 0..n {
        let dh = rel_step * x[j].abs().max(1e-3);
        xp[j] = x[j] + dh;
        grad(&xp, &mut gp);
        xp[j] = x[j] - dh;
        grad(&xp, &mut gm);
        xp[j] = x[j];
        for i in 0..n {
            h[(i, j)] = (gp[i] - gm[i]) / (2.0 * dh);
        }
    }
    (&h + h.transpose()) * 0.5
}

/// Damped Newton iteration for `∇f(x) = 0`.
///
/// Each step solves `H δ = −∇f` with a finite-difference Hessian and halves
/// the step until the gradient norm decreases. Converges to the nearby
/// critical point regardless of its Morse index, which is what saddle
/// refinement needs.
pub(crate) fn newton<F>(mut f: F, x0: Vec<f64>, tol: f64, max_iters: usize) -> Iterate
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0;
    let mut g = vec![0.0; n];
    let mut value = f(&x, &mut g);
    let mut grad_norm = norm2(&g);
    let mut trial = vec![0.0; n];
    let mut g_trial = vec![0.0; n];
    let mut iterations = 0;
    while grad_norm > tol && iterations < max_iters {
        let h = fd_hessian(
            |y, out| {
                f(y, out);
            },
            &x,
            1e-6,
        );
        let rhs = DVector::from_iterator(n, g.iter().map(|v| -v));
        let delta = match h.lu().solve(&rhs) {
            Some(d) if d.iter().all(|v| v.is_finite()) => d,
            _ => break,
        };
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            for i in 0..n {
                trial[i] = x[i] + t * delta[i];
            }
            let v = f(&trial, &mut g_trial);
            let gn = norm2(&g_trial);
            if v.is_finite() && gn < grad_norm {
                improved = true;
                value = v;
                grad_norm = gn;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
        core::mem::swap(&mut x, &mut trial);
        core::mem::swap(&mut g, &mut g_trial);
        iterations += 1;
    }
    Iterate { x, value, grad_norm, iterations, converged: grad_norm <= tol }
}
