//! Positive-energy critical point by mountain-pass path deformation.
//!
//! The segment `0 → e` is discretized; at every sweep the highest interior
//! state takes one backtracking steepest-descent step (its displacement
//! capped by the local spacing) and the path is re-spread by arclength. When
//! the gradient at the maximum falls below the switch threshold, or the
//! maximum stalls, a damped Newton iteration on the gradient map polishes
//! it into a critical point.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{make_report, polish, Classification, Objective, Problem, SolveConfig, SolveReport};
use crate::error::{Error, Result};
use crate::functionals::Functional;
use crate::graph::DirichletDomain;
use crate::math::{dot, norm2};

const MAX_DOUBLINGS: usize = 200;
const STALL_WINDOW: usize = 200;

/// Runs every start and keeps the best one (see [`merge_mountain_pass`]).
pub fn solve_mountain_pass(
    domain: &DirichletDomain,
    problem: Problem<'_>,
    rho: Option<f64>,
    config: &SolveConfig,
) -> Result<SolveReport> {
    config.validate()?;
    let reports: Vec<Result<SolveReport>> =
        (0..config.starts).map(|i| mountain_pass_start(domain, problem, rho, config, i)).collect();
    merge_mountain_pass(reports)
}

/// Picks the converged positive-energy candidate with the smallest gradient
/// norm, then the lowest energy, then the lowest start index. Without such a
/// candidate the smallest-gradient report is returned unconverged.
pub fn merge_mountain_pass(reports: Vec<Result<SolveReport>>) -> Result<SolveReport> {
    let mut first_err = None;
    let mut ok = Vec::new();
    for r in reports {
        match r {
            Ok(rep) => ok.push(rep),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let key = |r: &SolveReport| (r.grad_norm, r.energy, r.start);
    let better = |a: &SolveReport, b: &SolveReport| key(a).partial_cmp(&key(b)) == Some(core::cmp::Ordering::Less);
    let good = |r: &SolveReport| r.converged && r.classification == Classification::PositiveEnergy;
    let mut best: Option<SolveReport> = None;
    for r in ok.iter().filter(|r| good(r)) {
        if best.as_ref().is_none_or(|b| better(r, b)) {
            best = Some(r.clone());
        }
    }
    if best.is_none() {
        for r in &ok {
            if best.as_ref().is_none_or(|b| better(r, b)) {
                best = Some(r.clone());
            }
        }
        if let Some(b) = best.as_mut() {
            b.converged = false;
        }
    }
    match (best, first_err) {
        (Some(b), _) => Ok(b),
        (None, Some(e)) => Err(e),
        (None, None) => Err(Error::InvalidParameter("no starts")),
    }
}

/// Direction of start `index`: all ones for start 0, a seeded positive
/// perturbation of it otherwise.
fn direction(f: &Objective<'_>, seed: u64, index: usize) -> Vec<f64> {
    let mut d = f.ones();
    if index > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        d.iter_mut().for_each(|x| *x += rng.gen_range(-0.75..0.75));
    }
    d
}

/// One mountain-pass run from the far endpoint of start `index`.
pub fn mountain_pass_start(
    domain: &DirichletDomain,
    problem: Problem<'_>,
    rho: Option<f64>,
    config: &SolveConfig,
    index: usize,
) -> Result<SolveReport> {
    config.validate()?;
    let f = Objective::new(domain, problem)?;
    let (rho, fallback) = match rho {
        Some(r) if r > 0.0 && r.is_finite() => (r, false),
        Some(_) => return Err(Error::InvalidParameter("rho must be positive")),
        None => (1.0, true),
    };
    let dir = direction(&f, config.seed, index);
    if !(f.superlinear(&dir) > 0.0) {
        return Err(Error::CouplingVanishes);
    }
    let e = far_endpoint(&f, &dir, rho)?;
    let (x, iterations) = deform(&f, e, config);
    let it = polish(|y, g| f.eval(y, g), x, config.grad_tol, config.newton_iters);
    let mut rep = make_report(
        domain,
        &f,
        &it.x,
        iterations + it.iterations,
        Classification::from_energy(it.value),
        Some((rho, fallback)),
        index,
        config,
    )?;
    // The far endpoint lies outside the ball; membership is not a goal here.
    rep.within_rho_ball = rep.norm <= rho;
    Ok(rep)
}

/// `e = z·d` with `φ(e) < 0` and `‖e‖ > ρ`, by doubling `z`.
fn far_endpoint(f: &Objective<'_>, dir: &[f64], rho: f64) -> Result<Vec<f64>> {
    let mut z = 2.0 * rho / f.norm(dir);
    for _ in 0..MAX_DOUBLINGS {
        let e: Vec<f64> = dir.iter().map(|d| z * d).collect();
        if f.energy(&e) < 0.0 && f.norm(&e) > rho {
            return Ok(e);
        }
        z *= 2.0;
    }
    Err(Error::NoFarEndpoint)
}

/// Path deformation; returns the final path maximum and the sweep count.
fn deform(f: &Objective<'_>, e: Vec<f64>, cfg: &SolveConfig) -> (Vec<f64>, usize) {
    let n = cfg.path_points;
    let dim = e.len();
    let mut path: Vec<Vec<f64>> = (0..n).map(|k| e.iter().map(|x| x * k as f64 / (n - 1) as f64).collect()).collect();
    let metric = f.measure();
    let mut g = vec![0.0; dim];
    let mut trial = vec![0.0; dim];
    let mut step = cfg.step_init;
    let mut best_max = f64::INFINITY;
    let mut last_improvement = 0;
    let mut sweeps = 0;
    let mut k_max = 1;
    while sweeps < cfg.max_iters {
        let energies: Vec<f64> = path[1..n - 1].iter().map(|x| f.energy(x)).collect();
        k_max = 1 + energies
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, &v)| if v > be { (i, v) } else { (bi, be) })
            .0;
        let value = f.eval(&path[k_max], &mut g);
        if norm2(&g) <= cfg.newton_switch {
            break;
        }
        if value < best_max - 1e-13 * value.abs().max(1.0) {
            best_max = value;
            last_improvement = sweeps;
        } else if sweeps - last_improvement > STALL_WINDOW {
            break;
        }
        let d: Vec<f64> = g.iter().zip(metric).map(|(gi, mi)| -gi / mi).collect();
        let d_norm = norm2(&d);
        let spacing = arclength(&path) / (n - 1) as f64;
        let mut t = step.min(spacing / d_norm);
        let slope = dot(&g, &d);
        let accepted = loop {
            for i in 0..dim {
                trial[i] = path[k_max][i] + t * d[i];
            }
            if f.energy(&trial) <= value + cfg.armijo_c * t * slope {
                break true;
            }
            t *= cfg.backtrack_factor;
            if t < 1e-18 {
                break false;
            }
        };
        if !accepted {
            break;
        }
        path[k_max].copy_from_slice(&trial);
        step = (t / cfg.backtrack_factor).min(cfg.step_init * 1e6);
        respread(&mut path);
        sweeps += 1;
    }
    (path.swap_remove(k_max), sweeps)
}

fn arclength(path: &[Vec<f64>]) -> f64 {
    path.windows(2).map(|w| dist(&w[0], &w[1])).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Redistributes the states uniformly in arclength along the polygon.
fn respread(path: &mut [Vec<f64>]) {
    let n = path.len();
    let mut cum = vec![0.0; n];
    for k in 1..n {
        cum[k] = cum[k - 1] + dist(&path[k - 1], &path[k]);
    }
    let total = cum[n - 1];
    if !(total > 0.0) {
        return;
    }
    let old: Vec<Vec<f64>> = path.to_vec();
    let mut seg = 0;
    for (k, state) in path.iter_mut().enumerate().take(n - 1).skip(1) {
        let s = total * k as f64 / (n - 1) as f64;
        while seg < n - 2 && cum[seg + 1] < s {
            seg += 1;
        }
        let len = cum[seg + 1] - cum[seg];
        let w = if len > 0.0 { (s - cum[seg]) / len } else { 0.0 };
        for (i, x) in state.iter_mut().enumerate() {
            *x = (1.0 - w) * old[seg][i] + w * old[seg + 1][i];
        }
    }
}
