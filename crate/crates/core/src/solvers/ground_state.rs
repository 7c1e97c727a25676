//! Ground state of the single equation: minimization of `J` over `𝒩+`.
//!
//! A direction `w` on the unit sphere is mapped to `t+(w)·w ∈ 𝒩+`, where
//! `t+` is the smaller root of the fibering derivative. The reduced energy
//! `E(w) = J(t+(w) w)` is minimized by projected descent; its gradient is
//! `t+ ∇J(t+ w)` because `G_w'(t+) = 0`. A Newton polish on the full
//! gradient confirms criticality.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{make_report, polish, Classification, Objective, Problem, SolveConfig, SolveReport};
use crate::error::{Error, Result};
use crate::functionals::{fibering_map, EquationFunctional, EquationParams, FiberingMap, Functional, NehariTag};
use crate::graph::{DirichletDomain, GraphFunction};

const MAX_BISECTIONS: usize = 400;

/// Bisection of `ψ` on `[lo, hi]` with `ψ(lo) < 0 < ψ(hi)` or the reverse.
fn bisect(map: &FiberingMap, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let rising = map.reduced_deriv(lo) < 0.0;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tol * hi {
            break;
        }
        if (map.reduced_deriv(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The roots `t+ < t−` of `G'(t) = 0` for a scalar fibering map, to
/// relative tolerance `tol`.
///
/// Uses `ψ(t) = A t^{p−γ} − C − B t^{α−γ}`, which has the sign of `G'`, is
/// `−C < 0` at `0`, peaks at `t_m` and tends to `−∞`.
pub fn fibering_roots_of(map: &FiberingMap, tol: f64) -> Result<(f64, f64)> {
    if !(map.a > 0.0 && map.b > 0.0 && map.c > 0.0) {
        return Err(Error::NoTwoRoots);
    }
    let tm = map.reduced_peak();
    if !(map.reduced_deriv(tm) > 0.0) {
        return Err(Error::NoTwoRoots);
    }
    let t_plus = bisect(map, 0.0, tm, tol);
    let mut hi = 2.0 * tm;
    let mut grow = 0;
    while map.reduced_deriv(hi) >= 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 2000 {
            return Err(Error::NoTwoRoots);
        }
    }
    let t_minus = bisect(map, tm, hi, tol);
    Ok((t_plus, t_minus))
}

/// `(t+, t−)` for a nonzero Dirichlet `u`.
pub fn fibering_roots(
    domain: &DirichletDomain,
    u: &GraphFunction,
    params: &EquationParams,
    tol: f64,
) -> Result<(f64, f64)> {
    fibering_roots_of(&fibering_map(domain, u, params)?, tol)
}

/// Runs every start and keeps the lowest-energy ground-state candidate.
pub fn solve_ground_state(
    domain: &DirichletDomain,
    params: &EquationParams,
    config: &SolveConfig,
) -> Result<SolveReport> {
    config.validate()?;
    let reports: Vec<Result<SolveReport>> =
        (0..config.starts).map(|i| ground_state_start(domain, params, config, i)).collect();
    merge_ground_state(reports)
}

/// Lowest energy among converged candidates, then lowest start index.
pub fn merge_ground_state(reports: Vec<Result<SolveReport>>) -> Result<SolveReport> {
    let mut first_err = None;
    let mut best: Option<SolveReport> = None;
    let mut fallback: Option<SolveReport> = None;
    let lower = |a: &SolveReport, b: &Option<SolveReport>| b.as_ref().is_none_or(|b| a.energy < b.energy);
    for r in reports {
        match r {
            Ok(rep) if rep.converged && rep.classification == Classification::GroundStateCandidate => {
                if lower(&rep, &best) {
                    best = Some(rep);
                }
            }
            Ok(rep) => {
                if lower(&rep, &fallback) {
                    fallback = Some(rep);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    if let Some(b) = best {
        return Ok(b);
    }
    match (fallback, first_err) {
        (Some(mut f), _) => {
            f.converged = false;
            Ok(f)
        }
        (None, Some(e)) => Err(e),
        (None, None) => Err(Error::InvalidParameter("no starts")),
    }
}

fn initial(n: usize, seed: u64, index: usize) -> Vec<f64> {
    if index == 0 {
        return vec![1.0; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    (0..n)
        .map(|_| {
            let x: f64 = rng.gen_range(0.05..1.0);
            if index % 3 == 2 && rng.gen_bool(0.5) {
                -x
            } else {
                x
            }
        })
        .collect()
}

fn normalize(f: &EquationFunctional<'_>, w: &mut [f64]) {
    let n = f.norm(w);
    if n > 0.0 && n.is_finite() {
        w.iter_mut().for_each(|x| *x /= n);
    }
}

/// One fibering-scaled descent from start `index`.
pub fn ground_state_start(
    domain: &DirichletDomain,
    params: &EquationParams,
    config: &SolveConfig,
    index: usize,
) -> Result<SolveReport> {
    config.validate()?;
    let f = EquationFunctional::new(domain, params)?;
    let obj = Objective::new(domain, Problem::Equation(params))?;
    let mut w0 = initial(f.dim(), config.seed, index);
    normalize(&f, &mut w0);
    fibering_roots_of(&f.fibering(&w0), 1e-15)?;

    let reduced = |w: &[f64], g: &mut [f64]| -> f64 {
        let Ok((tp, _)) = fibering_roots_of(&f.fibering(w), 1e-15) else {
            g.iter_mut().for_each(|x| *x = 0.0);
            return f64::INFINITY;
        };
        let u: Vec<f64> = w.iter().map(|x| tp * x).collect();
        let e = f.eval(&u, g);
        g.iter_mut().for_each(|x| *x *= tp);
        e
    };
    let scale = |w: &[f64]| -> Vec<f64> {
        let tp = fibering_roots_of(&f.fibering(w), 1e-15).map(|r| r.0).unwrap_or(0.0);
        w.iter().map(|x| tp * x).collect()
    };
    let ls = config.line_search();
    let mut project = |w: &mut [f64]| normalize(&f, w);
    let switch = config.newton_switch.max(config.grad_tol);
    let d = super::descent::descend(reduced, w0, f.measure(), &ls, switch, config.max_iters, &mut project);
    let it = polish(|y, g| f.eval(y, g), scale(&d.x), config.grad_tol, config.newton_iters);
    let mut iterations = d.iterations + it.iterations;
    let mut x = it.x;
    if !it.converged {
        // Continue on the sphere to the full tolerance, then polish again.
        let rest = config.max_iters.saturating_sub(d.iterations).max(1);
        let d2 = super::descent::descend(reduced, d.x, f.measure(), &ls, config.grad_tol * 1e-2, rest, &mut project);
        let it2 = polish(|y, g| f.eval(y, g), scale(&d2.x), config.grad_tol, config.newton_iters);
        iterations += d2.iterations + it2.iterations;
        x = it2.x;
    }
    let energy = f.energy(&x);
    let map = f.fibering(&x);
    let nehari = crate::functionals::classify_triple(&map, super::NEHARI_TOL);
    let class = if energy < 0.0 && nehari.tag == NehariTag::Plus {
        Classification::GroundStateCandidate
    } else {
        Classification::from_energy(energy)
    };
    let mut rep = make_report(domain, &obj, &x, iterations, class, None, index, config)?;
    let mut w = x.clone();
    normalize(&f, &mut w);
    let wm = f.fibering(&w);
    rep.companion_energy = fibering_roots_of(&wm, 1e-15).ok().map(|(_, tm)| wm.value(tm));
    Ok(rep)
}
