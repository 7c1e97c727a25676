//! Negative-energy critical point: descent inside the closed `ρ`-ball.

use alloc::vec::Vec;

use super::{make_report, minimize, Classification, Objective, Problem, SolveConfig, SolveReport};
use crate::error::{Error, Result};
use crate::functionals::Functional;
use crate::graph::DirichletDomain;

const MAX_HALVINGS: usize = 200;

/// Minimizes the energy over `‖(u,v)‖ ≤ ρ` starting from the all-ones
/// direction.
///
/// `rho = None` falls back to `ρ = 1` and flags the report. When every
/// concave parameter vanishes the energy is positive near `0`; the descent
/// then collapses to the zero solution and the report is classified
/// [`Classification::Trivial`].
pub fn solve_negative(
    domain: &DirichletDomain,
    problem: Problem<'_>,
    rho: Option<f64>,
    config: &SolveConfig,
) -> Result<SolveReport> {
    let f = Objective::new(domain, problem)?;
    let dir = f.ones();
    run(domain, &f, dir, rho, config)
}

/// As [`solve_negative`] from a caller-chosen direction (interior values,
/// `u` then `v` for systems).
pub fn solve_negative_from(
    domain: &DirichletDomain,
    problem: Problem<'_>,
    direction: &[f64],
    rho: Option<f64>,
    config: &SolveConfig,
) -> Result<SolveReport> {
    let f = Objective::new(domain, problem)?;
    if direction.len() != f.dim() {
        return Err(Error::LengthMismatch { expected: f.dim(), got: direction.len() });
    }
    run(domain, &f, direction.to_vec(), rho, config)
}

fn run(
    domain: &DirichletDomain,
    f: &Objective<'_>,
    dir: Vec<f64>,
    rho: Option<f64>,
    cfg: &SolveConfig,
) -> Result<SolveReport> {
    cfg.validate()?;
    let (rho, fallback) = match rho {
        Some(r) if r > 0.0 && r.is_finite() => (r, false),
        Some(_) => return Err(Error::InvalidParameter("rho must be positive")),
        None => (1.0, true),
    };
    if !(f.superlinear(&dir) > 0.0) {
        return Err(Error::CouplingVanishes);
    }
    let dn = f.norm(&dir);
    // Start halfway to the sphere and shrink until the energy is negative.
    let mut t = 0.5 * rho / dn;
    let mut found = false;
    for _ in 0..MAX_HALVINGS {
        let x: Vec<f64> = dir.iter().map(|d| t * d).collect();
        if f.energy(&x) < 0.0 {
            found = true;
            break;
        }
        t *= 0.5;
    }
    if !found && f.concave_active() {
        return Err(Error::CouplingVanishes);
    }
    let x0: Vec<f64> = dir.iter().map(|d| t * d).collect();
    let project = |x: &mut [f64]| {
        let n = f.norm(x);
        if n > rho {
            let s = rho / n;
            x.iter_mut().for_each(|v| *v *= s);
        }
    };
    let inside = |it: &super::descent::Iterate| f.norm(&it.x) <= rho && it.value < 0.0;
    let it = if found {
        minimize(f, x0, cfg, project, inside)
    } else {
        // Trivial limit: only `0` is critical near the origin.
        let ls = cfg.line_search();
        super::descent::descend(|x, g| f.eval(x, g), x0, f.measure(), &ls, cfg.grad_tol, cfg.max_iters, project)
    };
    let class = if found { Classification::from_energy(it.value) } else { Classification::Trivial };
    make_report(domain, f, &it.x, it.iterations, class, Some((rho, fallback)), 0, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{grad_system, SystemParams};
    use crate::graph::fixtures::*;

    fn fixture_params(n: usize, lambda: f64) -> SystemParams {
        SystemParams::with_unit_coefficients(n, (1, 1), (2.0, 2.0), (1.5, 1.5), (2.0, 2.0), (lambda, lambda))
    }

    #[test]
    fn single_interior_negative_solution() {
        let (_, d) = single();
        let prm = fixture_params(1, 0.05);
        let rep = solve_negative(&d, Problem::System(&prm), Some(0.689), &SolveConfig::default()).unwrap();
        assert!(rep.converged && rep.grad_norm < 1e-8, "{rep:?}");
        assert!(rep.energy < 0.0);
        assert!(rep.within_rho_ball);
        assert_eq!(rep.classification, Classification::NegativeEnergy);
        let (u, v) = match &rep.solution {
            super::super::Solution::System { u, v } => (u.clone(), v.clone()),
            _ => unreachable!(),
        };
        let (gu, gv) = grad_system(&d, &u, &v, &prm).unwrap();
        assert!(gu.get(0).abs() < 1e-8 && gv.get(0).abs() < 1e-8);
        // u = v = t with t - 0.05 sqrt(t) - t^3 = 0 near zero: t ≈ 0.0025.
        assert!((u.get(0) - 0.0025).abs() < 1e-4, "{}", u.get(0));
    }

    #[test]
    fn zero_direction_is_rejected() {
        let (_, d) = single();
        let prm = fixture_params(1, 0.05);
        let err = solve_negative_from(&d, Problem::System(&prm), &[0.0, 0.0], None, &SolveConfig::default());
        assert_eq!(err.unwrap_err(), Error::CouplingVanishes);
    }

    #[test]
    fn vanishing_lambda_collapses_to_zero() {
        let (_, d) = single();
        let prm = fixture_params(1, 0.0);
        let rep = solve_negative(&d, Problem::System(&prm), Some(0.5), &SolveConfig::default()).unwrap();
        assert_eq!(rep.classification, Classification::Trivial);
        assert!(rep.norm < 1e-6, "{rep:?}");
    }
}
