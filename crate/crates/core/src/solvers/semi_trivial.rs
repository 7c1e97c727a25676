//! Semi-trivial solutions: one component frozen at `0`.
//!
//! With `v = 0` the coupling drops out (β > 1) and `φ(u, 0)` is coercive, so
//! its global minimizer is a critical point of the full system. It is reached
//! by descent from a short ray of negative energy followed by a Newton polish.

use alloc::vec::Vec;

use super::{make_report, polish, Classification, Objective, Problem, SolveConfig, SolveReport};
use crate::error::Result;
use crate::functionals::{Functional, SemiTrivialFunctional, Side, SystemParams};
use crate::graph::DirichletDomain;

const MAX_HALVINGS: usize = 200;

/// Minimizes `φ(u, 0)` (side `U`) or `φ(0, v)` (side `V`).
///
/// The report is a system solution whose frozen component is identically
/// zero; its gradient norm is that of the full system. When the concave
/// parameter of the free side vanishes, the minimizer is `0` and the report
/// is classified [`Classification::Trivial`].
pub fn solve_semi_trivial(
    domain: &DirichletDomain,
    params: &SystemParams,
    side: Side,
    config: &SolveConfig,
) -> Result<SolveReport> {
    config.validate()?;
    let f = SemiTrivialFunctional::new(domain, params, side)?;
    let full = Objective::new(domain, Problem::System(params))?;
    let dir = alloc::vec![1.0; f.dim()];
    let mut t = 0.5 / f.norm(&dir);
    let mut found = false;
    for _ in 0..MAX_HALVINGS {
        let x: Vec<f64> = dir.iter().map(|d| t * d).collect();
        if f.energy(&x) < 0.0 {
            found = true;
            break;
        }
        t *= 0.5;
    }
    let x0: Vec<f64> = dir.iter().map(|d| t * d).collect();
    let ls = config.line_search();
    let eval = |x: &[f64], g: &mut [f64]| f.eval(x, g);
    let switch = config.newton_switch.max(config.grad_tol);
    let tol = if found { switch } else { config.grad_tol };
    let d = super::descent::descend(eval, x0, f.measure(), &ls, tol, config.max_iters, |_: &mut [f64]| {});
    let (x, iterations) = if found {
        let it = polish(eval, d.x.clone(), config.grad_tol, config.newton_iters);
        if it.converged && it.value < 0.0 {
            (it.x, d.iterations + it.iterations)
        } else {
            let rest = config.max_iters.saturating_sub(d.iterations).max(1);
            let d2 = super::descent::descend(eval, d.x, f.measure(), &ls, config.grad_tol, rest, |_: &mut [f64]| {});
            (d2.x, d.iterations + it.iterations + d2.iterations)
        }
    } else {
        (d.x, d.iterations)
    };
    let class = if found { Classification::from_energy(f.energy(&x)) } else { Classification::Trivial };
    make_report(domain, &full, &f.embed(&x), iterations, class, None, 0, config)
}
