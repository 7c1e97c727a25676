//! Numerical critical-point finders and solution verification.
//!
//! * [`solve_negative`]: Armijo descent inside the ball `‖u‖+‖v‖ ≤ ρ`,
//!   started on a short ray where the energy is already negative.
//! * [`solve_mountain_pass`]: path deformation from `0` to a far point of
//!   negative energy, with a Newton polish of the path maximum.
//! * [`solve_ground_state`]: minimization of the equation energy over the
//!   `𝒩+` part of the Nehari manifold through the fibering roots.
//! * [`solve_semi_trivial`]: critical points with one component frozen at 0.
//! * [`verify_solution`]: weak and pointwise residuals, trivial and
//!   semi-trivial detection, Nehari class.
//!
//! Every routine is deterministic for a given [`SolveConfig::seed`].

pub(crate) mod descent;
mod ground_state;
mod mountain_pass;
mod negative;
mod semi_trivial;
mod verify;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::functionals::{EquationFunctional, EquationParams, Functional, NehariClass, SystemFunctional, SystemParams};
use crate::graph::{DirichletDomain, GraphFunction};
use crate::math::norm2;
use descent::LineSearch;

pub use ground_state::{fibering_roots, fibering_roots_of, ground_state_start, merge_ground_state, solve_ground_state};
pub use mountain_pass::{merge_mountain_pass, mountain_pass_start, solve_mountain_pass};
pub use negative::{solve_negative, solve_negative_from};
pub use semi_trivial::solve_semi_trivial;
pub use verify::{verify_solution, SemiTrivialCheck, Verification, VertexResidual};

/// Iteration controls shared by all solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    /// Stop when the Euclidean norm of the coordinate gradient is below this.
    pub grad_tol: f64,
    pub max_iters: usize,
    /// Number of states on a mountain-pass path, endpoints included.
    pub path_points: usize,
    pub starts: usize,
    pub seed: u64,
    pub step_init: f64,
    pub backtrack_factor: f64,
    pub armijo_c: f64,
    /// Gradient norm below which first-order iterations hand over to Newton.
    pub newton_switch: f64,
    pub newton_iters: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            grad_tol: 1e-10,
            max_iters: 20_000,
            path_points: 25,
            starts: 4,
            seed: 0,
            step_init: 1.0,
            backtrack_factor: 0.5,
            armijo_c: 1e-4,
            newton_switch: 1e-4,
            newton_iters: 100,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidParameter("grad_tol must be positive"));
        }
        if self.max_iters == 0 || self.starts == 0 {
            return Err(Error::InvalidParameter("max_iters and starts must be positive"));
        }
        if self.path_points < 3 {
            return Err(Error::InvalidParameter("path_points must be at least 3"));
        }
        if !(self.step_init > 0.0) {
            return Err(Error::InvalidParameter("step_init must be positive"));
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return Err(Error::InvalidParameter("backtrack_factor must lie in (0, 1)"));
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return Err(Error::InvalidParameter("armijo_c must lie in (0, 1)"));
        }
        if !(self.newton_switch > 0.0) {
            return Err(Error::InvalidParameter("newton_switch must be positive"));
        }
        Ok(())
    }

    pub(crate) fn line_search(&self) -> LineSearch {
        LineSearch { step_init: self.step_init, backtrack: self.backtrack_factor, armijo_c: self.armijo_c }
    }
}

/// Which problem a solver works on.
#[derive(Debug, Clone, Copy)]
pub enum Problem<'a> {
    System(&'a SystemParams),
    Equation(&'a EquationParams),
}

/// A computed critical point.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    System { u: GraphFunction, v: GraphFunction },
    Equation { u: GraphFunction },
}

impl Solution {
    pub fn u(&self) -> &GraphFunction {
        match self {
            Solution::System { u, .. } | Solution::Equation { u } => u,
        }
    }

    pub fn v(&self) -> Option<&GraphFunction> {
        match self {
            Solution::System { v, .. } => Some(v),
            Solution::Equation { .. } => None,
        }
    }
}

/// Energy-based label of a solver outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    PositiveEnergy,
    NegativeEnergy,
    GroundStateCandidate,
    /// The iteration collapsed to the zero solution.
    Trivial,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::PositiveEnergy => "positive_energy",
            Classification::NegativeEnergy => "negative_energy",
            Classification::GroundStateCandidate => "ground_state_candidate",
            Classification::Trivial => "trivial",
        }
    }

    fn from_energy(e: f64) -> Self {
        if e > 0.0 {
            Classification::PositiveEnergy
        } else if e < 0.0 {
            Classification::NegativeEnergy
        } else {
            Classification::Trivial
        }
    }
}

/// Outcome of a solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Solution,
    pub energy: f64,
    /// Euclidean norm of the coordinate gradient `μ·g`.
    pub grad_norm: f64,
    pub iterations: usize,
    pub classification: Classification,
    /// Nehari class (equation problems).
    pub nehari: Option<NehariClass>,
    /// Norm of the solution in the product space.
    pub norm: f64,
    /// Radius of the ball used by the negative-energy solver (or the far
    /// endpoint search); `None` for the ground-state search.
    pub rho: Option<f64>,
    /// `ρ` was not supplied and the fallback `ρ = 1` was used.
    pub rho_fallback: bool,
    pub within_rho_ball: bool,
    pub converged: bool,
    /// Energy of the `𝒩−` point on the ground state's fibering ray.
    pub companion_energy: Option<f64>,
    /// Index of the start that produced the report.
    pub start: usize,
    pub seed: u64,
}

/// Object-safe wrapper over the two concrete functionals.
pub(crate) enum Objective<'a> {
    System(SystemFunctional<'a>),
    Equation(EquationFunctional<'a>),
}

impl<'a> Objective<'a> {
    pub(crate) fn new(domain: &'a DirichletDomain, problem: Problem<'a>) -> Result<Self> {
        Ok(match problem {
            Problem::System(p) => Objective::System(SystemFunctional::new(domain, p)?),
            Problem::Equation(p) => Objective::Equation(EquationFunctional::new(domain, p)?),
        })
    }

    pub(crate) fn solution(&self, domain: &DirichletDomain, x: &[f64]) -> Result<Solution> {
        Ok(match self {
            Objective::System(_) => {
                let (u, v) = x.split_at(domain.n_interior());
                Solution::System {
                    u: GraphFunction::from_interior(domain, u)?,
                    v: GraphFunction::from_interior(domain, v)?,
                }
            }
            Objective::Equation(_) => Solution::Equation { u: GraphFunction::from_interior(domain, x)? },
        })
    }

    /// Default direction with a nonvanishing superlinear term.
    pub(crate) fn ones(&self) -> Vec<f64> {
        vec![1.0; self.dim()]
    }

    /// `∫c|u|^α|v|^β` (system) or `∫c|u|^α` (equation).
    pub(crate) fn superlinear(&self, x: &[f64]) -> f64 {
        match self {
            Objective::System(f) => f.coupling(x),
            Objective::Equation(f) => f.fibering(x).b,
        }
    }

    pub(crate) fn concave_active(&self) -> bool {
        match self {
            Objective::System(f) => f.params().lambda1 > 0.0 || f.params().lambda2 > 0.0,
            Objective::Equation(f) => f.params().lambda > 0.0,
        }
    }
}

impl Functional for Objective<'_> {
    fn dim(&self) -> usize {
        match self {
            Objective::System(f) => f.dim(),
            Objective::Equation(f) => f.dim(),
        }
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        match self {
            Objective::System(f) => f.eval(x, grad),
            Objective::Equation(f) => f.eval(x, grad),
        }
    }

    fn measure(&self) -> &[f64] {
        match self {
            Objective::System(f) => f.measure(),
            Objective::Equation(f) => f.measure(),
        }
    }

    fn norm(&self, x: &[f64]) -> f64 {
        match self {
            Objective::System(f) => f.norm(x),
            Objective::Equation(f) => f.norm(x),
        }
    }
}

/// Newton polish to the round-off floor; `converged` is judged against
/// `tol`.
pub(crate) fn polish<F>(f: F, x0: Vec<f64>, tol: f64, max_iters: usize) -> descent::Iterate
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let it = descent::newton(f, x0, 0.0, max_iters);
    descent::Iterate { converged: it.grad_norm <= tol, ..it }
}

/// First-order descent to `newton_switch`, then Newton to the round-off
/// floor; falls back to continued descent when Newton stalls above
/// `grad_tol`. `accept` vets the Newton iterate (for example ball membership
/// or energy sign).
pub(crate) fn minimize<P, A>(
    f: &Objective<'_>,
    x0: Vec<f64>,
    cfg: &SolveConfig,
    mut project: P,
    accept: A,
) -> descent::Iterate
where
    P: FnMut(&mut [f64]),
    A: Fn(&descent::Iterate) -> bool,
{
    let ls = cfg.line_search();
    let eval = |x: &[f64], g: &mut [f64]| f.eval(x, g);
    let switch = cfg.newton_switch.max(cfg.grad_tol);
    let first = descent::descend(eval, x0, f.measure(), &ls, switch, cfg.max_iters, &mut project);
    let polished = polish(eval, first.x.clone(), cfg.grad_tol, cfg.newton_iters);
    if polished.converged && accept(&polished) {
        return descent::Iterate { iterations: first.iterations + polished.iterations, ..polished };
    }
    let rest = cfg.max_iters.saturating_sub(first.iterations).max(1);
    let second = descent::descend(eval, first.x, f.measure(), &ls, cfg.grad_tol, rest, &mut project);
    let iterations = first.iterations + second.iterations;
    let polished = polish(eval, second.x.clone(), cfg.grad_tol, cfg.newton_iters);
    if polished.converged && accept(&polished) {
        descent::Iterate { iterations: iterations + polished.iterations, ..polished }
    } else {
        descent::Iterate { iterations, ..second }
    }
}

/// Assembles a report for iterate `x`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn make_report(
    domain: &DirichletDomain,
    f: &Objective<'_>,
    x: &[f64],
    iterations: usize,
    classification: Classification,
    rho: Option<(f64, bool)>,
    start: usize,
    cfg: &SolveConfig,
) -> Result<SolveReport> {
    let mut g = vec![0.0; f.dim()];
    let energy = f.eval(x, &mut g);
    let grad_norm = norm2(&g);
    let norm = f.norm(x);
    let nehari = match f {
        Objective::Equation(e) if x.iter().any(|&v| v != 0.0) => {
            Some(crate::functionals::classify_triple(&e.fibering(x), NEHARI_TOL))
        }
        _ => None,
    };
    Ok(SolveReport {
        solution: f.solution(domain, x)?,
        energy,
        grad_norm,
        iterations,
        classification,
        nehari,
        norm,
        rho: rho.map(|r| r.0),
        rho_fallback: rho.is_some_and(|r| r.1),
        within_rho_ball: rho.is_some_and(|r| norm <= r.0 * (1.0 + 1e-12)),
        converged: grad_norm <= cfg.grad_tol,
        companion_energy: None,
        start,
        seed: cfg.seed,
    })
}

/// Relative tolerance of the Nehari classification attached to reports.
pub const NEHARI_TOL: f64 = 1e-8;
