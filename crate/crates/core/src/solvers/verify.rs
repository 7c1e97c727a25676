//! Independent check of a computed solution.
//!
//! The pointwise residual at `x ∈ Ω` is obtained by pairing `u` with the
//! delta test function at `x` in the weak definition of `ℒ_{m,s}`, dividing
//! by `μ(x)` and subtracting the nonlinear terms. It does not reuse the
//! energy gradient used by the solvers.

use alloc::string::String;
use alloc::vec::Vec;

use super::{Problem, Solution, NEHARI_TOL};
use crate::analysis::semi_trivial_bound;
use crate::calculus::{weak_pairing, OperatorOrder};
use crate::error::{Error, Result};
use crate::functionals::{
    grad_equation, grad_system, nehari_classify, Functional, NehariClass, Side, SystemFunctional,
};
use crate::graph::{DirichletDomain, GraphFunction};
use crate::math::{abs_pow, norm2, signed_pow};

/// Pointwise residual of one component at one interior vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexResidual {
    pub vertex: String,
    pub local: usize,
    /// `U` for the first equation, `V` for the second.
    pub component: Side,
    pub residual: f64,
}

/// Norm bound for a semi-trivial solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiTrivialCheck {
    /// The nonzero side.
    pub side: Side,
    pub norm: f64,
    pub bound: f64,
    /// `norm ≤ bound` up to a relative `1e-10`.
    pub holds: bool,
}

/// Outcome of [`verify_solution`].
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    /// Euclidean norm of the coordinate gradient `μ·g`.
    pub weak_residual: f64,
    pub max_pointwise_u: f64,
    pub max_pointwise_v: Option<f64>,
    /// Every interior residual, `u` first.
    pub residuals: Vec<VertexResidual>,
    /// Residuals above the tolerance.
    pub failures: Vec<VertexResidual>,
    pub trivial: bool,
    /// The side that is nonzero when exactly one component vanishes.
    pub semi_trivial: Option<Side>,
    pub bound: Option<SemiTrivialCheck>,
    pub nehari: Option<NehariClass>,
    pub tol: f64,
    pub passed: bool,
}

fn delta(domain: &DirichletDomain, x: usize) -> GraphFunction {
    let mut d = GraphFunction::zeros(domain);
    d.values_mut()[x] = 1.0;
    d
}

/// `ℒ_{m,s}u(x) + a(x)|u|^{s−2}u(x)` at every interior vertex, from the weak
/// pairing with delta test functions.
fn operator_values(
    domain: &DirichletDomain,
    u: &GraphFunction,
    m: u32,
    s: f64,
    potential: Option<&[f64]>,
) -> Result<Vec<f64>> {
    let order = OperatorOrder::new(m, s)?;
    (0..domain.n_interior())
        .map(|x| {
            let mut l = weak_pairing(domain, u, &delta(domain, x), order)? / domain.mu(x);
            if let Some(a) = potential {
                l += a[x] * signed_pow(u.get(x), s);
            }
            Ok(l)
        })
        .collect()
}

/// Euclidean norm of `μ·g` over `Ω`.
fn weighted_norm(domain: &DirichletDomain, g: &GraphFunction) -> f64 {
    let mg: Vec<f64> = g.interior().iter().zip(domain.interior_measures()).map(|(g, mu)| g * mu).collect();
    norm2(&mg)
}

fn collect(
    out: &mut Vec<VertexResidual>,
    domain: &DirichletDomain,
    component: Side,
    values: impl Iterator<Item = f64>,
) -> f64 {
    let mut max: f64 = 0.0;
    for (x, r) in values.enumerate() {
        let r = r.abs();
        max = if r.is_nan() { f64::NAN } else { max.max(r) };
        out.push(VertexResidual { vertex: domain.id(x).into(), local: x, component, residual: r });
    }
    max
}

/// Verifies `solution` against `problem` with tolerance `tol`.
///
/// Passes iff the weak residual and every pointwise residual are at most
/// `tol`. For semi-trivial system solutions the norm bound is evaluated when
/// an embedding constant is supplied; it is reported, not part of the verdict.
pub fn verify_solution(
    domain: &DirichletDomain,
    solution: &Solution,
    problem: Problem<'_>,
    tol: f64,
    embedding: Option<f64>,
) -> Result<Verification> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter("tol must be nonnegative"));
    }
    let mut residuals = Vec::new();
    let (weak_residual, max_u, max_v, trivial, semi_trivial, bound, nehari) = match (solution, problem) {
        (Solution::System { u, v }, Problem::System(prm)) => {
            let (gu, gv) = grad_system(domain, u, v, prm)?;
            let weak = libm::hypot(weighted_norm(domain, &gu), weighted_norm(domain, &gv));
            let pot_u = prm.potentials.as_ref().map(|(a, _)| a.as_slice());
            let pot_v = prm.potentials.as_ref().map(|(_, b)| b.as_slice());
            let lu = operator_values(domain, u, prm.m1, prm.p, pot_u)?;
            let lv = operator_values(domain, v, prm.m2, prm.q, pot_v)?;
            let ab = prm.alpha + prm.beta;
            let ru = (0..domain.n_interior()).map(|x| {
                let (ux, vx) = (u.get(x), v.get(x));
                lu[x]
                    - prm.lambda1 * prm.h1[x] * signed_pow(ux, prm.gamma1)
                    - prm.alpha / ab * prm.c[x] * signed_pow(ux, prm.alpha) * abs_pow(vx, prm.beta)
            });
            let max_u = collect(&mut residuals, domain, Side::U, ru);
            let rv = (0..domain.n_interior()).map(|x| {
                let (ux, vx) = (u.get(x), v.get(x));
                lv[x]
                    - prm.lambda2 * prm.h2[x] * signed_pow(vx, prm.gamma2)
                    - prm.beta / ab * prm.c[x] * abs_pow(ux, prm.alpha) * signed_pow(vx, prm.beta)
            });
            let max_v = collect(&mut residuals, domain, Side::V, rv);
            let (zu, zv) = (u.is_zero(), v.is_zero());
            let semi = match (zu, zv) {
                (false, true) => Some(Side::U),
                (true, false) => Some(Side::V),
                _ => None,
            };
            let bound = match (semi, embedding) {
                (Some(side), Some(c)) => {
                    let f = SystemFunctional::new(domain, prm)?;
                    let x: Vec<f64> = u.interior().iter().chain(v.interior()).copied().collect();
                    let norm = f.norm(&x);
                    let b = semi_trivial_bound(prm, side, c);
                    Some(SemiTrivialCheck { side, norm, bound: b, holds: norm <= b * (1.0 + 1e-10) })
                }
                _ => None,
            };
            (weak, max_u, Some(max_v), zu && zv, semi, bound, None)
        }
        (Solution::Equation { u }, Problem::Equation(prm)) => {
            let g = grad_equation(domain, u, prm)?;
            let weak = weighted_norm(domain, &g);
            let lu = operator_values(domain, u, prm.m, prm.p, prm.potential.as_deref())?;
            let ru = (0..domain.n_interior()).map(|x| {
                let ux = u.get(x);
                lu[x] - prm.lambda * prm.h[x] * signed_pow(ux, prm.gamma) - prm.c[x] * signed_pow(ux, prm.alpha)
            });
            let max_u = collect(&mut residuals, domain, Side::U, ru);
            let zero = u.is_zero();
            let nehari = if zero { None } else { Some(nehari_classify(domain, u, prm, NEHARI_TOL)?) };
            (weak, max_u, None, zero, None, None, nehari)
        }
        (Solution::System { .. }, Problem::Equation(_)) => return Err(Error::WrongProblemKind("an equation solution")),
        (Solution::Equation { .. }, Problem::System(_)) => return Err(Error::WrongProblemKind("a system solution")),
    };
    let failures: Vec<VertexResidual> = residuals.iter().filter(|r| !(r.residual <= tol)).cloned().collect();
    let passed = weak_residual <= tol && failures.is_empty();
    Ok(Verification {
        weak_residual,
        max_pointwise_u: max_u,
        max_pointwise_v: max_v,
        residuals,
        failures,
        trivial,
        semi_trivial,
        bound,
        nehari,
        tol,
        passed,
    })
}
