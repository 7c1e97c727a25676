//! Embedding constants and the parameter conditions behind the existence
//! results: the system constants `M_(λ1,λ2)`, `M2`, the radius `ρ`, the four
//! inequalities on `(λ1, λ2)`, the equation thresholds `λ0`, `λ⋆`, `λ⋆⋆` and
//! the semi-trivial norm bound.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::lr_norm_raw;
use crate::error::{Error, Result};
use crate::functionals::{norm_power, norm_power_with_residual, EquationParams, Side, SystemParams};
use crate::graph::{DirichletDomain, GraphFunction};
use crate::math::{abs_pow, powf, signed_pow};
use crate::solvers::descent::{descend, LineSearch};

/// Where an embedding constant comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantSource {
    /// Closed form for `m = 1`, `s ≥ 2` when every interior vertex touches
    /// the boundary.
    ExplicitLemma22,
    /// Numerical lower bound on the best constant.
    BruteForce,
    /// Closed form on a whole finite graph with a positive potential.
    FiniteGraph,
    UserSupplied,
}

impl ConstantSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstantSource::ExplicitLemma22 => "explicit_lemma22",
            ConstantSource::BruteForce => "brute_force",
            ConstantSource::FiniteGraph => "finite_graph",
            ConstantSource::UserSupplied => "user_supplied",
        }
    }
}

/// A constant `C` with `‖u‖_{L^r} ≤ C ‖u‖_{W^{m,s}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingConstant {
    pub value: f64,
    pub source: ConstantSource,
    pub m: u32,
    pub s: f64,
    /// `None` when the constant serves every `r ∈ [1, ∞]`.
    pub r: Option<f64>,
}

impl EmbeddingConstant {
    pub fn supplied(value: f64, m: u32, s: f64, r: Option<f64>) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Self { value, source: ConstantSource::UserSupplied, m, s, r })
        } else {
            Err(Error::InvalidParameter("embedding constant must be positive"))
        }
    }
}

/// `C_{1,s}(Ω) = (1+|Ω|) μ̂_min^{-1/s} (2μ_max / w_min)^{1/2}`, valid for every
/// `r`.
pub fn explicit_embedding_constant(domain: &DirichletDomain, s: f64) -> Result<EmbeddingConstant> {
    if !domain.boundary_adjacency() {
        return Err(Error::BoundaryAdjacencyFails);
    }
    if !(s >= 2.0 && s.is_finite()) {
        return Err(Error::InvalidExponent("explicit constant needs s >= 2"));
    }
    let value = (1.0 + domain.omega_measure())
        * powf(domain.mu_min_interior(), -1.0 / s)
        * libm::sqrt(2.0 * domain.mu_max() / domain.w_min());
    Ok(EmbeddingConstant { value, source: ConstantSource::ExplicitLemma22, m: 1, s, r: None })
}

/// `C_s(V) = (Σ_V μ)^{1/s} / (μ_min h_min)^{1/s}` for a whole-graph problem
/// with potential `h`.
pub fn finite_graph_constants(domain: &DirichletDomain, potential: &[f64], s: f64) -> Result<EmbeddingConstant> {
    if domain.n_boundary() != 0 {
        return Err(Error::InvalidParameter("finite-graph constant needs an empty boundary"));
    }
    if potential.is_empty() {
        return Err(Error::InvalidParameter("potential must be nonempty"));
    }
    if potential.len() != domain.n_interior() {
        return Err(Error::LengthMismatch { expected: domain.n_interior(), got: potential.len() });
    }
    if potential.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::NonpositiveCoefficient("potential"));
    }
    if !(s > 1.0) {
        return Err(Error::InvalidExponent("s must be > 1"));
    }
    let total: f64 = domain.interior_measures().iter().sum();
    let h_min = potential.iter().copied().fold(f64::INFINITY, f64::min);
    let value = powf(total, 1.0 / s) / powf(domain.mu_min() * h_min, 1.0 / s);
    Ok(EmbeddingConstant { value, source: ConstantSource::FiniteGraph, m: 0, s, r: Some(s) })
}

// ----------------------------------------------------------------------
// Brute-force embedding constant.

/// Settings of the multi-start Rayleigh-quotient ascent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceOptions {
    pub starts: usize,
    pub max_iters: usize,
    /// Gradient tolerance on the normalized log-ratio.
    pub tol: f64,
    pub seed: u64,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        Self { starts: 50, max_iters: 4000, tol: 1e-9, seed: 0 }
    }
}

/// Result of one start.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceStart {
    pub ratio: f64,
    pub maximizer: Vec<f64>,
    pub converged: bool,
}

/// Best ratio over all starts; `constant.value` is a lower bound on the best
/// embedding constant, attained at `maximizer`.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub constant: EmbeddingConstant,
    pub maximizer: GraphFunction,
    pub converged: bool,
    pub starts: usize,
}

/// The embedding problem `sup ‖u‖_{L^r} / ‖u‖_W` on a domain.
#[derive(Debug, Clone, Copy)]
pub struct EmbeddingProblem<'a> {
    pub domain: &'a DirichletDomain,
    pub m: u32,
    pub s: f64,
    /// `f64::INFINITY` selects the max norm.
    pub r: f64,
    /// Potential of the whole-graph norm, if any.
    pub potential: Option<&'a [f64]>,
}

impl EmbeddingProblem<'_> {
    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidParameter("order m must be at least 1"));
        }
        if !(self.s > 1.0 && self.s.is_finite()) {
            return Err(Error::InvalidExponent("s must be > 1"));
        }
        if self.r.is_nan() || self.r < 1.0 {
            return Err(Error::InvalidExponent("r must be >= 1"));
        }
        if !self.domain.supports_order(self.m) {
            return Err(Error::DomainNotClosed(self.m));
        }
        if let Some(a) = self.potential {
            if a.len() != self.domain.n_interior() {
                return Err(Error::LengthMismatch { expected: self.domain.n_interior(), got: a.len() });
            }
            if a.iter().any(|&x| !(x > 0.0)) {
                return Err(Error::NonpositiveCoefficient("potential"));
            }
        } else if self.domain.n_boundary() == 0 {
            return Err(Error::InvalidParameter("norm degenerates without boundary or potential"));
        }
        Ok(())
    }

    fn ratio(&self, u: &[f64]) -> f64 {
        let w = powf(norm_power(self.domain, u, self.m, self.s, self.potential), 1.0 / self.s);
        lr_norm_raw(self.domain, u, self.r).unwrap_or(0.0) / w
    }

    /// Number of starts used: one per interior vertex for `r = ∞`, where each
    /// start solves a convex problem exactly.
    pub fn start_count(&self, opts: &BruteForceOptions) -> usize {
        if self.r == f64::INFINITY {
            self.domain.n_interior()
        } else {
            opts.starts.max(1)
        }
    }

    /// Runs start number `index`; deterministic in `(opts.seed, index)`.
    pub fn run_start(&self, opts: &BruteForceOptions, index: usize) -> Result<BruteForceStart> {
        self.validate()?;
        if self.r == f64::INFINITY {
            Ok(self.pinned_start(opts, index % self.domain.n_interior()))
        } else {
            Ok(self.ascent_start(opts, index))
        }
    }

    fn initial(&self, opts: &BruteForceOptions, index: usize) -> Vec<f64> {
        let n = self.domain.n_interior();
        match index {
            0 => vec![1.0; n],
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(index as u64);
                let positive = index % 2 == 1;
                (0..n)
                    .map(|_| {
                        let x: f64 = rng.gen_range(0.05..1.0);
                        if positive || rng.gen_bool(0.5) {
                            x
                        } else {
                            -x
                        }
                    })
                    .collect()
            }
        }
    }

    /// Gradient ascent of `log(‖u‖_{L^r}/‖u‖_W)` on the unit sphere of `W`.
    fn ascent_start(&self, opts: &BruteForceOptions, index: usize) -> BruteForceStart {
        let (dom, m, s, r, pot) = (self.domain, self.m, self.s, self.r, self.potential);
        let objective = |u: &[f64], g: &mut [f64]| -> f64 {
            let (e, res) = norm_power_with_residual(dom, u, m, s, pot);
            let sr: f64 = u.iter().zip(dom.interior_measures()).map(|(x, mu)| abs_pow(*x, r) * mu).sum();
            if !(e > 0.0 && sr > 0.0) {
                g.iter_mut().for_each(|x| *x = 0.0);
                return f64::INFINITY;
            }
            for i in 0..u.len() {
                let mu = dom.mu(i);
                g[i] = -(mu * signed_pow(u[i], r) / sr - mu * res[i] / e);
            }
            -(libm::log(sr) / r - libm::log(e) / s)
        };
        let normalize = |u: &mut [f64]| {
            let w = powf(norm_power(dom, u, m, s, pot), 1.0 / s);
            if w > 0.0 && w.is_finite() {
                u.iter_mut().for_each(|x| *x /= w);
            }
        };
        let ls = LineSearch { step_init: 1.0, backtrack: 0.5, armijo_c: 1e-4 };
        let it = descend(
            objective,
            self.initial(opts, index),
            dom.interior_measures(),
            &ls,
            opts.tol,
            opts.max_iters,
            normalize,
        );
        BruteForceStart { ratio: self.ratio(&it.x), converged: it.converged, maximizer: it.x }
    }

    /// `min ‖u‖_W^s` subject to `u(x) = 1`; gives `max|u| / ‖u‖_W`.
    fn pinned_start(&self, opts: &BruteForceOptions, vertex: usize) -> BruteForceStart {
        let (dom, m, s, pot) = (self.domain, self.m, self.s, self.potential);
        let energy = |u: &[f64], g: &mut [f64]| -> f64 {
            let (e, res) = norm_power_with_residual(dom, u, m, s, pot);
            for i in 0..u.len() {
                g[i] = if i == vertex { 0.0 } else { s * dom.mu(i) * res[i] };
            }
            e
        };
        let pin = |u: &mut [f64]| u[vertex] = 1.0;
        let mut x0 = vec![0.0; dom.n_interior()];
        x0[vertex] = 1.0;
        let ls = LineSearch { step_init: 1.0, backtrack: 0.5, armijo_c: 1e-4 };
        // The energy scale is fixed by the pin, so the tolerance is absolute.
        let it = descend(energy, x0, dom.interior_measures(), &ls, opts.tol, opts.max_iters, pin);
        BruteForceStart { ratio: self.ratio(&it.x), converged: it.converged, maximizer: it.x }
    }

    /// Merges per-start results with a deterministic tie-break (largest ratio,
    /// then lowest start index).
    pub fn merge(&self, starts: &[BruteForceStart]) -> Result<BruteForceResult> {
        let best = starts
            .iter()
            .filter(|s| s.ratio.is_finite())
            .fold(None::<&BruteForceStart>, |acc, s| match acc {
                Some(b) if b.ratio >= s.ratio => Some(b),
                _ => Some(s),
            })
            .ok_or(Error::InvalidParameter("no start produced a finite ratio"))?;
        Ok(BruteForceResult {
            constant: EmbeddingConstant {
                value: best.ratio,
                source: ConstantSource::BruteForce,
                m: self.m,
                s: self.s,
                r: Some(self.r),
            },
            maximizer: GraphFunction::from_interior(self.domain, &best.maximizer)?,
            converged: best.converged,
            starts: starts.len(),
        })
    }
}

/// Best ratio `‖u‖_{L^r} / ‖u‖_{W_0^{m,s}}` over nonzero Dirichlet `u`,
/// approximated from below by multi-start ascent.
pub fn brute_force_embedding_constant(
    domain: &DirichletDomain,
    m: u32,
    s: f64,
    r: f64,
    opts: &BruteForceOptions,
) -> Result<BruteForceResult> {
    brute_force_with_potential(domain, m, s, r, None, opts)
}

/// As [`brute_force_embedding_constant`] for the whole-graph norm with a
/// potential.
pub fn brute_force_with_potential(
    domain: &DirichletDomain,
    m: u32,
    s: f64,
    r: f64,
    potential: Option<&[f64]>,
    opts: &BruteForceOptions,
) -> Result<BruteForceResult> {
    let problem = EmbeddingProblem { domain, m, s, r, potential };
    let starts = (0..problem.start_count(opts)).map(|i| problem.run_start(opts, i)).collect::<Result<Vec<_>>>()?;
    problem.merge(&starts)
}

/// A brute-force constant valid for every `r ∈ [1, ∞]`.
///
/// For fixed `u`, `1/r ↦ log ‖u‖_{L^r}` is convex (Hölder interpolation), so
/// the ratio over `r ∈ [1, ∞]` peaks at an endpoint and the uniform constant
/// is the larger of the `r = 1` and `r = ∞` constants.
pub fn brute_force_uniform(
    domain: &DirichletDomain,
    m: u32,
    s: f64,
    potential: Option<&[f64]>,
    opts: &BruteForceOptions,
) -> Result<BruteForceResult> {
    let one = brute_force_with_potential(domain, m, s, 1.0, potential, opts)?;
    let inf = brute_force_with_potential(domain, m, s, f64::INFINITY, potential, opts)?;
    let mut best = if inf.constant.value > one.constant.value { inf } else { one };
    best.constant.r = None;
    Ok(best)
}

// ----------------------------------------------------------------------
// System hypotheses.

/// `M_(λ1,λ2)` and `M2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConstants {
    pub m_lambda: f64,
    pub m2: f64,
}

impl SystemConstants {
    /// `M_(λ1,λ2) ≤ 0` makes the lower envelope useless.
    pub fn m_lambda_nonpositive(&self) -> bool {
        self.m_lambda <= 0.0
    }
}

/// `M_(λ1,λ2) = 2^{1−max{p,q}} min{(1−λ1C_p^p)/p, (1−λ2C_q^q)/q}` and
/// `M2 = C0/(α+β)² (α C_p^{α+β} + β C_q^{α+β})`.
pub fn system_constants(params: &SystemParams, cp: f64, cq: f64) -> SystemConstants {
    let (p, q) = (params.p, params.q);
    let ab = params.alpha + params.beta;
    let max_pq = p.max(q);
    let m_lambda = powf(2.0, 1.0 - max_pq)
        * ((1.0 - params.lambda1 * powf(cp, p)) / p).min((1.0 - params.lambda2 * powf(cq, q)) / q);
    let m2 = params.c_max() / (ab * ab) * (params.alpha * powf(cp, ab) + params.beta * powf(cq, ab));
    SystemConstants { m_lambda, m2 }
}

/// `∫_Ω h^e dμ`, the powered norm `‖h‖_{L^e}^e` entering the concave
/// condition.
pub fn powered_norm(domain: &DirichletDomain, h: &[f64], e: f64) -> f64 {
    h.iter().zip(domain.interior_measures()).map(|(x, mu)| abs_pow(*x, e) * mu).sum()
}

/// All constants and verdicts of the four conditions on `(λ1, λ2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisReport {
    pub m_lambda: f64,
    pub m2: f64,
    /// `ρ = t⋆`, the maximizer of the lower envelope `f`.
    pub rho: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `0 < λ1 < C_p^{-p}`.
    pub cond1: bool,
    /// `0 < λ2 < C_q^{-q}`.
    pub cond2: bool,
    /// `M_(λ1,λ2) ≤ (α+β)/max{p,q} · M2`.
    pub cond3: bool,
    /// `lhs < rhs`.
    pub cond4: bool,
    pub max_pq: f64,
    pub alpha_beta: f64,
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3 && self.cond4
    }

    /// Lower envelope `f(t) = M t^{max{p,q}} − M2 t^{α+β} − lhs`.
    pub fn envelope(&self, t: f64) -> f64 {
        self.m_lambda * powf(t, self.max_pq) - self.m2 * powf(t, self.alpha_beta) - self.lhs
    }

    pub fn envelope_deriv2(&self, t: f64) -> f64 {
        let (a, b) = (self.max_pq, self.alpha_beta);
        self.m_lambda * a * (a - 1.0) * powf(t, a - 2.0) - self.m2 * b * (b - 1.0) * powf(t, b - 2.0)
    }
}

/// Evaluates the four conditions; `h1_pow = ∫h1^{p/(p−γ1)}` and
/// `h2_pow = ∫h2^{q/(q−γ2)}`.
pub fn check_system_hypotheses(params: &SystemParams, cp: f64, cq: f64, h1_pow: f64, h2_pow: f64) -> HypothesisReport {
    let SystemConstants { m_lambda, m2 } = system_constants(params, cp, cq);
    let (p, q, g1, g2) = (params.p, params.q, params.gamma1, params.gamma2);
    let max_pq = p.max(q);
    let ab = params.alpha + params.beta;
    let gap = ab - max_pq;
    let lhs = params.lambda1 * (p - g1) / (p * g1) * h1_pow + params.lambda2 * (q - g2) / (q * g2) * h2_pow;
    let ratio = max_pq / (ab * m2);
    let rhs = gap / ab * powf(m_lambda, ab / gap) * powf(ratio, max_pq / gap);
    let rho = powf(max_pq * m_lambda / (ab * m2), 1.0 / gap);
    HypothesisReport {
        m_lambda,
        m2,
        rho,
        lhs,
        rhs,
        cond1: params.lambda1 > 0.0 && params.lambda1 < powf(cp, -p),
        cond2: params.lambda2 > 0.0 && params.lambda2 < powf(cq, -q),
        cond3: m_lambda <= ab / max_pq * m2,
        cond4: m_lambda > 0.0 && lhs < rhs,
        max_pq,
        alpha_beta: ab,
    }
}

/// [`check_system_hypotheses`] with the powered `h`-norms computed from the
/// coefficient functions.
pub fn check_system_hypotheses_on(
    domain: &DirichletDomain,
    params: &SystemParams,
    cp: f64,
    cq: f64,
) -> Result<HypothesisReport> {
    params.validate(domain)?;
    let h1_pow = powered_norm(domain, &params.h1, params.p / (params.p - params.gamma1));
    let h2_pow = powered_norm(domain, &params.h2, params.q / (params.q - params.gamma2));
    Ok(check_system_hypotheses(params, cp, cq, h1_pow, h2_pow))
}

// ----------------------------------------------------------------------
// Equation thresholds.

/// `λ0`, `λ⋆` and `λ⋆⋆ = min{λ0, λ⋆}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationThresholds {
    pub lambda0: f64,
    pub lambda_star: f64,
    pub lambda_star_star: f64,
}

/// Thresholds of the single equation for embedding constant `c`.
pub fn equation_thresholds(params: &EquationParams, c: f64) -> Result<EquationThresholds> {
    params.validate_exponents()?;
    let (p, g, a) = (params.p, params.gamma, params.alpha);
    let h0 = params.h_max();
    let d1 = params.c_max() * powf(c, a);
    let lambda0 =
        (p - g) / h0 * powf(c, -g) * powf(powf(d1, p - a) * powf(a - p, a - p) * powf(a - g, g - a), 1.0 / (p - g));
    let lambda_star = g * (a - p) / (p * a * h0 * powf(c, g)) * powf(d1, (p - g) / (p - a));
    Ok(EquationThresholds { lambda0, lambda_star, lambda_star_star: lambda0.min(lambda_star) })
}

/// The product condition `d1^{α−p} d2^{p−γ} ≤ (p−γ)^{p−γ}(α−p)^{α−p}(α−γ)^{γ−α}`
/// with `d1 = C0 C^α`, `d2 = λ H0 C^γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductCondition {
    pub d1: f64,
    pub d2: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn product_condition(params: &EquationParams, c: f64) -> Result<ProductCondition> {
    params.validate_exponents()?;
    let (p, g, a) = (params.p, params.gamma, params.alpha);
    let d1 = params.c_max() * powf(c, a);
    let d2 = params.lambda * params.h_max() * powf(c, g);
    let lhs = powf(d1, a - p) * powf(d2, p - g);
    let rhs = powf(p - g, p - g) * powf(a - p, a - p) * powf(a - g, g - a);
    Ok(ProductCondition { d1, d2, lhs, rhs, holds: lhs <= rhs })
}

/// Norm bound `(λ H C^γ)^{1/(p−γ)}` satisfied by semi-trivial solutions.
pub fn semi_trivial_bound(params: &SystemParams, side: Side, c: f64) -> f64 {
    let (lambda, h, g, p) = match side {
        Side::U => (params.lambda1, params.h1_max(), params.gamma1, params.p),
        Side::V => (params.lambda2, params.h2_max(), params.gamma2, params.q),
    };
    powf(lambda * h * powf(c, g), 1.0 / (p - g))
}

/// Largest observed ratio `‖u‖_{L^r}/‖u‖_W` over `samples`; a quick empirical
/// check of a constant.
pub fn max_sampled_ratio(problem: &EmbeddingProblem<'_>, samples: &[Vec<f64>]) -> Result<f64> {
    problem.validate()?;
    Ok(samples.iter().map(|u| problem.ratio(u)).filter(|x| x.is_finite()).fold(0.0, f64::max))
}
