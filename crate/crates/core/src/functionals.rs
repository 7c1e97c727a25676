//! Energy functionals, their gradients, fibering maps and the Nehari
//! classification.
//!
//! The coupled system energy is
//!
//! ```text
//! φ(u,v) = (1/p)‖u‖^p − (λ1/γ1)∫h1|u|^γ1 + (1/q)‖v‖^q − (λ2/γ2)∫h2|v|^γ2
//!          − (1/(α+β))∫c|u|^α|v|^β
//! ```
//!
//! and the single equation energy is
//! `J(u) = (1/p)‖u‖^p − (λ/γ)∫h|u|^γ − (1/α)∫c|u|^α`.
//! With a potential `a` (problems on a whole finite graph) the norm becomes
//! `‖u‖^p = ∫(|∇^m u|^p + a|u|^p)`.
//!
//! Gradients are returned in the measure-weighted sense: the directional
//! derivative along `φ` is `Σ_Ω g(x) φ(x) μ(x)`, so `g` is the pointwise
//! residual of the Euler–Lagrange equation.

use alloc::vec;
use alloc::vec::Vec;

use crate::calculus::{poly_lap_raw, sobolev_energy_raw};
use crate::error::{Error, Result};
use crate::graph::{DirichletDomain, GraphFunction};
use crate::math::{abs_pow, norm2, powf, signed_pow};

/// Parameters of the coupled poly-Laplacian system.
///
/// Coefficient vectors are indexed by interior vertex (local numbering of the
/// domain).
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub m1: u32,
    pub m2: u32,
    pub p: f64,
    pub q: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    pub c: Vec<f64>,
    /// Potentials `(a, b)` for the whole-graph variant.
    pub potentials: Option<(Vec<f64>, Vec<f64>)>,
}

/// Parameters of the single concave-convex equation.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationParams {
    pub m: u32,
    pub p: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub h: Vec<f64>,
    pub c: Vec<f64>,
    /// Potential `a` for the whole-graph variant.
    pub potential: Option<Vec<f64>>,
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn check_coefficient(name: &'static str, v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: v.len() });
    }
    if v.iter().all(|&x| x > 0.0 && x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonpositiveCoefficient(name))
    }
}

fn check_order(dom: &DirichletDomain, m: u32) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidParameter("order must be at least 1"))
    } else if !dom.supports_order(m) {
        Err(Error::DomainNotClosed(m))
    } else {
        Ok(())
    }
}

impl SystemParams {
    /// Constant coefficients `h1 = h2 = c = 1` on `n_interior` vertices.
    #[allow(clippy::too_many_arguments)]
    pub fn with_unit_coefficients(
        n_interior: usize,
        (m1, m2): (u32, u32),
        (p, q): (f64, f64),
        (gamma1, gamma2): (f64, f64),
        (alpha, beta): (f64, f64),
        (lambda1, lambda2): (f64, f64),
    ) -> Self {
        Self {
            m1,
            m2,
            p,
            q,
            gamma1,
            gamma2,
            alpha,
            beta,
            lambda1,
            lambda2,
            h1: vec![1.0; n_interior],
            h2: vec![1.0; n_interior],
            c: vec![1.0; n_interior],
            potentials: None,
        }
    }

    /// Checks `max{γ1,γ2} < min{p,q} ≤ max{p,q} < α+β`, `γ_i > 1`,
    /// `α, β > 0`, `λ_i ≥ 0` and positive coefficients.
    pub fn validate_exponents(&self) -> Result<()> {
        let finite = [self.p, self.q, self.gamma1, self.gamma2, self.alpha, self.beta, self.lambda1, self.lambda2];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("parameters must be finite"));
        }
        if !(self.gamma1 > 1.0 && self.gamma2 > 1.0) {
            return Err(Error::InvalidExponent("gamma1, gamma2 must be > 1"));
        }
        if !(self.alpha > 0.0 && self.beta > 0.0) {
            return Err(Error::InvalidExponent("alpha, beta must be > 0"));
        }
        if !(self.gamma1.max(self.gamma2) < self.p.min(self.q)) {
            return Err(Error::InvalidExponent("max{gamma1, gamma2} < min{p, q} required"));
        }
        if !(self.p.max(self.q) < self.alpha + self.beta) {
            return Err(Error::InvalidExponent("max{p, q} < alpha + beta required"));
        }
        if !(self.lambda1 >= 0.0 && self.lambda2 >= 0.0) {
            return Err(Error::InvalidParameter("lambda1, lambda2 must be nonnegative"));
        }
        if self.m1 == 0 || self.m2 == 0 {
            return Err(Error::InvalidParameter("orders m1, m2 must be at least 1"));
        }
        Ok(())
    }

    pub fn validate(&self, domain: &DirichletDomain) -> Result<()> {
        self.validate_exponents()?;
        let n = domain.n_interior();
        check_coefficient("h1", &self.h1, n)?;
        check_coefficient("h2", &self.h2, n)?;
        check_coefficient("c", &self.c, n)?;
        if let Some((a, b)) = &self.potentials {
            check_coefficient("a", a, n)?;
            check_coefficient("b", b, n)?;
        }
        check_order(domain, self.m1)?;
        check_order(domain, self.m2)
    }

    /// `H1 = max h1`.
    pub fn h1_max(&self) -> f64 {
        max_of(&self.h1)
    }

    pub fn h2_max(&self) -> f64 {
        max_of(&self.h2)
    }

    /// `h1⋆ = min h1`.
    pub fn h1_min(&self) -> f64 {
        min_of(&self.h1)
    }

    pub fn h2_min(&self) -> f64 {
        min_of(&self.h2)
    }

    /// `C0 = max c`.
    pub fn c_max(&self) -> f64 {
        max_of(&self.c)
    }

    /// The same problem with the roles of `u` and `v` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            m1: self.m2,
            m2: self.m1,
            p: self.q,
            q: self.p,
            gamma1: self.gamma2,
            gamma2: self.gamma1,
            alpha: self.beta,
            beta: self.alpha,
            lambda1: self.lambda2,
            lambda2: self.lambda1,
            h1: self.h2.clone(),
            h2: self.h1.clone(),
            c: self.c.clone(),
            potentials: self.potentials.as_ref().map(|(a, b)| (b.clone(), a.clone())),
        }
    }
}

impl EquationParams {
    pub fn with_unit_coefficients(n_interior: usize, m: u32, p: f64, gamma: f64, alpha: f64, lambda: f64) -> Self {
        Self { m, p, gamma, alpha, lambda, h: vec![1.0; n_interior], c: vec![1.0; n_interior], potential: None }
    }

    /// Checks `1 < γ < p < α`, `λ ≥ 0` and positive coefficients.
    pub fn validate_exponents(&self) -> Result<()> {
        if [self.p, self.gamma, self.alpha, self.lambda].iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("parameters must be finite"));
        }
        if !(1.0 < self.gamma && self.gamma < self.p && self.p < self.alpha) {
            return Err(Error::InvalidExponent("1 < gamma < p < alpha required"));
        }
        if !(self.lambda >= 0.0) {
            return Err(Error::InvalidParameter("lambda must be nonnegative"));
        }
        if self.m == 0 {
            return Err(Error::InvalidParameter("order m must be at least 1"));
        }
        Ok(())
    }

    pub fn validate(&self, domain: &DirichletDomain) -> Result<()> {
        self.validate_exponents()?;
        let n = domain.n_interior();
        check_coefficient("h", &self.h, n)?;
        check_coefficient("c", &self.c, n)?;
        if let Some(a) = &self.potential {
            check_coefficient("a", a, n)?;
        }
        check_order(domain, self.m)
    }

    /// `H0 = max h`.
    pub fn h_max(&self) -> f64 {
        max_of(&self.h)
    }

    /// `C0 = max c`.
    pub fn c_max(&self) -> f64 {
        max_of(&self.c)
    }
}

/// Part of the Nehari manifold a function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NehariTag {
    Plus,
    Zero,
    Minus,
    NotOnNehari,
}

impl NehariTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            NehariTag::Plus => "Nplus",
            NehariTag::Zero => "Nzero",
            NehariTag::Minus => "Nminus",
            NehariTag::NotOnNehari => "NotOnNehari",
        }
    }
}

/// Nehari classification with the fibering derivatives it was decided from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NehariClass {
    pub tag: NehariTag,
    /// `G_u'(1) = ⟨J'(u), u⟩`.
    pub g_prime: f64,
    /// `G_u''(1)`.
    pub g_double_prime: f64,
}

/// Scalar fibering map `G(t) = (A/p)t^p − (B/α)t^α − (C/γ)t^γ` of a fixed
/// direction, where `(A, B, C)` is its [`operator_triple`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberingMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub p: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl FiberingMap {
    pub fn value(&self, t: f64) -> f64 {
        self.a * powf(t, self.p) / self.p
            - self.b * powf(t, self.alpha) / self.alpha
            - self.c * powf(t, self.gamma) / self.gamma
    }

    pub fn deriv1(&self, t: f64) -> f64 {
        self.a * powf(t, self.p - 1.0) - self.b * powf(t, self.alpha - 1.0) - self.c * powf(t, self.gamma - 1.0)
    }

    pub fn deriv2(&self, t: f64) -> f64 {
        (self.p - 1.0) * self.a * powf(t, self.p - 2.0)
            - (self.alpha - 1.0) * self.b * powf(t, self.alpha - 2.0)
            - (self.gamma - 1.0) * self.c * powf(t, self.gamma - 2.0)
    }

    /// `ψ(t) = G'(t) / t^{γ-1} = A t^{p-γ} − C − B t^{α-γ}`; same sign as `G'`.
    pub fn reduced_deriv(&self, t: f64) -> f64 {
        self.a * powf(t, self.p - self.gamma) - self.c - self.b * powf(t, self.alpha - self.gamma)
    }

    /// Maximizer of [`FiberingMap::reduced_deriv`] on `(0, ∞)`.
    pub fn reduced_peak(&self) -> f64 {
        powf((self.p - self.gamma) * self.a / ((self.alpha - self.gamma) * self.b), 1.0 / (self.alpha - self.p))
    }

    /// `t_{0u}`: maximizer of `F(t) = (A/p)t^p − (B/α)t^α`.
    pub fn t0(&self) -> f64 {
        powf(self.a / self.b, 1.0 / (self.alpha - self.p))
    }

    /// `F(t_{0u}) = (1/p − 1/α) (A^{α/p} / B)^{p/(α−p)}`.
    pub fn f_at_t0(&self) -> f64 {
        let t = self.t0();
        self.a * powf(t, self.p) / self.p - self.b * powf(t, self.alpha) / self.alpha
    }
}

// ----------------------------------------------------------------------
// Evaluation kernels shared with the solvers.

pub(crate) fn lift(dom: &DirichletDomain, interior: &[f64]) -> Vec<f64> {
    let mut full = vec![0.0; dom.len()];
    full[..interior.len()].copy_from_slice(interior);
    full
}

/// `‖u‖^s` of a Dirichlet function, including the potential term if any.
pub(crate) fn norm_power(dom: &DirichletDomain, u: &[f64], m: u32, s: f64, potential: Option<&[f64]>) -> f64 {
    let full = lift(dom, u);
    let mut e = sobolev_energy_raw(dom, &full, m, s);
    if let Some(a) = potential {
        e += weighted_power_sum(dom, a, u, s);
    }
    e
}

/// `Σ_Ω w(x) |u(x)|^r μ(x)`.
pub(crate) fn weighted_power_sum(dom: &DirichletDomain, weight: &[f64], u: &[f64], r: f64) -> f64 {
    u.iter().zip(weight).zip(dom.interior_measures()).map(|((x, w), mu)| w * abs_pow(*x, r) * mu).sum()
}

/// `‖u‖^s` together with the residual `ℒ_{m,s}u + a|u|^{s-2}u` on `Ω`, which
/// is `1/(sμ)` times the coordinate gradient of `‖u‖^s`.
pub(crate) fn norm_power_with_residual(
    dom: &DirichletDomain,
    u: &[f64],
    m: u32,
    s: f64,
    potential: Option<&[f64]>,
) -> (f64, Vec<f64>) {
    let full = lift(dom, u);
    let (mut e, mut g) = poly_lap_raw(dom, &full, m, s);
    if let Some(a) = potential {
        e += weighted_power_sum(dom, a, u, s);
        for ((gi, ai), ui) in g.iter_mut().zip(a).zip(u) {
            *gi += ai * signed_pow(*ui, s);
        }
    }
    (e, g)
}

/// Energy and measure-weighted gradient of the system at interior values
/// `(u, v)`.
pub(crate) fn system_eval(
    dom: &DirichletDomain,
    prm: &SystemParams,
    u: &[f64],
    v: &[f64],
) -> (f64, Vec<f64>, Vec<f64>) {
    let pot_u = prm.potentials.as_ref().map(|(a, _)| a.as_slice());
    let pot_v = prm.potentials.as_ref().map(|(_, b)| b.as_slice());
    let (nu, mut gu) = norm_power_with_residual(dom, u, prm.m1, prm.p, pot_u);
    let (nv, mut gv) = norm_power_with_residual(dom, v, prm.m2, prm.q, pot_v);
    let ab = prm.alpha + prm.beta;
    let mut conc_u = 0.0;
    let mut conc_v = 0.0;
    let mut coupling = 0.0;
    for x in 0..u.len() {
        let mu = dom.mu(x);
        let (ux, vx) = (u[x], v[x]);
        let au = abs_pow(ux, prm.alpha);
        let bv = abs_pow(vx, prm.beta);
        conc_u += prm.h1[x] * abs_pow(ux, prm.gamma1) * mu;
        conc_v += prm.h2[x] * abs_pow(vx, prm.gamma2) * mu;
        coupling += prm.c[x] * au * bv * mu;
        gu[x] -= prm.lambda1 * prm.h1[x] * signed_pow(ux, prm.gamma1)
            + prm.alpha / ab * prm.c[x] * signed_pow(ux, prm.alpha) * bv;
        gv[x] -= prm.lambda2 * prm.h2[x] * signed_pow(vx, prm.gamma2)
            + prm.beta / ab * prm.c[x] * au * signed_pow(vx, prm.beta);
    }
    let energy =
        nu / prm.p - prm.lambda1 / prm.gamma1 * conc_u + nv / prm.q - prm.lambda2 / prm.gamma2 * conc_v - coupling / ab;
    (energy, gu, gv)
}

pub(crate) fn equation_eval(dom: &DirichletDomain, prm: &EquationParams, u: &[f64]) -> (f64, Vec<f64>) {
    let (nu, mut g) = norm_power_with_residual(dom, u, prm.m, prm.p, prm.potential.as_deref());
    let mut conc = 0.0;
    let mut conv = 0.0;
    for x in 0..u.len() {
        let mu = dom.mu(x);
        let ux = u[x];
        conc += prm.h[x] * abs_pow(ux, prm.gamma) * mu;
        conv += prm.c[x] * abs_pow(ux, prm.alpha) * mu;
        g[x] -= prm.lambda * prm.h[x] * signed_pow(ux, prm.gamma) + prm.c[x] * signed_pow(ux, prm.alpha);
    }
    (nu / prm.p - prm.lambda / prm.gamma * conc - conv / prm.alpha, g)
}

pub(crate) fn triple_raw(dom: &DirichletDomain, prm: &EquationParams, u: &[f64]) -> (f64, f64, f64) {
    let a = norm_power(dom, u, prm.m, prm.p, prm.potential.as_deref());
    let b = weighted_power_sum(dom, &prm.c, u, prm.alpha);
    let c = prm.lambda * weighted_power_sum(dom, &prm.h, u, prm.gamma);
    (a, b, c)
}

pub(crate) fn fibering_raw(dom: &DirichletDomain, prm: &EquationParams, u: &[f64]) -> FiberingMap {
    let (a, b, c) = triple_raw(dom, prm, u);
    FiberingMap { a, b, c, p: prm.p, alpha: prm.alpha, gamma: prm.gamma }
}

pub(crate) fn classify_triple(map: &FiberingMap, tol: f64) -> NehariClass {
    let g1 = map.deriv1(1.0);
    let g2 = map.deriv2(1.0);
    let scale = map.a + map.b + map.c;
    let tag = if g1.abs() > tol * scale {
        NehariTag::NotOnNehari
    } else if g2 > tol * scale {
        NehariTag::Plus
    } else if g2 < -tol * scale {
        NehariTag::Minus
    } else {
        NehariTag::Zero
    };
    NehariClass { tag, g_prime: g1, g_double_prime: g2 }
}

// ----------------------------------------------------------------------
// Public API on graph functions.

/// `φ(u, v)` for Dirichlet `u`, `v`.
pub fn energy_system(
    domain: &DirichletDomain,
    u: &GraphFunction,
    v: &GraphFunction,
    params: &SystemParams,
) -> Result<f64> {
    params.validate(domain)?;
    u.require_dirichlet(domain)?;
    v.require_dirichlet(domain)?;
    Ok(system_eval(domain, params, u.interior(), v.interior()).0)
}

/// `(g_u, g_v)` with `⟨φ'(u,v), (φ, ψ)⟩ = Σ_Ω (g_u φ + g_v ψ) μ`.
pub fn grad_system(
    domain: &DirichletDomain,
    u: &GraphFunction,
    v: &GraphFunction,
    params: &SystemParams,
) -> Result<(GraphFunction, GraphFunction)> {
    params.validate(domain)?;
    u.require_dirichlet(domain)?;
    v.require_dirichlet(domain)?;
    let (_, gu, gv) = system_eval(domain, params, u.interior(), v.interior());
    Ok((GraphFunction::from_interior(domain, &gu)?, GraphFunction::from_interior(domain, &gv)?))
}

/// `J(u)`.
pub fn energy_equation(domain: &DirichletDomain, u: &GraphFunction, params: &EquationParams) -> Result<f64> {
    params.validate(domain)?;
    u.require_dirichlet(domain)?;
    Ok(equation_eval(domain, params, u.interior()).0)
}

/// `g` with `⟨J'(u), φ⟩ = Σ_Ω g φ μ`.
pub fn grad_equation(domain: &DirichletDomain, u: &GraphFunction, params: &EquationParams) -> Result<GraphFunction> {
    params.validate(domain)?;
    u.require_dirichlet(domain)?;
    GraphFunction::from_interior(domain, &equation_eval(domain, params, u.interior()).1)
}

/// `(⟨A(u),u⟩, ⟨B(u),u⟩, ⟨C(u),u⟩) = (‖u‖^p, ∫c|u|^α, λ∫h|u|^γ)`.
pub fn operator_triple(
    domain: &DirichletDomain,
    u: &GraphFunction,
    params: &EquationParams,
) -> Result<(f64, f64, f64)> {
    params.validate(domain)?;
    u.require_dirichlet(domain)?;
    Ok(triple_raw(domain, params, u.interior()))
}

/// Fibering map of a nonzero Dirichlet `u`.
pub fn fibering_map(domain: &DirichletDomain, u: &GraphFunction, params: &EquationParams) -> Result<FiberingMap> {
    params.validate(domain)?;
    u.require_dirichlet(domain)?;
    if u.is_zero() {
        return Err(Error::ZeroFunction);
    }
    Ok(fibering_raw(domain, params, u.interior()))
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("t must be positive"))
    }
}

/// `G_u(t) = J(t u)`.
pub fn fibering_value(domain: &DirichletDomain, u: &GraphFunction, t: f64, params: &EquationParams) -> Result<f64> {
    check_t(t)?;
    Ok(fibering_map(domain, u, params)?.value(t))
}

pub fn fibering_deriv1(domain: &DirichletDomain, u: &GraphFunction, t: f64, params: &EquationParams) -> Result<f64> {
    check_t(t)?;
    Ok(fibering_map(domain, u, params)?.deriv1(t))
}

pub fn fibering_deriv2(domain: &DirichletDomain, u: &GraphFunction, t: f64, params: &EquationParams) -> Result<f64> {
    check_t(t)?;
    Ok(fibering_map(domain, u, params)?.deriv2(t))
}

/// Classifies `u` into `𝒩+`, `𝒩0`, `𝒩−` or off the Nehari manifold.
///
/// `u` is on the manifold when `|G_u'(1)| ≤ tol (A + C + B)`; the part is then
/// the sign of `G_u''(1) = (p−1)A − (γ−1)C − (α−1)B` against the same scaled
/// tolerance.
pub fn nehari_classify(
    domain: &DirichletDomain,
    u: &GraphFunction,
    params: &EquationParams,
    tol: f64,
) -> Result<NehariClass> {
    let map = fibering_map(domain, u, params)?;
    Ok(classify_triple(&map, tol))
}

// ----------------------------------------------------------------------
// Functionals over flat coordinate vectors, as consumed by the solvers.

/// A `C¹` functional on interior coordinates with a product-space norm.
pub trait Functional {
    fn dim(&self) -> usize;

    /// Energy and Euclidean (coordinate) gradient.
    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64;

    fn energy(&self, x: &[f64]) -> f64 {
        let mut g = vec![0.0; self.dim()];
        self.eval(x, &mut g)
    }

    /// Measure attached to each coordinate; the pointwise residual is the
    /// Euclidean gradient divided by it.
    fn measure(&self) -> &[f64];

    /// `‖x‖_W`.
    fn norm(&self, x: &[f64]) -> f64;
}

/// The coupled system on `x = (u|_Ω, v|_Ω)`.
#[derive(Debug, Clone)]
pub struct SystemFunctional<'a> {
    domain: &'a DirichletDomain,
    params: &'a SystemParams,
    measure: Vec<f64>,
}

impl<'a> SystemFunctional<'a> {
    pub fn new(domain: &'a DirichletDomain, params: &'a SystemParams) -> Result<Self> {
        params.validate(domain)?;
        let mu = domain.interior_measures();
        let measure = mu.iter().chain(mu).copied().collect();
        Ok(Self { domain, params, measure })
    }

    pub fn params(&self) -> &SystemParams {
        self.params
    }

    pub fn domain(&self) -> &DirichletDomain {
        self.domain
    }

    pub fn split<'x>(&self, x: &'x [f64]) -> (&'x [f64], &'x [f64]) {
        x.split_at(self.domain.n_interior())
    }

    /// `(‖u‖, ‖v‖)`.
    pub fn component_norms(&self, x: &[f64]) -> (f64, f64) {
        let (u, v) = self.split(x);
        let p = self.params;
        let pot_u = p.potentials.as_ref().map(|(a, _)| a.as_slice());
        let pot_v = p.potentials.as_ref().map(|(_, b)| b.as_slice());
        (
            powf(norm_power(self.domain, u, p.m1, p.p, pot_u), 1.0 / p.p),
            powf(norm_power(self.domain, v, p.m2, p.q, pot_v), 1.0 / p.q),
        )
    }

    /// `∫ c |u|^α |v|^β`.
    pub fn coupling(&self, x: &[f64]) -> f64 {
        let (u, v) = self.split(x);
        (0..u.len())
            .map(|i| {
                self.params.c[i]
                    * abs_pow(u[i], self.params.alpha)
                    * abs_pow(v[i], self.params.beta)
                    * self.domain.mu(i)
            })
            .sum()
    }

    /// Measure-weighted residuals `(g_u, g_v)` on `Ω`.
    pub fn residuals(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (u, v) = self.split(x);
        let (_, gu, gv) = system_eval(self.domain, self.params, u, v);
        (gu, gv)
    }
}

impl Functional for SystemFunctional<'_> {
    fn dim(&self) -> usize {
        2 * self.domain.n_interior()
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let (u, v) = self.split(x);
        let (e, gu, gv) = system_eval(self.domain, self.params, u, v);
        for (i, g) in gu.iter().chain(&gv).enumerate() {
            grad[i] = g * self.measure[i];
        }
        e
    }

    fn measure(&self) -> &[f64] {
        &self.measure
    }

    fn norm(&self, x: &[f64]) -> f64 {
        let (a, b) = self.component_norms(x);
        a + b
    }
}

/// The single equation on `x = u|_Ω`.
#[derive(Debug, Clone)]
pub struct EquationFunctional<'a> {
    domain: &'a DirichletDomain,
    params: &'a EquationParams,
}

impl<'a> EquationFunctional<'a> {
    pub fn new(domain: &'a DirichletDomain, params: &'a EquationParams) -> Result<Self> {
        params.validate(domain)?;
        Ok(Self { domain, params })
    }

    pub fn fibering(&self, x: &[f64]) -> FiberingMap {
        fibering_raw(self.domain, self.params, x)
    }

    pub fn params(&self) -> &EquationParams {
        self.params
    }

    pub fn domain(&self) -> &DirichletDomain {
        self.domain
    }
}

impl Functional for EquationFunctional<'_> {
    fn dim(&self) -> usize {
        self.domain.n_interior()
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let (e, g) = equation_eval(self.domain, self.params, x);
        for (i, gi) in g.iter().enumerate() {
            grad[i] = gi * self.domain.mu(i);
        }
        e
    }

    fn measure(&self) -> &[f64] {
        self.domain.interior_measures()
    }

    fn norm(&self, x: &[f64]) -> f64 {
        powf(
            norm_power(self.domain, x, self.params.m, self.params.p, self.params.potential.as_deref()),
            1.0 / self.params.p,
        )
    }
}

/// Which component of a system solution is forced to vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Solve for `u` with `v = 0`.
    U,
    /// Solve for `v` with `u = 0`.
    V,
}

/// `φ(u, 0)` (or `φ(0, v)`) as a functional of the free component.
#[derive(Debug, Clone)]
pub struct SemiTrivialFunctional<'a> {
    system: SystemFunctional<'a>,
    side: Side,
}

impl<'a> SemiTrivialFunctional<'a> {
    pub fn new(domain: &'a DirichletDomain, params: &'a SystemParams, side: Side) -> Result<Self> {
        Ok(Self { system: SystemFunctional::new(domain, params)?, side })
    }

    /// Embeds the free component into full system coordinates.
    pub fn embed(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let mut full = vec![0.0; 2 * n];
        match self.side {
            Side::U => full[..n].copy_from_slice(x),
            Side::V => full[n..].copy_from_slice(x),
        }
        full
    }

    pub fn side(&self) -> Side {
        self.side
    }
}

impl Functional for SemiTrivialFunctional<'_> {
    fn dim(&self) -> usize {
        self.system.dim() / 2
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let full = self.embed(x);
        let mut g = vec![0.0; full.len()];
        let e = self.system.eval(&full, &mut g);
        let n = x.len();
        match self.side {
            Side::U => grad.copy_from_slice(&g[..n]),
            Side::V => grad.copy_from_slice(&g[n..]),
        }
        e
    }

    fn measure(&self) -> &[f64] {
        &self.system.measure()[..self.dim()]
    }

    fn norm(&self, x: &[f64]) -> f64 {
        self.system.norm(&self.embed(x))
    }
}

/// Euclidean norm of the coordinate gradient.
pub fn gradient_norm<F: Functional + ?Sized>(f: &F, x: &[f64]) -> f64 {
    let mut g = vec![0.0; f.dim()];
    f.eval(x, &mut g);
    norm2(&g)
}
