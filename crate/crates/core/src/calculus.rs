//! Discrete differential operators on a [`DirichletDomain`].
//!
//! All operators act on values over `Ω ∪ ∂Ω`. Values outside `Ω ∪ ∂Ω` are
//! those of a compactly supported function, i.e. zero; an operator that would
//! have to read an unknown outside value returns
//! [`Error::NeighborOutsideDomain`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{DirichletDomain, GraphFunction};
use crate::math::{abs_pow, powf, signed_pow, sqrt, weight_pow};

/// Order `m ≥ 1` and integrability exponent `s > 1` of `W_0^{m,s}(Ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorOrder {
    m: u32,
    s: f64,
}

impl OperatorOrder {
    pub fn new(m: u32, s: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("order m must be at least 1"));
        }
        if !(s > 1.0) || !s.is_finite() {
            return Err(Error::InvalidExponent("s must be a finite real > 1"));
        }
        Ok(Self { m, s })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// Vertex set for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `Ω`.
    Interior,
    /// `Ω ∪ ∂Ω`.
    Closure,
}

/// `Σ_{x∈region} f(x) μ(x)`.
pub fn integrate(domain: &DirichletDomain, f: &GraphFunction, region: Region) -> Result<f64> {
    f.check_len(domain)?;
    let n = match region {
        Region::Interior => domain.n_interior(),
        Region::Closure => domain.len(),
    };
    Ok(f.values()[..n].iter().zip(domain.measures()).map(|(v, m)| v * m).sum())
}

/// `Σ_{x∈set} f(x) μ(x)` over explicit local vertices.
pub fn integrate_over(domain: &DirichletDomain, f: &GraphFunction, set: &[usize]) -> Result<f64> {
    f.check_len(domain)?;
    set.iter()
        .map(|&x| {
            if x < domain.len() {
                Ok(f.get(x) * domain.mu(x))
            } else {
                Err(Error::LengthMismatch { expected: domain.len(), got: x + 1 })
            }
        })
        .sum()
}

// Slice kernels. They assume the caller checked lengths and that every open
// vertex (one with outside neighbors) carries the value 0, so that outside
// terms `w (0 - 0)` vanish.

pub(crate) fn laplacian_into(dom: &DirichletDomain, u: &[f64], out: &mut [f64]) {
    for x in 0..dom.len() {
        let ux = u[x];
        let sum: f64 = dom.neighbors(x).iter().map(|&(y, w)| w * (u[y] - ux)).sum();
        out[x] = sum / dom.mu(x);
    }
}

pub(crate) fn laplacian_pow(dom: &DirichletDomain, u: &[f64], k: u32) -> Vec<f64> {
    let mut cur = u.to_vec();
    let mut next = vec![0.0; u.len()];
    for _ in 0..k {
        laplacian_into(dom, &cur, &mut next);
        core::mem::swap(&mut cur, &mut next);
    }
    cur
}

pub(crate) fn gradient_form_into(dom: &DirichletDomain, u1: &[f64], u2: &[f64], out: &mut [f64]) {
    for x in 0..dom.len() {
        let sum: f64 = dom.neighbors(x).iter().map(|&(y, w)| w * (u1[y] - u1[x]) * (u2[y] - u2[x])).sum();
        out[x] = sum / (2.0 * dom.mu(x));
    }
}

pub(crate) fn gradient_length_into(dom: &DirichletDomain, u: &[f64], out: &mut [f64]) {
    gradient_form_into(dom, u, u, out);
    for g in out.iter_mut() {
        *g = sqrt(g.max(0.0));
    }
}

/// `(1/(2μ(x))) Σ_{y∼x} (a(y) + a(x)) w_xy (u(y) - u(x))`.
pub(crate) fn weighted_laplacian_into(dom: &DirichletDomain, a: &[f64], u: &[f64], out: &mut [f64]) {
    for x in 0..dom.len() {
        let sum: f64 = dom.neighbors(x).iter().map(|&(y, w)| (a[y] + a[x]) * w * (u[y] - u[x])).sum();
        out[x] = sum / (2.0 * dom.mu(x));
    }
}

pub(crate) fn m_gradient_raw(dom: &DirichletDomain, u: &[f64], m: u32) -> Vec<f64> {
    if m % 2 == 1 {
        let v = laplacian_pow(dom, u, (m - 1) / 2);
        let mut out = vec![0.0; u.len()];
        gradient_length_into(dom, &v, &mut out);
        out
    } else {
        let w = laplacian_pow(dom, u, m / 2);
        w.into_iter().map(f64::abs).collect()
    }
}

/// `E(u) = Σ_{Ω∪∂Ω} |∇^m u|^s μ` for a Dirichlet `u` given on `Ω ∪ ∂Ω`.
pub(crate) fn sobolev_energy_raw(dom: &DirichletDomain, u: &[f64], m: u32, s: f64) -> f64 {
    m_gradient_raw(dom, u, m).iter().zip(dom.measures()).map(|(g, mu)| abs_pow(*g, s) * mu).sum()
}

/// Energy `E(u)` and the pointwise poly-Laplacian `ℒ_{m,s} u` on `Ω`, with
/// `ℒ_{m,s} u(x) = (1/(s μ(x))) ∂E/∂u(x)` computed by the chain rule.
pub(crate) fn poly_lap_raw(dom: &DirichletDomain, u: &[f64], m: u32, s: f64) -> (f64, Vec<f64>) {
    let n = dom.len();
    let k = if m % 2 == 1 { (m - 1) / 2 } else { m / 2 };
    let v = laplacian_pow(dom, u, k);
    let mut g = vec![0.0; n];
    let energy;
    if m % 2 == 1 {
        let mut len = vec![0.0; n];
        gradient_length_into(dom, &v, &mut len);
        energy = len.iter().zip(dom.measures()).map(|(l, mu)| abs_pow(*l, s) * mu).sum();
        let a: Vec<f64> = len.iter().map(|&l| weight_pow(l, s)).collect();
        weighted_laplacian_into(dom, &a, &v, &mut g);
        for gi in g.iter_mut() {
            *gi = -*gi;
        }
    } else {
        energy = v.iter().zip(dom.measures()).map(|(w, mu)| abs_pow(*w, s) * mu).sum();
        for (gi, &w) in g.iter_mut().zip(&v) {
            *gi = signed_pow(w, s);
        }
    }
    let mut lu = laplacian_pow(dom, &g, k);
    lu.truncate(dom.n_interior());
    (energy, lu)
}

fn check_open_support(dom: &DirichletDomain, u: &GraphFunction) -> Result<()> {
    u.check_len(dom)?;
    for x in 0..dom.len() {
        if dom.is_open(x) && u.get(x) != 0.0 {
            return Err(Error::NeighborOutsideDomain(dom.id(x).into()));
        }
    }
    Ok(())
}

fn check_order(dom: &DirichletDomain, m: u32) -> Result<()> {
    if dom.supports_order(m) {
        Ok(())
    } else {
        Err(Error::DomainNotClosed(m))
    }
}

/// `Δu(x) = (1/μ(x)) Σ_{y∼x} w_xy (u(y) - u(x))` on `Ω ∪ ∂Ω`.
pub fn laplacian(domain: &DirichletDomain, u: &GraphFunction) -> Result<GraphFunction> {
    check_open_support(domain, u)?;
    let mut out = vec![0.0; domain.len()];
    laplacian_into(domain, u.values(), &mut out);
    GraphFunction::new(domain, out)
}

/// `Γ(u1, u2)(x) = (1/(2μ(x))) Σ_{y∼x} w_xy (u1(y) - u1(x)) (u2(y) - u2(x))`.
pub fn gradient_form(domain: &DirichletDomain, u1: &GraphFunction, u2: &GraphFunction) -> Result<GraphFunction> {
    check_open_support(domain, u1)?;
    check_open_support(domain, u2)?;
    let mut out = vec![0.0; domain.len()];
    gradient_form_into(domain, u1.values(), u2.values(), &mut out);
    GraphFunction::new(domain, out)
}

/// `|∇^m u|`: `|∇ Δ^{(m-1)/2} u|` for odd `m`, `|Δ^{m/2} u|` for even `m`.
pub fn gradient_length_m(domain: &DirichletDomain, u: &GraphFunction, m: u32) -> Result<GraphFunction> {
    if m == 0 {
        return Err(Error::InvalidParameter("order m must be at least 1"));
    }
    check_order(domain, m)?;
    check_open_support(domain, u)?;
    GraphFunction::new(domain, m_gradient_raw(domain, u.values(), m))
}

/// `Δ_s u(x) = (1/(2μ(x))) Σ_{y∼x} (|∇u|^{s-2}(y) + |∇u|^{s-2}(x)) w_xy (u(y) - u(x))`.
///
/// `|∇u|^{s-2}` is taken as 0 where `|∇u| = 0` (for `s ≠ 2`).
pub fn s_laplacian(domain: &DirichletDomain, u: &GraphFunction, s: f64) -> Result<GraphFunction> {
    if !(s > 1.0) {
        return Err(Error::InvalidExponent("s must be > 1"));
    }
    check_open_support(domain, u)?;
    let n = domain.len();
    let mut len = vec![0.0; n];
    gradient_length_into(domain, u.values(), &mut len);
    let a: Vec<f64> = len.iter().map(|&l| weight_pow(l, s)).collect();
    let mut out = vec![0.0; n];
    weighted_laplacian_into(domain, &a, u.values(), &mut out);
    GraphFunction::new(domain, out)
}

/// `‖u‖_{W_0^{m,s}(Ω)} = (Σ_{Ω∪∂Ω} |∇^m u|^s μ)^{1/s}`.
pub fn sobolev_norm(domain: &DirichletDomain, u: &GraphFunction, order: OperatorOrder) -> Result<f64> {
    u.require_dirichlet(domain)?;
    check_order(domain, order.m())?;
    Ok(powf(sobolev_energy_raw(domain, u.values(), order.m(), order.s()), 1.0 / order.s()))
}

/// `‖u‖_{L^r(Ω)}`; `r = f64::INFINITY` gives `max_{x∈Ω} |u(x)|`.
pub fn lr_norm(domain: &DirichletDomain, u: &GraphFunction, r: f64) -> Result<f64> {
    u.check_len(domain)?;
    lr_norm_raw(domain, u.interior(), r)
}

pub(crate) fn lr_norm_raw(domain: &DirichletDomain, interior: &[f64], r: f64) -> Result<f64> {
    if r.is_nan() || r < 1.0 {
        return Err(Error::InvalidExponent("r must be >= 1"));
    }
    if r == f64::INFINITY {
        return Ok(interior.iter().fold(0.0, |m, x| f64::max(m, x.abs())));
    }
    let sum: f64 = interior.iter().zip(domain.interior_measures()).map(|(x, mu)| abs_pow(*x, r) * mu).sum();
    Ok(powf(sum, 1.0 / r))
}

/// Pointwise `ℒ_{m,s} u` on `Ω` (returned as a Dirichlet function).
///
/// For `m = 1` this is `-Δ_s u`; for `s = 2` it is `(-Δ)^m u` on `Ω`.
pub fn poly_lap_apply(domain: &DirichletDomain, u: &GraphFunction, order: OperatorOrder) -> Result<GraphFunction> {
    u.require_dirichlet(domain)?;
    check_order(domain, order.m())?;
    let (_, lu) = poly_lap_raw(domain, u.values(), order.m(), order.s());
    GraphFunction::from_interior(domain, &lu)
}

/// Right-hand side of the weak definition of `ℒ_{m,s}`:
/// `Σ_{Ω∪∂Ω} |∇^m u|^{s-2} Γ(Δ^k u, Δ^k φ) μ` for odd `m = 2k+1`, and
/// `Σ_{Ω∪∂Ω} |∇^m u|^{s-2} Δ^k u Δ^k φ μ` for even `m = 2k`.
///
/// Evaluated directly from the operators, independently of
/// [`poly_lap_apply`].
pub fn weak_pairing(
    domain: &DirichletDomain,
    u: &GraphFunction,
    phi: &GraphFunction,
    order: OperatorOrder,
) -> Result<f64> {
    check_order(domain, order.m())?;
    check_open_support(domain, u)?;
    check_open_support(domain, phi)?;
    let (m, s) = (order.m(), order.s());
    let n = domain.len();
    let grad_m = m_gradient_raw(domain, u.values(), m);
    let mut pairing = vec![0.0; n];
    if m % 2 == 1 {
        let k = (m - 1) / 2;
        let du = laplacian_pow(domain, u.values(), k);
        let dphi = laplacian_pow(domain, phi.values(), k);
        gradient_form_into(domain, &du, &dphi, &mut pairing);
    } else {
        let k = m / 2;
        let du = laplacian_pow(domain, u.values(), k);
        let dphi = laplacian_pow(domain, phi.values(), k);
        for x in 0..n {
            pairing[x] = du[x] * dphi[x];
        }
    }
    Ok((0..n).map(|x| weight_pow(grad_m[x], s) * pairing[x] * domain.mu(x)).sum())
}
