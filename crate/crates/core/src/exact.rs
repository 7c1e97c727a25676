//! Exact rational evaluation of the system conditions.
//!
//! Available when every exponent is an integer and `α+β−max{p,q}` divides
//! both `α+β` and `max{p,q}`, so that no irrational power appears. `ρ` is
//! returned only when the final root is itself rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Inputs with integer exponents and rational constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSystemData {
    pub p: u32,
    pub q: u32,
    pub gamma1: u32,
    pub gamma2: u32,
    pub alpha: u32,
    pub beta: u32,
    pub lambda1: BigRational,
    pub lambda2: BigRational,
    /// Embedding constants `C_p`, `C_q`.
    pub cp: BigRational,
    pub cq: BigRational,
    /// `C0 = max c`.
    pub c0: BigRational,
    /// `∫h1^{p/(p−γ1)}` and `∫h2^{q/(q−γ2)}`.
    pub h1_pow: BigRational,
    pub h2_pow: BigRational,
}

/// Exact counterpart of [`crate::analysis::HypothesisReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExactReport {
    pub m_lambda: BigRational,
    pub m2: BigRational,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub rho: Option<BigRational>,
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
    pub cond4: bool,
}

impl ExactReport {
    pub fn all_hold(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3 && self.cond4
    }
}

fn int(n: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

/// Exact `k`-th root of a nonnegative rational, if it exists.
fn rational_root(x: &BigRational, k: u32) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().nth_root(k);
    let d = x.denom().nth_root(k);
    let r = BigRational::new(n, d);
    (pow(&r, k) == *x).then_some(r)
}

/// Evaluates `M_(λ1,λ2)`, `M2`, both sides of the concave condition and the
/// four verdicts in rational arithmetic.
pub fn check_system_hypotheses_exact(d: &ExactSystemData) -> Result<ExactReport> {
    if !(d.gamma1 < d.p && d.gamma2 < d.q && d.gamma1 > 1 && d.gamma2 > 1) {
        return Err(Error::InvalidExponent("1 < gamma_i < p, q required"));
    }
    let max_pq = d.p.max(d.q);
    let ab = d.alpha + d.beta;
    if ab <= max_pq {
        return Err(Error::InvalidExponent("alpha + beta > max(p, q) required"));
    }
    let gap = ab - max_pq;
    if !ab.is_multiple_of(gap) || !max_pq.is_multiple_of(gap) {
        return Err(Error::Inexact("alpha + beta - max(p, q) to divide alpha + beta and max(p, q)"));
    }
    if d.cp.is_zero() || d.cq.is_zero() || d.c0.is_negative() {
        return Err(Error::InvalidParameter("embedding constants must be nonzero"));
    }
    let one = BigRational::one();
    let two = int(2);
    let a1 = (&one - &d.lambda1 * pow(&d.cp, d.p)) / int(d.p);
    let a2 = (&one - &d.lambda2 * pow(&d.cq, d.q)) / int(d.q);
    let m_lambda = (a1.min(a2)) / pow(&two, max_pq - 1);
    let m2 = &d.c0 / int(ab * ab) * (int(d.alpha) * pow(&d.cp, ab) + int(d.beta) * pow(&d.cq, ab));
    let lhs = &d.lambda1 * int(d.p - d.gamma1) / int(d.p * d.gamma1) * &d.h1_pow
        + &d.lambda2 * int(d.q - d.gamma2) / int(d.q * d.gamma2) * &d.h2_pow;
    let ratio = int(max_pq) / (int(ab) * &m2);
    let rhs = int(gap) / int(ab) * pow(&m_lambda, ab / gap) * pow(&ratio, max_pq / gap);
    let rho = rational_root(&(int(max_pq) * &m_lambda / (int(ab) * &m2)), gap);
    let zero = BigRational::zero();
    let cond1 = d.lambda1 > zero && &d.lambda1 * pow(&d.cp, d.p) < one;
    let cond2 = d.lambda2 > zero && &d.lambda2 * pow(&d.cq, d.q) < one;
    let cond3 = m_lambda <= int(ab) / int(max_pq) * &m2;
    let cond4 = m_lambda > zero && lhs < rhs;
    Ok(ExactReport { m_lambda, m2, lhs, rhs, rho, cond1, cond2, cond3, cond4 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn pow2(e: u32) -> i64 {
        1i64 << e
    }

    fn worked_example() -> ExactSystemData {
        ExactSystemData {
            p: 4,
            q: 5,
            gamma1: 2,
            gamma2: 3,
            alpha: 2,
            beta: 4,
            lambda1: r(1, 5),
            lambda2: r(1, 6),
            cp: r(1, 1),
            cq: r(1, 1),
            c0: r(1, 3),
            h1_pow: r(15625, 9 * pow2(31)),
            h2_pow: r(15625, pow2(32)),
        }
    }

    #[test]
    fn worked_example_chain_is_exact() {
        let rep = check_system_hypotheses_exact(&worked_example()).unwrap();
        assert_eq!(rep.m_lambda, r(1, 96));
        assert_eq!(rep.m2, r(1, 18));
        assert_eq!(rep.lhs, r(3125, 9 * pow2(33)) + r(3125, 9 * pow2(32)));
        assert_eq!(rep.lhs, r(3125, 3 * pow2(33)));
        assert_eq!(rep.rhs, r(3125, 9 * pow2(31)));
        assert_eq!(rep.rho, Some(r(15, 96)));
        assert!(rep.all_hold());
    }

    #[test]
    fn rhs_cross_check() {
        // (1/6)(1/96)^6 15^5 with 15^5 = 3^5 5^5 and 96^6 = 3^6 2^30.
        let v = r(1, 6) * pow(&r(1, 96), 6) * pow(&r(15, 1), 5);
        assert_eq!(v, r(3125, 9 * pow2(31)));
    }

    #[test]
    fn large_lambda_fails_first_condition() {
        let mut d = worked_example();
        d.lambda1 = r(1, 1);
        let rep = check_system_hypotheses_exact(&d).unwrap();
        assert!(!rep.cond1 && rep.cond2);
    }

    #[test]
    fn irrational_powers_are_refused() {
        let mut d = worked_example();
        d.alpha = 3;
        assert!(matches!(check_system_hypotheses_exact(&d), Err(Error::Inexact(_))));
    }

    #[test]
    fn roots() {
        assert_eq!(rational_root(&r(27, 8), 3), Some(r(3, 2)));
        assert_eq!(rational_root(&r(2, 1), 2), None);
    }
}
