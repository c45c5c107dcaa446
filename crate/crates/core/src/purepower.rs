//! Closed-form maximality tests for `x^n - u` over the integers.
//!
//! Only primes dividing `n u` can divide the index (the discriminant is
//! `+-n^n u^(n-1)`), so the exact test quantifies over those primes alone:
//! a prime dividing `u` must divide it exactly once, and a prime dividing
//! `n` but not `u` needs `v_p(u^p - u) = 1`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{exact_root, factor, is_prime_u64, vp, vp_big};
use crate::criterion::{local_maximality, Verdict};
use crate::error::{Error, Result};
use crate::zpoly::IntPoly;

/// Cap on computed valuations of `u^(p^r) - u`; larger values are reported as the cap.
pub const FROBENIUS_VALUATION_CAP: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    NuUNotOne,
    FrobeniusValNotOne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurePowerVerdict {
    pub n: u64,
    pub u: BigInt,
    pub verdict: Verdict,
    pub failing_prime: Option<BigUint>,
    pub reason: Option<FailureReason>,
}

impl PurePowerVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n.to_string(),
            "u": self.u.to_string(),
            "verdict": self.verdict,
            "failing_prime": self.failing_prime.as_ref().map(ToString::to_string),
            "reason": self.reason,
        })
    }
}

/// `x^n - u`
pub fn pure_power_poly(n: u64, u: &BigInt) -> IntPoly {
    &IntPoly::monomial(BigInt::one(), n as usize) - &IntPoly::constant(u.clone())
}

fn check_args(n: u64, u: &BigInt) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be >= 2, got {n}")));
    }
    if u.is_zero() {
        return Err(Error::InvalidArgument("u must be nonzero".into()));
    }
    if n > 1 << 16 {
        return Err(Error::InvalidArgument(format!("n = {n} is too large")));
    }
    Ok(())
}

fn prime_divisors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Capelli's criterion over the rationals: `x^n - u` is irreducible iff `u`
/// is no `q`-th power for a prime `q | n`, and `u != -4 b^4` when `4 | n`.
pub fn capelli_screen(n: u64, u: &BigInt) -> Result<()> {
    check_args(n, u)?;
    for q in prime_divisors_u64(n) {
        if let Some(r) = exact_root(u, q as u32) {
            return Err(Error::Reducible(format!("{u} = ({r})^{q}")));
        }
    }
    if n.is_multiple_of(4) && u.is_negative() && (u % 4u32).is_zero() {
        let quarter: BigInt = -u / 4;
        if let Some(b) = exact_root(&quarter, 4) {
            return Err(Error::Reducible(format!("{u} = -4*({b})^4")));
        }
    }
    Ok(())
}

/// Sufficient condition: `a` squarefree and every prime dividing `n` divides `a`.
///
/// `false` is inconclusive.
pub fn thm3_sufficient(n: u64, a: &BigInt) -> Result<bool> {
    check_args(n, a)?;
    let fa = factor(a)?;
    let hypothesis = fa.complete
        && fa.is_squarefree()
        && prime_divisors_u64(n)
            .into_iter()
            .all(|q| (a % BigInt::from(q)).is_zero());
    if !hypothesis {
        return Ok(false);
    }
    capelli_screen(n, a)?;
    Ok(true)
}

/// `v_p(u^(p^r) - u)` for `p` not dividing `u`, capped at [`FROBENIUS_VALUATION_CAP`].
pub fn frobenius_valuation(u: &BigInt, p: u64, r: u32) -> u32 {
    let pb = BigInt::from(p);
    let modulus = pb.pow(FROBENIUS_VALUATION_CAP);
    let e = BigUint::from(p).pow(r);
    let base = ((u % &modulus) + &modulus) % &modulus;
    let x = (base.modpow(&BigInt::from(e), &modulus) - u) % &modulus;
    if x.is_zero() {
        FROBENIUS_VALUATION_CAP
    } else {
        vp(&x, p).min(FROBENIUS_VALUATION_CAP)
    }
}

/// Exact maximality test for `x^n - u`.
pub fn cor5_exact(n: u64, u: &BigInt) -> Result<PurePowerVerdict> {
    capelli_screen(n, u)?;
    let fu = factor(u)?;
    let mut primes: BTreeSet<BigUint> = fu.factors.iter().map(|(p, _)| p.clone()).collect();
    primes.extend(prime_divisors_u64(n).into_iter().map(BigUint::from));

    let fail = |p: &BigUint, reason| PurePowerVerdict {
        n,
        u: u.clone(),
        verdict: Verdict::NotMaximal,
        failing_prime: Some(p.clone()),
        reason: Some(reason),
    };
    for p in &primes {
        let vu = vp_big(u, p);
        if vu >= 1 {
            if vu != 1 {
                return Ok(fail(p, FailureReason::NuUNotOne));
            }
        } else {
            let ps = p.to_u64().expect("primes dividing n fit in u64");
            if frobenius_valuation(u, ps, 1) != 1 {
                return Ok(fail(p, FailureReason::FrobeniusValNotOne));
            }
        }
    }
    // a composite cofactor of u hides primes we could not test
    let verdict = if fu.complete { Verdict::Maximal } else { Verdict::Unknown };
    Ok(PurePowerVerdict {
        n,
        u: u.clone(),
        verdict,
        failing_prime: None,
        reason: None,
    })
}

/// Checks that whenever `v_p(u^(p^r) - u) = 1` for some `1 <= r <= r_max`,
/// the general engine also finds `x^n - u` maximal at `p`.
pub fn frobenius_exponent_flexibility(
    n: u64,
    u: &BigInt,
    p: u64,
    r_max: u32,
    seed: u64,
) -> Result<bool> {
    check_args(n, u)?;
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if !n.is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!("{p} does not divide n = {n}")));
    }
    if (u % BigInt::from(p)).is_zero() {
        return Err(Error::InvalidArgument(format!("{p} divides u = {u}")));
    }
    let witnessed = (1..=r_max).any(|r| frobenius_valuation(u, p, r) == 1);
    if !witnessed {
        return Ok(true);
    }
    Ok(local_maximality(&pure_power_poly(n, u), p, seed)?.locally_maximal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::is_maximal_global;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn capelli_examples() {
        assert!(capelli_screen(2, &b(4)).is_err());
        assert!(capelli_screen(3, &b(-8)).is_err());
        assert!(capelli_screen(2, &b(-4)).is_ok());
        assert!(capelli_screen(4, &b(-4)).is_err()); // x^4 + 4 = (x^2+2x+2)(x^2-2x+2)
        assert!(capelli_screen(4, &b(-64)).is_err());
        assert!(capelli_screen(6, &b(8)).is_err());
        assert!(capelli_screen(4, &b(-1)).is_ok());
        assert!(capelli_screen(3, &b(-1)).is_err());
        assert!(capelli_screen(1, &b(2)).is_err());
        assert!(capelli_screen(2, &b(0)).is_err());
    }

    #[test]
    fn sufficient_condition_examples() {
        assert!(thm3_sufficient(6, &b(6)).unwrap());
        assert!(!thm3_sufficient(2, &b(4)).unwrap());
        assert!(!thm3_sufficient(2, &b(12)).unwrap());
        // 6 is squarefree and 2 | 6, so the hypothesis holds for n = 4
        assert!(thm3_sufficient(4, &b(6)).unwrap());
        assert!(!thm3_sufficient(3, &b(10)).unwrap());
        assert!(!thm3_sufficient(4, &b(15)).unwrap());
        assert!(thm3_sufficient(2, &b(-2)).unwrap());
        assert!(thm3_sufficient(2, &b(0)).is_err());
    }

    #[test]
    fn exact_test_examples() {
        let v = cor5_exact(2, &b(5)).unwrap();
        assert_eq!(v.verdict, Verdict::NotMaximal);
        assert_eq!(v.failing_prime, Some(BigUint::from(2u32)));
        assert_eq!(v.reason, Some(FailureReason::FrobeniusValNotOne));
        assert_eq!(cor5_exact(2, &b(7)).unwrap().verdict, Verdict::Maximal);
        assert_eq!(cor5_exact(2, &b(6)).unwrap().verdict, Verdict::Maximal);
        let v = cor5_exact(2, &b(12)).unwrap();
        assert_eq!(v.reason, Some(FailureReason::NuUNotOne));
        assert_eq!(v.failing_prime, Some(BigUint::from(2u32)));
    }

    #[test]
    fn exact_test_ignores_primes_outside_nu() {
        // v_5(7^5 - 7) = 2, yet 5 does not divide disc(x^2 - 7)
        assert_eq!(frobenius_valuation(&b(7), 5, 1), 2);
        assert_eq!(cor5_exact(2, &b(7)).unwrap().verdict, Verdict::Maximal);
        assert_eq!(is_maximal_global(&pure_power_poly(2, &b(7)), 0).unwrap().verdict, Verdict::Maximal);
    }

    #[test]
    fn frobenius_valuations() {
        assert_eq!(frobenius_valuation(&b(5), 2, 1), 2);
        assert_eq!(frobenius_valuation(&b(7), 2, 1), 1);
        for r in 1..=6 {
            // 5^(2^r) = 1 mod 8, so 5^(2^r) - 5 = 4 mod 8
            assert_eq!(frobenius_valuation(&b(5), 2, r), 2);
        }
        assert_eq!(frobenius_valuation(&b(2), 3, 1), 1);
        assert_eq!(frobenius_valuation(&b(1), 3, 2), FROBENIUS_VALUATION_CAP);
    }

    #[test]
    fn flexibility_examples() {
        assert!(frobenius_exponent_flexibility(2, &b(7), 2, 4, 0).unwrap());
        assert!(frobenius_exponent_flexibility(2, &b(5), 2, 4, 0).unwrap());
        assert!(frobenius_exponent_flexibility(3, &b(2), 3, 3, 0).unwrap());
        assert!(frobenius_exponent_flexibility(3, &b(2), 2, 3, 0).is_err());
        assert!(frobenius_exponent_flexibility(2, &b(6), 2, 3, 0).is_err());
    }
}
