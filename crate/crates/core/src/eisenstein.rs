//! Eisenstein and `(phi, p)`-Eisenstein recognition, and the power-basis
//! generator `theta = alpha^s / p^t` for `x^n + a` with `gcd(v_p(a), n) = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Zero};

use crate::arith::{is_prime_u64, vp};
use crate::error::{Error, Result};
use crate::fppoly::{is_irreducible_mod_p, reduce_unchecked};
use crate::zpoly::IntPoly;

fn check_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p.to_string()))
    }
}

/// Plain Eisenstein test at `p` for a monic polynomial of degree >= 2.
pub fn is_eisenstein_at(f: &IntPoly, p: u64) -> Result<bool> {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: f.signed_degree() });
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    check_prime(p)?;
    let c0 = f.coeff(0);
    if c0.is_zero() || vp(&c0, p) != 1 {
        return Ok(false);
    }
    Ok(f.coeffs()[1..n]
        .iter()
        .all(|c| c.is_zero() || vp(c, p) >= 1))
}

/// `(phi, p)`-Eisenstein test.
///
/// Requires `phi` monic with irreducible reduction and `f = phi^l (mod p)`.
/// With digits `f = sum a_i phi^(l-i)`, the pattern is `v(a_i) >= 1` for
/// `0 < i < l` and `v(a_l) = 1`. A positive answer means `f` is irreducible
/// over the p-adic integers and `Z[alpha]` is maximal at `p`.
pub fn is_phi_eisenstein(f: &IntPoly, phi: &IntPoly, p: u64) -> Result<bool> {
    check_prime(p)?;
    if !f.is_monic() {
        return Err(Error::Hypothesis("f must be monic".into()));
    }
    if !phi.is_monic() || phi.degree() == Some(0) {
        return Err(Error::Hypothesis("phi must be monic of degree >= 1".into()));
    }
    if phi.degree() > f.degree() {
        return Err(Error::Hypothesis("deg phi must not exceed deg f".into()));
    }
    let phibar = reduce_unchecked(phi, p);
    if !is_irreducible_mod_p(&phibar)? {
        return Err(Error::Hypothesis(format!("phi is not irreducible mod {p}")));
    }
    let (df, dphi) = (f.degree().unwrap(), phi.degree().unwrap());
    let l = df / dphi;
    if df % dphi != 0 || reduce_unchecked(f, p) != phibar.pow(l as u32) {
        return Err(Error::Hypothesis(format!("f is not a power of phi mod {p}")));
    }
    let digits = f.phi_adic_expansion(phi)?;
    debug_assert_eq!(digits.len(), l + 1);
    let interior_ok = digits[1..l]
        .iter()
        .all(|a| a.is_zero() || a.gauss_valuation_unchecked(p) >= 1);
    let last = &digits[l];
    Ok(interior_ok && !last.is_zero() && last.gauss_valuation_unchecked(p) == 1)
}

/// `theta = alpha^s / p^t` for a root `alpha` of `x^n + a` with `v_p(a) = m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaDescriptor {
    pub n: u64,
    pub m: u64,
    pub s: u64,
    pub t: u64,
    pub p: u64,
}

impl ThetaDescriptor {
    pub fn description(&self) -> String {
        format!("theta = alpha^{} / {}^{}", self.s, self.p, self.t)
    }

    /// `v_p(theta^n) = m s - n t`.
    pub fn theta_power_valuation(&self) -> i128 {
        self.m as i128 * self.s as i128 - self.n as i128 * self.t as i128
    }

    /// Minimal polynomial `x^n - theta^n` of `theta` for `f = x^n + a`.
    ///
    /// `theta^n = (-a)^s / p^(n t)`, an integer since `v_p(a^s) = m s > n t`.
    pub fn minimal_polynomial(&self, a: &BigInt) -> Result<IntPoly> {
        if a.is_zero() || vp(a, self.p) as u64 != self.m {
            return Err(Error::Hypothesis(format!(
                "v_{}(a) must equal m = {}",
                self.p, self.m
            )));
        }
        let num = (-a).pow(self.s as u32);
        let den = BigInt::from(self.p).pow((self.n * self.t) as u32);
        let (q, r) = num.div_rem(&den);
        debug_assert!(r.is_zero());
        Ok(&IntPoly::monomial(1.into(), self.n as usize) - &IntPoly::constant(q))
    }
}

/// Canonical `(s, t)` with `m s - n t = 1` and `0 <= s < n`.
pub fn power_basis_generator(n: u64, m: u64, p: u64) -> Result<ThetaDescriptor> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be >= 2".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    check_prime(p)?;
    let eg = (m as i128).extended_gcd(&(n as i128));
    if eg.gcd != 1 {
        return Err(Error::InvalidArgument(format!("gcd(m, n) = gcd({m}, {n}) != 1")));
    }
    let s = eg.x.mod_floor(&(n as i128));
    let t = (m as i128 * s - 1) / n as i128;
    debug_assert!(t >= 0);
    let theta = ThetaDescriptor {
        n,
        m,
        s: s as u64,
        t: t as u64,
        p,
    };
    debug_assert_eq!(theta.theta_power_valuation(), 1);
    Ok(theta)
}
