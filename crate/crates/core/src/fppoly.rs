//! Polynomials over a prime field and their factorization.
//!
//! Factorization runs the usual three stages: squarefree decomposition (with
//! p-th root extraction when the derivative vanishes), distinct-degree
//! splitting through `x^(p^d) mod f`, and equal-degree splitting. The last
//! stage is randomized; all randomness comes from a ChaCha stream seeded by
//! the caller, and the output is sorted canonically, so results never depend
//! on the seed.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
use crate::zpoly::IntPoly;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        ((a as u128 + p as u128 - b as u128) % p as u128) as u64
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Polynomial over `F_p`, constant term first, residues in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    /// Builds a polynomial from residues; assumes `p` prime.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                add_mod(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                    self.p,
                )
            })
            .collect();
        Self::new(self.p, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                sub_mod(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                    self.p,
                )
            })
            .collect();
        Self::new(self.p, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % pp;
            }
        }
        Self::new(p, out.into_iter().map(|c| c as u64).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.p), |acc, _| acc.mul(self))
    }

    /// Division with remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let p = self.p;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let inv = inv_mod(d.leading(), p);
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], inv, p);
            rem[k + dd] = 0;
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.coeffs[..dd].iter().enumerate() {
                rem[k + j] = sub_mod(rem[k + j], mul_mod(c, dc, p), p);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(p, quot), Self::new(p, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        )
    }

    fn mul_rem(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m)
    }

    /// `self^e mod m`
    pub fn pow_rem(&self, e: &BigUint, m: &Self) -> Self {
        let mut result = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mul_rem(&result, m);
            if e.bit(i) {
                result = result.mul_rem(&base, m);
            }
        }
        result
    }

    fn pow_rem_u64(&self, e: u64, m: &Self) -> Self {
        self.pow_rem(&BigUint::from(e), m)
    }

    /// Inverse Frobenius on a polynomial whose exponents are all multiples of p.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        debug_assert!(self.coeffs.iter().enumerate().all(|(i, &c)| c == 0 || i % p == 0));
        Self::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }

    /// Balanced lift: residues in `(-p/2, p/2]`, so `x - 1` lifts to itself.
    pub fn balanced_lift(&self) -> IntPoly {
        let p = self.p;
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c > p / 2 {
                        BigInt::from(c) - BigInt::from(p)
                    } else {
                        BigInt::from(c)
                    }
                })
                .collect(),
        )
    }

    /// Lift with residues in `[0, p)`.
    pub fn standard_lift(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn random(p: u64, below_degree: usize, rng: &mut ChaCha8Rng) -> Self {
        Self::new(p, (0..below_degree).map(|_| rng.gen_range(0..p)).collect())
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: degree first, then coefficients from the constant term up.
impl Ord for FpPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
            .then_with(|| self.p.cmp(&other.p))
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.standard_lift().fmt(f)
    }
}

/// Coefficientwise reduction into `[0, p)`.
pub fn reduce_mod_p(f: &IntPoly, p: u64) -> Result<FpPoly> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(reduce_unchecked(f, p))
}

pub(crate) fn reduce_unchecked(f: &IntPoly, p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    FpPoly::new(
        p,
        f.coeffs()
            .iter()
            .map(|c| {
                let r = ((c % &pb) + &pb) % &pb;
                u64::try_from(r).expect("residue below p")
            })
            .collect(),
    )
}

/// Monic irreducible factorization `unit * prod fbar_i^l_i` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationModP {
    pub p: u64,
    pub unit: u64,
    pub factors: Vec<(FpPoly, u32)>,
}

impl FactorizationModP {
    pub fn reconstruct(&self) -> FpPoly {
        self.factors
            .iter()
            .fold(FpPoly::new(self.p, vec![self.unit]), |acc, (g, e)| acc.mul(&g.pow(*e)))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, l)| *l == 1)
    }
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with `g`
/// squarefree, pairwise coprime, and `f = prod g^m`.
fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&c.monic().pth_root()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Splits a monic squarefree polynomial into `(product of degree-d factors, d)`.
fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let x = FpPoly::x(p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_rem_u64(p, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let deg = rest.degree().unwrap();
        out.push((rest, deg));
    }
    out
}

/// Random splitter whose gcd with `f` is a proper factor with probability ~1/2.
fn splitter(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> FpPoly {
    let p = f.p;
    let n = f.degree().unwrap();
    let a = FpPoly::random(p, n, rng);
    if p == 2 {
        // absolute trace sum_{i<d} a^(2^i)
        let mut t = a.rem(f);
        let mut acc = t.clone();
        for _ in 1..d {
            t = t.mul_rem(&t, f);
            acc = acc.add(&t);
        }
        acc
    } else {
        let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
        a.pow_rem(&e, f).sub(&FpPoly::one(p))
    }
}

/// Splits a monic squarefree product of degree-d irreducibles.
fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let g = splitter(f, d, rng).gcd(f);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.div_rem(&g).0.monic();
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// Complete factorization of a nonconstant polynomial over `F_p`.
pub fn factor_mod_p(fbar: &FpPoly, seed: u64) -> Result<FactorizationModP> {
    if fbar.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = fbar.p;
    let unit = fbar.leading();
    let monic = fbar.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc: BTreeMap<FpPoly, u32> = BTreeMap::new();
    for (sf, m) in squarefree_decomposition(&monic) {
        for (block, d) in distinct_degree(&sf) {
            for g in equal_degree(&block, d, &mut rng) {
                *acc.entry(g).or_insert(0) += m;
            }
        }
    }
    Ok(FactorizationModP {
        p,
        unit,
        factors: acc.into_iter().collect(),
    })
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
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

/// Rabin's irreducibility test.
pub fn is_irreducible_mod_p(fbar: &FpPoly) -> Result<bool> {
    let n = match fbar.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::DegreeTooSmall { min: 1, got: fbar.degree().map_or(-1, |d| d as isize) }),
    };
    if n == 1 {
        return Ok(true);
    }
    let f = fbar.monic();
    let p = f.p;
    let x = FpPoly::x(p);
    // x^(p^k) mod f for k = 0..=n
    let mut frob = vec![x.rem(&f)];
    for k in 0..n {
        let next = frob[k].pow_rem_u64(p, &f);
        frob.push(next);
    }
    if frob[n] != x.rem(&f) {
        return Ok(false);
    }
    for q in prime_divisors(n) {
        if !frob[n / q].sub(&x).gcd(&f).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, c: &[u64]) -> FpPoly {
        FpPoly::new(p, c.to_vec())
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_mod_p(&IntPoly::from_i64(&[-5, 0, 1]), 2).unwrap(), fp(2, &[1, 0, 1]));
        assert_eq!(reduce_mod_p(&IntPoly::from_i64(&[-5, 0, 1]), 5).unwrap(), fp(5, &[0, 0, 1]));
        assert_eq!(reduce_mod_p(&IntPoly::from_i64(&[0, 2, 0, 6]), 3).unwrap(), fp(3, &[0, 2]));
        assert!(reduce_mod_p(&IntPoly::from_i64(&[1, 1]), 9).is_err());
    }

    #[test]
    fn factor_examples() {
        let f = factor_mod_p(&fp(2, &[1, 0, 1]), 0).unwrap();
        assert_eq!(f.factors, vec![(fp(2, &[1, 1]), 2)]);
        let f = factor_mod_p(&fp(5, &[1, 0, 1]), 0).unwrap();
        assert_eq!(f.factors, vec![(fp(5, &[2, 1]), 1), (fp(5, &[3, 1]), 1)]);
        let f = factor_mod_p(&fp(3, &[1, 0, 1]), 0).unwrap();
        assert_eq!(f.factors, vec![(fp(3, &[1, 0, 1]), 1)]);
        assert_eq!(factor_mod_p(&FpPoly::zero(7), 0), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn factor_keeps_unit() {
        let f = fp(7, &[3, 0, 3]); // 3(x^2 + 1)
        let fac = factor_mod_p(&f, 1).unwrap();
        assert_eq!(fac.unit, 3);
        assert_eq!(fac.reconstruct(), f);
    }

    #[test]
    fn frobenius_descent() {
        // (x^2 + x + 1)^3 over F_3 = (x - 1)^6, derivative vanishes
        let base = fp(3, &[1, 1, 1]);
        let f = base.pow(3);
        assert!(f.derivative().is_zero());
        let fac = factor_mod_p(&f, 0).unwrap();
        assert_eq!(fac.factors, vec![(fp(3, &[2, 1]), 6)]);
        // mixed multiplicities over F_2: x^2 (x+1)^5 (x^2+x+1)^4
        let f = fp(2, &[0, 1])
            .pow(2)
            .mul(&fp(2, &[1, 1]).pow(5))
            .mul(&fp(2, &[1, 1, 1]).pow(4));
        let fac = factor_mod_p(&f, 9).unwrap();
        assert_eq!(
            fac.factors,
            vec![(fp(2, &[0, 1]), 2), (fp(2, &[1, 1]), 5), (fp(2, &[1, 1, 1]), 4)]
        );
    }

    #[test]
    fn equal_degree_splitting_both_characteristics() {
        // x^4 + 1 over F_17 splits into linears; over F_2 it is (x+1)^4
        let f = fp(17, &[1, 0, 0, 0, 1]);
        let fac = factor_mod_p(&f, 3).unwrap();
        assert_eq!(fac.factors.len(), 4);
        assert_eq!(fac.reconstruct(), f);
        // product of the three irreducible cubics... two of them over F_2
        let f = fp(2, &[1, 1, 0, 1]).mul(&fp(2, &[1, 0, 1, 1]));
        let fac = factor_mod_p(&f, 5).unwrap();
        assert_eq!(fac.factors, vec![(fp(2, &[1, 0, 1, 1]), 1), (fp(2, &[1, 1, 0, 1]), 1)]);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible_mod_p(&fp(3, &[1, 0, 1])).unwrap());
        assert!(!is_irreducible_mod_p(&fp(5, &[1, 0, 1])).unwrap());
        assert!(is_irreducible_mod_p(&fp(7, &[0, 1])).unwrap());
        assert!(is_irreducible_mod_p(&fp(7, &[3])).is_err());
        // x^4 + x + 1 irreducible over F_2, x^4 + x^2 + 1 = (x^2+x+1)^2 is not
        assert!(is_irreducible_mod_p(&fp(2, &[1, 1, 0, 0, 1])).unwrap());
        assert!(!is_irreducible_mod_p(&fp(2, &[1, 0, 1, 0, 1])).unwrap());
    }

    #[test]
    fn balanced_lift_examples() {
        assert_eq!(fp(3, &[2, 1]).balanced_lift(), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(fp(2, &[1, 1]).balanced_lift(), IntPoly::from_i64(&[1, 1]));
        assert_eq!(fp(5, &[2, 3, 1]).balanced_lift(), IntPoly::from_i64(&[2, -2, 1]));
    }

    #[test]
    fn large_modulus() {
        let p = 18_446_744_073_709_551_557u64; // largest 64-bit prime
        assert!(is_prime_u64(p));
        let f = fp(p, &[p - 1, 0, 1]); // x^2 - 1
        let fac = factor_mod_p(&f, 0).unwrap();
        assert_eq!(fac.factors, vec![(fp(p, &[1, 1]), 1), (fp(p, &[p - 1, 1]), 1)]);
    }
}
