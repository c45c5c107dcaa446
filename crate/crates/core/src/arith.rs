//! Integer utilities: p-adic valuation, primality and factorization.
//!
//! Primality is deterministic below 2^64 (Miller-Rabin with the first twelve
//! prime bases) and Baillie-PSW above. Factorization is trial division up to
//! [`TRIAL_BOUND`] followed by Pollard's rho with Brent's cycle detection.
//! Cofactors that resist rho are kept in the result and flagged, never
//! dropped.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division bound used by [`factor`].
pub const TRIAL_BOUND: u64 = 1_000_000;

const RHO_ITERATIONS: u64 = 1 << 18;
const RHO_ATTEMPTS: u64 = 4;

/// Exponent of `p` in `n`, with `n != 0` assumed.
pub(crate) fn vp(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let mut m = n.magnitude().clone();
    let mut k = 0;
    loop {
        let (q, r) = m.div_rem(&BigUint::from(p));
        if !r.is_zero() {
            return k;
        }
        m = q;
        k += 1;
    }
}

/// `vp` for an arbitrary-size prime.
pub(crate) fn vp_big(n: &BigInt, p: &BigUint) -> u32 {
    debug_assert!(!n.is_zero());
    let mut m = n.magnitude().clone();
    let mut k = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        m = q;
        k += 1;
    }
}

/// Largest `k` with `p^k | n`.
pub fn valuation_int(n: &BigInt, p: u64) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(vp(n, p))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime_base2(n: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = BigUint::from(2u32).modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a/n) for odd positive n.
pub(crate) fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    debug_assert!(n.is_positive() && n.is_odd());
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    let x: BigInt = if x.is_odd() { x + n } else { x };
    (x >> 1u32).mod_floor(n)
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigUint) -> bool {
    let nb = BigInt::from(n.clone());
    if n.sqrt().pow(2) == *n {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, &nb) {
            -1 => break,
            0
                if d.magnitude() != n => {
                    return false;
                }
            _ => {}
        }
        d = if d.is_positive() { -(d + 2u32) } else { -(d - 2u32) };
    }
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / 4u32;
    let np1: BigInt = &nb + 1u32;
    let s = np1.trailing_zeros().unwrap_or(0);
    let k = &np1 >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(&nb);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&nb);
        v = (&v * &v - &qk * 2u32).mod_floor(&nb);
        qk = (&qk * &qk).mod_floor(&nb);
        if k.bit(i) {
            let nu = half_mod(&p * &u + &v, &nb);
            let nv = half_mod(&d * &u + &p * &v, &nb);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(&nb);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk * 2u32).mod_floor(&nb);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&nb);
    }
    false
}

pub(crate) fn is_prime_biguint(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if (n % p).is_zero() {
            return false;
        }
    }
    strong_probable_prime_base2(n) && strong_lucas(n)
}

/// Primality of `n >= 2`; deterministic below 2^64, Baillie-PSW beyond.
pub fn is_prime(n: &BigInt) -> Result<bool> {
    if *n < BigInt::from(2) {
        return Err(Error::BelowTwo(n.to_string()));
    }
    Ok(is_prime_biguint(n.magnitude()))
}

/// A factored nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    pub sign: Sign,
    /// Strictly increasing primes with positive exponents.
    pub factors: Vec<(BigUint, u32)>,
    /// Composite part rho could not split (1 when complete).
    pub cofactor: BigUint,
    pub complete: bool,
}

impl PrimeFactorization {
    pub fn reconstruct(&self) -> BigInt {
        let mut m = self.cofactor.clone();
        for (p, e) in &self.factors {
            m *= p.pow(*e);
        }
        BigInt::from_biguint(self.sign, m)
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    /// True when no known prime appears squared. Meaningful only if complete.
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn rho_u64(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let m = 128;
    let (mut y, mut r, mut q) = (2u64 % n, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    let mut g = 1;
    let mut iters = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += m;
        }
        r *= 2;
        iters += r;
        if iters > RHO_ITERATIONS {
            break;
        }
    }
    if g == n || g == 0 {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g > 1 && g < n).then_some(g)
}

fn rho_big(n: &BigUint, c: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let m = 128u64;
    let one = BigUint::one();
    let mut y = BigUint::from(2u32) % n;
    let mut x = y.clone();
    let mut ys = y.clone();
    let (mut r, mut q) = (1u64, one.clone());
    let mut g = one.clone();
    let mut iters = 0u64;
    let diff = |a: &BigUint, b: &BigUint| if a >= b { a - b } else { b - a };
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (q * diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        iters += r;
        if iters > RHO_ITERATIONS {
            break;
        }
    }
    if g == *n || g.is_zero() {
        let mut guard = 0u64;
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            guard += 1;
            if g > one || guard > RHO_ITERATIONS {
                break;
            }
        }
    }
    (g > one && g < *n).then_some(g)
}

/// Splits a composite `n` into two nontrivial factors, seeded from `n`.
fn find_divisor(n: &BigUint) -> Option<BigUint> {
    let base = (n % BigUint::from(1_000_003u32)).to_u64().unwrap_or(0) + 1;
    (0..RHO_ATTEMPTS).find_map(|i| {
        let c = base + i;
        match n.to_u64() {
            Some(small) if small < (1 << 63) => rho_u64(small, c % small).map(BigUint::from),
            _ => rho_big(n, c),
        }
    })
}

/// Factors a nonzero integer.
///
/// The result is `complete` whenever every prime factor is either below the
/// trial bound or split off by rho; a stubborn composite remainder is stored in
/// `cofactor` and `complete` is false.
pub fn factor(n: &BigInt) -> Result<PrimeFactorization> {
    if n.is_zero() {
        return Err(Error::FactorZero);
    }
    let sign = if n.is_negative() { Sign::Minus } else { Sign::Plus };
    let mut m = n.magnitude().clone();
    let mut primes: Vec<(BigUint, u32)> = Vec::new();

    let push = |p: BigUint, m: &mut BigUint, primes: &mut Vec<(BigUint, u32)>| {
        let mut e = 0;
        while (&*m % &p).is_zero() {
            *m /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p, e));
        }
    };

    push(BigUint::from(2u32), &mut m, &mut primes);
    let mut d = 3u64;
    while d <= TRIAL_BOUND && BigUint::from(d * d) <= m {
        if (&m % d).is_zero() {
            push(BigUint::from(d), &mut m, &mut primes);
        }
        d += 2;
    }

    let mut cofactor = BigUint::one();
    if !m.is_one() {
        if BigUint::from(d) * d > m || is_prime_biguint(&m) {
            primes.push((m, 1));
        } else {
            let mut stack = vec![m];
            while let Some(c) = stack.pop() {
                if is_prime_biguint(&c) {
                    primes.push((c, 1));
                } else if let Some(div) = find_divisor(&c) {
                    let other = &c / &div;
                    stack.push(div);
                    stack.push(other);
                } else {
                    cofactor *= c;
                }
            }
        }
    }

    primes.sort();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for (p, e) in primes {
        match factors.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => factors.push((p, e)),
        }
    }
    let complete = cofactor.is_one();
    Ok(PrimeFactorization {
        sign,
        factors,
        cofactor,
        complete,
    })
}

/// Primes up to `bound` by a simple sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Exact integer `k`-th root of `n` if one exists (odd `k` allows negative `n`).
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let r = n.magnitude().nth_root(k);
    (r.pow(k) == *n.magnitude()).then(|| BigInt::from_biguint(n.sign(), r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation_int(&big(20), 2).unwrap(), 2);
        assert_eq!(valuation_int(&big(7), 3).unwrap(), 0);
        assert_eq!(valuation_int(&big(336), 3).unwrap(), 1);
        assert_eq!(valuation_int(&big(0), 3), Err(Error::ValuationOfZero));
        assert!(matches!(valuation_int(&big(8), 4), Err(Error::NotPrime(_))));
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&big(2)).unwrap());
        assert!(!is_prime(&big(91)).unwrap());
        assert!(is_prime(&big((1 << 31) - 1)).unwrap());
        assert!(is_prime(&big(1)).is_err());
    }

    #[test]
    fn mersenne_31_by_trial_division() {
        let n: u64 = (1 << 31) - 1;
        let mut d = 2;
        while d * d <= n {
            assert_ne!(n % d, 0);
            d += 1;
        }
        assert!(is_prime_u64(n));
    }

    #[test]
    fn large_primes_and_pseudoprimes() {
        // 2^89 - 1 and 2^127 - 1 are Mersenne primes.
        let m89 = (BigInt::one() << 89) - 1;
        let m127 = (BigInt::one() << 127) - 1;
        assert!(is_prime(&m89).unwrap());
        assert!(is_prime(&m127).unwrap());
        assert!(!is_prime(&(&m89 * &m127)).unwrap());
        // strong pseudoprime to bases 2..37 below 2^64 is caught by the fixed set
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
        // Carmichael numbers
        for c in [561u64, 1105, 1729, 2465, 2821, 6601, 8911] {
            assert!(!is_prime_u64(c));
        }
        // base-2 strong pseudoprime lifted above 2^64 by a prime factor
        let psp = BigInt::from(2047u32) * BigInt::from(u64::MAX);
        assert!(!is_prime(&psp).unwrap());
    }

    #[test]
    fn factor_examples() {
        let f = factor(&big(28)).unwrap();
        assert_eq!(f.factors, vec![(2u32.into(), 2), (7u32.into(), 1)]);
        assert_eq!(f.sign, Sign::Plus);
        assert!(f.complete);

        let f = factor(&big(-20)).unwrap();
        assert_eq!(f.factors, vec![(2u32.into(), 2), (5u32.into(), 1)]);
        assert_eq!(f.sign, Sign::Minus);

        let n = big(2).pow(6) * big(3).pow(6) * big(5).pow(5);
        let f = factor(&n).unwrap();
        assert_eq!(
            f.factors,
            vec![(2u32.into(), 6), (3u32.into(), 6), (5u32.into(), 5)]
        );
        assert_eq!(f.reconstruct(), n);
        assert_eq!(factor(&big(0)), Err(Error::FactorZero));
        assert_eq!(factor(&big(1)).unwrap().factors, vec![]);
    }

    #[test]
    fn factor_beyond_trial_bound() {
        // two primes above 10^6
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(2_147_483_647u64);
        let n = &p * &q * &q;
        let f = factor(&n).unwrap();
        assert!(f.complete);
        assert_eq!(f.reconstruct(), n);
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.exponent_of(q.magnitude()), 2);

        let big_prime = (BigInt::one() << 89) - 1;
        let n = &big_prime * &p;
        let f = factor(&n).unwrap();
        assert!(f.complete);
        assert_eq!(f.reconstruct(), n);
    }

    #[test]
    fn factor_records_incomplete_cofactor() {
        // product of two 89/107-bit primes is far beyond rho's reach
        let a: BigInt = (BigInt::one() << 89u32) - 1u32;
        let b: BigInt = (BigInt::one() << 107u32) - 1u32;
        let n: BigInt = &a * &b * 12u32;
        let f = factor(&n).unwrap();
        assert!(!f.complete);
        assert_eq!(f.reconstruct(), n);
        let ab: BigInt = &a * &b;
        assert_eq!(f.cofactor, ab.magnitude().clone());
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            for a in 0..p {
                let euler = pow_mod(a, (p - 1) / 2, p);
                let expected = if a == 0 { 0 } else if euler == 1 { 1 } else { -1 };
                assert_eq!(jacobi(&big(a as i64), &big(p as i64)), expected);
            }
        }
    }

    #[test]
    fn exact_roots() {
        assert_eq!(exact_root(&big(-27), 3), Some(big(-3)));
        assert_eq!(exact_root(&big(-4), 2), None);
        assert_eq!(exact_root(&big(16), 4), Some(big(2)));
        assert_eq!(exact_root(&big(17), 2), None);
    }
}
