//! Quadratic rings of integers as base rings for the pure-power test.
//!
//! Elements are stored in the integral basis `{1, w}` with `w = (1 + sqrt d)/2`
//! when `d = 1 mod 4` and `w = sqrt d` otherwise. Prime ideals are described
//! by the rational prime below them and, for split primes, a root of the
//! minimal polynomial of `w` modulo `p`; valuations at split primes evaluate
//! `a + b*rho` after Hensel-lifting that root far enough.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{self, exact_root, is_prime_u64, jacobi, vp};
use crate::criterion::Verdict;
use crate::error::{Error, Result};
use crate::purepower::FailureReason;

/// Cap (in powers of `p`) on the modular exponentiation used for `u^(p^f) - u`.
const FROBENIUS_PRECISION: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: i64,
}

impl QuadField {
    /// `Q(sqrt d)` for squarefree `d != 0, 1`.
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidArgument(format!("d = {d} does not define a quadratic field")));
        }
        let fac = arith::factor(&BigInt::from(d))?;
        if !fac.is_squarefree() {
            return Err(Error::InvalidArgument(format!("d = {d} is not squarefree")));
        }
        Ok(QuadField { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    fn half_basis(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    /// Field discriminant: `d` or `4d`.
    pub fn discriminant(&self) -> i64 {
        if self.half_basis() {
            self.d
        } else {
            4 * self.d
        }
    }

    /// `(trace, norm)` of `w`, so that `w^2 = trace*w - norm`.
    fn omega_trace_norm(&self) -> (BigInt, BigInt) {
        if self.half_basis() {
            (BigInt::one(), BigInt::from((1 - self.d) / 4))
        } else {
            (BigInt::zero(), BigInt::from(-self.d))
        }
    }

    pub fn int(&self, a: impl Into<BigInt>) -> QuadInt {
        QuadInt::new(*self, a.into(), BigInt::zero())
    }

    pub fn element(&self, a: impl Into<BigInt>, b: impl Into<BigInt>) -> QuadInt {
        QuadInt::new(*self, a.into(), b.into())
    }

    /// `sqrt d` in the integral basis.
    pub fn sqrt_d(&self) -> QuadInt {
        if self.half_basis() {
            self.element(-1, 2)
        } else {
            self.element(0, 1)
        }
    }
}

/// `a + b*w` in a quadratic ring of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    field: QuadField,
    pub a: BigInt,
    pub b: BigInt,
}

impl QuadInt {
    pub fn new(field: QuadField, a: BigInt, b: BigInt) -> Self {
        QuadInt { field, a, b }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        let (t, n) = self.field.omega_trace_norm();
        &self.a * &self.a + t * &self.a * &self.b + n * &self.b * &self.b
    }

    pub fn mul(&self, o: &QuadInt) -> QuadInt {
        let (t, n) = self.field.omega_trace_norm();
        let bb = &self.b * &o.b;
        QuadInt::new(
            self.field,
            &self.a * &o.a - &bb * n,
            &self.a * &o.b + &self.b * &o.a + bb * t,
        )
    }

    pub fn sub(&self, o: &QuadInt) -> QuadInt {
        QuadInt::new(self.field, &self.a - &o.a, &self.b - &o.b)
    }

    pub fn pow(&self, e: u32) -> QuadInt {
        let mut acc = self.field.int(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn reduce(&self, m: &BigInt) -> QuadInt {
        QuadInt::new(self.field, self.a.mod_floor(m), self.b.mod_floor(m))
    }

    /// `self^e` with both coordinates reduced modulo `m`.
    fn pow_mod(&self, e: &BigUint, m: &BigInt) -> QuadInt {
        let mut acc = self.field.int(1);
        let base = self.reduce(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).reduce(m);
            if e.bit(i) {
                acc = acc.mul(&base).reduce(m);
            }
        }
        acc
    }

    /// `["d", "a", "b"]`
    pub fn to_json_tuple(&self) -> [String; 3] {
        [self.field.d.to_string(), self.a.to_string(), self.b.to_string()]
    }

    pub fn from_json_tuple(items: &[String]) -> Result<QuadInt> {
        let bad = || Error::InvalidArgument("expected [\"d\", \"a\", \"b\"]".into());
        if items.len() != 3 {
            return Err(bad());
        }
        let d: i64 = items[0].trim().parse().map_err(|_| bad())?;
        let a: BigInt = items[1].trim().parse().map_err(|_| bad())?;
        let b: BigInt = items[2].trim().parse().map_err(|_| bad())?;
        Ok(QuadField::new(d)?.element(a, b))
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingKind {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal above the rational prime `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadPrime {
    pub p: u64,
    pub kind: SplittingKind,
    /// Residue degree.
    pub f: u32,
    /// Ramification index.
    pub e: u32,
    /// Split primes only: `w = hensel_root (mod P)`, stored modulo `p^precision`.
    pub hensel_root: Option<BigInt>,
    pub precision: u32,
}

fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let mm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let pw = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mm(r, b);
            }
            b = mm(b, b);
            e >>= 1;
        }
        r
    };
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if pw(a, (p - 1) / 2) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pw(z, (p - 1) / 2) != p - 1 {
        z += 1;
    }
    let (mut m, mut c, mut t, mut r) = (s, pw(z, q), pw(a, q), pw(a, q.div_ceil(2)));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mm(tt, tt);
            i += 1;
        }
        let b = pw(c, 1 << (m - i - 1));
        m = i;
        c = mm(b, b);
        t = mm(t, c);
        r = mm(r, b);
    }
    Some(r)
}

/// Kronecker symbol `(disc(K) / p)`.
fn kronecker_disc(field: &QuadField, p: u64) -> i32 {
    let disc = field.discriminant();
    if p == 2 {
        return match disc.rem_euclid(8) {
            1 => 1,
            5 => -1,
            _ => 0,
        };
    }
    jacobi(&BigInt::from(disc), &BigInt::from(p))
}

/// Prime ideals above `p`: one ramified, one inert, or two conjugate split primes.
pub fn split_prime(field: &QuadField, p: u64) -> Result<Vec<QuadPrime>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let prime = |kind, e, f, root: Option<u64>| QuadPrime {
        p,
        kind,
        f,
        e,
        hensel_root: root.map(BigInt::from),
        precision: 1,
    };
    Ok(match kronecker_disc(field, p) {
        0 => vec![prime(SplittingKind::Ramified, 2, 1, None)],
        -1 => vec![prime(SplittingKind::Inert, 1, 2, None)],
        _ => {
            let roots = if p == 2 {
                [0, 1]
            } else {
                let s = sqrt_mod(field.d.rem_euclid(p as i64) as u64, p).expect("d is a residue");
                if field.half_basis() {
                    let inv2 = p.div_ceil(2);
                    let r1 = ((1 + s as u128) * inv2 as u128 % p as u128) as u64;
                    let r2 = ((1 + (p - s) as u128) * inv2 as u128 % p as u128) as u64;
                    [r1.min(r2), r1.max(r2)]
                } else {
                    [s.min(p - s), s.max(p - s)]
                }
            };
            roots
                .iter()
                .map(|&r| prime(SplittingKind::Split, 1, 1, Some(r)))
                .collect()
        }
    })
}

/// Lifts a simple root of the minimal polynomial of `w` to precision `p^k`.
fn hensel_lift(field: &QuadField, root: &BigInt, p: u64, k: u32) -> BigInt {
    let (t, n) = field.omega_trace_norm();
    let modulus = BigInt::from(p).pow(k);
    let mut r = root.clone();
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = BigInt::from(p).pow(prec);
        let g = (&r * &r - &t * &r + &n).mod_floor(&m);
        let dg = (BigInt::from(2) * &r - &t).mod_floor(&m);
        let inv = dg.modinv(&m).expect("simple root");
        r = (&r - g * inv).mod_floor(&m);
    }
    r.mod_floor(&modulus)
}

/// Valuation of a nonzero quadratic integer at a prime ideal.
pub fn nu_p(x: &QuadInt, prime: &QuadPrime) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let vn = vp(&x.norm(), prime.p);
    Ok(match prime.kind {
        SplittingKind::Inert => vn / 2,
        SplittingKind::Ramified => vn,
        SplittingKind::Split => {
            let k = vn + 1;
            let root = prime.hensel_root.as_ref().expect("split prime carries a root");
            let r = hensel_lift(&x.field, root, prime.p, k);
            let modulus = BigInt::from(prime.p).pow(k);
            let y = (&x.a + &x.b * r).mod_floor(&modulus);
            if y.is_zero() {
                k
            } else {
                vp(&y, prime.p)
            }
        }
    })
}

/// Valuation of `y` at `prime`, where `y` is only known modulo `p^k`.
fn nu_p_truncated(y: &QuadInt, prime: &QuadPrime, k: u32) -> u32 {
    let cap = prime.e * k;
    if y.is_zero() {
        return cap;
    }
    nu_p(y, prime).expect("nonzero").min(cap)
}

/// Primitive `q`-th roots of `x` in `O_K`, if any.
///
/// Candidates come from rounding floating-point roots in both embeddings and
/// are verified exactly, so a returned root is always correct.
pub fn qth_root(x: &QuadInt, q: u32) -> Option<QuadInt> {
    let field = x.field;
    let norm = x.norm();
    exact_root(&norm, q)?;
    let (a, b) = (x.a.to_f64()?, x.b.to_f64()?);
    let d = field.d as f64;
    let sq = d.abs().sqrt();
    let half = field.half_basis();
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    let solve = |s1: f64, s2: f64, w1: f64, w2: f64| {
        let bb = (s1 - s2) / (w1 - w2);
        (s1 - bb * w1, bb)
    };
    if field.d > 0 {
        let (w1, w2) = if half { ((1.0 + sq) / 2.0, (1.0 - sq) / 2.0) } else { (sq, -sq) };
        let real_roots = |v: f64| -> Vec<f64> {
            if q % 2 == 1 {
                vec![v.signum() * v.abs().powf(1.0 / q as f64)]
            } else if v >= 0.0 {
                let r = v.powf(1.0 / q as f64);
                vec![r, -r]
            } else {
                vec![]
            }
        };
        for r1 in real_roots(a + b * w1) {
            for r2 in real_roots(a + b * w2) {
                candidates.push(solve(r1, r2, w1, w2));
            }
        }
    } else {
        // w = wr + i*wi in the first embedding
        let (wr, wi) = if half { (0.5, sq / 2.0) } else { (0.0, sq) };
        let (re, im) = (a + b * wr, b * wi);
        let modulus = (re * re + im * im).sqrt().powf(1.0 / q as f64);
        let arg = im.atan2(re);
        for k in 0..q {
            let theta = (arg + 2.0 * std::f64::consts::PI * k as f64) / q as f64;
            let (vr, vi) = (modulus * theta.cos(), modulus * theta.sin());
            let bb = vi / wi;
            candidates.push((vr - bb * wr, bb));
        }
    }
    candidates.into_iter().find_map(|(ca, cb)| {
        if !ca.is_finite() || !cb.is_finite() {
            return None;
        }
        let v = field.element(BigInt::from(ca.round() as i128), BigInt::from(cb.round() as i128));
        (v.pow(q) == *x).then_some(v)
    })
}

/// Capelli's criterion over `K` for `x^n - u`: reducible iff `u` is a `q`-th
/// power for a prime `q | n`, or `4 | n` and `u = -4 v^4` (equivalently
/// `-4u` is a fourth power in `O_K`).
pub fn quadratic_capelli_screen(n: u64, u: &QuadInt) -> Result<()> {
    let mut m = n;
    let mut q = 2;
    while m > 1 {
        if m.is_multiple_of(q) {
            if let Some(v) = qth_root(u, q as u32) {
                return Err(Error::Reducible(format!("{u} = ({v})^{q}")));
            }
            while m.is_multiple_of(q) {
                m /= q;
            }
        }
        q += 1;
    }
    if n.is_multiple_of(4) {
        let minus4u = u.mul(&u.field.int(-4));
        if let Some(w) = qth_root(&minus4u, 4) {
            return Err(Error::Reducible(format!("-4*({u}) = ({w})^4")));
        }
    }
    Ok(())
}

/// Verdict of the pure-power test over a quadratic ring of integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadPurePowerVerdict {
    pub d: i64,
    pub n: u64,
    pub u: QuadInt,
    pub verdict: Verdict,
    pub failing_prime: Option<QuadPrime>,
    pub reason: Option<FailureReason>,
    /// Prime ideals dividing `n u` that were examined, with `v_P(u)`.
    pub checked: Vec<(QuadPrime, u32)>,
}

impl QuadPurePowerVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        let prime_json = |q: &QuadPrime| {
            serde_json::json!({
                "p": q.p.to_string(),
                "kind": q.kind,
                "e": q.e.to_string(),
                "f": q.f.to_string(),
                "hensel_root": q.hensel_root.as_ref().map(ToString::to_string),
            })
        };
        serde_json::json!({
            "d": self.d.to_string(),
            "n": self.n.to_string(),
            "u": self.u.to_json_tuple(),
            "verdict": self.verdict,
            "failing_prime": self.failing_prime.as_ref().map(prime_json),
            "reason": self.reason,
            "checked": self.checked.iter().map(|(q, v)| {
                let mut j = prime_json(q);
                j["nu_u"] = serde_json::Value::String(v.to_string());
                j
            }).collect::<Vec<_>>(),
        })
    }
}

/// Exact pure-power test for `x^n - u` over `O_K`, checked at every prime
/// ideal dividing `n u`: pass iff `v_P(u) = 1`, or `v_P(u) = 0` and
/// `v_P(u^(p^f) - u) = 1`.
pub fn thm4_check(field: &QuadField, n: u64, u: &QuadInt) -> Result<QuadPurePowerVerdict> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be >= 2, got {n}")));
    }
    if u.is_zero() {
        return Err(Error::InvalidArgument("u must be nonzero".into()));
    }
    if u.field != *field {
        return Err(Error::InvalidArgument("u belongs to a different field".into()));
    }
    quadratic_capelli_screen(n, u)?;

    let fnorm = arith::factor(&u.norm())?;
    let mut rational: Vec<BigUint> = fnorm.factors.iter().map(|(p, _)| p.clone()).collect();
    let nfac = arith::factor(&BigInt::from(n))?;
    rational.extend(nfac.factors.iter().map(|(p, _)| p.clone()));
    rational.sort();
    rational.dedup();

    let nq = field.int(n);
    let mut checked = Vec::new();
    let mut complete = fnorm.complete;
    for p in rational {
        let Some(p) = p.to_u64() else {
            complete = false;
            continue;
        };
        for prime in split_prime(field, p)? {
            let vu = nu_p(u, &prime)?;
            if vu == 0 && nu_p(&nq, &prime)? == 0 {
                continue;
            }
            checked.push((prime.clone(), vu));
            let reason = if vu >= 1 {
                (vu != 1).then_some(FailureReason::NuUNotOne)
            } else {
                let modulus = BigInt::from(p).pow(FROBENIUS_PRECISION);
                let e = BigUint::from(p).pow(prime.f);
                let y = u.pow_mod(&e, &modulus).sub(u);
                let v = nu_p_truncated(&y, &prime, FROBENIUS_PRECISION);
                (v != 1).then_some(FailureReason::FrobeniusValNotOne)
            };
            if let Some(reason) = reason {
                return Ok(QuadPurePowerVerdict {
                    d: field.d,
                    n,
                    u: u.clone(),
                    verdict: Verdict::NotMaximal,
                    failing_prime: Some(prime),
                    reason: Some(reason),
                    checked,
                });
            }
        }
    }
    Ok(QuadPurePowerVerdict {
        d: field.d,
        n,
        u: u.clone(),
        verdict: if complete { Verdict::Maximal } else { Verdict::Unknown },
        failing_prime: None,
        reason: None,
        checked,
    })
}

/// Runs the pure-power test over `Z[sqrt 3]` for every `x^n - m` with `3 | n`.
pub fn example2_suite(m_values: &[i64], n_values: &[u64]) -> Result<Vec<QuadPurePowerVerdict>> {
    let field = QuadField::new(3)?;
    let mut out = Vec::new();
    for &n in n_values {
        if n % 3 != 0 {
            return Err(Error::InvalidArgument(format!("n = {n} is not divisible by 3")));
        }
        for &m in m_values {
            out.push(thm4_check(&field, n, &field.int(m))?);
        }
    }
    Ok(out)
}
