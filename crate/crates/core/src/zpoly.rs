//! Dense univariate polynomials over the integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, vp};
use crate::error::{Error, Result};

/// Polynomial with arbitrary-precision integer coefficients, constant term
/// first. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with -1 for zero; handy in error messages.
    pub(crate) fn signed_degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact division of every coefficient by `c`; panics in debug if inexact.
    pub fn div_exact(&self, c: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|a| {
                    let (q, r) = a.div_rem(c);
                    debug_assert!(r.is_zero(), "inexact coefficient division");
                    q
                })
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = IntPoly::constant(BigInt::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `f(x + c)`
    pub fn shift(&self, c: &BigInt) -> Self {
        let lin = IntPoly::new(vec![c.clone(), BigInt::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(IntPoly::zero(), |acc, a| &(&acc * &lin) + &IntPoly::constant(a.clone()))
    }

    /// gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Quotient and remainder of Euclidean division by a monic `phi`.
    ///
    /// `f = q * phi + r` holds exactly, with `r = 0` or `deg r < deg phi`.
    pub fn monic_divmod(&self, phi: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        if !phi.is_monic() {
            return Err(Error::NotMonic);
        }
        let dphi = phi.degree().unwrap();
        if dphi == 0 {
            return Err(Error::ConstantDivisor);
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= dphi {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dphi];
        for k in (0..quot.len()).rev() {
            let c = std::mem::take(&mut rem[k + dphi]);
            if c.is_zero() {
                continue;
            }
            for (j, pc) in phi.coeffs[..dphi].iter().enumerate() {
                rem[k + j] -= &c * pc;
            }
            quot[k] = c;
        }
        rem.truncate(dphi);
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// Pseudo-remainder: `lc(g)^(deg f - deg g + 1) * f mod g`.
    fn pseudo_rem(&self, g: &IntPoly) -> IntPoly {
        let dg = g.degree().expect("nonzero divisor");
        let lc = g.leading().unwrap().clone();
        let mut r = self.clone();
        let mut steps = (self.signed_degree() - dg as isize + 1).max(0) as u32;
        while let Some(dr) = r.degree() {
            if dr < dg {
                break;
            }
            let t = IntPoly::monomial(r.leading().unwrap().clone(), dr - dg);
            r = &r.scale(&lc) - &(&t * g);
            steps -= 1;
        }
        r.scale(&lc.pow(steps))
    }

    /// Minimum p-adic valuation over the nonzero coefficients.
    pub fn gauss_valuation(&self, p: u64) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !arith::is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(self.gauss_valuation_unchecked(p))
    }

    pub(crate) fn gauss_valuation_unchecked(&self, p: u64) -> u32 {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| vp(c, p))
            .min()
            .expect("nonzero polynomial")
    }

    /// Discriminant `(-1)^(n(n-1)/2) * Res(f, f')` of a monic polynomial.
    pub fn discriminant(&self) -> Result<BigInt> {
        let n = self.degree().unwrap_or(0);
        if n < 2 {
            return Err(Error::DegreeTooSmall { min: 2, got: self.signed_degree() });
        }
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let res = resultant(self, &self.derivative());
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -res } else { res })
    }

    /// Digits `(a_0, ..., a_l)` with `self = sum a_i * phi^(l - i)`.
    pub fn phi_adic_expansion(&self, phi: &IntPoly) -> Result<Vec<IntPoly>> {
        if !phi.is_monic() {
            return Err(Error::NotMonic);
        }
        if phi.degree() == Some(0) {
            return Err(Error::ConstantDivisor);
        }
        let mut digits = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.monic_divmod(phi)?;
            digits.push(r);
            cur = q;
        }
        digits.reverse();
        Ok(digits)
    }

    /// Coefficients as decimal strings, constant term first.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

/// Resultant via the subresultant pseudo-remainder sequence.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign = BigInt::one();
    if a.degree() < b.degree() {
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let (da, db) = (a.degree().unwrap() as u32, b.degree().unwrap() as u32);
    if db == 0 {
        return sign * b.leading().unwrap().pow(da);
    }
    let (ca, cb) = (a.content(), b.content());
    a = a.div_exact(&ca);
    b = b.div_exact(&cb);
    let t = ca.pow(db) * cb.pow(da);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        if r.is_zero() {
            return BigInt::zero();
        }
        b = r.div_exact(&(&g * h.pow(delta)));
        g = a.leading().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta) / h.pow(delta - 1)
        };
        if b.degree() == Some(0) {
            let da = a.degree().unwrap() as u32;
            let lb = b.leading().unwrap();
            let h = if da == 0 { h } else { lb.pow(da) / h.pow(da - 1) };
            return sign * t * h;
        }
    }
}

/// The cyclotomic polynomial of order `p^r`, `sum_{k<p} x^(k p^(r-1))`.
pub fn cyclotomic_prime_power(p: u64, r: u32) -> Result<IntPoly> {
    if !arith::is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("exponent r must be >= 1".into()));
    }
    let step = p
        .checked_pow(r - 1)
        .filter(|s| s.checked_mul(p).is_some_and(|n| n <= 1 << 20))
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{r} is too large")))?
        as usize;
    let mut coeffs = vec![BigInt::zero(); step * (p as usize - 1) + 1];
    for k in 0..p as usize {
        coeffs[k * step] = BigInt::one();
    }
    Ok(IntPoly::new(coeffs))
}

fn add_coeffs(a: &[BigInt], b: &[BigInt], negate_b: bool) -> IntPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        out.push(if negate_b { x - y } else { x + y });
    }
    IntPoly::new(out)
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        add_coeffs(&self.coeffs, &rhs.coeffs, false)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        add_coeffs(&self.coeffs, &rhs.coeffs, true)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for IntPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

/// Parses either a JSON array of coefficients (constant term first) or a sum
/// of `c*x^k` terms.
pub fn parse_poly(input: &str) -> Result<IntPoly> {
    if input.trim_start().starts_with('[') {
        parse_json_coeffs(input)
    } else {
        TermParser::new(input).parse()
    }
}

fn parse_json_coeffs(input: &str) -> Result<IntPoly> {
    let offset = input.len() - input.trim_start().len();
    let value: serde_json::Value = serde_json::from_str(input).map_err(|e| Error::Parse {
        pos: offset + e.column().saturating_sub(1),
        msg: e.to_string(),
    })?;
    let items = value.as_array().ok_or(Error::Parse {
        pos: offset,
        msg: "expected a JSON array".into(),
    })?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let text = match v {
                serde_json::Value::String(s) => s.trim().to_string(),
                serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                _ => {
                    return Err(Error::Parse {
                        pos: offset,
                        msg: format!("element {i}: expected an integer string"),
                    })
                }
            };
            text.parse::<BigInt>().map_err(|_| Error::Parse {
                pos: offset,
                msg: format!("element {i}: {text:?} is not an integer"),
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(IntPoly::new)
}

struct TermParser<'a> {
    chars: Vec<(usize, char)>,
    idx: usize,
    src: &'a str,
}

impl<'a> TermParser<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        TermParser { chars, idx: 0, src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map_or(self.src.len(), |&(p, _)| p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.idx;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.idx += 1;
        }
        (self.idx > start).then(|| self.chars[start..self.idx].iter().map(|&(_, c)| c).collect())
    }

    fn parse(mut self) -> Result<IntPoly> {
        if self.chars.is_empty() {
            return self.err("empty polynomial");
        }
        let mut acc: Vec<BigInt> = Vec::new();
        let mut first = true;
        while self.peek().is_some() {
            let negative = match self.peek() {
                Some('+') => {
                    self.idx += 1;
                    false
                }
                Some('-') => {
                    self.idx += 1;
                    true
                }
                _ if first => false,
                Some(c) => return self.err(format!("expected '+' or '-', found {c:?}")),
                None => unreachable!(),
            };
            first = false;
            let (coef, power) = self.term()?;
            if acc.len() <= power {
                acc.resize(power + 1, BigInt::zero());
            }
            if negative {
                acc[power] -= coef;
            } else {
                acc[power] += coef;
            }
        }
        Ok(IntPoly::new(acc))
    }

    fn term(&mut self) -> Result<(BigInt, usize)> {
        let coef = self.digits().map(|d| d.parse::<BigInt>().unwrap());
        if coef.is_some() && self.peek() == Some('*') {
            self.idx += 1;
            if self.peek() != Some('x') {
                return self.err("expected 'x' after '*'");
            }
        }
        if self.peek() != Some('x') {
            return match coef {
                Some(c) => Ok((c, 0)),
                None => match self.peek() {
                    Some(c) => self.err(format!("unexpected character {c:?}")),
                    None => self.err("dangling sign at end of input"),
                },
            };
        }
        self.idx += 1;
        let power = if self.peek() == Some('^') {
            self.idx += 1;
            match self.digits() {
                Some(d) => d.parse::<usize>().map_err(|_| Error::Parse {
                    pos: self.pos(),
                    msg: "exponent too large".into(),
                })?,
                None => return self.err("expected exponent digits after '^'"),
            }
        } else {
            1
        };
        if power > 1 << 20 {
            return self.err("exponent too large");
        }
        Ok((coef.unwrap_or_else(BigInt::one), power))
    }
}
