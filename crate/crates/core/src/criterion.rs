//! Per-prime and global maximality of `Z[alpha]`.
//!
//! At a prime `p`, factor `f mod p = prod phi_i^l_i`. The order is maximal at
//! `p` iff every factor has `l_i = 1` or the remainder of `f` by a monic lift
//! of `phi_i` has Gauss valuation exactly 1. Globally only primes whose
//! square divides the discriminant can divide the index, so those are the
//! only ones checked.
//!
//! The classical gcd form of Dedekind's criterion lives here too, as an
//! independent cross-check; it shares only the mod-p factorization with the
//! remainder test.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{self, is_prime_u64, PrimeFactorization};
use crate::eisenstein::is_eisenstein_at;
use crate::error::{Error, Result};
use crate::fppoly::{factor_mod_p, is_irreducible_mod_p, reduce_unchecked, FpPoly};
use crate::zpoly::IntPoly;

/// Largest prime tried when searching for an Eisenstein witness.
pub const EISENSTEIN_SEARCH_BOUND: u64 = 1000;
/// Largest prime tried when searching for an irreducible reduction.
pub const MODP_SEARCH_BOUND: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Maximal,
    NotMaximal,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Maximal => "maximal",
            Verdict::NotMaximal => "not-maximal",
            Verdict::Unknown => "unknown",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Valuation of a remainder `R_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemainderValuation {
    /// Skipped because the factor is simple.
    NotComputed,
    Finite(u32),
    /// The remainder vanished, i.e. the lift divides `f` over `Z`.
    Infinite,
}

impl RemainderValuation {
    fn of(r: &IntPoly, p: u64) -> Self {
        if r.is_zero() {
            RemainderValuation::Infinite
        } else {
            RemainderValuation::Finite(r.gauss_valuation_unchecked(p))
        }
    }

    pub fn is_one(self) -> bool {
        self == RemainderValuation::Finite(1)
    }

    fn wire(self) -> String {
        self.to_string()
    }
}

impl std::fmt::Display for RemainderValuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RemainderValuation::NotComputed => f.write_str("not-computed"),
            RemainderValuation::Finite(v) => write!(f, "{v}"),
            RemainderValuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Evidence gathered for one irreducible factor of `f mod p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorEvidence {
    pub fbar: FpPoly,
    pub multiplicity: u32,
    pub lift: IntPoly,
    pub remainder: IntPoly,
    pub remainder_valuation: RemainderValuation,
    pub satisfied: bool,
}

impl FactorEvidence {
    fn build(f: &IntPoly, p: u64, fbar: FpPoly, multiplicity: u32, lift: IntPoly) -> Self {
        let (_, remainder) = f.monic_divmod(&lift).expect("monic lift");
        let remainder_valuation = if multiplicity >= 2 {
            RemainderValuation::of(&remainder, p)
        } else {
            RemainderValuation::NotComputed
        };
        let satisfied = multiplicity == 1 || remainder_valuation.is_one();
        FactorEvidence {
            fbar,
            multiplicity,
            lift,
            remainder,
            remainder_valuation,
            satisfied,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalReport {
    pub p: u64,
    pub factors: Vec<FactorEvidence>,
    pub locally_maximal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IrreducibilityStatus {
    CertifiedEisenstein,
    CertifiedModp,
    Assumed,
}

impl IrreducibilityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            IrreducibilityStatus::CertifiedEisenstein => "certified-eisenstein",
            IrreducibilityStatus::CertifiedModp => "certified-modp",
            IrreducibilityStatus::Assumed => "assumed",
        }
    }
}

/// Outcome of the cheap irreducibility screen, with its witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrreducibilityEvidence {
    pub status: IrreducibilityStatus,
    pub prime: Option<u64>,
    /// Shift `c` such that `f(x + c)` is Eisenstein at `prime`.
    pub shift: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub f: IntPoly,
    pub disc: BigInt,
    pub disc_factorization: PrimeFactorization,
    pub checked_primes: Vec<LocalReport>,
    /// Primes with square dividing the discriminant that do not fit the
    /// 64-bit residue arithmetic; their presence forces `unknown`.
    pub unchecked_primes: Vec<BigUint>,
    pub verdict: Verdict,
    pub irreducibility: IrreducibilityEvidence,
}

fn check_input(f: &IntPoly, p: Option<u64>) -> Result<()> {
    if f.degree().unwrap_or(0) < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: f.signed_degree() });
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if let Some(p) = p {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
    }
    Ok(())
}

/// Remainder-valuation test of maximality of `Z[alpha]` at `p`.
///
/// `f` is assumed irreducible over the rationals.
pub fn local_maximality(f: &IntPoly, p: u64, seed: u64) -> Result<LocalReport> {
    check_input(f, Some(p))?;
    Ok(local_unchecked(f, p, seed))
}

fn local_unchecked(f: &IntPoly, p: u64, seed: u64) -> LocalReport {
    let fac = factor_mod_p(&reduce_unchecked(f, p), seed).expect("monic f is nonzero mod p");
    let factors: Vec<FactorEvidence> = fac
        .factors
        .into_iter()
        .map(|(fbar, l)| {
            let lift = fbar.balanced_lift();
            FactorEvidence::build(f, p, fbar, l, lift)
        })
        .collect();
    let locally_maximal = factors.iter().all(|e| e.satisfied);
    LocalReport { p, factors, locally_maximal }
}

/// Classical Dedekind criterion: with `g = prod phi_i`, `h = f / g` mod p and
/// `T = (g h - f) / p`, maximal at `p` iff `gcd(T, g, h) = 1` over `F_p`.
pub fn classical_dedekind_oracle(f: &IntPoly, p: u64, seed: u64) -> Result<bool> {
    check_input(f, Some(p))?;
    let fbar = reduce_unchecked(f, p);
    let fac = factor_mod_p(&fbar, seed)?;
    let gbar = fac
        .factors
        .iter()
        .fold(FpPoly::one(p), |acc, (phi, _)| acc.mul(phi));
    let hbar = fbar.div_rem(&gbar).0;
    let g = gbar.balanced_lift();
    let h = hbar.balanced_lift();
    let t = (&(&g * &h) - f).div_exact(&BigInt::from(p));
    let tbar = reduce_unchecked(&t, p);
    Ok(tbar.gcd(&gbar).gcd(&hbar).is_one())
}

/// Cheap irreducibility certificates: Eisenstein after a shift by 0, 1 or -1
/// at a prime up to 1000, or an irreducible reduction at a prime up to 100
/// not dividing the discriminant.
pub fn irreducibility_screen(f: &IntPoly, disc: &BigInt) -> IrreducibilityEvidence {
    let primes = arith::primes_up_to(EISENSTEIN_SEARCH_BOUND);
    for shift in [0i64, 1, -1] {
        let g = f.shift(&BigInt::from(shift));
        if g.coeff(0).is_zero() {
            continue;
        }
        for &p in &primes {
            if is_eisenstein_at(&g, p).unwrap_or(false) {
                return IrreducibilityEvidence {
                    status: IrreducibilityStatus::CertifiedEisenstein,
                    prime: Some(p),
                    shift: Some(shift),
                };
            }
        }
    }
    for &p in primes.iter().take_while(|&&p| p <= MODP_SEARCH_BOUND) {
        if !disc.is_zero() && arith::vp(disc, p) > 0 {
            continue;
        }
        let fbar = reduce_unchecked(f, p);
        if fbar.degree() == f.degree() && is_irreducible_mod_p(&fbar).unwrap_or(false) {
            return IrreducibilityEvidence {
                status: IrreducibilityStatus::CertifiedModp,
                prime: Some(p),
                shift: None,
            };
        }
    }
    IrreducibilityEvidence {
        status: IrreducibilityStatus::Assumed,
        prime: None,
        shift: None,
    }
}

/// Decides `Z[alpha] = O_K` by checking every prime whose square divides the
/// discriminant of `f`.
pub fn is_maximal_global(f: &IntPoly, seed: u64) -> Result<Certificate> {
    check_input(f, None)?;
    let disc = f.discriminant()?;
    if disc.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    let disc_factorization = arith::factor(&disc)?;
    let mut checked_primes = Vec::new();
    let mut unchecked_primes = Vec::new();
    for (p, e) in &disc_factorization.factors {
        if *e < 2 {
            continue;
        }
        match p.to_u64() {
            Some(p) => checked_primes.push(local_unchecked(f, p, seed)),
            None => unchecked_primes.push(p.clone()),
        }
    }
    let verdict = if checked_primes.iter().any(|r| !r.locally_maximal) {
        Verdict::NotMaximal
    } else if disc_factorization.complete && unchecked_primes.is_empty() {
        Verdict::Maximal
    } else {
        Verdict::Unknown
    };
    let irreducibility = irreducibility_screen(f, &disc);
    Ok(Certificate {
        f: f.clone(),
        disc,
        disc_factorization,
        checked_primes,
        unchecked_primes,
        verdict,
        irreducibility,
    })
}

/// Recomputes the `nu_p(R_i) = 1` predicate of a repeated factor under
/// `trials` random lifts `phi + p*H` and reports whether it never changes.
pub fn lift_stability_check(
    f: &IntPoly,
    p: u64,
    factor_index: usize,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    check_input(f, Some(p))?;
    let report = local_unchecked(f, p, seed);
    let count = report.factors.len();
    let ev = report
        .factors
        .into_iter()
        .nth(factor_index)
        .ok_or(Error::FactorIndex { index: factor_index, count })?;
    if ev.multiplicity < 2 {
        return Err(Error::SimpleFactor);
    }
    let expected = ev.remainder_valuation.is_one();
    let deg = ev.lift.degree().unwrap();
    let pb = BigInt::from(p);
    let bound = p.min(1 << 30) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6c69_6674);
    for _ in 0..trials {
        let h = IntPoly::new(
            (0..deg)
                .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                .collect(),
        );
        let lift = &ev.lift + &h.scale(&pb);
        let other = FactorEvidence::build(f, p, ev.fbar.clone(), ev.multiplicity, lift);
        if other.remainder_valuation.is_one() != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct WireFactor {
    phi_bar: Vec<String>,
    l: String,
    lift: Vec<String>,
    remainder: Vec<String>,
    remainder_val: String,
    ok: bool,
}

#[derive(Serialize)]
struct WireReport {
    p: String,
    locally_maximal: bool,
    factors: Vec<WireFactor>,
}

#[derive(Serialize)]
struct WireFactorization {
    sign: &'static str,
    factors: Vec<[String; 2]>,
    cofactor: String,
    complete: bool,
}

#[derive(Serialize)]
struct WireWitness {
    p: Option<String>,
    shift: Option<String>,
}

#[derive(Serialize)]
struct WireCertificate {
    f: Vec<String>,
    disc: String,
    disc_factors: WireFactorization,
    primes: Vec<WireReport>,
    unchecked_primes: Vec<String>,
    verdict: Verdict,
    irreducibility_status: IrreducibilityStatus,
    irreducibility_witness: WireWitness,
}

fn fp_strings(f: &FpPoly) -> Vec<String> {
    f.coeffs().iter().map(ToString::to_string).collect()
}

impl LocalReport {
    fn wire(&self) -> WireReport {
        WireReport {
            p: self.p.to_string(),
            locally_maximal: self.locally_maximal,
            factors: self
                .factors
                .iter()
                .map(|e| WireFactor {
                    phi_bar: fp_strings(&e.fbar),
                    l: e.multiplicity.to_string(),
                    lift: e.lift.to_decimal_strings(),
                    remainder: e.remainder.to_decimal_strings(),
                    remainder_val: e.remainder_valuation.wire(),
                    ok: e.satisfied,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.wire()).expect("serializable")
    }
}

impl Certificate {
    fn wire(&self) -> WireCertificate {
        let fac = &self.disc_factorization;
        WireCertificate {
            f: self.f.to_decimal_strings(),
            disc: self.disc.to_string(),
            disc_factors: WireFactorization {
                sign: if fac.sign == num_bigint::Sign::Minus { "-" } else { "+" },
                factors: fac
                    .factors
                    .iter()
                    .map(|(p, e)| [p.to_string(), e.to_string()])
                    .collect(),
                cofactor: fac.cofactor.to_string(),
                complete: fac.complete,
            },
            primes: self.checked_primes.iter().map(LocalReport::wire).collect(),
            unchecked_primes: self.unchecked_primes.iter().map(ToString::to_string).collect(),
            verdict: self.verdict,
            irreducibility_status: self.irreducibility.status,
            irreducibility_witness: WireWitness {
                p: self.irreducibility.prime.map(|p| p.to_string()),
                shift: self.irreducibility.shift.map(|s| s.to_string()),
            },
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.wire()).expect("serializable")
    }

    /// Pretty JSON; identical inputs give identical bytes.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.wire()).expect("serializable")
    }
}
