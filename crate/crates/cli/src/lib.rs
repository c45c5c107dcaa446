//! Argument handling and output formatting for the `dedcrit` binary.
//!
//! [`run`] never touches the process streams directly, so the whole command
//! surface can be exercised in-process.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{error::ErrorKind, Parser, Subcommand};
use dedcrit::criterion::{classical_dedekind_oracle, is_maximal_global, local_maximality};
use dedcrit::eisenstein::{is_eisenstein_at, is_phi_eisenstein, power_basis_generator};
use dedcrit::fppoly::{factor_mod_p, reduce_mod_p, FpPoly};
use dedcrit::purepower::{cor5_exact, pure_power_poly, thm3_sufficient};
use dedcrit::quadratic::{thm4_check, QuadField};
use dedcrit::zpoly::cyclotomic_prime_power;
use dedcrit::{parse_poly, Certificate, Error, IntPoly, LocalReport, Verdict};
use num_bigint::BigInt;
use serde_json::{json, Value};

pub const EXIT_TRUE: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_INPUT: u8 = 65;

/// The JSON schema every `--json` output conforms to.
pub const OUTPUT_SCHEMA: &str = include_str!("../schema/output.schema.json");

#[derive(Debug, Parser)]
#[command(name = "dedcrit", version, about = "Decide whether Z[alpha] is the full ring of integers")]
struct Cli {
    /// Seed for the randomized parts of mod-p factorization.
    #[arg(long, global = true, env = "DEDCRIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Extra diagnostics on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Global maximality certificate for a monic polynomial.
    Check {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Remainder-valuation test at a single prime.
    Local {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        p: String,
    },
    /// Classical gcd form of Dedekind's criterion at a single prime.
    Oracle {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        p: String,
    },
    /// Exact test for x^n - u.
    Purepower {
        n: String,
        #[arg(allow_hyphen_values = true)]
        u: String,
    },
    /// Squarefree sufficient condition for x^n - a (false is inconclusive).
    Thm3 {
        n: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Exact test for x^n - u over the integers of Q(sqrt d), u = a + b*w.
    Quadratic {
        #[arg(allow_hyphen_values = true)]
        d: String,
        n: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Certificate for the cyclotomic polynomial of order p^r.
    Cyclotomic { p: String, r: String },
    /// Monic irreducible factorization modulo p.
    FactorModP {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        p: String,
    },
    /// Eisenstein test at p, or the phi-adic variant with --phi.
    Eisenstein {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
    },
    /// Power-basis generator alpha^s / p^t for x^n + a with v_p(a) = m.
    Theta { n: String, m: String, p: String },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    seed: u64,
    json: bool,
    verbose: bool,
    stderr: String,
}

impl Ctx {
    fn note(&mut self, msg: impl AsRef<str>) {
        if self.verbose {
            self.stderr.push_str(msg.as_ref());
            self.stderr.push('\n');
        }
    }
}

/// Input rejected before or during evaluation.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(format!("error: {e}"))
    }
}

type Reply = Result<(u8, String), InputError>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_TRUE,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    let mut ctx = Ctx {
        seed: cli.seed,
        json: cli.json,
        verbose: cli.verbose,
        stderr: String::new(),
    };
    ctx.note(format!("seed: {}", ctx.seed));
    match dispatch(&mut ctx, cli.command) {
        Ok((code, mut stdout)) => {
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome { code, stdout, stderr: ctx.stderr }
        }
        Err(InputError(msg)) => {
            ctx.stderr.push_str(&msg);
            ctx.stderr.push('\n');
            Outcome {
                code: EXIT_INPUT,
                stdout: String::new(),
                stderr: ctx.stderr,
            }
        }
    }
}

fn poly_arg(name: &str, input: &str) -> Result<IntPoly, InputError> {
    parse_poly(input).map_err(|e| match e {
        Error::Parse { pos, msg } => {
            let caret = " ".repeat(input[..pos.min(input.len())].chars().count());
            InputError(format!(
                "error: invalid {name} at position {pos}: {msg}\n  {input}\n  {caret}^"
            ))
        }
        other => InputError(format!("error: invalid {name}: {other}")),
    })
}

fn int_arg<T: std::str::FromStr>(name: &str, input: &str) -> Result<T, InputError> {
    input
        .trim()
        .parse()
        .map_err(|_| InputError(format!("error: {name} must be an integer, got {input:?}")))
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Maximal => EXIT_TRUE,
        Verdict::NotMaximal => EXIT_FALSE,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn bool_code(b: bool) -> u8 {
    if b {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn dispatch(ctx: &mut Ctx, command: Command) -> Reply {
    match command {
        Command::Check { poly } => {
            let f = poly_arg("polynomial", &poly)?;
            certificate(ctx, &f)
        }
        Command::Cyclotomic { p, r } => {
            let f = cyclotomic_prime_power(int_arg("p", &p)?, int_arg("r", &r)?)?;
            ctx.note(format!("polynomial: {f}"));
            certificate(ctx, &f)
        }
        Command::Local { poly, p } => {
            let f = poly_arg("polynomial", &poly)?;
            let report = local_maximality(&f, int_arg("p", &p)?, ctx.seed)?;
            let out = if ctx.json { pretty(&report.to_json()) } else { local_text(&report) };
            Ok((bool_code(report.locally_maximal), out))
        }
        Command::Oracle { poly, p } => {
            let f = poly_arg("polynomial", &poly)?;
            let p: u64 = int_arg("p", &p)?;
            let ok = classical_dedekind_oracle(&f, p, ctx.seed)?;
            let out = if ctx.json {
                pretty(&json!({ "f": f.to_decimal_strings(), "p": p.to_string(), "maximal": ok }))
            } else {
                format!("p = {p}: {}", if ok { "maximal" } else { "not maximal" })
            };
            Ok((bool_code(ok), out))
        }
        Command::Purepower { n, u } => {
            let u: BigInt = int_arg("u", &u)?;
            let v = cor5_exact(int_arg("n", &n)?, &u)?;
            let out = if ctx.json {
                pretty(&v.to_json())
            } else {
                let mut s = format!("{}: {}", pure_power_poly(v.n, &v.u), v.verdict);
                if let (Some(p), Some(r)) = (&v.failing_prime, v.reason) {
                    let reason = serde_json::to_value(r).expect("serializable");
                    let _ = write!(s, " at p = {p} ({})", reason.as_str().unwrap_or_default());
                }
                s
            };
            Ok((verdict_code(v.verdict), out))
        }
        Command::Thm3 { n, a } => {
            let n: u64 = int_arg("n", &n)?;
            let a: BigInt = int_arg("a", &a)?;
            let ok = thm3_sufficient(n, &a)?;
            let out = if ctx.json {
                pretty(&json!({ "n": n.to_string(), "a": a.to_string(), "sufficient": ok }))
            } else if ok {
                format!("{}: maximal (sufficient condition holds)", pure_power_poly(n, &a))
            } else {
                format!("{}: inconclusive (sufficient condition fails)", pure_power_poly(n, &a))
            };
            Ok((bool_code(ok), out))
        }
        Command::Quadratic { d, n, a, b } => {
            let field = QuadField::new(int_arg("d", &d)?)?;
            let a: BigInt = int_arg("a", &a)?;
            let b: BigInt = int_arg("b", &b)?;
            let u = field.element(a, b);
            let v = thm4_check(&field, int_arg("n", &n)?, &u)?;
            let out = if ctx.json {
                pretty(&v.to_json())
            } else {
                let mut s = format!("x^{} - ({u}) over Q(sqrt {}): {}", v.n, v.d, v.verdict);
                if let Some(q) = &v.failing_prime {
                    let _ = write!(s, " at a prime above {}", q.p);
                }
                s
            };
            Ok((verdict_code(v.verdict), out))
        }
        Command::FactorModP { poly, p } => {
            let f = poly_arg("polynomial", &poly)?;
            let fbar = reduce_mod_p(&f, int_arg("p", &p)?)?;
            if fbar.is_zero() {
                return Err(InputError("error: polynomial vanishes modulo p".into()));
            }
            let fac = factor_mod_p(&fbar, ctx.seed)?;
            let out = if ctx.json {
                let factors: Vec<Value> = fac
                    .factors
                    .iter()
                    .map(|(g, l)| json!({ "phi_bar": fp_strings(g), "l": l.to_string() }))
                    .collect();
                pretty(&json!({ "p": fac.p.to_string(), "unit": fac.unit.to_string(), "factors": factors }))
            } else {
                let mut s = format!("unit {}", fac.unit);
                for (g, l) in &fac.factors {
                    let _ = write!(s, "\n({g})^{l}");
                }
                s
            };
            Ok((EXIT_TRUE, out))
        }
        Command::Eisenstein { poly, p, phi } => {
            let f = poly_arg("polynomial", &poly)?;
            let p: u64 = int_arg("p", &p)?;
            let phi = phi.map(|s| poly_arg("phi", &s)).transpose()?;
            let ok = match &phi {
                Some(phi) => is_phi_eisenstein(&f, phi, p)?,
                None => is_eisenstein_at(&f, p)?,
            };
            let out = if ctx.json {
                pretty(&json!({
                    "f": f.to_decimal_strings(),
                    "phi": phi.as_ref().map(IntPoly::to_decimal_strings),
                    "p": p.to_string(),
                    "eisenstein": ok,
                }))
            } else {
                let kind = if phi.is_some() { "phi-Eisenstein" } else { "Eisenstein" };
                format!("{kind} at {p}: {}", if ok { "yes" } else { "no" })
            };
            Ok((bool_code(ok), out))
        }
        Command::Theta { n, m, p } => {
            let t = power_basis_generator(int_arg("n", &n)?, int_arg("m", &m)?, int_arg("p", &p)?)?;
            let out = if ctx.json {
                pretty(&json!({
                    "n": t.n.to_string(),
                    "m": t.m.to_string(),
                    "s": t.s.to_string(),
                    "t": t.t.to_string(),
                    "p": t.p.to_string(),
                    "description": t.description(),
                    "theta_power_valuation": t.theta_power_valuation().to_string(),
                }))
            } else {
                format!("{} (v_{}(theta^{}) = {})", t.description(), t.p, t.n, t.theta_power_valuation())
            };
            Ok((EXIT_TRUE, out))
        }
    }
}

fn fp_strings(g: &FpPoly) -> Vec<String> {
    g.coeffs().iter().map(ToString::to_string).collect()
}

fn certificate(ctx: &mut Ctx, f: &IntPoly) -> Reply {
    let cert = is_maximal_global(f, ctx.seed)?;
    ctx.note(format!(
        "irreducibility: {}",
        cert.irreducibility.status.as_str()
    ));
    if cert.irreducibility.status == dedcrit::IrreducibilityStatus::Assumed {
        ctx.note("warning: irreducibility over Q was not certified; the verdict assumes it");
    }
    let out = if ctx.json { cert.to_json_string() } else { certificate_text(&cert) };
    Ok((verdict_code(cert.verdict), out))
}

fn local_text(r: &LocalReport) -> String {
    let mut s = format!(
        "p = {}: {}",
        r.p,
        if r.locally_maximal { "maximal" } else { "not maximal" }
    );
    for e in &r.factors {
        let _ = write!(
            s,
            "\n  factor {}  l = {}  lift {}  remainder {}  v = {}  {}",
            e.fbar,
            e.multiplicity,
            e.lift,
            e.remainder,
            e.remainder_valuation,
            if e.satisfied { "ok" } else { "fails" }
        );
    }
    s
}

fn certificate_text(c: &Certificate) -> String {
    let fac = &c.disc_factorization;
    let mut parts: Vec<String> = fac
        .factors
        .iter()
        .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect();
    if !fac.complete {
        parts.push(format!("{} (unfactored)", fac.cofactor));
    }
    let mut s = format!("f = {}\ndisc = {}", c.f, c.disc);
    if !parts.is_empty() {
        let sign = if c.disc < BigInt::from(0) { "-" } else { "" };
        let _ = write!(s, " = {sign}{}", parts.join(" * "));
    }
    let _ = write!(s, "\nirreducibility: {}", c.irreducibility.status.as_str());
    if let Some(p) = c.irreducibility.prime {
        let _ = write!(s, " (p = {p}");
        if let Some(shift) = c.irreducibility.shift {
            let _ = write!(s, ", shift {shift}");
        }
        s.push(')');
    }
    for r in &c.checked_primes {
        s.push('\n');
        s.push_str(&local_text(r));
    }
    for p in &c.unchecked_primes {
        let _ = write!(s, "\np = {p}: not checked (too large)");
    }
    let _ = write!(s, "\nverdict: {}", c.verdict);
    s
}
