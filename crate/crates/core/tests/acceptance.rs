//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use dedcrit::arith::{factor, primes_up_to, valuation_int};
use dedcrit::criterion::{
    classical_dedekind_oracle, is_maximal_global, lift_stability_check, local_maximality,
};
use dedcrit::eisenstein::{is_eisenstein_at, is_phi_eisenstein, power_basis_generator};
use dedcrit::fppoly::{is_irreducible_mod_p, reduce_mod_p};
use dedcrit::purepower::{capelli_screen, cor5_exact, pure_power_poly, thm3_sufficient};
use dedcrit::quadratic::{quadratic_capelli_screen, thm4_check, QuadField};
use dedcrit::zpoly::cyclotomic_prime_power;
use dedcrit::{IntPoly, LocalReport, Verdict};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x0dd5_eed5;

/// A repeated factor met along the way: `(f, p, factor index)`.
type Instance = (IntPoly, u64, usize);

#[derive(Default)]
struct Run {
    failures: Vec<String>,
    cases: usize,
    transcript: String,
    instances: Vec<Instance>,
}

impl Run {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn log(&mut self, line: impl AsRef<str>) {
        self.transcript.push_str(line.as_ref());
        self.transcript.push('\n');
    }

    fn collect_repeated(&mut self, f: &IntPoly, report: &LocalReport) {
        for (i, e) in report.factors.iter().enumerate() {
            if e.multiplicity >= 2 {
                self.instances.push((f.clone(), report.p, i));
            }
        }
    }
}

fn cyclotomic(seed: u64) -> Run {
    let mut run = Run::default();
    for (p, r) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (5, 1), (7, 1), (11, 1)] {
        let f = cyclotomic_prime_power(p, r).unwrap();
        let cert = is_maximal_global(&f, seed).unwrap();
        run.log(cert.to_json_string());
        run.check(cert.verdict == Verdict::Maximal, || format!("Phi_{p}^{r} verdict {}", cert.verdict));
        let checked: Vec<u64> = cert.checked_primes.iter().map(|r| r.p).collect();
        run.check(checked == [p], || format!("Phi_{p}^{r} checked primes {checked:?}"));
        let x_minus_one = reduce_mod_p(&IntPoly::from_i64(&[-1, 1]), p).unwrap();
        let remainder = cert
            .checked_primes
            .iter()
            .flat_map(|r| &r.factors)
            .find(|e| e.fbar == x_minus_one)
            .map(|e| e.remainder.clone());
        let expected = IntPoly::from_i64(&[p as i64]);
        run.check(remainder.as_ref() == Some(&expected), || {
            format!("Phi_{p}^{r} remainder {remainder:?}")
        });
        for report in &cert.checked_primes {
            run.collect_repeated(&f, report);
        }
    }
    run
}

fn random_corpus(seed: u64, count: usize) -> Vec<IntPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let aux = primes_up_to(100);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let deg = rng.gen_range(2..=6);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-50..=50)).collect();
        c.push(1);
        let f = IntPoly::from_i64(&c);
        let screened = aux
            .iter()
            .any(|&p| is_irreducible_mod_p(&reduce_mod_p(&f, p).unwrap()).unwrap());
        if screened {
            out.push(f);
        }
    }
    out
}

fn oracle_equivalence(seed: u64) -> Run {
    let mut run = Run::default();
    let primes = primes_up_to(100);
    for f in random_corpus(seed, 500) {
        let disc = f.discriminant().unwrap();
        for &p in &primes {
            if valuation_int(&disc, p).unwrap() < 2 {
                continue;
            }
            let report = local_maximality(&f, p, seed).unwrap();
            let oracle = classical_dedekind_oracle(&f, p, seed).unwrap();
            run.log(format!("{f} @ {p}: {} {}", report.locally_maximal, oracle));
            run.check(report.locally_maximal == oracle, || {
                format!("{f} at {p}: remainder test {} vs gcd test {oracle}", report.locally_maximal)
            });
            run.collect_repeated(&f, &report);
        }
    }
    run
}

fn pure_power_exactness(seed: u64) -> Run {
    let mut run = Run::default();
    for n in 2..=8u64 {
        for u in -30i64..=30 {
            let u = BigInt::from(u);
            if u == BigInt::from(0) || capelli_screen(n, &u).is_err() {
                continue;
            }
            let f = pure_power_poly(n, &u);
            let exact = cor5_exact(n, &u).unwrap();
            let cert = is_maximal_global(&f, seed).unwrap();
            run.log(format!("{}", exact.to_json()));
            run.log(cert.to_json_string());
            run.check(exact.verdict == cert.verdict, || {
                format!("x^{n} - {u}: closed form {} vs engine {}", exact.verdict, cert.verdict)
            });
            for report in &cert.checked_primes {
                run.collect_repeated(&f, report);
            }
        }
    }
    for (u, expected) in [(5, Verdict::NotMaximal), (7, Verdict::Maximal), (6, Verdict::Maximal)] {
        let got = cor5_exact(2, &BigInt::from(u)).unwrap().verdict;
        run.check(got == expected, || format!("x^2 - {u}: {got}, expected {expected}"));
    }
    run
}

fn sufficient_condition(seed: u64) -> Run {
    let mut run = Run::default();
    for n in 2..=8u64 {
        let rad: Vec<u64> = factor(&BigInt::from(n))
            .unwrap()
            .factors
            .iter()
            .map(|(q, _)| q.try_into().unwrap())
            .collect();
        for a in -30i64..=30 {
            if a == 0 {
                continue;
            }
            let squarefree = factor(&BigInt::from(a)).unwrap().is_squarefree();
            if !squarefree || !rad.iter().all(|&q| a % q as i64 == 0) {
                continue;
            }
            let a = BigInt::from(a);
            let thm3 = thm3_sufficient(n, &a);
            let cert = is_maximal_global(&pure_power_poly(n, &a), seed).unwrap();
            run.log(format!("x^{n} - {a}: {thm3:?} {}", cert.verdict));
            run.check(matches!(thm3, Ok(true)) && cert.verdict == Verdict::Maximal, || {
                format!("x^{n} - {a}: sufficient test {thm3:?}, engine {}", cert.verdict)
            });
        }
    }
    run
}

fn quadratic_example() -> Run {
    let mut run = Run::default();
    let k = QuadField::new(3).unwrap();
    let named = [(3u64, 2i64), (3, 6), (6, 5), (3, 5)];
    for (n, m) in named {
        let v = thm4_check(&k, n, &k.int(m));
        run.log(format!("{:?}", v.as_ref().map(|v| v.to_json())));
        run.check(matches!(&v, Ok(v) if v.verdict == Verdict::NotMaximal), || {
            format!("x^{n} - {m} over Z[sqrt 3]: {:?}", v.map(|v| v.verdict))
        });
    }
    for n in [3u64, 6] {
        for m in 2..=10i64 {
            if quadratic_capelli_screen(n, &k.int(m)).is_err() {
                run.log(format!("x^{n} - {m}: reducible"));
                continue;
            }
            let v = thm4_check(&k, n, &k.int(m)).unwrap();
            run.log(v.to_json().to_string());
            run.check(v.verdict == Verdict::NotMaximal, || {
                format!("x^{n} - {m} over Z[sqrt 3]: {}", v.verdict)
            });
        }
    }
    run
}

fn lift_independence(instances: &[Instance], seed: u64) -> Run {
    let mut run = Run::default();
    for (f, p, i) in instances {
        let ok = lift_stability_check(f, *p, *i, 10, seed);
        run.log(format!("{f} @ {p} #{i}: {ok:?}"));
        run.check(matches!(ok, Ok(true)), || format!("{f} at {p}, factor {i}: {ok:?}"));
    }
    run
}

fn random_poly_below(rng: &mut ChaCha8Rng, deg: usize, bound: i64) -> IntPoly {
    IntPoly::from_i64(&(0..deg).map(|_| rng.gen_range(-bound..=bound)).collect::<Vec<_>>())
}

fn eisenstein_family(seed: u64) -> Run {
    let mut run = Run::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xe15e);
    let primes = primes_up_to(50);

    for _ in 0..200 {
        let p = primes[rng.gen_range(0..primes.len())];
        let pi = p as i64;
        let deg = rng.gen_range(2..=8);
        let mut c: Vec<i64> = (0..deg).map(|_| pi * rng.gen_range(-10..=10)).collect();
        let unit = loop {
            let u = rng.gen_range(-20i64..=20);
            if u % pi != 0 {
                break u;
            }
        };
        c[0] = pi * unit;
        c.push(1);
        let f = IntPoly::from_i64(&c);
        let eis = is_eisenstein_at(&f, p).unwrap();
        let local = local_maximality(&f, p, seed).unwrap().locally_maximal;
        run.log(format!("{f} @ {p}: {eis} {local}"));
        run.check(eis && local, || format!("{f} at {p}: eisenstein {eis}, local {local}"));
    }

    let small = [2u64, 3, 5, 7];
    for k in 0..100 {
        let p = small[rng.gen_range(0..small.len())];
        let pb = BigInt::from(p);
        let d = 1 + k % 3;
        let phi = loop {
            let mut g = random_poly_below(&mut rng, d, 9);
            g = &g + &IntPoly::monomial(BigInt::from(1), d);
            if is_irreducible_mod_p(&reduce_mod_p(&g, p).unwrap()).unwrap() {
                break g;
            }
        };
        // keep deg f >= 2
        let l = rng.gen_range(if d == 1 { 2 } else { 1 }..=(12 / d).min(4));
        let mut f = phi.pow(l as u32);
        for i in 1..l {
            let a = random_poly_below(&mut rng, d, 5).scale(&pb);
            f = &f + &(&a * &phi.pow((l - i) as u32));
        }
        let last = loop {
            let a = random_poly_below(&mut rng, d, 5);
            if !a.is_zero() && a.gauss_valuation(p).unwrap() == 0 {
                break a.scale(&pb);
            }
        };
        f = &f + &last;
        let pe = is_phi_eisenstein(&f, &phi, p);
        let local = local_maximality(&f, p, seed).map(|r| r.locally_maximal);
        run.log(format!("{f} / {phi} @ {p}: {pe:?} {local:?}"));
        run.check(matches!(pe, Ok(true)) && matches!(local, Ok(true)), || {
            format!("{f} with phi {phi} at {p}: phi-eisenstein {pe:?}, local {local:?}")
        });
    }

    for n in 2..=50u64 {
        for m in 1..=50u64 {
            if num_integer::gcd(m, n) != 1 {
                continue;
            }
            let t = power_basis_generator(n, m, 2).unwrap();
            run.log(t.description());
            run.check(t.m * t.s == t.n * t.t + 1 && t.s < n, || format!("{t:?}"));
        }
    }
    for n in 2..=12u64 {
        for m in 1..=12u64 {
            if num_integer::gcd(m, n) != 1 {
                continue;
            }
            let t = power_basis_generator(n, m, 3).unwrap();
            let a = BigInt::from(3).pow(m as u32) * 2;
            let g = t.minimal_polynomial(&a).unwrap();
            run.check(is_eisenstein_at(&g, 3).unwrap(), || format!("{} for x^{n} + {a}", t.description()));
        }
    }
    run
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
}

fn report(c: &Criterion, run: &Run, elapsed: Duration) -> bool {
    let in_time = c.limit.is_none_or(|l| elapsed <= l);
    let pass = run.failures.is_empty() && in_time && run.cases > 0;
    let mut line = format!(
        "criterion {} ({}): {} [{} cases, {:.2}s",
        c.id,
        c.name,
        if pass { "PASS" } else { "FAIL" },
        run.cases,
        elapsed.as_secs_f64()
    );
    if let Some(l) = c.limit {
        let _ = write!(line, ", limit {}s", l.as_secs());
    }
    line.push(']');
    println!("{line}");
    for f in run.failures.iter().take(10) {
        println!("    {f}");
    }
    if !in_time {
        println!("    time limit exceeded");
    }
    pass
}

fn all_runs(seed: u64, mut on_done: impl FnMut(u8, &Run, Duration)) -> Vec<String> {
    let mut transcripts = Vec::new();
    let mut timed = |id: u8, f: &mut dyn FnMut() -> Run| {
        let start = Instant::now();
        let run = f();
        on_done(id, &run, start.elapsed());
        run
    };
    let r1 = timed(1, &mut || cyclotomic(seed));
    let r2 = timed(2, &mut || oracle_equivalence(seed));
    let r3 = timed(3, &mut || pure_power_exactness(seed));
    let r4 = timed(4, &mut || sufficient_condition(seed));
    let r5 = timed(5, &mut quadratic_example);
    let instances: Vec<Instance> = [&r1, &r2, &r3].iter().flat_map(|r| r.instances.clone()).collect();
    let r6 = timed(6, &mut || lift_independence(&instances, seed));
    let r7 = timed(7, &mut || eisenstein_family(seed));
    for r in [r1, r2, r3, r4, r5, r6, r7] {
        transcripts.push(r.transcript);
    }
    transcripts
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "prime-power cyclotomic orders are maximal", limit: Some(Duration::from_secs(5)) },
        Criterion { id: 2, name: "remainder test agrees with the classical gcd test", limit: Some(Duration::from_secs(60)) },
        Criterion { id: 3, name: "closed-form pure-power test matches the engine", limit: Some(Duration::from_secs(120)) },
        Criterion { id: 4, name: "squarefree sufficient condition implies maximality", limit: None },
        Criterion { id: 5, name: "pure powers over Z[sqrt 3] with 3 | n are not maximal", limit: None },
        Criterion { id: 6, name: "verdicts do not depend on the lift", limit: None },
        Criterion { id: 7, name: "Eisenstein-type polynomials give maximal orders", limit: None },
        Criterion { id: 8, name: "same seed gives byte-identical output", limit: None },
    ];
    let mut all_pass = true;
    let first = all_runs(SEED, |id, run, elapsed| {
        all_pass &= report(&criteria[id as usize - 1], run, elapsed);
    });

    let start = Instant::now();
    let second = all_runs(SEED, |_, _, _| {});
    let mut rerun = Run::default();
    for (i, (a, b)) in first.iter().zip(&second).enumerate() {
        rerun.check(a == b, || format!("criterion {} transcript differs", i + 1));
    }
    all_pass &= report(&criteria[7], &rerun, start.elapsed());

    if !all_pass {
        std::process::exit(1);
    }
}
