//! Embedded checks: the catalog's closed forms recomputed from scratch,
//! plus a seeded randomized consistency batch. Exit 0 only when every
//! check passes.

use maxplus::asymptotics::{detect_coupling, power_trace, verify_power_formula, CouplingVerdict};
use maxplus::eigen::check_eigen_rows;
use maxplus::kernels::{birth, martin_kernel, tight1, tight2, truncate};
use maxplus::spectral::{kleene_star, max_cycle_mean, spectral_summary};
use maxplus::{Tolerance, Trop, TropMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{Format, Report};
use crate::source::CliError;
use crate::Outcome;

type CheckResult = Result<String, String>;

fn close(a: Trop, b: Trop, eps: f64) -> bool {
    if a.is_finite() && b.is_finite() {
        (a.value() - b.value()).abs() <= eps
    } else {
        a == b
    }
}

/// Star and plus of the unit-ladder window agree exactly with the carried
/// closed forms on the whole window.
fn ladder_unit_closure(tol: Tolerance) -> CheckResult {
    let k = tight1();
    let star_form = k.forms.star.as_ref().expect("carried form");
    let plus_form = k.forms.plus.as_ref().expect("carried form");
    let win = truncate(&k, 50).map_err(|e| e.to_string())?;
    let closure = kleene_star(&win.matrix, tol);
    for i in 0..=50usize {
        for j in 0..=50usize {
            let s = star_form(i, j).expect("total form");
            let p = plus_form(i, j).expect("total form");
            if closure.star.get(i, j) != s {
                return Err(format!("star({i},{j}) = {} != {s}", closure.star.get(i, j)));
            }
            if closure.plus.get(i, j) != p {
                return Err(format!("plus({i},{j}) = {} != {p}", closure.plus.get(i, j)));
            }
        }
    }
    Ok("2601 star and plus entries exact on window 50".to_string())
}

/// Closure of the harmonic-ladder window matches the carried forms on the
/// interior block.
fn ladder_harmonic_closure(tol: Tolerance) -> CheckResult {
    let k = tight2();
    let star_form = k.forms.star.as_ref().expect("carried form");
    let plus_form = k.forms.plus.as_ref().expect("carried form");
    let win = truncate(&k, 51).map_err(|e| e.to_string())?;
    let closure = kleene_star(&win.matrix, tol);
    for i in 0..=50usize {
        for j in 0..=50usize {
            let s = star_form(i, j).expect("total form");
            let p = plus_form(i, j).expect("total form");
            if !close(closure.star.get(i, j), s, 1e-9) {
                return Err(format!("star({i},{j}) = {} vs {s}", closure.star.get(i, j)));
            }
            if !close(closure.plus.get(i, j), p, 1e-9) {
                return Err(format!("plus({i},{j}) = {} vs {p}", closure.plus.get(i, j)));
            }
        }
    }
    Ok("2601 star and plus entries within 1e-9 on window 51".to_string())
}

/// Birth-death windows keep the circuit-mean radius at the loop value, and
/// the linear eigenvector family passes the row check away from the cut.
fn birth_death_radius_eigen(tol: Tolerance) -> CheckResult {
    let k = birth(-1.0, -3.0).map_err(|e| e.to_string())?;
    let form = k.forms.eigenvector.as_ref().expect("carried form");
    for n in [10usize, 20, 40] {
        let win = truncate(&k, n).map_err(|e| e.to_string())?;
        let rho = max_cycle_mean(&win.matrix);
        if rho != Trop::new(-2.0) {
            return Err(format!("window {n}: rho = {rho} != -2"));
        }
        for lambda in [-2.0f64, -1.0, 0.0] {
            let u: Vec<Trop> = (0..=n)
                .map(|node| form(lambda, node).expect("lambda at or above rho"))
                .collect();
            let rep = check_eigen_rows(&win.matrix, Trop::new(lambda), &u, &[n], tol)
                .map_err(|e| e.to_string())?;
            if !rep.pass || rep.residual != 0.0 {
                return Err(format!(
                    "window {n}, lambda {lambda}: residual {}",
                    rep.residual
                ));
            }
        }
    }
    Ok("rho = -2 exact and linear eigenvectors exact on windows 10, 20, 40".to_string())
}

/// The (0,0) power trace of the harmonic ladder alternates between -inf
/// and partial sums of the harmonic series.
fn harmonic_power_sums(_tol: Tolerance) -> CheckResult {
    let k = tight2();
    let win = truncate(&k, 60).map_err(|e| e.to_string())?;
    let trace = power_trace(&win.matrix, 0, 0, 25, false).map_err(|e| e.to_string())?;
    let mut partial = 0.0f64;
    for n in 1..=25usize {
        let got = trace.value_at(n);
        if n % 2 == 1 {
            if !got.is_zero() {
                return Err(format!("power {n}: {got}, expected -inf"));
            }
        } else {
            partial += 1.0 / (n / 2) as f64;
            if !close(got, Trop::new(-partial), 1e-9) {
                return Err(format!("power {n}: {got}, expected {}", -partial));
            }
        }
    }
    Ok("powers 1..=25 match the alternating partial-sum trace".to_string())
}

/// The Martin kernel of a birth-death window matches the carried piecewise
/// linear form and respects the basepoint bound.
fn birth_martin_form(tol: Tolerance) -> CheckResult {
    let k = birth(-1.0, -3.0).map_err(|e| e.to_string())?;
    let form = k.forms.martin.as_ref().expect("carried form");
    let mw = martin_kernel(&k, -1.0, 0, 30, tol).map_err(|e| e.to_string())?;
    if mw.max_bound_excess > tol.eps {
        return Err(format!("basepoint bound violated by {}", mw.max_bound_excess));
    }
    for i in 0..=15usize {
        for j in 0..=15usize {
            let want = form(-1.0, i, j).expect("total form");
            if !close(mw.kernel.get(i, j), want, 1e-9) {
                return Err(format!(
                    "K({i},{j}) = {} vs {want}",
                    mw.kernel.get(i, j)
                ));
            }
        }
    }
    Ok("256 kernel entries within 1e-9 at lambda = -1, bound respected".to_string())
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> TropMatrix {
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(0.6) {
                triples.push((i, j, Trop::new(rng.gen_range(lo..=hi) as f64)));
            }
        }
    }
    TropMatrix::from_triples(n, triples).expect("indices in range")
}

/// Star and plus closures of random nonpositive matrices satisfy the
/// defining identities exactly.
fn random_closure_identities(seed: u64, tol: Tolerance) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..25usize {
        let n = rng.gen_range(2..=6usize);
        let a = random_matrix(&mut rng, n, -9, 0);
        let res = kleene_star(&a, tol);
        let through = a.mat_mul(&res.star).map_err(|e| e.to_string())?;
        for i in 0..n {
            for j in 0..n {
                let star = res.star.get(i, j);
                let plus = res.plus.get(i, j);
                let want_star = if i == j { plus.max(Trop::ONE) } else { plus };
                if star != want_star {
                    return Err(format!("case {case}: star({i},{j}) != plus-or-identity"));
                }
                if through.get(i, j) != plus {
                    return Err(format!("case {case}: (A star)({i},{j}) != plus({i},{j})"));
                }
            }
        }
        let idem = res.star.mat_mul(&res.star).map_err(|e| e.to_string())?;
        if idem != res.star {
            return Err(format!("case {case}: star not idempotent"));
        }
    }
    Ok("25 random nonpositive matrices satisfy the closure identities exactly".to_string())
}

/// Normalized traces of random ring-plus-chords matrices couple, and the
/// factorization identity holds just past the coupling time.
fn random_coupling_formula(seed: u64, tol: Tolerance) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
    for case in 0..10usize {
        let n = rng.gen_range(3..=6usize);
        let mut triples = Vec::new();
        for v in 0..n {
            triples.push((v, (v + 1) % n, Trop::new(rng.gen_range(-5..=5i64) as f64)));
        }
        for _ in 0..2 {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            triples.push((u, v, Trop::new(rng.gen_range(-5..=5i64) as f64)));
        }
        let a = TropMatrix::from_triples(n, triples).expect("indices in range");
        let hint = spectral_summary(&a, tol).sigma.max(1);
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let mut n_max = 400usize;
        let report = loop {
            let trace = power_trace(&a, i, j, n_max, true).map_err(|e| e.to_string())?;
            let rep = detect_coupling(&trace, hint, tol);
            if rep.verdict == CouplingVerdict::Coupled || n_max >= 1600 {
                break rep;
            }
            n_max *= 4;
        };
        if report.verdict != CouplingVerdict::Coupled {
            return Err(format!("case {case}: trace did not couple within 1600 powers"));
        }
        let sigma = report.sigma.expect("coupled");
        let n0 = report.n0.expect("coupled");
        for n_probe in n0 + 1..=n0 + 3 {
            let chk = verify_power_formula(&a, i, j, n_probe, sigma, None, None, tol)
                .map_err(|e| e.to_string())?;
            if !chk.pass {
                return Err(format!(
                    "case {case}: factorization failed at power {n_probe}"
                ));
            }
        }
    }
    Ok("10 random irreducible matrices couple and factor past the coupling time".to_string())
}

pub fn run(seed: u64, eps: f64, format: Format) -> Result<Outcome, CliError> {
    let tol = Tolerance::new(eps);
    let results: Vec<(&str, CheckResult)> = vec![
        ("ladder-unit-closure", ladder_unit_closure(tol)),
        ("ladder-harmonic-closure", ladder_harmonic_closure(tol)),
        ("birth-death-radius-eigen", birth_death_radius_eigen(tol)),
        ("harmonic-power-sums", harmonic_power_sums(tol)),
        ("birth-martin-form", birth_martin_form(tol)),
        ("random-closure-identities", random_closure_identities(seed, tol)),
        ("random-coupling-formula", random_coupling_formula(seed, tol)),
    ];
    let mut rep = Report::new(format);
    rep.kv("verb", "selftest");
    rep.kv("eps", eps);
    rep.kv("window", "none");
    rep.kv("seed", seed);
    rep.blank();
    let mut failed = 0usize;
    for (name, result) in &results {
        match result {
            Ok(detail) => rep.row(&[
                ("status", "ok".to_string()),
                ("check", name.to_string()),
                ("detail", detail.clone()),
            ]),
            Err(why) => {
                failed += 1;
                rep.row(&[
                    ("status", "FAIL".to_string()),
                    ("check", name.to_string()),
                    ("detail", why.clone()),
                ]);
            }
        }
    }
    rep.blank();
    rep.kv("checks", results.len());
    rep.kv("failed", failed);
    rep.finish();
    if failed == 0 {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::CheckFailed)
    }
}
