//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use freeconv::characterize::{freeness_dichotomy, preset_sample_mean_variance, DichotomyVerdict};
use freeconv::convolution::{
    boxtimes_moments, boxtimes_word_oracle, fit_krein_expansion, fractional_diagnostics, solve_subordination,
    DEFAULT_MAX_ITER,
};
use freeconv::matrix_lab::{
    estimate_word_traces, verify_inequalities, EnsembleKind, InequalityConfig, MatrixEnsembleSpec,
};
use freeconv::measures::{moments, Measure};
use freeconv::rational::{self, int, pow, ratio};
use freeconv::transforms::{
    boolean_from_moments, free_from_moments, krein_expansion_check, moments_from_boolean, moments_from_free,
};
use freeconv::word_engine::{alternating_centered_check, mixed_moment, ExponentScheme};
use freeconv::{Complex64, MomentSequence, Rational, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.random_range(-50..=50), rng.random_range(1..=12))
}

fn random_moments(rng: &mut ChaCha8Rng, order: usize) -> MomentSequence {
    MomentSequence::new((0..order).map(|_| random_rational(rng)).collect()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

type Atom = ((i64, i64), (i64, i64));

fn atomic(atoms: &[Atom]) -> Measure {
    Measure::atomic(atoms.iter().map(|&((p, q), (a, b))| (ratio(p, q), ratio(a, b))).collect()).unwrap()
}

/// Atomic measures on `[0, ∞)` with at most three atoms and positive mean.
fn atomic_suite() -> Vec<Measure> {
    vec![
        Measure::dirac(int(1)),
        Measure::bernoulli_half(),
        atomic(&[((1, 3), (1, 4)), ((1, 1), (1, 2)), ((5, 2), (1, 4))]),
        atomic(&[((0, 1), (1, 3)), ((2, 1), (2, 3))]),
        atomic(&[((1, 10), (1, 2)), ((4, 1), (1, 2))]),
        atomic(&[((1, 2), (1, 3)), ((1, 1), (1, 3)), ((7, 1), (1, 3))]),
        atomic(&[((3, 2), (1, 1))]),
        atomic(&[((0, 1), (1, 5)), ((1, 4), (2, 5)), ((3, 1), (2, 5))]),
    ]
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let m = random_moments(&mut rng, 4);
        let r = boolean_from_moments(&m);
        let (m1, m2, m3, m4) = (m.moment(1), m.moment(2), m.moment(3), m.moment(4));
        let expected = [
            m1.clone(),
            &m2 - pow(&m1, 2),
            &m3 - int(2) * &m1 * &m2 + pow(&m1, 3),
            &m4 - pow(&m2, 2) - int(2) * &m1 * &m3 + int(3) * pow(&m1, 2) * &m2 - pow(&m1, 4),
        ];
        ensure(r.0 == expected, || format!("closed forms differ on {:?}", m.as_slice()))?;
    }
    for _ in 0..50 {
        let m = random_moments(&mut rng, 12);
        ensure(moments_from_boolean(&boolean_from_moments(&m)) == m, || "boolean round trip".into())?;
        ensure(moments_from_free(&free_from_moments(&m)) == m, || "free round trip".into())?;
    }
    Ok("50 order-4 vectors match the closed forms; 50 order-12 round trips exact".into())
}

fn criterion_2() -> Outcome {
    let suite = atomic_suite();
    let mut pairs = 0;
    for i in 0..suite.len() {
        for j in i..suite.len() {
            let a = moments(&suite[i], 7).unwrap();
            let b = moments(&suite[j], 7).unwrap();
            let series = boxtimes_moments(&a, &b, 7).map_err(|e| e.to_string())?;
            let oracle = boxtimes_word_oracle(&a, &b, 7).map_err(|e| e.to_string())?;
            ensure(series == oracle, || format!("pair ({i}, {j}) differs"))?;
            pairs += 1;
        }
    }
    ensure(pairs >= 25, || format!("only {pairs} pairs"))?;
    Ok(format!("{pairs} pairs agree exactly through order 7"))
}

fn criterion_3() -> Outcome {
    let (c, d) = (1.5, 0.4);
    let dc = Measure::dirac(ratio(3, 2));
    let dd = Measure::dirac(ratio(2, 5));
    let mut points: Vec<Complex64> =
        (1..=25).map(|k| Complex64::new(-(10f64).powf(-(k as f64) / 5.0 + 2.0), 0.0)).collect();
    points.extend((0..25).map(|k| Complex64::from_polar(0.05 + 0.4 * k as f64, 0.1 + 0.12 * k as f64)));
    let mut worst: f64 = 0.0;
    for z in &points {
        let s = solve_subordination(&dc, &dd, *z, 1e-13, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
        worst = worst.max((s.z1 - z * d).norm()).max((s.z2 - z * c).norm());
    }
    ensure(worst <= 1e-10, || format!("point-mass subordinators off by {worst:e}"))?;

    let b = Measure::bernoulli_half();
    let mut worst_res: f64 = 0.0;
    for k in 10..=40 {
        let z = Complex64::new(-(10f64).powf(-(k as f64) / 10.0), 0.0);
        let s = solve_subordination(&b, &b, z, 1e-12, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
        worst_res = worst_res.max(s.residuals[0]).max(s.residuals[1]);
    }
    ensure(worst_res < 1e-10, || format!("Bernoulli residual {worst_res:e}"))?;
    let slope = fit_krein_expansion(&b, &b, 3, 0.05).map_err(|e| e.to_string())?.coefficients[0];
    ensure((slope - 0.25).abs() <= 1e-6, || format!("fitted slope {slope}"))?;
    Ok(format!(
        "point masses within {worst:.1e} at {} points; Bernoulli residuals <= {worst_res:.1e} at 31 points; slope {slope:.12}",
        points.len()
    ))
}

fn criterion_4() -> Outcome {
    let suite: Vec<Measure> = atomic_suite().into_iter().take(6).collect();
    let mut checked = 0;
    let mut min_gap = f64::INFINITY;
    for (i, mu) in suite.iter().enumerate() {
        for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let r = fractional_diagnostics(mu, alpha).map_err(|e| e.to_string())?;
            ensure(r.quadrature_error <= 1e-8, || format!("quadrature error {:e}", r.quadrature_error))?;
            ensure(r.sandwich_holds(), || {
                format!(
                    "measure {i}, alpha {alpha}: {} <= {} <= {} fails",
                    r.lower_bound, r.integral_value, r.upper_bound
                )
            })?;
            min_gap = min_gap.min(r.integral_value - r.lower_bound).min(r.upper_bound - r.integral_value);
            checked += 1;
        }
    }
    Ok(format!("{checked} (measure, alpha) cases, zero violations, tightest margin {min_gap:.3e}"))
}

fn criterion_5() -> Outcome {
    let marginals = vec![
        moments(&Measure::bernoulli_half(), 12).unwrap(),
        moments(&Measure::semicircle(0.0, 2.0).unwrap(), 12).unwrap(),
        moments(&atomic_suite()[2], 12).unwrap(),
    ];
    let mut total = 0;
    for scheme in [ExponentScheme::Exhaustive(vec![1, 2]), ExponentScheme::Cyclic(vec![1, 2, 3])] {
        let report = alternating_centered_check(&marginals, 8, &scheme).map_err(|e| e.to_string())?;
        if let Some(w) = report.nonzero().next() {
            return Err(format!("{} = {}", w.label(), rational::format(&w.value)));
        }
        total += report.words.len();
    }
    Ok(format!("{total} alternating centered words of length <= 8 are exactly 0"))
}

fn criterion_6() -> Outcome {
    let semicircle = MomentSequence::new([0, 1, 0, 2, 0, 5, 0, 14].iter().map(|&x| int(x)).collect()).unwrap();
    let rademacher = MomentSequence::new((1..=6).map(|k| int(i64::from(k % 2 == 0))).collect()).unwrap();
    let mut notes = Vec::new();
    for (n, frozen) in [(2, ratio(-1, 8)), (3, ratio(-2, 27))] {
        let spec = preset_sample_mean_variance(n).unwrap();
        let free = freeness_dichotomy(&spec, &semicircle, 8).map_err(|e| e.to_string())?;
        ensure(free.verdict == DichotomyVerdict::ConsistentWithFree, || format!("semicircle n={n}: {}", free.verdict))?;
        let runs: Vec<_> = (0..2)
            .map(|_| freeness_dichotomy(&spec, &rademacher, 6).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        let first = runs[0].first_nonzero().ok_or_else(|| format!("Rademacher n={n}: no deviation"))?;
        ensure(first.pattern.degree() <= 6, || "deviation beyond degree 6".into())?;
        ensure(runs[0] == runs[1], || "deviations differ between runs".into())?;
        ensure(first.deviation == frozen, || format!("deviation {} changed", rational::format(&first.deviation)))?;
        notes.push(format!(
            "n={n}: {} semicircle patterns zero, Rademacher {} = {}",
            free.deviations.len(),
            first.pattern,
            rational::format(&first.deviation)
        ));
    }
    Ok(notes.join("; "))
}

fn criterion_7() -> Outcome {
    const N: usize = 256;
    const TRIALS: usize = 200;
    let bern = match Measure::bernoulli_half() {
        Measure::Atomic(a) => a,
        _ => unreachable!(),
    };
    let kinds = vec![
        EnsembleKind::Goe,
        EnsembleKind::Goe,
        EnsembleKind::DiagonalFromMeasure(bern.clone()),
        EnsembleKind::DiagonalFromMeasure(bern),
        EnsembleKind::Wishart,
    ];
    let marginals = vec![
        moments(&Measure::semicircle(0.0, 2.0).unwrap(), 6).unwrap(),
        moments(&Measure::semicircle(0.0, 2.0).unwrap(), 6).unwrap(),
        moments(&Measure::bernoulli_half(), 6).unwrap(),
        moments(&Measure::bernoulli_half(), 6).unwrap(),
        MomentSequence::new([1, 2, 5, 14, 42, 132].iter().map(|&x| int(x)).collect()).unwrap(),
    ];
    let texts = [
        "T1 T2 T1 T2",
        "T3 T4 T3 T4",
        "T1^4",
        "T1 T2",
        "T1^2 T2^2",
        "T1^2",
        "T3",
        "T5^2",
        "T5^3",
        "T1^2 T3",
        "T1 T3 T1 T3",
        "T3 T5",
        "T3 T5 T3 T5",
        "T1^2 T5^2",
        "T1 T5 T1 T5",
        "T2^2 T3 T4",
        "T1^3 T3 T1",
        "T3^2 T4^2",
        "T1 T2 T3 T1 T2 T3",
        "T5 T3 T5 T4",
    ];
    let words: Vec<Word> = texts.iter().map(|s| s.parse().unwrap()).collect();
    let spec = MatrixEnsembleSpec::new(N, kinds, 20_240_601).map_err(|e| e.to_string())?;
    let estimates = estimate_word_traces(&spec, &words, TRIALS).map_err(|e| e.to_string())?;
    let bias = 5.0 / N as f64;
    let mut worst_z: f64 = 0.0;
    for (w, est) in words.iter().zip(&estimates) {
        let exact = rational::to_f64(&mixed_moment(&marginals, w).map_err(|e| e.to_string())?);
        ensure(est.agrees_with(exact, bias), || format!("{w}: {} +- {} vs {exact}", est.mean, est.standard_error))?;
        worst_z = worst_z.max(est.z_score(exact).abs());
    }
    let exact_3_16 = mixed_moment(&marginals, &words[1]).unwrap();
    ensure(exact_3_16 == ratio(3, 16), || "T3 T4 T3 T4 exact value".into())?;
    ensure(mixed_moment(&marginals, &words[2]).unwrap() == int(2), || "T1^4 exact value".into())?;

    let report = verify_inequalities(InequalityConfig { dimension: 8, instances: 10_000, seed: 7 })
        .map_err(|e| e.to_string())?;
    ensure(report.all_hold(), || format!("{} inequality violations", report.violations()))?;
    Ok(format!(
        "20 words within 3se+5/N at N={N}, {TRIALS} trials (max |z| {worst_z:.2}); {} inequality instances, 0 violations",
        report.instances()
    ))
}

fn criterion_8() -> Outcome {
    let suite: Vec<Measure> = atomic_suite().into_iter().skip(1).take(6).collect();
    let mut tables = 0;
    for (i, mu) in suite.iter().enumerate() {
        let m = moments(mu, 4).unwrap();
        for p in [2, 3, 4] {
            let report = krein_expansion_check(mu, &m, p).map_err(|e| format!("measure {i}, p={p}: {e}"))?;
            ensure(report.decays(), || format!("measure {i}, p={p}: no decay"))?;
            tables += 1;
        }
    }
    Ok(format!("{tables} ratio tables decay monotonically after burn-in"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("boolean cumulant formulas and round trips", Duration::from_secs(1), criterion_1),
        ("multiplicative convolution: series vs word oracle", Duration::from_secs(60), criterion_2),
        ("subordination solver", Duration::from_secs(600), criterion_3),
        ("fractional-moment sandwich", Duration::from_secs(600), criterion_4),
        ("alternating centered words vanish", Duration::from_secs(120), criterion_5),
        ("linear/quadratic form dichotomy", Duration::from_secs(600), criterion_6),
        ("matrix lab agreement and Lp inequalities", Duration::from_secs(300), criterion_7),
        ("Krein expansion ratio decay", Duration::from_secs(600), criterion_8),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(detail) if elapsed <= *budget => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; over runtime budget {budget:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {}: {status} [{name}] {detail} ({:.2} s)", i + 1, elapsed.as_secs_f64());
    }
    if failures == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
