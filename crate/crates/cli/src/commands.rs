use std::path::Path;

use freeconv::characterize::{freeness_dichotomy, preset_sample_mean_variance, QuadraticFormSpec};
use freeconv::convolution::{
    boxplus_moments, boxtimes_fractional_closure_check, boxtimes_moments, boxtimes_word_oracle, fit_krein_expansion,
    fractional_diagnostics, solve_subordination,
};
use freeconv::matrix_lab::{estimate_word_traces, EnsembleKind, MatrixEnsembleSpec};
use freeconv::measures::moments;
use freeconv::rational;
use freeconv::transforms::{boolean_from_moments, free_from_moments};
use freeconv::word_engine::mixed_moment;
use freeconv::{Complex64, Measure, MomentSequence, Rational, Word};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::output::{float, float_json, floats_json, rat, rats, Report};
use crate::{BoxtimesMethod, Command, CumulantKind, Preset};

pub fn execute(command: &Command) -> CliResult<Report> {
    match command {
        Command::Moments { measure, order } => cmd_moments(measure, *order),
        Command::Cumulants { measure, order, kind } => cmd_cumulants(measure, *order, *kind),
        Command::Boxplus { mu1, mu2, order } => cmd_boxplus(mu1, mu2, *order),
        Command::Boxtimes { mu1, mu2, order, method, fit_window } => {
            cmd_boxtimes(mu1, mu2, *order, *method, *fit_window)
        }
        Command::Subordinate { mu1, mu2, points, tol, max_iter } => cmd_subordinate(mu1, mu2, points, *tol, *max_iter),
        Command::Diagnose { measure, alpha, with, beta } => cmd_diagnose(measure, *alpha, with.as_deref(), *beta),
        Command::Characterize { marginal, spec, preset, n, max_len } => {
            cmd_characterize(marginal, spec.as_deref(), *preset, *n, *max_len)
        }
        Command::Matrixlab { words, dimension, trials, seed, ensemble } => {
            cmd_matrixlab(words, *dimension, *trials, *seed, ensemble.as_deref())
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

fn load_measure(path: &Path) -> CliResult<Measure> {
    Measure::from_json(&read(path)?).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn sequence_report(name: &'static str, values: &[Rational]) -> Report {
    let mut r = Report::new(vec!["k", name]);
    for (k, v) in values.iter().enumerate() {
        r.row(vec![(k + 1).to_string(), rat(v)]);
    }
    r.set(name, rats(values));
    r
}

fn cmd_moments(path: &Path, order: usize) -> CliResult<Report> {
    let m = moments(&load_measure(path)?, order)?;
    Ok(sequence_report("moments", m.as_slice()))
}

fn cmd_cumulants(path: &Path, order: usize, kind: CumulantKind) -> CliResult<Report> {
    let m = moments(&load_measure(path)?, order)?;
    Ok(match kind {
        CumulantKind::Boolean => sequence_report("boolean_cumulants", &boolean_from_moments(&m).0),
        CumulantKind::Free => sequence_report("free_cumulants", &free_from_moments(&m).0),
    })
}

fn cmd_boxplus(p1: &Path, p2: &Path, order: usize) -> CliResult<Report> {
    let m1 = moments(&load_measure(p1)?, order)?;
    let m2 = moments(&load_measure(p2)?, order)?;
    Ok(sequence_report("moments", boxplus_moments(&m1, &m2)?.as_slice()))
}

/// `m_k = Σ_{i≤k} r_i m_{k−i}` in floating point.
fn float_moments_from_boolean(r: &[f64]) -> Vec<f64> {
    let mut m = vec![1.0];
    for k in 1..=r.len() {
        let v = (1..=k).map(|i| r[i - 1] * m[k - i]).sum();
        m.push(v);
    }
    m.remove(0);
    m
}

fn cmd_boxtimes(p1: &Path, p2: &Path, order: usize, method: BoxtimesMethod, fit_window: f64) -> CliResult<Report> {
    let mu1 = load_measure(p1)?;
    let mu2 = load_measure(p2)?;
    let m1 = moments(&mu1, order)?;
    let m2 = moments(&mu2, order)?;
    let exact = |oracle: bool| -> CliResult<MomentSequence> {
        Ok(if oracle { boxtimes_word_oracle(&m1, &m2, order)? } else { boxtimes_moments(&m1, &m2, order)? })
    };
    let mut r;
    match method {
        BoxtimesMethod::Taylor | BoxtimesMethod::Oracle => {
            let oracle = method == BoxtimesMethod::Oracle;
            let m = exact(oracle)?;
            r = sequence_report("moments", m.as_slice());
            r.set("residuals", floats_json(&[0.0, 0.0]));
            r.set("iterations", json!(if oracle { 0 } else { order }));
        }
        BoxtimesMethod::Subordination => {
            let fit = fit_krein_expansion(&mu1, &mu2, order, fit_window)?;
            let m = float_moments_from_boolean(&fit.coefficients);
            r = Report::new(vec!["k", "moments"]);
            for (k, v) in m.iter().enumerate() {
                r.row(vec![(k + 1).to_string(), float(*v)]);
            }
            r.set("moments", floats_json(&m));
            r.set("residuals", floats_json(&fit.residuals));
            r.set("iterations", json!(fit.iterations));
        }
        BoxtimesMethod::All => {
            let taylor = exact(false)?;
            let oracle = exact(true)?;
            let fit = fit_krein_expansion(&mu1, &mu2, order, fit_window)?;
            let sub = float_moments_from_boolean(&fit.coefficients);
            r = Report::new(vec!["k", "taylor", "oracle", "subordination", "relative_discrepancy"]);
            let mut max_rel: f64 = 0.0;
            for (k, s) in (1..=order).zip(&sub) {
                let t = rational::to_f64(&taylor.moment(k));
                let rel = (s - t).abs() / t.abs().max(f64::MIN_POSITIVE);
                max_rel = max_rel.max(rel);
                r.row(vec![k.to_string(), rat(&taylor.moment(k)), rat(&oracle.moment(k)), float(*s), float(rel)]);
            }
            let identical = taylor == oracle;
            r.set("moments", rats(taylor.as_slice()));
            r.set("oracle", rats(oracle.as_slice()));
            r.set("subordination", floats_json(&sub));
            r.set("taylor_equals_oracle", json!(identical));
            r.set("max_relative_discrepancy", float_json(max_rel));
            r.set("residuals", floats_json(&fit.residuals));
            r.set("iterations", json!(fit.iterations));
            r.summary("taylor-equals-oracle", identical.to_string());
            r.summary("max-relative-discrepancy", float(max_rel));
        }
    }
    Ok(r)
}

fn parse_point(text: &str) -> CliResult<Complex64> {
    let bad = || CliError::parse(format!("invalid point {text:?}; expected re or re,im"));
    let (re, im) = match text.split_once(',') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => (text.trim().parse().map_err(|_| bad())?, 0.0),
    };
    Ok(Complex64::new(re, im))
}

fn cmd_subordinate(p1: &Path, p2: &Path, points: &[String], tol: f64, max_iter: usize) -> CliResult<Report> {
    let mu1 = load_measure(p1)?;
    let mu2 = load_measure(p2)?;
    let zs = points.iter().map(|p| parse_point(p)).collect::<CliResult<Vec<_>>>()?;
    let mut r = Report::new(vec![
        "z_re",
        "z_im",
        "z1_re",
        "z1_im",
        "z2_re",
        "z2_im",
        "k_re",
        "k_im",
        "residual_1",
        "residual_2",
        "iterations",
    ]);
    let mut solutions = Vec::new();
    for z in zs {
        let s = solve_subordination(&mu1, &mu2, z, tol, max_iter)?;
        r.row(vec![
            float(z.re),
            float(z.im),
            float(s.z1.re),
            float(s.z1.im),
            float(s.z2.re),
            float(s.z2.im),
            float(s.k_value.re),
            float(s.k_value.im),
            float(s.residuals[0]),
            float(s.residuals[1]),
            s.iterations.to_string(),
        ]);
        let c = |w: Complex64| floats_json(&[w.re, w.im]);
        solutions.push(json!({
            "z": c(z),
            "z1": c(s.z1),
            "z2": c(s.z2),
            "k": c(s.k_value),
            "residuals": floats_json(&s.residuals),
            "iterations": s.iterations,
        }));
    }
    r.set("solutions", Value::Array(solutions));
    Ok(r)
}

fn cmd_diagnose(path: &Path, alpha: f64, with: Option<&Path>, beta: Option<f64>) -> CliResult<Report> {
    let mu = load_measure(path)?;
    let d = fractional_diagnostics(&mu, alpha)?;
    let mut r = Report::new(vec!["quantity", "value"]);
    let fields = [
        ("alpha", d.alpha),
        ("m_alpha", d.m_alpha),
        ("c_mu", d.c_mu),
        ("raw_integral", d.raw_integral),
        ("integral_value", d.integral_value),
        ("quadrature_error", d.quadrature_error),
        ("lower_bound", d.lower_bound),
        ("upper_bound", d.upper_bound),
    ];
    for (k, v) in fields {
        r.row(vec![k.to_string(), float(v)]);
        r.set(k, float_json(v));
    }
    let sandwich = format!("{} ≤ {} ≤ {}", float(d.lower_bound), float(d.integral_value), float(d.upper_bound));
    r.set("sandwich", json!(sandwich));
    r.set("sandwich_holds", json!(d.sandwich_holds()));
    r.set("verdict", json!(d.verdict.to_string()));
    r.summary("sandwich", sandwich);
    r.summary("sandwich-holds", d.sandwich_holds().to_string());
    r.summary("verdict", d.verdict.to_string());
    if let (Some(p2), Some(beta)) = (with, beta) {
        let c = boxtimes_fractional_closure_check(&mu, &load_measure(p2)?, alpha, beta)?;
        let fields = [
            ("product_gamma", c.gamma),
            ("product_x0", c.x0),
            ("product_epsilon0", c.epsilon0),
            ("product_integral_to_x0", c.integral_to_x0),
            ("product_tail_estimate", c.tail_estimate),
            ("product_integral_value", c.integral_value),
        ];
        for (k, v) in fields {
            r.row(vec![k.to_string(), float(v)]);
        }
        r.set(
            "product",
            json!({
                "alpha": float_json(c.alpha),
                "beta": float_json(c.beta),
                "gamma": float_json(c.gamma),
                "x0": float_json(c.x0),
                "epsilon0": float_json(c.epsilon0),
                "main_integral": float_json(c.main_integral),
                "increments": c.increments.iter().map(|&(e, v)| floats_json(&[e, v])).collect::<Vec<_>>(),
                "tail_estimate": float_json(c.tail_estimate),
                "integral_to_x0": float_json(c.integral_to_x0),
                "integral_value": float_json(c.integral_value),
                "verdict": c.verdict.to_string(),
            }),
        );
        r.summary("product-verdict", c.verdict.to_string());
    }
    Ok(r)
}

fn cmd_characterize(
    marginal: &Path,
    spec_path: Option<&Path>,
    preset: Option<Preset>,
    n: Option<usize>,
    max_len: usize,
) -> CliResult<Report> {
    let spec = match (spec_path, preset) {
        (Some(p), _) => QuadraticFormSpec::from_json(&read(p)?)?,
        (None, Some(Preset::MeanVariance)) => {
            preset_sample_mean_variance(n.ok_or_else(|| CliError::parse("--preset needs --n"))?)?
        }
        (None, None) => return Err(CliError::parse("give --spec or --preset")),
    };
    let m = moments(&load_measure(marginal)?, max_len.max(1))?;
    let report = freeness_dichotomy(&spec, &m, max_len)?;
    let mut r = Report::new(vec!["pattern", "actual", "predicted", "deviation"]);
    let mut rows = Vec::new();
    for d in &report.deviations {
        let label = d.pattern.to_string();
        r.row(vec![label.clone(), rat(&d.actual), rat(&d.predicted), rat(&d.deviation)]);
        rows.push(json!({
            "pattern": label,
            "actual": rat(&d.actual),
            "predicted": rat(&d.predicted),
            "deviation": rat(&d.deviation),
        }));
    }
    r.set("max_word_length", json!(report.max_word_length));
    r.set("deviations", Value::Array(rows));
    r.set("max_abs_deviation", json!(rat(&report.max_abs_deviation)));
    r.set("verdict", json!(report.verdict.to_string()));
    if let Some(first) = report.first_nonzero() {
        r.set("first_nonzero", json!({ "pattern": first.pattern.to_string(), "deviation": rat(&first.deviation) }));
        r.summary("first-nonzero", format!("{} = {}", first.pattern, rat(&first.deviation)));
    }
    r.summary("verdict", report.verdict.to_string());
    Ok(r)
}

/// Ensemble kind and exact marginal moments for one variable.
fn ensemble_entry(token: &str, order: usize) -> CliResult<(EnsembleKind, MomentSequence)> {
    let catalan = || MomentSequence::new((1..=order).map(|k| Rational::from_integer(rational::catalan(k))).collect());
    Ok(match token.trim() {
        "goe" => (EnsembleKind::Goe, moments(&Measure::semicircle(0.0, 2.0)?, order)?),
        "wishart" => (EnsembleKind::Wishart, catalan()?),
        "bernoulli" => {
            let b = Measure::bernoulli_half();
            let m = moments(&b, order)?;
            match b {
                Measure::Atomic(a) => (EnsembleKind::DiagonalFromMeasure(a), m),
                _ => unreachable!("Bernoulli law is atomic"),
            }
        }
        path => {
            let mu = load_measure(Path::new(path))?;
            let m = moments(&mu, order)?;
            match mu {
                Measure::Atomic(a) => (EnsembleKind::DiagonalFromMeasure(a), m),
                _ => return Err(CliError::domain(format!("{path}: rotated diagonal needs an atomic measure"))),
            }
        }
    })
}

fn cmd_matrixlab(
    texts: &[String],
    dimension: usize,
    trials: usize,
    seed: u64,
    ensemble: Option<&str>,
) -> CliResult<Report> {
    let words = texts.iter().map(|t| t.parse::<Word>()).collect::<freeconv::Result<Vec<_>>>()?;
    let vars = words.iter().map(Word::variable_count).max().unwrap_or(0);
    let order = words.iter().map(Word::len).max().unwrap_or(1);
    let tokens: Vec<String> = match ensemble {
        Some(list) => list.split(',').map(str::to_string).collect(),
        None => vec!["bernoulli".to_string(); vars],
    };
    if tokens.len() < vars {
        return Err(CliError::domain(format!("words use {vars} variables but the ensemble lists {}", tokens.len())));
    }
    let (kinds, marginals): (Vec<_>, Vec<_>) =
        tokens.iter().map(|t| ensemble_entry(t, order)).collect::<CliResult<Vec<_>>>()?.into_iter().unzip();
    let spec = MatrixEnsembleSpec::new(dimension, kinds, seed)?;
    let estimates = estimate_word_traces(&spec, &words, trials)?;
    let mut r = Report::new(vec!["word", "N", "trials", "mean", "se", "exact", "z-score"]);
    let mut rows = Vec::new();
    for (w, (text, est)) in words.iter().zip(texts.iter().zip(&estimates)) {
        let exact = mixed_moment(&marginals, w)?;
        let exact_f = rational::to_f64(&exact);
        let z = est.z_score(exact_f);
        r.row(vec![
            text.clone(),
            dimension.to_string(),
            est.trials.to_string(),
            float(est.mean),
            float(est.standard_error),
            rat(&exact),
            float(z),
        ]);
        rows.push(json!({
            "word": text,
            "N": dimension,
            "trials": est.trials,
            "mean": float_json(est.mean),
            "se": float_json(est.standard_error),
            "exact": rat(&exact),
            "z_score": float_json(z),
        }));
    }
    r.set("ensemble", json!(spec.kinds.iter().map(|k| k.name()).collect::<Vec<_>>()));
    r.set("estimates", Value::Array(rows));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_to_moments_in_floats() {
        // Bernoulli(1/2): r_k = 2^{-k}, all moments 1/2.
        let m = float_moments_from_boolean(&[0.5, 0.25, 0.125]);
        assert_eq!(m, vec![0.5, 0.5, 0.5]);
    }

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("-0.5").unwrap(), Complex64::new(-0.5, 0.0));
        assert_eq!(parse_point("0.1, 2").unwrap(), Complex64::new(0.1, 2.0));
        assert!(parse_point("x").is_err());
    }
}
