//! Moment-level test of whether a linear form `L = Σ b_j T_j` and a quadratic form
//! `Q = Σ a_jk T_j T_k` in free identically distributed variables are free.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::MomentSequence;
use crate::rational::{self, pow, Rational};
use crate::word_engine::{Factor, FreeFamily, Word};

/// Word length explored when the caller does not choose one; an empirical default.
pub const DEFAULT_MAX_WORD_LENGTH: usize = 8;

/// Coefficients of `L = Σ b_j T_j` and `Q = Σ a_jk T_j T_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticFormSpec {
    pub n: usize,
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
    b: Vec<String>,
}

impl QuadraticFormSpec {
    /// Checks shapes only; the algebraic conditions are reported by [`validate_spec`].
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Result<Self> {
        let n = b.len();
        if n < 2 {
            return Err(Error::InvalidSpec(format!("need n >= 2 variables, got {n}")));
        }
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSpec(format!("A must be {n}x{n} to match b")));
        }
        Ok(Self { n, a, b })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: SpecRepr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let a = repr
            .a
            .iter()
            .map(|row| row.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let b = repr.b.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>()?;
        let spec = Self::new(a, b)?;
        if spec.n != repr.n {
            return Err(Error::InvalidSpec(format!("n = {} but b has {} entries", repr.n, spec.n)));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let repr = SpecRepr {
            n: self.n,
            a: self.a.iter().map(|row| row.iter().map(rational::format).collect()).collect(),
            b: self.b.iter().map(rational::format).collect(),
        };
        serde_json::to_string(&repr).expect("spec serializes")
    }

    /// `λ b` and `λ' A`.
    pub fn scaled(&self, lambda_b: &Rational, lambda_a: &Rational) -> Self {
        Self {
            n: self.n,
            a: self.a.iter().map(|row| row.iter().map(|x| x * lambda_a).collect()).collect(),
            b: self.b.iter().map(|x| x * lambda_b).collect(),
        }
    }
}

/// Sample mean `b_j = 1/n` and sample variance `a_jk = δ_jk/n − 1/n²`.
pub fn preset_sample_mean_variance(n: usize) -> Result<QuadraticFormSpec> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("need n >= 2 variables, got {n}")));
    }
    let nn = n as i64;
    let a = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| if j == k { rational::ratio(nn - 1, nn * nn) } else { rational::ratio(-1, nn * nn) })
                .collect()
        })
        .collect();
    QuadraticFormSpec::new(a, vec![rational::ratio(1, nn); n])
}

/// Exact pass/fail of each structural condition on a spec.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub symmetric: bool,
    /// `A b = 0`.
    pub annihilates_b: bool,
    /// `Σ_j b_j^m a_jj ≠ 0` for every `m ≥ 1`.
    pub power_sums_nonzero: bool,
    /// Smallest `m` with `Σ_j b_j^m a_jj = 0`, if any.
    pub vanishing_power: Option<usize>,
    /// `b_j a_jj ≠ 0` for some `j`.
    pub diagonal_support: bool,
}

impl ValidityReport {
    pub fn passes(&self) -> bool {
        self.symmetric && self.annihilates_b && self.power_sums_nonzero && self.diagonal_support
    }

    fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.symmetric {
            out.push("A is not symmetric");
        }
        if !self.annihilates_b {
            out.push("A b != 0");
        }
        if !self.power_sums_nonzero {
            out.push("sum_j b_j^m a_jj vanishes for some m");
        }
        if !self.diagonal_support {
            out.push("b_j a_jj = 0 for every j");
        }
        out
    }
}

/// Smallest `m ≥ 1` with `Σ_v c_v v^m = 0`, where `c_v` sums `a_jj` over `b_j = v`.
///
/// Terms with equal `|v|` merge into `(c_v ± c_{−v})|v|^m` on each parity class of `m`. On a
/// class, once the largest surviving base dominates the rest no further zero can occur, so
/// checking `m` up to that point decides the condition for all `m`.
fn first_vanishing_power(spec: &QuadraticFormSpec) -> Option<usize> {
    let mut grouped: Vec<(Rational, Rational)> = Vec::new();
    for (j, bj) in spec.b.iter().enumerate() {
        let ajj = &spec.a[j][j];
        if bj.is_zero() || ajj.is_zero() {
            continue;
        }
        match grouped.iter_mut().find(|(v, _)| v == bj) {
            Some((_, c)) => *c += ajj,
            None => grouped.push((bj.clone(), ajj.clone())),
        }
    }
    let mut horizon = spec.n;
    for parity in 0..2 {
        let mut by_abs: Vec<(Rational, Rational)> = Vec::new();
        for (v, c) in &grouped {
            let sign = if v.is_negative() && parity == 1 { -Rational::one() } else { Rational::one() };
            let w = v.abs();
            match by_abs.iter_mut().find(|(u, _)| *u == w) {
                Some((_, d)) => *d += c * &sign,
                None => by_abs.push((w, c * &sign)),
            }
        }
        by_abs.retain(|(_, d)| !d.is_zero());
        if by_abs.len() < 2 {
            continue;
        }
        by_abs.sort_by(|x, y| y.0.cmp(&x.0));
        let top = by_abs[0].1.abs().to_f64().unwrap_or(f64::MAX);
        let rest: f64 = by_abs[1..].iter().map(|(_, d)| d.abs().to_f64().unwrap_or(f64::MAX)).sum();
        let q = (&by_abs[1].0 / &by_abs[0].0).to_f64().unwrap_or(1.0);
        if rest > top {
            let bound = ((rest / top).ln() / (1.0 / q).ln()).ceil() as usize + 2;
            horizon = horizon.max(bound);
        }
    }
    (1..=horizon).find(|&m| {
        let s: Rational = grouped.iter().map(|(v, c)| c * pow(v, m)).sum();
        s.is_zero()
    })
}

/// Reports symmetry, `A b = 0`, non-vanishing of `Σ_j b_j^m a_jj` for all `m`, and
/// `b_j a_jj ≠ 0` for some `j`.
pub fn validate_spec(spec: &QuadraticFormSpec) -> ValidityReport {
    let n = spec.n;
    let symmetric = (0..n).all(|j| (0..n).all(|k| spec.a[j][k] == spec.a[k][j]));
    let annihilates_b =
        spec.a.iter().all(|row| row.iter().zip(&spec.b).map(|(x, y)| x * y).sum::<Rational>().is_zero());
    let vanishing_power = first_vanishing_power(spec);
    let diagonal_support = (0..n).any(|j| !(&spec.b[j] * &spec.a[j][j]).is_zero());
    ValidityReport {
        symmetric,
        annihilates_b,
        power_sums_nonzero: vanishing_power.is_none() && diagonal_support,
        vanishing_power,
        diagonal_support,
    }
}

/// One of the two forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Form {
    L,
    Q,
}

impl Form {
    fn degree(self) -> usize {
        match self {
            Form::L => 1,
            Form::Q => 2,
        }
    }

    fn index(self) -> usize {
        match self {
            Form::L => 0,
            Form::Q => 1,
        }
    }
}

/// A product `X_1^{e_1} X_2^{e_2} …` with each `X_i ∈ {L, Q}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern(pub Vec<(Form, usize)>);

impl Pattern {
    /// Total degree in the `T_j`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|(f, e)| f.degree() * e).sum()
    }
}

impl fmt::Display for Pattern {
    /// Bracketed factors denote centered powers: `[L^2][Q]` is `(L² − τ(L²))(Q − τ(Q))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (form, e) in &self.0 {
            let name = if *form == Form::L { "L" } else { "Q" };
            if *e == 1 {
                write!(f, "[{name}]")?;
            } else {
                write!(f, "[{name}^{e}]")?;
            }
        }
        Ok(())
    }
}

/// Noncommutative polynomial in `T_1..T_n`: word → coefficient; the empty word is `1`.
type Poly = HashMap<Vec<usize>, Rational>;

fn poly_mul(x: &Poly, y: &Poly) -> Poly {
    let mut out = Poly::with_capacity(x.len() * y.len());
    for (wx, cx) in x {
        for (wy, cy) in y {
            let mut w = Vec::with_capacity(wx.len() + wy.len());
            w.extend_from_slice(wx);
            w.extend_from_slice(wy);
            *out.entry(w).or_insert_with(Rational::zero) += cx * cy;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_pow(x: &Poly, e: usize) -> Poly {
    let mut acc = Poly::from([(Vec::new(), Rational::one())]);
    for _ in 0..e {
        acc = poly_mul(&acc, x);
    }
    acc
}

/// Evaluates `τ` on words in i.i.d. free variables, caching by the word's pattern of
/// repetitions up to cyclic rotation.
struct WordTrace {
    family: FreeFamily,
    cache: Mutex<HashMap<Vec<usize>, Rational>>,
}

impl WordTrace {
    fn new(marginal: &MomentSequence) -> Self {
        Self { family: FreeFamily::new(vec![marginal.clone()]), cache: Mutex::new(HashMap::new()) }
    }

    fn canonical(w: &[usize]) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        for r in 0..w.len() {
            let mut labels: Vec<usize> = Vec::new();
            let relabeled: Vec<usize> = w[r..]
                .iter()
                .chain(&w[..r])
                .map(|x| match labels.iter().position(|y| y == x) {
                    Some(p) => p,
                    None => {
                        labels.push(*x);
                        labels.len() - 1
                    }
                })
                .collect();
            if best.as_ref().is_none_or(|b| relabeled < *b) {
                best = Some(relabeled);
            }
        }
        best.unwrap_or_default()
    }

    fn trace(&self, w: &[usize]) -> Result<Rational> {
        if w.is_empty() {
            return Ok(Rational::one());
        }
        let key = Self::canonical(w);
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let vars = key.iter().max().map_or(0, |m| m + 1);
        let family = FreeFamily::new(vec![self.family.marginal(0).clone(); vars]);
        let value = family.mixed_moment(&Word::new(key.clone())?)?;
        self.cache.lock().expect("cache lock").insert(key, value.clone());
        Ok(value)
    }

    fn apply(&self, p: &Poly) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (w, c) in p {
            acc += c * self.trace(w)?;
        }
        Ok(acc)
    }
}

fn form_polys(spec: &QuadraticFormSpec) -> [Poly; 2] {
    let mut l = Poly::new();
    let mut q = Poly::new();
    for j in 0..spec.n {
        if !spec.b[j].is_zero() {
            l.insert(vec![j], spec.b[j].clone());
        }
        for k in 0..spec.n {
            if !spec.a[j][k].is_zero() {
                q.insert(vec![j, k], spec.a[j][k].clone());
            }
        }
    }
    [l, q]
}

fn check_order(marginal: &MomentSequence, degree: usize) -> Result<()> {
    marginal.require_order(degree)
}

/// `τ(X_1^{e_1} X_2^{e_2} …)` with `X_i ∈ {L, Q}`, expanded into words in the `T_j`.
pub fn joint_moment(spec: &QuadraticFormSpec, marginal: &MomentSequence, pattern: &Pattern) -> Result<Rational> {
    if pattern.0.is_empty() {
        return Err(Error::InvalidSpec("pattern is empty".into()));
    }
    check_order(marginal, pattern.degree())?;
    let forms = form_polys(spec);
    let traces = WordTrace::new(marginal);
    let mut acc = Poly::from([(Vec::new(), Rational::one())]);
    for (form, e) in &pattern.0 {
        acc = poly_mul(&acc, &poly_pow(&forms[form.index()], *e));
    }
    traces.apply(&acc)
}

/// Alternating patterns with at least two factors and total degree `≤ max_degree`, ordered by
/// degree.
pub fn alternating_patterns(max_degree: usize) -> Vec<Pattern> {
    fn extend(cur: &mut Vec<(Form, usize)>, budget: usize, out: &mut Vec<Pattern>) {
        if cur.len() >= 2 {
            out.push(Pattern(cur.clone()));
        }
        let next = match cur.last() {
            Some((Form::L, _)) => Form::Q,
            Some((Form::Q, _)) => Form::L,
            None => unreachable!(),
        };
        let mut e = 1;
        while next.degree() * e <= budget {
            cur.push((next, e));
            extend(cur, budget - next.degree() * e, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    for start in [Form::L, Form::Q] {
        let mut e = 1;
        while start.degree() * e <= max_degree {
            let mut cur = vec![(start, e)];
            extend(&mut cur, max_degree - start.degree() * e, &mut out);
            e += 1;
        }
    }
    out.sort_by_key(|p| p.degree());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DichotomyVerdict {
    ConsistentWithFree,
    /// Non-freeness detected at this total degree.
    NotFreeAtOrder(usize),
}

impl fmt::Display for DichotomyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DichotomyVerdict::ConsistentWithFree => f.write_str("consistent-with-free"),
            DichotomyVerdict::NotFreeAtOrder(k) => write!(f, "not-free-at-order-{k}"),
        }
    }
}

/// Difference between the joint moment of a centered pattern and its value if `L`, `Q` were free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub pattern: Pattern,
    pub actual: Rational,
    pub predicted: Rational,
    pub deviation: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DichotomyReport {
    pub max_word_length: usize,
    pub deviations: Vec<Deviation>,
    pub max_abs_deviation: Rational,
    pub verdict: DichotomyVerdict,
}

impl DichotomyReport {
    /// The first nonzero deviation in order of increasing degree.
    pub fn first_nonzero(&self) -> Option<&Deviation> {
        self.deviations.iter().find(|d| !d.deviation.is_zero())
    }
}

/// Compares every alternating centered `(L, Q)` pattern up to total degree `max_word_length`
/// against the value it would take if `L` and `Q` were free with their own distributions.
pub fn freeness_dichotomy(
    spec: &QuadraticFormSpec,
    marginal: &MomentSequence,
    max_word_length: usize,
) -> Result<DichotomyReport> {
    let validity = validate_spec(spec);
    if !validity.passes() {
        return Err(Error::InvalidSpec(validity.failures().join("; ")));
    }
    if max_word_length < 2 {
        return Err(Error::InvalidSpec("max word length must be at least 2".into()));
    }
    check_order(marginal, max_word_length)?;
    if !marginal.moment(1).is_zero() {
        return Err(Error::Domain("marginal must be centered (m_1 = 0)".into()));
    }
    let forms = form_polys(spec);
    let traces = WordTrace::new(marginal);

    // Powers X^e and their traces for each form.
    let max_power = [max_word_length, max_word_length / 2];
    let mut powers: [Vec<Poly>; 2] = [Vec::new(), Vec::new()];
    let mut form_moments: [Vec<Rational>; 2] = [Vec::new(), Vec::new()];
    for f in 0..2 {
        let mut acc = Poly::from([(Vec::new(), Rational::one())]);
        powers[f].push(acc.clone());
        for _ in 1..=max_power[f] {
            acc = poly_mul(&acc, &forms[f]);
            form_moments[f].push(traces.apply(&acc)?);
            powers[f].push(acc.clone());
        }
    }
    let free_pair = FreeFamily::new(vec![
        MomentSequence::new(form_moments[0].clone())?,
        MomentSequence::new(form_moments[1].clone())?,
    ]);

    let patterns = alternating_patterns(max_word_length);
    let deviations = patterns
        .into_par_iter()
        .map(|pattern| {
            let mut acc = Poly::from([(Vec::new(), Rational::one())]);
            let mut factors = Vec::with_capacity(pattern.0.len());
            for (form, e) in &pattern.0 {
                let f = form.index();
                let mean = form_moments[f][e - 1].clone();
                let mut centered = powers[f][*e].clone();
                *centered.entry(Vec::new()).or_insert_with(Rational::zero) -= &mean;
                acc = poly_mul(&acc, &centered);
                factors.push(Factor { var: f, power: *e, shift: -mean });
            }
            let actual = traces.apply(&acc)?;
            let predicted = free_pair.evaluate(&factors)?;
            let deviation = &actual - &predicted;
            Ok(Deviation { pattern, actual, predicted, deviation })
        })
        .collect::<Result<Vec<_>>>()?;

    let max_abs_deviation = deviations.iter().map(|d| d.deviation.abs()).max().unwrap_or_else(Rational::zero);
    let verdict = match deviations.iter().find(|d| !d.deviation.is_zero()) {
        Some(d) => DichotomyVerdict::NotFreeAtOrder(d.pattern.degree()),
        None => DichotomyVerdict::ConsistentWithFree,
    };
    Ok(DichotomyReport { max_word_length, deviations, max_abs_deviation, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn semicircle() -> MomentSequence {
        MomentSequence::new([0, 1, 0, 2, 0, 5, 0, 14].iter().map(|&x| int(x)).collect()).unwrap()
    }

    fn rademacher(order: usize) -> MomentSequence {
        MomentSequence::new((1..=order).map(|k| int(if k % 2 == 0 { 1 } else { 0 })).collect()).unwrap()
    }

    #[test]
    fn presets() {
        let p2 = preset_sample_mean_variance(2).unwrap();
        assert_eq!(p2.a, vec![vec![ratio(1, 4), ratio(-1, 4)], vec![ratio(-1, 4), ratio(1, 4)]]);
        assert_eq!(p2.b, vec![ratio(1, 2); 2]);
        let p3 = preset_sample_mean_variance(3).unwrap();
        assert_eq!(p3.a[1][1], ratio(2, 9));
        assert_eq!(p3.a[0][2], ratio(-1, 9));
        for n in 2..=8 {
            assert!(validate_spec(&preset_sample_mean_variance(n).unwrap()).passes());
        }
        assert!(preset_sample_mean_variance(1).is_err());
    }

    #[test]
    fn validity_failures() {
        let id = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        let r = validate_spec(&QuadraticFormSpec::new(id, vec![int(1), int(1)]).unwrap());
        assert!(!r.annihilates_b && r.symmetric);
        let off = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        let r = validate_spec(&QuadraticFormSpec::new(off, vec![int(1), int(-1)]).unwrap());
        assert!(!r.diagonal_support && !r.passes());
        let skew = vec![vec![int(1), int(2)], vec![int(0), int(1)]];
        assert!(!validate_spec(&QuadraticFormSpec::new(skew, vec![int(1), int(1)]).unwrap()).symmetric);
    }

    #[test]
    fn power_sum_vanishing_beyond_n() {
        // c_v: 1 at v = 1 and −1/8 at v = 2 → 1 − 2^m/8 vanishes at m = 3 > n = 2.
        let a = vec![vec![int(1), int(0)], vec![int(0), ratio(-1, 8)]];
        let r = validate_spec(&QuadraticFormSpec::new(a, vec![int(1), int(2)]).unwrap());
        assert_eq!(r.vanishing_power, Some(3));
        assert!(!r.power_sums_nonzero);
        // Opposite b-values with equal diagonal cancel for odd m.
        let a = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        let r = validate_spec(&QuadraticFormSpec::new(a, vec![int(1), int(-1)]).unwrap());
        assert_eq!(r.vanishing_power, Some(1));
    }

    #[test]
    fn joint_moment_examples() {
        let spec = preset_sample_mean_variance(2).unwrap();
        let m = semicircle();
        assert_eq!(joint_moment(&spec, &m, &Pattern(vec![(Form::L, 1)])).unwrap(), int(0));
        assert_eq!(joint_moment(&spec, &m, &Pattern(vec![(Form::Q, 1)])).unwrap(), ratio(1, 2));
        assert_eq!(joint_moment(&spec, &m, &Pattern(vec![(Form::L, 2)])).unwrap(), ratio(1, 2));
        assert!(joint_moment(&spec, &m, &Pattern(vec![])).is_err());
        assert!(joint_moment(&spec, &rademacher(2), &Pattern(vec![(Form::Q, 2)])).is_err());
    }

    #[test]
    fn pattern_enumeration() {
        let ps = alternating_patterns(3);
        let labels: Vec<String> = ps.iter().map(ToString::to_string).collect();
        assert_eq!(labels, vec!["[L][Q]", "[Q][L]"]);
        assert!(alternating_patterns(8).iter().all(|p| p.degree() <= 8 && p.0.len() >= 2));
    }

    #[test]
    fn semicircle_consistent() {
        let r = freeness_dichotomy(&preset_sample_mean_variance(2).unwrap(), &semicircle(), 8).unwrap();
        assert_eq!(r.verdict, DichotomyVerdict::ConsistentWithFree);
        assert!(r.max_abs_deviation.is_zero());
    }

    #[test]
    fn rademacher_detected() {
        let r = freeness_dichotomy(&preset_sample_mean_variance(2).unwrap(), &rademacher(6), 6).unwrap();
        let first = r.first_nonzero().expect("non-freeness is detected");
        assert!(first.pattern.degree() <= 6);
        assert!(matches!(r.verdict, DichotomyVerdict::NotFreeAtOrder(_)));
        let lq = r.deviations.iter().find(|d| d.pattern == Pattern(vec![(Form::L, 1), (Form::Q, 1)])).unwrap();
        assert!(lq.deviation.is_zero());
    }

    #[test]
    fn refuses_invalid_input() {
        let id = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        let spec = QuadraticFormSpec::new(id, vec![int(1), int(1)]).unwrap();
        assert!(matches!(freeness_dichotomy(&spec, &semicircle(), 4), Err(Error::InvalidSpec(_))));
        let shifted = MomentSequence::new(vec![int(1), int(2), int(4), int(8)]).unwrap();
        let preset = preset_sample_mean_variance(2).unwrap();
        assert!(matches!(freeness_dichotomy(&preset, &shifted, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"n":2, "A":[["1/4","-1/4"],["-1/4","1/4"]], "b":["1/2","1/2"]}"#;
        let spec = QuadraticFormSpec::from_json(text).unwrap();
        assert_eq!(spec, preset_sample_mean_variance(2).unwrap());
        assert_eq!(QuadraticFormSpec::from_json(&spec.to_json()).unwrap(), spec);
        assert!(QuadraticFormSpec::from_json(r#"{"n":3, "A":[["1"]], "b":["1"]}"#).is_err());
    }
}
