use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::linalg::{lp_from_singular_values, nc_lp_norm, normalized_trace, operator_norm, singular_values};
use super::{gaussian_matrix, goe, trial_rng};
use crate::error::{Error, Result};

/// Absolute slack allowed for rounding in every inequality.
pub const INEQUALITY_SLACK: f64 = 1e-9;

/// One evaluated inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl InequalityCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + INEQUALITY_SLACK
    }

    fn ratio(&self) -> f64 {
        if self.rhs > 0.0 {
            self.lhs / self.rhs
        } else if self.lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }
}

fn product(xs: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let mut acc = xs[0].clone();
    for x in &xs[1..] {
        acc = &acc * *x;
    }
    acc
}

fn check_conjugate_exponents(ps: &[f64]) -> Result<()> {
    if ps.iter().any(|&p| !(p > 1.0)) {
        return Err(Error::Domain("Hoelder exponents must exceed 1".into()));
    }
    let s: f64 = ps.iter().map(|p| 1.0 / p).sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("reciprocal exponents sum to {s}, not 1")));
    }
    Ok(())
}

fn holder_rhs(xs: &[&DMatrix<f64>], ps: &[f64]) -> Result<f64> {
    if xs.len() != ps.len() || xs.is_empty() {
        return Err(Error::Domain("need one exponent per factor".into()));
    }
    check_conjugate_exponents(ps)?;
    xs.iter().zip(ps).map(|(x, &p)| nc_lp_norm(x, p)).product()
}

/// `‖a x‖_p ≤ ‖a‖ ‖x‖_p` and `‖x a‖_p ≤ ‖a‖ ‖x‖_p`.
pub fn check_ideal(a: &DMatrix<f64>, x: &DMatrix<f64>, p: f64) -> Result<[InequalityCheck; 2]> {
    let rhs = operator_norm(a)? * nc_lp_norm(x, p)?;
    Ok([InequalityCheck { lhs: nc_lp_norm(&(a * x), p)?, rhs }, InequalityCheck { lhs: nc_lp_norm(&(x * a), p)?, rhs }])
}

/// `|τ(x_1⋯x_n)| ≤ Π ‖x_i‖_{p_i}` for `Σ 1/p_i = 1`.
pub fn check_holder_trace(xs: &[&DMatrix<f64>], ps: &[f64]) -> Result<InequalityCheck> {
    let rhs = holder_rhs(xs, ps)?;
    Ok(InequalityCheck { lhs: normalized_trace(&product(xs)).abs(), rhs })
}

/// `‖x_1⋯x_n‖_1 ≤ Π ‖x_i‖_{p_i}` for `Σ 1/p_i = 1`.
pub fn check_holder_product(xs: &[&DMatrix<f64>], ps: &[f64]) -> Result<InequalityCheck> {
    let rhs = holder_rhs(xs, ps)?;
    Ok(InequalityCheck { lhs: nc_lp_norm(&product(xs), 1.0)?, rhs })
}

/// `‖x_1 + ⋯ + x_n‖_p ≤ Σ ‖x_i‖_p`.
pub fn check_minkowski(xs: &[&DMatrix<f64>], p: f64) -> Result<InequalityCheck> {
    if xs.is_empty() {
        return Err(Error::Domain("Minkowski needs at least one summand".into()));
    }
    let mut sum = xs[0].clone();
    for x in &xs[1..] {
        sum += *x;
    }
    let rhs = xs.iter().map(|x| nc_lp_norm(x, p)).sum::<Result<f64>>()?;
    Ok(InequalityCheck { lhs: nc_lp_norm(&sum, p)?, rhs })
}

/// A factor of a Hölder splitting: a sub-word (0-based letters) and its exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainFactor {
    pub letters: Vec<usize>,
    pub exponent: f64,
}

/// Hölder splittings of `T_{k_1}^{n_1} ⋯ T_{k_s}^{n_s}` with `d = Σ n_i − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChainKind {
    /// `T_{k1}^{n1−1}(T_{k1}T_{k2})T_{k2}^{n2−1}T_{k3}^{n3}⋯`, `d` factors of exponent `d`.
    LeadingPair,
    /// `s = 3`, `n_2 ≥ 2`: `T_{k1}^{n1−1}(T_{k1}T_{k2})T_{k2}^{n2−2}(T_{k2}T_{k3})T_{k3}^{n3−1}`,
    /// `d − 1` factors of exponent `d − 1`.
    DoublePairThree,
    /// `s ≥ 4`: pairs `(T_{k1}T_{k2})` and `(T_{k3}T_{k4})`, `d − 1` factors of exponent `d − 1`.
    DoublePairMany,
    /// `s = 3`, `n_2 = 1`: `T_{k1}^{n1}` in `L^{d/n1}` and `T_{k2}T_{k3}^{n3}` in `L^{d/n3}`.
    Split,
}

/// Builds the factors of a splitting; `powers` lists `(k_i, n_i)` with `k_i ≠ k_{i+1}`.
pub fn chain_factors(kind: ChainKind, powers: &[(usize, usize)]) -> Result<Vec<ChainFactor>> {
    let s = powers.len();
    if s < 2 || powers.iter().any(|&(_, n)| n == 0) || powers.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Domain("chain needs an alternating word with s >= 2 positive powers".into()));
    }
    let d = powers.iter().map(|p| p.1).sum::<usize>() - 1;
    let single = |k: usize, q: f64, count: usize| vec![ChainFactor { letters: vec![k], exponent: q }; count];
    let pair = |a: usize, b: usize, q: f64| ChainFactor { letters: vec![a, b], exponent: q };
    let mut out = Vec::new();
    match kind {
        ChainKind::LeadingPair => {
            let q = d as f64;
            let (k1, n1) = powers[0];
            let (k2, n2) = powers[1];
            out.extend(single(k1, q, n1 - 1));
            out.push(pair(k1, k2, q));
            out.extend(single(k2, q, n2 - 1));
            for &(k, n) in &powers[2..] {
                out.extend(single(k, q, n));
            }
        }
        ChainKind::DoublePairThree => {
            if s != 3 || powers[1].1 < 2 || d < 2 {
                return Err(Error::Domain("this splitting needs s = 3 and n_2 >= 2".into()));
            }
            let q = (d - 1) as f64;
            let [(k1, n1), (k2, n2), (k3, n3)] = [powers[0], powers[1], powers[2]];
            out.extend(single(k1, q, n1 - 1));
            out.push(pair(k1, k2, q));
            out.extend(single(k2, q, n2 - 2));
            out.push(pair(k2, k3, q));
            out.extend(single(k3, q, n3 - 1));
        }
        ChainKind::DoublePairMany => {
            if s < 4 {
                return Err(Error::Domain("this splitting needs s >= 4".into()));
            }
            let q = (d - 1) as f64;
            let [(k1, n1), (k2, n2), (k3, n3), (k4, n4)] = [powers[0], powers[1], powers[2], powers[3]];
            out.extend(single(k1, q, n1 - 1));
            out.push(pair(k1, k2, q));
            out.extend(single(k2, q, n2 - 1));
            out.extend(single(k3, q, n3 - 1));
            out.push(pair(k3, k4, q));
            out.extend(single(k4, q, n4 - 1));
            for &(k, n) in &powers[4..] {
                out.extend(single(k, q, n));
            }
        }
        ChainKind::Split => {
            if s != 3 || powers[1].1 != 1 {
                return Err(Error::Domain("this splitting needs s = 3 and n_2 = 1".into()));
            }
            let [(k1, n1), (k2, _), (k3, n3)] = [powers[0], powers[1], powers[2]];
            out.push(ChainFactor { letters: vec![k1; n1], exponent: d as f64 / n1 as f64 });
            let mut tail = vec![k2];
            tail.extend(std::iter::repeat_n(k3, n3));
            out.push(ChainFactor { letters: tail, exponent: d as f64 / n3 as f64 });
        }
    }
    Ok(out)
}

/// `‖T_{k_1}^{n_1}⋯T_{k_s}^{n_s}‖_1 ≤ Π ‖factor‖_{q}` for a splitting of the word.
pub fn check_chain(mats: &[DMatrix<f64>], kind: ChainKind, powers: &[(usize, usize)]) -> Result<InequalityCheck> {
    if powers.iter().any(|&(k, _)| k >= mats.len()) {
        return Err(Error::Domain("chain uses more matrices than supplied".into()));
    }
    let factors = chain_factors(kind, powers)?;
    let letters: Vec<&DMatrix<f64>> = powers.iter().flat_map(|&(k, n)| std::iter::repeat_n(&mats[k], n)).collect();
    let lhs = nc_lp_norm(&product(&letters), 1.0)?;
    let mut rhs = 1.0;
    for f in &factors {
        let ms: Vec<&DMatrix<f64>> = f.letters.iter().map(|&k| &mats[k]).collect();
        rhs *= lp_from_singular_values(&singular_values(&product(&ms))?, f.exponent);
    }
    Ok(InequalityCheck { lhs, rhs })
}

/// Parameters of a randomized sweep over all inequality families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityConfig {
    pub dimension: usize,
    pub instances: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyResult {
    pub name: &'static str,
    pub instances: usize,
    pub violations: usize,
    /// Largest observed `lhs / rhs`.
    pub worst_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub dimension: usize,
    pub families: Vec<FamilyResult>,
}

impl InequalityReport {
    pub fn instances(&self) -> usize {
        self.families.iter().map(|f| f.instances).sum()
    }

    pub fn violations(&self) -> usize {
        self.families.iter().map(|f| f.violations).sum()
    }

    pub fn all_hold(&self) -> bool {
        self.violations() == 0
    }
}

const FAMILIES: [&str; 8] = [
    "ideal",
    "holder-trace",
    "holder-product",
    "minkowski",
    "chain-leading-pair",
    "chain-double-pair-3",
    "chain-double-pair-many",
    "chain-split",
];

/// A random test matrix: symmetric Gaussian, general Gaussian, or positive semidefinite.
fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let scale = rng.random_range(0.2..3.0);
    match rng.random_range(0..3) {
        0 => goe(rng, n) * scale,
        1 => gaussian_matrix(rng, n, n, scale / (n as f64).sqrt()),
        _ => {
            let g = gaussian_matrix(rng, n, n, 1.0 / (n as f64).sqrt());
            &g * g.transpose() * scale
        }
    }
}

fn random_exponents(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..count).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|wi| total / wi).collect()
}

/// Alternating powers `(k_i, n_i)` with `s` blocks over `vars` variables.
fn random_powers(rng: &mut ChaCha8Rng, s: usize, vars: usize, max_power: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::with_capacity(s);
    for _ in 0..s {
        let k = loop {
            let k = rng.random_range(0..vars);
            if out.last().is_none_or(|&(prev, _)| prev != k) {
                break k;
            }
        };
        out.push((k, rng.random_range(1..=max_power)));
    }
    out
}

fn run_instance(family: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<InequalityCheck>> {
    let mats: Vec<DMatrix<f64>> = (0..5).map(|_| random_matrix(rng, n)).collect();
    let refs: Vec<&DMatrix<f64>> = mats.iter().collect();
    Ok(match family {
        0 => check_ideal(&mats[0], &mats[1], rng.random_range(1.0..6.0))?.to_vec(),
        1 | 2 => {
            let count = rng.random_range(2..=4);
            let ps = random_exponents(rng, count);
            let c = if family == 1 {
                check_holder_trace(&refs[..count], &ps)?
            } else {
                check_holder_product(&refs[..count], &ps)?
            };
            vec![c]
        }
        3 => {
            let count = rng.random_range(2..=5);
            vec![check_minkowski(&refs[..count], rng.random_range(1.0..6.0))?]
        }
        4 => {
            let s = rng.random_range(2..=4);
            vec![check_chain(&mats, ChainKind::LeadingPair, &random_powers(rng, s, 3, 3))?]
        }
        5 => {
            let mut powers = random_powers(rng, 3, 3, 3);
            powers[1].1 = rng.random_range(2..=3);
            vec![check_chain(&mats, ChainKind::DoublePairThree, &powers)?]
        }
        6 => {
            let s = rng.random_range(4..=5);
            vec![check_chain(&mats, ChainKind::DoublePairMany, &random_powers(rng, s, 4, 2))?]
        }
        _ => {
            let mut powers = random_powers(rng, 3, 3, 3);
            powers[1].1 = 1;
            vec![check_chain(&mats, ChainKind::Split, &powers)?]
        }
    })
}

/// Randomized sweep over the ideal, Hölder (trace and product), Minkowski, and Hölder-chain
/// inequalities; instance `i` tests family `i mod 8` with its own random stream.
pub fn verify_inequalities(config: InequalityConfig) -> Result<InequalityReport> {
    if config.dimension < 2 {
        return Err(Error::Domain("matrix dimension must be at least 2".into()));
    }
    let results = (0..config.instances)
        .into_par_iter()
        .map(|i| {
            let family = i % FAMILIES.len();
            let mut rng = trial_rng(config.seed, i as u64);
            Ok((family, run_instance(family, config.dimension, &mut rng)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut families: Vec<FamilyResult> =
        FAMILIES.iter().map(|&name| FamilyResult { name, instances: 0, violations: 0, worst_ratio: 0.0 }).collect();
    for (family, checks) in results {
        let f = &mut families[family];
        f.instances += 1;
        if checks.iter().any(|c| !c.holds()) {
            f.violations += 1;
        }
        f.worst_ratio = checks.iter().map(InequalityCheck::ratio).fold(f.worst_ratio, f64::max);
    }
    Ok(InequalityReport { dimension: config.dimension, families })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: u64, count: usize) -> Vec<DMatrix<f64>> {
        let mut rng = trial_rng(seed, 0);
        (0..count).map(|_| random_matrix(&mut rng, n)).collect()
    }

    #[test]
    fn cauchy_schwarz() {
        let m = sample(6, 1, 2);
        let c = check_holder_trace(&[&m[0], &m[1]], &[2.0, 2.0]).unwrap();
        assert!(c.holds());
    }

    #[test]
    fn exponent_validation() {
        let m = sample(4, 2, 2);
        assert!(check_holder_trace(&[&m[0], &m[1]], &[2.0, 3.0]).is_err());
        assert!(check_holder_product(&[&m[0], &m[1]], &[1.0, f64::INFINITY]).is_err());
        assert!(check_holder_trace(&[&m[0]], &[2.0, 2.0]).is_err());
    }

    #[test]
    fn triples_and_minkowski() {
        for seed in 0..50 {
            let m = sample(5, seed, 5);
            assert!(check_holder_product(&[&m[0], &m[1], &m[2]], &[3.0, 3.0, 3.0]).unwrap().holds());
            let refs: Vec<&DMatrix<f64>> = m.iter().collect();
            assert!(check_minkowski(&refs, 4.0).unwrap().holds());
        }
    }

    #[test]
    fn chain_shapes() {
        let f = chain_factors(ChainKind::LeadingPair, &[(0, 2), (1, 2), (2, 1)]).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|c| c.exponent == 4.0));
        let f = chain_factors(ChainKind::DoublePairThree, &[(0, 1), (1, 3), (2, 1)]).unwrap();
        let recip: f64 = f.iter().map(|c| 1.0 / c.exponent).sum();
        assert!((recip - 1.0).abs() < 1e-15);
        let f = chain_factors(ChainKind::DoublePairMany, &[(0, 1), (1, 1), (2, 2), (3, 1), (0, 1)]).unwrap();
        assert!((f.iter().map(|c| 1.0 / c.exponent).sum::<f64>() - 1.0).abs() < 1e-15);
        let f = chain_factors(ChainKind::Split, &[(0, 2), (1, 1), (2, 2)]).unwrap();
        assert_eq!(f[1].letters, vec![1, 2, 2]);
        assert!(chain_factors(ChainKind::Split, &[(0, 2), (0, 1), (2, 2)]).is_err());
        assert!(chain_factors(ChainKind::DoublePairMany, &[(0, 2), (1, 1), (2, 2)]).is_err());
    }

    #[test]
    fn small_sweep() {
        let r = verify_inequalities(InequalityConfig { dimension: 6, instances: 400, seed: 3 }).unwrap();
        assert_eq!(r.instances(), 400);
        assert!(r.all_hold(), "{r:?}");
    }
}
