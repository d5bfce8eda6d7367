//! Random-matrix models of free families and noncommutative `L^p` inequality checks.
//!
//! The trace `τ` is realized as the normalized trace `(1/N) Tr` on `N × N` real matrices.

mod inequalities;
mod linalg;

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::AtomicMeasure;
use crate::word_engine::Word;

pub use inequalities::{
    chain_factors, check_chain, check_holder_product, check_holder_trace, check_ideal, check_minkowski,
    verify_inequalities, ChainFactor, ChainKind, FamilyResult, InequalityCheck, InequalityConfig, InequalityReport,
    INEQUALITY_SLACK,
};
pub use linalg::{
    nc_lp_norm, normalized_trace, normalized_trace_of_product, operator_norm, singular_values, symmetric_eigenvalues,
    JACOBI_MAX_SWEEPS, JACOBI_TOLERANCE,
};

/// Memory ceiling for one sampled family, `N² · count · 8` bytes.
pub const MATRIX_BUDGET_BYTES: u128 = 1 << 30;

/// How one matrix of the family is drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleKind {
    /// Symmetric Gaussian, off-diagonal variance `1/N`, diagonal `2/N`; spectrum → semicircle on `[−2, 2]`.
    Goe,
    /// `O D Oᵀ` with i.i.d. diagonal entries from the measure and Haar orthogonal `O`.
    DiagonalFromMeasure(AtomicMeasure),
    /// `G Gᵀ` with i.i.d. `N(0, 1/N)` entries; spectrum → free Poisson of rate 1.
    Wishart,
}

impl EnsembleKind {
    pub fn name(&self) -> &'static str {
        match self {
            EnsembleKind::Goe => "goe",
            EnsembleKind::DiagonalFromMeasure(_) => "diagonal",
            EnsembleKind::Wishart => "wishart",
        }
    }
}

/// A family of independent `N × N` random matrices, one per entry of `kinds`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixEnsembleSpec {
    pub dimension: usize,
    pub kinds: Vec<EnsembleKind>,
    pub seed: u64,
}

impl MatrixEnsembleSpec {
    pub fn new(dimension: usize, kinds: Vec<EnsembleKind>, seed: u64) -> Result<Self> {
        let spec = Self { dimension, kinds, seed };
        spec.validate()?;
        Ok(spec)
    }

    /// `count` matrices of the same kind.
    pub fn uniform(dimension: usize, count: usize, kind: EnsembleKind, seed: u64) -> Result<Self> {
        Self::new(dimension, vec![kind; count], seed)
    }

    pub fn count(&self) -> usize {
        self.kinds.len()
    }

    fn validate(&self) -> Result<()> {
        if self.dimension < 2 {
            return Err(Error::Domain(format!("matrix dimension must be at least 2, got {}", self.dimension)));
        }
        if self.kinds.is_empty() {
            return Err(Error::Domain("ensemble needs at least one matrix".into()));
        }
        let bytes = (self.dimension as u128).pow(2) * self.count() as u128 * 8;
        if bytes > MATRIX_BUDGET_BYTES {
            return Err(Error::DimensionOverflow { bytes, limit: MATRIX_BUDGET_BYTES });
        }
        Ok(())
    }
}

/// The random stream for one trial: determined by `(seed, trial)` alone.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub(crate) fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, sd: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| sd * rng.sample::<f64, _>(StandardNormal))
}

pub(crate) fn goe(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let g = gaussian_matrix(rng, n, n, 1.0);
    // (G + Gᵀ)/√(2N): off-diagonal variance 1/N, diagonal 2/N.
    (&g + g.transpose()) / (2.0 * n as f64).sqrt()
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with `R` made positive-diagonal.
pub fn haar_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let qr = gaussian_matrix(rng, n, n, 1.0).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

fn diagonal_from_measure(rng: &mut ChaCha8Rng, n: usize, mu: &AtomicMeasure) -> DMatrix<f64> {
    let atoms: Vec<(f64, f64)> =
        mu.atoms().iter().map(|(x, w)| (x.to_f64().unwrap_or(f64::NAN), w.to_f64().unwrap_or(0.0))).collect();
    let diag: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            for &(x, w) in &atoms {
                acc += w;
                if u < acc {
                    return x;
                }
            }
            atoms.last().map_or(0.0, |a| a.0)
        })
        .collect();
    let o = haar_orthogonal(rng, n);
    let mut od = o.clone();
    for (j, d) in diag.iter().enumerate() {
        od.column_mut(j).scale_mut(*d);
    }
    let m = od * o.transpose();
    // Symmetrize away rounding.
    (&m + m.transpose()) * 0.5
}

/// Draws the family for one trial.
pub fn sample_family(spec: &MatrixEnsembleSpec, trial: u64) -> Result<Vec<DMatrix<f64>>> {
    spec.validate()?;
    let n = spec.dimension;
    let mut rng = trial_rng(spec.seed, trial);
    Ok(spec
        .kinds
        .iter()
        .map(|kind| match kind {
            EnsembleKind::Goe => goe(&mut rng, n),
            EnsembleKind::DiagonalFromMeasure(mu) => diagonal_from_measure(&mut rng, n, mu),
            EnsembleKind::Wishart => {
                let g = gaussian_matrix(&mut rng, n, n, 1.0 / (n as f64).sqrt());
                &g * g.transpose()
            }
        })
        .collect())
}

/// Monte Carlo estimate of `τ(w)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEstimate {
    pub expression: String,
    pub mean: f64,
    pub standard_error: f64,
    pub trials: usize,
}

impl TraceEstimate {
    fn from_samples(expression: String, xs: &[f64]) -> Self {
        let t = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / t;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (t - 1.0);
        Self { expression, mean, standard_error: (var / t).sqrt(), trials: xs.len() }
    }

    /// `(mean − exact)/se`.
    pub fn z_score(&self, exact: f64) -> f64 {
        (self.mean - exact) / self.standard_error
    }

    /// `|mean − exact| ≤ 3 se + bias`.
    pub fn agrees_with(&self, exact: f64, bias: f64) -> bool {
        (self.mean - exact).abs() <= 3.0 * self.standard_error + bias
    }
}

/// Normalized traces of several words on one sampled family, sharing prefix products.
fn word_traces(mats: &[DMatrix<f64>], words: &[Word]) -> Vec<f64> {
    let mut prefixes: HashMap<Vec<usize>, DMatrix<f64>> = HashMap::new();
    words
        .iter()
        .map(|w| {
            let l = w.letters();
            if l.len() == 1 {
                return normalized_trace(&mats[l[0]]);
            }
            for k in 2..l.len() {
                if !prefixes.contains_key(&l[..k]) {
                    let head = if k == 2 { &mats[l[0]] } else { &prefixes[&l[..k - 1]] };
                    let next = head * &mats[l[k - 1]];
                    prefixes.insert(l[..k].to_vec(), next);
                }
            }
            let head = if l.len() == 2 { &mats[l[0]] } else { &prefixes[&l[..l.len() - 1]] };
            normalized_trace_of_product(head, &mats[l[l.len() - 1]])
        })
        .collect()
}

/// Estimates `τ(w)` for every word over `trials` independent samples of the family.
///
/// Each trial uses its own stream, so the result does not depend on the thread count.
pub fn estimate_word_traces(spec: &MatrixEnsembleSpec, words: &[Word], trials: usize) -> Result<Vec<TraceEstimate>> {
    spec.validate()?;
    if trials < 2 {
        return Err(Error::Domain(format!("need at least 2 trials, got {trials}")));
    }
    for w in words {
        if w.letters().iter().any(|&v| v >= spec.count()) {
            return Err(Error::Domain(format!("word {w} uses more matrices than the family has")));
        }
    }
    let per_trial = (0..trials as u64)
        .into_par_iter()
        .map(|t| Ok(word_traces(&sample_family(spec, t)?, words)))
        .collect::<Result<Vec<_>>>()?;
    Ok(words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let xs: Vec<f64> = per_trial.iter().map(|row| row[i]).collect();
            TraceEstimate::from_samples(w.to_string(), &xs)
        })
        .collect())
}

/// Single-word form of [`estimate_word_traces`].
pub fn estimate_word_trace(spec: &MatrixEnsembleSpec, word: &Word, trials: usize) -> Result<TraceEstimate> {
    Ok(estimate_word_traces(spec, std::slice::from_ref(word), trials)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Measure;

    fn bernoulli() -> AtomicMeasure {
        match Measure::bernoulli_half() {
            Measure::Atomic(a) => a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = MatrixEnsembleSpec::uniform(64, 2, EnsembleKind::Goe, 7).unwrap();
        assert_eq!(sample_family(&spec, 3).unwrap(), sample_family(&spec, 3).unwrap());
        assert_ne!(sample_family(&spec, 3).unwrap(), sample_family(&spec, 4).unwrap());
    }

    #[test]
    fn goe_second_moment_per_trial() {
        let spec = MatrixEnsembleSpec::uniform(256, 1, EnsembleKind::Goe, 1).unwrap();
        for t in 0..3 {
            let x = &sample_family(&spec, t).unwrap()[0];
            let m2 = normalized_trace_of_product(x, x);
            assert!((0.85..=1.15).contains(&m2), "m2 = {m2}");
        }
    }

    #[test]
    fn rotated_bernoulli_trace() {
        let spec = MatrixEnsembleSpec::uniform(256, 1, EnsembleKind::DiagonalFromMeasure(bernoulli()), 2).unwrap();
        let x = &sample_family(&spec, 0).unwrap()[0];
        assert!((normalized_trace(x) - 0.5).abs() < 0.1);
        let h = haar_orthogonal(&mut trial_rng(5, 0), 16);
        assert!((h.transpose() * &h - DMatrix::identity(16, 16)).norm() < 1e-12);
    }

    #[test]
    fn small_word_estimates() {
        let spec = MatrixEnsembleSpec::uniform(128, 2, EnsembleKind::Goe, 11).unwrap();
        let words: Vec<Word> = ["T1 T2", "T1^4", "T1^2 T2^2"].iter().map(|s| s.parse().unwrap()).collect();
        let est = estimate_word_traces(&spec, &words, 20).unwrap();
        assert!(est[0].agrees_with(0.0, 0.0 + 2.0 / 128.0));
        assert!(est[1].agrees_with(2.0, 5.0 / 128.0));
        assert!(est[2].agrees_with(1.0, 5.0 / 128.0));
        assert_eq!(est[1].expression, "T1^4");
    }

    #[test]
    fn guards() {
        assert!(matches!(
            MatrixEnsembleSpec::uniform(1 << 14, 1, EnsembleKind::Goe, 0),
            Err(Error::DimensionOverflow { .. })
        ));
        assert!(MatrixEnsembleSpec::uniform(1, 1, EnsembleKind::Goe, 0).is_err());
        let spec = MatrixEnsembleSpec::uniform(8, 1, EnsembleKind::Goe, 0).unwrap();
        assert!(estimate_word_trace(&spec, &"T2".parse().unwrap(), 5).is_err());
        assert!(estimate_word_trace(&spec, &"T1".parse().unwrap(), 1).is_err());
    }
}
