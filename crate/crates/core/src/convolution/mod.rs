//! Free additive and multiplicative convolution.
//!
//! Multiplicative convolution is available three ways: the truncated-series recursion on
//! the subordination functions, the word oracle `m_k = τ((TS)^k)`, and numerical
//! subordination on the Krein functions.

mod boxtimes;
mod diagnostics;
mod subordination;

pub use boxtimes::{boxtimes_moments, boxtimes_word_oracle, subordination_series, SubordinationSeries};
pub use diagnostics::{
    boxtimes_fractional_closure_check, fractional_diagnostics, weighted_krein_integral, ClosureReport, ClosureVerdict,
    DiagnosticsReport, FRACTIONAL_QUADRATURE_TOLERANCE,
};
pub use subordination::{fit_krein_expansion, solve_subordination, KreinFit, SubordinationSolution, DEFAULT_MAX_ITER};

use crate::error::{Error, Result};
use crate::measures::MomentSequence;
use crate::transforms::{free_from_moments, moments_from_free, FreeCumulants};

/// Moments of `μ₁ ⊞ μ₂`: free cumulants add.
pub fn boxplus_moments(m1: &MomentSequence, m2: &MomentSequence) -> Result<MomentSequence> {
    if m1.order() != m2.order() {
        return Err(Error::OrderMismatch { left: m1.order(), right: m2.order() });
    }
    let k1 = free_from_moments(m1);
    let k2 = free_from_moments(m2);
    let sum = k1.0.iter().zip(&k2.0).map(|(a, b)| a + b).collect();
    Ok(moments_from_free(&FreeCumulants(sum)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn semicircles_add_variances() {
        let half = MomentSequence::new(
            moments_from_free(&FreeCumulants(vec![int(0), ratio(1, 2), int(0), int(0)])).into_vec(),
        )
        .unwrap();
        let sum = boxplus_moments(&half, &half).unwrap();
        assert_eq!(sum.as_slice(), &[int(0), int(1), int(0), int(2)]);
    }

    #[test]
    fn point_masses_translate() {
        let a = MomentSequence::new(vec![int(2), int(4), int(8)]).unwrap();
        let b = MomentSequence::new(vec![int(-3), int(9), int(-27)]).unwrap();
        assert_eq!(boxplus_moments(&a, &b).unwrap().as_slice(), &[int(-1), int(1), int(-1)]);
    }

    #[test]
    fn bernoulli_pair() {
        let b = MomentSequence::new(vec![ratio(1, 2); 4]).unwrap();
        let sum = boxplus_moments(&b, &b).unwrap();
        assert_eq!(sum.as_slice(), &[int(1), ratio(3, 2), ratio(5, 2), ratio(35, 8)]);
    }

    #[test]
    fn order_mismatch() {
        let a = MomentSequence::new(vec![int(1)]).unwrap();
        let b = MomentSequence::new(vec![int(1), int(1)]).unwrap();
        assert_eq!(boxplus_moments(&a, &b), Err(Error::OrderMismatch { left: 1, right: 2 }));
    }
}
