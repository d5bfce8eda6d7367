//! Fixtures shared by the benchmarks.

use freeconv::measures::{moments, Measure};
use freeconv::rational::ratio;
use freeconv::MomentSequence;

/// Three-atom measure on `(0, ∞)` used across benchmarks.
pub fn three_atoms() -> Measure {
    Measure::atomic(vec![(ratio(1, 3), ratio(1, 4)), (ratio(1, 1), ratio(1, 2)), (ratio(5, 2), ratio(1, 4))])
        .expect("valid measure")
}

/// Moments of [`three_atoms`] up to `order`.
pub fn three_atom_moments(order: usize) -> MomentSequence {
    moments(&three_atoms(), order).expect("atomic moments")
}

/// Moments `m_k = C_{k/2}` of the standard semicircle up to `order`.
pub fn semicircle_moments(order: usize) -> MomentSequence {
    moments(&Measure::semicircle(0.0, 2.0).expect("valid semicircle"), order).expect("semicircle moments")
}
