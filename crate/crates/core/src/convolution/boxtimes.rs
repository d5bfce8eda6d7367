use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::measures::MomentSequence;
use crate::rational::Rational;
use crate::series::PowerSeries;
use crate::transforms::{boolean_from_moments, moments_from_boolean, BooleanCumulants};
use crate::word_engine::{FreeFamily, Word};

/// Taylor expansions at the origin of the subordination functions `Z_1, Z_2` and of
/// `K_{μ₁⊠μ₂} = K_{μ₁}∘Z_1`, all in the variable `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubordinationSeries {
    pub z1: PowerSeries,
    pub z2: PowerSeries,
    pub krein: PowerSeries,
}

impl SubordinationSeries {
    /// Signed coefficients `t_1..t_p` of `Z_j(−x) = Σ t_k x^k` (`j` is 1 or 2).
    pub fn negative_axis_coefficients(&self, j: usize) -> Vec<Rational> {
        let z = if j == 1 { &self.z1 } else { &self.z2 };
        z.reflect().tail().to_vec()
    }
}

/// `K(w)/w = r_1 + r_2 w + … + r_p w^{p−1}`.
fn krein_quotient(r: &BooleanCumulants, p: usize) -> PowerSeries {
    PowerSeries::new(r.0[..p].to_vec(), p)
}

/// Runs the order-raising recursion `Z_j ← z·(r_1(μ_k) + r_2(μ_k) Z_k + … + r_p(μ_k) Z_k^{p−1})`
/// `p` times from the seed `Z_j = r_1(μ_k) z`, exact in truncated series arithmetic.
pub fn subordination_series(m1: &MomentSequence, m2: &MomentSequence, p: usize) -> Result<SubordinationSeries> {
    if p == 0 {
        return Err(Error::InvalidOrder(0));
    }
    m1.require_order(p)?;
    m2.require_order(p)?;
    if m1.moment(1).is_zero() || m2.moment(1).is_zero() {
        return Err(Error::ZeroFirstMoment);
    }
    if m1.moment(1).is_negative() || m2.moment(1).is_negative() {
        return Err(Error::Domain("multiplicative convolution needs measures on [0, inf)".into()));
    }
    let r1 = boolean_from_moments(&m1.truncate(p)?);
    let r2 = boolean_from_moments(&m2.truncate(p)?);
    let g1 = krein_quotient(&r1, p);
    let g2 = krein_quotient(&r2, p);
    let zvar = PowerSeries::variable(p);
    let mut z1 = zvar.scale(r2.get(1));
    let mut z2 = zvar.scale(r1.get(1));
    for _ in 0..p {
        let next1 = g2.compose(&z2)?.shift();
        let next2 = g1.compose(&z1)?.shift();
        z1 = next1;
        z2 = next2;
    }
    let krein = &z1 * &g1.compose(&z1)?;
    Ok(SubordinationSeries { z1, z2, krein })
}

/// Moments `m_1..m_p` of `μ₁ ⊠ μ₂` from the subordination recursion.
pub fn boxtimes_moments(m1: &MomentSequence, m2: &MomentSequence, p: usize) -> Result<MomentSequence> {
    let s = subordination_series(m1, m2, p)?;
    Ok(moments_from_boolean(&BooleanCumulants(s.krein.tail().to_vec())))
}

/// Moments `m_k(μ₁ ⊠ μ₂) = τ((T S)^k)`, `k = 1..=p`, for free `T ~ μ₁`, `S ~ μ₂`, summed over
/// block-monochromatic non-crossing partitions of the alternating word.
pub fn boxtimes_word_oracle(m1: &MomentSequence, m2: &MomentSequence, p: usize) -> Result<MomentSequence> {
    if p == 0 {
        return Err(Error::InvalidOrder(0));
    }
    m1.require_order(p)?;
    m2.require_order(p)?;
    if m1.moment(1).is_zero() || m2.moment(1).is_zero() {
        return Err(Error::ZeroFirstMoment);
    }
    let family = FreeFamily::new(vec![m1.truncate(p)?, m2.truncate(p)?]);
    let moments =
        (1..=p).map(|k| family.mixed_moment(&Word::alternating_pair(0, 1, k)?)).collect::<Result<Vec<_>>>()?;
    MomentSequence::new(moments)
}
