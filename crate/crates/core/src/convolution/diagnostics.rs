use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{krein_over_z, Measure};
use crate::quadrature::integrate;

use super::subordination::{solve_subordination, DEFAULT_MAX_ITER};

/// Absolute accuracy demanded of every fractional-moment quadrature.
pub const FRACTIONAL_QUADRATURE_TOLERANCE: f64 = 1e-8;

const MAX_INTERVALS: usize = 4000;
/// Refinement stops once a quartering of the cut-off changes the partial integral by less.
const REFINEMENT_TOLERANCE: f64 = 1e-6;
const SMALLEST_CUTOFF: f64 = 1e-280;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureVerdict {
    Finite,
    InfiniteIndicated,
}

impl std::fmt::Display for ClosureVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClosureVerdict::Finite => "finite",
            ClosureVerdict::InfiniteIndicated => "infinite-indicated",
        })
    }
}

/// Two-sided bound on the Krein integral of a measure on `[0, ∞)`:
/// `½(m_α − ∫_{(0,1)} u^α dμ) ≤ −(1−α)∫₀¹ K(−x) x^{−1−α} dx ≤ c(μ) m_α / α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub alpha: f64,
    /// `−∫₀¹ K(−x) x^{−1−α} dx`.
    pub raw_integral: f64,
    /// `(1−α)` times `raw_integral`; the middle of the sandwich.
    pub integral_value: f64,
    pub quadrature_error: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// `1 / ∫ dμ(u)/(1+u)`.
    pub c_mu: f64,
    /// `∫ u^α dμ`.
    pub m_alpha: f64,
    pub verdict: ClosureVerdict,
}

impl DiagnosticsReport {
    /// Whether both inequalities hold up to the quadrature tolerance.
    pub fn sandwich_holds(&self) -> bool {
        let slack = FRACTIONAL_QUADRATURE_TOLERANCE;
        self.lower_bound <= self.integral_value + slack && self.integral_value <= self.upper_bound + slack
    }
}

fn check_exponent(name: &str, a: f64, allow_one: bool) -> Result<()> {
    let ok = a > 0.0 && (a < 1.0 || (allow_one && a == 1.0));
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must lie in (0,1{}, got {a}", if allow_one { "]" } else { ")" })))
    }
}

/// `∫_a^b g(x) x^{−γ} dx` for `0 ≤ a < b`, `γ ∈ [0,1)`, with `g` bounded near 0, evaluated in
/// `t = x^{1−γ}` so the endpoint singularity disappears.
pub fn weighted_krein_integral<G>(mut g: G, gamma: f64, a: f64, b: f64) -> Result<(f64, f64)>
where
    G: FnMut(f64) -> Result<f64>,
{
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Domain(format!("weight exponent must lie in [0,1), got {gamma}")));
    }
    let s = 1.0 - gamma;
    let est = integrate(
        |t| g(t.powf(1.0 / s)),
        a.powf(s),
        b.powf(s),
        FRACTIONAL_QUADRATURE_TOLERANCE * s * 1e-2,
        1e-12,
        MAX_INTERVALS,
    )?;
    Ok((est.value / s, est.error / s))
}

/// `−K_μ(−x)/x`, positive for `x > 0`.
fn krein_quotient(mu: &Measure, x: f64) -> Result<f64> {
    Ok(krein_over_z(mu, Complex64::new(-x, 0.0))?.re)
}

/// Evaluates both sides and the middle of the fractional-moment sandwich for `μ` and `α`.
pub fn fractional_diagnostics(mu: &Measure, alpha: f64) -> Result<DiagnosticsReport> {
    check_exponent("alpha", alpha, false)?;
    mu.require_multiplicative_admissible()?;
    let (raw, err) = weighted_krein_integral(|x| krein_quotient(mu, x), alpha, 0.0, 1.0)?;
    if err > FRACTIONAL_QUADRATURE_TOLERANCE {
        return Err(Error::Quadrature { tolerance: FRACTIONAL_QUADRATURE_TOLERANCE, estimate: err });
    }
    let m_alpha = mu.fractional_moment(alpha)?;
    let below_one = mu.positive_integral(|u| if u > 0.0 && u < 1.0 { u.powf(alpha) } else { 0.0 })?;
    let c_mu = 1.0 / mu.positive_integral(|u| 1.0 / (1.0 + u))?;
    let verdict = if raw.is_finite() { ClosureVerdict::Finite } else { ClosureVerdict::InfiniteIndicated };
    Ok(DiagnosticsReport {
        alpha,
        raw_integral: raw,
        integral_value: (1.0 - alpha) * raw,
        quadrature_error: (1.0 - alpha) * err,
        lower_bound: 0.5 * (m_alpha - below_one),
        upper_bound: c_mu * m_alpha / alpha,
        c_mu,
        m_alpha,
        verdict,
    })
}

/// Finiteness probe of the Krein integral of `μ₁ ⊠ μ₂` with exponent `γ = αβ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureReport {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub x0: f64,
    /// First cut-off `ε₀`; refinement quarters it.
    pub epsilon0: f64,
    /// `∫_{ε₀}^{x₀}` of `−K_⊠(−x) x^{−1−γ}`.
    pub main_integral: f64,
    /// `(ε_{k+1}, ∫_{ε_{k+1}}^{ε_k})` for each refinement step.
    pub increments: Vec<(f64, f64)>,
    /// Geometric estimate of the remaining `∫_0^{ε_last}`.
    pub tail_estimate: f64,
    /// `−∫_0^{x₀} K_⊠(−x) x^{−1−γ} dx`.
    pub integral_to_x0: f64,
    /// `−(1−γ)∫_0^1 K_⊠(−x) x^{−1−γ} dx`, comparable with [`DiagnosticsReport::integral_value`].
    pub integral_value: f64,
    pub verdict: ClosureVerdict,
}

/// Probes finiteness of `m_{αβ}(μ₁ ⊠ μ₂)` through the Krein integral of the product,
/// with `K_⊠(−x)` from the subordination solver, on `(0, x₀]`,
/// `x₀ = min(1, 1/(4 m₁(μ₁) m₁(μ₂)))`.
///
/// The integral counts as finite once quartering the cut-off changes it by less than `1e-6`.
pub fn boxtimes_fractional_closure_check(mu1: &Measure, mu2: &Measure, alpha: f64, beta: f64) -> Result<ClosureReport> {
    check_exponent("alpha", alpha, true)?;
    check_exponent("beta", beta, true)?;
    let gamma = alpha * beta;
    if gamma >= 1.0 {
        return Err(Error::Domain("alpha * beta must be below 1".into()));
    }
    for mu in [mu1, mu2] {
        if !matches!(mu, Measure::Atomic(_)) {
            return Err(Error::Domain("closure check needs atomic measures".into()));
        }
        mu.require_multiplicative_admissible()?;
    }
    let first = |mu: &Measure| -> f64 {
        match mu {
            Measure::Atomic(a) => a.moment(1).to_f64().unwrap_or(f64::INFINITY),
            _ => unreachable!(),
        }
    };
    let x0 = (1.0 / (4.0 * first(mu1) * first(mu2))).min(1.0);
    let g = |x: f64| -> Result<f64> {
        if x == 0.0 {
            return Ok(first(mu1) * first(mu2));
        }
        let z = Complex64::new(-x, 0.0);
        let sol = solve_subordination(mu1, mu2, z, 1e-14 * x, DEFAULT_MAX_ITER)?;
        Ok((sol.k_value / z).re)
    };
    let epsilon0 = (x0 / 4.0).min(1e-6);
    let (main_integral, _) = weighted_krein_integral(g, gamma, epsilon0, x0)?;
    let mut increments = Vec::new();
    let mut eps = epsilon0;
    let mut partial = main_integral;
    let mut verdict = ClosureVerdict::InfiniteIndicated;
    while eps / 4.0 > SMALLEST_CUTOFF {
        let next = eps / 4.0;
        let (delta, _) = weighted_krein_integral(g, gamma, next, eps)?;
        increments.push((next, delta));
        partial += delta;
        eps = next;
        if !partial.is_finite() {
            break;
        }
        if delta.abs() < REFINEMENT_TOLERANCE {
            verdict = ClosureVerdict::Finite;
            break;
        }
    }
    let tail_estimate = match increments.as_slice() {
        [.., (_, prev), (_, last)] if verdict == ClosureVerdict::Finite && last.abs() < prev.abs() => {
            let rho = last / prev;
            last * rho / (1.0 - rho)
        }
        _ => 0.0,
    };
    let integral_to_x0 = partial + tail_estimate;
    let outer = if x0 < 1.0 { weighted_krein_integral(g, gamma, x0, 1.0)?.0 } else { 0.0 };
    Ok(ClosureReport {
        alpha,
        beta,
        gamma,
        x0,
        epsilon0,
        main_integral,
        increments,
        tail_estimate,
        integral_to_x0,
        integral_value: (1.0 - gamma) * (integral_to_x0 + outer),
        verdict,
    })
}
