use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{krein_over_z, Measure};

/// Iteration budget used by callers that do not choose one.
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Solution of the subordination system `Z₁Z₂ = z K₁(Z₁)`, `K₁(Z₁) = K₂(Z₂)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubordinationSolution {
    pub z: Complex64,
    pub z1: Complex64,
    pub z2: Complex64,
    /// `K_{μ₁}(Z₁) = K_{μ₁⊠μ₂}(z)`.
    pub k_value: Complex64,
    /// `|Z₁Z₂ − z K₁(Z₁)|` and `|K₁(Z₁) − K₂(Z₂)|`.
    pub residuals: [f64; 2],
    pub iterations: usize,
}

fn check_point(z: Complex64) -> Result<()> {
    let upper = z.im > 0.0;
    let negative_axis = z.im == 0.0 && z.re < 0.0;
    if !(z.re.is_finite() && z.im.is_finite()) || !(upper || negative_axis) {
        return Err(Error::Domain(format!("subordination needs Im z > 0 or z < 0, got {}{:+}i", z.re, z.im)));
    }
    Ok(())
}

fn residuals(
    mu1: &Measure,
    mu2: &Measure,
    z: Complex64,
    z1: Complex64,
    z2: Complex64,
) -> Result<([f64; 2], Complex64)> {
    let k1 = z1 * krein_over_z(mu1, z1)?;
    let k2 = z2 * krein_over_z(mu2, z2)?;
    Ok(([(z1 * z2 - z * k1).norm(), (k1 - k2).norm()], k1))
}

/// Damped fixed-point iteration `Z₁ ← z K₂(Z₂)/Z₂`, `Z₂ ← z K₁(Z₁)/Z₁` from
/// `Z_j = r₁(μ_k) z`. A step whose update reverses the previous one is halved.
pub fn solve_subordination(
    mu1: &Measure,
    mu2: &Measure,
    z: Complex64,
    tol: f64,
    max_iter: usize,
) -> Result<SubordinationSolution> {
    mu1.require_multiplicative_admissible()?;
    mu2.require_multiplicative_admissible()?;
    check_point(z)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut z1 = z * krein_over_z(mu2, zero)?;
    let mut z2 = z * krein_over_z(mu1, zero)?;
    let mut prev = [zero; 2];
    let mut last = [f64::INFINITY; 2];
    for it in 1..=max_iter {
        let d1 = z * krein_over_z(mu2, z2)? - z1;
        let w1 = if (d1 * prev[0].conj()).re < 0.0 { 0.5 } else { 1.0 };
        z1 += d1 * w1;
        let d2 = z * krein_over_z(mu1, z1)? - z2;
        let w2 = if (d2 * prev[1].conj()).re < 0.0 { 0.5 } else { 1.0 };
        z2 += d2 * w2;
        prev = [d1, d2];
        let (res, k_value) = residuals(mu1, mu2, z, z1, z2)?;
        last = res;
        if res[0] <= tol && res[1] <= tol {
            return Ok(SubordinationSolution { z, z1, z2, k_value, residuals: res, iterations: it });
        }
        if !(z1.norm().is_finite() && z2.norm().is_finite()) {
            break;
        }
    }
    Err(Error::NonConvergence { iterations: max_iter, residuals: last })
}

/// Fitted small-`z` expansion of `K_{μ₁⊠μ₂}` with solver statistics over the fit nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinFit {
    /// `r_1, …, r_n` with `K(z) ≈ Σ r_k z^k`.
    pub coefficients: Vec<f64>,
    /// Largest residuals over the nodes.
    pub residuals: [f64; 2],
    /// Largest iteration count over the nodes.
    pub iterations: usize,
}

/// Least-squares fit of the first `n_coeffs` Taylor coefficients of `K_{μ₁⊠μ₂}` at the
/// origin from subordination solutions on the negative axis `x ∈ (0, x_max]`.
pub fn fit_krein_expansion(mu1: &Measure, mu2: &Measure, n_coeffs: usize, x_max: f64) -> Result<KreinFit> {
    if n_coeffs == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::Domain(format!("fit window must be positive, got {x_max}")));
    }
    let degree = n_coeffs + 5;
    let nodes = 4 * (degree + 1);
    let mut a = DMatrix::zeros(nodes, degree + 1);
    let mut b = DVector::zeros(nodes);
    let mut residuals = [0.0f64; 2];
    let mut iterations = 0;
    for i in 0..nodes {
        // Chebyshev nodes mapped to (0, x_max].
        let theta = std::f64::consts::PI * (i as f64 + 0.5) / nodes as f64;
        let x = 0.5 * x_max * (1.0 - theta.cos());
        let z = Complex64::new(-x, 0.0);
        let sol = solve_subordination(mu1, mu2, z, 1e-15 * x.max(1e-300), DEFAULT_MAX_ITER)?;
        residuals = [residuals[0].max(sol.residuals[0]), residuals[1].max(sol.residuals[1])];
        iterations = iterations.max(sol.iterations);
        // K(−x)/(−x) = Σ r_k (−x)^{k−1}; fit in the scaled variable u = x/x_max.
        b[i] = (sol.k_value / z).re;
        let u = x / x_max;
        let mut p = 1.0;
        for j in 0..=degree {
            a[(i, j)] = p;
            p *= u;
        }
    }
    let coeffs =
        a.svd(true, true).solve(&b, 1e-14).map_err(|e| Error::Domain(format!("least-squares fit failed: {e}")))?;
    let coefficients = (0..n_coeffs)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * coeffs[j] / x_max.powi(j as i32)
        })
        .collect();
    Ok(KreinFit { coefficients, residuals, iterations })
}
