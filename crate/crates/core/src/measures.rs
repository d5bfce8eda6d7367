//! Probability measures on the line, their moments, and the `ψ` / Krein `K` transforms.
//!
//! Atomic measures carry exact rational atoms and weights, so their moments are exact.
//! The analytic transforms are evaluated in binary64.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Tolerance for detecting evaluation points on the positive half-line or at a pole of `K`.
pub const POLE_TOLERANCE: f64 = 1e-14;

/// Normalization tolerance for density grids.
pub const GRID_NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Density-grid moments are rounded to multiples of `2^-GRID_QUANTUM_BITS` when promoted to rationals.
pub const GRID_QUANTUM_BITS: u32 = 40;

/// Moments `m_1, …, m_D` of a distribution; `m_0 = 1` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MomentSequence {
    #[serde(with = "rational::serde_rational_vec")]
    moments: Vec<Rational>,
}

impl MomentSequence {
    pub fn new(moments: Vec<Rational>) -> Result<Self> {
        if moments.is_empty() {
            return Err(Error::InvalidOrder(0));
        }
        Ok(Self { moments })
    }

    /// Builds a sequence from `"p/q"` strings.
    pub fn parse<S: AsRef<str>>(moments: &[S]) -> Result<Self> {
        Self::new(moments.iter().map(|s| rational::parse(s.as_ref())).collect::<Result<_>>()?)
    }

    pub fn order(&self) -> usize {
        self.moments.len()
    }

    /// `m_k`, with `m_0 = 1`. Panics if `k` exceeds the order.
    pub fn moment(&self, k: usize) -> Rational {
        if k == 0 {
            Rational::one()
        } else {
            self.moments[k - 1].clone()
        }
    }

    /// `m_1, …, m_D`.
    pub fn as_slice(&self) -> &[Rational] {
        &self.moments
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.moments
    }

    /// First `order` moments.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::InsufficientOrder { needed: order, available: self.order() });
        }
        Self::new(self.moments[..order].to_vec())
    }

    pub fn require_order(&self, needed: usize) -> Result<()> {
        if self.order() < needed {
            Err(Error::InsufficientOrder { needed, available: self.order() })
        } else {
            Ok(())
        }
    }

    /// Whether every Hankel matrix `(m_{i+j})_{0≤i,j≤k}` with `2k ≤ D` is positive semidefinite.
    pub fn hankel_is_psd(&self) -> bool {
        let size = self.order() / 2 + 1;
        let mut h: Vec<Vec<Rational>> = (0..size).map(|i| (0..size).map(|j| self.moment(i + j)).collect()).collect();
        is_psd(&mut h)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.moments.iter().map(rational::to_f64).collect()
    }
}

/// Exact positive-semidefiniteness test by symmetric Gaussian elimination.
fn is_psd(a: &mut [Vec<Rational>]) -> bool {
    let n = a.len();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot.is_negative() {
            return false;
        }
        if pivot.is_zero() {
            // A zero pivot is only admissible when its entire row vanishes.
            if (k + 1..n).any(|j| !a[k][j].is_zero()) {
                return false;
            }
            continue;
        }
        let (upper, lower) = a.split_at_mut(k + 1);
        let row_k = &upper[k];
        for row in lower.iter_mut() {
            let factor = &row[k] / &pivot;
            for (x, y) in row[k + 1..].iter_mut().zip(&row_k[k + 1..]) {
                *x -= &factor * y;
            }
        }
    }
    true
}

/// Finitely many atoms with exact rational locations and weights summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicMeasure {
    atoms: Vec<(Rational, Rational)>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("atomic measure has no atoms".into()));
        }
        if atoms.iter().any(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidMeasure("negative atom weight".into()));
        }
        let total: Rational = atoms.iter().map(|(_, w)| w.clone()).sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("atom weights sum to {}, not 1", rational::format(&total))));
        }
        Ok(Self { atoms })
    }

    /// Point mass at `c`.
    pub fn dirac(c: Rational) -> Self {
        Self { atoms: vec![(c, Rational::one())] }
    }

    /// Equal-weight atoms at the given locations.
    pub fn uniform(locations: &[Rational]) -> Result<Self> {
        let w = Rational::new(1.into(), (locations.len().max(1) as i64).into());
        Self::new(locations.iter().map(|x| (x.clone(), w.clone())).collect())
    }

    pub fn atoms(&self) -> &[(Rational, Rational)] {
        &self.atoms
    }

    pub fn moment(&self, k: usize) -> Rational {
        self.atoms.iter().map(|(x, w)| w * rational::pow(x, k)).sum()
    }

    pub fn mass_at_zero(&self) -> Rational {
        self.atoms.iter().filter(|(x, _)| x.is_zero()).map(|(_, w)| w.clone()).sum()
    }

    fn atoms_f64(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms.iter().map(|(x, w)| (rational::to_f64(x), rational::to_f64(w)))
    }
}

/// A probability measure on the real line.
#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    Atomic(AtomicMeasure),
    /// Semicircle law with the given center and radius.
    Semicircle {
        center: f64,
        radius: f64,
    },
    /// Density sampled on ascending abscissae, integrated by the composite trapezoid rule.
    DensityGrid {
        x: Vec<f64>,
        f: Vec<f64>,
    },
}

impl Measure {
    pub fn atomic(atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        AtomicMeasure::new(atoms).map(Measure::Atomic)
    }

    pub fn dirac(c: Rational) -> Self {
        Measure::Atomic(AtomicMeasure::dirac(c))
    }

    /// Two equal atoms at 0 and 1: the law of a trace-1/2 projection.
    pub fn bernoulli_half() -> Self {
        Measure::Atomic(AtomicMeasure::uniform(&[rational::int(0), rational::int(1)]).unwrap())
    }

    pub fn semicircle(center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(Error::InvalidMeasure(format!("semicircle radius must be positive, got {radius}")));
        }
        Ok(Measure::Semicircle { center, radius })
    }

    /// Density grid; `f` must integrate to one under the trapezoid rule.
    pub fn density_grid(x: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        validate_grid(&x, &f)?;
        let mass = trapezoid(&x, &f, |_| 1.0);
        if (mass - 1.0).abs() > GRID_NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidMeasure(format!("density integrates to {mass}, not 1")));
        }
        Ok(Measure::DensityGrid { x, f })
    }

    /// Density grid rescaled to unit trapezoid mass.
    pub fn density_grid_normalized(x: Vec<f64>, mut f: Vec<f64>) -> Result<Self> {
        validate_grid(&x, &f)?;
        let mass = trapezoid(&x, &f, |_| 1.0);
        if !(mass > 0.0) {
            return Err(Error::InvalidMeasure("density has zero mass".into()));
        }
        f.iter_mut().for_each(|v| *v /= mass);
        Ok(Measure::DensityGrid { x, f })
    }

    /// Whether the support lies in `[0, ∞)`.
    pub fn is_on_positive_half_line(&self) -> bool {
        match self {
            Measure::Atomic(a) => a.atoms.iter().all(|(x, w)| w.is_zero() || !x.is_negative()),
            Measure::Semicircle { center, radius } => center - radius >= 0.0,
            Measure::DensityGrid { x, f } => x.iter().zip(f).all(|(xi, fi)| *fi == 0.0 || *xi >= 0.0),
        }
    }

    /// Membership in the class used for multiplicative convolution: support in `[0, ∞)`
    /// and `μ({0}) < 1`.
    pub fn is_multiplicative_admissible(&self) -> bool {
        if !self.is_on_positive_half_line() {
            return false;
        }
        match self {
            Measure::Atomic(a) => a.mass_at_zero() < Rational::one(),
            _ => true,
        }
    }

    pub fn require_multiplicative_admissible(&self) -> Result<()> {
        if self.is_multiplicative_admissible() {
            Ok(())
        } else {
            Err(Error::Domain("measure must be supported on [0, inf) with mu({0}) < 1".into()))
        }
    }

    /// Fractional moment `∫ x^α dμ` for a measure on `[0, ∞)`.
    pub fn fractional_moment(&self, alpha: f64) -> Result<f64> {
        self.positive_integral(|u| if u > 0.0 { u.powf(alpha) } else { 0.0 })
    }

    /// `∫ g dμ` for a measure on `[0, ∞)`.
    pub fn positive_integral(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        if !self.is_on_positive_half_line() {
            return Err(Error::Domain("measure is not supported on [0, inf)".into()));
        }
        match self {
            Measure::Atomic(a) => Ok(a.atoms_f64().map(|(x, w)| w * g(x)).sum()),
            Measure::DensityGrid { x, f } => Ok(trapezoid(x, f, g)),
            Measure::Semicircle { .. } => {
                Err(Error::Domain("transform evaluation is not available for semicircle measures".into()))
            }
        }
    }
}

fn validate_grid(x: &[f64], f: &[f64]) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::InvalidMeasure("density grid needs at least 2 nodes".into()));
    }
    if x.len() != f.len() {
        return Err(Error::InvalidMeasure("grid abscissae and values differ in length".into()));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidMeasure("grid abscissae must be strictly ascending".into()));
    }
    if f.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidMeasure("density values must be finite and nonnegative".into()));
    }
    Ok(())
}

fn trapezoid(x: &[f64], f: &[f64], g: impl Fn(f64) -> f64) -> f64 {
    x.windows(2).zip(f.windows(2)).map(|(xs, fs)| 0.5 * (xs[1] - xs[0]) * (fs[0] * g(xs[0]) + fs[1] * g(xs[1]))).sum()
}

fn trapezoid_complex(x: &[f64], f: &[f64], mut g: impl FnMut(f64) -> Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (xs, fs) in x.windows(2).zip(f.windows(2)) {
        acc += (g(xs[0]) * fs[0] + g(xs[1]) * fs[1]) * (0.5 * (xs[1] - xs[0]));
    }
    acc
}

/// Moments `m_1..m_D` of `mu`.
///
/// Exact for atomic and semicircle measures (semicircle parameters are taken as the exact
/// dyadic values of their doubles). Density grids are integrated by the trapezoid rule and
/// rounded to multiples of `2^-GRID_QUANTUM_BITS`.
pub fn moments(mu: &Measure, order: usize) -> Result<MomentSequence> {
    if order == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let values = match mu {
        Measure::Atomic(a) => (1..=order).map(|k| a.moment(k)).collect(),
        Measure::Semicircle { center, radius } => {
            let m = rational::from_f64(*center)?;
            let half_r = rational::from_f64(*radius)? / rational::int(2);
            // Centered moments: c_{2k} = Catalan(k) (r/2)^{2k}, odd ones vanish.
            let centered: Vec<Rational> = (0..=order)
                .map(|j| {
                    if j % 2 == 1 {
                        Rational::zero()
                    } else {
                        Rational::from_integer(rational::catalan(j / 2)) * rational::pow(&half_r, j)
                    }
                })
                .collect();
            (1..=order)
                .map(|n| (0..=n).map(|j| rational::binomial(n, j) * rational::pow(&m, n - j) * &centered[j]).sum())
                .collect()
        }
        Measure::DensityGrid { x, f } => {
            if x.len() < 2 {
                return Err(Error::InvalidMeasure("density grid needs at least 2 nodes".into()));
            }
            (1..=order)
                .map(|k| rational::quantize(trapezoid(x, f, |t| t.powi(k as i32)), GRID_QUANTUM_BITS))
                .collect::<Result<Vec<_>>>()?
        }
    };
    MomentSequence::new(values)
}

/// Absolute moment `ρ_k = ∫ |x|^k dμ`; exact for atomic measures.
pub fn absolute_moment(mu: &Measure, k: usize) -> Result<f64> {
    match mu {
        Measure::Atomic(a) => {
            Ok(rational::to_f64(&a.atoms.iter().map(|(x, w)| w * rational::pow(&x.abs(), k)).sum::<Rational>()))
        }
        Measure::DensityGrid { x, f } => Ok(trapezoid(x, f, |t| t.abs().powi(k as i32))),
        Measure::Semicircle { center: c, radius: r } => {
            let (c, r) = (*c, *r);
            let n = 20_000;
            let h = std::f64::consts::PI / n as f64;
            // x = c + r cos θ, density 2/(π r²) √(r² − (x−c)²) dx = (2/π) sin²θ dθ
            let s: f64 = (0..=n)
                .map(|i| {
                    let th = i as f64 * h;
                    let wgt = if i == 0 || i == n { 0.5 } else { 1.0 };
                    wgt * (c + r * th.cos()).abs().powi(k as i32) * th.sin().powi(2)
                })
                .sum();
            Ok(2.0 / std::f64::consts::PI * s * h)
        }
    }
}

fn check_evaluation_point(z: Complex64) -> Result<()> {
    if z.im.abs() <= POLE_TOLERANCE && z.re >= -POLE_TOLERANCE {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(())
}

fn require_positive(mu: &Measure) -> Result<()> {
    match mu {
        Measure::Semicircle { .. } => {
            Err(Error::Domain("psi/K evaluation is not available for semicircle measures".into()))
        }
        _ if !mu.is_on_positive_half_line() => Err(Error::Domain("psi/K need a measure supported on [0, inf)".into())),
        _ => Ok(()),
    }
}

/// `ψ_μ(z)/z = ∫ ξ/(1 − zξ) dμ(ξ)`, well defined at `z = 0` (value `m_1`).
pub(crate) fn psi_over_z(mu: &Measure, z: Complex64) -> Result<Complex64> {
    require_positive(mu)?;
    let term = |xi: f64| {
        let denom = Complex64::new(1.0, 0.0) - z * xi;
        if denom.norm() <= POLE_TOLERANCE {
            None
        } else {
            Some(Complex64::new(xi, 0.0) / denom)
        }
    };
    match mu {
        Measure::Atomic(a) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, w) in a.atoms_f64() {
                acc += term(x).ok_or(Error::Pole { re: z.re, im: z.im })? * w;
            }
            Ok(acc)
        }
        Measure::DensityGrid { x, f } => {
            let mut pole = false;
            let v = trapezoid_complex(x, f, |t| {
                term(t).unwrap_or_else(|| {
                    pole = true;
                    Complex64::new(0.0, 0.0)
                })
            });
            if pole {
                Err(Error::Pole { re: z.re, im: z.im })
            } else {
                Ok(v)
            }
        }
        Measure::Semicircle { .. } => unreachable!(),
    }
}

/// `K_μ(z)/z = (ψ_μ(z)/z) / (1 + ψ_μ(z))`; tends to `m_1` as `z → 0`.
pub(crate) fn krein_over_z(mu: &Measure, z: Complex64) -> Result<Complex64> {
    let pz = psi_over_z(mu, z)?;
    let one_plus_psi = Complex64::new(1.0, 0.0) + z * pz;
    if one_plus_psi.norm() <= POLE_TOLERANCE {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(pz / one_plus_psi)
}

/// `ψ_μ(z) = ∫ zξ/(1 − zξ) dμ(ξ)` for `μ` on `[0, ∞)` and `z ∉ [0, ∞)`.
pub fn psi(mu: &Measure, z: Complex64) -> Result<Complex64> {
    require_positive(mu)?;
    check_evaluation_point(z)?;
    Ok(z * psi_over_z(mu, z)?)
}

/// Krein function `K_μ(z) = ψ_μ(z) / (1 + ψ_μ(z))`.
pub fn krein_k(mu: &Measure, z: Complex64) -> Result<Complex64> {
    require_positive(mu)?;
    check_evaluation_point(z)?;
    Ok(z * krein_over_z(mu, z)?)
}

/// Semicircle density `2/(π r²) √((r² − (x−m)²)₊)`.
pub fn semicircle_density(center: f64, radius: f64, x: f64) -> f64 {
    let d = radius * radius - (x - center) * (x - center);
    if d <= 0.0 {
        0.0
    } else {
        2.0 / (std::f64::consts::PI * radius * radius) * d.sqrt()
    }
}

// ---------------------------------------------------------------------------------------------
// JSON representation

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum MeasureRepr {
    Atomic { atoms: Vec<(String, String)> },
    Semicircle { center: f64, radius: f64 },
    Grid { x: Vec<f64>, f: Vec<f64> },
}

impl Serialize for Measure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Measure::Atomic(a) => MeasureRepr::Atomic {
                atoms: a.atoms.iter().map(|(x, w)| (rational::format(x), rational::format(w))).collect(),
            },
            Measure::Semicircle { center, radius } => MeasureRepr::Semicircle { center: *center, radius: *radius },
            Measure::DensityGrid { x, f } => MeasureRepr::Grid { x: x.clone(), f: f.clone() },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MeasureRepr::deserialize(d)?;
        let m = match repr {
            MeasureRepr::Atomic { atoms } => {
                let atoms = atoms
                    .iter()
                    .map(|(x, w)| Ok((rational::parse(x)?, rational::parse(w)?)))
                    .collect::<Result<Vec<_>>>()
                    .map_err(D::Error::custom)?;
                Measure::atomic(atoms)
            }
            MeasureRepr::Semicircle { center, radius } => Measure::semicircle(center, radius),
            MeasureRepr::Grid { x, f } => Measure::density_grid(x, f),
        };
        m.map_err(D::Error::custom)
    }
}

impl Measure {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure serializes")
    }
}
