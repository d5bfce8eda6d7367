//! Moment ↔ boolean-cumulant and moment ↔ free-cumulant conversions, and the small-`x`
//! expansion check of the Krein function.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{self, Measure, MomentSequence};
use crate::rational::{self, Rational};
use crate::series::PowerSeries;

/// Boolean cumulants `r_1..r_D`: the Taylor coefficients of `K_μ` at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BooleanCumulants(#[serde(with = "rational::serde_rational_vec")] pub Vec<Rational>);

/// Free cumulants `κ_1..κ_D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FreeCumulants(#[serde(with = "rational::serde_rational_vec")] pub Vec<Rational>);

impl BooleanCumulants {
    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// `r_k` for `1 ≤ k ≤ D`.
    pub fn get(&self, k: usize) -> &Rational {
        &self.0[k - 1]
    }

    /// `K(z) = Σ r_k z^k` as a series of the given order.
    pub fn krein_series(&self) -> PowerSeries {
        PowerSeries::from_tail(&self.0, self.order())
    }
}

impl FreeCumulants {
    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// `κ_k` for `1 ≤ k ≤ D`.
    pub fn get(&self, k: usize) -> &Rational {
        &self.0[k - 1]
    }
}

/// `r_k = m_k − Σ_{i<k} m_i r_{k−i}`, i.e. the coefficients of `M/(1+M)`.
pub fn boolean_from_moments(m: &MomentSequence) -> BooleanCumulants {
    let d = m.order();
    let mut r: Vec<Rational> = Vec::with_capacity(d);
    for k in 1..=d {
        let mut v = m.moment(k);
        for i in 1..k {
            v -= m.moment(i) * &r[k - i - 1];
        }
        r.push(v);
    }
    BooleanCumulants(r)
}

/// `m_k = r_k + Σ_{i<k} r_i m_{k−i}`, i.e. the coefficients of `K/(1−K)`.
pub fn moments_from_boolean(r: &BooleanCumulants) -> MomentSequence {
    let d = r.order();
    let mut m: Vec<Rational> = Vec::with_capacity(d);
    for k in 1..=d {
        let mut v = r.get(k).clone();
        for i in 1..k {
            v += r.get(i) * &m[k - i - 1];
        }
        m.push(v);
    }
    MomentSequence::new(m).expect("order is at least one")
}

/// Boolean cumulants through the series identity `K = M/(1+M)`, `M(z) = Σ m_k z^k`.
pub fn boolean_from_moments_series(m: &MomentSequence) -> BooleanCumulants {
    let d = m.order();
    let big_m = PowerSeries::from_tail(m.as_slice(), d);
    let denom = &PowerSeries::one(d) + &big_m;
    let k = big_m.div(&denom).expect("1 + M has unit constant term");
    BooleanCumulants(k.tail().to_vec())
}

/// `[z^j] M(z)^s` for `j = 0..=d`, where `M = 1 + Σ m_k z^k` is known up to `z^d`.
fn moment_series_power(m: &[Rational], s: usize, d: usize) -> PowerSeries {
    let mut coeffs = vec![Rational::one()];
    coeffs.extend(m.iter().take(d).cloned());
    PowerSeries::new(coeffs, d).pow(s)
}

/// Inverts `m_n = Σ_{s=1}^{n} κ_s [z^{n−s}] M(z)^s`, the generating-function form of
/// `m_n = Σ_{π ∈ NC(n)} Π_{V ∈ π} κ_{|V|}`.
pub fn free_from_moments(m: &MomentSequence) -> FreeCumulants {
    let d = m.order();
    let ms = m.as_slice();
    let mut kappa: Vec<Rational> = Vec::with_capacity(d);
    for n in 1..=d {
        let mut v = m.moment(n);
        for s in 1..n {
            let p = moment_series_power(ms, s, n - s);
            v -= &kappa[s - 1] * p.coeff(n - s);
        }
        kappa.push(v);
    }
    FreeCumulants(kappa)
}

pub fn moments_from_free(kappa: &FreeCumulants) -> MomentSequence {
    let d = kappa.order();
    let mut m: Vec<Rational> = Vec::with_capacity(d);
    for n in 1..=d {
        let mut v = kappa.get(n).clone();
        for s in 1..n {
            let p = moment_series_power(&m, s, n - s);
            v += kappa.get(s) * p.coeff(n - s);
        }
        m.push(v);
    }
    MomentSequence::new(m).expect("order is at least one")
}

/// Number of initial grid points ignored before the decay of the remainder ratio is asserted.
pub const KREIN_BURN_IN: usize = 4;

/// Grid length used for exact (atomic) expansion checks: `x = 2^0, …, 2^-(len-1)`.
pub const KREIN_GRID_LEN: usize = 40;

/// A final ratio must be this small relative to the first post-burn-in ratio.
pub const KREIN_DECAY_FACTOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionRow {
    pub x: f64,
    /// `|K(−x) − Σ_{k≤p} (−1)^k r_k x^k| / x^p`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KreinExpansionReport {
    pub p: usize,
    pub burn_in: usize,
    pub exact: bool,
    pub rows: Vec<ExpansionRow>,
}

impl KreinExpansionReport {
    /// Ratios after the burn-in.
    pub fn tail(&self) -> &[ExpansionRow] {
        &self.rows[self.burn_in.min(self.rows.len())..]
    }

    /// Post-burn-in ratios are non-increasing, strictly decreasing while nonzero, and end at
    /// most `KREIN_DECAY_FACTOR` times where they started.
    pub fn decays(&self) -> bool {
        let tail = self.tail();
        if tail.len() < 2 {
            return false;
        }
        let monotone = tail
            .windows(2)
            .all(|w| w[1].ratio.is_finite() && (w[1].ratio < w[0].ratio || (w[0].ratio == 0.0 && w[1].ratio == 0.0)));
        let first = tail[0].ratio;
        let last = tail[tail.len() - 1].ratio;
        monotone && (last == 0.0 || last <= KREIN_DECAY_FACTOR * first)
    }
}

/// Checks the small-`x` expansion `K_μ(−x) = Σ_{k≤p} (−1)^k r_k x^k + o(x^p)` with `r_k`
/// derived from `m`, on the grid `x = 2^{-i}`.
///
/// Atomic measures are evaluated in exact rational arithmetic; density grids in binary64 with
/// the grid stopped before rounding dominates the remainder.
pub fn krein_expansion_check(mu: &Measure, m: &MomentSequence, p: usize) -> Result<KreinExpansionReport> {
    if p == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if !mu.is_multiplicative_admissible() {
        return Err(Error::Domain("Krein expansion needs a measure on [0, inf) with mu({0}) < 1".into()));
    }
    let r = boolean_from_moments(&m.truncate(p)?);
    let poly = |x: &Rational| -> Rational {
        let mut acc = Rational::zero();
        let mut pw = Rational::one();
        for k in 1..=p {
            pw = -(pw * x);
            acc += r.get(k) * &pw;
        }
        acc
    };
    let (rows, exact) = match mu {
        Measure::Atomic(a) => {
            let rows = (0..KREIN_GRID_LEN)
                .map(|i| {
                    let x = Rational::new(1.into(), num_bigint::BigInt::one() << i);
                    let psi: Rational = a
                        .atoms()
                        .iter()
                        .map(|(xi, w)| {
                            let t = &x * xi;
                            -(w * &t) / (Rational::one() + &t)
                        })
                        .sum();
                    let k = &psi / (Rational::one() + &psi);
                    let e = (k - poly(&x)).abs() / rational::pow(&x, p);
                    ExpansionRow { x: rational::to_f64(&x), ratio: rational::to_f64(&e) }
                })
                .collect();
            (rows, true)
        }
        _ => {
            let r_f: Vec<f64> = r.0.iter().map(rational::to_f64).collect();
            let mut rows = Vec::new();
            for i in 0..KREIN_GRID_LEN {
                let x = 2f64.powi(-(i as i32));
                if x.powi(p as i32) < 1e-11 && rows.len() > KREIN_BURN_IN + 2 {
                    break;
                }
                let k = measures::krein_k(mu, Complex64::new(-x, 0.0))?.re;
                let poly: f64 = (1..=p).map(|j| r_f[j - 1] * (-x).powi(j as i32)).sum();
                rows.push(ExpansionRow { x, ratio: (k - poly).abs() / x.powi(p as i32) });
            }
            (rows, false)
        }
    };
    let report = KreinExpansionReport { p, burn_in: KREIN_BURN_IN, exact, rows };
    if report.decays() {
        Ok(report)
    } else {
        Err(Error::InconsistentExpansion)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn seq(v: &[Rational]) -> MomentSequence {
        MomentSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn boolean_examples() {
        let half = ratio(1, 2);
        let r = boolean_from_moments(&seq(&[half.clone(), half.clone(), half.clone(), half]));
        assert_eq!(r.0, vec![ratio(1, 2), ratio(1, 4), ratio(1, 8), ratio(1, 16)]);

        let c = ratio(3, 7);
        let r = boolean_from_moments(&seq(&[c.clone(), &c * &c, &c * &c * &c]));
        assert_eq!(r.0, vec![c.clone(), int(0), int(0)]);
        assert_eq!(moments_from_boolean(&r).as_slice(), &[c.clone(), &c * &c, &c * &c * &c]);

        let sc = seq(&[int(0), int(1), int(0), int(2)]);
        let r = boolean_from_moments(&sc);
        assert_eq!(r.0, vec![int(0), int(1), int(0), int(1)]);
        assert_eq!(moments_from_boolean(&r), sc);
    }

    #[test]
    fn free_examples() {
        let sc = seq(&[int(0), int(1), int(0), int(2), int(0), int(5)]);
        let k = free_from_moments(&sc);
        assert_eq!(k.0, vec![int(0), int(1), int(0), int(0), int(0), int(0)]);
        assert_eq!(moments_from_free(&k), sc);

        let c = ratio(-2, 5);
        let k = FreeCumulants(vec![c.clone(), int(0), int(0)]);
        assert_eq!(moments_from_free(&k).as_slice(), &[c.clone(), &c * &c, &c * &c * &c]);

        let half = ratio(1, 2);
        let k = free_from_moments(&seq(&[half.clone(), half.clone(), half.clone(), half]));
        assert_eq!(k.0, vec![ratio(1, 2), ratio(1, 4), int(0), ratio(-1, 16)]);
    }

    #[test]
    fn series_route_agrees() {
        let m = seq(&[ratio(1, 3), ratio(2, 5), int(1), ratio(-7, 2), int(4)]);
        assert_eq!(boolean_from_moments(&m), boolean_from_moments_series(&m));
    }

    #[test]
    fn expansion_check_examples() {
        let d1 = Measure::dirac(int(1));
        let rep = krein_expansion_check(&d1, &measures::moments(&d1, 3).unwrap(), 3).unwrap();
        assert!(rep.rows.iter().all(|r| r.ratio == 0.0));

        let b = Measure::bernoulli_half();
        let rep = krein_expansion_check(&b, &measures::moments(&b, 2).unwrap(), 2).unwrap();
        assert!(rep.tail().last().unwrap().ratio < 1e-3);

        let two = Measure::atomic(vec![(int(1), ratio(1, 2)), (int(2), ratio(1, 2))]).unwrap();
        assert!(krein_expansion_check(&two, &measures::moments(&two, 4).unwrap(), 4).is_ok());
    }

    #[test]
    fn expansion_check_rejects_mismatched_moments() {
        let b = Measure::bernoulli_half();
        let wrong = seq(&[ratio(1, 2), ratio(1, 3), ratio(1, 4)]);
        assert_eq!(krein_expansion_check(&b, &wrong, 3), Err(Error::InconsistentExpansion));
        let short = seq(&[ratio(1, 2)]);
        assert!(matches!(krein_expansion_check(&b, &short, 2), Err(Error::InsufficientOrder { .. })));
    }

    #[test]
    fn expansion_check_on_density_grid() {
        let x: Vec<f64> = (0..=2000).map(|i| i as f64 / 1000.0).collect();
        let f: Vec<f64> = x.iter().map(|_| 0.5).collect();
        let mu = Measure::density_grid(x, f).unwrap();
        let m = measures::moments(&mu, 2).unwrap();
        let rep = krein_expansion_check(&mu, &m, 2).unwrap();
        assert!(!rep.exact);
    }
}
