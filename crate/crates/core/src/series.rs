//! Truncated formal power series with exact rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `c_0 + c_1 z + … + c_D z^D`, truncated at a fixed order `D`.
///
/// All arithmetic is closed at the truncation order; mixing orders truncates to the smaller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Series from `c_0..=c_D`; missing trailing coefficients are zero.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series `z`.
    pub fn variable(order: usize) -> Self {
        Self::new(vec![Rational::zero(), Rational::one()], order)
    }

    /// Series with zero constant term and `c_1, c_2, …` given.
    pub fn from_tail(tail: &[Rational], order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(tail.iter().take(order).cloned());
        Self::new(coeffs, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `c_1..=c_D`.
    pub fn tail(&self) -> &[Rational] {
        &self.coeffs[1..]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplication by `z` (shift), truncated.
    pub fn shift(&self) -> Self {
        let d = self.order();
        let mut coeffs = Vec::with_capacity(d + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs[..d].iter().cloned());
        Self { coeffs }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Domain("series with zero constant term has no inverse".into()));
        }
        let d = self.order();
        let inv0 = c0.recip();
        let mut out = vec![inv0.clone()];
        for n in 1..=d {
            let s: Rational = (1..=n).map(|k| &self.coeffs[k] * &out[n - k]).sum();
            out.push(-s * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `self(inner(z))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Domain("composition needs an inner series with zero constant term".into()));
        }
        let d = self.order().min(inner.order());
        let inner = inner.truncate(d);
        // Horner: c_0 + g (c_1 + g (c_2 + …)).
        let mut acc = Self::constant(self.coeffs[d].clone(), d);
        for k in (0..d).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Substitutes `z → -z`.
    pub fn reflect(&self) -> Self {
        Self { coeffs: self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect() }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational::format).collect()
    }
}

impl<'a> Add<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let d = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=d).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl<'a> Sub<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let d = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=d).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl<'a> Mul<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let d = self.order().min(rhs.order());
        let mut out = vec![Rational::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(d + 1 - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}
