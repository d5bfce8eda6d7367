//! Exact rational numbers and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact value of a binary64 number. Every finite double is a dyadic rational.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Numerator or denominator overflowed f64; fall back to a scaled quotient.
        let n = x.numer().bits() as i64;
        let d = x.denom().bits() as i64;
        let shift = n.max(d) - 1000;
        let num = (x.numer() >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
        let den = (x.denom() >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

/// Parses `"p/q"`, `"-p/q"` or an integer string.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
    }
}

/// Canonical `"p/q"` form; integers print without a denominator.
pub fn format(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// Rounds to the nearest multiple of `2^-bits`.
pub fn quantize(x: f64, bits: u32) -> Result<Rational> {
    let scale = 2f64.powi(bits as i32);
    let scaled = (x * scale).round();
    Ok(from_f64(scaled)? / Rational::from_integer(BigInt::one() << bits as usize))
}

/// Serde adapter: a single rational as a `"p/q"` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        format(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: a vector of rationals as an array of `"p/q"` strings.
pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        xs.iter().map(format).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>().map_err(serde::de::Error::custom)
    }
}

/// Binomial coefficient as an exact rational.
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// Catalan number `C_n` as a big integer.
pub fn catalan(n: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..n {
        c = c * BigInt::from(2 * (2 * i + 1)) / BigInt::from(i + 2);
    }
    c
}

/// Exact integer power of a rational.
pub fn pow(x: &Rational, k: usize) -> Rational {
    num_traits::pow(x.clone(), k)
}

pub fn is_nonnegative(x: &Rational) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse(" -3/6 ").unwrap(), ratio(-1, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(format(&ratio(-2, 4)), "-1/2");
        assert_eq!(format(&int(3)), "3");
    }

    #[test]
    fn catalan_numbers() {
        let got: Vec<u64> = (0..8).map(|n| catalan(n).to_u64().unwrap()).collect();
        assert_eq!(got, vec![1, 1, 2, 5, 14, 42, 132, 429]);
        assert_eq!(catalan(14).to_u64().unwrap(), 2_674_440);
    }

    #[test]
    fn exact_float_conversion() {
        assert_eq!(from_f64(0.375).unwrap(), ratio(3, 8));
        assert_eq!(quantize(1.0 / 3.0, 4).unwrap(), ratio(5, 16));
        assert!(from_f64(f64::NAN).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), int(15));
        assert_eq!(binomial(2, 3), int(0));
    }
}
