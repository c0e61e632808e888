use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> ExactRational {
        ExactRational(BigRational::new(num.into(), den.into()))
    }

    pub fn one() -> ExactRational {
        ExactRational(BigRational::one())
    }

    pub fn zero() -> ExactRational {
        ExactRational(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal approximation with six significant digits.
    pub fn decimal(&self) -> String {
        significant(self.to_f64(), 6)
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

pub(crate) fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadArgs(format!("not a fraction: '{s}'"));
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(ExactRational::new(n, d))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_display() {
        let r = ExactRational::new(92, 100);
        assert_eq!(r.to_string(), "23/25");
        assert_eq!(ExactRational::new(30, 36), "5/6".parse().unwrap());
        assert_eq!(ExactRational::new(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn decimals() {
        assert_eq!(ExactRational::new(23, 25).decimal(), "0.920000");
        assert_eq!(ExactRational::new(140849, 165649).decimal(), "0.850286");
        assert_eq!(ExactRational::one().decimal(), "1.00000");
        assert_eq!(significant(0.0123456789, 6), "0.0123457");
    }

    #[test]
    fn parse_errors() {
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("x/2".parse::<ExactRational>().is_err());
    }

    #[test]
    fn serde_string_form() {
        let r = ExactRational::new(16, 25);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, "\"16/25\"");
        assert_eq!(serde_json::from_str::<ExactRational>(&json).unwrap(), r);
    }
}
