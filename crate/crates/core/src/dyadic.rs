//! Exact powers of two with rational exponent.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The number `2^(p/q)`, with `p/q` kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicPower {
    exp: Rational64,
}

impl DyadicPower {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(Error::argument(format!(
                "exponent denominator must be positive, got {q}"
            )));
        }
        Ok(DyadicPower {
            exp: Rational64::new(p, q),
        })
    }

    pub fn from_exponent(exp: Rational64) -> Self {
        DyadicPower { exp }
    }

    pub fn one() -> Self {
        DyadicPower {
            exp: Rational64::zero(),
        }
    }

    /// `k` as `2^b` when `k` is a power of two.
    pub fn from_integer(k: u64) -> Option<Self> {
        if k.is_power_of_two() {
            Some(DyadicPower {
                exp: Rational64::from_integer(k.trailing_zeros() as i64),
            })
        } else {
            None
        }
    }

    pub fn exponent(&self) -> Rational64 {
        self.exp
    }

    pub fn numer(&self) -> i64 {
        *self.exp.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.exp.denom()
    }

    /// `self^r`.
    pub fn pow(&self, r: Rational64) -> Self {
        DyadicPower { exp: self.exp * r }
    }

    pub fn to_f64(&self) -> f64 {
        self.exp.to_f64().map(f64::exp2).unwrap_or(f64::NAN)
    }

    /// `"p/q"`, or `"p"` for integral exponents.
    pub fn exponent_string(&self) -> String {
        if self.denom() == 1 {
            format!("{}", self.numer())
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    pub fn parse_exponent(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: i64 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent numerator in {s:?}")))?;
        let q: i64 = q
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent denominator in {s:?}")))?;
        DyadicPower::new(p, q).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Mul for DyadicPower {
    type Output = DyadicPower;
    // 2^a * 2^b = 2^(a+b)
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        DyadicPower {
            exp: self.exp + rhs.exp,
        }
    }
}

impl Div for DyadicPower {
    type Output = DyadicPower;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        DyadicPower {
            exp: self.exp - rhs.exp,
        }
    }
}

// 2^x is increasing, so order follows the exponent.
impl PartialOrd for DyadicPower {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicPower {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exp.cmp(&other.exp)
    }
}

impl fmt::Display for DyadicPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "2^{}", self.numer())
        } else {
            write!(f, "2^({}/{})", self.numer(), self.denom())
        }
    }
}

/// Serialized as `{"two_exp": "p/q"}`.
#[derive(Serialize, Deserialize)]
struct TwoExp {
    two_exp: String,
}

impl Serialize for DyadicPower {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TwoExp {
            two_exp: self.exponent_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DyadicPower {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = TwoExp::deserialize(d)?;
        DyadicPower::parse_exponent(&t.two_exp).map_err(serde::de::Error::custom)
    }
}
