//! Exact extended rationals: `ℚ ∪ {-∞, +∞}`.
//!
//! Every tropical quantity in the crate is an [`ExtScalar`]. Finite values
//! are arbitrary-precision rationals kept in lowest terms, so equality is
//! exact and decidable. The two infinities share one type so that DBMs,
//! strongly active matrices and possibly active matrices live in the same
//! representation; the only forbidden operation is `-∞ + +∞`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The two idempotent semirings the crate works in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semiring {
    /// `⊕ = max`, `⊗ = +`, zero element `-∞`.
    MaxPlus,
    /// `⊕ = min`, `⊗ = +`, zero element `+∞`.
    MinPlus,
}

impl Semiring {
    /// The additive identity (and multiplicative absorber) of the semiring.
    pub fn zero(self) -> ExtScalar {
        match self {
            Semiring::MaxPlus => ExtScalar::NegInf,
            Semiring::MinPlus => ExtScalar::PosInf,
        }
    }

    pub fn dual(self) -> Semiring {
        match self {
            Semiring::MaxPlus => Semiring::MinPlus,
            Semiring::MinPlus => Semiring::MaxPlus,
        }
    }
}

/// An exact rational extended with `-∞` and `+∞`.
///
/// The derived order is the extended-real order: `-∞ < q < +∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtScalar {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl ExtScalar {
    pub fn int(v: i64) -> Self {
        ExtScalar::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    /// `num/den`, reduced. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        ExtScalar::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        ExtScalar::Finite(BigRational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtScalar::Finite(_))
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, ExtScalar::NegInf)
    }

    pub fn is_pos_inf(&self) -> bool {
        matches!(self, ExtScalar::PosInf)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExtScalar::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Tropical addition: `max` in max-plus, `min` in min-plus.
    pub fn trop_add(&self, other: &Self, semiring: Semiring) -> Self {
        let pick_self = match semiring {
            Semiring::MaxPlus => self >= other,
            Semiring::MinPlus => self <= other,
        };
        if pick_self {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Tropical multiplication, i.e. ordinary addition with absorbing
    /// infinities. Fails on `-∞ + +∞`.
    pub fn trop_mul(&self, other: &Self) -> Result<Self> {
        use ExtScalar::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (NegInf, PosInf) | (PosInf, NegInf) => Err(Error::UndefinedInfinitySum),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
        }
    }

    /// `self + q` for a finite `q`; never fails.
    pub fn add_rational(&self, q: &BigRational) -> Self {
        match self {
            ExtScalar::Finite(a) => ExtScalar::Finite(a + q),
            other => other.clone(),
        }
    }

    /// `(a + b) / 2` for finite `a`, `b`.
    pub fn midpoint(a: &BigRational, b: &BigRational) -> BigRational {
        (a + b) / BigRational::from_integer(BigInt::from(2))
    }

    /// Converts to `f64`, mapping the infinities to the IEEE infinities.
    /// Only for display and timing summaries; never used in the algorithms.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtScalar::NegInf => f64::NEG_INFINITY,
            ExtScalar::PosInf => f64::INFINITY,
            ExtScalar::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl From<i64> for ExtScalar {
    fn from(v: i64) -> Self {
        ExtScalar::int(v)
    }
}

impl From<BigRational> for ExtScalar {
    fn from(r: BigRational) -> Self {
        ExtScalar::Finite(r)
    }
}

impl std::ops::Neg for ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        match self {
            ExtScalar::NegInf => ExtScalar::PosInf,
            ExtScalar::PosInf => ExtScalar::NegInf,
            ExtScalar::Finite(r) => ExtScalar::Finite(-r),
        }
    }
}

impl std::ops::Neg for &ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        -(self.clone())
    }
}

impl PartialEq<i64> for ExtScalar {
    fn eq(&self, other: &i64) -> bool {
        match self {
            ExtScalar::Finite(r) => r.is_integer() && r.numer() == &BigInt::from(*other),
            _ => false,
        }
    }
}

impl PartialOrd<i64> for ExtScalar {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&ExtScalar::int(*other)))
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScalar::NegInf => f.write_str("-inf"),
            ExtScalar::PosInf => f.write_str("+inf"),
            ExtScalar::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            ExtScalar::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for ExtScalar {
    type Err = Error;

    /// Accepts `"-inf"`, `"+inf"`/`"inf"`, integers, and `"num/den"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "-inf" => return Ok(ExtScalar::NegInf),
            "+inf" | "inf" => return Ok(ExtScalar::PosInf),
            _ => {}
        }
        let bad = || Error::ParseScalar(s.to_string());
        let r = match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(t.parse().map_err(|_| bad())?),
        };
        Ok(ExtScalar::Finite(r))
    }
}

/// Integers that fit in `i64` serialize as JSON numbers; everything else as
/// a string (`"num/den"`, `"-inf"`, `"+inf"`, or a big integer).
impl Serialize for ExtScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if let ExtScalar::Finite(r) = self {
            if r.is_integer() {
                if let Some(v) = r.numer().to_i64() {
                    return serializer.serialize_i64(v);
                }
            }
        }
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = ExtScalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a string \"num/den\", \"-inf\" or \"+inf\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtScalar, E> {
                Ok(ExtScalar::int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtScalar, E> {
                Ok(ExtScalar::Finite(BigRational::from_integer(BigInt::from(v))))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtScalar, E> {
                // Accept floats only when they are exact integers.
                if v.is_finite() && v.fract() == 0.0 && v.abs() < 9.0e15 {
                    Ok(ExtScalar::int(v as i64))
                } else {
                    Err(E::custom(format!(
                        "non-integer number {v}; write rationals as \"num/den\""
                    )))
                }
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtScalar, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}
