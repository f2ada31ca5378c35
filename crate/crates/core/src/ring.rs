//! Exact scalar rings: integers, rationals and prime fields.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ring {
    Integer,
    Rational,
    Prime(u64),
}

impl Ring {
    pub fn parse(s: &str) -> Result<Ring> {
        match s.trim() {
            "Z" | "int" | "integer" | "integers" => Ok(Ring::Integer),
            "Q" | "rat" | "rational" | "rationals" => Ok(Ring::Rational),
            t => {
                let p = t
                    .strip_prefix("F")
                    .or_else(|| t.strip_prefix("GF"))
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Config(format!("unknown ring `{t}`")))?;
                if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
                    return Err(Error::Config(format!("{p} is not prime")));
                }
                Ok(Ring::Prime(p))
            }
        }
    }

    /// Brings a value into canonical form; fails for fractions over the integers
    /// or denominators divisible by `p`.
    pub fn elem(&self, v: BigRational) -> Result<BigRational> {
        match self {
            Ring::Rational => Ok(v),
            Ring::Integer => {
                if v.is_integer() {
                    Ok(v)
                } else {
                    Err(Error::Invalid(format!("{v} is not an integer")))
                }
            }
            Ring::Prime(p) => {
                let p = BigInt::from(*p);
                let num = v.numer().clone();
                let den = v.denom().clone();
                let den_m = ((den % &p) + &p) % &p;
                if den_m.is_zero() {
                    return Err(Error::Invalid(format!("denominator divisible by {p}")));
                }
                let inv = den_m.modpow(&(&p - 2), &p);
                let r = (((num % &p) + &p) % &p * inv) % &p;
                Ok(BigRational::from_integer(r))
            }
        }
    }

    pub fn from_i64(&self, v: i64) -> BigRational {
        self.norm(BigRational::from_integer(BigInt::from(v)))
    }

    /// Canonical form of a value already known to lie in the ring.
    pub fn norm(&self, v: BigRational) -> BigRational {
        self.elem(v).expect("value in ring")
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.norm(a + b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.norm(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.norm(-a)
    }

    pub fn one(&self) -> BigRational {
        BigRational::one()
    }

    pub fn parse_scalar(&self, s: &str) -> Result<BigRational> {
        let v = match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| Error::Invalid(format!("bad scalar `{s}`")))?;
                let d: BigInt = d.trim().parse().map_err(|_| Error::Invalid(format!("bad scalar `{s}`")))?;
                if d.is_zero() {
                    return Err(Error::Invalid("zero denominator".into()));
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(s.trim().parse().map_err(|_| Error::Invalid(format!("bad scalar `{s}`")))?),
        };
        self.elem(v)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integer => write!(f, "Z"),
            Ring::Rational => write!(f, "Q"),
            Ring::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// A scalar tagged with its ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElem {
    pub ring: Ring,
    pub value: BigRational,
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_scalar(&self.value, f)
    }
}

pub fn fmt_scalar(v: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v.is_integer() {
        write!(f, "{}", v.numer())
    } else {
        write!(f, "{}/{}", v.numer(), v.denom())
    }
}

pub fn scalar_string(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn is_negative(v: &BigRational) -> bool {
    v.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_reduces() {
        let r = Ring::Prime(5);
        assert_eq!(r.from_i64(-1), r.from_i64(4));
        assert_eq!(r.parse_scalar("1/2").unwrap(), r.from_i64(3));
        assert!(Ring::Integer.parse_scalar("1/2").is_err());
        assert!(Ring::parse("F4").is_err());
        assert_eq!(Ring::parse("F7").unwrap(), Ring::Prime(7));
    }
}
