//! Exact rational scalars and their `"p/q"` text encoding.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational number, always normalized (coprime, positive denominator).
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `"p/q"`, `"p"`, or `"-p/q"`. A zero denominator is rejected.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

pub fn to_f64(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn format_rat(q: &Rat) -> String {
    q.to_string()
}

pub fn floor_to_bigint(q: &Rat) -> BigInt {
    q.floor().to_integer()
}

pub fn ceil_to_bigint(q: &Rat) -> BigInt {
    q.ceil().to_integer()
}

pub fn abs(q: &Rat) -> Rat {
    q.abs()
}

pub fn max_of<'a, I: IntoIterator<Item = &'a Rat>>(it: I) -> Option<Rat> {
    it.into_iter().max().cloned()
}

pub fn min_of<'a, I: IntoIterator<Item = &'a Rat>>(it: I) -> Option<Rat> {
    it.into_iter().min().cloned()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn factorial(n: usize) -> Rat {
    (1..=n as i64).fold(Rat::one(), |acc, k| acc * int(k))
}

pub fn pow(q: &Rat, e: usize) -> Rat {
    (0..e).fold(Rat::one(), |acc, _| acc * q)
}

/// Lowest common multiple of the denominators of `v`.
pub fn common_denominator(v: &[Rat]) -> BigInt {
    use num_integer::Integer;
    v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Serde adapter for a single [`Rat`] as a `"p/q"` string (also accepts JSON integers).
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        RatRepr::deserialize(d)?.into_rat().map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod serde_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(format_rat).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        Vec::<RatRepr>::deserialize(d)?.into_iter().map(|r| r.into_rat().map_err(de::Error::custom)).collect()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Int(i64),
    Str(String),
}

impl RatRepr {
    fn into_rat(self) -> Result<Rat, Error> {
        match self {
            RatRepr::Int(i) => Ok(int(i)),
            RatRepr::Str(s) => parse_rat(&s),
        }
    }
}
