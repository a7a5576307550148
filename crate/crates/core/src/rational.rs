//! Exact rates. Every rate in this crate has a power-of-two denominator of at
//! most `2^24`, so `u64` ratios never overflow in the operations used here.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serializer};

pub type Rational = Ratio<u64>;

pub fn ratio(num: u64, den: u64) -> Rational {
    Ratio::new(num, den)
}

/// `1 - 2^{-k}`.
pub fn one_minus_pow2(k: u32) -> Rational {
    Ratio::new((1u64 << k) - 1, 1u64 << k)
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Serialises as `"num/den"`.
pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational `{s}`")))
}

pub fn parse(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: u64 = n.trim().parse().ok()?;
    let d: u64 = d.trim().parse().ok()?;
    (d != 0).then(|| Ratio::new(n, d))
}

/// Optional rational, `"none"` when absent.
pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => super::serialize(r, s),
            None => s.serialize_str("none"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = String::deserialize(d)?;
        if s == "none" {
            return Ok(None);
        }
        parse(&s)
            .map(Some)
            .ok_or_else(|| serde::de::Error::custom(format!("bad rational `{s}`")))
    }
}
