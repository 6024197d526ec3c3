//! Serde helpers: rationals are written as `"p"` or `"p/q"` strings and
//! big integers as decimal strings.

use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::field::{format_rational, parse_rational};

fn parse<'de, D: Deserializer<'de>>(s: &str) -> Result<BigRational, D::Error> {
    parse_rational(s).ok_or_else(|| D::Error::custom(format!("invalid rational {s:?}")))
}

pub mod rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        format_rational(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse::<D>(&s)
    }
}

pub mod rat_vec_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter().map(|r| r.iter().map(|s| parse::<D>(s)).collect()).collect()
    }
}

pub mod int {
    use num_bigint::BigInt;

    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        v.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("invalid integer {s:?}")))
    }
}
