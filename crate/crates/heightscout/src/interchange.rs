//! Decimal-string codecs for the JSON interchange formats.
//!
//! Every arbitrary-precision value crosses the wire as a decimal string
//! (rationals as `"p/q"` or `"p"`), so values of any size round-trip
//! bit-exactly through JSON.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim())
        .map_err(|e| Error::Json(format!("invalid integer string {s:?}: {e}")))
}

pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_bigint(s)?)),
        Some((num, den)) => {
            let num = parse_bigint(num)?;
            let den = parse_bigint(den)?;
            if den.is_zero() {
                return Err(Error::Json(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

pub fn ratio_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `#[serde(with = "...")]` adapter for a single integer.
pub mod bigint_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigInt, D::Error> {
        let raw = String::deserialize(d)?;
        parse_bigint(&raw).map_err(serde::de::Error::custom)
    }
}

/// Adapter for a vector of integers.
pub mod bigint_vec_string {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_bigint(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Adapter for a single rational.
pub mod ratio_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&ratio_to_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigRational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_ratio(&raw).map_err(serde::de::Error::custom)
    }
}

/// Adapter for a vector of rationals.
pub mod ratio_vec_string {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &[BigRational],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&ratio_to_string(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_ratio(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
