//! JSON encoding of exact integers.
//!
//! Integers of magnitude up to 2^53 - 1 are written as JSON numbers and
//! anything larger as a decimal string, so that every consumer can read them
//! without loss. Parsers accept both forms. Rationals that are not integers are
//! written as `"p/q"` strings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::lattice::LatticeVector;

const MAX_SAFE: i64 = (1 << 53) - 1;

fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) if x.abs() <= MAX_SAFE => s.serialize_i64(x),
        _ => s.serialize_str(&v.to_string()),
    }
}

struct IntVisitor;

impl<'de> Visitor<'de> for IntVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<BigInt, E> {
        Err(E::custom(format!("expected an integer, found {v}")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        BigInt::from_str(v.trim()).map_err(|_| E::custom(format!("not an integer: {v:?}")))
    }
}

/// `#[serde(with = "json::int")]` for `BigInt` fields.
pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        serialize_bigint(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

struct Int<'a>(&'a BigInt);

impl Serialize for Int<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_bigint(self.0, s)
    }
}

struct OwnedInt(BigInt);

impl<'de> Deserialize<'de> for OwnedInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(IntVisitor).map(OwnedInt)
    }
}

/// `#[serde(with = "json::int_vec")]` for `Vec<BigInt>` fields.
pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&Int(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v: Vec<OwnedInt> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|x| x.0).collect())
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        int_vec::serialize(self.coords(), s)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct VecVisitor;
        impl<'de> Visitor<'de> for VecVisitor {
            type Value = LatticeVector;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of integers")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<LatticeVector, A::Error> {
                let mut coords = Vec::new();
                while let Some(OwnedInt(x)) = seq.next_element()? {
                    coords.push(x);
                }
                Ok(LatticeVector::new(coords))
            }
        }
        d.deserialize_seq(VecVisitor)
    }
}

/// `#[serde(with = "json::rational")]` for `BigRational` fields.
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        if v.is_integer() {
            serialize_bigint(&v.to_integer(), s)
        } else {
            s.serialize_str(&format!("{}/{}", v.numer(), v.denom()))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        struct RatVisitor;
        impl<'de> Visitor<'de> for RatVisitor {
            type Value = BigRational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigRational, E> {
                Ok(BigRational::from_integer(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigRational, E> {
                Ok(BigRational::from_integer(v.into()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<BigRational, E> {
                let bad = || E::custom(format!("not a rational: {v:?}"));
                match v.split_once('/') {
                    Some((p, q)) => {
                        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
                        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
                        if q.is_negative() || q == BigInt::from(0) {
                            return Err(bad());
                        }
                        Ok(BigRational::new(p, q))
                    }
                    None => BigInt::from_str(v.trim()).map(BigRational::from_integer).map_err(|_| bad()),
                }
            }
        }
        d.deserialize_any(RatVisitor)
    }
}

/// A `BigInt` as a JSON value, following the number/string rule.
pub fn int_value(v: &BigInt) -> serde_json::Value {
    int::serialize(v, serde_json::value::Serializer).expect("integers always serialize")
}

pub fn ints_value(v: &[BigInt]) -> serde_json::Value {
    int_vec::serialize(v, serde_json::value::Serializer).expect("integers always serialize")
}

pub fn rational_value(v: &BigRational) -> serde_json::Value {
    rational::serialize(v, serde_json::value::Serializer).expect("rationals always serialize")
}

/// `#[serde(with = "json::rational_vec")]` for `Vec<BigRational>` fields.
pub mod rational_vec {
    use super::*;

    struct Rat<'a>(&'a BigRational);

    impl Serialize for Rat<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            rational::serialize(self.0, s)
        }
    }

    struct OwnedRat(BigRational);

    impl<'de> Deserialize<'de> for OwnedRat {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            rational::deserialize(d).map(OwnedRat)
        }
    }

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&Rat(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let v: Vec<OwnedRat> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|x| x.0).collect())
    }
}
