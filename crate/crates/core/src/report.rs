//! Serde helpers for report output: big integers and rationals are written
//! as decimal strings so no JSON consumer rounds them.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::ser::SerializeSeq;
use serde::Serializer;

pub fn decimal<S: Serializer>(value: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&value.to_string())
}

pub fn decimal_vec<S: Serializer>(values: &[BigUint], ser: S) -> Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(values.len()))?;
    for v in values {
        seq.serialize_element(&v.to_string())?;
    }
    seq.end()
}

/// `num/den`, always with an explicit denominator.
pub fn rational<S: Serializer>(value: &BigRational, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&format_rational(value))
}

pub fn format_rational(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}
