//! Canonical byte encoding used for hashing and signing.
//!
//! Output is JSON with object keys sorted bytewise, no insignificant
//! whitespace, base-10 integers and floats in shortest round-trip form.
//! Non-finite floats are rejected rather than silently written as `null`;
//! every `f64` field of a hashed type must opt in through [`finite`] or
//! [`finite_opt`].

use serde::de::DeserializeOwned;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Encode `value` canonically.
pub fn canonical_encode<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    // Routing through `Value` sorts every object's keys (BTreeMap).
    let tree = serde_json::to_value(value).map_err(|e| Error::Encoding(e.to_string()))?;
    serde_json::to_vec(&tree).map_err(|e| Error::Encoding(e.to_string()))
}

/// Decode bytes that must already be in canonical form.
pub fn canonical_decode<T: DeserializeOwned + Serialize>(bytes: &[u8]) -> Result<T> {
    let value: T = serde_json::from_slice(bytes).map_err(|e| Error::Encoding(e.to_string()))?;
    if canonical_encode(&value)? != bytes {
        return Err(Error::Encoding("non-canonical encoding".into()));
    }
    Ok(value)
}

pub fn finite<S: Serializer>(value: &f64, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    if !value.is_finite() {
        return Err(serde::ser::Error::custom(format!(
            "non-finite number {value}"
        )));
    }
    serializer.serialize_f64(*value)
}

pub fn finite_opt<S: Serializer>(
    value: &Option<f64>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => finite(v, serializer),
        None => serializer.serialize_none(),
    }
}
