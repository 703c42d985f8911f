//! Serialization helpers shared by the JSON file formats.
//!
//! Rationals are written as `"p/q"` strings (or `"p"` when integral) so no
//! value ever passes through a float.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qlinalg::rational::{format_rational, parse_rational};
use crate::qlinalg::Rational;

/// Current version of every JSON format written by this crate.
pub const FORMAT_VERSION: u32 = 1;

/// `#[serde(with = "rational")]`
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "rational_or_inf")]`: `None` is written as `"inf"`.
pub mod rational_or_inf {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_str("inf"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let text = String::deserialize(d)?;
        if text.trim() == "inf" {
            Ok(None)
        } else {
            parse_rational(&text).map(Some).map_err(serde::de::Error::custom)
        }
    }
}

/// `#[serde(with = "rational_vec")]`
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect()
    }
}

/// Matrix as a list of rows of rational strings.
pub mod rational_rows {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        rows.iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|r| r.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

/// Parses JSON text, naming the line and column of schema violations.
pub fn from_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::validation(format!("{what}: {e} (line {}, column {})", e.line(), e.column()))
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::validation(format!("{}: {e}", path.display())))?;
    from_json(&text, &format!("{what} {}", path.display()))
}

/// Pretty JSON with a trailing newline; key order follows the struct, so the
/// output is byte-for-byte deterministic.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn check_version(found: u32, what: &str) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::validation(format!(
            "{what}: unsupported format_version {found} (expected {FORMAT_VERSION})"
        )));
    }
    Ok(())
}
