//! JSON plumbing shared by all payload types.
//!
//! Rationals travel as strings `"p/q"` (or `"p"`); plain JSON integers are
//! accepted on input as a convenience.

use std::fmt;

use serde::de::{self, DeserializeOwned, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{fmt_q, parse_q, Matrix, Q};

/// A rational in its wire form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Q);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\", \"p\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
                parse_q(v).map(Rat).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
                Ok(Rat(crate::linalg::q(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
                parse_q(&v.to_string()).map(Rat).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

pub fn to_rats(v: &[Q]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

pub fn from_rats(v: Vec<Rat>) -> Vec<Q> {
    v.into_iter().map(|r| r.0).collect()
}

pub fn matrix_to_json(m: &Matrix) -> Vec<Vec<Rat>> {
    (0..m.rows()).map(|i| to_rats(m.row(i))).collect()
}

/// Reads a `rows x cols` matrix, naming `what` in dimension errors.
pub fn matrix_from_json(rows: Vec<Vec<Rat>>, n_rows: usize, n_cols: usize, what: &str) -> Result<Matrix> {
    if rows.len() != n_rows {
        return Err(Error::dim(format!("{what}: expected {n_rows} rows, found {}", rows.len())));
    }
    let rows: Vec<Vec<Q>> = rows.into_iter().map(from_rats).collect();
    Matrix::from_rows(rows, n_cols).map_err(|e| Error::dim(format!("{what}: {e}")))
}

/// Decodes `text`, reporting the line and the field path on failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse(format!("line {}, column {}, field `{path}`: {inner}", inner.line(), inner.column()))
    })
}

/// Pretty JSON with a trailing newline.
pub fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable payload");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};

    #[test]
    fn rat_round_trip() {
        let v: Vec<Rat> = serde_json::from_str(r#"["1/2", 3, "-4", "6/4"]"#).unwrap();
        assert_eq!(from_rats(v.clone()), vec![qf(1, 2), q(3), q(-4), qf(3, 2)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/2","3","-4","3/2"]"#);
    }

    #[test]
    fn parse_errors_name_the_field() {
        #[derive(Deserialize, Debug)]
        #[allow(dead_code)]
        struct P {
            dim: usize,
            gram: Vec<Vec<Rat>>,
        }
        let err = parse::<P>("{\n \"dim\": 2,\n \"gram\": [[\"1\", \"x\"]]\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("gram[0][1]"), "{msg}");
    }
}
