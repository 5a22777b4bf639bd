//! Extended-real arithmetic for proper functions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An extended-real value: a finite `f64` or `+∞`.
///
/// `-∞` and NaN are unrepresentable, so every function value in the crate
/// is proper and comparisons are total. Addition saturates at `+∞`.
#[derive(Clone, Copy, PartialEq)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const PLUS_INFINITY: ExtReal = ExtReal(f64::INFINITY);

    /// Wraps a finite value.
    ///
    /// # Panics
    /// If `v` is NaN or infinite.
    pub fn finite(v: f64) -> Self {
        assert!(v.is_finite(), "ExtReal::finite: {v} is not finite");
        ExtReal(v)
    }

    /// Wraps a finite value or `+∞`.
    ///
    /// # Panics
    /// If `v` is NaN or `-∞`.
    pub fn new(v: f64) -> Self {
        assert!(
            !v.is_nan() && v != f64::NEG_INFINITY,
            "ExtReal: {v} is not representable"
        );
        ExtReal(v)
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }

    /// Underlying double; `+∞` maps to `f64::INFINITY`.
    pub fn raw(self) -> f64 {
        self.0
    }

    /// The finite value, if any.
    pub fn finite_value(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        // IEEE: finite + inf = inf, inf + inf = inf. NaN cannot arise
        // because -inf is excluded by the invariant.
        ExtReal(self.0 + rhs.0)
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        // total_cmp is a total order; NaN is excluded by construction.
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "+inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtReal;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a finite number or the string \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
                if v.is_finite() {
                    Ok(ExtReal(v))
                } else {
                    Err(E::custom("non-finite number"))
                }
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<ExtReal, E> {
                match s {
                    "inf" | "+inf" => Ok(ExtReal::PLUS_INFINITY),
                    _ => Err(E::custom(format!("unexpected string {s:?}"))),
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}
