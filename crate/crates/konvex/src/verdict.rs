//! Check outcomes with witnesses and margins.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Outcome of a certifier or theorem-suite condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictStatus {
    Certified,
    Refuted,
    Inconclusive,
}

/// Smallest slack observed while checking. Exact (non-sampled) certificates
/// record `+∞`, serialized as the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Margin(pub f64);

impl Margin {
    pub const EXACT: Margin = Margin(f64::INFINITY);
}

impl Serialize for Margin {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            serializer.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            serializer.serialize_str("-inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Margin {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Margin;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a number or \"inf\"/\"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Margin, E> {
                Ok(Margin(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Margin, E> {
                Ok(Margin(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Margin, E> {
                Ok(Margin(v as f64))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Margin, E> {
                match s {
                    "inf" | "+inf" => Ok(Margin(f64::INFINITY)),
                    "-inf" => Ok(Margin(f64::NEG_INFINITY)),
                    _ => Err(E::custom(format!("unexpected string {s:?}"))),
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Kind of a segment-shaped witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SegmentKind {
    /// The function is affine on the segment at working precision.
    AffineSegment,
    /// A strict inequality failed on the segment.
    StrictnessFail,
    /// A subgradient inequality held with equality.
    SubgradientEquality,
}

/// A segment on which a strictness claim fails, with the sampled values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentWitness {
    pub x0: Vec<f64>,
    pub x1: Vec<f64>,
    pub kind: SegmentKind,
    /// Function values at equally spaced points of `[x0, x1]`.
    pub values: Vec<f64>,
}

/// Second-derivative profile along a segment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderProfile {
    /// Sample parameters in `[0, 1]`.
    pub ts: Vec<f64>,
    /// Second derivative (or Hessian quadratic form) at each sample.
    pub values: Vec<f64>,
    /// Fraction of samples strictly positive beyond the margin.
    pub fraction_positive: f64,
}

/// Structured payload carried by every refutation; re-verifiable by
/// re-evaluating the named points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A convexity-inequality triple: `f(λx+(1-λ)y)` vs `λf(x)+(1-λ)f(y)`.
    ConvexityTriple {
        x: Vec<f64>,
        y: Vec<f64>,
        lambda: f64,
        mixed_value: f64,
        chord_value: f64,
    },
    Segment(SegmentWitness),
    /// A pair of graph points with their inner product `⟨Δx, Δv⟩`.
    GraphPair {
        x0: Vec<f64>,
        v0: Vec<f64>,
        x1: Vec<f64>,
        v1: Vec<f64>,
        inner_product: f64,
    },
    /// An equality pair whose crossed pairs are missing from the graph.
    CrossingFailure {
        x0: Vec<f64>,
        v0: Vec<f64>,
        x1: Vec<f64>,
        v1: Vec<f64>,
        missing_x: Vec<f64>,
        missing_v: Vec<f64>,
    },
    /// A pair of points with their images under a map.
    MapPair {
        x: Vec<f64>,
        y: Vec<f64>,
        map_x: Vec<f64>,
        map_y: Vec<f64>,
    },
    /// A subinterval on which the second derivative vanishes at every
    /// grid point.
    FlatPatch {
        lo: f64,
        hi: f64,
        depth: u32,
        values: Vec<f64>,
    },
    SecondOrder(SecondOrderProfile),
    /// A subgradient inequality that failed to be strict.
    SubgradientPair {
        x0: Vec<f64>,
        v: Vec<f64>,
        x1: Vec<f64>,
        slack: f64,
    },
    /// An algebraic identity whose two sides disagree at the given inputs.
    Identity {
        inputs: Vec<f64>,
        lhs: f64,
        rhs: f64,
    },
    /// Distinct minimizers found for one tilt.
    MultipleMinimizers {
        tilt: Vec<f64>,
        minimizers: Vec<Vec<f64>>,
    },
    /// A point where a set-valued oracle returned two separated values.
    Multivalued {
        x: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
    Note {
        detail: String,
    },
}

/// Outcome of a check: status, optional witness, sampling effort, and the
/// smallest slack observed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub samples_used: u64,
    pub margin: Margin,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Verdict {
    /// Certificate from exact (non-sampled) reasoning.
    pub fn certified_exact() -> Self {
        Verdict {
            status: VerdictStatus::Certified,
            witness: None,
            samples_used: 0,
            margin: Margin::EXACT,
            reason: None,
        }
    }

    pub fn certified_sampled(samples_used: u64, margin: f64) -> Self {
        Verdict {
            status: VerdictStatus::Certified,
            witness: None,
            samples_used,
            margin: Margin(margin),
            reason: None,
        }
    }

    pub fn refuted(witness: Witness, samples_used: u64, margin: f64) -> Self {
        Verdict {
            status: VerdictStatus::Refuted,
            witness: Some(witness),
            samples_used,
            margin: Margin(margin),
            reason: None,
        }
    }

    pub fn inconclusive(reason: impl Into<String>, samples_used: u64, margin: f64) -> Self {
        Verdict {
            status: VerdictStatus::Inconclusive,
            witness: None,
            samples_used,
            margin: Margin(margin),
            reason: Some(reason.into()),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.status == VerdictStatus::Certified
    }

    pub fn is_refuted(&self) -> bool {
        self.status == VerdictStatus::Refuted
    }

    pub fn is_inconclusive(&self) -> bool {
        self.status == VerdictStatus::Inconclusive
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            VerdictStatus::Certified => {
                if self.margin == Margin::EXACT {
                    write!(f, "CERTIFIED (exact)")
                } else {
                    write!(
                        f,
                        "CERTIFIED (sampled, n={}, margin={:.3e})",
                        self.samples_used, self.margin.0
                    )
                }
            }
            VerdictStatus::Refuted => write!(f, "REFUTED (margin={:.3e})", self.margin.0),
            VerdictStatus::Inconclusive => write!(
                f,
                "INCONCLUSIVE ({})",
                self.reason.as_deref().unwrap_or("no reason recorded")
            ),
        }
    }
}
