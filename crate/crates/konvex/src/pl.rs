//! Proper, lsc, convex piecewise-linear functions on the line.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ext::ExtReal;
use crate::polyline::MonotonePolyline;

/// Relative slack allowed when re-validating secant monotonicity of a
/// function whose values were produced by floating-point arithmetic.
const SECANT_SLACK: f64 = 1e-12;

/// A tail slope: finite, or a sentinel meaning the function is `+∞`
/// beyond the outermost breakpoint on that side.
///
/// Sentinels are kept out of the arithmetic (they are not `±∞` floats) so
/// the conjugate construction never mixes infinities into products.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Slope {
    /// Left-tail sentinel: `f = +∞` left of the first breakpoint.
    NegInf,
    Finite(f64),
    /// Right-tail sentinel: `f = +∞` right of the last breakpoint.
    PosInf,
}

impl Slope {
    pub fn finite(self) -> Option<f64> {
        match self {
            Slope::Finite(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Slope::Finite(_))
    }

    /// The slope as a double, mapping sentinels to `±∞` for comparisons.
    pub fn as_f64(self) -> f64 {
        match self {
            Slope::NegInf => f64::NEG_INFINITY,
            Slope::Finite(s) => s,
            Slope::PosInf => f64::INFINITY,
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Slope::NegInf => serializer.serialize_str("-inf"),
            Slope::PosInf => serializer.serialize_str("inf"),
            Slope::Finite(s) => serializer.serialize_f64(*s),
        }
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Slope;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a finite number or \"inf\"/\"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Slope, E> {
                if v.is_finite() {
                    Ok(Slope::Finite(v))
                } else {
                    Err(E::custom("tail slope must be finite or a sentinel string"))
                }
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Slope, E> {
                Ok(Slope::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Slope, E> {
                Ok(Slope::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Slope, E> {
                match s {
                    "inf" | "+inf" => Ok(Slope::PosInf),
                    "-inf" => Ok(Slope::NegInf),
                    _ => Err(E::custom(format!("unexpected string {s:?}"))),
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// A closed, possibly unbounded interval `[lo, hi]`; endpoints may be `±∞`
/// (serialized as the strings `"inf"`/`"-inf"`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let end = |v: f64| -> serde_json::Value {
            if v == f64::INFINITY {
                serde_json::Value::from("inf")
            } else if v == f64::NEG_INFINITY {
                serde_json::Value::from("-inf")
            } else {
                serde_json::Value::from(v)
            }
        };
        let mut s = serializer.serialize_struct("Interval", 2)?;
        s.serialize_field("lo", &end(self.lo))?;
        s.serialize_field("hi", &end(self.hi))?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lo: serde_json::Value,
            hi: serde_json::Value,
        }
        fn end<E: de::Error>(v: &serde_json::Value) -> Result<f64, E> {
            match v {
                serde_json::Value::Number(n) => n
                    .as_f64()
                    .ok_or_else(|| E::custom("bad interval endpoint")),
                serde_json::Value::String(s) => match s.as_str() {
                    "inf" | "+inf" => Ok(f64::INFINITY),
                    "-inf" => Ok(f64::NEG_INFINITY),
                    _ => Err(E::custom(format!("unexpected endpoint {s:?}"))),
                },
                _ => Err(E::custom("bad interval endpoint")),
            }
        }
        let raw = Raw::deserialize(deserializer)?;
        Ok(Interval {
            lo: end(&raw.lo)?,
            hi: end(&raw.hi)?,
        })
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Error)]
pub enum PlError {
    #[error("breakpoints and values must be nonempty lists of equal length")]
    BadShape,
    #[error("coordinate {0} is not finite")]
    NotFinite(f64),
    #[error("breakpoints must be strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("secant slopes decrease at index {0}: {1} > {2}")]
    NotConvex(usize, f64, f64),
    #[error("tail slope {0} incompatible with adjacent secant {1}")]
    TailSlope(f64, f64),
    #[error("left tail cannot be +inf and right tail cannot be -inf")]
    BadTailSentinel,
}

/// A proper, lsc, convex piecewise-linear function on `ℝ`.
///
/// The function interpolates `values` at `breakpoints` (strictly
/// increasing) and extends linearly beyond the outermost breakpoints with
/// the tail slopes; a sentinel tail means `+∞` beyond that side. Secant
/// slopes are nondecreasing, so the induced function is in `Γ₀(ℝ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    left_tail: Slope,
    right_tail: Slope,
}

impl PlFunction {
    pub fn new(
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        left_tail: Slope,
        right_tail: Slope,
    ) -> Result<Self, PlError> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(PlError::BadShape);
        }
        for &c in breakpoints.iter().chain(values.iter()) {
            if !c.is_finite() {
                return Err(PlError::NotFinite(c));
            }
        }
        if matches!(left_tail, Slope::PosInf) || matches!(right_tail, Slope::NegInf) {
            return Err(PlError::BadTailSentinel);
        }
        for t in [left_tail, right_tail] {
            if let Slope::Finite(s) = t {
                if !s.is_finite() {
                    return Err(PlError::NotFinite(s));
                }
            }
        }
        for i in 1..breakpoints.len() {
            if !(breakpoints[i] > breakpoints[i - 1]) {
                return Err(PlError::NotIncreasing(i));
            }
        }
        let f = PlFunction {
            breakpoints,
            values,
            left_tail,
            right_tail,
        };
        let s = f.secants();
        // A secant recomputed from stored doubles is only known up to the
        // rounding of the values divided by the cell width; monotonicity
        // is enforced modulo that noise plus a small relative slack.
        let noise = |i: usize| {
            let dx = f.breakpoints[i + 1] - f.breakpoints[i];
            crate::tol::MACHINE_BAND * (f.values[i].abs() + f.values[i + 1].abs() + 1.0) / dx
        };
        let slack = |a: f64, b: f64| SECANT_SLACK * a.abs().max(b.abs()).max(1.0);
        for i in 1..s.len() {
            let allowed = slack(s[i], s[i - 1]) + noise(i) + noise(i - 1);
            if s[i] < s[i - 1] - allowed {
                return Err(PlError::NotConvex(i, s[i - 1], s[i]));
            }
        }
        if let Slope::Finite(l) = f.left_tail {
            // The first constraint to the right of the left tail: first
            // secant, or the right tail when there is a single breakpoint.
            let next = s
                .first()
                .copied()
                .or(f.right_tail.finite())
                .unwrap_or(f64::INFINITY);
            let allowed = slack(l, next) + if s.is_empty() { 0.0 } else { noise(0) };
            if l > next + allowed {
                return Err(PlError::TailSlope(l, next));
            }
        }
        if let Slope::Finite(r) = f.right_tail {
            let prev = s
                .last()
                .copied()
                .or(f.left_tail.finite())
                .unwrap_or(f64::NEG_INFINITY);
            let allowed = slack(r, prev) + if s.is_empty() { 0.0 } else { noise(s.len() - 1) };
            if r < prev - allowed {
                return Err(PlError::TailSlope(r, prev));
            }
        }
        Ok(f)
    }

    /// `f(x) = |x|`, represented with its single kink at the origin.
    pub fn abs() -> Self {
        PlFunction::new(vec![0.0], vec![0.0], Slope::Finite(-1.0), Slope::Finite(1.0)).unwrap()
    }

    /// Indicator of the interval `[lo, hi]` (zero inside, `+∞` outside).
    pub fn indicator(lo: f64, hi: f64) -> Self {
        assert!(lo < hi);
        PlFunction::new(vec![lo, hi], vec![0.0, 0.0], Slope::NegInf, Slope::PosInf).unwrap()
    }

    /// Indicator of the single point `x`, with value `value` there.
    pub fn point_indicator(x: f64, value: f64) -> Self {
        PlFunction::new(vec![x], vec![value], Slope::NegInf, Slope::PosInf).unwrap()
    }

    /// The affine function `x ↦ slope·x + intercept`.
    pub fn affine(slope: f64, intercept: f64) -> Self {
        PlFunction::new(
            vec![0.0],
            vec![intercept],
            Slope::Finite(slope),
            Slope::Finite(slope),
        )
        .unwrap()
    }

    /// Hinge `x ↦ max(0, x)`.
    pub fn hinge() -> Self {
        PlFunction::new(vec![0.0], vec![0.0], Slope::Finite(0.0), Slope::Finite(1.0)).unwrap()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn left_tail(&self) -> Slope {
        self.left_tail
    }

    pub fn right_tail(&self) -> Slope {
        self.right_tail
    }

    pub fn first_breakpoint(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn last_breakpoint(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// Secant slopes between consecutive breakpoints (empty for a single
    /// breakpoint).
    pub fn secants(&self) -> Vec<f64> {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0]))
            .collect()
    }

    /// All finite slopes in order: left tail, secants, right tail.
    pub fn finite_slopes(&self) -> Vec<f64> {
        let mut out = Vec::new();
        if let Slope::Finite(s) = self.left_tail {
            out.push(s);
        }
        out.extend(self.secants());
        if let Slope::Finite(s) = self.right_tail {
            out.push(s);
        }
        out
    }

    /// The effective domain as an interval (`±∞` ends when a tail is finite).
    pub fn domain(&self) -> Interval {
        let lo = if self.left_tail.is_finite() {
            f64::NEG_INFINITY
        } else {
            self.first_breakpoint()
        };
        let hi = if self.right_tail.is_finite() {
            f64::INFINITY
        } else {
            self.last_breakpoint()
        };
        Interval { lo, hi }
    }

    /// Whether the domain is the single point `breakpoints[0]`.
    pub fn is_domain_singleton(&self) -> bool {
        self.breakpoints.len() == 1 && !self.left_tail.is_finite() && !self.right_tail.is_finite()
    }

    /// Evaluates the function; total, returning `+∞` outside the domain.
    pub fn eval(&self, x: f64) -> ExtReal {
        let b = &self.breakpoints;
        let m = b.len() - 1;
        if x < b[0] {
            return match self.left_tail {
                Slope::Finite(s) => ExtReal::finite(self.values[0] + s * (x - b[0])),
                _ => ExtReal::PLUS_INFINITY,
            };
        }
        if x >= b[m] {
            if x == b[m] {
                return ExtReal::finite(self.values[m]);
            }
            return match self.right_tail {
                Slope::Finite(s) => ExtReal::finite(self.values[m] + s * (x - b[m])),
                _ => ExtReal::PLUS_INFINITY,
            };
        }
        // b[0] <= x < b[m]: locate the piece containing x.
        let i = b.partition_point(|&bp| bp <= x);
        let (x0, x1) = (b[i - 1], b[i]);
        let t = (x - x0) / (x1 - x0);
        ExtReal::finite(self.values[i - 1] * (1.0 - t) + self.values[i] * t)
    }

    /// Slope interval `[left slope, right slope]` at breakpoint index `i`,
    /// as doubles with `±∞` for sentinel tails.
    pub(crate) fn slope_interval_at(&self, i: usize, secants: &[f64]) -> (f64, f64) {
        let lo = if i == 0 {
            self.left_tail.as_f64()
        } else {
            secants[i - 1]
        };
        let hi = if i + 1 == self.breakpoints.len() {
            self.right_tail.as_f64()
        } else {
            secants[i]
        };
        (lo, hi)
    }

    /// The subdifferential `∂f(x)` as a closed interval; `None` when
    /// `x ∉ dom ∂f`.
    pub fn subdiff(&self, x: f64) -> Option<Interval> {
        let b = &self.breakpoints;
        if x < b[0] {
            return self.left_tail.finite().map(Interval::point);
        }
        if x > *b.last().unwrap() {
            return self.right_tail.finite().map(Interval::point);
        }
        let secants = self.secants();
        if let Ok(i) = b.binary_search_by(|bp| bp.partial_cmp(&x).unwrap()) {
            let (lo, hi) = self.slope_interval_at(i, &secants);
            return Some(Interval::new(lo, hi));
        }
        let i = b.partition_point(|&bp| bp < x);
        // strictly between b[i-1] and b[i]
        Some(Interval::point(secants[i - 1]))
    }

    /// The graph of `∂f` as a maximal monotone polyline: vertical segments
    /// at kinks spanning the slope interval, horizontal segments across
    /// affine pieces, rays covering the unbounded ends.
    pub fn subdiff_polyline(&self) -> MonotonePolyline {
        let secants = self.secants();
        let mut vertices: Vec<[f64; 2]> = Vec::new();
        for i in 0..self.breakpoints.len() {
            let (lo, hi) = self.slope_interval_at(i, &secants);
            let x = self.breakpoints[i];
            for y in [lo, hi] {
                if y.is_finite() {
                    let v = [x, y];
                    if vertices.last() != Some(&v) {
                        vertices.push(v);
                    }
                }
            }
        }
        let head = if self.left_tail.is_finite() {
            [1.0, 0.0]
        } else {
            [0.0, 1.0]
        };
        let tail = if self.right_tail.is_finite() {
            [1.0, 0.0]
        } else {
            [0.0, 1.0]
        };
        if vertices.is_empty() {
            // Indicator of a point: the graph is a full vertical line.
            vertices.push([self.breakpoints[0], 0.0]);
        }
        MonotonePolyline::new(vertices, head, tail).expect("subdifferential graph is monotone")
    }
}

impl<'de> Deserialize<'de> for PlFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            breakpoints: Vec<f64>,
            values: Vec<f64>,
            left_tail: Slope,
            right_tail: Slope,
        }
        let raw = Raw::deserialize(deserializer)?;
        PlFunction::new(raw.breakpoints, raw.values, raw.left_tail, raw.right_tail)
            .map_err(de::Error::custom)
    }
}
