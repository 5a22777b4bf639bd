//! Exact-rational mode for the piecewise-linear class.
//!
//! Doubles that enter a [`crate::pl::PlFunction`] are dyadic rationals, so
//! the whole representation converts losslessly; evaluation and
//! conjugation over `BigRational` are then exact, making round-trip
//! properties (biconjugation in particular) checkable with equality
//! instead of tolerances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::pl::{PlFunction, Slope};

/// Tail slope over the rationals; sentinels mean `+∞` beyond the
/// outermost breakpoint, exactly as in the double-precision representation.
#[derive(Clone, Debug, PartialEq)]
pub enum RatSlope {
    NegInf,
    Finite(BigRational),
    PosInf,
}

/// A proper, lsc, convex piecewise-linear function with exact rational
/// coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPl {
    breakpoints: Vec<BigRational>,
    values: Vec<BigRational>,
    left_tail: RatSlope,
    right_tail: RatSlope,
}

fn rat(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite double converts exactly")
}

impl RationalPl {
    /// Lossless conversion from the double-precision representation.
    pub fn from_pl(f: &PlFunction) -> Self {
        RationalPl {
            breakpoints: f.breakpoints().iter().map(|&b| rat(b)).collect(),
            values: f.values().iter().map(|&v| rat(v)).collect(),
            left_tail: match f.left_tail() {
                Slope::NegInf => RatSlope::NegInf,
                Slope::Finite(s) => RatSlope::Finite(rat(s)),
                Slope::PosInf => unreachable!("left tail is never +inf"),
            },
            right_tail: match f.right_tail() {
                Slope::NegInf => unreachable!("right tail is never -inf"),
                Slope::Finite(s) => RatSlope::Finite(rat(s)),
                Slope::PosInf => RatSlope::PosInf,
            },
        }
    }

    pub fn breakpoints(&self) -> &[BigRational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Exact evaluation; `None` encodes `+∞`.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let b = &self.breakpoints;
        let m = b.len() - 1;
        if *x < b[0] {
            return match &self.left_tail {
                RatSlope::Finite(s) => Some(&self.values[0] + s * (x - &b[0])),
                _ => None,
            };
        }
        if *x > b[m] {
            return match &self.right_tail {
                RatSlope::Finite(s) => Some(&self.values[m] + s * (x - &b[m])),
                _ => None,
            };
        }
        let i = b.partition_point(|bp| bp <= x);
        if i == 0 || *x == b[i - 1] {
            return Some(self.values[i - 1].clone());
        }
        let (x0, x1) = (&b[i - 1], &b[i]);
        let t = (x - x0) / (x1 - x0);
        Some(&self.values[i - 1] + &t * (&self.values[i] - &self.values[i - 1]))
    }

    fn secants(&self) -> Vec<BigRational> {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| (&v[1] - &v[0]) / (&x[1] - &x[0]))
            .collect()
    }

    /// Exact Fenchel conjugate, mirroring the double-precision algorithm:
    /// dual breakpoints are the distinct slopes, dual values are
    /// `s·x − f(x)` at the first witnessing breakpoint, and the tails swap
    /// between finite and sentinel as the domain/slope ranges dualize.
    pub fn conjugate(&self) -> RationalPl {
        let b = &self.breakpoints;
        let v = &self.values;
        let secants = self.secants();
        let mut events: Vec<(BigRational, usize)> = Vec::new();
        if let RatSlope::Finite(s) = &self.left_tail {
            events.push((s.clone(), 0));
        }
        for (i, s) in secants.iter().enumerate() {
            events.push((s.clone(), i));
        }
        if let RatSlope::Finite(s) = &self.right_tail {
            events.push((s.clone(), b.len() - 1));
        }
        let left = match &self.left_tail {
            RatSlope::Finite(_) => RatSlope::NegInf,
            _ => RatSlope::Finite(b[0].clone()),
        };
        let right = match &self.right_tail {
            RatSlope::Finite(_) => RatSlope::PosInf,
            _ => RatSlope::Finite(b[b.len() - 1].clone()),
        };
        let mut dual_b: Vec<BigRational> = Vec::new();
        let mut dual_v: Vec<BigRational> = Vec::new();
        for (s, i) in events {
            if let Some(last) = dual_b.last() {
                if s <= *last {
                    continue;
                }
            }
            dual_v.push(&s * &b[i] - &v[i]);
            dual_b.push(s);
        }
        if dual_b.is_empty() {
            return RationalPl {
                breakpoints: vec![BigRational::zero()],
                values: vec![-&v[0]],
                left_tail: left,
                right_tail: right,
            };
        }
        RationalPl {
            breakpoints: dual_b,
            values: dual_v,
            left_tail: left,
            right_tail: right,
        }
    }
}

/// Convenience: the rational value of an integer.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
