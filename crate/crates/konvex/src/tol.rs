//! Tolerance policy shared by every check in the crate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Multiple of machine epsilon below which a sampled slack is treated as an
/// exact equality (e.g. an affine chord or an isometric pair of map values)
/// rather than an unresolvably small strict inequality. Slacks between this
/// band and `strict_margin` stay inconclusive.
pub(crate) const MACHINE_BAND: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Error)]
pub enum ToleranceError {
    #[error("tolerance field {0} must be finite and strictly positive, got {1}")]
    NotPositive(&'static str, f64),
}

/// Numeric policy: equality bands, the margin a strict inequality must clear
/// to be certified, and the step used by finite-difference cross-checks.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Tolerance {
    /// Absolute equality band.
    pub eq_abs: f64,
    /// Relative equality band (scaled by the magnitude of the compared values).
    pub eq_rel: f64,
    /// Relative slack a strict inequality must exceed to be certified.
    /// Anything between the machine band and this margin is inconclusive:
    /// floating-point sampling cannot certify strictness at margin zero.
    pub strict_margin: f64,
    /// Step for central finite differences.
    pub fd_step: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eq_abs: 1e-9,
            eq_rel: 1e-9,
            strict_margin: 1e-9,
            fd_step: 1e-4,
        }
    }
}

/// Outcome of classifying one strict-inequality sample `a > b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrictSample {
    /// Slack clears the margin at the sample's natural scale.
    Pass,
    /// Slack is zero at working precision: an equality witness candidate.
    Equal,
    /// Slack is too small to certify but too large to call an equality.
    DeadZone,
    /// Slack is negative beyond the equality band: the non-strict
    /// inequality fails as well.
    Violation,
}

impl Tolerance {
    pub fn new(eq_abs: f64, eq_rel: f64, strict_margin: f64, fd_step: f64) -> Result<Self, ToleranceError> {
        for (name, v) in [
            ("eq_abs", eq_abs),
            ("eq_rel", eq_rel),
            ("strict_margin", strict_margin),
            ("fd_step", fd_step),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ToleranceError::NotPositive(name, v));
            }
        }
        Ok(Tolerance { eq_abs, eq_rel, strict_margin, fd_step })
    }

    /// Band inside which two values of magnitude `scale` count as equal.
    pub fn eq_band(&self, scale: f64) -> f64 {
        self.eq_abs + self.eq_rel * scale.abs()
    }

    /// True when `a` and `b` agree within the combined absolute/relative band.
    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.eq_band(a.abs().max(b.abs()))
    }

    /// Classifies one sample of a strict inequality `a > b`, `slack = a - b`.
    ///
    /// `scale` is the natural size of the slack and a mathematical upper
    /// bound for it (the variation of the function along the probed
    /// segment; `‖Δx‖·‖Δv‖` for graph inner products; `‖Δx‖` for
    /// nonexpansiveness slacks). The pass test is relative to it, so
    /// uniformly tiny configurations are not mistaken for equalities.
    /// `magnitude` is the size of the values whose difference produced the
    /// slack; it sets the rounding-noise floor below which a slack counts
    /// as an exact equality.
    pub fn classify_strict(&self, slack: f64, scale: f64, magnitude: f64) -> StrictSample {
        let scale = scale.abs();
        if slack < -self.eq_band(scale.max(magnitude.abs())) {
            return StrictSample::Violation;
        }
        let noise_floor = MACHINE_BAND * scale.max(magnitude.abs());
        if slack > noise_floor && scale > 0.0 && slack / scale > self.strict_margin {
            return StrictSample::Pass;
        }
        if slack.abs() <= noise_floor {
            return StrictSample::Equal;
        }
        StrictSample::DeadZone
    }

    /// Equality-pair detector for operator graphs: `|⟨Δx,Δv⟩| ≤ eq_abs·(1+‖Δx‖‖Δv‖)`.
    pub fn graph_equality(&self, inner_product: f64, xv_scale: f64) -> bool {
        inner_product.abs() <= self.eq_abs * (1.0 + xv_scale)
    }
}
