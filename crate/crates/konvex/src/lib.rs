//! Computational convex analysis on exact and sampled representations.
//!
//! The crate has two layers.  The exact layer works on the line: proper,
//! lower-semicontinuous, convex piecewise-linear functions
//! ([`PlFunction`]) and maximal monotone graphs in the plane
//! ([`MonotonePolyline`]) support a closed-form Fenchel conjugate, Moreau
//! envelope, proximal mapping, proximal average, and tilt map.  The sampled
//! layer works in `n` dimensions on oracle-defined convex functions
//! ([`BlackBoxConvex`]) and set-valued operators, where properties are
//! certified, refuted, or left inconclusive by seeded sampling with
//! explicit margins ([`Verdict`]).
//!
//! On top of both layers, [`certify`] and [`monotone`] turn the classical
//! equivalences between strict convexity, strict monotonicity of the
//! subdifferential, strict nonexpansiveness of resolvents and proximal
//! mappings, and strict convexity of Moreau envelopes into executable,
//! falsifiable suites; [`gallery`] supplies closed-form fixtures with
//! analytically known labels, including the standard counterexamples that
//! separate the notions.

// `!(x > 0.0)` is used deliberately for parameter guards: unlike
// `x <= 0.0`, it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blackbox;
pub mod calculus;
pub mod certify;
pub mod ext;
pub mod gallery;
pub mod jobs;
pub mod monotone;
pub mod pl;
pub mod polyline;
pub mod rational;
pub mod tol;
pub mod verdict;

pub use blackbox::{BlackBoxConvex, BoxRegion, DomainHint};
pub use ext::ExtReal;
pub use pl::{Interval, PlFunction, Slope};
pub use polyline::MonotonePolyline;
pub use tol::Tolerance;
pub use verdict::{Verdict, VerdictStatus, Witness};
