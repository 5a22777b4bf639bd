//! Oracle-defined convex functions in `n` dimensions and seeded sampling.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ext::ExtReal;
use crate::tol::Tolerance;
use crate::verdict::{Verdict, Witness};

pub type EvalFn = Arc<dyn Fn(&[f64]) -> ExtReal + Send + Sync>;
pub type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
/// Returns a finite (possibly empty) set of vectors at a point: subgradient
/// samples, operator values, or argmin candidates.
pub type SetFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;
pub type PredicateFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("the sampling region yielded no usable points")]
    EmptySampleRegion,
    #[error("region dimension {0} does not match oracle dimension {1}")]
    DimensionMismatch(usize, usize),
}

/// One axis of a box region; open flags record whether the endpoint itself
/// belongs to the region (boundary faces are only probed when closed).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AxisBound {
    pub lo: f64,
    pub hi: f64,
    #[serde(default)]
    pub lo_open: bool,
    #[serde(default)]
    pub hi_open: bool,
}

impl AxisBound {
    pub fn closed(lo: f64, hi: f64) -> Self {
        AxisBound { lo, hi, lo_open: false, hi_open: false }
    }
}

/// An axis-aligned box used as a sampling region.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoxRegion {
    pub bounds: Vec<AxisBound>,
}

impl BoxRegion {
    pub fn closed(bounds: &[(f64, f64)]) -> Self {
        BoxRegion {
            bounds: bounds.iter().map(|&(lo, hi)| AxisBound::closed(lo, hi)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn diameter(&self) -> f64 {
        self.bounds
            .iter()
            .map(|b| (b.hi - b.lo).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && self.bounds.iter().zip(x).all(|(b, &xi)| {
                let lo_ok = if b.lo_open { xi > b.lo } else { xi >= b.lo };
                let hi_ok = if b.hi_open { xi < b.hi } else { xi <= b.hi };
                lo_ok && hi_ok
            })
    }

    /// Clamps a point into the box, staying a hair inside open faces.
    pub fn clamp(&self, x: &mut [f64]) {
        for (b, xi) in self.bounds.iter().zip(x.iter_mut()) {
            let w = (b.hi - b.lo).max(f64::MIN_POSITIVE);
            let lo = if b.lo_open { b.lo + 1e-9 * w } else { b.lo };
            let hi = if b.hi_open { b.hi - 1e-9 * w } else { b.hi };
            *xi = xi.clamp(lo, hi);
        }
    }

    /// The corner points of the box; open endpoints are inset by a
    /// thousandth of the axis width so corners stay inside the region.
    pub fn corners(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let mut out = Vec::with_capacity(1 << d.min(16));
        for mask in 0u32..(1 << d.min(16)) {
            let p: Vec<f64> = self
                .bounds
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let w = b.hi - b.lo;
                    if mask >> i & 1 == 0 {
                        if b.lo_open { b.lo + 1e-3 * w } else { b.lo }
                    } else if b.hi_open {
                        b.hi - 1e-3 * w
                    } else {
                        b.hi
                    }
                })
                .collect();
            out.push(p);
        }
        out
    }
}

/// Deterministic sampler over a box region, keyed by a seed.
///
/// Points come out in three phases so that boundary-dependent refutations
/// are found deterministically: first the box corners, then points with
/// some coordinates snapped to closed faces, then interior points.
pub struct RegionSampler {
    region: BoxRegion,
    rng: ChaCha8Rng,
    corner_queue: Vec<Vec<f64>>,
    emitted: usize,
}

impl RegionSampler {
    pub fn new(region: &BoxRegion, seed: u64) -> Self {
        let mut corner_queue = region.corners();
        corner_queue.reverse(); // pop() yields them in order
        RegionSampler {
            region: region.clone(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            corner_queue,
            emitted: 0,
        }
    }

    /// Uniform point of the box (no snapping).
    pub fn interior_point(&mut self) -> Vec<f64> {
        self.region
            .bounds
            .iter()
            .map(|b| {
                if b.hi > b.lo {
                    self.rng.random_range(b.lo..b.hi)
                } else {
                    b.lo
                }
            })
            .collect()
    }

    /// Next point in the corner/faces/interior schedule.
    pub fn point(&mut self) -> Vec<f64> {
        self.emitted += 1;
        if let Some(c) = self.corner_queue.pop() {
            return c;
        }
        let mut p = self.interior_point();
        // Every fourth point snaps each coordinate to a closed face with
        // probability 1/4, so boundary segments are hit regularly.
        if self.emitted.is_multiple_of(4) {
            for (b, xi) in self.region.bounds.iter().zip(p.iter_mut()) {
                let r: f64 = self.rng.random_range(0.0..1.0);
                if r < 0.125 && !b.lo_open {
                    *xi = b.lo;
                } else if r > 0.875 && !b.hi_open {
                    *xi = b.hi;
                }
            }
        }
        p
    }

    /// A pair of points separated by at least `1e-4` of the box diameter
    /// (closer pairs add no information at the working margins).
    pub fn pair(&mut self) -> (Vec<f64>, Vec<f64>) {
        let min_sep = 1e-4 * self.region.diameter().max(1e-300);
        loop {
            let a = self.point();
            let b = self.point();
            if dist(&a, &b) >= min_sep {
                return (a, b);
            }
        }
    }

    /// Mixing parameter: alternates `1/2` with uniform draws from `(0,1)`.
    pub fn mix_lambda(&mut self, index: usize) -> f64 {
        if index.is_multiple_of(2) {
            0.5
        } else {
            // Keep away from the endpoints so the mixture is a genuine
            // interior point.
            self.rng.random_range(0.001..0.999)
        }
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn mix(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect()
}

/// Description of an effective domain, used to pick sampling regions.
#[derive(Clone)]
pub enum DomainHint {
    /// The whole space.
    All,
    /// An axis-aligned box (faces marked open where the domain is open).
    Box(BoxRegion),
    /// A membership predicate; sampling falls back to rejection inside a
    /// caller-supplied or default box.
    Predicate(PredicateFn),
}

/// A convex function on `ℝⁿ` given by oracles.
///
/// Construction does not verify convexity: the invariants are checked by
/// sampling (`midpoint_convexity_check`, gallery validation tests).
#[derive(Clone)]
pub struct BlackBoxConvex {
    dim: usize,
    eval: EvalFn,
    grad: Option<GradFn>,
    subgrad_sample: Option<SetFn>,
    domain_hint: DomainHint,
    subdiff_domain_hint: Option<BoxRegion>,
}

impl BlackBoxConvex {
    pub fn new(dim: usize, eval: EvalFn) -> Self {
        BlackBoxConvex {
            dim,
            eval,
            grad: None,
            subgrad_sample: None,
            domain_hint: DomainHint::All,
            subdiff_domain_hint: None,
        }
    }

    pub fn with_grad(mut self, grad: GradFn) -> Self {
        self.grad = Some(grad);
        self
    }

    pub fn with_subgrad_sample(mut self, s: SetFn) -> Self {
        self.subgrad_sample = Some(s);
        self
    }

    pub fn with_domain(mut self, hint: DomainHint) -> Self {
        self.domain_hint = hint;
        self
    }

    pub fn with_subdiff_domain(mut self, region: BoxRegion) -> Self {
        self.subdiff_domain_hint = Some(region);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> ExtReal {
        debug_assert_eq!(x.len(), self.dim);
        (self.eval)(x)
    }

    /// The gradient oracle, valid on the declared region.
    pub fn grad(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.grad.as_ref().map(|g| g(x))
    }

    pub fn has_grad(&self) -> bool {
        self.grad.is_some()
    }

    /// Subgradient samples at `x`: the gradient when only that is known.
    pub fn subgradients(&self, x: &[f64]) -> Vec<Vec<f64>> {
        if let Some(s) = &self.subgrad_sample {
            s(x)
        } else if let Some(g) = &self.grad {
            vec![g(x)]
        } else {
            Vec::new()
        }
    }

    pub fn domain_hint(&self) -> &DomainHint {
        &self.domain_hint
    }

    pub fn subdiff_domain_hint(&self) -> Option<&BoxRegion> {
        self.subdiff_domain_hint.as_ref()
    }

    /// A box to sample from, derived from the domain hint.
    pub fn sampling_box(&self) -> BoxRegion {
        match &self.domain_hint {
            DomainHint::Box(b) => b.clone(),
            _ => BoxRegion::closed(&vec![(-10.0, 10.0); self.dim]),
        }
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        match &self.domain_hint {
            DomainHint::All => true,
            DomainHint::Box(b) => b.contains(x),
            DomainHint::Predicate(p) => p(x),
        }
    }

    /// Draws a point of the domain from the sampler, rejecting at most
    /// `limit` candidates.
    fn domain_point(&self, sampler: &mut RegionSampler, limit: usize) -> Option<Vec<f64>> {
        for _ in 0..limit {
            let p = sampler.point();
            if self.in_domain(&p) && self.eval(&p).is_finite() {
                return Some(p);
            }
        }
        None
    }
}

/// Samples convexity-inequality triples `f((1-λ)x + λy) ≤ (1-λ)f(x) + λf(y)`
/// inside the domain. Refutations carry the violating triple, which
/// re-verifies by direct evaluation.
pub fn midpoint_convexity_check(
    f: &BlackBoxConvex,
    n_pairs: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<Verdict, SampleError> {
    assert!(n_pairs >= 1);
    let region = f.sampling_box();
    if region.dim() != f.dim() {
        return Err(SampleError::DimensionMismatch(region.dim(), f.dim()));
    }
    let mut sampler = RegionSampler::new(&region, seed);
    let mut min_slack = f64::INFINITY;
    let mut used = 0u64;
    for k in 0..n_pairs {
        let (Some(x), Some(y)) = (
            f.domain_point(&mut sampler, 64),
            f.domain_point(&mut sampler, 64),
        ) else {
            if used == 0 {
                return Err(SampleError::EmptySampleRegion);
            }
            continue;
        };
        let lambda = sampler.mix_lambda(k);
        let z = mix(&x, &y, lambda);
        let (fx, fy) = (f.eval(&x), f.eval(&y));
        let fz = f.eval(&z);
        let (Some(fx), Some(fy)) = (fx.finite_value(), fy.finite_value()) else {
            continue;
        };
        used += 1;
        let chord = (1.0 - lambda) * fx + lambda * fy;
        let Some(fz) = fz.finite_value() else {
            // f(+∞) at an interior mixture while both endpoints are finite:
            // the domain is not convex along this chord.
            return Ok(Verdict::refuted(
                Witness::ConvexityTriple {
                    x,
                    y,
                    lambda,
                    mixed_value: f64::INFINITY,
                    chord_value: chord,
                },
                used,
                f64::NEG_INFINITY,
            ));
        };
        let slack = chord - fz;
        let scale = fx.abs().max(fy.abs()).max(fz.abs());
        if slack < -tol.eq_band(scale) {
            return Ok(Verdict::refuted(
                Witness::ConvexityTriple {
                    x,
                    y,
                    lambda,
                    mixed_value: fz,
                    chord_value: chord,
                },
                used,
                slack,
            ));
        }
        min_slack = min_slack.min(slack);
    }
    if used == 0 {
        return Err(SampleError::EmptySampleRegion);
    }
    Ok(Verdict::certified_sampled(used, min_slack))
}
