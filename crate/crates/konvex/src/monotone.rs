//! Set-valued operators and the monotonicity taxonomy: monotone, strictly
//! monotone, almost strictly monotone, paramonotone, together with
//! resolvents and nonexpansiveness checks.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::blackbox::{dist, dot, norm, BoxRegion, RegionSampler, SetFn};
use crate::polyline::MonotonePolyline;
use crate::tol::{StrictSample, Tolerance};
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Error)]
pub enum MonotoneError {
    #[error("graph contains duplicate pair at index {0}")]
    DuplicatePair(usize),
    #[error("pair {0} has wrong dimension")]
    DimensionMismatch(usize),
    #[error("operator is not monotone; paramonotonicity is undefined")]
    NotMonotone(Box<Verdict>),
    #[error("Id + A is singular (determinant {0:e})")]
    SingularMatrix(f64),
}

/// A finite sample of a set-valued operator's graph: `(x, v)` pairs with
/// `v ∈ Ax`. Several pairs may share `x` (multivaluedness).
#[derive(Clone, Debug, Serialize)]
pub struct FiniteOperatorGraph {
    dim: usize,
    pairs: Vec<(Vec<f64>, Vec<f64>)>,
}

impl FiniteOperatorGraph {
    pub fn new(dim: usize, pairs: Vec<(Vec<f64>, Vec<f64>)>) -> Result<Self, MonotoneError> {
        for (i, (x, v)) in pairs.iter().enumerate() {
            if x.len() != dim || v.len() != dim {
                return Err(MonotoneError::DimensionMismatch(i));
            }
            if pairs[..i].iter().any(|(px, pv)| px == x && pv == v) {
                return Err(MonotoneError::DuplicatePair(i));
            }
        }
        Ok(FiniteOperatorGraph { dim, pairs })
    }

    /// 1-D convenience constructor.
    pub fn from_scalar_pairs(pairs: &[(f64, f64)]) -> Self {
        FiniteOperatorGraph::new(
            1,
            pairs.iter().map(|&(x, v)| (vec![x], vec![v])).collect(),
        )
        .expect("scalar pairs are well-formed")
    }

    /// Samples a deterministic single-valued map on the given points.
    pub fn from_map(dim: usize, points: &[Vec<f64>], map: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let pairs = points.iter().map(|p| (p.clone(), map(p))).collect();
        FiniteOperatorGraph::new(dim, pairs).expect("map samples are well-formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[(Vec<f64>, Vec<f64>)] {
        &self.pairs
    }

    /// Distinct domain points (exact deduplication).
    pub fn domain_points(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for (x, _) in &self.pairs {
            if !out.contains(x) {
                out.push(x.clone());
            }
        }
        out
    }

    /// Distinct range points (exact deduplication).
    pub fn range_points(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for (_, v) in &self.pairs {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }

    /// Whether `(x, v)` belongs to the sampled graph within the equality band.
    pub fn contains(&self, x: &[f64], v: &[f64], tol: &Tolerance) -> bool {
        self.pairs.iter().any(|(px, pv)| {
            dist(px, x) <= tol.eq_band(norm(x)) && dist(pv, v) <= tol.eq_band(norm(v))
        })
    }
}

/// A set-valued operator oracle: `apply(x)` returns the (finite, possibly
/// empty) set `Ax`. Deterministic by contract.
#[derive(Clone)]
pub struct OperatorOracle {
    pub dim: usize,
    pub apply: SetFn,
}

impl OperatorOracle {
    pub fn new(dim: usize, apply: SetFn) -> Self {
        OperatorOracle { dim, apply }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (self.apply)(x)
    }
}

/// A single-valued, possibly partial point map (e.g. a resolvent whose
/// domain is the range of `Id + A`).
pub type PointMap = Arc<dyn Fn(&[f64]) -> Option<Vec<f64>> + Send + Sync>;

fn graph_pair_witness(a: &(Vec<f64>, Vec<f64>), b: &(Vec<f64>, Vec<f64>), ip: f64) -> Witness {
    Witness::GraphPair {
        x0: a.0.clone(),
        v0: a.1.clone(),
        x1: b.0.clone(),
        v1: b.1.clone(),
        inner_product: ip,
    }
}

/// Returns `(⟨Δx, Δv⟩, ‖Δx‖·‖Δv‖, point-magnitude)` for a pair of graph
/// samples; the last entry scales the rounding-noise floor.
fn pair_inner_product(a: &(Vec<f64>, Vec<f64>), b: &(Vec<f64>, Vec<f64>)) -> (f64, f64, f64) {
    let dx: Vec<f64> = a.0.iter().zip(&b.0).map(|(p, q)| p - q).collect();
    let dv: Vec<f64> = a.1.iter().zip(&b.1).map(|(p, q)| p - q).collect();
    let mag = (norm(&a.0) + norm(&b.0) + 1.0) * (norm(&a.1) + norm(&b.1) + 1.0);
    (dot(&dx, &dv), norm(&dx) * norm(&dv), mag)
}

/// Exhaustive pairwise monotonicity check over a finite graph.
pub fn check_monotone(g: &FiniteOperatorGraph, tol: &Tolerance) -> Verdict {
    let pairs = g.pairs();
    if pairs.len() < 2 {
        return Verdict::certified_exact();
    }
    let mut margin = f64::INFINITY;
    let mut used = 0u64;
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            let (ip, scale, _mag) = pair_inner_product(&pairs[i], &pairs[j]);
            used += 1;
            if ip < -tol.eq_band(scale) {
                return Verdict::refuted(graph_pair_witness(&pairs[i], &pairs[j], ip), used, ip);
            }
            margin = margin.min(ip);
        }
    }
    Verdict::certified_sampled(used, margin)
}

/// Exhaustive strict-monotonicity check: `⟨Δx, Δv⟩ > 0` for every pair with
/// distinct base points. Pairs sharing `x` exactly are skipped (the
/// definition quantifies over `x₀ ≠ x₁`); a zero inner product at working
/// precision refutes, since graph pairs are exact data.
pub fn check_strictly_monotone(g: &FiniteOperatorGraph, tol: &Tolerance) -> Verdict {
    let pairs = g.pairs();
    let mut margin = f64::INFINITY;
    let mut used = 0u64;
    let mut dead_zone = false;
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            if pairs[i].0 == pairs[j].0 {
                continue;
            }
            let (ip, scale, mag) = pair_inner_product(&pairs[i], &pairs[j]);
            used += 1;
            margin = margin.min(ip);
            match tol.classify_strict(ip, scale, mag) {
                StrictSample::Pass => {}
                StrictSample::Equal | StrictSample::Violation => {
                    return Verdict::refuted(
                        graph_pair_witness(&pairs[i], &pairs[j], ip),
                        used,
                        ip,
                    );
                }
                StrictSample::DeadZone => dead_zone = true,
            }
        }
    }
    if dead_zone {
        Verdict::inconclusive("inner products inside the dead zone", used, margin)
    } else if used == 0 {
        Verdict::certified_exact()
    } else {
        Verdict::certified_sampled(used, margin)
    }
}

/// Paramonotonicity over a finite graph: every equality pair
/// (`⟨Δx,Δv⟩ = 0`, `x₀ ≠ x₁`) must have both crossed pairs in the graph —
/// looked up in the sample, or through `closure_oracle` when provided.
pub fn check_paramonotone(
    g: &FiniteOperatorGraph,
    closure_oracle: Option<&OperatorOracle>,
    tol: &Tolerance,
) -> Result<Verdict, MonotoneError> {
    let mono = check_monotone(g, tol);
    if mono.is_refuted() {
        return Err(MonotoneError::NotMonotone(Box::new(mono)));
    }
    let member = |x: &[f64], v: &[f64]| -> bool {
        if g.contains(x, v, tol) {
            return true;
        }
        if let Some(oracle) = closure_oracle {
            return oracle
                .apply(x)
                .iter()
                .any(|w| dist(w, v) <= tol.eq_band(norm(v)));
        }
        false
    };
    let pairs = g.pairs();
    let mut used = 0u64;
    let mut checked = 0u64;
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            if pairs[i].0 == pairs[j].0 {
                continue;
            }
            let (ip, scale, _mag) = pair_inner_product(&pairs[i], &pairs[j]);
            used += 1;
            if !tol.graph_equality(ip, scale) {
                continue;
            }
            checked += 1;
            let ((x0, v0), (x1, v1)) = (&pairs[i], &pairs[j]);
            for (xm, vm) in [(x0, v1), (x1, v0)] {
                if !member(xm, vm) {
                    return Ok(Verdict::refuted(
                        Witness::CrossingFailure {
                            x0: x0.clone(),
                            v0: v0.clone(),
                            x1: x1.clone(),
                            v1: v1.clone(),
                            missing_x: xm.clone(),
                            missing_v: vm.clone(),
                        },
                        used,
                        ip,
                    ));
                }
            }
        }
    }
    Ok(Verdict::certified_sampled(used.max(1), checked as f64))
}

/// Almost strict monotonicity: strict monotonicity along every segment of
/// the sampled domain that lies inside `dom A`. Segment membership is
/// probed at `n_segment_samples` equally spaced interior points of the
/// oracle; segments leaving the domain are vacuous.
pub fn check_almost_strictly_monotone(
    g: &FiniteOperatorGraph,
    segment_oracle: &OperatorOracle,
    n_segment_samples: usize,
    tol: &Tolerance,
) -> Verdict {
    let n = n_segment_samples.max(1);
    let points = g.domain_points();
    let mut used = 0u64;
    let mut margin = f64::INFINITY;
    let mut dead_zone = false;
    for i in 0..points.len() {
        'seg: for j in (i + 1)..points.len() {
            let (x0, x1) = (&points[i], &points[j]);
            // Gather the operator along the closed segment; abandon the
            // segment if any interior point leaves dom A.
            let mut local: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
            for k in 0..=(n + 1) {
                let t = k as f64 / (n + 1) as f64;
                let p: Vec<f64> = x0
                    .iter()
                    .zip(x1)
                    .map(|(a, b)| (1.0 - t) * a + t * b)
                    .collect();
                let vals = segment_oracle.apply(&p);
                if vals.is_empty() {
                    continue 'seg;
                }
                for v in vals {
                    local.push((p.clone(), v));
                }
            }
            // Strict check along the segment.
            for a in 0..local.len() {
                for b in (a + 1)..local.len() {
                    if local[a].0 == local[b].0 {
                        continue;
                    }
                    let (ip, scale, mag) = pair_inner_product(&local[a], &local[b]);
                    used += 1;
                    margin = margin.min(ip);
                    match tol.classify_strict(ip, scale, mag) {
                        StrictSample::Pass => {}
                        StrictSample::Equal | StrictSample::Violation => {
                            let values: Vec<f64> = local
                                .iter()
                                .map(|(_, v)| v.first().copied().unwrap_or(0.0))
                                .collect();
                            return Verdict::refuted(
                                Witness::Segment(crate::verdict::SegmentWitness {
                                    x0: x0.clone(),
                                    x1: x1.clone(),
                                    kind: crate::verdict::SegmentKind::StrictnessFail,
                                    values,
                                }),
                                used,
                                ip,
                            );
                        }
                        StrictSample::DeadZone => dead_zone = true,
                    }
                }
            }
        }
    }
    if dead_zone {
        Verdict::inconclusive("segment inner products inside the dead zone", used, margin)
    } else if used == 0 {
        Verdict::certified_exact()
    } else {
        Verdict::certified_sampled(used, margin)
    }
}

/// Graph of the resolvent `J_{λA} = (Id + λA)⁻¹`: the exact image of the
/// operator graph under `(x, y) ↦ (x + λy, x)`. For a maximal input the
/// output is the graph of a 1-Lipschitz nondecreasing function on all of ℝ.
pub fn resolvent_polyline(g: &MonotonePolyline, lambda: f64) -> MonotonePolyline {
    assert!(lambda.is_finite() && lambda > 0.0);
    let vertices: Vec<[f64; 2]> = g
        .vertices()
        .iter()
        .map(|&[x, y]| [x + lambda * y, x])
        .collect();
    let map_ray = |r: [f64; 2]| [r[0] + lambda * r[1], r[0]];
    MonotonePolyline::new(vertices, map_ray(g.head_ray()), map_ray(g.tail_ray()))
        .expect("resolvent of a monotone graph is monotone")
}

/// Closed-form `(Id + M)⁻¹` for a 2×2 matrix.
pub fn resolvent_linear2d(m: [[f64; 2]; 2]) -> Result<[[f64; 2]; 2], MonotoneError> {
    let a = 1.0 + m[0][0];
    let b = m[0][1];
    let c = m[1][0];
    let d = 1.0 + m[1][1];
    let det = a * d - b * c;
    if det.abs() < 1e-300 {
        return Err(MonotoneError::SingularMatrix(det));
    }
    Ok([[d / det, -b / det], [-c / det, a / det]])
}

/// Report of the strict-nonexpansiveness check: the verdict for
/// `‖Tx − Ty‖ < ‖x − y‖` on sampled pairs, plus whether firm
/// nonexpansiveness `⟨ΔT, Δx⟩ ≥ ‖ΔT‖²` held on every sample.
#[derive(Clone, Debug, Serialize)]
pub struct StrictNonexpansiveReport {
    pub verdict: Verdict,
    pub firmly_nonexpansive: bool,
}

/// A sampled pair with its two map images.
type MappedPair = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

/// Samples pairs from the union of boxes (all corner pairs first, then
/// seeded random pairs) and applies the partial map to both points.
fn sample_map_pairs(
    map: &PointMap,
    regions: &[BoxRegion],
    n_pairs: usize,
    seed: u64,
) -> Vec<MappedPair> {
    let mut corners: Vec<Vec<f64>> = Vec::new();
    for r in regions {
        corners.extend(r.corners());
    }
    let mut samplers: Vec<RegionSampler> = regions
        .iter()
        .enumerate()
        .map(|(i, r)| RegionSampler::new(r, seed.wrapping_add(i as u64)))
        .collect();
    let mut out = Vec::new();
    // Deterministic corner pairs first: boundary equalities (isometric
    // pairs across domain components) must be found regardless of seed.
    'outer: for i in 0..corners.len() {
        for j in (i + 1)..corners.len() {
            if out.len() >= n_pairs {
                break 'outer;
            }
            if corners[i] == corners[j] {
                continue;
            }
            if let (Some(ti), Some(tj)) = (map(&corners[i]), map(&corners[j])) {
                out.push((corners[i].clone(), corners[j].clone(), ti, tj));
            }
        }
    }
    let n_regions = samplers.len();
    let mut k = 0usize;
    let mut guard = 0usize;
    while out.len() < n_pairs && guard < 64 * n_pairs {
        guard += 1;
        let a = samplers[k % n_regions].point();
        let b = samplers[(k + 1) % n_regions].point();
        k += 1;
        if a == b {
            continue;
        }
        if let (Some(ta), Some(tb)) = (map(&a), map(&b)) {
            out.push((a, b, ta, tb));
        }
    }
    out
}

/// Strict nonexpansiveness of a point map over sampled pairs, with a firm
/// nonexpansiveness side report. An isometric pair at working precision
/// refutes: map oracles are exact, so the pair re-verifies directly.
pub fn check_strictly_nonexpansive(
    map: &PointMap,
    regions: &[BoxRegion],
    n_pairs: usize,
    seed: u64,
    tol: &Tolerance,
) -> StrictNonexpansiveReport {
    assert!(n_pairs >= 1);
    let samples = sample_map_pairs(map, regions, n_pairs, seed);
    let mut margin = f64::INFINITY;
    let mut firm = true;
    let mut dead_zone = false;
    let mut used = 0u64;
    for (x, y, tx, ty) in &samples {
        let dxy = dist(x, y);
        let dt = dist(tx, ty);
        let slack = dxy - dt;
        used += 1;
        margin = margin.min(slack);
        let mag = norm(x).max(norm(y)).max(norm(tx)).max(norm(ty));
        let dtv: Vec<f64> = tx.iter().zip(ty).map(|(a, b)| a - b).collect();
        let dxv: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        if dot(&dtv, &dxv) < dt * dt - tol.eq_band(mag * mag) {
            firm = false;
        }
        match tol.classify_strict(slack, dxy, mag) {
            StrictSample::Pass => {}
            StrictSample::Equal | StrictSample::Violation => {
                return StrictNonexpansiveReport {
                    verdict: Verdict::refuted(
                        Witness::MapPair {
                            x: x.clone(),
                            y: y.clone(),
                            map_x: tx.clone(),
                            map_y: ty.clone(),
                        },
                        used,
                        slack,
                    ),
                    firmly_nonexpansive: firm,
                };
            }
            StrictSample::DeadZone => dead_zone = true,
        }
    }
    let verdict = if used == 0 {
        Verdict::inconclusive("map undefined on all sampled pairs", 0, f64::INFINITY)
    } else if dead_zone {
        Verdict::inconclusive("slacks inside the dead zone", used, margin)
    } else {
        Verdict::certified_sampled(used, margin)
    };
    StrictNonexpansiveReport {
        verdict,
        firmly_nonexpansive: firm,
    }
}

/// Injectivity of the displacement `Id − J` on sampled pairs.
pub fn check_displacement_injective(
    map: &PointMap,
    regions: &[BoxRegion],
    n_pairs: usize,
    seed: u64,
    tol: &Tolerance,
) -> Verdict {
    let samples = sample_map_pairs(map, regions, n_pairs, seed);
    let mut margin = f64::INFINITY;
    let mut dead_zone = false;
    let mut used = 0u64;
    for (x, y, tx, ty) in &samples {
        let gx: Vec<f64> = x.iter().zip(tx).map(|(a, b)| a - b).collect();
        let gy: Vec<f64> = y.iter().zip(ty).map(|(a, b)| a - b).collect();
        let dg = dist(&gx, &gy);
        used += 1;
        margin = margin.min(dg);
        let mag = norm(x).max(norm(y)).max(norm(&gx)).max(norm(&gy));
        match tol.classify_strict(dg, dist(x, y), mag) {
            StrictSample::Pass => {}
            StrictSample::Equal | StrictSample::Violation => {
                return Verdict::refuted(
                    Witness::MapPair {
                        x: x.clone(),
                        y: y.clone(),
                        map_x: gx,
                        map_y: gy,
                    },
                    used,
                    dg,
                );
            }
            StrictSample::DeadZone => dead_zone = true,
        }
    }
    if dead_zone {
        Verdict::inconclusive("displacement differences inside the dead zone", used, margin)
    } else if used == 0 {
        Verdict::inconclusive("map undefined on all sampled pairs", 0, f64::INFINITY)
    } else {
        Verdict::certified_sampled(used, margin)
    }
}

/// Strict monotonicity of the displacement `Id − J` on sampled pairs.
pub fn check_displacement_strictly_monotone(
    map: &PointMap,
    regions: &[BoxRegion],
    n_pairs: usize,
    seed: u64,
    tol: &Tolerance,
) -> Verdict {
    let samples = sample_map_pairs(map, regions, n_pairs, seed);
    let mut margin = f64::INFINITY;
    let mut dead_zone = false;
    let mut used = 0u64;
    for (x, y, tx, ty) in &samples {
        let gx: Vec<f64> = x.iter().zip(tx).map(|(a, b)| a - b).collect();
        let gy: Vec<f64> = y.iter().zip(ty).map(|(a, b)| a - b).collect();
        let dg: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| a - b).collect();
        let dx: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        let ip = dot(&dg, &dx);
        used += 1;
        margin = margin.min(ip);
        let mag = norm(x).max(norm(y)).max(norm(&gx)).max(norm(&gy));
        match tol.classify_strict(ip, norm(&dg) * norm(&dx), mag) {
            StrictSample::Pass => {}
            StrictSample::Equal | StrictSample::Violation => {
                return Verdict::refuted(
                    Witness::MapPair {
                        x: x.clone(),
                        y: y.clone(),
                        map_x: gx,
                        map_y: gy,
                    },
                    used,
                    ip,
                );
            }
            StrictSample::DeadZone => dead_zone = true,
        }
    }
    if dead_zone {
        Verdict::inconclusive(
            "displacement inner products inside the dead zone",
            used,
            margin,
        )
    } else if used == 0 {
        Verdict::inconclusive("map undefined on all sampled pairs", 0, f64::INFINITY)
    } else {
        Verdict::certified_sampled(used, margin)
    }
}

/// Disjoint injectivity over a finite graph: distinct base points must
/// have disjoint value sets. For paramonotone operators this is equivalent
/// to strict monotonicity, and the two checks must agree on any fixture
/// whose paramonotonicity check certifies.
pub fn check_disjointly_injective(g: &FiniteOperatorGraph, tol: &Tolerance) -> Verdict {
    let pairs = g.pairs();
    let mut used = 0u64;
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            if pairs[i].0 == pairs[j].0 {
                continue;
            }
            used += 1;
            let shared = dist(&pairs[i].1, &pairs[j].1)
                <= tol.eq_band(norm(&pairs[i].1).max(norm(&pairs[j].1)));
            if shared {
                return Verdict::refuted(
                    graph_pair_witness(&pairs[i], &pairs[j], 0.0),
                    used,
                    0.0,
                );
            }
        }
    }
    Verdict::certified_sampled(used.max(1), f64::INFINITY)
}

/// Probes whether a set-valued oracle is at most single-valued on the
/// given points: two outputs separated beyond the equality band at one
/// input mean multivaluedness.
pub fn check_at_most_single_valued(
    oracle: &OperatorOracle,
    points: &[Vec<f64>],
    tol: &Tolerance,
) -> Verdict {
    let mut used = 0u64;
    for p in points {
        let vals = oracle.apply(p);
        if vals.is_empty() {
            continue;
        }
        used += 1;
        for a in 0..vals.len() {
            for b in (a + 1)..vals.len() {
                let d = dist(&vals[a], &vals[b]);
                if d > tol.eq_band(norm(&vals[a]).max(norm(&vals[b]))) {
                    return Verdict::refuted(
                        Witness::Multivalued {
                            x: p.clone(),
                            values: vals.clone(),
                        },
                        used,
                        d,
                    );
                }
            }
        }
    }
    Verdict::certified_sampled(used, f64::INFINITY)
}

/// One operator with everything the equivalence suite needs: a sampled
/// graph, the operator and inverse oracles, the resolvent as a (partial)
/// point map with boxes inside its domain, and declared truth metadata.
/// Maximality is not decidable from finite samples; the declared flags
/// only set the suite's expectations.
#[derive(Clone)]
pub struct OperatorFixture {
    pub name: String,
    pub graph: FiniteOperatorGraph,
    pub oracle: OperatorOracle,
    pub inverse: OperatorOracle,
    pub resolvent: PointMap,
    pub resolvent_regions: Vec<BoxRegion>,
    pub paramonotone: bool,
    pub maximal: bool,
    pub strictly_monotone: bool,
    pub almost_strictly_monotone: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub name: String,
    pub verdict: Verdict,
}

/// Result of evaluating the six equivalent conditions on one fixture.
#[derive(Clone, Debug, Serialize)]
pub struct ParaSuiteReport {
    pub fixture: String,
    pub paramonotone: bool,
    pub maximal: bool,
    pub conditions: Vec<ConditionReport>,
    /// All six conditions certified, or all six refuted (inconclusive
    /// verdicts never count as agreement).
    pub agreement: bool,
    /// Agreement is guaranteed exactly for paramonotone + maximal inputs.
    pub expected_agreement: bool,
    pub as_expected: bool,
}

/// Evaluates, on one fixture: (i) strict monotonicity, (ii) almost strict
/// monotonicity, (iii) at-most-single-valuedness of the inverse, (iv)
/// strict nonexpansiveness of the resolvent, (v) injectivity of `Id − J`,
/// (vi) strict monotonicity of `Id − J`. For paramonotone maximal inputs
/// the six verdicts must agree; the two standard counterexamples (a
/// non-maximal operator and the rotation by π/2) are expected to disagree.
pub fn para_equivalence_suite(fixture: &OperatorFixture, tol: &Tolerance) -> ParaSuiteReport {
    let n_pairs = 400;
    let seed = 0;
    let ran_points = fixture.graph.range_points();
    let conditions = vec![
        ConditionReport {
            name: "strictly_monotone".into(),
            verdict: check_strictly_monotone(&fixture.graph, tol),
        },
        ConditionReport {
            name: "almost_strictly_monotone".into(),
            verdict: check_almost_strictly_monotone(&fixture.graph, &fixture.oracle, 17, tol),
        },
        ConditionReport {
            name: "inverse_at_most_single_valued".into(),
            verdict: check_at_most_single_valued(&fixture.inverse, &ran_points, tol),
        },
        ConditionReport {
            name: "resolvent_strictly_nonexpansive".into(),
            verdict: check_strictly_nonexpansive(
                &fixture.resolvent,
                &fixture.resolvent_regions,
                n_pairs,
                seed,
                tol,
            )
            .verdict,
        },
        ConditionReport {
            name: "displacement_injective".into(),
            verdict: check_displacement_injective(
                &fixture.resolvent,
                &fixture.resolvent_regions,
                n_pairs,
                seed,
                tol,
            ),
        },
        ConditionReport {
            name: "displacement_strictly_monotone".into(),
            verdict: check_displacement_strictly_monotone(
                &fixture.resolvent,
                &fixture.resolvent_regions,
                n_pairs,
                seed,
                tol,
            ),
        },
    ];
    let all_certified = conditions.iter().all(|c| c.verdict.is_certified());
    let all_refuted = conditions.iter().all(|c| c.verdict.is_refuted());
    let agreement = all_certified || all_refuted;
    let expected_agreement = fixture.paramonotone && fixture.maximal;
    ParaSuiteReport {
        fixture: fixture.name.clone(),
        paramonotone: fixture.paramonotone,
        maximal: fixture.maximal,
        conditions,
        agreement,
        expected_agreement,
        as_expected: agreement == expected_agreement,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::PlFunction;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn monotone_basic_examples() {
        let id = FiniteOperatorGraph::from_scalar_pairs(&[(0.0, 0.0), (1.0, 1.0)]);
        assert!(check_monotone(&id, &tol()).is_certified());

        let dec = FiniteOperatorGraph::from_scalar_pairs(&[(0.0, 1.0), (1.0, 0.0)]);
        let v = check_monotone(&dec, &tol());
        assert!(v.is_refuted());
        assert_eq!(v.margin.0, -1.0);

        // Rotation by π/2 sampled at two points: ⟨Δx, Δv⟩ = 0 is monotone.
        let skew = FiniteOperatorGraph::new(
            2,
            vec![
                (vec![1.0, 0.0], vec![0.0, 1.0]),
                (vec![0.0, 1.0], vec![-1.0, 0.0]),
            ],
        )
        .unwrap();
        assert!(check_monotone(&skew, &tol()).is_certified());
    }

    #[test]
    fn strict_monotone_examples() {
        let id = FiniteOperatorGraph::from_scalar_pairs(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]);
        assert!(check_strictly_monotone(&id, &tol()).is_certified());

        // The rotation has a zero inner product with distinct base points.
        let skew = FiniteOperatorGraph::new(
            2,
            vec![
                (vec![1.0, 0.0], vec![0.0, 1.0]),
                (vec![0.0, 1.0], vec![-1.0, 0.0]),
            ],
        )
        .unwrap();
        let v = check_strictly_monotone(&skew, &tol());
        assert!(v.is_refuted());

        // The subdifferential of |x| is strictly monotone on the sampled
        // points below, but adding two points from an affine run refutes.
        let abs3 =
            FiniteOperatorGraph::from_scalar_pairs(&[(-1.0, -1.0), (0.0, 0.0), (1.0, 1.0)]);
        assert!(check_strictly_monotone(&abs3, &tol()).is_certified());
        let abs5 = FiniteOperatorGraph::from_scalar_pairs(&[
            (-1.0, -1.0),
            (0.0, 0.0),
            (1.0, 1.0),
            (2.0, 1.0),
            (3.0, 1.0),
        ]);
        let v = check_strictly_monotone(&abs5, &tol());
        assert!(v.is_refuted());
        match v.witness.unwrap() {
            Witness::GraphPair { inner_product, .. } => assert_eq!(inner_product, 0.0),
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn paramonotone_examples() {
        let tol = tol();
        // ∂|x| with its affine-piece pairs and a closure oracle.
        let abs = PlFunction::abs();
        let graph = FiniteOperatorGraph::from_scalar_pairs(&[
            (-1.0, -1.0),
            (0.0, 0.0),
            (1.0, 1.0),
            (2.0, 1.0),
            (3.0, 1.0),
        ]);
        let oracle = OperatorOracle::new(
            1,
            Arc::new(move |x: &[f64]| {
                abs.subdiff(x[0])
                    .map(|iv| {
                        if iv.is_singleton() {
                            vec![vec![iv.lo]]
                        } else {
                            vec![vec![iv.lo], vec![iv.hi]]
                        }
                    })
                    .unwrap_or_default()
            }),
        );
        let v = check_paramonotone(&graph, Some(&oracle), &tol).unwrap();
        assert!(v.is_certified(), "{v}");

        // The rotation: equality pair whose crossing is absent.
        let skew = FiniteOperatorGraph::new(
            2,
            vec![
                (vec![1.0, 0.0], vec![0.0, 1.0]),
                (vec![0.0, 1.0], vec![-1.0, 0.0]),
            ],
        )
        .unwrap();
        let v = check_paramonotone(&skew, None, &tol).unwrap();
        assert!(v.is_refuted());

        // A strictly monotone graph is vacuously paramonotone.
        let id = FiniteOperatorGraph::from_scalar_pairs(&[(0.0, 0.0), (1.0, 1.0)]);
        assert!(check_paramonotone(&id, None, &tol).unwrap().is_certified());

        // Precondition violation is an error.
        let dec = FiniteOperatorGraph::from_scalar_pairs(&[(0.0, 1.0), (1.0, 0.0)]);
        assert!(matches!(
            check_paramonotone(&dec, None, &tol),
            Err(MonotoneError::NotMonotone(_))
        ));
    }

    /// The operator with a gap: -x² for x ≤ 0, empty on (0,1), (x-1)² for
    /// x ≥ 1. Strictly monotone on each component of its domain, not
    /// strictly monotone globally.
    fn gap_oracle() -> OperatorOracle {
        OperatorOracle::new(
            1,
            Arc::new(|x: &[f64]| {
                let x = x[0];
                if x <= 0.0 {
                    vec![vec![-x * x]]
                } else if x < 1.0 {
                    vec![]
                } else {
                    vec![vec![(x - 1.0) * (x - 1.0)]]
                }
            }),
        )
    }

    #[test]
    fn almost_strict_monotone_examples() {
        let tol = tol();
        let oracle = gap_oracle();
        let graph = FiniteOperatorGraph::from_scalar_pairs(&[
            (-2.0, -4.0),
            (-1.0, -1.0),
            (0.0, 0.0),
            (1.0, 0.0),
            (2.0, 1.0),
            (3.0, 4.0),
        ]);
        // Almost strictly monotone: segments crossing the gap are vacuous.
        let v = check_almost_strictly_monotone(&graph, &oracle, 17, &tol);
        assert!(v.is_certified(), "{v}");
        // But not strictly monotone: (0,0) vs (1,0) has inner product 0.
        let v = check_strictly_monotone(&graph, &tol);
        assert!(v.is_refuted());

        // The identity is almost strictly monotone.
        let id_oracle = OperatorOracle::new(1, Arc::new(|x: &[f64]| vec![vec![x[0]]]));
        let id = FiniteOperatorGraph::from_scalar_pairs(&[(-1.0, -1.0), (0.0, 0.0), (2.0, 2.0)]);
        assert!(check_almost_strictly_monotone(&id, &id_oracle, 17, &tol).is_certified());

        // ∂(indicator of [0,1]) is constant on the interior segment.
        let ind = PlFunction::indicator(0.0, 1.0);
        let ind_oracle = OperatorOracle::new(
            1,
            Arc::new(move |x: &[f64]| {
                ind.subdiff(x[0])
                    .map(|iv| vec![vec![iv.lo.max(-1e6)], vec![iv.hi.min(1e6)]])
                    .unwrap_or_default()
            }),
        );
        let g = FiniteOperatorGraph::from_scalar_pairs(&[(0.25, 0.0), (0.75, 0.0)]);
        let v = check_almost_strictly_monotone(&g, &ind_oracle, 17, &tol);
        assert!(v.is_refuted());
    }

    #[test]
    fn resolvent_polyline_examples() {
        // Identity graph, λ = 1: the halving map.
        let id = MonotonePolyline::new(vec![[0.0, 0.0]], [1.0, 1.0], [1.0, 1.0]).unwrap();
        let r = resolvent_polyline(&id, 1.0);
        assert_eq!(r.vertices(), &[[0.0, 0.0]]);
        assert_eq!(r.canonical().head_ray(), [1.0, 0.5]);

        // Normal cone of [0,1]: the resolvent is the clamp.
        let nc = PlFunction::indicator(0.0, 1.0).subdiff_polyline();
        let r = resolvent_polyline(&nc, 2.0).canonical();
        assert_eq!(r.vertices(), &[[0.0, 0.0], [1.0, 1.0]]);
        assert_eq!(r.head_ray(), [1.0, 0.0]);
        assert_eq!(r.tail_ray(), [1.0, 0.0]);

        // Horizontal line y = c: shift by λc.
        let line = MonotonePolyline::new(vec![[0.0, 3.0]], [1.0, 0.0], [1.0, 0.0]).unwrap();
        let r = resolvent_polyline(&line, 2.0);
        assert_eq!(r.vertices(), &[[6.0, 0.0]]);
        assert_eq!(r.canonical().head_ray(), [1.0, 1.0]);
    }

    #[test]
    fn resolvent_is_function_graph_with_unit_lipschitz_slopes() {
        let f = PlFunction::new(
            vec![-1.0, 0.0, 2.0],
            vec![1.0, 0.0, 4.0],
            crate::pl::Slope::NegInf,
            crate::pl::Slope::Finite(5.0),
        )
        .unwrap();
        for lambda in [0.1, 1.0, 10.0] {
            let r = resolvent_polyline(&f.subdiff_polyline(), lambda);
            for w in r.vertices().windows(2) {
                let dx = w[1][0] - w[0][0];
                let dy = w[1][1] - w[0][1];
                assert!(dx > 0.0, "vertical segment in a resolvent graph");
                assert!(dy / dx <= 1.0 + 1e-12, "slope exceeds 1");
            }
        }
    }

    #[test]
    fn resolvent_linear2d_examples() {
        let skew = resolvent_linear2d([[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(skew, [[0.5, 0.5], [-0.5, 0.5]]);
        let zero = resolvent_linear2d([[0.0, 0.0], [0.0, 0.0]]).unwrap();
        assert_eq!(zero, [[1.0, 0.0], [0.0, 1.0]]);
        let ident = resolvent_linear2d([[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(ident, [[0.5, 0.0], [0.0, 0.5]]);
        assert!(matches!(
            resolvent_linear2d([[-1.0, 0.0], [0.0, -1.0]]),
            Err(MonotoneError::SingularMatrix(_))
        ));
    }

    #[test]
    fn strict_nonexpansiveness_examples() {
        let tol = tol();
        let region = vec![BoxRegion::closed(&[(-2.0, 2.0), (-2.0, 2.0)])];
        // Resolvent of the rotation contracts norms by 1/√2.
        let r = resolvent_linear2d([[0.0, -1.0], [1.0, 0.0]]).unwrap();
        let map: PointMap = Arc::new(move |x: &[f64]| {
            Some(vec![
                r[0][0] * x[0] + r[0][1] * x[1],
                r[1][0] * x[0] + r[1][1] * x[1],
            ])
        });
        let rep = check_strictly_nonexpansive(&map, &region, 500, 0, &tol);
        assert!(rep.verdict.is_certified(), "{}", rep.verdict);
        assert!(rep.firmly_nonexpansive);

        // Projection onto [0,1] is isometric between interior points.
        let proj: PointMap = Arc::new(|x: &[f64]| Some(vec![x[0].clamp(0.0, 1.0)]));
        let rep = check_strictly_nonexpansive(
            &proj,
            &[BoxRegion::closed(&[(-2.0, 2.0)])],
            500,
            0,
            &tol,
        );
        assert!(rep.verdict.is_refuted());
        assert!(rep.firmly_nonexpansive);

        // Halving is a strict contraction.
        let half: PointMap = Arc::new(|x: &[f64]| Some(vec![x[0] / 2.0]));
        let rep =
            check_strictly_nonexpansive(&half, &[BoxRegion::closed(&[(-2.0, 2.0)])], 500, 0, &tol);
        assert!(rep.verdict.is_certified());
    }

    #[test]
    fn disjoint_injectivity_matches_strictness_on_paramonotone_graphs() {
        let tol = tol();
        // Paramonotone fixtures: the two checks agree in both directions.
        let id = FiniteOperatorGraph::from_scalar_pairs(&[(-1.0, -1.0), (0.0, 0.0), (2.0, 2.0)]);
        assert!(check_paramonotone(&id, None, &tol).unwrap().is_certified());
        assert_eq!(
            check_disjointly_injective(&id, &tol).is_certified(),
            check_strictly_monotone(&id, &tol).is_certified()
        );

        // The gap operator shares the value 0 at x = 0 and x = 1.
        let gap = FiniteOperatorGraph::from_scalar_pairs(&[
            (-1.0, -1.0),
            (0.0, 0.0),
            (1.0, 0.0),
            (2.0, 1.0),
        ]);
        let oracle = gap_oracle();
        assert!(check_paramonotone(&gap, Some(&oracle), &tol).unwrap().is_certified());
        assert!(check_disjointly_injective(&gap, &tol).is_refuted());
        assert!(check_strictly_monotone(&gap, &tol).is_refuted());
    }

    #[test]
    fn equality_pairs_fill_the_segment_on_paramonotone_maximal_operators() {
        // For a subdifferential (paramonotone and maximal), an equality
        // pair forces the common values onto every interior point of the
        // segment.
        let tol = tol();
        let f = PlFunction::abs();
        let graph = FiniteOperatorGraph::from_scalar_pairs(&[(2.0, 1.0), (3.0, 1.0)]);
        let v = check_strictly_monotone(&graph, &tol);
        assert!(v.is_refuted(), "affine run is an equality pair");
        for k in 1..=7 {
            let x = 2.0 + k as f64 / 8.0;
            let iv = f.subdiff(x).unwrap();
            assert!(iv.contains(1.0), "interior subdifferential misses the shared value");
        }
    }

    #[test]
    fn strict_implies_monotone_and_almost_strict() {
        // Strictly monotone 1-D graphs: certification of the strict check
        // implies certification of the weaker ones.
        let graphs = [
            FiniteOperatorGraph::from_scalar_pairs(&[(-2.0, -8.0), (0.5, 0.1), (3.0, 9.0)]),
            FiniteOperatorGraph::from_scalar_pairs(&[(0.0, 0.0), (1.0, 3.0), (2.0, 3.5)]),
        ];
        let cubic_oracle = OperatorOracle::new(1, Arc::new(|x: &[f64]| vec![vec![x[0].powi(3)]]));
        for g in &graphs {
            if check_strictly_monotone(g, &tol()).is_certified() {
                assert!(check_monotone(g, &tol()).is_certified());
                // Almost strict monotonicity over the cubic oracle (a
                // strictly monotone full-domain operator).
                let g3 =
                    FiniteOperatorGraph::from_map(1, &g.domain_points(), |x| vec![x[0].powi(3)]);
                assert!(
                    check_almost_strictly_monotone(&g3, &cubic_oracle, 17, &tol()).is_certified()
                );
            }
        }
    }
}
