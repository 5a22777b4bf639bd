//! Closed-form fixtures with analytically known properties: the ground
//! truth every certifier and theorem suite is exercised against.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::blackbox::{AxisBound, BlackBoxConvex, BoxRegion, DomainHint, GradFn};
use crate::ext::ExtReal;
use crate::monotone::{FiniteOperatorGraph, OperatorFixture, OperatorOracle, PointMap};
use crate::pl::{PlFunction, Slope};
use crate::polyline::MonotonePolyline;
use crate::tol::Tolerance;
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Error)]
pub enum GalleryError {
    #[error("exponent {0} is out of range (need p ≥ 2)")]
    BadExponent(f64),
    #[error("path point {0:?} leaves the function's domain")]
    PathLeavesDomain(Vec<f64>),
    #[error("fixture has no gradient oracle")]
    GradientUnavailable,
}

/// Truth label for one property of a fixture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Label {
    True,
    False,
    /// Holds on the fixture's declared region, not globally (or only up to
    /// the finite truncation/approximation the fixture embodies).
    RegionQualified,
}

/// Declared ground-truth properties of a function fixture.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TruthLabels {
    pub convex: Label,
    pub strictly_convex: Label,
    pub almost_strictly_convex: Label,
    pub almost_differentiable: Label,
}

/// The function payload of a fixture: exact piecewise-linear, or an
/// oracle-defined black box.
#[derive(Clone)]
pub enum FunctionShape {
    Pl(PlFunction),
    BlackBox(BlackBoxConvex),
}

pub type MatrixFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;
/// `(λ, x) ↦ prox_λf(x)` for one-dimensional black-box fixtures.
pub type ProxOracle = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A function fixture: the function, its declared truth labels, and the
/// regions/oracles the suites need.
#[derive(Clone)]
pub struct FunctionFixture {
    pub name: String,
    pub shape: FunctionShape,
    pub truth: TruthLabels,
    /// Where the labels come from (construction note or classical source).
    pub provenance: String,
    /// A box inside `dom f`; faces are closed exactly where the boundary
    /// belongs to the domain.
    pub sample_region: BoxRegion,
    /// A box inside `dom ∂f`. This is declared, never inferred: the
    /// subdifferential domain can be strictly smaller than the domain and
    /// non-convex, and certifying almost strict convexity hinges on it.
    pub subdiff_region: Option<BoxRegion>,
    pub hessian: Option<MatrixFn>,
    pub prox_oracle: Option<ProxOracle>,
    /// Gradient of the conjugate (the tilt→argmin map) where single-valued.
    pub conj_grad: Option<GradFn>,
    pub tilt_region: Option<BoxRegion>,
    /// Projection box for multi-start descent.
    pub minimize_region: Option<BoxRegion>,
}

impl FunctionFixture {
    pub fn dim(&self) -> usize {
        match &self.shape {
            FunctionShape::Pl(_) => 1,
            FunctionShape::BlackBox(b) => b.dim(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> ExtReal {
        match &self.shape {
            FunctionShape::Pl(f) => f.eval(x[0]),
            FunctionShape::BlackBox(b) => b.eval(x),
        }
    }

    /// Subgradient samples at `x` (endpoints of the slope interval for
    /// piecewise-linear fixtures).
    pub fn subgradients(&self, x: &[f64]) -> Vec<Vec<f64>> {
        match &self.shape {
            FunctionShape::Pl(f) => f
                .subdiff(x[0])
                .map(|iv| {
                    let mut out = vec![];
                    if iv.lo.is_finite() {
                        out.push(vec![iv.lo]);
                    }
                    if iv.hi.is_finite() && iv.hi != iv.lo {
                        out.push(vec![iv.hi]);
                    }
                    out
                })
                .unwrap_or_default(),
            FunctionShape::BlackBox(b) => b.subgradients(x),
        }
    }

    pub fn blackbox(&self) -> Option<&BlackBoxConvex> {
        match &self.shape {
            FunctionShape::BlackBox(b) => Some(b),
            FunctionShape::Pl(_) => None,
        }
    }

    pub fn pl(&self) -> Option<&PlFunction> {
        match &self.shape {
            FunctionShape::Pl(f) => Some(f),
            FunctionShape::BlackBox(_) => None,
        }
    }

    /// A black-box view of the fixture (wrapping the exact evaluator for
    /// piecewise-linear shapes).
    pub fn as_blackbox(&self) -> BlackBoxConvex {
        match &self.shape {
            FunctionShape::BlackBox(b) => b.clone(),
            FunctionShape::Pl(f) => {
                let f0 = f.clone();
                let f1 = f.clone();
                BlackBoxConvex::new(1, Arc::new(move |x: &[f64]| f0.eval(x[0])))
                    .with_subgrad_sample(Arc::new(move |x: &[f64]| {
                        f1.subdiff(x[0])
                            .map(|iv| {
                                let mut out = vec![];
                                if iv.lo.is_finite() {
                                    out.push(vec![iv.lo]);
                                }
                                if iv.hi.is_finite() && iv.hi != iv.lo {
                                    out.push(vec![iv.hi]);
                                }
                                out
                            })
                            .unwrap_or_default()
                    }))
                    .with_domain(DomainHint::Box(self.sample_region.clone()))
            }
        }
    }
}

fn pl_fixture(
    name: &str,
    f: PlFunction,
    truth: TruthLabels,
    provenance: &str,
    sample_region: BoxRegion,
    subdiff_region: Option<BoxRegion>,
) -> FunctionFixture {
    FunctionFixture {
        name: name.into(),
        shape: FunctionShape::Pl(f),
        truth,
        provenance: provenance.into(),
        sample_region,
        subdiff_region,
        hessian: None,
        prox_oracle: None,
        conj_grad: None,
        tilt_region: None,
        minimize_region: None,
    }
}

/// Rockafellar's function on ℝ²: `x₂²/(2x₁) − 2√x₂` for `x₁ > 0, x₂ ≥ 0`,
/// `0` at the origin, `+∞` elsewhere. Strictly convex on the open positive
/// orthant — which is exactly `dom ∂f` — yet identically zero along the ray
/// `x₂ = 0`, so almost strictly convex without being strictly convex.
pub fn rockafellar2d() -> FunctionFixture {
    let eval = Arc::new(|x: &[f64]| {
        let (x1, x2) = (x[0], x[1]);
        if x1 > 0.0 && x2 >= 0.0 {
            ExtReal::finite(x2 * x2 / (2.0 * x1) - 2.0 * x2.sqrt())
        } else if x1 == 0.0 && x2 == 0.0 {
            ExtReal::finite(0.0)
        } else {
            ExtReal::PLUS_INFINITY
        }
    });
    let grad: GradFn = Arc::new(|x: &[f64]| {
        let (x1, x2) = (x[0], x[1]);
        vec![-x2 * x2 / (2.0 * x1 * x1), x2 / x1 - 1.0 / x2.sqrt()]
    });
    let hess: MatrixFn = Arc::new(|x: &[f64]| {
        let (x1, x2) = (x[0], x[1]);
        vec![
            vec![x2 * x2 / (x1 * x1 * x1), -x2 / (x1 * x1)],
            vec![-x2 / (x1 * x1), 1.0 / x1 + 0.5 * x2.powf(-1.5)],
        ]
    });
    let sample_region = BoxRegion {
        bounds: vec![
            AxisBound { lo: 0.0, hi: 10.0, lo_open: true, hi_open: false },
            AxisBound::closed(0.0, 10.0),
        ],
    };
    FunctionFixture {
        name: "rockafellar2d".into(),
        shape: FunctionShape::BlackBox(
            BlackBoxConvex::new(2, eval)
                .with_grad(grad)
                .with_domain(DomainHint::Box(sample_region.clone()))
                .with_subdiff_domain(BoxRegion::closed(&[(0.05, 10.0), (0.05, 10.0)])),
        ),
        truth: TruthLabels {
            convex: Label::True,
            strictly_convex: Label::False,
            almost_strictly_convex: Label::True,
            almost_differentiable: Label::True,
        },
        provenance: "classical two-dimensional example of Rockafellar: strictly convex on the \
                     open positive orthant (= dom of the subdifferential) but zero on the ray \
                     x2 = 0"
            .into(),
        sample_region,
        subdiff_region: Some(BoxRegion::closed(&[(0.05, 10.0), (0.05, 10.0)])),
        hessian: Some(hess),
        prox_oracle: None,
        conj_grad: None,
        tilt_region: None,
        minimize_region: Some(BoxRegion::closed(&[(1e-3, 60.0), (1e-3, 60.0)])),
    }
}

fn power_sum_fixture(name: String, exps: Vec<f64>, provenance: String) -> FunctionFixture {
    let p = exps.clone();
    let eval = Arc::new(move |x: &[f64]| {
        ExtReal::finite(
            x.iter()
                .zip(&p)
                .map(|(xi, pi)| xi.abs().powf(*pi) / pi)
                .sum(),
        )
    });
    let p = exps.clone();
    let grad: GradFn = Arc::new(move |x: &[f64]| {
        x.iter()
            .zip(&p)
            .map(|(xi, pi)| xi.signum() * xi.abs().powf(pi - 1.0))
            .collect()
    });
    let p = exps.clone();
    let hess: MatrixFn = Arc::new(move |x: &[f64]| {
        let d = x.len();
        let mut h = vec![vec![0.0; d]; d];
        for i in 0..d {
            h[i][i] = (p[i] - 1.0) * x[i].abs().powf(p[i] - 2.0);
        }
        h
    });
    // Conjugate exponents 1/p + 1/q = 1 give the tilt→argmin map.
    let q: Vec<f64> = exps.iter().map(|p| p / (p - 1.0)).collect();
    let conj_grad: GradFn = Arc::new(move |v: &[f64]| {
        v.iter()
            .zip(&q)
            .map(|(vi, qi)| vi.signum() * vi.abs().powf(qi - 1.0))
            .collect()
    });
    let d = exps.len();
    FunctionFixture {
        name,
        shape: FunctionShape::BlackBox(
            BlackBoxConvex::new(d, eval)
                .with_grad(grad)
                .with_domain(DomainHint::Box(BoxRegion::closed(&vec![(-2.0, 2.0); d])))
                .with_subdiff_domain(BoxRegion::closed(&vec![(-2.0, 2.0); d])),
        ),
        truth: TruthLabels {
            convex: Label::True,
            strictly_convex: Label::True,
            almost_strictly_convex: Label::True,
            almost_differentiable: Label::True,
        },
        provenance,
        sample_region: BoxRegion::closed(&vec![(-2.0, 2.0); d]),
        subdiff_region: Some(BoxRegion::closed(&vec![(-2.0, 2.0); d])),
        hessian: Some(hess),
        prox_oracle: None,
        conj_grad: Some(conj_grad),
        tilt_region: Some(BoxRegion::closed(&vec![(-1.5, 1.5); d])),
        minimize_region: Some(BoxRegion::closed(&vec![(-8.0, 8.0); d])),
    }
}

/// `f(x) = Σ |xᵢ|^{pᵢ}/pᵢ` on ℝᵈ with all `pᵢ ≥ 2`: strictly convex and
/// differentiable, a finite truncation of the classical sequence-space
/// example. The conjugate exponents `1/pᵢ + 1/qᵢ = 1` parameterize the
/// dual fixture.
pub fn lp_sum_truncated(exps: &[f64]) -> Result<FunctionFixture, GalleryError> {
    if exps.is_empty() {
        return Err(GalleryError::BadExponent(f64::NAN));
    }
    for &p in exps {
        if !(p.is_finite() && p >= 2.0) {
            return Err(GalleryError::BadExponent(p));
        }
    }
    let name = format!(
        "lp-sum-{}",
        exps.iter().map(|p| format!("{p}")).collect::<Vec<_>>().join("-")
    );
    Ok(power_sum_fixture(
        name,
        exps.to_vec(),
        "power-sum with exponents ≥ 2; strictly convex and differentiable by construction".into(),
    ))
}

/// The Fenchel conjugate of [`lp_sum_truncated`]: `Σ |yᵢ|^{qᵢ}/qᵢ` with the
/// conjugate exponents `qᵢ = pᵢ/(pᵢ−1) ∈ (1, 2]`.
pub fn lp_sum_dual(exps: &[f64]) -> Result<FunctionFixture, GalleryError> {
    for &p in exps {
        if !(p.is_finite() && p >= 2.0) {
            return Err(GalleryError::BadExponent(p));
        }
    }
    let q: Vec<f64> = exps.iter().map(|p| p / (p - 1.0)).collect();
    let name = format!(
        "lp-sum-dual-{}",
        exps.iter().map(|p| format!("{p}")).collect::<Vec<_>>().join("-")
    );
    Ok(power_sum_fixture(
        name,
        q,
        "conjugate of the power-sum fixture; exponents in (1, 2]".into(),
    ))
}

/// One-dimensional `x²/2` as a black box with a closed-form prox, the
/// smooth positive case for the envelope suite.
pub fn quad1d() -> FunctionFixture {
    let eval = Arc::new(|x: &[f64]| ExtReal::finite(x[0] * x[0] / 2.0));
    let grad: GradFn = Arc::new(|x: &[f64]| vec![x[0]]);
    let hess: MatrixFn = Arc::new(|_: &[f64]| vec![vec![1.0]]);
    FunctionFixture {
        name: "quad1d".into(),
        shape: FunctionShape::BlackBox(
            BlackBoxConvex::new(1, eval)
                .with_grad(grad)
                .with_domain(DomainHint::Box(BoxRegion::closed(&[(-5.0, 5.0)])))
                .with_subdiff_domain(BoxRegion::closed(&[(-5.0, 5.0)])),
        ),
        truth: TruthLabels {
            convex: Label::True,
            strictly_convex: Label::True,
            almost_strictly_convex: Label::True,
            almost_differentiable: Label::True,
        },
        provenance: "half squared norm; prox is x/(1+λ), a strict contraction".into(),
        sample_region: BoxRegion::closed(&[(-5.0, 5.0)]),
        subdiff_region: Some(BoxRegion::closed(&[(-5.0, 5.0)])),
        hessian: Some(hess),
        prox_oracle: Some(Arc::new(|lambda, x| x / (1.0 + lambda))),
        conj_grad: Some(Arc::new(|v: &[f64]| vec![v[0]])),
        tilt_region: Some(BoxRegion::closed(&[(-3.0, 3.0)])),
        minimize_region: Some(BoxRegion::closed(&[(-8.0, 8.0)])),
    }
}

/// `f(x) = −√x` on `[0, ∞)`: strictly convex, with the gradient blowing up
/// at the boundary of the domain (so the subdifferential is empty at 0).
pub fn neg_sqrt() -> FunctionFixture {
    let eval = Arc::new(|x: &[f64]| {
        if x[0] >= 0.0 {
            ExtReal::finite(-x[0].sqrt())
        } else {
            ExtReal::PLUS_INFINITY
        }
    });
    let grad: GradFn = Arc::new(|x: &[f64]| vec![-0.5 / x[0].sqrt()]);
    let sample_region = BoxRegion {
        bounds: vec![AxisBound::closed(0.0, 4.0)],
    };
    FunctionFixture {
        name: "neg-sqrt".into(),
        shape: FunctionShape::BlackBox(
            BlackBoxConvex::new(1, eval)
                .with_grad(grad)
                .with_domain(DomainHint::Box(sample_region.clone()))
                .with_subdiff_domain(BoxRegion {
                    bounds: vec![AxisBound { lo: 0.0, hi: 4.0, lo_open: true, hi_open: false }],
                }),
        ),
        truth: TruthLabels {
            convex: Label::True,
            strictly_convex: Label::True,
            almost_strictly_convex: Label::True,
            almost_differentiable: Label::True,
        },
        provenance: "negative square root: subdifferential empty at the boundary point 0".into(),
        sample_region,
        subdiff_region: Some(BoxRegion::closed(&[(0.01, 4.0)])),
        hessian: Some(Arc::new(|x: &[f64]| vec![vec![0.25 * x[0].powf(-1.5)]])),
        prox_oracle: None,
        conj_grad: None,
        tilt_region: None,
        minimize_region: None,
    }
}

/// The standard piecewise-linear set: |x|, the indicator of `[0,1]`, the
/// hinge, an affine function, and an asymmetric two-piece function. None
/// is strictly convex.
pub fn standard_pl_set() -> Vec<FunctionFixture> {
    let not_strict = |almost_diff: Label| TruthLabels {
        convex: Label::True,
        strictly_convex: Label::False,
        almost_strictly_convex: Label::False,
        almost_differentiable: almost_diff,
    };
    vec![
        pl_fixture(
            "pl:abs",
            PlFunction::abs(),
            not_strict(Label::False),
            "absolute value: affine on each half line, kink at 0",
            BoxRegion::closed(&[(-3.0, 3.0)]),
            Some(BoxRegion::closed(&[(-3.0, 3.0)])),
        ),
        pl_fixture(
            "pl:indicator01",
            PlFunction::indicator(0.0, 1.0),
            not_strict(Label::False),
            "indicator of [0,1]: prox is the clamp onto the interval",
            BoxRegion::closed(&[(0.0, 1.0)]),
            Some(BoxRegion::closed(&[(0.0, 1.0)])),
        ),
        pl_fixture(
            "pl:hinge",
            PlFunction::hinge(),
            not_strict(Label::False),
            "hinge max(0, x)",
            BoxRegion::closed(&[(-3.0, 3.0)]),
            Some(BoxRegion::closed(&[(-3.0, 3.0)])),
        ),
        pl_fixture(
            "pl:affine",
            PlFunction::affine(3.0, 1.0),
            not_strict(Label::True),
            "affine 3x + 1: subdifferential constant {3}",
            BoxRegion::closed(&[(-3.0, 3.0)]),
            Some(BoxRegion::closed(&[(-3.0, 3.0)])),
        ),
        pl_fixture(
            "pl:two-piece",
            PlFunction::new(vec![0.0], vec![0.0], Slope::Finite(-2.0), Slope::Finite(0.5))
                .unwrap(),
            not_strict(Label::False),
            "asymmetric two-piece function with slopes -2 and 1/2",
            BoxRegion::closed(&[(-3.0, 3.0)]),
            Some(BoxRegion::closed(&[(-3.0, 3.0)])),
        ),
    ]
}

/// The rotation by π/2 on ℝ²: maximally monotone but not paramonotone.
/// Its inverse is single-valued even though the operator is nowhere
/// strictly monotone, so the six-way equivalence fails without
/// paramonotonicity.
pub fn skew_operator2d() -> OperatorFixture {
    let rotate = |x: &[f64]| vec![-x[1], x[0]];
    let lattice: Vec<Vec<f64>> = vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![-1.0, 0.5],
        vec![2.0, -1.0],
        vec![-1.5, -2.0],
    ];
    let graph = FiniteOperatorGraph::from_map(2, &lattice, rotate);
    let r = crate::monotone::resolvent_linear2d([[0.0, -1.0], [1.0, 0.0]])
        .expect("Id + skew is invertible");
    let resolvent: PointMap = Arc::new(move |x: &[f64]| {
        Some(vec![
            r[0][0] * x[0] + r[0][1] * x[1],
            r[1][0] * x[0] + r[1][1] * x[1],
        ])
    });
    OperatorFixture {
        name: "skew2d".into(),
        graph,
        oracle: OperatorOracle::new(2, Arc::new(move |x: &[f64]| vec![rotate(x)])),
        inverse: OperatorOracle::new(2, Arc::new(|v: &[f64]| vec![vec![v[1], -v[0]]])),
        resolvent,
        resolvent_regions: vec![BoxRegion::closed(&[(-3.0, 3.0), (-3.0, 3.0)])],
        paramonotone: false,
        maximal: true,
        strictly_monotone: false,
        almost_strictly_monotone: false,
    }
}

/// The gap operator on ℝ: `-x²` for `x ≤ 0`, empty on `(0,1)`, `(x-1)²`
/// for `x ≥ 1`. Paramonotone but not maximally monotone: strictly monotone
/// on each component of its domain yet not strictly monotone globally
/// (witness pair `(0,0)`, `(1,0)`).
pub fn piecewise_nonmaximal() -> OperatorFixture {
    let apply = |x: &[f64]| {
        let x = x[0];
        if x <= 0.0 {
            vec![vec![-x * x]]
        } else if x < 1.0 {
            vec![]
        } else {
            vec![vec![(x - 1.0) * (x - 1.0)]]
        }
    };
    let xs = [-2.0, -1.0, -0.5, 0.0, 1.0, 1.5, 2.0, 3.0];
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = xs
        .iter()
        .map(|&x| (vec![x], apply(&[x])[0].clone()))
        .collect();
    let graph = FiniteOperatorGraph::new(1, pairs).unwrap();
    let inverse = OperatorOracle::new(
        1,
        Arc::new(|v: &[f64]| {
            let v = v[0];
            if v == 0.0 {
                vec![vec![0.0], vec![1.0]]
            } else if v < 0.0 {
                vec![vec![-(-v).sqrt()]]
            } else {
                vec![vec![1.0 + v.sqrt()]]
            }
        }),
    );
    // Id + A maps (-∞,0] onto itself and [1,∞) onto itself, leaving the
    // gap (0,1) outside the resolvent's domain.
    let resolvent: PointMap = Arc::new(|x: &[f64]| {
        let x = x[0];
        if x <= 0.0 {
            Some(vec![(1.0 - (1.0 - 4.0 * x).sqrt()) / 2.0])
        } else if x >= 1.0 {
            Some(vec![1.0 + (-1.0 + (4.0 * x - 3.0).sqrt()) / 2.0])
        } else {
            None
        }
    });
    OperatorFixture {
        name: "piecewise-nonmaximal".into(),
        graph,
        oracle: OperatorOracle::new(1, Arc::new(apply)),
        inverse,
        resolvent,
        resolvent_regions: vec![
            BoxRegion::closed(&[(-6.0, 0.0)]),
            BoxRegion::closed(&[(1.0, 7.0)]),
        ],
        paramonotone: true,
        maximal: false,
        strictly_monotone: false,
        almost_strictly_monotone: true,
    }
}

/// The identity operator (the subdifferential of `x²/2`): the all-positive
/// reference point for the equivalence suite.
pub fn identity_operator1d() -> OperatorFixture {
    let xs: Vec<Vec<f64>> = (-3..=3).map(|k| vec![k as f64 * 0.7]).collect();
    let graph = FiniteOperatorGraph::from_map(1, &xs, |x| x.to_vec());
    OperatorFixture {
        name: "identity1d".into(),
        graph,
        oracle: OperatorOracle::new(1, Arc::new(|x: &[f64]| vec![x.to_vec()])),
        inverse: OperatorOracle::new(1, Arc::new(|v: &[f64]| vec![v.to_vec()])),
        resolvent: Arc::new(|x: &[f64]| Some(vec![x[0] / 2.0])),
        resolvent_regions: vec![BoxRegion::closed(&[(-4.0, 4.0)])],
        paramonotone: true,
        maximal: true,
        strictly_monotone: true,
        almost_strictly_monotone: true,
    }
}

/// The `k`-th iterate of the Cantor singular function as a maximal
/// monotone polyline on `[0,1]` (vertical rays below 0 and above 1).
///
/// The limit object is continuous, strictly increasing, and flat almost
/// everywhere; the finite iterate is an APPROXIMATE stand-in only — it is
/// itself piecewise linear, so it has genuine flat patches and cannot
/// witness the limiting claim.
pub fn cantor_polyline(k: usize) -> MonotonePolyline {
    fn build(k: usize) -> Vec<[f64; 2]> {
        if k == 0 {
            return vec![[0.0, 0.0], [1.0, 1.0]];
        }
        let prev = build(k - 1);
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(prev.len() * 2 + 2);
        for &[x, y] in &prev {
            out.push([x / 3.0, y / 2.0]);
        }
        out.push([1.0 / 3.0, 0.5]);
        out.push([2.0 / 3.0, 0.5]);
        for &[x, y] in &prev {
            out.push([(x + 2.0) / 3.0, (y + 1.0) / 2.0]);
        }
        out.dedup();
        out
    }
    MonotonePolyline::new(build(k), [0.0, 1.0], [0.0, 1.0]).expect("iterate is monotone")
}

/// Pointwise sum of two fixtures (gradients added where both exist).
/// Regions are intersected; the sum of an almost strictly convex function
/// and a convex one stays almost strictly convex.
pub fn sum_fixture(a: &FunctionFixture, b: &FunctionFixture, name: &str) -> FunctionFixture {
    assert_eq!(a.dim(), b.dim());
    let (fa, fb) = (a.clone(), b.clone());
    let eval = Arc::new(move |x: &[f64]| fa.eval(x) + fb.eval(x));
    let (ga, gb) = (a.clone(), b.clone());
    let grad: GradFn = Arc::new(move |x: &[f64]| {
        let sa = ga.subgradients(x);
        let sb = gb.subgradients(x);
        let za = sa.first().cloned().unwrap_or_else(|| vec![0.0; x.len()]);
        let zb = sb.first().cloned().unwrap_or_else(|| vec![0.0; x.len()]);
        za.iter().zip(&zb).map(|(p, q)| p + q).collect()
    });
    let region = intersect_boxes(&a.sample_region, &b.sample_region);
    let sub = match (&a.subdiff_region, &b.subdiff_region) {
        (Some(ra), Some(rb)) => Some(intersect_boxes(ra, rb)),
        _ => None,
    };
    let almost = if a.truth.almost_strictly_convex == Label::True
        || b.truth.almost_strictly_convex == Label::True
    {
        Label::True
    } else {
        Label::RegionQualified
    };
    FunctionFixture {
        name: name.into(),
        shape: FunctionShape::BlackBox(
            BlackBoxConvex::new(a.dim(), eval)
                .with_grad(grad)
                .with_domain(DomainHint::Box(region.clone())),
        ),
        truth: TruthLabels {
            convex: Label::True,
            strictly_convex: Label::RegionQualified,
            almost_strictly_convex: almost,
            almost_differentiable: Label::RegionQualified,
        },
        provenance: format!("sum of {} and {}", a.name, b.name),
        sample_region: region.clone(),
        subdiff_region: sub,
        hessian: None,
        prox_oracle: None,
        conj_grad: None,
        tilt_region: None,
        minimize_region: None,
    }
}

/// Precomposition with an injective 2×2 matrix: `x ↦ f(Ax)`. The caller
/// supplies a box whose image under `A` stays inside the fixture's
/// regions; composition with an injective map preserves almost strict
/// convexity.
pub fn compose_linear2d(
    f: &FunctionFixture,
    a: [[f64; 2]; 2],
    region: BoxRegion,
    name: &str,
) -> FunctionFixture {
    assert_eq!(f.dim(), 2);
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    assert!(det.abs() > 1e-12, "matrix must be injective");
    let mul = move |x: &[f64]| {
        vec![
            a[0][0] * x[0] + a[0][1] * x[1],
            a[1][0] * x[0] + a[1][1] * x[1],
        ]
    };
    let ff = f.clone();
    let eval = Arc::new(move |x: &[f64]| ff.eval(&mul(x)));
    let fg = f.clone();
    let grad: GradFn = Arc::new(move |x: &[f64]| {
        let y = mul(x);
        let g = fg
            .subgradients(&y)
            .first()
            .cloned()
            .unwrap_or_else(|| vec![0.0; 2]);
        // transpose of A applied to the gradient
        vec![
            a[0][0] * g[0] + a[1][0] * g[1],
            a[0][1] * g[0] + a[1][1] * g[1],
        ]
    });
    FunctionFixture {
        name: name.into(),
        shape: FunctionShape::BlackBox(
            BlackBoxConvex::new(2, eval)
                .with_grad(grad)
                .with_domain(DomainHint::Box(region.clone())),
        ),
        truth: TruthLabels {
            convex: Label::True,
            strictly_convex: Label::RegionQualified,
            almost_strictly_convex: f.truth.almost_strictly_convex,
            almost_differentiable: Label::RegionQualified,
        },
        provenance: format!("{} precomposed with an injective linear map", f.name),
        sample_region: region.clone(),
        subdiff_region: Some(region),
        hessian: None,
        prox_oracle: None,
        conj_grad: None,
        tilt_region: None,
        minimize_region: None,
    }
}

fn intersect_boxes(a: &BoxRegion, b: &BoxRegion) -> BoxRegion {
    BoxRegion {
        bounds: a
            .bounds
            .iter()
            .zip(&b.bounds)
            .map(|(p, q)| AxisBound {
                lo: p.lo.max(q.lo),
                hi: p.hi.min(q.hi),
                lo_open: p.lo_open || (q.lo_open && q.lo >= p.lo),
                hi_open: p.hi_open || (q.hi_open && q.hi <= p.hi),
            })
            .collect(),
    }
}

/// Evaluates `‖∇f‖` along a path approaching a boundary point and
/// certifies divergence against the escalating schedule `2^i · c`
/// (`c` anchored at the first norm). Diagnostic for almost-differentiability
/// labels: a bounded gradient near the boundary means a subgradient exists
/// there.
pub fn gradient_blowup_probe(
    f: &FunctionFixture,
    path: &[Vec<f64>],
    _tol: &Tolerance,
) -> Result<Verdict, GalleryError> {
    let bb = f.blackbox().ok_or(GalleryError::GradientUnavailable)?;
    if !bb.has_grad() {
        return Err(GalleryError::GradientUnavailable);
    }
    assert!(path.len() >= 2, "need at least two path points");
    let mut norms = Vec::with_capacity(path.len());
    for p in path {
        if !bb.eval(p).is_finite() {
            return Err(GalleryError::PathLeavesDomain(p.clone()));
        }
        let g = bb.grad(p).unwrap();
        norms.push(crate::blackbox::norm(&g));
    }
    let c = norms[0].max(1e-6);
    let mut min_ratio = f64::INFINITY;
    for (i, &n) in norms.iter().enumerate().skip(1) {
        let threshold = 2f64.powi(i as i32) * c;
        min_ratio = min_ratio.min(n / threshold);
        if !(n >= threshold * (1.0 - 1e-12)) {
            return Ok(Verdict::refuted(
                Witness::Note {
                    detail: format!(
                        "gradient norm {n:.6e} at step {i} below the escalation threshold {threshold:.6e}"
                    ),
                },
                norms.len() as u64,
                min_ratio,
            ));
        }
    }
    Ok(Verdict::certified_sampled(norms.len() as u64, min_ratio))
}

/// A geometric path `x_i = base + dir · r^i` toward `base`, for blow-up
/// probes (ratio 1/4 by default elsewhere).
pub fn geometric_path(base: &[f64], dir: &[f64], ratio: f64, steps: usize) -> Vec<Vec<f64>> {
    (0..steps)
        .map(|i| {
            let s = ratio.powi(i as i32);
            base.iter().zip(dir).map(|(b, d)| b + d * s).collect()
        })
        .collect()
}

/// One registry entry: a function fixture, an operator fixture, or a raw
/// monotone graph.
pub enum GalleryEntry {
    Function(FunctionFixture),
    Operator(OperatorFixture),
    Graph {
        name: String,
        polyline: MonotonePolyline,
        provenance: String,
    },
}

impl GalleryEntry {
    pub fn name(&self) -> &str {
        match self {
            GalleryEntry::Function(f) => &f.name,
            GalleryEntry::Operator(o) => &o.name,
            GalleryEntry::Graph { name, .. } => name,
        }
    }
}

/// Every fixture, in canonical order.
pub fn registry() -> Vec<GalleryEntry> {
    let mut out: Vec<GalleryEntry> = vec![
        GalleryEntry::Function(rockafellar2d()),
        GalleryEntry::Function(lp_sum_truncated(&[2.0, 4.0]).unwrap()),
        GalleryEntry::Function(lp_sum_dual(&[2.0, 4.0]).unwrap()),
        GalleryEntry::Function(quad1d()),
        GalleryEntry::Function(neg_sqrt()),
    ];
    for f in standard_pl_set() {
        out.push(GalleryEntry::Function(f));
    }
    out.push(GalleryEntry::Operator(identity_operator1d()));
    out.push(GalleryEntry::Operator(skew_operator2d()));
    out.push(GalleryEntry::Operator(piecewise_nonmaximal()));
    out.push(GalleryEntry::Graph {
        name: "cantor-8".into(),
        polyline: cantor_polyline(8),
        provenance: "8th Cantor-function iterate as a monotone graph; APPROXIMATE stand-in for \
                     the singular limit (a finite iterate has genuine flat patches)"
            .into(),
    });
    out
}

pub fn function_fixture(name: &str) -> Option<FunctionFixture> {
    registry().into_iter().find_map(|e| match e {
        GalleryEntry::Function(f) if f.name == name => Some(f),
        _ => None,
    })
}

pub fn operator_fixture(name: &str) -> Option<OperatorFixture> {
    registry().into_iter().find_map(|e| match e {
        GalleryEntry::Operator(o) if o.name == name => Some(o),
        _ => None,
    })
}

/// JSON index of the registry: name, kind, truth labels, provenance.
pub fn registry_index() -> serde_json::Value {
    let rows: Vec<serde_json::Value> = registry()
        .iter()
        .map(|e| match e {
            GalleryEntry::Function(f) => json!({
                "name": f.name,
                "kind": match f.shape { FunctionShape::Pl(_) => "pl", FunctionShape::BlackBox(_) => "blackbox" },
                "truth": f.truth,
                "provenance": f.provenance,
            }),
            GalleryEntry::Operator(o) => json!({
                "name": o.name,
                "kind": "operator",
                "truth": {
                    "paramonotone": o.paramonotone,
                    "maximal": o.maximal,
                    "strictly_monotone": o.strictly_monotone,
                    "almost_strictly_monotone": o.almost_strictly_monotone,
                },
                "provenance": "operator fixture",
            }),
            GalleryEntry::Graph { name, provenance, .. } => json!({
                "name": name,
                "kind": "graph",
                "provenance": provenance,
            }),
        })
        .collect();
    json!(rows)
}

/// Random valid piecewise-linear function on the dyadic lattice `ℤ/8`
/// (breakpoints, slopes, and values all exactly representable, with
/// products staying exact). Secants recompute exactly in doubles, so
/// conjugation and graph round-trips are bit-reproducible on these inputs.
pub fn random_pl(rng: &mut ChaCha8Rng) -> PlFunction {
    let m = rng.random_range(1..=7usize);
    let mut bp = Vec::with_capacity(m);
    let mut x = rng.random_range(-128..=0i64); // lattice units of 1/8
    for _ in 0..m {
        bp.push(x as f64 / 8.0);
        x += rng.random_range(1..=24i64);
    }
    // Nondecreasing lattice slopes: left tail, m-1 secants, right tail.
    let mut slopes = Vec::with_capacity(m + 1);
    let mut s = rng.random_range(-96..=0i64);
    for _ in 0..=m {
        slopes.push(s as f64 / 8.0);
        // Zero steps keep affine runs in the mix.
        s += rng.random_range(0..=16i64);
    }
    let mut values = Vec::with_capacity(m);
    values.push(rng.random_range(-64..=64i64) as f64 / 8.0);
    for i in 1..m {
        let dv = slopes[i] * (bp[i] - bp[i - 1]);
        values.push(values[i - 1] + dv);
    }
    let left = if rng.random_range(0..4) == 0 {
        Slope::NegInf
    } else {
        Slope::Finite(slopes[0])
    };
    let right = if rng.random_range(0..4) == 0 {
        Slope::PosInf
    } else {
        Slope::Finite(slopes[m])
    };
    PlFunction::new(bp, values, left, right).expect("lattice construction is valid")
}
