//! Maximal monotone graphs in the plane.

use serde::de;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::pl::{PlFunction, Slope};

#[derive(Debug, Error)]
pub enum PolylineError {
    #[error("polyline needs at least one finite vertex")]
    NoVertices,
    #[error("vertex {0:?} is not finite")]
    NotFinite([f64; 2]),
    #[error("vertices must be componentwise nondecreasing and consecutive vertices distinct (index {0})")]
    NotMonotone(usize),
    #[error("ray {0:?} must be nonzero with nonnegative finite components")]
    BadRay([f64; 2]),
    #[error("anchor {0} lies outside the domain of the graph")]
    AnchorOutsideDomain(f64),
    #[error("integration requires axis-aligned rays, got {0:?}")]
    NonAxisAlignedRay([f64; 2]),
    #[error(transparent)]
    Pl(#[from] crate::pl::PlError),
}

/// A maximal monotone graph in the plane: a componentwise-nondecreasing
/// chain of vertices together with two rays covering the unbounded ends.
///
/// `head_ray` and `tail_ray` have nonnegative components and point in the
/// increasing direction of the curve: the head ray extends from the first
/// vertex toward `(-∞,-∞)` (direction `-head_ray`), the tail ray from the
/// last vertex toward `(+∞,+∞)`. Because both rays are nonzero, the graph
/// is unbounded in both directions and hence maximal monotone.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonePolyline {
    vertices: Vec<[f64; 2]>,
    head_ray: [f64; 2],
    tail_ray: [f64; 2],
}

fn valid_ray(r: [f64; 2]) -> bool {
    r[0].is_finite() && r[1].is_finite() && r[0] >= 0.0 && r[1] >= 0.0 && (r[0] > 0.0 || r[1] > 0.0)
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

impl MonotonePolyline {
    pub fn new(
        vertices: Vec<[f64; 2]>,
        head_ray: [f64; 2],
        tail_ray: [f64; 2],
    ) -> Result<Self, PolylineError> {
        if vertices.is_empty() {
            return Err(PolylineError::NoVertices);
        }
        for &v in &vertices {
            if !v[0].is_finite() || !v[1].is_finite() {
                return Err(PolylineError::NotFinite(v));
            }
        }
        for i in 1..vertices.len() {
            let (p, q) = (vertices[i - 1], vertices[i]);
            let monotone = q[0] >= p[0] && q[1] >= p[1];
            let distinct = q != p;
            if !monotone || !distinct {
                return Err(PolylineError::NotMonotone(i));
            }
        }
        if !valid_ray(head_ray) {
            return Err(PolylineError::BadRay(head_ray));
        }
        if !valid_ray(tail_ray) {
            return Err(PolylineError::BadRay(tail_ray));
        }
        Ok(MonotonePolyline {
            vertices,
            head_ray,
            tail_ray,
        })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn head_ray(&self) -> [f64; 2] {
        self.head_ray
    }

    pub fn tail_ray(&self) -> [f64; 2] {
        self.tail_ray
    }

    /// The graph of the inverse operator: every vertex and ray with its
    /// coordinates swapped. Exact, and an involution.
    pub fn reflect(&self) -> MonotonePolyline {
        MonotonePolyline {
            vertices: self.vertices.iter().map(|v| [v[1], v[0]]).collect(),
            head_ray: [self.head_ray[1], self.head_ray[0]],
            tail_ray: [self.tail_ray[1], self.tail_ray[0]],
        }
    }

    /// Canonical form: duplicate and collinear vertices removed, vertices
    /// absorbed into parallel rays, rays scaled so the largest component
    /// is 1, and pure lines re-anchored at the axis crossing.
    pub fn canonical(&self) -> MonotonePolyline {
        let mut vs: Vec<[f64; 2]> = Vec::with_capacity(self.vertices.len());
        for &v in &self.vertices {
            if vs.last() == Some(&v) {
                continue;
            }
            // Drop the middle vertex of collinear runs.
            while vs.len() >= 2 {
                let a = vs[vs.len() - 2];
                let b = vs[vs.len() - 1];
                if cross(sub(b, a), sub(v, b)) == 0.0 {
                    vs.pop();
                } else {
                    break;
                }
            }
            vs.push(v);
        }
        // Absorb leading vertices into the head ray.
        while vs.len() >= 2 && cross(self.head_ray, sub(vs[1], vs[0])) == 0.0 {
            vs.remove(0);
        }
        // Absorb trailing vertices into the tail ray.
        while vs.len() >= 2 {
            let n = vs.len();
            if cross(self.tail_ray, sub(vs[n - 1], vs[n - 2])) == 0.0 {
                vs.pop();
            } else {
                break;
            }
        }
        let norm = |r: [f64; 2]| {
            let m = r[0].max(r[1]);
            [r[0] / m, r[1] / m]
        };
        let head = norm(self.head_ray);
        let tail = norm(self.tail_ray);
        if vs.len() == 1 && cross(head, tail) == 0.0 {
            // A full line: re-anchor deterministically.
            let v = vs[0];
            vs[0] = if head[0] == 0.0 {
                [v[0], 0.0] // vertical line
            } else if head[1] == 0.0 {
                [0.0, v[1]] // horizontal line
            } else {
                [0.0, v[1] - v[0] * (head[1] / head[0])]
            };
        }
        MonotonePolyline {
            vertices: vs,
            head_ray: head,
            tail_ray: tail,
        }
    }

    /// Integrates the graph into a potential: returns the convex
    /// piecewise-linear `f` with `f(anchor_x) = anchor_value` whose
    /// subdifferential graph is this polyline (for staircase graphs) or its
    /// chordal interpolation (diagonal segments contribute trapezoids, so
    /// values are exact at vertex abscissae).
    pub fn integrate(&self, anchor_x: f64, anchor_value: f64) -> Result<PlFunction, PolylineError> {
        for r in [self.head_ray, self.tail_ray] {
            if r[0] != 0.0 && r[1] != 0.0 {
                return Err(PolylineError::NonAxisAlignedRay(r));
            }
        }
        // Group vertices by abscissa; record entry/exit ordinates.
        let mut xs: Vec<f64> = Vec::new();
        let mut y_entry: Vec<f64> = Vec::new();
        let mut y_exit: Vec<f64> = Vec::new();
        for &v in &self.vertices {
            if xs.last() == Some(&v[0]) {
                *y_exit.last_mut().unwrap() = v[1];
            } else {
                xs.push(v[0]);
                y_entry.push(v[1]);
                y_exit.push(v[1]);
            }
        }
        let mut values = vec![0.0; xs.len()];
        for i in 1..xs.len() {
            let dx = xs[i] - xs[i - 1];
            values[i] = values[i - 1] + dx * 0.5 * (y_exit[i - 1] + y_entry[i]);
        }
        let left_tail = if self.head_ray[0] > 0.0 {
            Slope::Finite(y_entry[0])
        } else {
            Slope::NegInf
        };
        let right_tail = if self.tail_ray[0] > 0.0 {
            Slope::Finite(*y_exit.last().unwrap())
        } else {
            Slope::PosInf
        };
        let unanchored = PlFunction::new(xs, values, left_tail, right_tail)?;
        let at_anchor = unanchored.eval(anchor_x);
        let Some(at_anchor) = at_anchor.finite_value() else {
            return Err(PolylineError::AnchorOutsideDomain(anchor_x));
        };
        let shift = anchor_value - at_anchor;
        let shifted: Vec<f64> = unanchored.values().iter().map(|v| v + shift).collect();
        Ok(PlFunction::new(
            unanchored.breakpoints().to_vec(),
            shifted,
            unanchored.left_tail(),
            unanchored.right_tail(),
        )?)
    }
}

impl<'de> Deserialize<'de> for MonotonePolyline {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<[f64; 2]>,
            head_ray: [f64; 2],
            tail_ray: [f64; 2],
        }
        let raw = Raw::deserialize(deserializer)?;
        MonotonePolyline::new(raw.vertices, raw.head_ray, raw.tail_ray).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_slope_diagram() {
        // The slope diagram of |x| drawn by hand: horizontal at y=-1, a
        // vertical jump at x=0 from -1 to 1, horizontal at y=1.
        let g = PlFunction::abs().subdiff_polyline();
        assert_eq!(g.vertices(), &[[0.0, -1.0], [0.0, 1.0]]);
        assert_eq!(g.head_ray(), [1.0, 0.0]);
        assert_eq!(g.tail_ray(), [1.0, 0.0]);
    }

    #[test]
    fn indicator_normal_cone_diagram() {
        let g = PlFunction::indicator(0.0, 1.0).subdiff_polyline();
        assert_eq!(g.vertices(), &[[0.0, 0.0], [1.0, 0.0]]);
        assert_eq!(g.head_ray(), [0.0, 1.0]);
        assert_eq!(g.tail_ray(), [0.0, 1.0]);
    }

    #[test]
    fn affine_single_horizontal_line() {
        let g = PlFunction::affine(1.0, 0.0).subdiff_polyline().canonical();
        assert_eq!(g.vertices(), &[[0.0, 1.0]]);
        assert_eq!(g.head_ray(), [1.0, 0.0]);
        assert_eq!(g.tail_ray(), [1.0, 0.0]);
    }

    #[test]
    fn canonical_removes_collinear_and_ray_parallel_vertices() {
        let g = MonotonePolyline::new(
            vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [2.0, 1.0], [2.0, 2.0]],
            [1.0, 0.0],
            [0.0, 2.0],
        )
        .unwrap();
        let c = g.canonical();
        assert_eq!(c.vertices(), &[[2.0, 0.0]]);
        assert_eq!(c.tail_ray(), [0.0, 1.0]);
    }

    #[test]
    fn reflect_is_involution_and_swaps() {
        let g = PlFunction::abs().subdiff_polyline();
        let r = g.reflect();
        assert_eq!(r.vertices(), &[[-1.0, 0.0], [1.0, 0.0]]);
        assert_eq!(r.head_ray(), [0.0, 1.0]);
        assert_eq!(r.reflect(), g);
    }

    #[test]
    fn integrate_horizontal_line_gives_affine() {
        let g = MonotonePolyline::new(vec![[0.0, 2.5]], [1.0, 0.0], [1.0, 0.0]).unwrap();
        let f = g.integrate(0.0, 0.0).unwrap();
        assert_eq!(f.eval(2.0).finite_value(), Some(5.0));
        assert_eq!(f.eval(-2.0).finite_value(), Some(-5.0));
    }

    #[test]
    fn integrate_round_trips_abs() {
        let abs = PlFunction::abs();
        let f = abs.subdiff_polyline().integrate(0.0, 0.0).unwrap();
        for x in [-2.0, -0.5, 0.0, 0.5, 3.0] {
            assert_eq!(f.eval(x), abs.eval(x));
        }
    }

    #[test]
    fn integrate_identity_line_matches_quadratic_at_vertices() {
        // Sampled identity graph: chords of x²/2 between vertices, values
        // exact at the vertex abscissae.
        let vs: Vec<[f64; 2]> = (-4..=4).map(|k| [k as f64 * 0.5, k as f64 * 0.5]).collect();
        let g = MonotonePolyline::new(vs, [1.0, 1.0], [1.0, 1.0]).unwrap();
        // Diagonal rays cannot be integrated into a piecewise-linear tail.
        assert!(matches!(
            g.integrate(0.0, 0.0),
            Err(PolylineError::NonAxisAlignedRay(_))
        ));
        // Replace the rays by domain walls and check the vertex values.
        let g = MonotonePolyline::new(g.vertices().to_vec(), [0.0, 1.0], [0.0, 1.0]).unwrap();
        let f = g.integrate(0.0, 0.0).unwrap();
        for k in -4..=4 {
            let x = k as f64 * 0.5;
            let got = f.eval(x).finite_value().unwrap();
            assert!(
                (got - x * x / 2.0).abs() < 1e-15,
                "x={x}: got {got}, want {}",
                x * x / 2.0
            );
        }
    }

    #[test]
    fn integrate_rejects_anchor_outside_domain() {
        let g = PlFunction::indicator(0.0, 1.0).subdiff_polyline();
        assert!(matches!(
            g.integrate(5.0, 0.0),
            Err(PolylineError::AnchorOutsideDomain(_))
        ));
    }

    #[test]
    fn rejects_non_monotone_chains() {
        assert!(MonotonePolyline::new(vec![[0.0, 1.0], [1.0, 0.0]], [1.0, 0.0], [1.0, 0.0]).is_err());
        assert!(MonotonePolyline::new(vec![[0.0, 0.0], [0.0, 0.0]], [1.0, 0.0], [1.0, 0.0]).is_err());
        assert!(MonotonePolyline::new(vec![[0.0, 0.0]], [0.0, 0.0], [1.0, 0.0]).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let g = PlFunction::abs().subdiff_polyline();
        let j = serde_json::to_string(&g).unwrap();
        let back: MonotonePolyline = serde_json::from_str(&j).unwrap();
        assert_eq!(g, back);
    }
}
