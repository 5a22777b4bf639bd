//! Tilt maps and their continuity: the argmin of `f − ⟨x*, ·⟩` equals the
//! conjugate's subdifferential at `x*`, and its Lipschitz modulus can be
//! probed by sampling tilt pairs.

use std::sync::Arc;

use konvex::blackbox::{BoxRegion, SetFn};
use konvex::calculus::{tilt_continuity_probe, tilt_map};
use konvex::gallery::{gradient_blowup_probe, geometric_path, neg_sqrt, rockafellar2d};
use konvex::pl::PlFunction;
use konvex::tol::Tolerance;

fn main() {
    let tol = Tolerance::default();
    let abs = PlFunction::abs();

    // Tilting |x|: a unique minimizer strictly inside the dual interval, a
    // whole ray at the boundary tilt, nothing beyond it.
    for xstar in [0.0, 0.5, 1.0, 2.0] {
        match tilt_map(&abs, xstar) {
            Some(iv) => println!("argmin(|x| − {xstar}·x) = [{}, {}]", iv.lo, iv.hi),
            None => println!("argmin(|x| − {xstar}·x) = ∅ (unbounded below)"),
        }
    }

    // Lipschitz-modulus estimates for three tilt→argmin maps, probed
    // strictly inside the dual domain of |x| (at the endpoints ±1 the
    // argmin set of the tilted |x| becomes an unbounded ray).
    let region = BoxRegion::closed(&[(-0.95, 0.95)]);
    let ident: SetFn = Arc::new(|v: &[f64]| vec![v.to_vec()]);
    let half: SetFn = Arc::new(|v: &[f64]| vec![v.iter().map(|t| t / 2.0).collect()]);
    let abs2 = abs.clone();
    let abs_argmin: SetFn = Arc::new(move |v: &[f64]| {
        tilt_map(&abs2, v[0]).map(|iv| vec![vec![iv.lo]]).unwrap_or_default()
    });
    for (name, oracle) in [("x²/2", ident), ("x²", half), ("|x|", abs_argmin)] {
        let probe = tilt_continuity_probe(&oracle, &region, 300, 0, &tol).unwrap();
        println!("modulus estimate for tilts of {name:5}: {:.6}", probe.modulus_estimate);
    }

    // Gradient blow-up at the boundary separates empty-subdifferential
    // boundary points from interior ones.
    let f = neg_sqrt();
    let path = geometric_path(&[0.0], &[1.0], 0.25, 12);
    println!(
        "\n-√x gradient along x_i = 4^-i: {}",
        gradient_blowup_probe(&f, &path, &tol).unwrap()
    );
    let rock = rockafellar2d();
    let path = geometric_path(&[1.0, 0.0], &[0.0, 1.0], 0.25, 12);
    println!(
        "rockafellar2d gradient along (1, 4^-i): {}",
        gradient_blowup_probe(&rock, &path, &tol).unwrap()
    );
}
