//! The two-dimensional dichotomy: strictly convex on the open positive
//! orthant (where the subdifferential lives), identically zero on the
//! boundary ray, hence almost strictly convex but not strictly convex.

use konvex::blackbox::BoxRegion;
use konvex::certify::{
    certify_almost_strict_convexity, certify_strict_convexity_sampled, theorem_almost_suite,
};
use konvex::gallery::rockafellar2d;
use konvex::tol::Tolerance;
use konvex::verdict::Witness;

fn main() {
    let tol = Tolerance::default();
    let fixture = rockafellar2d();
    let bb = fixture.blackbox().unwrap();

    println!("f(1, 1)   = {}", fixture.eval(&[1.0, 1.0]));
    println!("f(3, 0)   = {}", fixture.eval(&[3.0, 0.0]));
    println!("f(-1, 1)  = {}", fixture.eval(&[-1.0, 1.0]));

    // Strict convexity certified on an interior box of the orthant.
    let interior = BoxRegion::closed(&[(0.1, 10.0), (0.1, 10.0)]);
    let v = certify_strict_convexity_sampled(bb, &interior, 2000, 7, &tol).unwrap();
    println!("\nstrict convexity on (0.1,10)²:      {v}");

    // Almost strict convexity over the declared subdifferential region.
    let v =
        certify_almost_strict_convexity(bb, fixture.subdiff_region.as_ref().unwrap(), 2000, 7, &tol)
            .unwrap();
    println!("almost strict convexity on dom ∂f:  {v}");

    // Including the boundary ray flips the verdict, with an affine
    // witness segment on the ray itself.
    let v = certify_strict_convexity_sampled(bb, &fixture.sample_region, 2000, 7, &tol).unwrap();
    println!("strict convexity over the full dom: {v}");
    if let Some(Witness::Segment(w)) = &v.witness {
        println!(
            "  witness segment on the ray: ({:.4}, {:.4}) -- ({:.4}, {:.4})",
            w.x0[0], w.x0[1], w.x1[0], w.x1[1]
        );
    }

    // The equivalence suite ties the chord-level and subdifferential-level
    // characterizations together.
    let rep = theorem_almost_suite(&fixture, &tol);
    println!("\nsuite agreement: {}", rep.agreement);
    for c in &rep.conditions {
        println!("  {:40} {}", c.name, c.verdict);
    }
}
