//! The monotonicity taxonomy on the two standard counterexamples: the
//! rotation by π/2 (maximal, not paramonotone) and the gap operator
//! (paramonotone, not maximal), against the identity as the reference.

use konvex::gallery::{identity_operator1d, piecewise_nonmaximal, skew_operator2d};
use konvex::monotone::{
    check_almost_strictly_monotone, check_monotone, check_paramonotone, check_strictly_monotone,
    para_equivalence_suite,
};
use konvex::tol::Tolerance;

fn main() {
    let tol = Tolerance::default();

    for fixture in [identity_operator1d(), piecewise_nonmaximal()] {
        println!("== {} ==", fixture.name);
        println!("  monotone:               {}", check_monotone(&fixture.graph, &tol));
        println!(
            "  strictly monotone:      {}",
            check_strictly_monotone(&fixture.graph, &tol)
        );
        println!(
            "  almost strictly mono.:  {}",
            check_almost_strictly_monotone(&fixture.graph, &fixture.oracle, 17, &tol)
        );
        println!(
            "  paramonotone:           {}",
            check_paramonotone(&fixture.graph, Some(&fixture.oracle), &tol).unwrap()
        );
        println!();
    }

    let skew = skew_operator2d();
    println!("== {} ==", skew.name);
    println!("  monotone:               {}", check_monotone(&skew.graph, &tol));
    println!(
        "  strictly monotone:      {}",
        check_strictly_monotone(&skew.graph, &tol)
    );
    println!(
        "  paramonotone:           {}",
        check_paramonotone(&skew.graph, Some(&skew.oracle), &tol).unwrap()
    );
    println!();

    // The six-way equivalence suite: agreement holds exactly on the
    // paramonotone + maximal fixture; the two counterexamples disagree in
    // the expected pattern.
    for fixture in [identity_operator1d(), skew_operator2d(), piecewise_nonmaximal()] {
        let rep = para_equivalence_suite(&fixture, &tol);
        println!(
            "suite on {:>22}: agreement = {:5}, expected = {:5}, as expected = {}",
            rep.fixture, rep.agreement, rep.expected_agreement, rep.as_expected
        );
        for c in &rep.conditions {
            println!("    {:32} {}", c.name, c.verdict);
        }
    }
}
