//! Second-order strict-convexity tests: nonnegative curvature plus a
//! strictly positive sample in every dyadic subinterval certifies; a flat
//! patch or a zero quadratic form along a segment refutes.

use std::sync::Arc;

use konvex::certify::{second_order_test_1d, second_order_test_nd};
use konvex::gallery::{rockafellar2d, MatrixFn};
use konvex::tol::Tolerance;

fn main() {
    let tol = Tolerance::default();

    // x⁴ on [-1, 1]: curvature 12x² vanishes only at the origin, which has
    // measure zero — certified.
    let v = second_order_test_1d(&|x| 12.0 * x * x, -1.0, 1.0, 1025, &tol);
    println!("x⁴ on [-1,1]:            {v}");

    // The Huber function: quadratic core, affine tails. The tails are
    // dyadic flat patches — refuted.
    let huber_pp = |x: f64| if x.abs() < 1.0 { 1.0 } else { 0.0 };
    let v = second_order_test_1d(&huber_pp, -2.0, 2.0, 1025, &tol);
    println!("Huber on [-2,2]:         {v}");

    // x²: constant positive curvature.
    let v = second_order_test_1d(&|_| 2.0, -1.0, 1.0, 1025, &tol);
    println!("x² on [-1,1]:            {v}");

    // (⟨c, x⟩)² has the rank-one Hessian 2cc^T: along a segment
    // perpendicular to c the quadratic form vanishes identically.
    let c = [1.0, 0.0];
    let h: MatrixFn = Arc::new(move |_: &[f64]| {
        vec![
            vec![2.0 * c[0] * c[0], 2.0 * c[0] * c[1]],
            vec![2.0 * c[1] * c[0], 2.0 * c[1] * c[1]],
        ]
    });
    let v = second_order_test_nd(&h, &[0.0, 0.0], &[0.0, 1.0], 65, &tol);
    println!("rank-one ⊥ segment:      {v}");
    let v = second_order_test_nd(&h, &[0.0, 0.0], &[1.0, 0.3], 65, &tol);
    println!("rank-one generic segm.:  {v}");

    // The two-dimensional fixture along an interior segment of the
    // positive orthant.
    let rock = rockafellar2d();
    let v = second_order_test_nd(rock.hessian.as_ref().unwrap(), &[1.0, 1.0], &[6.0, 2.0], 65, &tol);
    println!("rockafellar2d interior:  {v}");
}
