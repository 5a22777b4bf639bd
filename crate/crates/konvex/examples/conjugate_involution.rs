//! Exact Fenchel conjugation on the piecewise-linear class: worked
//! conjugates, the biconjugation involution, and the two routes to the
//! dual subdifferential graph.

use konvex::calculus::conjugate;
use konvex::pl::{PlFunction, Slope};

fn show(name: &str, f: &PlFunction) {
    println!(
        "{name}: breakpoints {:?}, values {:?}, tails ({:?}, {:?})",
        f.breakpoints(),
        f.values(),
        f.left_tail(),
        f.right_tail()
    );
}

fn main() {
    // |x|* is the indicator of [-1, 1].
    let abs = PlFunction::abs();
    let abs_star = conjugate(&abs);
    show("|x|", &abs);
    show("|x|*", &abs_star);
    println!("|x|*(0.5) = {}", abs_star.eval(0.5));
    println!("|x|*(1.5) = {}", abs_star.eval(1.5));

    // The indicator of a point dualizes to an affine function and back.
    let point = PlFunction::point_indicator(2.0, 0.0);
    let support = conjugate(&point);
    show("ind{2}", &point);
    show("ind{2}* (affine slope 2)", &support);

    // Biconjugation reproduces the function: check values on a grid.
    let f = PlFunction::new(
        vec![-2.0, 0.5, 1.0, 4.0],
        vec![3.0, 0.5, 1.0, 7.0],
        Slope::NegInf,
        Slope::Finite(5.0),
    )
    .unwrap();
    let f_ss = conjugate(&conjugate(&f));
    let max_err = (-30..=30)
        .map(|k| k as f64 / 5.0)
        .map(|x| match (f.eval(x).finite_value(), f_ss.eval(x).finite_value()) {
            (Some(a), Some(b)) => (a - b).abs(),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    println!("max |f - f**| on a grid: {max_err:.3e}");

    // Graph duality: reflecting the subdifferential graph equals taking
    // the subdifferential graph of the conjugate.
    let via_conjugate = conjugate(&f).subdiff_polyline().canonical();
    let via_reflection = f.subdiff_polyline().reflect().canonical();
    println!(
        "graph duality (vertex-for-vertex): {}",
        via_conjugate == via_reflection
    );
}
