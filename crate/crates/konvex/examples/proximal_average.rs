//! The proximal average: its envelope is the convex combination of the
//! inputs' envelopes, in both the primal and the dual parameter.

use konvex::calculus::{
    conjugate, moreau_envelope, prox_average_eval_points, proximal_average, ProxAverageParams,
};
use konvex::pl::PlFunction;

fn main() {
    // Two point indicators: their proximal average with α = 1/2, λ = 1 is
    // the midpoint indicator shifted by a constant, and its envelope is
    // the average of two shifted parabolas.
    let f1 = PlFunction::point_indicator(-1.0, 0.0);
    let f2 = PlFunction::point_indicator(1.0, 0.0);
    let params = ProxAverageParams::new(1.0, 0.5).unwrap();
    let pa = proximal_average(&f1, &f2, &params).unwrap();
    println!(
        "average of ind{{-1}} and ind{{1}}: breakpoints {:?}, values {:?}",
        pa.function.breakpoints(),
        pa.function.values()
    );
    println!("chording bound: {:.3e}", pa.chording_bound);
    for k in -4..=4 {
        let x = k as f64 * 0.5;
        let lhs = moreau_envelope(&pa.function, 1.0, x);
        let rhs = ((x + 1.0) * (x + 1.0) + (x - 1.0) * (x - 1.0)) / 4.0;
        println!("x = {x:5.2}: e_1 f(x) = {lhs:.6}, mixed envelopes = {rhs:.6}");
    }

    // A generic pair: verify the primal envelope identity at the points
    // λ·y for interior slopes y, where the chorded function's envelope
    // matches the exact one up to the chording bound.
    let g1 = PlFunction::abs();
    let g2 = PlFunction::hinge();
    let params = ProxAverageParams::new(2.0, 0.25).unwrap();
    let pa = proximal_average(&g1, &g2, &params).unwrap();
    let ys: Vec<f64> = (-8..=8).map(|k| k as f64 * 0.1).collect();
    let xs = prox_average_eval_points(&params, &ys);
    let mut worst: f64 = 0.0;
    for &x in &xs {
        let lhs = moreau_envelope(&pa.function, params.lambda, x);
        let rhs = 0.25 * moreau_envelope(&g1, params.lambda, x)
            + 0.75 * moreau_envelope(&g2, params.lambda, x);
        worst = worst.max((lhs - rhs).abs());
    }
    println!(
        "\nabs/hinge average (λ=2, α=1/4): max primal-identity deviation {worst:.3e} \
         against chording bound {:.3e}",
        pa.chording_bound
    );

    // The dual identity with parameter 1/λ, through the exact conjugates,
    // evaluated at the interior slopes themselves.
    let (c, c1, c2) = (
        conjugate(&pa.function),
        conjugate(&g1),
        conjugate(&g2),
    );
    let mu = 1.0 / params.lambda;
    let mut worst: f64 = 0.0;
    for &v in ys.iter().filter(|y| y.abs() < 0.7) {
        let lhs = moreau_envelope(&c, mu, v);
        let rhs = 0.25 * moreau_envelope(&c1, mu, v) + 0.75 * moreau_envelope(&c2, mu, v);
        worst = worst.max((lhs - rhs).abs());
    }
    println!("dual-identity deviation on interior slopes: {worst:.3e}");
}
