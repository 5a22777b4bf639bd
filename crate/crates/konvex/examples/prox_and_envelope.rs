//! Proximal mapping and Moreau envelope of |x|: soft thresholding, the
//! Huber envelope, its gradient identity, and Moreau's decomposition.

use konvex::calculus::{
    conjugate, envelope_gradient, moreau_decomposition_check, moreau_envelope, prox,
};
use konvex::pl::PlFunction;
use konvex::tol::Tolerance;

fn main() {
    let abs = PlFunction::abs();
    let lambda = 1.0;

    println!("x, f, envelope (Huber), prox (soft threshold), grad envelope");
    for k in -8..=8 {
        let x = k as f64 * 0.5;
        println!(
            "{:5.2}, {:5.2}, {:6.3}, {:5.2}, {:5.2}",
            x,
            abs.eval(x).raw(),
            moreau_envelope(&abs, lambda, x),
            prox(&abs, lambda, x),
            envelope_gradient(&abs, lambda, x),
        );
    }

    // The envelope gradient agrees with central differences away from the
    // prox kinks.
    let h = 1e-4;
    let x = 1.7;
    let fd = (moreau_envelope(&abs, lambda, x + h) - moreau_envelope(&abs, lambda, x - h))
        / (2.0 * h);
    println!(
        "\ngradient identity at x = {x}: analytic {}, central difference {fd}",
        envelope_gradient(&abs, lambda, x)
    );

    // Moreau's decomposition: prox of f plus the scaled prox of f* add up
    // to the identity.
    let v = moreau_decomposition_check(&abs, lambda, &[-4.0, -0.3, 0.0, 2.0, 7.5], &Tolerance::default());
    println!("Moreau decomposition on a few points: {v}");
    let clamp = conjugate(&abs);
    println!(
        "prox of |x| at 2: {}; prox of its conjugate (projection onto [-1,1]) at 2: {}",
        prox(&abs, lambda, 2.0),
        prox(&clamp, 1.0 / lambda, 2.0)
    );
}
