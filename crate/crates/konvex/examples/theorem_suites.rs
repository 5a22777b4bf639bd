//! All three theorem suites across the whole gallery: the equivalences
//! hold on every fixture, and the only recorded disagreements are the two
//! operator counterexamples, exactly as their metadata predicts.

use konvex::certify::{default_envelope_grid, envelope_suite, theorem_almost_suite};
use konvex::gallery::{registry, GalleryEntry};
use konvex::monotone::para_equivalence_suite;
use konvex::tol::Tolerance;

fn main() {
    let tol = Tolerance::default();
    let mut unexpected = 0;

    for entry in registry() {
        match entry {
            GalleryEntry::Function(f) => {
                let rep = theorem_almost_suite(&f, &tol);
                println!("t-almost {:18} agreement = {}", rep.fixture, rep.agreement);
                if !rep.agreement {
                    unexpected += 1;
                }
                if f.dim() == 1 {
                    for lambda in [0.1, 1.0, 10.0] {
                        let grid = default_envelope_grid(&f, lambda, 33);
                        if let Ok(rep) = envelope_suite(&f, lambda, &grid, &tol) {
                            println!(
                                "t-envel  {:18} λ = {lambda:4}: agreement = {}",
                                rep.fixture, rep.agreement
                            );
                            if !rep.agreement {
                                unexpected += 1;
                            }
                        }
                    }
                }
            }
            GalleryEntry::Operator(o) => {
                let rep = para_equivalence_suite(&o, &tol);
                println!(
                    "t-para   {:18} agreement = {:5} (expected {:5}) {}",
                    rep.fixture,
                    rep.agreement,
                    rep.expected_agreement,
                    if rep.as_expected { "" } else { "<-- UNEXPECTED" }
                );
                if !rep.as_expected {
                    unexpected += 1;
                }
            }
            GalleryEntry::Graph { name, .. } => {
                println!("graph    {name:18} (exhibit only)");
            }
        }
    }
    println!("\nunexpected disagreements: {unexpected}");
}
