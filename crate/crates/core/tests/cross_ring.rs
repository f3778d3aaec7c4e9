use num_rational::BigRational;

use staircase::feq::{solve_exact, solve_jet, solve_series};
use staircase::modular::solve_jets;
use staircase::symmetry::SymmetryClass;

#[test]
fn jets_are_collapsed_exact_series() {
    for class in SymmetryClass::ALL {
        let exact = solve_exact(class, 20).unwrap();
        for k in 0..=6 {
            assert_eq!(exact.to_jets(k), solve_jet(class, 20, k).unwrap(), "{class} K = {k}");
        }
    }
}

#[test]
fn rational_ring_is_q_at_one() {
    for class in SymmetryClass::ALL {
        let exact = solve_exact(class, 30).unwrap();
        let at_one = solve_series::<BigRational>(class, 30, ()).unwrap();
        assert_eq!(exact.at_q_one(), at_one, "{class}");
    }
}

#[test]
fn modular_jets_match_big_integers() {
    let requests: Vec<_> = SymmetryClass::ALL.iter().map(|&c| (c, 80)).collect();
    let modular = solve_jets(&requests, 5).unwrap();
    for ((class, n), m) in requests.iter().zip(&modular) {
        assert_eq!(m.to_xseries().unwrap(), solve_jet(*class, *n, 5).unwrap(), "{class}");
    }
}
