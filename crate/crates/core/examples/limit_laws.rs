//! Exact moments of the limit laws and their auxiliary sequences.

use staircase::limits::{g_coeff, law_moment, omega, phi, LawKind};

fn main() {
    for law in [LawKind::Airy, LawKind::Meander, LawKind::Beta, LawKind::Dirac] {
        println!("{}:", law.name());
        for k in 0..=4 {
            let v = law_moment(law, k);
            println!("  E[L^{k}] = {v} = {}", v.approx(15));
        }
    }
    for k in 1..=5 {
        println!("phi_{k} = {}  omega_{k} = {}  g_{k} = {}", phi(k), omega(k), g_coeff(k));
    }
}
