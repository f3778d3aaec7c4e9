//! Perimeter and area generating functions from the functional equations.

use staircase::feq::solve_exact;
use staircase::symmetry::SymmetryClass;

fn main() -> staircase::Result<()> {
    for class in [SymmetryClass::Full, SymmetryClass::D1D2, SymmetryClass::Square] {
        let s = solve_exact(class, 10)?;
        println!("{class}:");
        for (m, p) in s.coeffs().iter().enumerate().filter(|(_, p)| p.terms().next().is_some()) {
            println!("  x^{m}: {p}");
        }
    }
    Ok(())
}
