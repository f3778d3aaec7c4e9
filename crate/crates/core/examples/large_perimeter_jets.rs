//! Area jets at large perimeter through the multi-modular solver.

use std::time::Instant;

use staircase::modular::solve_jets;
use staircase::number::{rational_to_f64, BigRational};
use staircase::symmetry::SymmetryClass;

fn main() -> staircase::Result<()> {
    let n = 1024;
    let start = Instant::now();
    let s = solve_jets(&[(SymmetryClass::Full, n)], 2)?.remove(0);
    let jet = s.coefficient(n)?;
    println!("solved Full to x^{n} with jet order 2 in {:.2?}", start.elapsed());
    println!("polygons:        {} digits", jet.slot(0).to_string().len());
    let mean = BigRational::new(jet.slot(1).clone(), jet.slot(0).clone());
    println!("mean area:       {:.4}", rational_to_f64(&mean));
    println!("mean / m^(3/2):  {:.6}", rational_to_f64(&mean) / (n as f64).powf(1.5));
    Ok(())
}
