//! Brute-force counts of staircase polygons by symmetry class.

use staircase::enumerate::enumerate_counts;
use staircase::symmetry::SymmetryClass;

fn main() -> staircase::Result<()> {
    let m_max = 10;
    let table = enumerate_counts(m_max)?;
    print!("{:>6}", "m");
    for class in SymmetryClass::ALL {
        print!("{:>8}", class.name());
    }
    println!();
    for m in 2..=m_max {
        print!("{m:>6}");
        for class in SymmetryClass::ALL {
            print!("{:>8}", table.class_total(class, m));
        }
        println!();
    }
    println!("\nfull, m = 6 by area: {:?}", table.area_distribution(SymmetryClass::Full, 6));
    Ok(())
}
