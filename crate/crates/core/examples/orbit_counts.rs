//! Orbit counts under the subgroups that act on staircase polygons.

use staircase::number::rat;
use staircase::orbits::{orbit_series_at_one, subexp_ratio_table};
use staircase::symmetry::Subgroup;

fn main() -> staircase::Result<()> {
    for h in [Subgroup::Trivial, Subgroup::R2, Subgroup::D1, Subgroup::D1D2] {
        let s = orbit_series_at_one(h, 12)?;
        let counts: Vec<String> = s.coeffs()[2..].iter().map(|c| c.to_string()).collect();
        println!("{:>5}: {}", h.name(), counts.join(" "));
    }
    for h in [Subgroup::D4, Subgroup::HV] {
        if let Err(e) = orbit_series_at_one(h, 12) {
            println!("{:>5}: {e}", h.name());
        }
    }
    println!("\nm^3 r_m / p_m for the half turn:");
    for row in subexp_ratio_table(Subgroup::R2, &rat(3, 1), &[10, 20, 30, 40])? {
        println!("  m = {:>2}: {:.6e}", row.m, row.decimal);
    }
    Ok(())
}
