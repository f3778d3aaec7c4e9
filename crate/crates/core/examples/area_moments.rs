//! Normalized area moments approaching their limits.

use staircase::moments::{convergence_reports, extrapolate_sqrt};
use staircase::symmetry::SymmetryClass;

fn main() -> staircase::Result<()> {
    let ms = [64, 128, 256, 512];
    for class in [SymmetryClass::Full, SymmetryClass::R2, SymmetryClass::Rect] {
        for report in convergence_reports(class, &[1, 2], &ms)? {
            println!("{class} k = {}: limit {}", report.k, report.limit.approx(12));
            for row in &report.rows {
                println!("  m = {:>4}  {}  rel dev {:+.3e}", row.m, row.normalized.to_decimal(12), row.rel_dev_f64());
            }
            println!("  extrapolated {:.6}", extrapolate_sqrt(&report.points())?);
        }
    }
    Ok(())
}
