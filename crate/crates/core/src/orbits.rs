//! Orbit counting under subgroups of the dihedral group via Burnside's lemma.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::feq::Solver;
use crate::number::{rational_to_f64, BigRational};
use crate::series::{Coefficient, LaurentQPoly, XSeries};
use crate::symmetry::{Subgroup, SymmetryClass, SymmetryElement};

/// The class whose series counts the polygons fixed by `g`.
pub fn fix_map(g: SymmetryElement) -> SymmetryClass {
    use SymmetryElement::*;
    match g {
        E => SymmetryClass::Full,
        R | R3 => SymmetryClass::Square,
        R2 => SymmetryClass::R2,
        D1 => SymmetryClass::D1,
        D2 => SymmetryClass::D2,
        H | V => SymmetryClass::Rect,
    }
}

/// Rings in which an orbit average can be checked for integrality.
pub trait OrbitRing: Coefficient {
    /// `self / d` when it is a nonnegative integer count.
    fn orbit_count(&self, d: i64) -> Option<Self>;
}

impl OrbitRing for LaurentQPoly {
    fn orbit_count(&self, d: i64) -> Option<Self> {
        let q = self.div_exact(d)?;
        let nonnegative = q.terms().all(|(_, c)| !c.is_negative());
        nonnegative.then_some(q)
    }
}

impl OrbitRing for BigRational {
    fn orbit_count(&self, d: i64) -> Option<Self> {
        let q = self.div_exact(d)?;
        (q.is_integer() && !q.is_negative()).then_some(q)
    }
}

/// `Σ_{g ∈ H} Fix(g)`, truncated at `x^n`.
pub fn burnside_sum<C: Coefficient>(solver: &mut Solver<C>, h: Subgroup, n: usize) -> Result<XSeries<C>> {
    let mut total = XSeries::zero(solver.ctx().clone(), n);
    for &g in h.elements() {
        total = total.add(&solver.series(fix_map(g), n)?.truncate(n));
    }
    Ok(total)
}

/// Orbit generating function of `H`, truncated at `x^n`.
///
/// Fails at the first half-perimeter whose average is not a nonnegative integer.
pub fn orbit_series<C: OrbitRing>(solver: &mut Solver<C>, h: Subgroup, n: usize) -> Result<XSeries<C>> {
    let sum = burnside_sum(solver, h, n)?;
    let order = h.order() as i64;
    let coeffs = sum
        .coeffs()
        .iter()
        .enumerate()
        .map(|(m, c)| {
            c.orbit_count(order).ok_or_else(|| Error::BurnsideIntegrality {
                subgroup: h.name().to_string(),
                m,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(XSeries::new(solver.ctx().clone(), coeffs, n))
}

/// Exact orbit series for `H` to order `n`.
pub fn orbit_series_exact(h: Subgroup, n: usize) -> Result<XSeries<LaurentQPoly>> {
    orbit_series(&mut Solver::new(()), h, n)
}

/// Orbit counts by perimeter only.
pub fn orbit_series_at_one(h: Subgroup, n: usize) -> Result<XSeries<BigRational>> {
    orbit_series(&mut Solver::new(()), h, n)
}

/// `subgroup,m,n,orbit_count`.
pub fn write_orbit_csv<W: Write>(out: W, h: Subgroup, s: &XSeries<LaurentQPoly>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["subgroup", "m", "n", "orbit_count"])?;
    for (m, p) in s.coeffs().iter().enumerate() {
        for (n, c) in p.terms() {
            w.write_record([h.name(), &m.to_string(), &n.to_string(), &c.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One row of [`subexp_ratio_table`].
#[derive(Clone, Debug)]
pub struct RatioRow {
    pub m: usize,
    /// `Σ_{g ≠ e} [x^m] Fix(g)` at `q = 1`.
    pub r: BigInt,
    /// `[x^m] P` at `q = 1`.
    pub p: BigInt,
    /// `m^α r / p` when `α` is an integer.
    pub exact: Option<BigRational>,
    pub decimal: f64,
}

/// `m^α r_m / p_m` for `m` in `ms`.
///
/// Exact when `α` is an integer or `r_m = 0`; otherwise only the decimal is filled.
pub fn subexp_ratio_table(h: Subgroup, alpha: &BigRational, ms: &[usize]) -> Result<Vec<RatioRow>> {
    let Some(&n) = ms.iter().max() else {
        return Ok(Vec::new());
    };
    if ms.iter().any(|&m| m < 2) {
        return Err(Error::OutOfRange("ratio table needs m >= 2".into()));
    }
    let mut solver = Solver::<BigRational>::new(());
    let full = solver.series(SymmetryClass::Full, n)?.truncate(n);
    let mut rest = XSeries::zero((), n);
    for &g in h.elements().iter().filter(|&&g| g != SymmetryElement::E) {
        rest = rest.add(&solver.series(fix_map(g), n)?.truncate(n));
    }
    ms.iter()
        .map(|&m| {
            let r = rest.coeffs()[m].to_integer();
            let p = full.coeffs()[m].to_integer();
            let base = BigRational::new(r.clone(), p.clone());
            let exact = if r.is_zero() {
                Some(<BigRational as Zero>::zero())
            } else if alpha.is_integer() {
                let a = alpha.to_integer().to_i32().ok_or_else(|| Error::OutOfRange(format!("alpha {alpha}")))?;
                let mm = BigRational::from_integer(BigInt::from(m));
                Some(&base * num_traits::pow::Pow::pow(&mm, a))
            } else {
                None
            };
            let decimal = match &exact {
                Some(e) => rational_to_f64(e),
                None => (rational_to_f64(alpha) * (m as f64).ln() + rational_to_f64(&base).ln()).exp(),
            };
            Ok(RatioRow { m, r, p, exact, decimal })
        })
        .collect()
}

/// `subgroup,alpha,m,ratio_num,ratio_den,ratio_decimal`.
pub fn write_ratio_csv<W: Write>(out: W, h: Subgroup, alpha: &BigRational, rows: &[RatioRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["subgroup", "alpha", "m", "ratio_num", "ratio_den", "ratio_decimal"])?;
    for row in rows {
        let (num, den) = match &row.exact {
            Some(e) => (e.numer().to_string(), e.denom().to_string()),
            None => (String::new(), String::new()),
        };
        w.write_record([
            h.name().to_string(),
            alpha.to_string(),
            row.m.to_string(),
            num,
            den,
            format!("{:.15e}", row.decimal),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feq::solve_exact;
    use crate::number::rat;

    #[test]
    fn fix_map_table() {
        assert_eq!(fix_map(SymmetryElement::R), SymmetryClass::Square);
        assert_eq!(fix_map(SymmetryElement::H), SymmetryClass::Rect);
        assert_eq!(fix_map(SymmetryElement::E), SymmetryClass::Full);
    }

    #[test]
    fn trivial_group_is_full() {
        assert_eq!(orbit_series_exact(Subgroup::Trivial, 12).unwrap(), solve_exact(SymmetryClass::Full, 12).unwrap());
    }

    #[test]
    fn unit_square_is_one_orbit() {
        let mut solver = Solver::<LaurentQPoly>::new(());
        let sum = burnside_sum(&mut solver, Subgroup::D4, 2).unwrap();
        assert_eq!(sum.coeffs()[2], LaurentQPoly::monomial(8, 1));
    }

    #[test]
    fn ratio_examples() {
        let rows = subexp_ratio_table(Subgroup::D4, &rat(0, 1), &[2]).unwrap();
        assert_eq!(rows[0].exact, Some(rat(7, 1)));
        let rows = subexp_ratio_table(Subgroup::Trivial, &rat(5, 2), &[2, 7, 9]).unwrap();
        assert!(rows.iter().all(|r| r.exact == Some(rat(0, 1))));
        let rows = subexp_ratio_table(Subgroup::R2, &rat(1, 2), &[9]).unwrap();
        assert!(rows[0].exact.is_none() && rows[0].decimal > 0.0);
    }
}
