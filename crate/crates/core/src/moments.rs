//! Finite-size area moments in the uniform fixed-perimeter ensemble.
//!
//! The `δ`-jet of a class series at `x^m` holds `Σ_P C(area(P), j)` in slot
//! `j`, so `E[(X_m)_k] = k! · slot_k / slot_0`.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::feq::solve_jet;
use crate::limits::{binding, class_limit_moment};
use crate::modular::{solve_jets, MAX_SLOTS};
use crate::number::{factorial, rational_to_f64, BigRational, RadicalConstant, Surd};
use crate::series::DeltaJet;
use crate::symmetry::SymmetryClass;

/// Digits used when comparing against limit constants.
pub const COMPARE_DIGITS: usize = 30;

/// `E[(X)_k]` for `k = 0..=k_max` from the jet at one perimeter.
pub fn factorial_moments_from_jet(
    class: SymmetryClass,
    m: usize,
    jet: &DeltaJet,
    k_max: usize,
) -> Result<Vec<BigRational>> {
    if jet.order() < k_max {
        return Err(Error::OutOfRange(format!(
            "jet order {} below moment order {k_max}",
            jet.order()
        )));
    }
    let total = jet.slot(0);
    if total.is_zero() {
        return Err(Error::EmptyClass { class: class.to_string(), m });
    }
    Ok((0..=k_max)
        .map(|k| BigRational::new(factorial(k as u64) * jet.slot(k), total.clone()))
        .collect())
}

/// Exact jets of a class at the given perimeter indices, `δ`-order `k`.
pub fn class_jets(class: SymmetryClass, ms: &[usize], k: usize) -> Result<Vec<DeltaJet>> {
    let index = binding(class).index;
    let degrees: Vec<usize> = ms.iter().map(|&m| index.x_degree(m)).collect();
    let n = degrees.iter().copied().max().unwrap_or(2).max(2);
    if k < MAX_SLOTS {
        let s = solve_jets(&[(class, n)], k)?.remove(0);
        degrees.iter().map(|&d| s.coefficient(d)).collect()
    } else {
        let s = solve_jet(class, n, k)?;
        Ok(degrees.iter().map(|&d| s.coeffs()[d].clone()).collect())
    }
}

/// `E[(X_m)_k]` for `k = 0..=k_max`; `m` is the class's perimeter index.
pub fn factorial_moments(class: SymmetryClass, m: usize, k_max: usize) -> Result<Vec<BigRational>> {
    let jet = class_jets(class, &[m], k_max)?.remove(0);
    factorial_moments_from_jet(class, m, &jet, k_max)
}

/// Stirling numbers of the second kind `S(n, j)` for `n, j <= k_max`.
fn stirling2(k_max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); k_max + 1]; k_max + 1];
    s[0][0] = BigInt::one();
    for n in 1..=k_max {
        for j in 1..=n {
            s[n][j] = BigInt::from(j) * &s[n - 1][j] + &s[n - 1][j - 1];
        }
    }
    s
}

/// Power moments `E[X^k] = Σ_j S(k, j) E[(X)_j]`.
pub fn power_moments(factorials: &[BigRational]) -> Vec<BigRational> {
    let Some(k_max) = factorials.len().checked_sub(1) else {
        return Vec::new();
    };
    let s = stirling2(k_max);
    (0..=k_max)
        .map(|k| {
            (0..=k).fold(BigRational::zero(), |acc, j| {
                acc + BigRational::from_integer(s[k][j].clone()) * &factorials[j]
            })
        })
        .collect()
}

/// `c^k E[X^k] / (s·m)^(ρk)` for the class binding, exact up to one `√(s·m)`.
pub fn normalized_moment(class: SymmetryClass, m: usize, k: usize, power_moment: &BigRational) -> Surd {
    let b = binding(class);
    let scaled_m = BigRational::from_integer(BigInt::from(m)) * &b.index_scale;
    let ck = num_traits::pow(b.constant.clone(), k);
    let v = power_moment * ck;
    // ρ k = e/2 with e = 2ρk
    let e = (b.exponent.clone() * BigRational::from_integer(BigInt::from(2 * k)))
        .to_integer()
        .to_usize()
        .expect("scaling exponent is a small half-integer");
    let whole = num_traits::pow(scaled_m.clone(), e / 2);
    if e % 2 == 0 {
        Surd::rational(v / whole)
    } else {
        Surd::new(v / (whole * &scaled_m), scaled_m, 0)
    }
}

/// One perimeter of a [`MomentReport`].
#[derive(Clone, Debug)]
pub struct MomentRow {
    pub m: usize,
    pub factorial_moment: BigRational,
    pub power_moment: BigRational,
    pub normalized: Surd,
    /// `normalized / limit - 1`, rounded to [`COMPARE_DIGITS`] significant digits.
    pub rel_dev: BigRational,
}

impl MomentRow {
    pub fn rel_dev_f64(&self) -> f64 {
        rational_to_f64(&self.rel_dev)
    }
}

#[derive(Clone, Debug)]
pub struct MomentReport {
    pub class: SymmetryClass,
    pub k: usize,
    pub limit: RadicalConstant,
    pub rows: Vec<MomentRow>,
}

/// Reports for every `k` in `ks`, sharing one series solve.
pub fn convergence_reports(class: SymmetryClass, ks: &[usize], ms: &[usize]) -> Result<Vec<MomentReport>> {
    if ms.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange("perimeter list must be increasing".into()));
    }
    let k_max = ks.iter().copied().max().unwrap_or(1);
    let jets = class_jets(class, ms, k_max)?;
    let mut per_m = Vec::with_capacity(ms.len());
    for (&m, jet) in ms.iter().zip(&jets) {
        let f = factorial_moments_from_jet(class, m, jet, k_max)?;
        let p = power_moments(&f);
        per_m.push((m, f, p));
    }
    Ok(ks
        .iter()
        .map(|&k| {
            let limit = class_limit_moment(class, k);
            let target = limit.to_surd();
            let rows = per_m
                .iter()
                .map(|(m, f, p)| {
                    let normalized = normalized_moment(class, *m, k, &p[k]);
                    let ratio = normalized.div(&target).expect("limit moments are nonzero");
                    MomentRow {
                        m: *m,
                        factorial_moment: f[k].clone(),
                        power_moment: p[k].clone(),
                        rel_dev: ratio.shifted_approx(&-BigRational::one(), COMPARE_DIGITS),
                        normalized,
                    }
                })
                .collect();
            MomentReport { class, k, limit, rows }
        })
        .collect())
}

pub fn convergence_report(class: SymmetryClass, k: usize, ms: &[usize]) -> Result<MomentReport> {
    Ok(convergence_reports(class, &[k], ms)?.remove(0))
}

impl MomentReport {
    /// `class,k,m,factorial_moment,power_moment,normalized,limit,rel_dev,digits`.
    pub fn write_csv<W: Write>(reports: &[MomentReport], out: W, digits: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "class",
            "k",
            "m",
            "factorial_moment",
            "power_moment",
            "normalized",
            "limit",
            "rel_dev",
            "digits",
        ])?;
        for r in reports {
            let limit = r.limit.approx(digits);
            for row in &r.rows {
                w.write_record([
                    r.class.name().to_string(),
                    r.k.to_string(),
                    row.m.to_string(),
                    row.factorial_moment.to_string(),
                    row.power_moment.to_string(),
                    row.normalized.to_decimal(digits),
                    limit.clone(),
                    row.normalized
                        .div(&r.limit.to_surd())
                        .expect("nonzero limit")
                        .minus_one_decimal(digits),
                    digits.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Whitespace-separated `m normalized` lines for plotting.
    pub fn write_plot_data<W: Write>(&self, mut out: W, digits: usize) -> Result<()> {
        for row in &self.rows {
            writeln!(out, "{} {}", row.m, row.normalized.to_decimal(digits))?;
        }
        Ok(())
    }

    /// `(m, normalized)` pairs as floats.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.m as f64, r.normalized.to_f64())).collect()
    }
}

/// Intercept `a` of the least-squares fit `v ≈ a + b / √m`.
///
/// The `m^(-1/2)` correction is a heuristic model for finite-size effects.
pub fn extrapolate_sqrt(values: &[(f64, f64)]) -> Result<f64> {
    if values.len() < 3 {
        return Err(Error::DegenerateFit(format!("{} points, need 3", values.len())));
    }
    if values.iter().any(|&(m, v)| !(m > 0.0) || !v.is_finite()) {
        return Err(Error::DegenerateFit("nonpositive index or non-finite value".into()));
    }
    let n = values.len() as f64;
    let us: Vec<f64> = values.iter().map(|(m, _)| 1.0 / m.sqrt()).collect();
    let u_mean = us.iter().sum::<f64>() / n;
    let v_mean = values.iter().map(|(_, v)| v).sum::<f64>() / n;
    let (mut suu, mut suv) = (0.0, 0.0);
    for (u, (_, v)) in us.iter().zip(values) {
        suu += (u - u_mean) * (u - u_mean);
        suv += (u - u_mean) * (v - v_mean);
    }
    if suu <= f64::EPSILON * u_mean * u_mean {
        return Err(Error::DegenerateFit("all indices coincide".into()));
    }
    Ok(v_mean - suv / suu * u_mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;
    use SymmetryClass::*;

    #[test]
    fn full_at_small_perimeters() {
        assert_eq!(factorial_moments(Full, 2, 1).unwrap()[1], rat(1, 1));
        let f = factorial_moments(Full, 4, 2).unwrap();
        assert_eq!(f[1], rat(16, 5));
        assert_eq!(f[2], rat(36, 5));
        assert_eq!(power_moments(&f)[2], rat(52, 5));
    }

    #[test]
    fn constant_variable() {
        let p = power_moments(&[rat(1, 1), rat(1, 1), rat(0, 1)]);
        assert_eq!(p, [rat(1, 1), rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn empty_class() {
        // quarter-perimeter indexing never lands on odd half-perimeters, so go through the jet
        let jet = DeltaJet::zero(1);
        assert!(matches!(
            factorial_moments_from_jet(D1, 3, &jet, 1),
            Err(Error::EmptyClass { .. })
        ));
    }

    #[test]
    fn rectangle_mean() {
        for m in [2usize, 3, 10, 57] {
            let f = factorial_moments(Rect, m, 1).unwrap();
            assert_eq!(f[1], rat((m * (m + 1)) as i64, 6));
            let n = normalized_moment(Rect, m, 1, &f[1]);
            assert_eq!(n.as_rational().unwrap(), rat(2, 3) + rat(2, 3 * m as i64));
        }
    }

    #[test]
    fn squares_are_concentrated() {
        let r = convergence_report(Square, 3, &[1, 2, 5, 9]).unwrap();
        for row in &r.rows {
            assert_eq!(row.normalized.as_rational().unwrap(), rat(1, 1));
            assert!(row.rel_dev.is_zero());
        }
    }

    #[test]
    fn fits() {
        let exact: Vec<(f64, f64)> = [64.0, 256.0, 1024.0]
            .iter()
            .map(|&m: &f64| (m, 2.0 / 3.0 + 2.0 / (3.0 * m)))
            .collect();
        assert!((extrapolate_sqrt(&exact).unwrap() - 2.0 / 3.0).abs() < 1e-2);
        let ones = [(10.0, 1.0), (20.0, 1.0), (40.0, 1.0)];
        assert!((extrapolate_sqrt(&ones).unwrap() - 1.0).abs() < 1e-12);
        let model: Vec<(f64, f64)> = [4.0, 16.0, 64.0].iter().map(|&m: &f64| (m, 3.0 + 1.0 / m.sqrt())).collect();
        assert!((extrapolate_sqrt(&model).unwrap() - 3.0).abs() < 1e-12);
        assert!(extrapolate_sqrt(&ones[..2]).is_err());
        assert!(extrapolate_sqrt(&[(5.0, 1.0), (5.0, 2.0), (5.0, 3.0)]).is_err());
    }
}
