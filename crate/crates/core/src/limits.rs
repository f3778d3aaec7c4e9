//! Limit laws of the area: Airy, meander area, `β(1, 1/2)` and the point mass at 1.
//!
//! Moments are exact elements of `Q · 2^(Z/2) · π^(Z/2)`, driven by the
//! quadratic recursions for `φ_k` (Airy) and `ω_k` (meander), together with
//! the coefficient sequences `f_k`, `g_k` that arise from the dominant balance
//! of the moment generating functions.

use std::fmt;
use std::io::Write;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number::{factorial, gamma_half, rat, BigRational, RadicalConstant};
use crate::symmetry::SymmetryClass;

/// Orders precomputed once and shared.
pub const MEMO_K: usize = 64;

/// `γ_k = 3k/2 - 1/2`.
pub fn gamma_k(k: usize) -> BigRational {
    rat(3 * k as i64 - 1, 2)
}

/// `α_k = 3k/2 + 1/2`.
pub fn alpha_k(k: usize) -> BigRational {
    rat(3 * k as i64 + 1, 2)
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// `a + b√2` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq)]
struct QSqrt2(BigRational, BigRational);

impl QSqrt2 {
    fn rational(a: BigRational) -> Self {
        Self(a, BigRational::zero())
    }

    /// `2^(e/2)`
    fn pow_sqrt2(e: i64) -> Self {
        let half = e.div_euclid(2);
        if e % 2 == 0 {
            Self::rational(pow2(half))
        } else {
            Self(BigRational::zero(), pow2(half))
        }
    }

    fn add(&self, o: &Self) -> Self {
        Self(&self.0 + &o.0, &self.1 + &o.1)
    }

    fn mul(&self, o: &Self) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        Self(
            &self.0 * &o.0 + two * &self.1 * &o.1,
            &self.0 * &o.1 + &self.1 * &o.0,
        )
    }

    fn to_radical(&self) -> Option<RadicalConstant> {
        match (self.0.is_zero(), self.1.is_zero()) {
            (_, true) => Some(RadicalConstant::rational(self.0.clone())),
            (true, false) => Some(RadicalConstant::new(self.1.clone(), 1, 0)),
            _ => None,
        }
    }
}

struct Sequences {
    phi: Vec<BigRational>,
    omega: Vec<BigRational>,
    f: Vec<BigRational>,
    g: Vec<RadicalConstant>,
}

impl Sequences {
    fn compute(k_max: usize) -> Self {
        let half = rat(1, 2);
        // top terms solved out: the l = 0 and l = k terms carry the unknown
        let mut phi = vec![BigRational::from_integer(BigInt::from(-1))];
        for k in 1..=k_max {
            let mut s = gamma_k(k - 1) * &phi[k - 1];
            for l in 1..k {
                s += &half * &phi[l] * &phi[k - l];
            }
            phi.push(s);
        }
        let mut omega = vec![BigRational::one()];
        for k in 1..=k_max {
            let mut s = alpha_k(k - 1) * &omega[k - 1];
            for l in 1..=k {
                s += &phi[l] * pow2(-(l as i64)) * &omega[k - l];
            }
            omega.push(s);
        }
        let four = BigRational::from_integer(BigInt::from(4));
        let mut f = vec![rat(-1, 2)];
        for k in 1..=k_max {
            let mut s = gamma_k(k - 1) * &f[k - 1];
            for l in 1..k {
                s += &four * &f[l] * &f[k - l];
            }
            f.push(s / &four);
        }
        // g lives in Q(√2); 2^(5/2) f_0 = -2^(3/2)
        let mut gq = vec![QSqrt2::pow_sqrt2(-1)];
        let inv = QSqrt2::pow_sqrt2(-3);
        for k in 1..=k_max {
            let mut s = QSqrt2::rational(alpha_k(k - 1)).mul(&gq[k - 1]);
            for l in 1..=k {
                let w = QSqrt2::pow_sqrt2(5 - l as i64).mul(&QSqrt2::rational(f[l].clone()));
                s = s.add(&w.mul(&gq[k - l]));
            }
            gq.push(s.mul(&inv));
        }
        let g = gq
            .iter()
            .map(|x| x.to_radical().expect("g_k is a rational multiple of a power of √2"))
            .collect();
        Self { phi, omega, f, g }
    }
}

fn with_sequences<T>(k: usize, read: impl FnOnce(&Sequences) -> T) -> T {
    static MEMO: OnceLock<Sequences> = OnceLock::new();
    if k <= MEMO_K {
        read(MEMO.get_or_init(|| Sequences::compute(MEMO_K)))
    } else {
        read(&Sequences::compute(k))
    }
}

pub fn phi(k: usize) -> BigRational {
    with_sequences(k, |s| s.phi[k].clone())
}

pub fn omega(k: usize) -> BigRational {
    with_sequences(k, |s| s.omega[k].clone())
}

pub fn f_coeff(k: usize) -> BigRational {
    with_sequences(k, |s| s.f[k].clone())
}

pub fn g_coeff(k: usize) -> RadicalConstant {
    with_sequences(k, |s| s.g[k].clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LawKind {
    /// Airy distribution `Y`.
    Airy,
    /// Brownian meander area `Z`.
    Meander,
    /// `β(1, 1/2)`.
    Beta,
    /// Point mass at 1.
    Dirac,
}

impl LawKind {
    pub const ALL: [LawKind; 4] = [Self::Airy, Self::Meander, Self::Beta, Self::Dirac];

    pub fn name(self) -> &'static str {
        match self {
            Self::Airy => "airy",
            Self::Meander => "meander",
            Self::Beta => "beta",
            Self::Dirac => "dirac",
        }
    }
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for LawKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown law '{s}'")))
    }
}

/// `E[L^k]` for the named law.
pub fn law_moment(law: LawKind, k: usize) -> RadicalConstant {
    let kf = BigRational::from_integer(factorial(k as u64));
    match law {
        LawKind::Airy => {
            // k! Γ(γ_0)/Γ(γ_k) φ_k/φ_0
            let g0 = gamma_half(-1);
            let gk = gamma_half(3 * k as i64 - 1);
            let ratio = g0.div(&gk).expect("Γ has no zeros");
            ratio.scale(&(kf * phi(k) / phi(0)))
        }
        LawKind::Meander => {
            let a0 = gamma_half(1);
            let ak = gamma_half(3 * k as i64 + 1);
            let ratio = a0.div(&ak).expect("Γ has no zeros");
            let two_pow = RadicalConstant::new(BigRational::one(), -(k as i64), 0);
            (&ratio * &two_pow).scale(&(kf * omega(k) / omega(0)))
        }
        LawKind::Beta => {
            // 4^k (k!)² / (2k + 1)!
            let num = (BigInt::one() << (2 * k)) * factorial(k as u64).pow(2);
            RadicalConstant::rational(BigRational::new(num, factorial(2 * k as u64 + 1)))
        }
        LawKind::Dirac => RadicalConstant::one(),
    }
}

/// How the half-perimeter index relates to the index used for a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerimeterIndex {
    /// `m` is the half-perimeter: coefficient `[x^m]`.
    Half,
    /// `m` is the quarter-perimeter: coefficient `[x^(2m)]`.
    Quarter,
}

impl PerimeterIndex {
    /// The `x`-degree holding index `m`.
    pub fn x_degree(self, m: usize) -> usize {
        match self {
            Self::Half => m,
            Self::Quarter => 2 * m,
        }
    }
}

/// Scaling of a class's area towards its limit:
/// `c · X_m / (s · m)^ρ  →  factor · L` in distribution, with moments.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitLaw {
    pub law: LawKind,
    pub index: PerimeterIndex,
    /// `ρ`, either 3/2 or 2.
    pub exponent: BigRational,
    /// `c`, multiplies the area.
    pub constant: BigRational,
    /// `s`, multiplies the index inside the power.
    pub index_scale: BigRational,
    /// The limit is `factor · L`.
    pub factor: BigRational,
}

/// The scaling table for every class.
pub fn binding(class: SymmetryClass) -> LimitLaw {
    use SymmetryClass::*;
    let one = BigRational::one();
    let (law, index, exponent, constant, index_scale, factor) = match class {
        Full => (LawKind::Airy, PerimeterIndex::Half, rat(3, 2), one.clone(), one.clone(), rat(1, 4)),
        R2 => (LawKind::Meander, PerimeterIndex::Half, rat(3, 2), one.clone(), one.clone(), rat(1, 2)),
        D1 => (LawKind::Airy, PerimeterIndex::Quarter, rat(3, 2), one.clone(), one.clone(), one),
        D2 => (LawKind::Meander, PerimeterIndex::Quarter, rat(3, 2), one.clone(), rat(2, 1), rat(1, 2)),
        D1D2 => (LawKind::Meander, PerimeterIndex::Quarter, rat(3, 2), one.clone(), one.clone(), rat(2, 1)),
        Rect => (LawKind::Beta, PerimeterIndex::Half, rat(2, 1), rat(4, 1), one.clone(), one),
        Square => (LawKind::Dirac, PerimeterIndex::Quarter, rat(2, 1), one.clone(), one.clone(), one),
    };
    LimitLaw { law, index, exponent, constant, index_scale, factor }
}

/// `E[(factor · L)^k]` for the class's limit variable.
pub fn class_limit_moment(class: SymmetryClass, k: usize) -> RadicalConstant {
    let b = binding(class);
    let mut factor_k = BigRational::one();
    for _ in 0..k {
        factor_k *= &b.factor;
    }
    law_moment(b.law, k).scale(&factor_k)
}

/// `sequence,k,exact,decimal,digits` rows for `φ`, `ω`, `f`, `g`.
pub fn write_sequences_csv<W: Write>(out: W, k_max: usize, digits: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sequence", "k", "exact", "decimal", "digits"])?;
    let d = digits.to_string();
    for k in 0..=k_max {
        for (name, v) in [
            ("phi", RadicalConstant::rational(phi(k))),
            ("omega", RadicalConstant::rational(omega(k))),
            ("f", RadicalConstant::rational(f_coeff(k))),
            ("g", g_coeff(k)),
        ] {
            w.write_record([name, &k.to_string(), &v.to_string(), &v.approx(digits), &d])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `law,k,exact,decimal,digits` rows for `E[L^k]`, `k = 0..=k_max`.
pub fn write_moments_csv<W: Write>(out: W, law: LawKind, k_max: usize, digits: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["law", "k", "exact", "decimal", "digits"])?;
    for k in 0..=k_max {
        let v = law_moment(law, k);
        w.write_record([law.name(), &k.to_string(), &v.to_string(), &v.approx(digits), &digits.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        assert_eq!(phi(0), rat(-1, 1));
        assert_eq!(phi(1), rat(1, 2));
        assert_eq!(omega(1), rat(3, 4));
        assert_eq!(f_coeff(1), rat(1, 16));
        assert_eq!(g_coeff(0), RadicalConstant::new(rat(1, 2), 1, 0));
    }

    #[test]
    fn moments() {
        assert_eq!(law_moment(LawKind::Airy, 1), RadicalConstant::sqrt_pi());
        assert_eq!(law_moment(LawKind::Airy, 2), RadicalConstant::rational(rat(10, 3)));
        assert_eq!(law_moment(LawKind::Meander, 2), RadicalConstant::rational(rat(59, 60)));
        assert_eq!(law_moment(LawKind::Beta, 1), RadicalConstant::rational(rat(2, 3)));
        assert_eq!(law_moment(LawKind::Dirac, 7), RadicalConstant::one());
        assert_eq!(law_moment(LawKind::Meander, 1).approx(5), "0.93999");
    }

    #[test]
    fn class_scalings() {
        use SymmetryClass::*;
        assert_eq!(class_limit_moment(Full, 1), RadicalConstant::new(rat(1, 4), 0, 1));
        assert_eq!(class_limit_moment(D1, 1), RadicalConstant::sqrt_pi());
        assert_eq!(class_limit_moment(Square, 5), RadicalConstant::one());
        assert_eq!(class_limit_moment(D1D2, 2), RadicalConstant::rational(rat(59, 15)));
    }

    #[test]
    fn beyond_memo() {
        let k = MEMO_K + 2;
        let s = Sequences::compute(k);
        assert_eq!(phi(k), s.phi[k]);
    }
}
