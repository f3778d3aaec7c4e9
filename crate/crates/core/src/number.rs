//! Exact number types: big rationals, the radical ring `Q * 2^(Z/2) * pi^(Z/2)`
//! housing limit-law moments, and correctly rounded decimal rendering.

use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational;

use crate::error::{Error, Result};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient `C(n, k)` for any integer `n` (generalized for negative `n`).
pub fn binomial(n: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(n) - BigInt::from(j);
    }
    num / factorial(k)
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse(s)?)),
    }
}

fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// An exact number `r * 2^(a/2) * pi^(b/2)`.
///
/// The `sqrt(2)` exponent is kept in `{0, 1}` with whole powers of two folded
/// into `r`. The `sqrt(pi)` exponent is an unrestricted integer, since whole
/// powers of `pi` cannot be folded into a rational. Zero is always `(0, 0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalConstant {
    r: BigRational,
    a: i64,
    b: i64,
}

impl RadicalConstant {
    pub fn new(r: BigRational, a: i64, b: i64) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let half = a.div_euclid(2);
        let a = a - 2 * half;
        Self { r: r * pow2(half), a, b }
    }

    pub fn zero() -> Self {
        Self {
            r: BigRational::zero(),
            a: 0,
            b: 0,
        }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(r: BigRational) -> Self {
        Self::new(r, 0, 0)
    }

    pub fn sqrt2() -> Self {
        Self::new(BigRational::one(), 1, 0)
    }

    pub fn sqrt_pi() -> Self {
        Self::new(BigRational::one(), 0, 1)
    }

    /// Rational part `r`.
    pub fn coefficient(&self) -> &BigRational {
        &self.r
    }

    /// Exponent of `sqrt(2)`, always 0 or 1.
    pub fn sqrt2_exponent(&self) -> i64 {
        self.a
    }

    /// Exponent of `sqrt(pi)`.
    pub fn sqrt_pi_exponent(&self) -> i64 {
        self.b
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.r.is_positive()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(&self.r * c, self.a, self.b)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::new(self.r.recip(), -self.a, -self.b))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self * &inv)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Sum of two constants sharing the same radical part (or where one is zero).
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.a == other.a && self.b == other.b {
            Some(Self::new(&self.r + &other.r, self.a, self.b))
        } else {
            None
        }
    }

    pub fn to_surd(&self) -> Surd {
        Surd::new(self.r.clone(), pow2(self.a), self.b)
    }

    /// Decimal rendering correctly rounded to `digits` significant digits.
    pub fn approx(&self, digits: usize) -> String {
        self.to_surd().to_decimal(digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_surd().to_f64()
    }
}

impl Mul for &RadicalConstant {
    type Output = RadicalConstant;

    fn mul(self, rhs: &RadicalConstant) -> RadicalConstant {
        RadicalConstant::new(&self.r * &rhs.r, self.a + rhs.a, self.b + rhs.b)
    }
}

impl fmt::Display for RadicalConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)?;
        if self.a == 1 {
            write!(f, "·√2")?;
        }
        match self.b {
            0 => {}
            1 => write!(f, "·√π")?,
            2 => write!(f, "·π")?,
            b if b % 2 == 0 => write!(f, "·π^{}", b / 2)?,
            b => write!(f, "·π^({b}/2)")?,
        }
        Ok(())
    }
}

pub fn rad_mul(x: &RadicalConstant, y: &RadicalConstant) -> RadicalConstant {
    x * y
}

pub fn rad_approx(x: &RadicalConstant, digits: usize) -> String {
    x.approx(digits.max(1))
}

/// `Gamma(twice_arg / 2)` for odd `twice_arg`, exact in `Q * sqrt(pi)`.
///
/// # Panics
/// If `twice_arg` is even.
pub fn gamma_half_integer(twice_arg: i64) -> RadicalConstant {
    assert!(twice_arg % 2 != 0, "gamma_half_integer needs an odd argument");
    // Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi), n >= 0
    let mut t = twice_arg;
    let mut divisor = BigRational::one();
    while t < 0 {
        // Gamma(t/2) = Gamma(t/2 + 1) / (t/2)
        divisor *= rat(t, 2);
        t += 2;
    }
    let n = ((t - 1) / 2) as u64;
    let r = BigRational::new(
        factorial(2 * n),
        (BigInt::one() << (2 * n)) * factorial(n),
    );
    RadicalConstant::new(r / divisor, 0, 1)
}

/// `Gamma(n) = (n - 1)!` for positive integers.
pub fn gamma_positive_integer(n: u64) -> BigInt {
    assert!(n >= 1, "gamma has poles at non-positive integers");
    factorial(n - 1)
}

/// `Gamma(twice_arg / 2)` for any argument that is not a pole.
pub fn gamma_half(twice_arg: i64) -> RadicalConstant {
    if twice_arg % 2 != 0 {
        gamma_half_integer(twice_arg)
    } else {
        RadicalConstant::rational(BigRational::from_integer(gamma_positive_integer(
            (twice_arg / 2) as u64,
        )))
    }
}

/// An exact real `c * sqrt(s) * pi^(p/2)` with rational `c`, positive rational `s`.
///
/// Used for normalized moments (which carry `sqrt(m)` factors) and for ratios
/// against limit constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    coeff: BigRational,
    radicand: BigRational,
    pi_half_power: i64,
}

impl Surd {
    pub fn new(coeff: BigRational, radicand: BigRational, pi_half_power: i64) -> Self {
        assert!(radicand.is_positive(), "radicand must be positive");
        let (coeff, radicand) = extract_square(coeff, radicand);
        Self {
            coeff,
            radicand,
            pi_half_power,
        }
    }

    pub fn rational(c: BigRational) -> Self {
        Self::new(c, BigRational::one(), 0)
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn pi_half_power(&self) -> i64 {
        self.pi_half_power
    }

    pub fn mul(&self, o: &Surd) -> Surd {
        Surd::new(
            &self.coeff * &o.coeff,
            &self.radicand * &o.radicand,
            self.pi_half_power + o.pi_half_power,
        )
    }

    pub fn div(&self, o: &Surd) -> Option<Surd> {
        if o.coeff.is_zero() {
            return None;
        }
        // 1/sqrt(s) = sqrt(s) / s
        Some(Surd::new(
            &self.coeff / (&o.coeff * &o.radicand),
            &self.radicand * &o.radicand,
            self.pi_half_power - o.pi_half_power,
        ))
    }

    /// The exact value when it is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeff.is_zero() {
            return Some(BigRational::zero());
        }
        (self.pi_half_power == 0 && self.radicand.is_one()).then(|| self.coeff.clone())
    }

    /// Correctly rounded decimal with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal(&Shifted::new(self.clone(), BigRational::zero()), digits.max(1))
    }

    /// Correctly rounded decimal of `self - 1`.
    pub fn minus_one_decimal(&self, digits: usize) -> String {
        decimal(&Shifted::new(self.clone(), -BigRational::one()), digits.max(1))
    }

    /// Rational approximation of `self + offset` rounded to `digits` significant digits.
    pub fn shifted_approx(&self, offset: &BigRational, digits: usize) -> BigRational {
        let (neg, n, e) = round_significant(&Shifted::new(self.clone(), offset.clone()), digits.max(1));
        let shift = e - digits as i64 + 1;
        let mut v = BigRational::from_integer(BigInt::from(n)) * pow10(shift);
        if neg {
            v = -v;
        }
        v
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if !self.radicand.is_one() {
            write!(f, "·√({})", self.radicand)?;
        }
        if self.pi_half_power != 0 {
            write!(f, "·π^({}/2)", self.pi_half_power)?;
        }
        Ok(())
    }
}

/// Moves square factors of the radicand's numerator and denominator into the
/// coefficient, so that rational surds end up with radicand 1.
fn extract_square(coeff: BigRational, radicand: BigRational) -> (BigRational, BigRational) {
    let num = radicand.numer().magnitude().clone();
    let den = radicand.denom().magnitude().clone();
    let rn = num.sqrt();
    let rd = den.sqrt();
    match (&rn * &rn == num, &rd * &rd == den) {
        (true, true) => (
            coeff * BigRational::new(BigInt::from(rn), BigInt::from(rd)),
            BigRational::one(),
        ),
        // sqrt(n/d) = sqrt(n*d)/d
        _ => {
            let nd = &num * &den;
            let r = nd.sqrt();
            if &r * &r == nd {
                (
                    coeff * BigRational::new(BigInt::from(r), BigInt::from(den)),
                    BigRational::one(),
                )
            } else {
                (coeff, radicand)
            }
        }
    }
}

fn pow10(e: i64) -> BigRational {
    let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `surd + offset`, bracketable to any binary precision.
struct Shifted {
    surd: Surd,
    offset: BigRational,
}

impl Shifted {
    fn new(surd: Surd, offset: BigRational) -> Self {
        Self { surd, offset }
    }

    fn exact(&self) -> Option<BigRational> {
        self.surd.as_rational().map(|r| r + &self.offset)
    }

    /// Integers `lo <= value * 2^bits <= hi`.
    fn bracket(&self, bits: u64) -> (BigInt, BigInt) {
        let scale = BigRational::from_integer(BigInt::one() << bits);
        let s = &self.surd;
        let (mut lo, mut hi) = if s.coeff.is_zero() {
            (BigInt::zero(), BigInt::zero())
        } else {
            let sq = &s.coeff * &s.coeff * &s.radicand * &scale * &scale;
            let p = s.pi_half_power;
            let guard = bits + 64 + sq.numer().bits() + sq.denom().bits() + 8 * p.unsigned_abs();
            let (pl, ph) = pi_bracket(guard);
            let unit = BigRational::from_integer(BigInt::one() << guard);
            let pl = BigRational::new(pl, BigInt::one()) / &unit;
            let ph = BigRational::new(ph, BigInt::one()) / &unit;
            let (sq_lo, sq_hi) = if p >= 0 {
                (&sq * rpow(&pl, p as u32), &sq * rpow(&ph, p as u32))
            } else {
                let q = p.unsigned_abs() as u32;
                (&sq / rpow(&ph, q), &sq / rpow(&pl, q))
            };
            let a = sq_lo.floor().to_integer().to_biguint().unwrap_or_default();
            let b = sq_hi.ceil().to_integer().to_biguint().unwrap_or_default();
            let lo = a.sqrt();
            let mut hi = b.sqrt();
            if &hi * &hi != b {
                hi += 1u32;
            }
            let (lo, hi) = (BigInt::from(lo), BigInt::from(hi));
            if s.coeff.is_negative() {
                (-hi, -lo)
            } else {
                (lo, hi)
            }
        };
        let off = &self.offset * &scale;
        lo += off.floor().to_integer();
        hi += off.ceil().to_integer();
        (lo, hi)
    }
}

fn rpow(x: &BigRational, k: u32) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

/// Integers `lo <= pi * 2^bits <= hi`, via Machin's formula.
fn pi_bracket(bits: u64) -> (BigInt, BigInt) {
    let work = bits + 16;
    let one = BigInt::one() << work;
    let atan_inv = |x: u64| -> (BigInt, u64) {
        // sum_k (-1)^k / ((2k+1) x^(2k+1)), each term floored
        let x2 = BigInt::from(x * x);
        let mut power = &one / BigInt::from(x);
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !power.is_zero() {
            let term = &power / BigInt::from(2 * k + 1);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &x2;
            k += 1;
        }
        (sum, k + 2)
    };
    let (a5, e5) = atan_inv(5);
    let (a239, e239) = atan_inv(239);
    let approx = a5 * 16 - a239 * 4;
    let err = BigInt::from(16 * e5 + 4 * e239);
    let lo = (&approx - &err) >> 16u32;
    let hi = ((&approx + &err) >> 16u32) + 1;
    (lo, hi)
}

/// `(negative, n, e)` with `|value| ≈ n * 10^(e - digits + 1)`, `n` having exactly `digits` digits.
fn round_significant(v: &Shifted, digits: usize) -> (bool, BigUint, i64) {
    if let Some(x) = v.exact() {
        if x.is_zero() {
            return (false, BigUint::zero(), 0);
        }
        let neg = x.is_negative();
        let ax = x.abs();
        let mut e = floor_log10(&ax);
        let mut n = round_half_up(&(&ax * pow10(digits as i64 - 1 - e)));
        if n == num_traits::pow(BigUint::from(10u32), digits) {
            e += 1;
            n = round_half_up(&(&ax * pow10(digits as i64 - 1 - e)));
        }
        return (neg, n, e);
    }
    let mut bits = 64 + 4 * digits as u64;
    loop {
        let (lo, hi) = v.bracket(bits);
        if lo.sign() == hi.sign() && lo.sign() != Sign::NoSign {
            let neg = lo.is_negative();
            let unit = BigRational::from_integer(BigInt::one() << bits);
            let a = BigRational::from_integer(lo.abs()) / &unit;
            let b = BigRational::from_integer(hi.abs()) / &unit;
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let ea = floor_log10(&a);
            if ea == floor_log10(&b) {
                let shift = pow10(digits as i64 - 1 - ea);
                let na = round_half_up(&(&a * &shift));
                let nb = round_half_up(&(&b * &shift));
                if na == nb {
                    if na == num_traits::pow(BigUint::from(10u32), digits) {
                        return (neg, num_traits::pow(BigUint::from(10u32), digits - 1), ea + 1);
                    }
                    return (neg, na, ea);
                }
            }
        }
        bits *= 2;
    }
}

fn decimal(v: &Shifted, digits: usize) -> String {
    let (neg, n, e) = round_significant(v, digits);
    if n.is_zero() {
        return "0".to_string();
    }
    let s = n.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-7..21).contains(&e) {
        if e >= 0 {
            let int_len = (e + 1) as usize;
            if int_len >= s.len() {
                out.push_str(&s);
                out.extend(std::iter::repeat_n('0', int_len - s.len()));
            } else {
                out.push_str(&s[..int_len]);
                out.push('.');
                out.push_str(&s[int_len..]);
            }
        } else {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-e - 1) as usize));
            out.push_str(&s);
        }
    } else {
        out.push_str(&s[..1]);
        if s.len() > 1 {
            out.push('.');
            out.push_str(&s[1..]);
        }
        out.push_str(&format!("e{e}"));
    }
    out
}

/// `e` with `10^e <= x < 10^(e+1)` for positive rational `x`.
fn floor_log10(x: &BigRational) -> i64 {
    let est = ((x.numer().bits() as f64 - x.denom().bits() as f64) * std::f64::consts::LOG10_2)
        .floor() as i64;
    let mut e = est;
    while pow10(e) > *x {
        e -= 1;
    }
    while pow10(e + 1) <= *x {
        e += 1;
    }
    e
}

fn round_half_up(x: &BigRational) -> BigUint {
    let twice = x * BigRational::from_integer(BigInt::from(2));
    let v = Integer::div_floor(&(twice.to_integer() + BigInt::one()), &BigInt::from(2));
    v.to_biguint().unwrap_or_default()
}

/// Rough `f64` of a rational (for fits and logging only).
pub fn rational_to_f64(x: &BigRational) -> f64 {
    Surd::rational(x.clone()).to_decimal(17).parse().unwrap_or_else(|_| {
        x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(n: i64, d: i64, a: i64, b: i64) -> RadicalConstant {
        RadicalConstant::new(rat(n, d), a, b)
    }

    #[test]
    fn gamma_at_half_integers() {
        assert_eq!(gamma_half_integer(1), rc(1, 1, 0, 1));
        assert_eq!(gamma_half_integer(-1), rc(-2, 1, 0, 1));
        assert_eq!(gamma_half_integer(5), rc(3, 4, 0, 1));
        assert_eq!(gamma_half_integer(-3), rc(4, 3, 0, 1));
    }

    #[test]
    fn gamma_recurrence() {
        for t in (-21..=21).step_by(2) {
            let lhs = gamma_half_integer(t + 2);
            let rhs = gamma_half_integer(t).scale(&rat(t, 2));
            assert_eq!(lhs, rhs, "twice_arg = {t}");
        }
    }

    #[test]
    fn radical_products() {
        assert_eq!(rad_mul(&rc(1, 1, 1, 0), &rc(1, 1, 1, 0)), rc(2, 1, 0, 0));
        let pi = rad_mul(&rc(1, 1, 0, 1), &rc(1, 1, 0, 1));
        assert_eq!(pi, rc(1, 1, 0, 2));
        assert_eq!(rad_approx(&pi, 12), "3.14159265359");
        assert_eq!(rc(3, 1, 3, 0), rc(6, 1, 1, 0));
        assert_eq!(rc(1, 1, -1, 0), rc(1, 2, 1, 0));
        assert_eq!(rc(0, 1, 1, 3), RadicalConstant::zero());
    }

    #[test]
    fn decimals() {
        assert_eq!(rad_approx(&RadicalConstant::sqrt_pi(), 10), "1.772453851");
        assert_eq!(
            rad_approx(&RadicalConstant::sqrt_pi(), 20),
            "1.7724538509055160273"
        );
        assert_eq!(rad_approx(&RadicalConstant::sqrt2(), 5), "1.4142");
        assert_eq!(rad_approx(&rc(1, 8, 0, 0), 2), "0.13");
        assert_eq!(rad_approx(&rc(-1, 8, 0, 0), 2), "-0.13");
        assert_eq!(rad_approx(&rc(999, 1, 0, 0), 2), "1000");
        assert_eq!(rad_approx(&rc(1, 3, 0, 0), 3), "0.333");
        assert_eq!(rad_approx(&rc(1, 1000000000, 0, 1), 3), "1.77e-9");
        assert_eq!(rad_approx(&rc(1, 1, 0, -1), 6), "0.564190");
        assert_eq!(rad_approx(&RadicalConstant::zero(), 6), "0");
    }

    #[test]
    fn surd_rational_detection() {
        let s = Surd::new(rat(1, 4), int(256), 0);
        assert_eq!(s.as_rational(), Some(int(4)));
        let t = Surd::new(int(1), rat(9, 2), 0);
        assert_eq!(t.as_rational(), None);
        assert_eq!(t.minus_one_decimal(4), "1.121");
        let one = Surd::new(int(1), int(1), 0);
        assert_eq!(one.minus_one_decimal(30), "0");
    }

    #[test]
    fn shifted_approximation() {
        let s = RadicalConstant::sqrt_pi().to_surd();
        let d = s.shifted_approx(&-int(1), 5);
        assert_eq!(d, rat(77245, 100000));
    }

    #[test]
    fn parse() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
