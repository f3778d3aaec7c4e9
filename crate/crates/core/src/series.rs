//! Coefficient rings and truncated power series in `x`.
//!
//! Three coefficient rings are provided:
//!
//! * [`LaurentQPoly`]: exact Laurent polynomials in `q` (perimeter-and-area mode),
//! * [`DeltaJet`]: truncated expansions in `δ = q - 1` (moment mode),
//! * [`BigRational`]: the `q = 1` specialization (perimeter-only counts).
//!
//! [`XSeries`] is generic over the ring and provides the `x -> xq` and
//! `(x, q) -> (x², q²)` substitutions used by all the class equations.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{binomial, BigRational};

/// A commutative coefficient ring that knows how to act on the formal variable `q`.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    /// Ring parameters shared by all elements (the truncation order for jets).
    type Ctx: Clone + PartialEq + fmt::Debug;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn from_int(v: i64, ctx: &Self::Ctx) -> Self;
    /// The monomial `q^n`.
    fn q_power(n: i64, ctx: &Self::Ctx) -> Self;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other);
    }

    /// `self += a * b`.
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }

    /// `Σ_t a[t] · b[len - 1 - t]` over two slices of equal length.
    fn convolve(ctx: &Self::Ctx, a: &[Self], b: &[Self]) -> Self {
        let mut acc = Self::zero(ctx);
        for (x, y) in a.iter().zip(b.iter().rev()) {
            if !x.is_zero() && !y.is_zero() {
                acc.add_mul(x, y);
            }
        }
        acc
    }

    fn inverse(&self) -> Option<Self>;

    /// `self * q^n`.
    fn times_q_power(&self, n: i64) -> Self;

    /// The substitution `q -> q²`.
    fn q_squared(&self) -> Self;

    /// Division by a nonzero integer, when exact in this ring.
    fn div_exact(&self, d: i64) -> Option<Self>;
}

/// A Laurent polynomial in `q` with big-integer coefficients, stored sparsely.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentQPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentQPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: impl Into<BigInt>, degree: i64) -> Self {
        let c = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(degree, c);
        }
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (d, c) in terms {
            p.add_term(d, &c);
        }
        p
    }

    fn add_term(&mut self, degree: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(degree).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&degree);
        }
    }

    pub fn coeff(&self, degree: i64) -> BigInt {
        self.terms.get(&degree).cloned().unwrap_or_default()
    }

    /// Nonzero terms `(degree, coefficient)` in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Expansion about `q = 1`, truncated at `δ^order`.
    pub fn to_jet(&self, order: usize) -> DeltaJet {
        let mut out = DeltaJet::zero(order);
        for (d, c) in &self.terms {
            let j = jet_q_power(*d, order);
            for (slot, b) in out.coeffs.iter_mut().zip(&j.coeffs) {
                *slot += c * b;
            }
        }
        out
    }
}

impl fmt::Display for LaurentQPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match (*d, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}q")?,
                (d, true) => write!(f, "q^{d}")?,
                (d, false) => write!(f, "{a}q^{d}")?,
            }
        }
        Ok(())
    }
}

impl Coefficient for LaurentQPoly {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        Self::zero()
    }

    fn from_int(v: i64, _: &()) -> Self {
        Self::monomial(v, 0)
    }

    fn q_power(n: i64, _: &()) -> Self {
        Self::monomial(1, n)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    fn add_assign(&mut self, other: &Self) {
        for (d, c) in &other.terms {
            self.add_term(*d, c);
        }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        out.add_mul(self, other);
        out
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        let (Some(lo_a), Some(hi_a), Some(lo_b), Some(hi_b)) =
            (a.min_degree(), a.max_degree(), b.min_degree(), b.max_degree())
        else {
            return;
        };
        // dense accumulator over the product's degree range
        let lo = lo_a + lo_b;
        let mut dense = vec![BigInt::zero(); (hi_a + hi_b - lo + 1) as usize];
        for (da, ca) in &a.terms {
            for (db, cb) in &b.terms {
                dense[(da + db - lo) as usize] += ca * cb;
            }
        }
        for (i, c) in dense.iter().enumerate() {
            self.add_term(lo + i as i64, c);
        }
    }

    fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (d, c) = self.terms.iter().next()?;
        (c.abs().is_one()).then(|| Self::monomial(c.clone(), -d))
    }

    fn times_q_power(&self, n: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(d, c)| (d + n, c.clone())).collect(),
        }
    }

    fn q_squared(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(d, c)| (2 * d, c.clone())).collect(),
        }
    }

    fn div_exact(&self, d: i64) -> Option<Self> {
        let d = BigInt::from(d);
        let mut terms = BTreeMap::new();
        for (deg, c) in &self.terms {
            let (quo, rem) = c.div_rem(&d);
            if !rem.is_zero() {
                return None;
            }
            terms.insert(*deg, quo);
        }
        Some(Self { terms })
    }
}

/// A truncated expansion `c_0 + c_1 δ + ... + c_K δ^K` about `q = 1`, `δ = q - 1`.
///
/// Slot `j` of the jet of a `q`-polynomial is its `j`-th `q`-derivative at
/// `q = 1` divided by `j!`. Every series handled here has integer coefficients
/// in `q`, so the slots are integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaJet {
    coeffs: Vec<BigInt>,
}

impl DeltaJet {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn new(mut coeffs: Vec<BigInt>, order: usize) -> Self {
        coeffs.resize(order + 1, BigInt::zero());
        Self { coeffs }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self {
            coeffs: values.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn slot(&self, j: usize) -> &BigInt {
        &self.coeffs[j]
    }
}

/// `q^n = (1 + δ)^n` truncated at `δ^order`, for any integer `n`.
pub fn jet_q_power(n: i64, order: usize) -> DeltaJet {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = BigInt::one();
    for j in 0..=order as i64 {
        if j > 0 {
            // C(n, j) = C(n, j - 1) (n - j + 1) / j
            c = c * BigInt::from(n - j + 1) / BigInt::from(j);
        }
        coeffs.push(c.clone());
    }
    DeltaJet { coeffs }
}

impl Coefficient for DeltaJet {
    type Ctx = usize;

    fn zero(order: &usize) -> Self {
        DeltaJet::zero(*order)
    }

    fn from_int(v: i64, order: &usize) -> Self {
        let mut j = DeltaJet::zero(*order);
        j.coeffs[0] = BigInt::from(v);
        j
    }

    fn q_power(n: i64, order: &usize) -> Self {
        jet_q_power(n, *order)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    fn sub(&self, other: &Self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = DeltaJet::zero(self.order());
        out.add_mul(self, other);
        out
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        let k = self.order();
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs[..=k - i].iter().enumerate() {
                if !bj.is_zero() {
                    self.coeffs[i + j] += ai * bj;
                }
            }
        }
    }

    fn inverse(&self) -> Option<Self> {
        // integer jets are units iff the constant slot is ±1
        let c0 = &self.coeffs[0];
        if !c0.abs().is_one() {
            return None;
        }
        let k = self.order();
        let mut inv = DeltaJet::zero(k);
        inv.coeffs[0] = c0.clone();
        for n in 1..=k {
            let mut acc = BigInt::zero();
            for i in 1..=n {
                acc += &self.coeffs[i] * &inv.coeffs[n - i];
            }
            inv.coeffs[n] = -(acc * c0);
        }
        Some(inv)
    }

    fn times_q_power(&self, n: i64) -> Self {
        if n == 0 {
            return self.clone();
        }
        self.mul(&jet_q_power(n, self.order()))
    }

    fn q_squared(&self) -> Self {
        // δ -> 2δ + δ² = δ (2 + δ): (2δ + δ²)^j = sum_i C(j, i) 2^(j - i) δ^(j + i)
        let k = self.order();
        let mut out = DeltaJet::zero(k);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for i in 0..=j {
                if i + j > k {
                    break;
                }
                let w = binomial(j as i64, i as u64) << (j - i);
                out.coeffs[i + j] += c * w;
            }
        }
        out
    }

    fn div_exact(&self, d: i64) -> Option<Self> {
        let d = BigInt::from(d);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (quo, rem) = c.div_rem(&d);
            if !rem.is_zero() {
                return None;
            }
            coeffs.push(quo);
        }
        Some(Self { coeffs })
    }
}

impl fmt::Display for DeltaJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The `q = 1` specialization.
impl Coefficient for BigRational {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        Zero::zero()
    }

    fn from_int(v: i64, _: &()) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn q_power(_: i64, _: &()) -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }

    fn times_q_power(&self, _: i64) -> Self {
        self.clone()
    }

    fn q_squared(&self) -> Self {
        self.clone()
    }

    fn div_exact(&self, d: i64) -> Option<Self> {
        (d != 0).then(|| self / BigRational::from_integer(BigInt::from(d)))
    }
}

/// A power series `a_0 + a_1 x + ... + a_N x^N + O(x^(N+1))` over a coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct XSeries<C: Coefficient> {
    ctx: C::Ctx,
    coeffs: Vec<C>,
}

impl<C: Coefficient> XSeries<C> {
    /// Builds a series truncated at `x^order`; missing coefficients are zero.
    pub fn new(ctx: C::Ctx, mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, C::zero(&ctx));
        Self { ctx, coeffs }
    }

    pub fn zero(ctx: C::Ctx, order: usize) -> Self {
        Self::new(ctx, Vec::new(), order)
    }

    pub fn one(ctx: C::Ctx, order: usize) -> Self {
        Self::monomial(ctx.clone(), 0, C::from_int(1, &ctx), order)
    }

    /// `c x^degree`.
    pub fn monomial(ctx: C::Ctx, degree: usize, c: C, order: usize) -> Self {
        let mut s = Self::zero(ctx, order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Option<&C> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.ctx.clone(), self.coeffs.clone(), order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|i| self.coeffs[i].add(&other.coeffs[i])).collect();
        Self::new(self.ctx.clone(), coeffs, n)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|i| self.coeffs[i].sub(&other.coeffs[i])).collect();
        Self::new(self.ctx.clone(), coeffs, n)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(C::neg).collect();
        Self::new(self.ctx.clone(), coeffs, self.order())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let out = (0..=n)
            .map(|k| C::convolve(&self.ctx, &self.coeffs[..=k], &other.coeffs[..=k]))
            .collect();
        Self::new(self.ctx.clone(), out, n)
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn recip(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse().ok_or(Error::NotInvertible)?;
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let acc = C::convolve(&self.ctx, &self.coeffs[1..=k], &out[..k]);
            out.push(acc.mul(&inv0).neg());
        }
        Ok(Self::new(self.ctx.clone(), out, n))
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect();
        Self::new(self.ctx.clone(), coeffs, self.order())
    }

    /// The substitutions `(x, q) -> (xq, q)` for `(1, 1)` and `(x, q) -> (x², q²)` for `(2, 2)`.
    ///
    /// For `(2, 2)` the result keeps the same truncation order, so only the
    /// input coefficients up to `N / 2` are consumed.
    pub fn compose_xq(&self, x_power: u32, q_power: u32) -> Result<Self> {
        match (x_power, q_power) {
            (1, 1) => {
                let coeffs = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, c)| c.times_q_power(n as i64))
                    .collect();
                Ok(Self::new(self.ctx.clone(), coeffs, self.order()))
            }
            (2, 2) => {
                let n = self.order();
                let mut out = vec![C::zero(&self.ctx); n + 1];
                for (i, c) in self.coeffs.iter().enumerate() {
                    if 2 * i > n {
                        break;
                    }
                    out[2 * i] = c.q_squared();
                }
                Ok(Self::new(self.ctx.clone(), out, n))
            }
            _ => Err(Error::UnsupportedSubstitution { x_power, q_power }),
        }
    }

    /// Coefficient-wise ring change.
    pub fn map<D: Coefficient>(&self, ctx: D::Ctx, f: impl Fn(&C) -> D) -> XSeries<D> {
        let coeffs = self.coeffs.iter().map(f).collect();
        XSeries::new(ctx, coeffs, self.order())
    }

    /// Coefficient-wise exact division by an integer.
    pub fn div_exact(&self, d: i64) -> Option<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.div_exact(d))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new(self.ctx.clone(), coeffs, self.order()))
    }
}

impl XSeries<LaurentQPoly> {
    /// Collapses `q = 1 + δ` and truncates at `δ^order`.
    pub fn to_jets(&self, order: usize) -> XSeries<DeltaJet> {
        self.map(order, |p| p.to_jet(order))
    }

    /// Specializes `q = 1`.
    pub fn at_q_one(&self) -> XSeries<BigRational> {
        self.map((), |p| BigRational::from_integer(p.at_one()))
    }
}

impl XSeries<DeltaJet> {
    /// Keeps only the `δ^0` slot, i.e. the `q = 1` specialization.
    pub fn at_q_one(&self) -> XSeries<BigRational> {
        self.map((), |j| BigRational::from_integer(j.slot(0).clone()))
    }
}
