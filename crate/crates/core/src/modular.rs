//! Multi-modular evaluation of `δ`-jets.
//!
//! Jet coefficients of the class series grow like `4^m`, so at `m` in the
//! thousands every ring operation on [`DeltaJet`] multiplies numbers with
//! thousands of bits. Here the same equations are solved modulo a batch of
//! primes just below `2^50`, each run using only machine words, and the exact
//! integers are rebuilt by the Chinese remainder theorem.
//!
//! Every jet slot of a class series is a nonnegative integer bounded by
//! `4^m (m²/4)^k` (number of polygons times a binomial in the area), which
//! fixes how many primes are needed. One extra prime is kept back to check
//! each reconstruction.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::feq::Solver;
use crate::series::{Coefficient, DeltaJet, XSeries};
use crate::symmetry::SymmetryClass;

/// Largest supported jet order plus one.
pub const MAX_SLOTS: usize = 8;

const PRIME_BITS: u32 = 50;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> Option<u64> {
    (a % p != 0).then(|| powmod(a, p - 2, p))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for b in BASES {
        let mut x = powmod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below `2^50`, in decreasing order.
pub fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << PRIME_BITS) - 1;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

/// Primes needed (without the check prime) to recover jets of order `k` at `x^m`.
pub fn primes_needed(m: usize, k: usize) -> usize {
    let log_m = usize::BITS as usize - m.max(1).leading_zeros() as usize;
    // 4^m (m²/4)^k, plus a sign bit and slack
    let bits = 2 * m + 2 * k * log_m + 8;
    bits.div_ceil(PRIME_BITS as usize - 1)
}

/// Ring parameters: jet order and modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModCtx {
    pub order: usize,
    pub p: u64,
}

/// A jet `Σ c_j δ^j` with coefficients modulo a prime below `2^50`.
///
/// Slots are always reduced. Products of two slots stay below `2^100`, so
/// [`Coefficient::convolve`] can sum them in 128-bit registers and reduce once.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModJet {
    p: u64,
    len: u8,
    c: [u64; MAX_SLOTS],
}

impl ModJet {
    fn new(ctx: &ModCtx) -> Self {
        assert!(ctx.order < MAX_SLOTS, "jet order above {}", MAX_SLOTS - 1);
        Self { p: ctx.p, len: ctx.order as u8 + 1, c: [0; MAX_SLOTS] }
    }

    fn n(&self) -> usize {
        self.len as usize
    }

    fn ctx(&self) -> ModCtx {
        ModCtx { order: self.n() - 1, p: self.p }
    }

    pub fn slots(&self) -> &[u64] {
        &self.c[..self.n()]
    }

    fn from_i128(v: i128, p: u64) -> u64 {
        v.rem_euclid(p as i128) as u64
    }

    fn reduce_wide(&self, acc: &[u128; MAX_SLOTS]) -> Self {
        let mut out = *self;
        let p = self.p as u128;
        for i in 0..self.n() {
            out.c[i] = (acc[i] % p) as u64;
        }
        out
    }
}

impl Coefficient for ModJet {
    type Ctx = ModCtx;

    fn zero(ctx: &ModCtx) -> Self {
        ModJet::new(ctx)
    }

    fn from_int(v: i64, ctx: &ModCtx) -> Self {
        let mut j = ModJet::new(ctx);
        j.c[0] = ModJet::from_i128(v as i128, ctx.p);
        j
    }

    fn q_power(n: i64, ctx: &ModCtx) -> Self {
        // C(n, j) for j < 8 and |n| < 2^14 fits comfortably in i128
        let mut j = ModJet::new(ctx);
        let mut c: i128 = 1;
        for i in 0..j.n() {
            if i > 0 {
                c = c * (n as i128 - i as i128 + 1) / i as i128;
            }
            j.c[i] = ModJet::from_i128(c, ctx.p);
        }
        j
    }

    fn is_zero(&self) -> bool {
        self.slots().iter().all(|&c| c == 0)
    }

    fn is_one(&self) -> bool {
        self.c[0] == 1 && self.slots()[1..].iter().all(|&c| c == 0)
    }

    fn add(&self, other: &Self) -> Self {
        let mut a = *self;
        for i in 0..a.n() {
            a.c[i] = (a.c[i] + other.c[i]) % a.p;
        }
        a
    }

    fn sub(&self, other: &Self) -> Self {
        let mut a = *self;
        for i in 0..a.n() {
            a.c[i] = (a.c[i] + a.p - other.c[i]) % a.p;
        }
        a
    }

    fn neg(&self) -> Self {
        let mut a = *self;
        for i in 0..a.n() {
            a.c[i] = (a.p - a.c[i]) % a.p;
        }
        a
    }

    fn mul(&self, other: &Self) -> Self {
        let mut acc = [0u128; MAX_SLOTS];
        let n = self.n();
        for i in 0..n {
            for j in 0..n - i {
                acc[i + j] += self.c[i] as u128 * other.c[j] as u128;
            }
        }
        self.reduce_wide(&acc)
    }

    fn convolve(ctx: &ModCtx, a: &[Self], b: &[Self]) -> Self {
        let zero = ModJet::new(ctx);
        let acc = match zero.n() {
            1 => convolve_fixed::<1>(a, b),
            2 => convolve_fixed::<2>(a, b),
            3 => convolve_fixed::<3>(a, b),
            4 => convolve_fixed::<4>(a, b),
            5 => convolve_fixed::<5>(a, b),
            6 => convolve_fixed::<6>(a, b),
            7 => convolve_fixed::<7>(a, b),
            _ => convolve_fixed::<8>(a, b),
        };
        zero.reduce_wide(&acc)
    }

    fn inverse(&self) -> Option<Self> {
        let p = self.p;
        let inv0 = invmod(self.c[0], p)?;
        let mut out = ModJet::new(&self.ctx());
        out.c[0] = inv0;
        for n in 1..self.n() {
            let mut acc = 0u128;
            for i in 1..=n {
                acc += self.c[i] as u128 * out.c[n - i] as u128;
            }
            out.c[n] = (p - mulmod((acc % p as u128) as u64, inv0, p)) % p;
        }
        Some(out)
    }

    fn times_q_power(&self, n: i64) -> Self {
        if n == 0 {
            return *self;
        }
        self.mul(&ModJet::q_power(n, &self.ctx()))
    }

    fn q_squared(&self) -> Self {
        // δ -> 2δ + δ²
        let n = self.n();
        let mut acc = [0u128; MAX_SLOTS];
        for j in 0..n {
            let mut binom: u128 = 1;
            for i in 0..=j {
                if i > 0 {
                    binom = binom * (j - i + 1) as u128 / i as u128;
                }
                if i + j >= n {
                    break;
                }
                acc[i + j] += self.c[j] as u128 * (binom << (j - i));
            }
        }
        self.reduce_wide(&acc)
    }

    fn div_exact(&self, d: i64) -> Option<Self> {
        let inv = invmod(ModJet::from_i128(d as i128, self.p), self.p)?;
        let mut a = *self;
        for i in 0..a.n() {
            a.c[i] = mulmod(a.c[i], inv, a.p);
        }
        Some(a)
    }
}

// the jet length as a constant lets the slot loops unroll
fn convolve_fixed<const N: usize>(a: &[ModJet], b: &[ModJet]) -> [u128; MAX_SLOTS] {
    let mut acc = [0u128; MAX_SLOTS];
    for (x, y) in a.iter().zip(b.iter().rev()) {
        for i in 0..N {
            let xi = x.c[i] as u128;
            for j in 0..N - i {
                acc[i + j] += xi * y.c[j] as u128;
            }
        }
    }
    acc
}

/// Mixed-radix reconstruction against a fixed prime list.
#[derive(Clone)]
struct Crt {
    primes: Vec<u64>,
    /// `table[i][j] = p_0 ⋯ p_{j-1} mod p_i` for `j <= i`
    table: Vec<Vec<u64>>,
    /// `(p_0 ⋯ p_{i-1})^{-1} mod p_i`
    inv: Vec<u64>,
}

impl Crt {
    fn new(primes: &[u64]) -> Self {
        let mut table = Vec::with_capacity(primes.len());
        let mut inv = Vec::with_capacity(primes.len());
        for (i, &p) in primes.iter().enumerate() {
            let mut row = vec![1 % p];
            for j in 0..i {
                row.push(mulmod(row[j], primes[j] % p, p));
            }
            inv.push(invmod(row[i], p).expect("distinct primes"));
            table.push(row);
        }
        Self { primes: primes.to_vec(), table, inv }
    }

    /// The integer in `(-M/2, M/2]` with the given residues, `M = Π p_i`.
    fn reconstruct(&self, residues: &[u64]) -> BigInt {
        let n = residues.len();
        let mut digits = Vec::with_capacity(n);
        for i in 0..n {
            let p = self.primes[i];
            let mut t = 0u64;
            for (j, &v) in digits.iter().enumerate() {
                t = (t + mulmod(v, self.table[i][j], p)) % p;
            }
            let d = mulmod((residues[i] + p - t) % p, self.inv[i], p);
            digits.push(d);
        }
        let mut x = BigUint::zero();
        let mut modulus = BigUint::one();
        for i in (0..n).rev() {
            x = x * self.primes[i] + digits[i];
        }
        for &p in &self.primes[..n] {
            modulus *= p;
        }
        let x = BigInt::from(x);
        let modulus = BigInt::from(modulus);
        if &x * 2 > modulus {
            x - modulus
        } else {
            x
        }
    }
}

/// A class series in jet form held as residues, reconstructed on demand.
pub struct JetSeries {
    class: SymmetryClass,
    order: usize,
    jet_order: usize,
    crt: Crt,
    /// `residues[prime][m * (jet_order + 1) + j]`
    residues: Vec<Vec<u64>>,
}

impl JetSeries {
    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    /// Truncation order in `x`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn jet_order(&self) -> usize {
        self.jet_order
    }

    /// The exact jet at `x^m`.
    pub fn coefficient(&self, m: usize) -> Result<DeltaJet> {
        if m > self.order {
            return Err(Error::PrerequisiteTooShort { needed: m, available: self.order });
        }
        let slots = self.jet_order + 1;
        let used = primes_needed(m, self.jet_order);
        let mut coeffs = Vec::with_capacity(slots);
        for j in 0..slots {
            let r: Vec<u64> = self.residues[..=used].iter().map(|v| v[m * slots + j]).collect();
            let x = self.crt.reconstruct(&r[..used]);
            let check = self.crt.primes[used];
            let rem = (&x % check + check) % check;
            if rem != BigInt::from(r[used]) {
                return Err(Error::OutOfRange(format!(
                    "{}: modular reconstruction failed at x^{m}, slot {j}",
                    self.class
                )));
            }
            coeffs.push(x);
        }
        Ok(DeltaJet::new(coeffs, self.jet_order))
    }

    pub fn to_xseries(&self) -> Result<XSeries<DeltaJet>> {
        let coeffs = (0..=self.order)
            .map(|m| self.coefficient(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(XSeries::new(self.jet_order, coeffs, self.order))
    }
}

/// Solves several classes in jet form (order `k <= 7`), sharing prerequisites.
pub fn solve_jets(requests: &[(SymmetryClass, usize)], k: usize) -> Result<Vec<JetSeries>> {
    if k >= MAX_SLOTS {
        return Err(Error::OutOfRange(format!("jet order {k} above {}", MAX_SLOTS - 1)));
    }
    let n_max = requests.iter().map(|r| r.1).max().unwrap_or(2);
    let ps = primes(primes_needed(n_max, k) + 1);
    let slots = k + 1;
    let mut residues: Vec<Vec<Vec<u64>>> = vec![Vec::with_capacity(ps.len()); requests.len()];
    for &p in &ps {
        let mut solver = Solver::<ModJet>::new(ModCtx { order: k, p });
        for (i, &(class, n)) in requests.iter().enumerate() {
            let s = solver.series(class, n)?;
            let mut flat = Vec::with_capacity((n + 1) * slots);
            for c in &s.coeffs()[..=n] {
                flat.extend_from_slice(c.slots());
            }
            residues[i].push(flat);
        }
    }
    let crt = Crt::new(&ps);
    Ok(requests
        .iter()
        .zip(residues)
        .map(|(&(class, order), residues)| JetSeries {
            class,
            order,
            jet_order: k,
            crt: crt.clone(),
            residues,
        })
        .collect())
}
