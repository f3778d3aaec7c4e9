//! Solving the class q-difference equations.
//!
//! Each equation `F = RHS(F)` is written as a small expression graph. The
//! solver evaluates the graph lazily, one `x`-order at a time: computing
//! `[x^n]F` only ever asks for `[x^j]F` with `j < n`, because every path from
//! the right-hand side back to `F` passes through a factor of positive
//! valuation. Asking for `[x^n]F` while it is being computed is reported as
//! [`Error::NonProductive`].
//!
//! The same graph runs in Picard mode, where the unknown is a fixed iterate
//! `F_t` and one evaluation produces `F_{t+1} = RHS(F_t)`.

use std::collections::HashMap;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number::binomial;
use crate::series::{Coefficient, DeltaJet, LaurentQPoly, XSeries};
use crate::symmetry::SymmetryClass;

type NodeId = usize;

#[derive(Clone, Debug)]
enum Op<C: Coefficient> {
    Unknown,
    Given(XSeries<C>),
    /// `c x^x q^q`
    Monomial { x: usize, q: i64, c: i64 },
    Add(NodeId, NodeId),
    Sub(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Recip(NodeId),
    SubstXq(NodeId),
    SubstSquare(NodeId),
    /// `c x^dx q^dq · child`; `dx` may be negative
    Scale { dx: i64, dq: i64, c: i64, of: NodeId },
}

struct Node<C: Coefficient> {
    op: Op<C>,
    val: usize,
    cache: Vec<C>,
}

struct Graph<C: Coefficient> {
    ctx: C::Ctx,
    name: String,
    nodes: Vec<Node<C>>,
    unknown: NodeId,
    rhs: NodeId,
    busy: bool,
}

impl<C: Coefficient> Graph<C> {
    fn new(ctx: C::Ctx, name: &str, unknown_val: usize) -> Self {
        let mut g = Self {
            ctx,
            name: name.to_string(),
            nodes: Vec::new(),
            unknown: 0,
            rhs: 0,
            busy: false,
        };
        g.unknown = g.push(Op::Unknown, unknown_val);
        g
    }

    fn push(&mut self, op: Op<C>, val: usize) -> NodeId {
        self.nodes.push(Node { op, val, cache: Vec::new() });
        self.nodes.len() - 1
    }

    fn val(&self, id: NodeId) -> usize {
        self.nodes[id].val
    }

    fn given(&mut self, s: XSeries<C>) -> NodeId {
        let v = s.valuation().unwrap_or(s.order() + 1);
        self.push(Op::Given(s), v)
    }

    fn monomial(&mut self, x: usize, q: i64, c: i64) -> NodeId {
        self.push(Op::Monomial { x, q, c }, if c == 0 { usize::MAX / 4 } else { x })
    }

    fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let v = self.val(a).min(self.val(b));
        self.push(Op::Add(a, b), v)
    }

    fn sub(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let v = self.val(a).min(self.val(b));
        self.push(Op::Sub(a, b), v)
    }

    fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let v = self.val(a) + self.val(b);
        self.push(Op::Mul(a, b), v)
    }

    fn recip(&mut self, a: NodeId) -> NodeId {
        assert_eq!(self.val(a), 0, "reciprocal of a series without constant term");
        self.push(Op::Recip(a), 0)
    }

    fn subst_xq(&mut self, a: NodeId) -> NodeId {
        let v = self.val(a);
        self.push(Op::SubstXq(a), v)
    }

    fn subst_square(&mut self, a: NodeId) -> NodeId {
        let v = 2 * self.val(a);
        self.push(Op::SubstSquare(a), v)
    }

    fn scale(&mut self, dx: i64, dq: i64, c: i64, of: NodeId) -> NodeId {
        let v = (self.val(of) as i64 + dx).max(0) as usize;
        self.push(Op::Scale { dx, dq, c, of }, v)
    }

    fn set_rhs(&mut self, rhs: NodeId) -> Result<()> {
        if self.val(rhs) < self.val(self.unknown) {
            return Err(Error::NonProductive(format!(
                "{}: right-hand side has lower valuation than the unknown",
                self.name
            )));
        }
        self.rhs = rhs;
        Ok(())
    }

    fn coeff(&self, id: NodeId, k: usize) -> &C {
        &self.nodes[id].cache[k]
    }

    fn ensure(&mut self, id: NodeId, n: usize) -> Result<()> {
        while self.nodes[id].cache.len() <= n {
            let k = self.nodes[id].cache.len();
            let c = self.compute(id, k)?;
            self.nodes[id].cache.push(c);
        }
        Ok(())
    }

    fn compute(&mut self, id: NodeId, k: usize) -> Result<C> {
        let zero = C::zero(&self.ctx);
        let op = match &self.nodes[id].op {
            Op::Given(s) => {
                return s.coeff(k).cloned().ok_or(Error::PrerequisiteTooShort {
                    needed: k,
                    available: s.order(),
                })
            }
            op => op.clone(),
        };
        // coefficients below the valuation vanish; negative shifts still check their residue
        if k < self.nodes[id].val && !matches!(op, Op::Scale { dx, .. } if dx < 0 && k == 0) {
            return Ok(zero);
        }
        Ok(match op {
            Op::Given(_) => unreachable!(),
            Op::Unknown => {
                if self.busy {
                    return Err(Error::NonProductive(format!(
                        "{}: coefficient x^{k} depends on itself",
                        self.name
                    )));
                }
                self.busy = true;
                let r = self.ensure(self.rhs, k);
                self.busy = false;
                r?;
                self.coeff(self.rhs, k).clone()
            }
            Op::Monomial { x, q, c } => {
                if k == x {
                    C::q_power(q, &self.ctx).mul(&C::from_int(c, &self.ctx))
                } else {
                    zero
                }
            }
            Op::Add(a, b) => {
                self.ensure(a, k)?;
                self.ensure(b, k)?;
                self.coeff(a, k).add(self.coeff(b, k))
            }
            Op::Sub(a, b) => {
                self.ensure(a, k)?;
                self.ensure(b, k)?;
                self.coeff(a, k).sub(self.coeff(b, k))
            }
            Op::Mul(a, b) => {
                let (va, vb) = (self.val(a), self.val(b));
                self.ensure(a, k - vb)?;
                self.ensure(b, k - va)?;
                let (ca, cb) = (&self.nodes[a].cache, &self.nodes[b].cache);
                C::convolve(&self.ctx, &ca[va..=k - vb], &cb[vb..=k - va])
            }
            Op::Recip(a) => {
                self.ensure(a, k)?;
                if k == 0 {
                    self.coeff(a, 0).inverse().ok_or(Error::NotInvertible)?
                } else {
                    let (ca, cr) = (&self.nodes[a].cache, &self.nodes[id].cache);
                    let acc = C::convolve(&self.ctx, &ca[1..=k], &cr[..k]);
                    acc.mul(&cr[0]).neg()
                }
            }
            Op::SubstXq(a) => {
                self.ensure(a, k)?;
                self.coeff(a, k).times_q_power(k as i64)
            }
            Op::SubstSquare(a) => {
                if k % 2 == 1 {
                    zero
                } else {
                    self.ensure(a, k / 2)?;
                    self.coeff(a, k / 2).q_squared()
                }
            }
            Op::Scale { dx, dq, c, of } => {
                if dx < 0 && k == 0 {
                    let below = (-dx) as usize - 1;
                    self.ensure(of, below)?;
                    if (0..=below).any(|i| !self.coeff(of, i).is_zero()) {
                        return Err(Error::NegativeDegreeResidue(format!(
                            "{}: x-degree below zero after division",
                            self.name
                        )));
                    }
                }
                let src = k as i64 - dx;
                if src < 0 {
                    zero
                } else {
                    self.ensure(of, src as usize)?;
                    let v = self.coeff(of, src as usize).times_q_power(dq);
                    if c == 1 {
                        v
                    } else {
                        v.mul(&C::from_int(c, &self.ctx))
                    }
                }
            }
        })
    }

    /// Online solve up to `x^n`.
    fn solve(&mut self, n: usize) -> Result<XSeries<C>> {
        self.ensure(self.unknown, n)?;
        let coeffs = self.nodes[self.unknown].cache[..=n].to_vec();
        Ok(XSeries::new(self.ctx.clone(), coeffs, n))
    }

    /// One Picard step: evaluates the right-hand side at the iterate `f`.
    fn apply(&mut self, f: &XSeries<C>) -> Result<XSeries<C>> {
        for node in &mut self.nodes {
            if !matches!(node.op, Op::Given(_)) {
                node.cache.clear();
            }
        }
        self.nodes[self.unknown].cache = f.coeffs().to_vec();
        // the unknown is frozen, so asking beyond its order is a short prerequisite
        self.busy = true;
        let n = f.order();
        let r = self.ensure(self.rhs, n);
        self.busy = false;
        match r {
            Err(Error::NonProductive(_)) => {
                return Err(Error::PrerequisiteTooShort { needed: n + 1, available: n })
            }
            r => r?,
        }
        let coeffs = self.nodes[self.rhs].cache[..=n].to_vec();
        Ok(XSeries::new(self.ctx.clone(), coeffs, n))
    }
}

/// Dependency and gain information for one class equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassSpec {
    pub class: SymmetryClass,
    /// Series substituted as `(x², q²)` into the right-hand side.
    pub prerequisite: Option<SymmetryClass>,
    /// Minimum increase of `x`-adic valuation per application of the right-hand side.
    pub gain: usize,
}

impl ClassSpec {
    pub fn of(class: SymmetryClass) -> Self {
        use SymmetryClass::*;
        let prerequisite = match class {
            R2 | D2 => Some(Full),
            D1D2 => Some(D1),
            _ => None,
        };
        Self { class, prerequisite, gain: 2 }
    }

    /// Order of the prerequisite needed to solve to `x^n`: the right-hand side
    /// divides by `x²` after substituting `x -> x²`.
    pub fn prerequisite_order(&self, n: usize) -> usize {
        (n + 2) / 2
    }
}

/// The inhomogeneous term `x²q(1 + xq)/(1 - xq) = x²q + 2 Σ_{j≥1} x^{j+2} q^{j+1}`.
fn rectangle_source<C: Coefficient>(ctx: &C::Ctx, n: usize) -> XSeries<C> {
    let coeffs = (0..=n)
        .map(|i| match i {
            0 | 1 => C::zero(ctx),
            2 => C::q_power(1, ctx),
            _ => C::q_power(i as i64 - 1, ctx).mul(&C::from_int(2, ctx)),
        })
        .collect();
    XSeries::new(ctx.clone(), coeffs, n)
}

fn build_graph<C: Coefficient>(
    class: SymmetryClass,
    ctx: &C::Ctx,
    n: usize,
    prerequisite: Option<XSeries<C>>,
) -> Result<Graph<C>> {
    use SymmetryClass::*;
    let mut g = Graph::new(ctx.clone(), class.name(), 2);
    let u = g.unknown;
    let one = g.monomial(0, 0, 1);
    let fxq = g.subst_xq(u);
    let rhs = match class {
        // x²q / (1 - 2xq - F(xq,q))
        Full => {
            let two_xq = g.monomial(1, 1, 2);
            let a = g.sub(one, two_xq);
            let a = g.sub(a, fxq);
            let r = g.recip(a);
            g.scale(2, 1, 1, r)
        }
        // x²q / (1 - F(xq,q))
        D1 => {
            let a = g.sub(one, fxq);
            let r = g.recip(a);
            g.scale(2, 1, 1, r)
        }
        // (1/(x²q)) (1 + [2xq] + F(xq,q)) Pre(x²,q²)
        R2 | D2 | D1D2 => {
            let pre = prerequisite.expect("prerequisite supplied");
            let mut a = g.add(one, fxq);
            if class == R2 {
                let two_xq = g.monomial(1, 1, 2);
                a = g.add(a, two_xq);
            }
            let p = g.given(pre);
            let p2 = g.subst_square(p);
            let prod = g.mul(a, p2);
            g.scale(-2, -1, 1, prod)
        }
        // x²q F(xq,q) + x²q(1+xq)/(1-xq)
        Rect => {
            let h = g.scale(2, 1, 1, fxq);
            let src = g.given(rectangle_source(ctx, n));
            g.add(h, src)
        }
        // x²q F(xq,q) + x²q
        Square => {
            let h = g.scale(2, 1, 1, fxq);
            let src = g.monomial(2, 1, 1);
            g.add(h, src)
        }
    };
    g.set_rhs(rhs)?;
    Ok(g)
}

/// Solved class series over one coefficient ring, cached by class.
pub struct Solver<C: Coefficient> {
    ctx: C::Ctx,
    solved: HashMap<SymmetryClass, XSeries<C>>,
}

impl<C: Coefficient> Solver<C> {
    pub fn new(ctx: C::Ctx) -> Self {
        Self { ctx, solved: HashMap::new() }
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    /// The class series to order at least `n`.
    pub fn series(&mut self, class: SymmetryClass, n: usize) -> Result<&XSeries<C>> {
        if n < 2 {
            return Err(Error::OutOfRange(format!("series order {n} below 2")));
        }
        let have = self.solved.get(&class).map_or(0, |s| s.order());
        if have < n {
            let spec = ClassSpec::of(class);
            let pre = match spec.prerequisite {
                Some(p) => {
                    let order = spec.prerequisite_order(n).max(2);
                    Some(self.series(p, order)?.truncate(order))
                }
                None => None,
            };
            let mut g = build_graph(class, &self.ctx, n, pre)?;
            let s = g.solve(n)?;
            self.solved.insert(class, s);
        }
        Ok(&self.solved[&class])
    }

    /// Picard iterates `F_0 = 0, F_1, ..., F_t` with `F_{t+1} = RHS(F_t)`, stopping at
    /// the first repeat. Fails if the sequence has not settled after `n + 2` steps.
    pub fn picard_iterates(&mut self, class: SymmetryClass, n: usize) -> Result<Vec<XSeries<C>>> {
        let spec = ClassSpec::of(class);
        let pre = match spec.prerequisite {
            Some(p) => {
                let order = spec.prerequisite_order(n).max(2);
                Some(self.series(p, order)?.truncate(order))
            }
            None => None,
        };
        let mut g = build_graph(class, &self.ctx, n, pre)?;
        let mut iterates = vec![XSeries::zero(self.ctx.clone(), n)];
        for _ in 0..n + 2 {
            let next = g.apply(iterates.last().unwrap())?;
            if &next == iterates.last().unwrap() {
                return Ok(iterates);
            }
            iterates.push(next);
        }
        Err(Error::NonProductive(format!(
            "{class}: Picard iteration did not settle within {} steps",
            n + 2
        )))
    }
}

/// The class series truncated at `x^n`.
pub fn solve_series<C: Coefficient>(
    class: SymmetryClass,
    n: usize,
    ctx: C::Ctx,
) -> Result<XSeries<C>> {
    Ok(Solver::new(ctx).series(class, n)?.truncate(n))
}

/// Exact perimeter-and-area series; checks that every area is positive.
pub fn solve_exact(class: SymmetryClass, n: usize) -> Result<XSeries<LaurentQPoly>> {
    let s = solve_series::<LaurentQPoly>(class, n, ())?;
    check_positive_areas(class, &s)?;
    Ok(s)
}

/// Series in jet form with `δ`-order `k`.
pub fn solve_jet(class: SymmetryClass, n: usize, k: usize) -> Result<XSeries<DeltaJet>> {
    solve_series::<DeltaJet>(class, n, k)
}

fn check_positive_areas(class: SymmetryClass, s: &XSeries<LaurentQPoly>) -> Result<()> {
    for (m, p) in s.coeffs().iter().enumerate() {
        if p.min_degree().is_some_and(|d| d < 1) {
            return Err(Error::NegativeDegreeResidue(format!(
                "{class}: q-degree below 1 at x^{m}"
            )));
        }
    }
    Ok(())
}

/// Coefficients known in closed form.
///
/// With `n = Some(area)` returns `[x^m q^n]`; with `None`, the value at `q = 1`.
/// `Full` is only available at `q = 1` (Catalan numbers).
pub fn closed_form_coefficient(class: SymmetryClass, m: usize, n: Option<usize>) -> Result<BigInt> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("half-perimeter {m} below 2")));
    }
    match (class, n) {
        (SymmetryClass::Full, None) => {
            let c = m as i64 - 1;
            Ok(binomial(2 * c, c as u64).div_floor(&BigInt::from(c + 1)))
        }
        (SymmetryClass::Rect, None) => Ok(BigInt::from(m - 1)),
        (SymmetryClass::Rect, Some(n)) => {
            Ok(BigInt::from((1..m).filter(|a| a * (m - a) == n).count()))
        }
        (SymmetryClass::Square, None) => Ok(BigInt::from(u8::from(m % 2 == 0))),
        (SymmetryClass::Square, Some(n)) => {
            let s = m / 2;
            Ok(if m % 2 == 0 && n == s * s { BigInt::one() } else { BigInt::zero() })
        }
        (c, _) => Err(Error::UnsupportedClass {
            op: "closed_form_coefficient",
            class: c.to_string(),
        }),
    }
}

/// `class,m,n,coefficient` rows for every nonzero `[x^m q^n]`.
pub fn write_exact_csv<W: Write>(
    out: W,
    series: &[(SymmetryClass, &XSeries<LaurentQPoly>)],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["class", "m", "n", "coefficient"])?;
    for (class, s) in series {
        for (m, p) in s.coeffs().iter().enumerate() {
            for (n, c) in p.terms() {
                w.write_record([class.name(), &m.to_string(), &n.to_string(), &c.to_string()])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// `class,m,k,jet_coefficient` rows: slot `k` of the `δ`-jet at `x^m`, for nonzero jets.
pub fn write_jet_csv<W: Write>(out: W, series: &[(SymmetryClass, &XSeries<DeltaJet>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["class", "m", "k", "jet_coefficient"])?;
    for (class, s) in series {
        for (m, j) in s.coeffs().iter().enumerate() {
            if j.is_zero() {
                continue;
            }
            for (k, c) in j.coeffs().iter().enumerate() {
                w.write_record([class.name(), &m.to_string(), &k.to_string(), &c.to_string()])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
