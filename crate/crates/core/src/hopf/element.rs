use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::pbw::{mono_product, Mono};
use super::tensor::TensorElement;
use crate::error::{Error, Result};
use crate::scalar::{HSeries, Q};

/// Truncation order `K` and PBW degree cap `D` shared by all elements of a
/// computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ctx {
    pub order: usize,
    pub cap: u32,
}

impl Ctx {
    pub fn new(order: usize, cap: u32) -> Self {
        Self { order, cap }
    }

    /// Default cap for a given truncation order.
    pub fn for_order(order: usize) -> Self {
        Self::new(order, default_cap(order))
    }
}

/// Degree cap used when none is configured: `2K + 2`.
pub fn default_cap(order: usize) -> u32 {
    2 * order as u32 + 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    H,
    Xp,
    Xm,
}

impl Gen {
    pub const ALL: [Gen; 3] = [Gen::H, Gen::Xp, Gen::Xm];

    pub fn mono(self) -> Mono {
        match self {
            Gen::H => Mono::H,
            Gen::Xp => Mono::XP,
            Gen::Xm => Mono::XM,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::H => "H",
            Gen::Xp => "Xp",
            Gen::Xm => "Xm",
        }
    }
}

/// Element of `U(sl2)[[h]]` in PBW normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgElement {
    terms: BTreeMap<Mono, HSeries>,
    ctx: Ctx,
}

#[derive(Serialize, Deserialize)]
pub struct TermRepr {
    pub monomial: [u32; 3],
    pub coeff: HSeries,
}

impl AlgElement {
    pub fn zero(ctx: Ctx) -> Self {
        Self {
            terms: BTreeMap::new(),
            ctx,
        }
    }

    pub fn one(ctx: Ctx) -> Self {
        Self::from_mono(Mono::ONE, HSeries::one(ctx.order), ctx)
    }

    pub fn generator(g: Gen, ctx: Ctx) -> Self {
        Self::from_mono(g.mono(), HSeries::one(ctx.order), ctx)
    }

    pub fn scalar(c: HSeries, ctx: Ctx) -> Self {
        Self::from_mono(Mono::ONE, c, ctx)
    }

    pub fn from_mono(m: Mono, c: HSeries, ctx: Ctx) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term(m, &c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, HSeries)>>(terms: I, ctx: Ctx) -> Self {
        let mut e = Self::zero(ctx);
        for (m, c) in terms {
            e.add_term(m, &c);
        }
        e
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn order(&self) -> usize {
        self.ctx.order
    }

    pub fn terms(&self) -> &BTreeMap<Mono, HSeries> {
        &self.terms
    }

    pub fn coeff(&self, m: &Mono) -> HSeries {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| HSeries::zero(self.ctx.order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    /// Adds `c * m`; the coefficient is re-truncated to this element's order.
    pub fn add_term(&mut self, m: Mono, c: &HSeries) {
        let c = if c.order() == self.ctx.order {
            c.clone()
        } else {
            c.with_order(self.ctx.order)
        };
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(m)
            .or_insert_with(|| HSeries::zero(self.ctx.order));
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
            ctx: self.ctx,
        }
    }

    pub fn scale(&self, s: &HSeries) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, c * s)), self.ctx)
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, c.scale(s))), self.ctx)
    }

    /// Normal-ordered product. A product term whose coefficient survives
    /// truncation but whose degree exceeds the cap is an error.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.ctx.order != other.ctx.order {
            return Err(Error::OrderMismatch(self.ctx.order, other.ctx.order));
        }
        if self.ctx.cap != other.ctx.cap {
            return Err(Error::CapMismatch(self.ctx.cap, other.ctx.cap));
        }
        let mut acc: BTreeMap<Mono, HSeries> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1 * c2;
                if c.is_zero() {
                    continue;
                }
                let degree = m1.degree() + m2.degree();
                if degree > self.ctx.cap {
                    return Err(Error::DegreeCapExceeded {
                        degree,
                        cap: self.ctx.cap,
                    });
                }
                for (m, k) in mono_product(*m1, *m2).iter() {
                    let e = acc
                        .entry(*m)
                        .or_insert_with(|| HSeries::zero(self.ctx.order));
                    *e += &c.scale(k);
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self {
            terms: acc,
            ctx: self.ctx,
        })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.multiply(other)?.sub(&other.multiply(self)?))
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut out = Self::one(self.ctx);
        for _ in 0..n {
            out = out.multiply(self)?;
        }
        Ok(out)
    }

    /// Exponential of an element with no `h^0` part.
    pub fn exp(&self) -> Result<Self> {
        if self.terms.values().any(|c| !c.coeff(0).is_zero()) {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut out = Self::one(self.ctx);
        let mut power = Self::one(self.ctx);
        for k in 1..=self.ctx.order {
            power = power.multiply(self)?.scale_q(&Q::new(1.into(), (k as i64).into()));
            out = out.add(&power);
        }
        Ok(out)
    }

    /// Undeformed coproduct, primitive on generators. Each PBW monomial maps
    /// to a sum of tensors of PBW monomials with binomial weights, so no
    /// reordering is needed.
    pub fn coproduct(&self) -> Result<TensorElement> {
        let mut out = TensorElement::zero(self.ctx);
        for (m, c) in &self.terms {
            for (left, right, w) in mono_coproduct(*m) {
                if left.degree() > self.ctx.cap || right.degree() > self.ctx.cap {
                    return Err(Error::DegreeCapExceeded {
                        degree: left.degree().max(right.degree()),
                        cap: self.ctx.cap,
                    });
                }
                out.add_term(left, right, &c.scale(&w));
            }
        }
        Ok(out)
    }

    /// Undeformed antipode: `S(g) = -g` on generators, anti-multiplicative.
    pub fn antipode(&self) -> Result<Self> {
        let mut out = Self::zero(self.ctx);
        for (m, c) in &self.terms {
            out = out.add(&mono_antipode(*m, self.ctx)?.scale(c));
        }
        Ok(out)
    }

    pub fn counit(&self) -> HSeries {
        self.coeff(&Mono::ONE)
    }

    /// Compact star: `H* = H`, `Xp* = Xm`, antilinear with `h` real.
    pub fn star(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.star(), c.clone())), self.ctx)
    }

    /// Coefficients of `h^k`.
    pub fn at_order(&self, k: usize) -> BTreeMap<Mono, Q> {
        self.terms
            .iter()
            .filter(|(_, c)| !c.coeff(k).is_zero())
            .map(|(m, c)| (*m, c.coeff(k).clone()))
            .collect()
    }

    /// Keeps only orders `< n`.
    pub fn below(&self, n: usize) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, c.below(n))), self.ctx)
    }

    pub fn with_ctx(&self, ctx: Ctx) -> Self {
        Self::from_terms(self.terms.clone(), ctx)
    }

    /// First order with a nonzero coefficient and the largest absolute
    /// coefficient, if the element is nonzero.
    pub fn residual_summary(&self) -> Option<(usize, Q)> {
        summarize(self.terms.values())
    }

    pub fn to_repr(&self) -> Vec<TermRepr> {
        self.terms
            .iter()
            .map(|(m, c)| TermRepr {
                monomial: [m.a, m.b, m.c],
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_repr(repr: &[TermRepr], ctx: Ctx) -> Result<Self> {
        let mut e = Self::zero(ctx);
        for t in repr {
            if t.coeff.order() != ctx.order {
                return Err(Error::OrderMismatch(t.coeff.order(), ctx.order));
            }
            let m = Mono::new(t.monomial[0], t.monomial[1], t.monomial[2]);
            e.add_term(m, &t.coeff);
        }
        Ok(e)
    }
}

pub(crate) fn summarize<'a, I: Iterator<Item = &'a HSeries>>(coeffs: I) -> Option<(usize, Q)> {
    let mut best: Option<(usize, Q)> = None;
    for c in coeffs {
        if let Some((first, max)) = c.residual_summary() {
            best = Some(match best {
                None => (first, max),
                Some((f, m)) => (f.min(first), if max > m { max } else { m }),
            });
        }
    }
    best
}

fn binomial(n: u32, k: u32) -> Q {
    let mut num = Q::one();
    for i in 0..k {
        num = num * Q::from_integer((n - i).into()) / Q::from_integer((i + 1).into());
    }
    num
}

/// `Delta(Xm^a H^b Xp^c)` as a list of `(left, right, weight)`.
pub(crate) fn mono_coproduct(m: Mono) -> Vec<(Mono, Mono, Q)> {
    let mut out = Vec::new();
    for i in 0..=m.a {
        for j in 0..=m.b {
            for k in 0..=m.c {
                let w = binomial(m.a, i) * binomial(m.b, j) * binomial(m.c, k);
                out.push((Mono::new(i, j, k), Mono::new(m.a - i, m.b - j, m.c - k), w));
            }
        }
    }
    out
}

/// `S(Xm^a H^b Xp^c) = (-1)^(a+b+c) Xp^c H^b Xm^a`, normal ordered.
pub(crate) fn mono_antipode(m: Mono, ctx: Ctx) -> Result<AlgElement> {
    let sign = if m.degree() % 2 == 0 { Q::one() } else { -Q::one() };
    let unit = HSeries::one(ctx.order);
    let xp = AlgElement::from_mono(Mono::new(0, 0, m.c), unit.clone(), ctx);
    let hb = AlgElement::from_mono(Mono::new(0, m.b, 0), unit.clone(), ctx);
    let xm = AlgElement::from_mono(Mono::new(m.a, 0, 0), unit, ctx);
    Ok(xp.multiply(&hb)?.multiply(&xm)?.scale_q(&sign))
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if c.is_one() {
                    format!("{m}")
                } else {
                    format!("[{c}] {m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
