use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::element::{mono_antipode, mono_coproduct, summarize, AlgElement, Ctx};
use super::pbw::{mono_product, Mono};
use crate::error::{Error, Result};
use crate::scalar::{HSeries, Q};

/// Element of `U(sl2)[[h]] ⊗ U(sl2)[[h]]`, stored as an explicit finite sum of
/// `left ⊗ right` PBW monomial pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    terms: BTreeMap<(Mono, Mono), HSeries>,
    ctx: Ctx,
}

#[derive(Serialize, Deserialize)]
pub struct TensorTermRepr {
    pub left: [u32; 3],
    pub right: [u32; 3],
    pub coeff: HSeries,
}

impl TensorElement {
    pub fn zero(ctx: Ctx) -> Self {
        Self {
            terms: BTreeMap::new(),
            ctx,
        }
    }

    pub fn one(ctx: Ctx) -> Self {
        let mut t = Self::zero(ctx);
        t.add_term(Mono::ONE, Mono::ONE, &HSeries::one(ctx.order));
        t
    }

    /// `x ⊗ y`.
    pub fn product_of(x: &AlgElement, y: &AlgElement) -> Self {
        let mut t = Self::zero(x.ctx());
        for (m1, c1) in x.terms() {
            for (m2, c2) in y.terms() {
                t.add_term(*m1, *m2, &(c1 * c2));
            }
        }
        t
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<(Mono, Mono), HSeries> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, left: Mono, right: Mono, c: &HSeries) {
        let c = if c.order() == self.ctx.order {
            c.clone()
        } else {
            c.with_order(self.ctx.order)
        };
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        let entry = self
            .terms
            .entry(key)
            .or_insert_with(|| HSeries::zero(self.ctx.order));
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(*l, *r, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
            ctx: self.ctx,
        }
    }

    pub fn scale(&self, s: &HSeries) -> Self {
        let mut out = Self::zero(self.ctx);
        for ((l, r), c) in &self.terms {
            out.add_term(*l, *r, &(c * s));
        }
        out
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        let mut out = Self::zero(self.ctx);
        for ((l, r), c) in &self.terms {
            out.add_term(*l, *r, &c.scale(s));
        }
        out
    }

    /// Leg-wise product `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`, with the degree cap
    /// enforced on each leg.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.ctx.order != other.ctx.order {
            return Err(Error::OrderMismatch(self.ctx.order, other.ctx.order));
        }
        if self.ctx.cap != other.ctx.cap {
            return Err(Error::CapMismatch(self.ctx.cap, other.ctx.cap));
        }
        let cap = self.ctx.cap;
        let mut acc: BTreeMap<(Mono, Mono), HSeries> = BTreeMap::new();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                let c = c1 * c2;
                if c.is_zero() {
                    continue;
                }
                let degree = (l1.degree() + l2.degree()).max(r1.degree() + r2.degree());
                if degree > cap {
                    return Err(Error::DegreeCapExceeded { degree, cap });
                }
                let left = mono_product(*l1, *l2);
                let right = mono_product(*r1, *r2);
                for (ml, kl) in left.iter() {
                    for (mr, kr) in right.iter() {
                        let e = acc
                            .entry((*ml, *mr))
                            .or_insert_with(|| HSeries::zero(self.ctx.order));
                        *e += &c.scale(&(kl * kr));
                    }
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

    /// `*⊗*` applied leg-wise.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for ((l, r), c) in &self.terms {
            out.add_term(l.star(), r.star(), c);
        }
        out
    }

    /// Swaps the two legs.
    pub fn flip(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for ((l, r), c) in &self.terms {
            out.add_term(*r, *l, c);
        }
        out
    }

    /// `(ε ⊗ id)`.
    pub fn counit_left(&self) -> AlgElement {
        let mut out = AlgElement::zero(self.ctx);
        for ((l, r), c) in &self.terms {
            if l.is_one() {
                out.add_term(*r, c);
            }
        }
        out
    }

    /// `(id ⊗ ε)`.
    pub fn counit_right(&self) -> AlgElement {
        let mut out = AlgElement::zero(self.ctx);
        for ((l, r), c) in &self.terms {
            if r.is_one() {
                out.add_term(*l, c);
            }
        }
        out
    }

    /// `(Δ ⊗ id)` as a list of triple terms.
    pub fn coproduct_left(&self) -> BTreeMap<(Mono, Mono, Mono), HSeries> {
        let mut out: BTreeMap<(Mono, Mono, Mono), HSeries> = BTreeMap::new();
        for ((l, r), c) in &self.terms {
            for (a, b, w) in mono_coproduct(*l) {
                add_triple(&mut out, (a, b, *r), &c.scale(&w));
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `(id ⊗ Δ)` as a list of triple terms.
    pub fn coproduct_right(&self) -> BTreeMap<(Mono, Mono, Mono), HSeries> {
        let mut out: BTreeMap<(Mono, Mono, Mono), HSeries> = BTreeMap::new();
        for ((l, r), c) in &self.terms {
            for (a, b, w) in mono_coproduct(*r) {
                add_triple(&mut out, (*l, a, b), &c.scale(&w));
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `m ∘ (S ⊗ id)`.
    pub fn antipode_left_multiply(&self) -> Result<AlgElement> {
        let mut out = AlgElement::zero(self.ctx);
        for ((l, r), c) in &self.terms {
            let right = AlgElement::from_mono(*r, c.clone(), self.ctx);
            out = out.add(&mono_antipode(*l, self.ctx)?.multiply(&right)?);
        }
        Ok(out)
    }

    /// `m ∘ (id ⊗ S)`.
    pub fn antipode_right_multiply(&self) -> Result<AlgElement> {
        let mut out = AlgElement::zero(self.ctx);
        for ((l, r), c) in &self.terms {
            let left = AlgElement::from_mono(*l, c.clone(), self.ctx);
            out = out.add(&left.multiply(&mono_antipode(*r, self.ctx)?)?);
        }
        Ok(out)
    }

    /// Coefficients of `h^k`.
    pub fn at_order(&self, k: usize) -> BTreeMap<(Mono, Mono), Q> {
        self.terms
            .iter()
            .filter(|(_, c)| !c.coeff(k).is_zero())
            .map(|(key, c)| (*key, c.coeff(k).clone()))
            .collect()
    }

    /// Keeps only orders `< n`.
    pub fn below(&self, n: usize) -> Self {
        let mut out = Self::zero(self.ctx);
        for ((l, r), c) in &self.terms {
            out.add_term(*l, *r, &c.below(n));
        }
        out
    }

    pub fn with_ctx(&self, ctx: Ctx) -> Self {
        let mut out = Self::zero(ctx);
        for ((l, r), c) in &self.terms {
            out.add_term(*l, *r, c);
        }
        out
    }

    /// Inverse of an element of the form `1⊗1 + O(h)` by the geometric series.
    pub fn inverse(&self) -> Result<Self> {
        let one = Self::one(self.ctx);
        let nil = self.sub(&one);
        if nil.terms.values().any(|c| !c.coeff(0).is_zero()) {
            return Err(Error::Unsupported(
                "tensor inverse needs the form 1⊗1 + O(h)".into(),
            ));
        }
        let minus = nil.neg();
        let mut out = one.clone();
        let mut power = one;
        for _ in 1..=self.ctx.order {
            power = power.multiply(&minus)?;
            out = out.add(&power);
        }
        Ok(out)
    }

    pub fn residual_summary(&self) -> Option<(usize, Q)> {
        summarize(self.terms.values())
    }

    pub fn to_repr(&self) -> Vec<TensorTermRepr> {
        self.terms
            .iter()
            .map(|((l, r), c)| TensorTermRepr {
                left: [l.a, l.b, l.c],
                right: [r.a, r.b, r.c],
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_repr(repr: &[TensorTermRepr], ctx: Ctx) -> Result<Self> {
        let mut t = Self::zero(ctx);
        for term in repr {
            if term.coeff.order() != ctx.order {
                return Err(Error::OrderMismatch(term.coeff.order(), ctx.order));
            }
            let l = Mono::new(term.left[0], term.left[1], term.left[2]);
            let r = Mono::new(term.right[0], term.right[1], term.right[2]);
            t.add_term(l, r, &term.coeff);
        }
        Ok(t)
    }
}

fn add_triple(
    out: &mut BTreeMap<(Mono, Mono, Mono), HSeries>,
    key: (Mono, Mono, Mono),
    c: &HSeries,
) {
    let e = out
        .entry(key)
        .or_insert_with(|| HSeries::zero(c.order()));
    *e += c;
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((l, r), c)| {
                if c.is_one() {
                    format!("{l} ⊗ {r}")
                } else {
                    format!("[{c}] {l} ⊗ {r}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl TensorElement {
    /// True when every coefficient vanishes at `h^0`.
    pub fn vanishes_at_order_zero(&self) -> bool {
        self.terms.values().all(|c| c.coeff(0).is_zero())
    }
}
