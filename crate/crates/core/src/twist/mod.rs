//! The deformation package: the isomorphism `phi_h: U_h(sl2) -> U(sl2)[[h]]`,
//! the twist `F` with `F Δ(phi_h(x)) F^{-1} = (phi_h ⊗ phi_h) Δ_h(x)`, and the
//! derived elements `γ = S(F^{-1(1)}) F^{-1(2)}`, `γ' = F^{(2)} S(F^{(1)})`.

mod solve;
pub mod uh;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{AlgElement, Ctx, Gen, Mono, TensorElement, TermRepr, TensorTermRepr};
use crate::scalar::{q_frac, HSeries};
use crate::verify::{Residual, VerificationReport};

pub use solve::{solve_twist, solve_twist_from, SolveOptions};
pub use uh::{Letter, UhElement, UhTensor, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PivotRule {
    /// Free directions are set to zero after eliminating with the
    /// lexicographically smallest monomials as pivots.
    LexMin,
    /// Any free direction is an error.
    None,
}

impl PivotRule {
    pub fn name(self) -> &'static str {
        match self {
            PivotRule::LexMin => "lex-min",
            PivotRule::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gauge {
    pub cartan_fixed: bool,
    pub unitary: bool,
    pub pivot_rule: PivotRule,
}

/// Solved deformation data. All fields are truncated at the same order.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistData {
    pub ctx: Ctx,
    pub phi: BTreeMap<Gen, AlgElement>,
    pub f: TensorElement,
    pub f_inv: TensorElement,
    pub gamma: AlgElement,
    pub gamma_prime: AlgElement,
    pub gauge: Gauge,
    /// Condition name to the largest nonzero residual; empty for a valid solution.
    pub residuals: BTreeMap<String, String>,
}

impl TwistData {
    pub fn order(&self) -> usize {
        self.ctx.order
    }

    pub fn phi(&self, g: Gen) -> &AlgElement {
        &self.phi[&g]
    }

    /// Rebuilds `F^{-1}`, `γ`, `γ'` and the residual map after `F` or `phi`
    /// changed.
    pub fn refresh(&mut self) -> Result<()> {
        self.f_inv = self.f.inverse()?;
        let (gamma, gamma_prime) = gamma_elements_of(&self.f, &self.f_inv)?;
        self.gamma = gamma;
        self.gamma_prime = gamma_prime;
        self.residuals = condition_residuals(self)?
            .into_iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(k, r)| (k, r.max().expect("nonzero").to_string()))
            .collect();
        Ok(())
    }

    /// Same data viewed at a lower truncation order.
    pub fn truncated(&self, order: usize) -> Result<TwistData> {
        if order > self.order() {
            return Err(Error::Config(format!(
                "cannot raise truncation order from {} to {order}",
                self.order()
            )));
        }
        let ctx = Ctx::new(order, self.ctx.cap);
        let mut t = TwistData {
            ctx,
            phi: self
                .phi
                .iter()
                .map(|(g, e)| (*g, e.with_ctx(ctx)))
                .collect(),
            f: self.f.with_ctx(ctx),
            f_inv: self.f_inv.with_ctx(ctx),
            gamma: self.gamma.with_ctx(ctx),
            gamma_prime: self.gamma_prime.with_ctx(ctx),
            gauge: self.gauge,
            residuals: BTreeMap::new(),
        };
        t.refresh()?;
        Ok(t)
    }

    /// `q^{±H/2}` mapped through `phi_h`, i.e. `exp(±(h/2) H)`.
    pub fn phi_k(&self, sign: i64) -> Result<AlgElement> {
        let hh = AlgElement::from_mono(
            Mono::H,
            HSeries::monomial(q_frac(sign, 2), 1, self.ctx.order),
            self.ctx,
        );
        hh.exp()
    }

    pub fn phi_letter(&self, l: Letter) -> Result<AlgElement> {
        match l {
            Letter::H => Ok(self.phi[&Gen::H].clone()),
            Letter::Xp => Ok(self.phi[&Gen::Xp].clone()),
            Letter::Xm => Ok(self.phi[&Gen::Xm].clone()),
            Letter::K => self.phi_k(1),
            Letter::Ki => self.phi_k(-1),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TwistDataRepr::from(self)).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let repr: TwistDataRepr = serde_json::from_value(value.clone())
            .map_err(|e| Error::Malformed(e.to_string()))?;
        repr.into_data()
    }
}

/// `phi_h` applied to a quantum-group element.
pub fn apply_phi_h(x: &UhElement, t: &TwistData) -> Result<AlgElement> {
    let mut out = AlgElement::zero(t.ctx);
    for (word, c) in x.terms() {
        let mut value = AlgElement::scalar(c.with_order(t.ctx.order), t.ctx);
        for &l in word {
            value = value.multiply(&t.phi_letter(l)?)?;
        }
        out = out.add(&value);
    }
    Ok(out)
}

/// `(phi_h ⊗ phi_h) Δ_h(x)`.
pub fn coproduct_h_image(x: &UhElement, t: &TwistData) -> Result<TensorElement> {
    let mut out = TensorElement::zero(t.ctx);
    for ((w1, w2), c) in x.coproduct() {
        let left = apply_phi_h(&UhElement::from_word(w1, c.with_order(t.ctx.order)), t)?;
        let right = apply_phi_h(&UhElement::word(w2, t.ctx.order), t)?;
        out = out.add(&TensorElement::product_of(&left, &right));
    }
    Ok(out)
}

/// `γ = Σ S(g1) g2` over `F^{-1} = Σ g1 ⊗ g2` and `γ' = Σ f2 S(f1)` over
/// `F = Σ f1 ⊗ f2`.
/// Moves along the gauge orbit of a solution:
/// `phi -> w phi w^{-1}` and `F -> (w⊗w) F Δ(w)^{-1}` with `w = exp(z)`.
/// `z` must vanish at `h = 0`. The result is flagged non-unitary.
pub fn conjugate_gauge(t: &TwistData, z: &AlgElement) -> Result<TwistData> {
    let w = z.exp()?;
    let w_inv = z.neg().exp()?;
    let mut out = t.clone();
    for p in out.phi.values_mut() {
        *p = w.multiply(p)?.multiply(&w_inv)?;
    }
    out.f = TensorElement::product_of(&w, &w)
        .multiply(&t.f)?
        .multiply(&w_inv.coproduct()?)?;
    out.gauge.unitary = false;
    out.refresh()?;
    Ok(out)
}

/// `F -> F x` for `x` commuting with the image of `Δ`; `phi` is unchanged.
pub fn retwist(t: &TwistData, x: &TensorElement) -> Result<TwistData> {
    let mut out = t.clone();
    out.f = t.f.multiply(x)?;
    out.gauge.unitary = false;
    out.refresh()?;
    Ok(out)
}

pub fn gamma_elements_of(
    f: &TensorElement,
    f_inv: &TensorElement,
) -> Result<(AlgElement, AlgElement)> {
    let ctx = f.ctx();
    let mut gamma_prime = AlgElement::zero(ctx);
    for ((l, r), c) in f.terms() {
        let f1 = AlgElement::from_mono(*l, HSeries::one(ctx.order), ctx);
        let f2 = AlgElement::from_mono(*r, c.clone(), ctx);
        gamma_prime = gamma_prime.add(&f2.multiply(&f1.antipode()?)?);
    }
    let gamma = f_inv.antipode_left_multiply()?;
    Ok((gamma, gamma_prime))
}

pub fn gamma_elements(t: &TwistData) -> Result<(AlgElement, AlgElement)> {
    gamma_elements_of(&t.f, &t.f_inv)
}

/// `sinh(hH) / sinh(h)`, the image of `[Xp, Xm]` required by `U_h`.
pub fn cartan_bracket_target(ctx: Ctx) -> Result<AlgElement> {
    let order = ctx.order;
    // sinh(h)/h
    let mut sinh_over_h = HSeries::zero(order);
    let mut j = 0;
    while 2 * j <= order {
        let f = crate::scalar::factorial(2 * j as u32 + 1);
        sinh_over_h.set_coeff(2 * j, num_rational::BigRational::new(1.into(), f));
        j += 1;
    }
    let inv = sinh_over_h.inv()?;
    let mut out = AlgElement::zero(ctx);
    let mut j = 0;
    while 2 * j <= order {
        let f = crate::scalar::factorial(2 * j as u32 + 1);
        let c = HSeries::monomial(num_rational::BigRational::new(1.into(), f), 2 * j, order);
        let degree = 2 * j as u32 + 1;
        if degree > ctx.cap {
            return Err(Error::DegreeCapExceeded {
                degree,
                cap: ctx.cap,
            });
        }
        out.add_term(Mono::new(0, degree, 0), &(&c * &inv));
        j += 1;
    }
    Ok(out)
}

/// Residuals of every defining condition of the deformation package.
pub fn condition_residuals(t: &TwistData) -> Result<BTreeMap<String, Residual>> {
    let ctx = t.ctx;
    let mut out = BTreeMap::new();
    let xp = t.phi(Gen::Xp);
    let xm = t.phi(Gen::Xm);
    let h = t.phi(Gen::H);

    let mut r = Residual::new(ctx.order);
    r.absorb_element(&h.sub(&AlgElement::generator(Gen::H, ctx)));
    out.insert("phi_cartan_fixed".to_string(), r);

    let mut r = Residual::new(ctx.order);
    r.absorb_element(&h.commutator(xp)?.sub(&xp.scale_q(&crate::scalar::q_int(2))));
    r.absorb_element(&h.commutator(xm)?.add(&xm.scale_q(&crate::scalar::q_int(2))));
    out.insert("phi_relation_weights".to_string(), r);

    let mut r = Residual::new(ctx.order);
    r.absorb_element(&xp.commutator(xm)?.sub(&cartan_bracket_target(ctx)?));
    out.insert("phi_relation_bracket".to_string(), r);

    for g in Gen::ALL {
        let lhs = t.f.multiply(&t.phi(g).coproduct()?)?;
        let rhs = coproduct_h_image(&UhElement::generator(g, ctx.order), t)?.multiply(&t.f)?;
        let mut r = Residual::new(ctx.order);
        r.absorb_tensor(&lhs.sub(&rhs));
        out.insert(format!("twist_equation_{}", g.name()), r);
    }

    let one = AlgElement::one(ctx);
    let mut r = Residual::new(ctx.order);
    r.absorb_element(&t.f.counit_left().sub(&one));
    r.absorb_element(&t.f.counit_right().sub(&one));
    out.insert("counit".to_string(), r);

    let mut r = Residual::new(ctx.order);
    r.absorb_tensor(&t.f.multiply(&t.f_inv)?.sub(&TensorElement::one(ctx)));
    out.insert("inverse".to_string(), r);

    if t.gauge.unitary {
        let mut r = Residual::new(ctx.order);
        r.absorb_tensor(&t.f.star().multiply(&t.f)?.sub(&TensorElement::one(ctx)));
        out.insert("unitarity".to_string(), r);
    }
    Ok(out)
}

/// Checks every defining condition and reports the combined residual.
pub fn verify_twist_equation(t: &TwistData) -> Result<VerificationReport> {
    let parts = condition_residuals(t)?;
    let mut total = Residual::new(t.order());
    let mut failing = Vec::new();
    for (name, r) in &parts {
        if !r.is_zero() {
            failing.push(name.clone());
        }
        total.merge(r);
    }
    Ok(total
        .into_report("twist_equation")
        .with_meta("failing_conditions", failing)
        .with_meta("unitary_gauge", t.gauge.unitary)
        .with_meta("pivot_rule", t.gauge.pivot_rule.name()))
}

#[derive(Serialize, Deserialize)]
struct TwistDataRepr {
    order: usize,
    cap: u32,
    gauge: Gauge,
    phi: BTreeMap<String, Vec<TermRepr>>,
    f: Vec<TensorTermRepr>,
    f_inv: Vec<TensorTermRepr>,
    gamma: Vec<TermRepr>,
    gamma_prime: Vec<TermRepr>,
    residuals: BTreeMap<String, String>,
}

impl From<&TwistData> for TwistDataRepr {
    fn from(t: &TwistData) -> Self {
        TwistDataRepr {
            order: t.ctx.order,
            cap: t.ctx.cap,
            gauge: t.gauge,
            phi: t
                .phi
                .iter()
                .map(|(g, e)| (g.name().to_string(), e.to_repr()))
                .collect(),
            f: t.f.to_repr(),
            f_inv: t.f_inv.to_repr(),
            gamma: t.gamma.to_repr(),
            gamma_prime: t.gamma_prime.to_repr(),
            residuals: t.residuals.clone(),
        }
    }
}

impl TwistDataRepr {
    fn into_data(self) -> Result<TwistData> {
        let ctx = Ctx::new(self.order, self.cap);
        let mut phi = BTreeMap::new();
        for g in Gen::ALL {
            let repr = self
                .phi
                .get(g.name())
                .ok_or_else(|| Error::Malformed(format!("missing phi image of {}", g.name())))?;
            phi.insert(g, AlgElement::from_repr(repr, ctx)?);
        }
        Ok(TwistData {
            ctx,
            phi,
            f: TensorElement::from_repr(&self.f, ctx)?,
            f_inv: TensorElement::from_repr(&self.f_inv, ctx)?,
            gamma: AlgElement::from_repr(&self.gamma, ctx)?,
            gamma_prime: AlgElement::from_repr(&self.gamma_prime, ctx)?,
            gauge: self.gauge,
            residuals: self.residuals,
        })
    }
}
