//! Deformed generators built from undeformed ladders and the legs of `F`:
//!
//! ```text
//! A+_i = u σ(F1) a+_i σ(S F2) σ(γ) u^{-1}
//! A^i  = v σ(γ') σ(S G2) a^i σ(G1) v^{-1}      with F^{-1} = G1 ⊗ G2
//! ```
//!
//! plus conjugation by `α = 1 + O(h)`, the realized quantum-group action and
//! evaluation of words in the deformed generators.

use std::cell::RefCell;
use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::{invariant_split, ladder_matrices, FockSpace, OperatorSeries, QMat, Sigma, Split};
use crate::hopf::expr::parse_alg;
use crate::hopf::{AlgElement, Ctx, Mono};
use crate::scalar::{parse_q, HSeries, Q};
use crate::twist::{apply_phi_h, TwistData, UhElement, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DressOptions {
    /// `None` leaves `u = v = 1`.
    pub invariant: Option<Split>,
    /// Dropping `γ`, `γ'` breaks covariance; used as a negative control.
    pub keep_gamma: bool,
}

impl DressOptions {
    pub fn split(split: Split) -> Self {
        Self {
            invariant: Some(split),
            keep_gamma: true,
        }
    }

    pub fn bare() -> Self {
        Self {
            invariant: None,
            keep_gamma: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub unitary_gauge: bool,
    pub pivot_rule: String,
    pub split: String,
    pub gamma_dropped: bool,
    pub alpha: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedSet {
    pub aplus: [OperatorSeries; 2],
    pub a: [OperatorSeries; 2],
    pub provenance: Provenance,
}

impl DeformedSet {
    pub fn order(&self) -> usize {
        self.aplus[0].order()
    }

    pub fn dim(&self) -> usize {
        self.aplus[0].dim()
    }

    pub fn truncated(&self, order: usize) -> Self {
        Self {
            aplus: self.aplus.clone().map(|x| x.truncated(order)),
            a: self.a.clone().map(|x| x.truncated(order)),
            provenance: self.provenance.clone(),
        }
    }

    pub fn to_json(&self, space: &FockSpace) -> Value {
        json!({
            "order": self.order(),
            "statistics": space.statistics().name(),
            "cutoff": space.cutoff(),
            "basis": space.basis(),
            "provenance": {
                "unitary_gauge": self.provenance.unitary_gauge,
                "pivot_rule": self.provenance.pivot_rule,
                "split": self.provenance.split,
                "gamma_dropped": self.provenance.gamma_dropped,
                "alpha": self.provenance.alpha,
            },
            "Aplus": self.aplus.iter().map(OperatorSeries::to_json).collect::<Vec<_>>(),
            "A": self.a.iter().map(OperatorSeries::to_json).collect::<Vec<_>>(),
        })
    }
}

fn sigma_term(sigma: &Sigma, m: Mono, c: &HSeries) -> Result<OperatorSeries> {
    OperatorSeries::constant(sigma.mono(m), sigma.order()).scale(c)
}

fn antipode_images(sigma: &Sigma, ctx: Ctx, monos: impl Iterator<Item = Mono>) -> Result<HashMap<Mono, OperatorSeries>> {
    let mut out = HashMap::new();
    for m in monos {
        if !out.contains_key(&m) {
            let s = AlgElement::from_mono(m, HSeries::one(ctx.order), ctx).antipode()?;
            out.insert(m, sigma.apply(&s));
        }
    }
    Ok(out)
}

pub fn dress_generators(t: &TwistData, space: &FockSpace, split: Split) -> Result<DeformedSet> {
    dress_with(t, space, DressOptions::split(split))
}

pub fn dress_with(t: &TwistData, space: &FockSpace, opts: DressOptions) -> Result<DeformedSet> {
    let order = t.order();
    let dim = space.dim();
    let sigma = Sigma::new(space, order);
    let ladders = ladder_matrices(space, order);
    let one = OperatorSeries::identity(dim, order);
    let (gamma, gamma_prime) = if opts.keep_gamma {
        (sigma.apply(&t.gamma), sigma.apply(&t.gamma_prime))
    } else {
        (one.clone(), one.clone())
    };
    let s_f = antipode_images(&sigma, t.ctx, t.f.terms().keys().map(|(_, r)| *r))?;
    let s_finv = antipode_images(&sigma, t.ctx, t.f_inv.terms().keys().map(|(_, r)| *r))?;

    let (u, v) = match opts.invariant {
        Some(split) => invariant_split(space, split, order)?,
        None => (one.clone(), one.clone()),
    };
    let (u_inv, v_inv) = (u.inverse()?, v.inverse()?);

    let mut aplus = Vec::with_capacity(2);
    let mut a = Vec::with_capacity(2);
    for i in 0..2 {
        let mut raw = OperatorSeries::zero(dim, order);
        for ((l, r), c) in t.f.terms() {
            let term = sigma_term(&sigma, *l, c)?
                .mul(&ladders.create[i])?
                .mul(&s_f[r])?;
            raw = raw.add(&term)?;
        }
        let raw = raw.mul(&gamma)?;
        aplus.push(u.mul(&raw)?.mul(&u_inv)?);

        let mut raw = OperatorSeries::zero(dim, order);
        for ((l, r), c) in t.f_inv.terms() {
            let term = s_finv[r]
                .mul(&ladders.annihilate[i])?
                .mul(&sigma_term(&sigma, *l, c)?)?;
            raw = raw.add(&term)?;
        }
        let raw = gamma_prime.mul(&raw)?;
        a.push(v.mul(&raw)?.mul(&v_inv)?);
    }
    let pair = |mut v: Vec<OperatorSeries>| -> [OperatorSeries; 2] {
        let second = v.pop().expect("two modes");
        let first = v.pop().expect("two modes");
        [first, second]
    };
    Ok(DeformedSet {
        aplus: pair(aplus),
        a: pair(a),
        provenance: Provenance {
            unitary_gauge: t.gauge.unitary,
            pivot_rule: t.gauge.pivot_rule.name().to_string(),
            split: opts.invariant.map_or("none", Split::name).to_string(),
            gamma_dropped: !opts.keep_gamma,
            alpha: "1".to_string(),
        },
    })
}

/// `α A α^{-1}` for every generator.
pub fn conjugate_alpha(d: &DeformedSet, alpha: &Alpha) -> Result<DeformedSet> {
    let conj = |x: &OperatorSeries| -> Result<OperatorSeries> {
        alpha.value.mul(x)?.mul(&alpha.inverse)
    };
    Ok(DeformedSet {
        aplus: [conj(&d.aplus[0])?, conj(&d.aplus[1])?],
        a: [conj(&d.a[0])?, conj(&d.a[1])?],
        provenance: Provenance {
            alpha: if d.provenance.alpha == "1" {
                alpha.source.clone()
            } else {
                format!("({}) * ({})", alpha.source, d.provenance.alpha)
            },
            ..d.provenance.clone()
        },
    })
}

/// An invertible operator `α = 1 + O(h)` with its inverse and source text.
#[derive(Clone, Debug)]
pub struct Alpha {
    pub source: String,
    pub value: OperatorSeries,
    pub inverse: OperatorSeries,
}

impl Alpha {
    pub fn identity(dim: usize, order: usize) -> Self {
        let one = OperatorSeries::identity(dim, order);
        Self {
            source: "1".into(),
            value: one.clone(),
            inverse: one,
        }
    }

    pub fn new(source: &str, value: OperatorSeries) -> Result<Self> {
        let inverse = value
            .inverse()
            .map_err(|_| Error::Config(format!("alpha '{source}' is not of the form 1 + O(h)")))?;
        Ok(Self {
            source: source.to_string(),
            value,
            inverse,
        })
    }

    /// Parses the alpha mini-language.
    ///
    /// ```text
    /// sum    := term (('+' | '-') term)*
    /// term   := factor ('*'? factor)*
    /// factor := rational | 'h' | 'n' | 'n1' | 'n2'
    ///         | 'exp(' sum ')' | 'sigma(' hopf-expr ')' | '(' sum ')'
    /// ```
    ///
    /// `n`, `n1`, `n2` are number operators; `sigma(...)` takes an element of
    /// `U(sl2)[[h]]` in the expression grammar of [`crate::hopf::expr`].
    pub fn parse(source: &str, space: &FockSpace, order: usize) -> Result<Self> {
        let sigma = Sigma::new(space, order);
        let mut p = AlphaParser {
            chars: source.chars().collect(),
            pos: 0,
            space,
            sigma: &sigma,
            order,
        };
        let value = p.sum()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!(
                "unexpected '{}' in alpha '{source}'",
                p.chars[p.pos..].iter().collect::<String>()
            )));
        }
        Self::new(source.trim(), value)
    }
}

struct AlphaParser<'a> {
    chars: Vec<char>,
    pos: usize,
    space: &'a FockSpace,
    sigma: &'a Sigma,
    order: usize,
}

impl AlphaParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn rest_starts_with(&self, s: &str) -> bool {
        self.chars[self.pos..].iter().collect::<String>().starts_with(s)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}' at position {}", self.pos)))
        }
    }

    fn dim(&self) -> usize {
        self.space.dim()
    }

    fn sum(&mut self) -> Result<OperatorSeries> {
        let mut sign = Q::from_integer(1.into());
        if self.peek() == Some('-') {
            self.pos += 1;
            sign = -sign;
        }
        let mut acc = self.term()?.scale_q(&sign);
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<OperatorSeries> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?)?;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '(' => {
                    acc = acc.mul(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn number_operator(&self, modes: &[usize]) -> OperatorSeries {
        let mut m = QMat::zero(self.dim());
        for i in 0..self.dim() {
            let occ = self.space.basis()[i];
            let n: usize = modes.iter().map(|k| occ[*k]).sum();
            m.add_entry(i, i, &Q::from_integer((n as i64).into()));
        }
        OperatorSeries::constant(m, self.order)
    }

    fn factor(&mut self) -> Result<OperatorSeries> {
        let Some(c) = self.peek() else {
            return Err(Error::Parse("alpha expression ended early".into()));
        };
        if c.is_ascii_digit() {
            let start = self.pos;
            while self.pos < self.chars.len()
                && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '/')
            {
                self.pos += 1;
            }
            let q = parse_q(&self.chars[start..self.pos].iter().collect::<String>())?;
            return Ok(OperatorSeries::identity(self.dim(), self.order).scale_q(&q));
        }
        if c == '(' {
            self.pos += 1;
            let v = self.sum()?;
            self.expect(')')?;
            return Ok(v);
        }
        if self.rest_starts_with("exp(") {
            self.pos += 4;
            let v = self.sum()?;
            self.expect(')')?;
            return v.exp();
        }
        if self.rest_starts_with("sigma(") {
            self.pos += 6;
            let start = self.pos;
            let mut depth = 1;
            while self.pos < self.chars.len() {
                match self.chars[self.pos] {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                self.pos += 1;
            }
            let inner: String = self.chars[start..self.pos].iter().collect();
            self.expect(')')?;
            let x = parse_alg(&inner, Ctx::for_order(self.order))?;
            return Ok(self.sigma.apply(&x));
        }
        for (name, modes) in [("n1", &[0usize][..]), ("n2", &[1][..]), ("n", &[0, 1][..])] {
            if self.rest_starts_with(name) {
                self.pos += name.len();
                return Ok(self.number_operator(modes));
            }
        }
        if c == 'h' {
            self.pos += 1;
            return OperatorSeries::identity(self.dim(), self.order)
                .scale(&HSeries::h(self.order));
        }
        let bad: String = self.chars[self.pos..]
            .iter()
            .take_while(|c| !c.is_whitespace())
            .collect();
        Err(Error::UnknownSymbol(bad))
    }
}

/// Images `σ(φ_h(w))` of quantum-group words, cached.
pub struct Realization<'a> {
    t: &'a TwistData,
    sigma: Sigma,
    cache: RefCell<HashMap<Word, OperatorSeries>>,
}

impl<'a> Realization<'a> {
    pub fn new(t: &'a TwistData, space: &FockSpace) -> Self {
        Self {
            t,
            sigma: Sigma::new(space, t.order()),
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn twist(&self) -> &TwistData {
        self.t
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    pub fn word(&self, w: &Word) -> Result<OperatorSeries> {
        if let Some(v) = self.cache.borrow().get(w) {
            return Ok(v.clone());
        }
        let image = self
            .sigma
            .apply(&apply_phi_h(&UhElement::word(w.clone(), self.t.order()), self.t)?);
        self.cache.borrow_mut().insert(w.clone(), image.clone());
        Ok(image)
    }

    pub fn element(&self, x: &UhElement) -> Result<OperatorSeries> {
        let mut out = OperatorSeries::zero(self.sigma.space().dim(), self.t.order());
        for (w, c) in x.terms() {
            out = out.add(&self.word(w)?.scale(&c.with_order(self.t.order()))?)?;
        }
        Ok(out)
    }

    /// `X ▷_h β = Σ σφ(X_(1)) β σφ(S_h X_(2))`.
    pub fn act(&self, x: &UhElement, beta: &OperatorSeries) -> Result<OperatorSeries> {
        self.act_conjugated(x, beta, None)
    }

    /// The action with every `σφ(...)` replaced by `α σφ(...) α^{-1}`.
    pub fn act_alpha(&self, x: &UhElement, beta: &OperatorSeries, alpha: &Alpha) -> Result<OperatorSeries> {
        self.act_conjugated(x, beta, Some(alpha))
    }

    fn act_conjugated(
        &self,
        x: &UhElement,
        beta: &OperatorSeries,
        alpha: Option<&Alpha>,
    ) -> Result<OperatorSeries> {
        let order = self.t.order();
        let conj = |m: OperatorSeries| -> Result<OperatorSeries> {
            match alpha {
                Some(a) => a.value.mul(&m)?.mul(&a.inverse),
                None => Ok(m),
            }
        };
        let mut out = OperatorSeries::zero(beta.dim(), order);
        for ((w1, w2), c) in x.coproduct() {
            let left = conj(self.word(&w1)?)?;
            let right = conj(self.element(&UhElement::word(w2, order).antipode())?)?;
            let c = c.with_order(order);
            out = out.add(&left.mul(beta)?.mul(&right)?.scale(&c)?)?;
        }
        Ok(out)
    }
}

pub fn act_h(x: &UhElement, beta: &OperatorSeries, t: &TwistData, space: &FockSpace) -> Result<OperatorSeries> {
    Realization::new(t, space).act(x, beta)
}

pub fn act_h_alpha(
    x: &UhElement,
    beta: &OperatorSeries,
    t: &TwistData,
    space: &FockSpace,
    alpha: &Alpha,
) -> Result<OperatorSeries> {
    Realization::new(t, space).act_alpha(x, beta, alpha)
}

/// Evaluates a word such as `"Ap1 Ap2 A1"` in the deformed generators.
pub fn eval_deforming_map(word: &str, d: &DeformedSet) -> Result<OperatorSeries> {
    let mut out = OperatorSeries::identity(d.dim(), d.order());
    for token in word.split_whitespace() {
        let factor = match token {
            "Ap1" => &d.aplus[0],
            "Ap2" => &d.aplus[1],
            "A1" => &d.a[0],
            "A2" => &d.a[1],
            other => return Err(Error::UnknownSymbol(other.to_string())),
        };
        out = out.mul(factor)?;
    }
    Ok(out)
}

/// Whether `α` commutes with the number operator, i.e. is block diagonal.
pub fn is_number_conserving(alpha: &Alpha, space: &FockSpace) -> bool {
    alpha.value.shifts_total_by(space, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ladder_matrices;
    use crate::twist::{solve_twist, SolveOptions};

    fn setup() -> (TwistData, FockSpace) {
        (solve_twist(SolveOptions::new(1)).unwrap(), FockSpace::bose(3))
    }

    #[test]
    fn order_zero_is_undeformed() {
        let (t, s) = setup();
        let d = dress_generators(&t, &s, Split::Symmetric).unwrap();
        let l = ladder_matrices(&s, 0);
        for i in 0..2 {
            assert_eq!(d.aplus[i].at(0), l.create[i].at(0));
            assert_eq!(d.a[i].at(0), l.annihilate[i].at(0));
        }
        assert_eq!(d.provenance.split, "symmetric");
    }

    #[test]
    fn dressing_raises_total_occupation_by_one() {
        let (t, s) = setup();
        let d = dress_with(&t, &s, DressOptions::bare()).unwrap();
        for i in 0..2 {
            assert!(d.aplus[i].shifts_total_by(&s, 1));
            assert!(d.a[i].shifts_total_by(&s, -1));
        }
    }

    #[test]
    fn alpha_examples() {
        let s = FockSpace::bose(3);
        let e = Alpha::parse("exp(h*n)", &s, 2).unwrap();
        assert!(is_number_conserving(&e, &s));
        assert_eq!(e.value.mul(&e.inverse).unwrap(), OperatorSeries::identity(s.dim(), 2));
        // σ(Xp) keeps n but is not sl2-invariant
        let x = Alpha::parse("1 + h*sigma(Xp)", &s, 2).unwrap();
        let hh = Alpha::parse("1 + h*sigma(H)", &s, 2).unwrap();
        assert!(is_number_conserving(&x, &s));
        assert!(!x.value.commutator(&hh.value).unwrap().is_zero());
        let y = Alpha::parse("1 + h*sigma(XpXm) - (h*n1)*h", &s, 2).unwrap();
        assert!(is_number_conserving(&y, &s));
        assert!(matches!(Alpha::parse("2 + h", &s, 2), Err(Error::Config(_))));
        assert!(Alpha::parse("1 + h*m", &s, 2).is_err());
        assert!(Alpha::parse("exp(h", &s, 2).is_err());
    }

    #[test]
    fn alpha_conjugation_round_trips() {
        let (t, s) = setup();
        let d = dress_generators(&t, &s, Split::Symmetric).unwrap();
        let a = Alpha::parse("1 + h*sigma(Xp)", &s, 1).unwrap();
        let inv = Alpha::new("inverse", a.inverse.clone()).unwrap();
        let back = conjugate_alpha(&conjugate_alpha(&d, &a).unwrap(), &inv).unwrap();
        assert_eq!(back.aplus, d.aplus);
        assert_eq!(back.a, d.a);
    }

    #[test]
    fn deforming_map_words() {
        let (t, s) = setup();
        let d = dress_generators(&t, &s, Split::UOnly).unwrap();
        let w = eval_deforming_map("Ap1 A2", &d).unwrap();
        assert_eq!(w, d.aplus[0].mul(&d.a[1]).unwrap());
        assert_eq!(eval_deforming_map("", &d).unwrap(), OperatorSeries::identity(d.dim(), 1));
        assert_eq!(eval_deforming_map("B1", &d).unwrap_err(), Error::UnknownSymbol("B1".into()));
    }
}
