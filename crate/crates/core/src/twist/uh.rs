//! Words in the quantum group `U_h(sl2)` and its Hopf structure maps.
//!
//! Elements are linear combinations of free words over `H, Xp, Xm, K, Ki`
//! (`K = q^{H/2}`, `Ki = q^{-H/2}`); no relations are applied at this level.
//! They only ever get evaluated through `phi_h`, which is an algebra map, so
//! the relations hold in every image.
//!
//! Conventions:
//! `Δ_h(H) = H⊗1 + 1⊗H`, `Δ_h(X±) = X±⊗K + Ki⊗X±`, `Δ_h(K) = K⊗K`,
//! `S_h(H) = -H`, `S_h(X±) = -q^{±1} X±`, `S_h(K) = Ki`, `ε_h(X±) = ε_h(H) = 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::Result;
use crate::hopf::expr::{parse_terms, Symbol};
use crate::hopf::Gen;
use crate::scalar::{q_int, HSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    H,
    Xp,
    Xm,
    K,
    Ki,
}

impl Letter {
    pub fn from_gen(g: Gen) -> Self {
        match g {
            Gen::H => Letter::H,
            Gen::Xp => Letter::Xp,
            Gen::Xm => Letter::Xm,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Letter::H => "H",
            Letter::Xp => "Xp",
            Letter::Xm => "Xm",
            Letter::K => "K",
            Letter::Ki => "Ki",
        }
    }
}

pub type Word = Vec<Letter>;

#[derive(Clone, PartialEq, Eq)]
pub struct UhElement {
    terms: BTreeMap<Word, HSeries>,
    order: usize,
}

/// Element of `U_h ⊗ U_h` as pairs of free words.
pub type UhTensor = BTreeMap<(Word, Word), HSeries>;

impl UhElement {
    pub fn zero(order: usize) -> Self {
        Self {
            terms: BTreeMap::new(),
            order,
        }
    }

    pub fn one(order: usize) -> Self {
        Self::word(vec![], order)
    }

    pub fn word(w: Word, order: usize) -> Self {
        Self::from_word(w, HSeries::one(order))
    }

    pub fn letter(l: Letter, order: usize) -> Self {
        Self::word(vec![l], order)
    }

    pub fn generator(g: Gen, order: usize) -> Self {
        Self::letter(Letter::from_gen(g), order)
    }

    pub fn from_word(w: Word, c: HSeries) -> Self {
        let order = c.order();
        let mut e = Self::zero(order);
        e.add_term(w, &c);
        e
    }

    pub fn parse(input: &str, order: usize) -> Result<Self> {
        let mut out = Self::zero(order);
        for term in parse_terms(input)? {
            let mut coeff = HSeries::constant(term.coeff, order);
            let mut word = Vec::new();
            for sym in term.word {
                match sym {
                    Symbol::Gen(g) => word.push(Letter::from_gen(g)),
                    Symbol::KPlus => word.push(Letter::K),
                    Symbol::KMinus => word.push(Letter::Ki),
                    Symbol::HBar => coeff = &coeff * &HSeries::h(order),
                }
            }
            out.add_term(word, &coeff);
        }
        Ok(out)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Word, HSeries> {
        &self.terms
    }

    pub fn add_term(&mut self, w: Word, c: &HSeries) {
        if c.is_zero() {
            return;
        }
        let e = self
            .terms
            .entry(w.clone())
            .or_insert_with(|| HSeries::zero(self.order));
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: &HSeries) -> Self {
        let mut out = Self::zero(self.order);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &(c * s));
        }
        out
    }

    /// Concatenation product.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.order);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend(w2);
                out.add_term(w, &(c1 * c2));
            }
        }
        out
    }

    pub fn coproduct(&self) -> UhTensor {
        let mut out = UhTensor::new();
        for (w, c) in &self.terms {
            let mut acc: Vec<(Word, Word, HSeries)> = vec![(vec![], vec![], c.clone())];
            for &l in w {
                let legs = letter_coproduct(l);
                let mut next = Vec::with_capacity(acc.len() * legs.len());
                for (a, b, k) in &acc {
                    for (x, y) in &legs {
                        let mut a2 = a.clone();
                        a2.extend(x);
                        let mut b2 = b.clone();
                        b2.extend(y);
                        next.push((a2, b2, k.clone()));
                    }
                }
                acc = next;
            }
            for (a, b, k) in acc {
                let e = out
                    .entry((a, b))
                    .or_insert_with(|| HSeries::zero(self.order));
                *e += &k;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn antipode(&self) -> Self {
        let mut out = Self::zero(self.order);
        for (w, c) in &self.terms {
            let mut coeff = c.clone();
            let mut word = Vec::with_capacity(w.len());
            for &l in w.iter().rev() {
                let (factor, image) = letter_antipode(l, self.order);
                coeff = &coeff * &factor;
                word.push(image);
            }
            out.add_term(word, &coeff);
        }
        out
    }

    pub fn counit(&self) -> HSeries {
        let mut out = HSeries::zero(self.order);
        for (w, c) in &self.terms {
            if w.iter().all(|l| matches!(l, Letter::K | Letter::Ki)) {
                out += c;
            }
        }
        out
    }
}

fn letter_coproduct(l: Letter) -> Vec<(Word, Word)> {
    match l {
        Letter::H => vec![(vec![Letter::H], vec![]), (vec![], vec![Letter::H])],
        Letter::Xp | Letter::Xm => vec![(vec![l], vec![Letter::K]), (vec![Letter::Ki], vec![l])],
        Letter::K | Letter::Ki => vec![(vec![l], vec![l])],
    }
}

fn letter_antipode(l: Letter, order: usize) -> (HSeries, Letter) {
    let minus = HSeries::constant(-num_rational::BigRational::one(), order);
    match l {
        Letter::H => (minus, Letter::H),
        Letter::Xp => (&minus * &HSeries::q_power(&q_int(1), order), Letter::Xp),
        Letter::Xm => (&minus * &HSeries::q_power(&q_int(-1), order), Letter::Xm),
        Letter::K => (HSeries::one(order), Letter::Ki),
        Letter::Ki => (HSeries::one(order), Letter::K),
    }
}

impl fmt::Debug for UhElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word: Vec<&str> = w.iter().map(|l| l.name()).collect();
                format!("[{c}] {}", if word.is_empty() { "1".into() } else { word.join(" ") })
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coproduct_of_raising_generator() {
        let x = UhElement::generator(Gen::Xp, 1);
        let d = x.coproduct();
        assert_eq!(d.len(), 2);
        assert!(d.contains_key(&(vec![Letter::Xp], vec![Letter::K])));
        assert!(d.contains_key(&(vec![Letter::Ki], vec![Letter::Xp])));
    }

    #[test]
    fn antipode_reverses_words() {
        let w = UhElement::word(vec![Letter::Xp, Letter::K], 1);
        let s = w.antipode();
        let (word, coeff) = s.terms().iter().next().unwrap();
        assert_eq!(word, &vec![Letter::Ki, Letter::Xp]);
        assert_eq!(coeff, &HSeries::from_ints(&[-1, -1], 1));
    }

    #[test]
    fn counit_sees_only_cartan_exponentials() {
        let e = UhElement::parse("3 K Ki + 2 Xp + H", 1).unwrap();
        assert_eq!(e.counit(), HSeries::constant(q_int(3), 1));
    }
}
