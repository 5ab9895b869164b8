//! Expression strings for algebra elements.
//!
//! Grammar (whitespace and `*` between factors are ignored):
//!
//! ```text
//! expr := term (('+' | '-') term)*
//! term := rational? gen*
//! gen  := 'H' | 'Xp' | 'Xm' | 'h' | 'K' | 'Ki'
//! ```
//!
//! `K` and `Ki` stand for `q^{H/2}` and `q^{-H/2}` and are only meaningful for
//! quantum-group words.

use num_traits::One;

use super::element::{AlgElement, Ctx, Gen};
use crate::error::{Error, Result};
use crate::scalar::{parse_q, HSeries, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Gen(Gen),
    HBar,
    KPlus,
    KMinus,
}

/// One parsed term: rational coefficient times an ordered word of symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedTerm {
    pub coeff: Q,
    pub word: Vec<Symbol>,
}

pub fn parse_terms(input: &str) -> Result<Vec<ParsedTerm>> {
    let chars: Vec<char> = input.chars().collect();
    let mut pos = 0;
    let mut terms = Vec::new();
    let mut sign = Q::one();
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && (chars[*pos].is_whitespace() || chars[*pos] == '*') {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if pos < chars.len() && chars[pos] == '-' {
        sign = -Q::one();
        pos += 1;
    }
    loop {
        skip_ws(&mut pos);
        let start = pos;
        while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
            pos += 1;
        }
        let coeff = if pos > start {
            let text: String = chars[start..pos].iter().collect();
            parse_q(&text)?
        } else {
            Q::one()
        };
        let mut word = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos >= chars.len() || chars[pos] == '+' || chars[pos] == '-' {
                break;
            }
            let rest: String = chars[pos..].iter().collect();
            let (sym, len) = if rest.starts_with("Xp") {
                (Symbol::Gen(Gen::Xp), 2)
            } else if rest.starts_with("Xm") {
                (Symbol::Gen(Gen::Xm), 2)
            } else if rest.starts_with("Ki") {
                (Symbol::KMinus, 2)
            } else if rest.starts_with('K') {
                (Symbol::KPlus, 1)
            } else if rest.starts_with('H') {
                (Symbol::Gen(Gen::H), 1)
            } else if rest.starts_with('h') {
                (Symbol::HBar, 1)
            } else {
                let bad: String = rest.chars().take_while(|c| !c.is_whitespace()).collect();
                return Err(Error::UnknownSymbol(bad));
            };
            word.push(sym);
            pos += len;
        }
        if pos == start {
            return Err(Error::Parse(format!("empty term in '{input}'")));
        }
        terms.push(ParsedTerm {
            coeff: &sign * coeff,
            word,
        });
        if pos >= chars.len() {
            break;
        }
        sign = if chars[pos] == '-' { -Q::one() } else { Q::one() };
        pos += 1;
    }
    Ok(terms)
}

/// Parses an element of `U(sl2)[[h]]`; `K`/`Ki` are rejected.
pub fn parse_alg(input: &str, ctx: Ctx) -> Result<AlgElement> {
    let mut out = AlgElement::zero(ctx);
    for term in parse_terms(input)? {
        let mut value = AlgElement::scalar(HSeries::constant(term.coeff, ctx.order), ctx);
        for sym in term.word {
            let factor = match sym {
                Symbol::Gen(g) => AlgElement::generator(g, ctx),
                Symbol::HBar => AlgElement::scalar(HSeries::h(ctx.order), ctx),
                Symbol::KPlus | Symbol::KMinus => {
                    return Err(Error::UnknownSymbol("K".into()));
                }
            };
            value = value.multiply(&factor)?;
        }
        out = out.add(&value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::Mono;
    use crate::scalar::q_int;

    #[test]
    fn parses_sums_and_products() {
        let ctx = Ctx::new(2, 6);
        let e = parse_alg("H H + 3 Xm + 5", ctx).unwrap();
        assert_eq!(e.counit(), HSeries::constant(q_int(5), 2));
        assert_eq!(e.coeff(&Mono::new(0, 2, 0)), HSeries::one(2));
        assert_eq!(e.coeff(&Mono::XM), HSeries::constant(q_int(3), 2));
        let f = parse_alg("Xp Xm - H", ctx).unwrap();
        assert_eq!(f, AlgElement::from_mono(Mono::new(1, 0, 1), HSeries::one(2), ctx));
        let g = parse_alg("1/2 h*H", ctx).unwrap();
        assert_eq!(
            g.coeff(&Mono::H),
            HSeries::monomial(Q::new(1.into(), 2.into()), 1, 2)
        );
    }

    #[test]
    fn rejects_unknown_symbols() {
        let ctx = Ctx::new(1, 4);
        assert!(matches!(parse_alg("Y", ctx), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_alg("K", ctx), Err(Error::UnknownSymbol(_))));
        assert!(parse_alg("H +", ctx).is_err());
    }
}
