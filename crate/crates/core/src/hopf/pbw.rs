//! Normal ordering in `U(sl2)` with respect to the PBW basis `Xm^a H^b Xp^c`.
//!
//! Relations: `[H, Xp] = 2 Xp`, `[H, Xm] = -2 Xm`, `[Xp, Xm] = H`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{q_int, Q};

/// Ordered monomial `Xm^a H^b Xp^c`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mono {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { a: 0, b: 0, c: 0 };
    pub const XM: Mono = Mono { a: 1, b: 0, c: 0 };
    pub const H: Mono = Mono { a: 0, b: 1, c: 0 };
    pub const XP: Mono = Mono { a: 0, b: 0, c: 1 };

    pub fn new(a: u32, b: u32, c: u32) -> Self {
        Self { a, b, c }
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b + self.c
    }

    /// Eigenvalue of `ad H`.
    pub fn weight(&self) -> i64 {
        2 * (self.c as i64 - self.a as i64)
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    /// Image under the compact star `H* = H`, `Xp* = Xm`; the result is
    /// already normal ordered.
    pub fn star(&self) -> Self {
        Self::new(self.c, self.b, self.a)
    }

    /// All monomials of total degree `<= max_degree`, sorted by (degree, a, b, c).
    pub fn up_to_degree(max_degree: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    out.push(Mono::new(a, b, d - a - b));
                }
            }
        }
        out.sort_by_key(|m| (m.degree(), *m));
        out
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (name, e) in [("Xm", self.a), ("H", self.b), ("Xp", self.c)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Polynomial in `H`, coefficient of `H^i` at index `i`.
type HPoly = Vec<Q>;

fn poly_mul(p: &HPoly, q: &HPoly) -> HPoly {
    let mut out = vec![Q::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// `(H + s)^n`.
fn linear_pow(s: i64, n: u32) -> HPoly {
    let lin = vec![q_int(s), Q::one()];
    (0..n).fold(vec![Q::one()], |acc, _| poly_mul(&acc, &lin))
}

type Reorder = Rc<Vec<(u32, HPoly)>>;

thread_local! {
    static SWAP_CACHE: RefCell<HashMap<(u32, u32), Reorder>> = RefCell::new(HashMap::new());
    static PRODUCT_CACHE: RefCell<HashMap<(Mono, Mono), Rc<Vec<(Mono, Q)>>>> =
        RefCell::new(HashMap::new());
}

/// `Xp^c Xm^d = sum_j Xm^(d-j) r_j(H) Xp^(c-j)`, returned as the list of `(j, r_j)`.
///
/// Built from `Xp Xm^d = Xm^d Xp + d Xm^(d-1) (H - d + 1)`.
fn swap_raising_lowering(c: u32, d: u32) -> Reorder {
    if let Some(hit) = SWAP_CACHE.with(|m| m.borrow().get(&(c, d)).cloned()) {
        return hit;
    }
    let result: Vec<(u32, HPoly)> = if c == 0 || d == 0 {
        vec![(0, vec![Q::one()])]
    } else {
        let mut acc: BTreeMap<u32, HPoly> = BTreeMap::new();
        for (j, r) in swap_raising_lowering(c - 1, d).iter() {
            add_poly(acc.entry(*j).or_default(), r);
        }
        for (j, r) in swap_raising_lowering(c - 1, d - 1).iter() {
            // Xp^(c-1-j) (H - d + 1) = (H - 2(c-1-j) - d + 1) Xp^(c-1-j)
            let shift = -2 * (c as i64 - 1 - *j as i64) - d as i64 + 1;
            let term: HPoly = poly_mul(r, &linear_pow(shift, 1))
                .into_iter()
                .map(|x| x * q_int(d as i64))
                .collect();
            add_poly(acc.entry(j + 1).or_default(), &term);
        }
        acc.into_iter().collect()
    };
    let rc = Rc::new(result);
    SWAP_CACHE.with(|m| m.borrow_mut().insert((c, d), rc.clone()));
    rc
}

fn add_poly(target: &mut HPoly, p: &HPoly) {
    if target.len() < p.len() {
        target.resize(p.len(), Q::zero());
    }
    for (t, x) in target.iter_mut().zip(p) {
        *t += x;
    }
}

/// Normal-ordered expansion of the product `x * y` of two PBW monomials.
pub fn mono_product(x: Mono, y: Mono) -> Rc<Vec<(Mono, Q)>> {
    if let Some(hit) = PRODUCT_CACHE.with(|m| m.borrow().get(&(x, y)).cloned()) {
        return hit;
    }
    let mut acc: BTreeMap<Mono, Q> = BTreeMap::new();
    for (j, r) in swap_raising_lowering(x.c, y.a).iter() {
        // H^b Xm^(d-j) = Xm^(d-j) (H - 2(d-j))^b,  Xp^(c-j) H^e = (H - 2(c-j))^e Xp^(c-j)
        let left = linear_pow(-2 * (y.a as i64 - *j as i64), x.b);
        let right = linear_pow(-2 * (x.c as i64 - *j as i64), y.b);
        let poly = poly_mul(&poly_mul(&left, r), &right);
        for (i, coeff) in poly.into_iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let m = Mono::new(x.a + y.a - j, i as u32, x.c - j + y.c);
            *acc.entry(m).or_insert_with(Q::zero) += coeff;
        }
    }
    let result: Vec<(Mono, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    let rc = Rc::new(result);
    PRODUCT_CACHE.with(|m| m.borrow_mut().insert((x, y), rc.clone()));
    rc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(x: Mono, y: Mono) -> Vec<(Mono, i64)> {
        mono_product(x, y)
            .iter()
            .map(|(m, c)| (*m, c.to_integer().try_into().unwrap()))
            .collect()
    }

    #[test]
    fn defining_relations() {
        assert_eq!(
            expand(Mono::XP, Mono::XM),
            vec![(Mono::H, 1), (Mono::new(1, 0, 1), 1)]
        );
        assert_eq!(expand(Mono::H, Mono::H), vec![(Mono::new(0, 2, 0), 1)]);
        assert_eq!(
            expand(Mono::XP, Mono::H),
            vec![(Mono::XP, -2), (Mono::new(0, 1, 1), 1)]
        );
        assert_eq!(
            expand(Mono::H, Mono::XM),
            vec![(Mono::XM, -2), (Mono::new(1, 1, 0), 1)]
        );
        assert_eq!(expand(Mono::XM, Mono::XP), vec![(Mono::new(1, 0, 1), 1)]);
    }

    /// Brute-force reordering by repeated application of the commutation
    /// relations on words; independent of the closed-form recursion above.
    fn brute_force(word: Vec<char>) -> BTreeMap<Mono, i64> {
        let mut out = BTreeMap::new();
        let mut stack = vec![(word, 1i64)];
        while let Some((w, coeff)) = stack.pop() {
            let rank = |ch: char| match ch {
                'm' => 0,
                'h' => 1,
                _ => 2,
            };
            match (0..w.len().saturating_sub(1)).find(|&i| rank(w[i]) > rank(w[i + 1])) {
                None => {
                    let count = |ch| w.iter().filter(|&&x| x == ch).count() as u32;
                    *out.entry(Mono::new(count('m'), count('h'), count('p'))).or_insert(0) +=
                        coeff;
                }
                Some(i) => {
                    let mut swapped = w.clone();
                    swapped.swap(i, i + 1);
                    stack.push((swapped, coeff));
                    let (x, y) = (w[i], w[i + 1]);
                    let mut rest = |replacement: Vec<char>, c: i64| {
                        let mut nw = w[..i].to_vec();
                        nw.extend(replacement);
                        nw.extend(&w[i + 2..]);
                        stack.push((nw, coeff * c));
                    };
                    match (x, y) {
                        // p m = m p + h
                        ('p', 'm') => rest(vec!['h'], 1),
                        // h m = m h - 2 m
                        ('h', 'm') => rest(vec!['m'], -2),
                        // p h = h p - 2 p
                        ('p', 'h') => rest(vec!['p'], -2),
                        _ => unreachable!(),
                    }
                }
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    fn word_of(m: Mono) -> Vec<char> {
        let mut w = vec!['m'; m.a as usize];
        w.extend(vec!['h'; m.b as usize]);
        w.extend(vec!['p'; m.c as usize]);
        w
    }

    #[test]
    fn closed_form_matches_brute_force() {
        let monos = Mono::up_to_degree(3);
        for &x in &monos {
            for &y in &monos {
                let mut w = word_of(x);
                w.extend(word_of(y));
                let expected = brute_force(w);
                let got: BTreeMap<Mono, i64> = expand(x, y).into_iter().collect();
                assert_eq!(got, expected, "{x} * {y}");
            }
        }
    }

    #[test]
    fn monomials_sorted_by_degree() {
        let ms = Mono::up_to_degree(2);
        assert_eq!(ms.len(), 10);
        assert_eq!(ms[0], Mono::ONE);
        assert!(ms.windows(2).all(|w| w[0].degree() <= w[1].degree()));
    }
}
