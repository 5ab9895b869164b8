//! The defining representation of sl2 and the braided R-matrix.

use std::fmt;

use super::element::AlgElement;
use super::pbw::Mono;
use crate::scalar::{HSeries, Q};

/// Small dense square matrix with `HSeries` entries.
#[derive(Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    n: usize,
    order: usize,
    entries: Vec<HSeries>,
}

impl SeriesMatrix {
    pub fn zero(n: usize, order: usize) -> Self {
        Self {
            n,
            order,
            entries: vec![HSeries::zero(order); n * n],
        }
    }

    pub fn identity(n: usize, order: usize) -> Self {
        let mut m = Self::zero(n, order);
        for i in 0..n {
            m.set(i, i, HSeries::one(order));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &HSeries {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: HSeries) {
        self.entries[i * self.n + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&HSeries::constant(Q::from_integer((-1).into()), self.order)))
    }

    pub fn scale(&self, s: &HSeries) -> Self {
        Self {
            n: self.n,
            order: self.order,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix dimensions must match");
        let mut out = Self::zero(self.n, self.order);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * self.n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let n = self.n * other.n;
        let mut out = Self::zero(n, self.order);
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.n {
                    for l in 0..other.n {
                        out.set(i * other.n + k, j * other.n + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(HSeries::is_zero)
    }

    /// Entrywise `h^0` part.
    pub fn at_zero(&self) -> Vec<Vec<Q>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).coeff(0).clone()).collect())
            .collect()
    }

    pub fn entries(&self) -> &[HSeries] {
        &self.entries
    }
}

impl fmt::Debug for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn unit(i: usize, j: usize, order: usize) -> SeriesMatrix {
    let mut m = SeriesMatrix::zero(2, order);
    m.set(i, j, HSeries::one(order));
    m
}

/// `ρ` on one PBW monomial: `E21^a diag(1,-1)^b E12^c`.
fn rho_mono(m: Mono, order: usize) -> SeriesMatrix {
    let pow = |x: &SeriesMatrix, k: u32| {
        (0..k).fold(SeriesMatrix::identity(2, order), |acc, _| acc.mul(x))
    };
    let mut h = SeriesMatrix::zero(2, order);
    h.set(0, 0, HSeries::one(order));
    h.set(1, 1, HSeries::constant(Q::from_integer((-1).into()), order));
    pow(&unit(1, 0, order), m.a)
        .mul(&pow(&h, m.b))
        .mul(&pow(&unit(0, 1, order), m.c))
}

/// Defining representation: `ρ(H) = diag(1,-1)`, `ρ(Xp) = E12`, `ρ(Xm) = E21`.
pub fn rho_defining(x: &AlgElement) -> SeriesMatrix {
    let order = x.order();
    let mut out = SeriesMatrix::zero(2, order);
    for (m, c) in x.terms() {
        out = out.add(&rho_mono(*m, order).scale(c));
    }
    out
}

/// Braided R-matrix of the defining representation in the basis
/// `(e1e1, e1e2, e2e1, e2e2)`: classical limit is the flip, Hecke roots are
/// `q` and `-1/q`. `mirrored` replaces `q` by `1/q`.
pub fn rhat_matrix(order: usize, mirrored: bool) -> SeriesMatrix {
    let sign = if mirrored { -1 } else { 1 };
    let q = HSeries::q_power(&Q::from_integer(sign.into()), order);
    let qinv = HSeries::q_power(&Q::from_integer((-sign).into()), order);
    let one = HSeries::one(order);
    let mut r = SeriesMatrix::zero(4, order);
    r.set(0, 0, q.clone());
    r.set(1, 1, &q - &qinv);
    r.set(1, 2, one.clone());
    r.set(2, 1, one);
    r.set(3, 3, q);
    r
}

/// Index of `e_i ⊗ e_j` in the R-matrix basis.
pub fn pair_index(i: usize, j: usize) -> usize {
    2 * i + j
}
