//! Truncated two-mode Fock spaces, ladder operators and the Jordan-Schwinger
//! map `sigma(x) = rho(x)^i_j a+_i a^j`.
//!
//! Bosonic ladders use `a+|m> = |m+1>`, `a|m> = m|m-1>` so every entry is an
//! integer. The matching adjoint is the weighted one, `X† = W^{-1} X^T W` with
//! `W = diag(m1! m2!)`, under which `(a^i)† = a+_i`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{AlgElement, Mono};
use crate::scalar::{factorial, gamma_ratio_sl, GammaBranch, HSeries, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Bose,
    Fermi,
}

impl Statistics {
    pub fn name(self) -> &'static str {
        match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        }
    }
}

/// Occupation basis for two modes, graded by total occupation and ordered
/// lexicographically inside each grade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockSpace {
    statistics: Statistics,
    cutoff: usize,
    basis: Vec<[usize; 2]>,
    index: HashMap<[usize; 2], usize>,
}

impl FockSpace {
    pub const MODES: usize = 2;

    pub fn bose(cutoff: usize) -> Self {
        let mut basis = Vec::new();
        for total in 0..=cutoff {
            for m1 in 0..=total {
                basis.push([m1, total - m1]);
            }
        }
        Self::from_basis(Statistics::Bose, cutoff, basis)
    }

    /// Full two-mode fermionic space; the cutoff is always 2.
    pub fn fermi() -> Self {
        Self::from_basis(
            Statistics::Fermi,
            2,
            vec![[0, 0], [0, 1], [1, 0], [1, 1]],
        )
    }

    pub fn new(statistics: Statistics, cutoff: usize) -> Self {
        match statistics {
            Statistics::Bose => Self::bose(cutoff),
            Statistics::Fermi => Self::fermi(),
        }
    }

    fn from_basis(statistics: Statistics, cutoff: usize, basis: Vec<[usize; 2]>) -> Self {
        let index = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        Self {
            statistics,
            cutoff,
            basis,
            index,
        }
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[[usize; 2]] {
        &self.basis
    }

    pub fn state(&self, occupation: [usize; 2]) -> Option<usize> {
        self.index.get(&occupation).copied()
    }

    pub fn total(&self, i: usize) -> usize {
        self.basis[i][0] + self.basis[i][1]
    }

    /// Diagonal metric `m1! m2!` of the weighted adjoint.
    pub fn metric(&self, i: usize) -> Q {
        let [m1, m2] = self.basis[i];
        Q::from_integer(factorial(m1 as u32) * factorial(m2 as u32))
    }
}

/// Sparse square matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    dim: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl QMat {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries.insert((i, i), Q::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: &Q) {
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((i, j)).or_insert_with(Q::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Q)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((i, j), v) in &other.entries {
            out.add_entry(*i, *j, v);
        }
        out
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|(k, v)| (*k, v * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((i, k), a) in &self.entries {
            for ((_, j), b) in other.entries.range((*k, 0)..(*k + 1, 0)) {
                out.add_entry(*i, *j, &(a * b));
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|((i, j), v)| ((*j, *i), v.clone()))
                .collect(),
        }
    }

    /// Dense rows, for serialization.
    pub fn dense(&self) -> Vec<Vec<Q>> {
        let mut rows = vec![vec![Q::zero(); self.dim]; self.dim];
        for ((i, j), v) in &self.entries {
            rows[*i][*j] = v.clone();
        }
        rows
    }
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMat[{}]{{", self.dim)?;
        for ((i, j), v) in &self.entries {
            write!(f, " ({i},{j}):{v}")?;
        }
        write!(f, " }}")
    }
}

/// Operator with entries in `Q[[h]]/h^{K+1}`, stored as one matrix per order.
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorSeries {
    coeffs: Vec<QMat>,
}

impl OperatorSeries {
    pub fn zero(dim: usize, order: usize) -> Self {
        Self {
            coeffs: vec![QMat::zero(dim); order + 1],
        }
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        Self::constant(QMat::identity(dim), order)
    }

    /// `m` at order 0, nothing above.
    pub fn constant(m: QMat, order: usize) -> Self {
        let dim = m.dim();
        let mut coeffs = vec![QMat::zero(dim); order + 1];
        coeffs[0] = m;
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<QMat>) -> Self {
        assert!(!coeffs.is_empty(), "at least the order-0 matrix");
        Self { coeffs }
    }

    /// `s(h)` times the identity.
    pub fn scalar(s: &HSeries, dim: usize) -> Self {
        Self {
            coeffs: s
                .coeffs()
                .iter()
                .map(|c| QMat::identity(dim).scale(c))
                .collect(),
        }
    }

    pub fn diagonal(values: &[HSeries], order: usize) -> Self {
        let dim = values.len();
        let mut out = Self::zero(dim, order);
        for (i, v) in values.iter().enumerate() {
            for (k, c) in v.coeffs().iter().enumerate() {
                out.coeffs[k].add_entry(i, i, c);
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn at(&self, k: usize) -> &QMat {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[QMat] {
        &self.coeffs
    }

    pub fn entry(&self, i: usize, j: usize) -> HSeries {
        HSeries::from_coeffs(self.coeffs.iter().map(|m| m.get(i, j)).collect(), self.order())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(QMat::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale_q(&-Q::one())
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|m| m.scale(s)).collect(),
        }
    }

    pub fn scale(&self, s: &HSeries) -> Result<Self> {
        if s.order() != self.order() {
            return Err(Error::OrderMismatch(self.order(), s.order()));
        }
        let mut out = Self::zero(self.dim(), self.order());
        for (i, a) in s.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, m) in self.coeffs.iter().enumerate() {
                if i + j > self.order() {
                    break;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&m.scale(a));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order();
        let mut out = Self::zero(self.dim(), order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul(b));
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.add(&other.mul(self)?)
    }

    /// Inverse of an operator whose order-0 part is the identity.
    pub fn inverse(&self) -> Result<Self> {
        let dim = self.dim();
        if self.coeffs[0] != QMat::identity(dim) {
            return Err(Error::Unsupported(
                "operator inverse needs the form 1 + O(h)".into(),
            ));
        }
        let one = Self::identity(dim, self.order());
        let minus_nil = one.sub(self)?;
        let mut out = one.clone();
        let mut power = one;
        for _ in 1..=self.order() {
            power = power.mul(&minus_nil)?;
            out = out.add(&power)?;
        }
        Ok(out)
    }

    /// Exponential of an operator with no order-0 part.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut out = Self::identity(self.dim(), self.order());
        let mut power = out.clone();
        for k in 1..=self.order() {
            power = power.mul(self)?.scale_q(&Q::new(1.into(), (k as i64).into()));
            out = out.add(&power)?;
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(QMat::transpose).collect(),
        }
    }

    /// `W^{-1} X^T W` with the metric of `space`.
    pub fn weighted_adjoint(&self, space: &FockSpace) -> Self {
        let w: Vec<Q> = (0..space.dim()).map(|i| space.metric(i)).collect();
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|m| {
                    let mut out = QMat::zero(m.dim());
                    for ((i, j), v) in m.entries() {
                        out.add_entry(*j, *i, &(v * &w[*i] / &w[*j]));
                    }
                    out
                })
                .collect(),
        }
    }

    /// Same operator truncated to a lower order.
    pub fn truncated(&self, order: usize) -> Self {
        Self {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    /// Whether every nonzero entry maps a state of total `t` to total `t + shift`.
    pub fn shifts_total_by(&self, space: &FockSpace, shift: i64) -> bool {
        self.coeffs.iter().all(|m| {
            m.entries()
                .all(|((i, j), _)| space.total(*i) as i64 == space.total(*j) as i64 + shift)
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|m| {
                    serde_json::Value::Array(
                        m.dense()
                            .into_iter()
                            .map(|row| {
                                serde_json::Value::Array(
                                    row.into_iter()
                                        .map(|q| serde_json::Value::String(q.to_string()))
                                        .collect(),
                                )
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

impl fmt::Debug for OperatorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.coeffs.iter().enumerate() {
            writeln!(f, "h^{k}: {m:?}")?;
        }
        Ok(())
    }
}

/// `a+_i` and `a^i` for both modes, as order-0 operators.
#[derive(Clone, Debug)]
pub struct Ladders {
    pub create: [OperatorSeries; 2],
    pub annihilate: [OperatorSeries; 2],
}

pub fn ladder_matrices(space: &FockSpace, order: usize) -> Ladders {
    let dim = space.dim();
    let mut create = [QMat::zero(dim), QMat::zero(dim)];
    let mut annihilate = [QMat::zero(dim), QMat::zero(dim)];
    for (j, occ) in space.basis().iter().enumerate() {
        for mode in 0..2 {
            let mut up = *occ;
            up[mode] += 1;
            let sign = match space.statistics() {
                Statistics::Fermi if mode == 1 && occ[0] == 1 => -Q::one(),
                _ => Q::one(),
            };
            if let Some(i) = space.state(up) {
                create[mode].add_entry(i, j, &sign);
            }
            if occ[mode] > 0 {
                let mut down = *occ;
                down[mode] -= 1;
                let i = space.state(down).expect("lowering stays inside the space");
                let value = match space.statistics() {
                    Statistics::Bose => Q::from_integer((occ[mode] as i64).into()),
                    Statistics::Fermi => sign,
                };
                annihilate[mode].add_entry(i, j, &value);
            }
        }
    }
    let [c1, c2] = create;
    let [a1, a2] = annihilate;
    Ladders {
        create: [
            OperatorSeries::constant(c1, order),
            OperatorSeries::constant(c2, order),
        ],
        annihilate: [
            OperatorSeries::constant(a1, order),
            OperatorSeries::constant(a2, order),
        ],
    }
}

/// The Jordan-Schwinger homomorphism on a fixed space, caching monomial images.
pub struct Sigma {
    space: FockSpace,
    order: usize,
    xp: QMat,
    xm: QMat,
    h: QMat,
    cache: RefCell<HashMap<Mono, QMat>>,
}

impl Sigma {
    pub fn new(space: &FockSpace, order: usize) -> Self {
        let l = ladder_matrices(space, 0);
        let bilinear = |i: usize, j: usize| l.create[i].at(0).mul(l.annihilate[j].at(0));
        let xp = bilinear(0, 1);
        let xm = bilinear(1, 0);
        let h = bilinear(0, 0).add(&bilinear(1, 1).scale(&-Q::one()));
        Self {
            space: space.clone(),
            order,
            xp,
            xm,
            h,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `sigma(Xm^a H^b Xp^c)` as an exact matrix.
    pub fn mono(&self, m: Mono) -> QMat {
        if let Some(v) = self.cache.borrow().get(&m) {
            return v.clone();
        }
        let dim = self.space.dim();
        let value = if m.is_one() {
            QMat::identity(dim)
        } else if m.c > 0 {
            self.mono(Mono::new(m.a, m.b, m.c - 1)).mul(&self.xp)
        } else if m.b > 0 {
            self.mono(Mono::new(m.a, m.b - 1, 0)).mul(&self.h)
        } else {
            self.mono(Mono::new(m.a - 1, 0, 0)).mul(&self.xm)
        };
        self.cache.borrow_mut().insert(m, value.clone());
        value
    }

    pub fn apply(&self, x: &AlgElement) -> OperatorSeries {
        let dim = self.space.dim();
        let mut out = OperatorSeries::zero(dim, self.order);
        for (m, c) in x.terms() {
            let mat = self.mono(*m);
            for (k, q) in c.coeffs().iter().enumerate().take(self.order + 1) {
                if !q.is_zero() {
                    out.coeffs[k] = out.coeffs[k].add(&mat.scale(q));
                }
            }
        }
        out
    }
}

pub fn sigma_rep(x: &AlgElement, space: &FockSpace) -> OperatorSeries {
    Sigma::new(space, x.order()).apply(x)
}

/// How the invariant factor `D = u v^{-1}` is split between `u` and `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Split {
    /// `u = D^{1/2}`, `v = D^{-1/2}`.
    Symmetric,
    /// `u = D`, `v = 1`.
    UOnly,
    /// `u = 1`, `v = D^{-1}`.
    VOnly,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Symmetric => "symmetric",
            Split::UOnly => "u-only",
            Split::VOnly => "v-only",
        }
    }
}

/// Diagonal operator `Γ(n+1)/Γ_{q²}(n+1)` on the total occupation `n`.
pub fn invariant_diagonal(
    space: &FockSpace,
    branch: GammaBranch,
    order: usize,
) -> Result<OperatorSeries> {
    if branch == GammaBranch::So {
        return Err(Error::Unsupported(
            "the so(N) invariant factor needs the so(N) Casimir on Fock space".into(),
        ));
    }
    let values: Vec<HSeries> = (0..space.dim())
        .map(|i| gamma_ratio_sl(space.total(i) as u32, order))
        .collect();
    Ok(OperatorSeries::diagonal(&values, order))
}

/// `(u, v)` with `u v^{-1} = D` for the chosen split.
pub fn invariant_split(
    space: &FockSpace,
    split: Split,
    order: usize,
) -> Result<(OperatorSeries, OperatorSeries)> {
    let dim = space.dim();
    let per_state = |f: &dyn Fn(&HSeries) -> Result<HSeries>| -> Result<OperatorSeries> {
        let values = (0..dim)
            .map(|i| f(&gamma_ratio_sl(space.total(i) as u32, order)))
            .collect::<Result<Vec<_>>>()?;
        Ok(OperatorSeries::diagonal(&values, order))
    };
    let one = OperatorSeries::identity(dim, order);
    Ok(match split {
        Split::Symmetric => (
            per_state(&|d| d.sqrt())?,
            per_state(&|d| d.sqrt()?.inv())?,
        ),
        Split::UOnly => (per_state(&|d| Ok(d.clone()))?, one),
        Split::VOnly => (one, per_state(&|d| d.inv())?),
    })
}

/// Projector onto states with total occupation `<= cutoff - band`.
pub fn guard_projector(space: &FockSpace, band: usize, order: usize) -> Result<OperatorSeries> {
    if band > space.cutoff() {
        return Err(Error::BandTooLarge {
            band,
            cutoff: space.cutoff(),
        });
    }
    let limit = space.cutoff() - band;
    let mut m = QMat::zero(space.dim());
    for i in 0..space.dim() {
        if space.total(i) <= limit {
            m.add_entry(i, i, &Q::one());
        }
    }
    Ok(OperatorSeries::constant(m, order))
}
