//! Order-by-order solver for `(phi_h, F)`.
//!
//! At order `k` the unknowns enter linearly once all lower orders are fixed:
//!
//! * `phi_k(Xp)` over weight-2 monomials, with `phi_k(Xm) = phi_k(Xp)*`, from
//!   the bracket relation `[phi Xp, phi Xm] = sinh(hH)/sinh(h)`;
//! * `F_k` over weight-0 monomial pairs without a unit leg (so both counit
//!   conditions hold identically), from
//!   `[F_k, Δ(x)] = -(F Δ(phi x) - (phi⊗phi)Δ_h(x) F)_k` for `x = Xp, Xm`
//!   and, in the unitary gauge, `F_k + F_k* = -(F* F)_k`.
//!
//! `phi(H) = H` together with the weight-0 ansatz makes the Cartan equations
//! hold identically.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{cartan_bracket_target, coproduct_h_image, Gauge, PivotRule, TwistData};
use crate::error::{Error, Result};
use crate::hopf::{AlgElement, Ctx, Gen, Mono, TensorElement};
use crate::linsolve::{SolveError, SparseSystem};
use crate::scalar::{HSeries, Q};
use crate::twist::uh::UhElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub order: usize,
    pub cap: u32,
    pub unitary: bool,
    pub pivot_rule: PivotRule,
}

impl SolveOptions {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            cap: crate::hopf::default_cap(order),
            unitary: true,
            pivot_rule: PivotRule::LexMin,
        }
    }

    pub fn unitary(mut self, on: bool) -> Self {
        self.unitary = on;
        self
    }

    pub fn pivot_rule(mut self, rule: PivotRule) -> Self {
        self.pivot_rule = rule;
        self
    }

    pub fn cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    fn ctx(&self) -> Ctx {
        Ctx::new(self.order, self.cap)
    }

    fn gauge(&self) -> Gauge {
        Gauge {
            cartan_fixed: true,
            unitary: self.unitary,
            pivot_rule: self.pivot_rule,
        }
    }
}

pub fn solve_twist(opts: SolveOptions) -> Result<TwistData> {
    let ctx = opts.ctx();
    let mut t = trivial(ctx, opts.gauge());
    for k in 1..=opts.order {
        solve_order(&mut t, k, opts)?;
    }
    t.refresh()?;
    Ok(t)
}

/// Keeps the orders `< start` of `seed` and solves the remaining orders up to
/// `opts.order`. With `start <= seed.order()` and matching options this
/// reproduces `seed` exactly.
pub fn solve_twist_from(seed: &TwistData, start: usize, opts: SolveOptions) -> Result<TwistData> {
    let ctx = opts.ctx();
    let start = start.max(1);
    let mut t = trivial(ctx, opts.gauge());
    for g in [Gen::Xp, Gen::Xm] {
        t.phi.insert(g, seed.phi(g).with_ctx(ctx).below(start));
    }
    t.f = seed.f.with_ctx(ctx).below(start);
    for k in start..=opts.order {
        solve_order(&mut t, k, opts)?;
    }
    t.refresh()?;
    Ok(t)
}

fn trivial(ctx: Ctx, gauge: Gauge) -> TwistData {
    TwistData {
        ctx,
        phi: Gen::ALL
            .iter()
            .map(|g| (*g, AlgElement::generator(*g, ctx)))
            .collect(),
        f: TensorElement::one(ctx),
        f_inv: TensorElement::one(ctx),
        gamma: AlgElement::one(ctx),
        gamma_prime: AlgElement::one(ctx),
        gauge,
        residuals: BTreeMap::new(),
    }
}

fn ansatz_degree(k: usize, cap: u32) -> u32 {
    (2 * k as u32).min(cap)
}

fn solve_order(t: &mut TwistData, k: usize, opts: SolveOptions) -> Result<()> {
    let phi_k = solve_phi_order(t, k, opts)?;
    let xp = t.phi[&Gen::Xp].add(&phi_k);
    let xm = t.phi[&Gen::Xm].add(&phi_k.star());
    t.phi.insert(Gen::Xp, xp);
    t.phi.insert(Gen::Xm, xm);
    let f_k = solve_f_order(t, k, opts)?;
    t.f = t.f.add(&f_k);
    Ok(())
}

fn map_err(e: SolveError, k: usize) -> Error {
    match e {
        SolveError::Inconsistent => Error::NoSolutionAtOrder(k),
        SolveError::Underdetermined(_) => Error::UnderdeterminedWithoutPivot(k),
    }
}

fn solve_phi_order(t: &TwistData, k: usize, opts: SolveOptions) -> Result<AlgElement> {
    let ctx = t.ctx;
    let local = Ctx::new(k, ctx.cap);
    let columns: Vec<Mono> = Mono::up_to_degree(ansatz_degree(k, ctx.cap))
        .into_iter()
        .filter(|m| m.weight() == 2)
        .collect();
    let xp = AlgElement::generator(Gen::Xp, local);
    let xm = AlgElement::generator(Gen::Xm, local);
    let mut sys: SparseSystem<Mono> = SparseSystem::new(columns.len());
    for (j, m) in columns.iter().enumerate() {
        let unit = HSeries::one(k);
        let e = AlgElement::from_mono(*m, unit.clone(), local);
        let es = AlgElement::from_mono(m.star(), unit, local);
        let image = e.commutator(&xm)?.add(&xp.commutator(&es)?);
        for (mono, c) in image.at_order(0) {
            sys.add_entry(&mono, j, &c);
        }
    }
    let lower_xp = t.phi[&Gen::Xp].with_ctx(local);
    let lower_xm = t.phi[&Gen::Xm].with_ctx(local);
    let rhs = cartan_bracket_target(local)?.sub(&lower_xp.commutator(&lower_xm)?);
    for (mono, c) in rhs.at_order(k) {
        sys.add_rhs(&mono, &c);
    }
    let sol = sys
        .solve(opts.pivot_rule == PivotRule::None)
        .map_err(|e| map_err(e, k))?;
    let mut out = AlgElement::zero(ctx);
    for (m, v) in columns.iter().zip(&sol.values) {
        if !v.is_zero() {
            out.add_term(*m, &HSeries::monomial(v.clone(), k, ctx.order));
        }
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Row {
    Intertwine(Gen, Mono, Mono),
    Unitary(Mono, Mono),
}

fn solve_f_order(t: &TwistData, k: usize, opts: SolveOptions) -> Result<TensorElement> {
    let ctx = t.ctx;
    let local = Ctx::new(k, ctx.cap);
    let monos: Vec<Mono> = Mono::up_to_degree(ansatz_degree(k, ctx.cap))
        .into_iter()
        .filter(|m| !m.is_one())
        .collect();
    let degree = ansatz_degree(k, ctx.cap);
    let mut columns: Vec<(Mono, Mono)> = Vec::new();
    for l in &monos {
        for r in &monos {
            if l.weight() + r.weight() == 0 && l.degree() + r.degree() <= degree {
                columns.push((*l, *r));
            }
        }
    }
    columns.sort();
    let index: BTreeMap<(Mono, Mono), usize> =
        columns.iter().enumerate().map(|(j, c)| (*c, j)).collect();

    let gens = [Gen::Xp, Gen::Xm];
    let deltas: Vec<TensorElement> = gens
        .iter()
        .map(|g| AlgElement::generator(*g, local).coproduct())
        .collect::<Result<_>>()?;
    let mut sys: SparseSystem<Row> = SparseSystem::new(columns.len());
    for (j, (l, r)) in columns.iter().enumerate() {
        let mut unit = TensorElement::zero(local);
        unit.add_term(*l, *r, &HSeries::one(k));
        for (g, d) in gens.iter().zip(&deltas) {
            for ((a, b), c) in unit.commutator(d)?.at_order(0) {
                sys.add_entry(&Row::Intertwine(*g, a, b), j, &c);
            }
        }
        if opts.unitary {
            let one = Q::one();
            sys.add_entry(&Row::Unitary(*l, *r), j, &one);
            let star = (l.star(), r.star());
            debug_assert!(index.contains_key(&star));
            sys.add_entry(&Row::Unitary(star.0, star.1), j, &one);
        }
    }

    let mut work = t.clone();
    work.ctx = local;
    work.phi = t.phi.iter().map(|(g, e)| (*g, e.with_ctx(local))).collect();
    work.f = t.f.with_ctx(local);
    for g in gens {
        let lhs = work.f.multiply(&work.phi[&g].coproduct()?)?;
        let rhs = coproduct_h_image(&UhElement::generator(g, k), &work)?.multiply(&work.f)?;
        for ((a, b), c) in lhs.sub(&rhs).at_order(k) {
            sys.add_rhs(&Row::Intertwine(g, a, b), &-c);
        }
    }
    if opts.unitary {
        let known = work.f.star().multiply(&work.f)?;
        for ((a, b), c) in known.at_order(k) {
            sys.add_rhs(&Row::Unitary(a, b), &-c);
        }
    }
    let sol = sys
        .solve(opts.pivot_rule == PivotRule::None)
        .map_err(|e| map_err(e, k))?;
    let mut out = TensorElement::zero(ctx);
    for ((l, r), v) in columns.iter().zip(&sol.values) {
        if !v.is_zero() {
            out.add_term(*l, *r, &HSeries::monomial(v.clone(), k, ctx.order));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_frac;

    #[test]
    fn first_order_twist_is_half_the_classical_r_matrix() {
        let t = solve_twist(SolveOptions::new(1)).unwrap();
        assert!(t.residuals.is_empty(), "{:?}", t.residuals);
        let f1 = t.f.at_order(1);
        assert_eq!(f1.len(), 2);
        assert_eq!(f1[&(Mono::XP, Mono::XM)], q_frac(-1, 2));
        assert_eq!(f1[&(Mono::XM, Mono::XP)], q_frac(1, 2));
    }

    #[test]
    fn second_order_phi() {
        let t = solve_twist(SolveOptions::new(2)).unwrap();
        assert!(t.residuals.is_empty(), "{:?}", t.residuals);
        let p = t.phi(Gen::Xp).at_order(2);
        assert_eq!(p[&Mono::XP], q_frac(-1, 12));
        assert_eq!(p[&Mono::new(0, 2, 1)], q_frac(1, 12));
        assert_eq!(p[&Mono::new(1, 0, 2)], q_frac(1, 6));
        assert_eq!(t.phi(Gen::Xm), &t.phi(Gen::Xp).star());
        assert_eq!(t.phi(Gen::H), &AlgElement::generator(Gen::H, t.ctx));
    }

    #[test]
    fn unitary_gauge_has_no_free_columns() {
        for k in 1..=2 {
            let opts = SolveOptions::new(k).pivot_rule(PivotRule::None);
            assert!(solve_twist(opts).unwrap().residuals.is_empty());
        }
    }

    #[test]
    fn non_unitary_gauge_needs_a_pivot_rule() {
        let opts = SolveOptions::new(1).unitary(false).pivot_rule(PivotRule::None);
        assert_eq!(solve_twist(opts).unwrap_err(), Error::UnderdeterminedWithoutPivot(1));
        let t = solve_twist(SolveOptions::new(2).unitary(false)).unwrap();
        assert!(t.residuals.is_empty(), "{:?}", t.residuals);
        assert!(!t.gauge.unitary);
    }

    #[test]
    fn resolving_from_a_solution_is_idempotent() {
        let opts = SolveOptions::new(2);
        let t = solve_twist(opts).unwrap();
        for start in 0..=2 {
            assert_eq!(solve_twist_from(&t, start, opts).unwrap(), t);
        }
    }

    #[test]
    fn tight_cap_is_reported() {
        assert!(solve_twist(SolveOptions::new(2).cap(2)).is_err());
    }
}
