//! The relation checker against a realization that does not go through the
//! twist: a q-oscillator pair written directly in number operators, and the
//! intertwiner property of R̂ for the quantum coproduct.

use twistforge::deform::{DeformedSet, Provenance};
use twistforge::fock::{ladder_matrices, FockSpace, OperatorSeries};
use twistforge::hopf::{rho_defining, rhat_matrix, AlgElement, Gen, SeriesMatrix};
use twistforge::scalar::{q_frac, q_int, qnumber, HSeries};
use twistforge::twist::{coproduct_h_image, solve_twist, SolveOptions, UhElement};
use twistforge::verify::{check_qcr, Convention};

/// `A+_1 = a+_1 q^{e n2}`, `A+_2 = a+_2`, `A^2 = a^2 [n2]/n2`,
/// `A^1 = a^1 q^{e n2} [n1]/n1`, with `q`-numbers in base `q^{2e}`, so that
/// `A+_2 A^2 = [n2]` and `A+_1 A^1 = q^{2e n2} [n1]`.
fn q_oscillators(space: &FockSpace, order: usize, e: i64) -> DeformedSet {
    let l = ladder_matrices(space, order);
    let diag = |f: &dyn Fn(usize, usize) -> HSeries| {
        let values: Vec<HSeries> = space.basis().iter().map(|m| f(m[0], m[1])).collect();
        OperatorSeries::diagonal(&values, order)
    };
    let qpow = |k: usize| HSeries::q_power(&q_int(e * k as i64), order);
    let ratio = |k: usize| match k {
        0 => HSeries::one(order),
        _ => qnumber(k as u32, 2 * e, order).unwrap().scale(&q_frac(1, k as i64)),
    };
    let aplus = [
        l.create[0].mul(&diag(&|_, m2| qpow(m2))).unwrap(),
        l.create[1].clone(),
    ];
    let a = [
        l.annihilate[0]
            .mul(&diag(&|m1, m2| &qpow(m2) * &ratio(m1)))
            .unwrap(),
        l.annihilate[1].mul(&diag(&|_, m2| ratio(m2))).unwrap(),
    ];
    DeformedSet {
        aplus,
        a,
        provenance: Provenance {
            unitary_gauge: false,
            pivot_rule: "none".into(),
            split: "none".into(),
            gamma_dropped: false,
            alpha: "1".into(),
        },
    }
}

#[test]
fn q_oscillators_pass_exactly_one_convention() {
    let space = FockSpace::bose(5);
    for (e, passing) in [(1, Convention::Standard), (-1, Convention::Mirrored)] {
        let d = q_oscillators(&space, 3, e);
        let good = check_qcr(&d, passing, &space, 2).unwrap();
        assert!(good.passed(), "e = {e}: {good:?}");
        let bad = check_qcr(&d, passing.other(), &space, 2).unwrap();
        assert!(!bad.passed());
        assert_eq!(bad.first_failing_order, Some(1));
    }
}

#[test]
fn undeformed_ladders_pass_both_conventions_at_order_zero() {
    let space = FockSpace::bose(4);
    let l = ladder_matrices(&space, 0);
    let d = DeformedSet {
        aplus: l.create,
        a: l.annihilate,
        provenance: q_oscillators(&space, 0, 1).provenance,
    };
    for c in [Convention::Standard, Convention::Mirrored] {
        assert!(check_qcr(&d, c, &space, 2).unwrap().passed());
    }
}

fn coproduct_matrix(g: Gen, order: usize) -> SeriesMatrix {
    let t = solve_twist(SolveOptions::new(order)).unwrap();
    let d = coproduct_h_image(&UhElement::generator(g, order), &t).unwrap();
    let mut m = SeriesMatrix::zero(4, order);
    for ((l, r), c) in d.terms() {
        let left = rho_defining(&AlgElement::from_mono(*l, c.clone(), t.ctx));
        let right = rho_defining(&AlgElement::from_mono(*r, HSeries::one(order), t.ctx));
        m = m.add(&left.kron(&right));
    }
    m
}

// Only the mirrored R̂ commutes with the U_h action built from Δ_h.
#[test]
fn mirrored_rhat_intertwines_the_quantum_coproduct() {
    let order = 3;
    for g in Gen::ALL {
        let m = coproduct_matrix(g, order);
        let commutes = |mirrored| {
            let r = rhat_matrix(order, mirrored);
            r.mul(&m).sub(&m.mul(&r)).is_zero()
        };
        assert!(commutes(true), "{g:?}");
        assert_eq!(commutes(false), g == Gen::H, "{g:?}");
    }
}
