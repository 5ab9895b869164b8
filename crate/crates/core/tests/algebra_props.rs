//! Randomized identities of the Hopf kernel, the representations and the
//! series arithmetic. Every comparison is exact.

use proptest::prelude::*;

use twistforge::fock::{sigma_rep, FockSpace};
use twistforge::hopf::{rho_defining, AlgElement, Ctx, Mono, TensorElement};
use twistforge::scalar::{gamma_ratio_sl, q_frac, q_int, qnumber, HSeries, Q};

const ORDER: usize = 1;

fn ctx() -> Ctx {
    Ctx::new(ORDER, 12)
}

fn coeff() -> impl Strategy<Value = HSeries> {
    (-4i64..=4, -4i64..=4, 1i64..=3)
        .prop_map(|(a, b, d)| HSeries::from_coeffs(vec![q_int(a), q_frac(b, d)], ORDER))
}

/// Elements of degree at most 3 with up to four terms.
fn element() -> impl Strategy<Value = AlgElement> {
    let mono = (0u32..=3, 0u32..=3, 0u32..=3)
        .prop_filter("degree <= 3", |(a, b, c)| a + b + c <= 3)
        .prop_map(|(a, b, c)| Mono::new(a, b, c));
    prop::collection::vec((mono, coeff()), 1..=4)
        .prop_map(|terms| AlgElement::from_terms(terms, ctx()))
}

fn triple(t: &TensorElement, left: bool) -> std::collections::BTreeMap<(Mono, Mono, Mono), HSeries> {
    let mut m = if left { t.coproduct_left() } else { t.coproduct_right() };
    m.retain(|_, c| !c.is_zero());
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(x in element(), y in element(), z in element()) {
        let xy_z = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let x_yz = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        let left = x.multiply(&y.add(&z)).unwrap();
        let right = x.multiply(&y).unwrap().add(&x.multiply(&z).unwrap());
        prop_assert_eq!(left, right);
        let one = AlgElement::one(ctx());
        prop_assert_eq!(one.multiply(&x).unwrap(), x.clone());
    }

    #[test]
    fn coproduct_is_coassociative_and_multiplicative(x in element(), y in element()) {
        let dx = x.coproduct().unwrap();
        prop_assert_eq!(triple(&dx, true), triple(&dx, false));
        let dxy = x.multiply(&y).unwrap().coproduct().unwrap();
        prop_assert_eq!(dxy, dx.multiply(&y.coproduct().unwrap()).unwrap());
    }

    #[test]
    fn counit_and_antipode_axioms(x in element()) {
        let dx = x.coproduct().unwrap();
        prop_assert_eq!(dx.counit_left(), x.clone());
        prop_assert_eq!(dx.counit_right(), x.clone());
        let unit = AlgElement::scalar(x.counit(), ctx());
        prop_assert_eq!(dx.antipode_left_multiply().unwrap(), unit.clone());
        prop_assert_eq!(dx.antipode_right_multiply().unwrap(), unit);
    }

    #[test]
    fn antipode_reverses_products(x in element(), y in element()) {
        let lhs = x.multiply(&y).unwrap().antipode().unwrap();
        let rhs = y.antipode().unwrap().multiply(&x.antipode().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_is_an_involutive_anti_homomorphism(x in element(), y in element()) {
        prop_assert_eq!(x.star().star(), x.clone());
        let lhs = x.multiply(&y).unwrap().star();
        prop_assert_eq!(lhs, y.star().multiply(&x.star()).unwrap());
        prop_assert_eq!(x.star().coproduct().unwrap(), x.coproduct().unwrap().star());
    }

    #[test]
    fn defining_rep_is_a_homomorphism(x in element(), y in element()) {
        let lhs = rho_defining(&x.multiply(&y).unwrap());
        prop_assert_eq!(lhs, rho_defining(&x).mul(&rho_defining(&y)));
    }

    // sl2 elements keep total occupation, so truncation does not interfere.
    #[test]
    fn jordan_schwinger_map_is_a_homomorphism(x in element(), y in element()) {
        let s = FockSpace::bose(3);
        let lhs = sigma_rep(&x.multiply(&y).unwrap(), &s);
        prop_assert_eq!(lhs, sigma_rep(&x, &s).mul(&sigma_rep(&y, &s)).unwrap());
        let bracket = sigma_rep(&x.commutator(&y).unwrap(), &s);
        prop_assert_eq!(bracket, sigma_rep(&x, &s).commutator(&sigma_rep(&y, &s)).unwrap());
    }

    #[test]
    fn series_inverse(c0 in 1i64..=5, rest in prop::collection::vec(-6i64..=6, 3)) {
        let mut coeffs = vec![q_int(c0)];
        coeffs.extend(rest.iter().map(|v| q_frac(*v, 5)));
        let s = HSeries::from_coeffs(coeffs, 3);
        prop_assert!((&s * &s.inv().unwrap()).is_one());
    }
}

/// `[n]_{q²} = (e^{2nh} - 1)/(e^{2h} - 1)` with `h` cancelled, built from
/// factorials rather than from the geometric sum.
fn qnumber_closed(n: u32, order: usize) -> HSeries {
    let series = |base: i64| {
        let mut fact = num_bigint::BigInt::from(1);
        let coeffs = (0..=order)
            .map(|k| {
                fact *= (k + 1) as i64;
                Q::new(num_bigint::BigInt::from(base).pow(k as u32 + 1), fact.clone())
            })
            .collect();
        HSeries::from_coeffs(coeffs, order)
    };
    series(2 * n as i64).try_div(&series(2)).unwrap()
}

#[test]
fn gamma_ratio_recursion_against_closed_q_numbers() {
    for order in 0..=4 {
        for n in 0..6u32 {
            let qn = qnumber_closed(n + 1, order);
            assert_eq!(qn, qnumber(n + 1, 2, order).unwrap());
            let lhs = gamma_ratio_sl(n + 1, order);
            let rhs = &gamma_ratio_sl(n, order) * &HSeries::constant(q_int(n as i64 + 1), order).try_div(&qn).unwrap();
            assert_eq!(lhs, rhs, "n = {n}, order = {order}");
        }
    }
}
