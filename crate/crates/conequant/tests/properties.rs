//! Randomized property suites for the exact symbolic layer.

use conequant::dsl::{format_weyl, parse_weyl};
use conequant::radial::{isotypic_restrict, Sl2Span};
use conequant::{MultiIndex, Polynomial, QuadraticForm, Scalar, WeylElement};
use proptest::prelude::*;

const N: usize = 3;

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    ((-3i64..=3), (-3i64..=3), (1i64..=3)).prop_map(|(a, b, d)| {
        let re = Scalar::from_rational(num_rational::BigRational::new(a.into(), d.into()));
        let im = Scalar::from_rational(num_rational::BigRational::new(b.into(), d.into()));
        re + im * Scalar::i()
    })
}

fn arb_index(max_total: u32) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0u32..=max_total, N).prop_map(move |mut v| {
        // Cap the total degree to keep products small.
        let mut total: u32 = v.iter().sum();
        let mut i = 0;
        while total > max_total {
            if v[i % N] > 0 {
                v[i % N] -= 1;
                total -= 1;
            }
            i += 1;
        }
        MultiIndex(v)
    })
}

fn arb_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((arb_index(2), arb_scalar()), 1..=2).prop_map(|terms| {
        let mut p = Polynomial::zero(N);
        for (idx, c) in terms {
            p.add_term(idx, c);
        }
        p
    })
}

fn arb_weyl() -> impl Strategy<Value = WeylElement> {
    prop::collection::vec((arb_index(2), arb_poly()), 1..=2).prop_map(|terms| {
        let mut w = WeylElement::zero(N);
        for (alpha, p) in terms {
            w.add_term(alpha, p);
        }
        w
    })
}

/// A single term `c z^m d^a`, homogeneous of weight |m| - |a|.
fn arb_homogeneous() -> impl Strategy<Value = (WeylElement, i64)> {
    (arb_index(3), arb_index(2), arb_scalar()).prop_map(|(m, a, c)| {
        let weight = m.total() as i64 - a.total() as i64;
        let mut w = WeylElement::zero(N);
        w.add_term(a, Polynomial::monomial(N, m, c));
        (w, weight)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_mul_is_associative(a in arb_weyl(), b in arb_weyl(), c in arb_weyl()) {
        let left = a.normal_mul(&b).unwrap().normal_mul(&c).unwrap();
        let right = a.normal_mul(&b.normal_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn nested_commutators_vanish_past_the_order(
        d in arb_weyl(),
        polys in prop::collection::vec(arb_poly(), 4),
    ) {
        // d has some order k; commuting with k+1 multiplication operators
        // kills it (Grothendieck's inductive definition of order).
        let k = d.order() as usize;
        prop_assume!(k < polys.len());
        let mut acc = d;
        for f in polys.iter().take(k + 1) {
            let mf = WeylElement::from_polynomial(f.clone());
            acc = mf.commutator(&acc).unwrap();
        }
        prop_assert!(acc.is_zero());
    }

    #[test]
    fn apply_respects_composition(a in arb_weyl(), b in arb_weyl(), f in arb_poly()) {
        let composed = a.normal_mul(&b).unwrap().apply(&f).unwrap();
        let staged = a.apply(&b.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(composed, staged);
    }

    #[test]
    fn weights_add_under_products(x in arb_homogeneous(), y in arb_homogeneous()) {
        let (a, la) = x;
        let (b, lb) = y;
        let prod = a.normal_mul(&b).unwrap();
        prop_assert!(prod.is_homogeneous_of_weight(la + lb));
    }

    #[test]
    fn ideal_absorbs_right_composition(d in arb_weyl(), e in arb_weyl()) {
        let q = QuadraticForm::standard(N);
        let m_q = WeylElement::from_polynomial(q.polynomial());
        let in_ideal = m_q.normal_mul(&d).unwrap();
        prop_assert!(in_ideal.in_left_ideal(&q));
        prop_assert!(in_ideal.normal_mul(&e).unwrap().in_left_ideal(&q));
    }

    #[test]
    fn restriction_well_defined_modulo_ideal(
        e in arb_weyl(),
        f in arb_poly(),
        p in arb_poly(),
    ) {
        // d preserves (Q) (multiplications always do); r lies in Q·D(V);
        // then d and d + r act identically modulo Q.
        let q = QuadraticForm::standard(N);
        let d = WeylElement::from_polynomial(p);
        prop_assert!(d.preserves_ideal(&q));
        let r = WeylElement::from_polynomial(q.polynomial())
            .normal_mul(&e)
            .unwrap();
        prop_assert!(r.in_left_ideal(&q));
        let diff = d.add(&r).apply(&f).unwrap().sub(&d.apply(&f).unwrap());
        let (_, rem) = diff.div_rem(
            &q.polynomial(),
            conequant::weyl::MonomialOrder::GradedLex,
        );
        prop_assert!(rem.is_zero());
    }

    #[test]
    fn dsl_round_trips_elements(w in arb_weyl()) {
        let text = format_weyl(&w);
        let parsed = parse_weyl(&text, N).unwrap();
        prop_assert_eq!(parsed, w);
    }

    #[test]
    fn radial_restriction_is_a_homomorphism(
        x in prop::collection::vec(arb_scalar(), 4),
        y in prop::collection::vec(arb_scalar(), 4),
        ell in 0u32..4,
    ) {
        // Coordinates (e, h, f, 1); the bracket in these coordinates:
        // [X,Y] = (2(xh·ye − xe·yh), xe·yf − xf·ye, −2(xh·yf − xf·yh), 0).
        let two = Scalar::from_int(2);
        let be = two.clone() * (x[1].clone() * y[0].clone() - x[0].clone() * y[1].clone());
        let bh = x[0].clone() * y[2].clone() - x[2].clone() * y[0].clone();
        let bf = -(two * (x[1].clone() * y[2].clone() - x[2].clone() * y[1].clone()));
        let spans = |v: &[Scalar]| Sl2Span::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone());
        let lhs = isotypic_restrict(
            &spans(&[be, bh, bf, Scalar::zero()]),
            ell,
        );
        let rhs = isotypic_restrict(&spans(&x), ell)
            .commutator(&isotypic_restrict(&spans(&y), ell))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// Negative control for the absorption property: composing with an
/// operator on the LEFT can escape Q·D(V).
#[test]
fn left_composition_can_escape_the_ideal() {
    let q = QuadraticForm::standard(N);
    let m_q = WeylElement::from_polynomial(q.polynomial());
    let d1 = WeylElement::partial(N, 0);
    let in_ideal = m_q.normal_mul(&d1).unwrap();
    assert!(in_ideal.in_left_ideal(&q));
    let escaped = d1.normal_mul(&in_ideal).unwrap();
    assert!(!escaped.in_left_ideal(&q));
}
