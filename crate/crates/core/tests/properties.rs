use exherm::series::{FormalSeries, Variable};
use exherm::text::{format_element, format_rf, format_scalar, parse_element, parse_rf, parse_scalar};
use exherm::{AlgebraElement, DiffOperator, Field, GaussRational, PiScalar, Poly, Rational, RationalFunction, XPoly};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| Rational::new(n, d))
}

fn gauss() -> impl Strategy<Value = GaussRational> {
    (rational(), rational()).prop_map(|(a, b)| GaussRational::new(a, b))
}

/// `(g0 + g1 s + g2 s²) / (1 + h s)` with `s = √π`.
fn scalar() -> impl Strategy<Value = PiScalar> {
    (gauss(), gauss(), gauss(), gauss()).prop_map(|(g0, g1, g2, h)| {
        let num = Poly::from_coeffs(vec![g0, g1, g2]);
        let den = Poly::from_coeffs(vec![GaussRational::one(), h]);
        PiScalar::from_parts(num, den).expect("nonzero denominator")
    })
}

fn small_scalar() -> impl Strategy<Value = PiScalar> {
    prop_oneof![
        (-6i64..=6).prop_map(PiScalar::int),
        gauss().prop_map(PiScalar::gauss),
        (gauss(), gauss()).prop_map(|(a, b)| PiScalar::gauss(a).add(&PiScalar::gauss(b).mul(&PiScalar::sqrt_pi()))),
    ]
}

fn xpoly(max_len: usize) -> impl Strategy<Value = XPoly> {
    prop::collection::vec(small_scalar(), 0..=max_len).prop_map(XPoly::from_coeffs)
}

/// Rational function whose denominator has no zero at the origin.
fn rf() -> impl Strategy<Value = RationalFunction> {
    (xpoly(3), prop::collection::vec(-3i64..=3, 0..=2)).prop_map(|(n, tail)| {
        let mut d = vec![1i64];
        d.extend(tail);
        RationalFunction::new(n, XPoly::from_i64s(&d))
    })
}

fn element() -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((-2i32..=1, rf(), any::<bool>()), 0..=3).prop_map(|terms| {
        terms.into_iter().fold(AlgebraElement::zero(), |acc, (e, r, with_erf)| {
            let mut t = AlgebraElement::e_pow(e).scale_rf(&r);
            if with_erf {
                t = t.mul(&AlgebraElement::erf());
            }
            acc.add(&t)
        })
    })
}

/// Integer-coefficient rational function, cheap enough for composition.
fn int_rf() -> impl Strategy<Value = RationalFunction> {
    (prop::collection::vec(-4i64..=4, 0..=3), -2i64..=2).prop_map(|(n, d)| {
        RationalFunction::new(XPoly::from_i64s(&n), XPoly::from_i64s(&[1, 0, d]))
    })
}

fn operator() -> impl Strategy<Value = DiffOperator> {
    prop::collection::vec(int_rf(), 0..=3).prop_map(DiffOperator::from_coeffs)
}

fn int_element() -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((-1i32..=1, int_rf()), 0..=2).prop_map(|terms| {
        terms.into_iter().fold(AlgebraElement::zero(), |acc, (e, r)| acc.add(&AlgebraElement::e_pow(e).scale_rf(&r)))
    })
}

fn series() -> impl Strategy<Value = FormalSeries> {
    (prop::collection::vec(small_scalar(), 1..=8), 4usize..=10).prop_map(|(cs, order)| FormalSeries::truncated(Variable::X, cs, order))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&PiScalar::one()), a.clone());
        match a.inv() {
            Some(ai) => prop_assert!(a.mul(&ai).is_one()),
            None => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn scalar_canonical_form_is_unique(a in scalar(), b in scalar()) {
        // Equal values built two ways compare equal structurally.
        let lhs = a.add(&b).mul(&a.sub(&b));
        let rhs = a.mul(&a).sub(&b.mul(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_function_field_axioms(f in rf(), g in rf(), h in rf()) {
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        if let Some(gi) = g.inv() {
            prop_assert_eq!(f.mul(&g).mul(&gi), f.clone());
        }
        prop_assert_eq!(f.mul(&g).derivative(), f.derivative().mul(&g).add(&f.mul(&g.derivative())));
    }

    #[test]
    fn leibniz_rule(f in element(), g in element()) {
        let lhs = f.mul(&g).differentiate();
        let rhs = f.differentiate().mul(&g).add(&f.mul(&g.differentiate()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn apply_respects_compose(p in operator(), q in operator(), f in int_element()) {
        prop_assert_eq!(p.compose(&q).apply(&f), p.apply(&q.apply(&f)));
    }

    #[test]
    fn compose_is_associative(p in operator(), q in operator(), r in operator()) {
        prop_assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
    }

    #[test]
    fn commutator_is_antisymmetric(p in operator(), q in operator()) {
        prop_assert!(p.commutator(&q).add(&q.commutator(&p)).is_zero());
    }

    #[test]
    fn right_division_reconstructs(p in operator(), m in operator()) {
        prop_assume!(!m.is_zero());
        let (quo, rem) = p.right_div_rem(&m);
        prop_assert_eq!(quo.compose(&m).add(&rem), p.clone());
        prop_assert!(rem.order().unwrap_or(0) < m.order().unwrap().max(1) || rem.is_zero());
    }

    #[test]
    fn text_round_trip(a in scalar(), f in rf(), e in element()) {
        prop_assert_eq!(parse_scalar(&format_scalar(&a)).unwrap(), a);
        prop_assert_eq!(parse_rf(&format_rf(&f)).unwrap(), f);
        prop_assert_eq!(parse_element(&format_element(&e)).unwrap(), e);
    }

    #[test]
    fn series_ring_laws(f in series(), g in series(), h in series()) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.mul(&g).derivative(), f.derivative().mul(&g).add(&f.mul(&g.derivative())));
    }

    #[test]
    fn series_reciprocal(f in series()) {
        prop_assume!(!f.coeff(0).unwrap().is_zero());
        let order = f.order().unwrap() as usize;
        let prod = f.mul(&f.reciprocal(order).unwrap());
        prop_assert_eq!(prod.coeff(0).unwrap(), PiScalar::one());
        for k in 1..=order {
            prop_assert!(prod.coeff(k).unwrap().is_zero());
        }
    }

    #[test]
    fn series_expansion_is_a_ring_map(f in rf(), g in rf()) {
        let n = 8;
        let sf = FormalSeries::from_rf(Variable::X, &f, n).unwrap();
        let sg = FormalSeries::from_rf(Variable::X, &g, n).unwrap();
        let prod = FormalSeries::from_rf(Variable::X, &f.mul(&g), n).unwrap();
        prop_assert_eq!(sf.mul(&sg).truncate(n + 1), prod.truncate(n + 1));
    }
}
