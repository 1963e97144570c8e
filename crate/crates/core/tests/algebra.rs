use gns_deform_core::formal_scalar::{int, rat};
use gns_deform_core::star::{star, StarKind};
use gns_deform_core::{CRational, FormalScalar, Frame, Monomial, Order, Poly};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = FormalScalar> {
    prop::collection::vec((0i64..6, 1i64..3, -5i64..6, -5i64..6, 1i64..4), 0..4).prop_map(|ts| {
        let terms = ts.into_iter().map(|(e, d, re, im, den)| (rat(e, d), CRational::new(rat(re, den), rat(im, den))));
        FormalScalar::new(terms, Order::Infinite)
    })
}

fn poly(frame: Frame) -> impl Strategy<Value = Poly> {
    let vars = frame.vars();
    prop::collection::vec((prop::collection::vec(0u32..3, vars), scalar()), 0..4).prop_map(move |ts| {
        ts.into_iter().fold(Poly::zero(frame), |acc, (m, c)| &acc + &Poly::term(frame, Monomial(m), c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn scalar_inverse(a in scalar()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv(&int(8)).unwrap();
        let one = &a * &inv;
        let diff = &one.truncate(inv.trunc()) - &FormalScalar::one().truncate(inv.trunc());
        prop_assert!(diff.has_no_terms());
    }

    #[test]
    fn wick_associative(f in poly(Frame::wick(1)), g in poly(Frame::wick(1)), h in poly(Frame::wick(1))) {
        let s = |a: &Poly, b: &Poly| star(StarKind::Wick, a, b).unwrap();
        prop_assert_eq!(s(&s(&f, &g), &h), s(&f, &s(&g, &h)));
        prop_assert_eq!(s(&f, &g).conj(), s(&g.conj(), &f.conj()));
    }

    #[test]
    fn moyal_associative(f in poly(Frame::weyl(1)), g in poly(Frame::weyl(1)), h in poly(Frame::weyl(1))) {
        let s = |a: &Poly, b: &Poly| star(StarKind::WeylMoyal, a, b).unwrap();
        prop_assert_eq!(s(&s(&f, &g), &h), s(&f, &s(&g, &h)));
        prop_assert_eq!(s(&f, &Poly::one(Frame::weyl(1))), f);
    }
}
