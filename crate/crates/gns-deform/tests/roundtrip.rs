use gns_deform::expr::{parse, Expr, VarKind};
use gns_deform_core::Rational;
use num_bigint::BigInt;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0i64..50, 1i64..7).prop_map(|(n, d)| Expr::Rat(Rational::new(BigInt::from(n), BigInt::from(d)))),
        Just(Expr::I),
        (-6i64..7, 1i64..5).prop_map(|(n, d)| Expr::Lam(Rational::new(BigInt::from(n), BigInt::from(d)))),
        (0usize..6, 1usize..4).prop_map(|(k, i)| {
            let kind = [VarKind::Q, VarKind::P, VarKind::Z, VarKind::Zb, VarKind::Y, VarKind::Yb][k];
            Expr::Var(kind, i)
        }),
    ]
}

fn ast() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 40, 2, |inner| {
        let b = |e| Box::new(e);
        prop_oneof![
            inner.clone().prop_map(move |x| Expr::Neg(b(x))),
            inner.clone().prop_map(move |x| Expr::Conj(b(x))),
            (inner.clone(), 0u32..4).prop_map(move |(x, k)| Expr::Pow(b(x), k)),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Add(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Sub(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Mul(b(x), b(y))),
            (inner.clone(), inner).prop_map(move |(x, y)| Expr::Star(b(x), b(y))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn print_then_parse_is_identity(e in ast()) {
        let text = e.to_string();
        let back = parse(&text).map_err(|err| TestCaseError::fail(format!("{text:?}: {err}")))?;
        prop_assert_eq!(back, e, "printed as {:?}", text);
    }
}

#[test]
fn fixed_shapes() {
    for s in ["-(q1 + p1)^2", "a".replace('a', "lam^(-3/2)@q1").as_str(), "conj(z1)*zb2 - -y1", "1/3*i - (2 - q1)"] {
        let e = parse(s).unwrap();
        assert_eq!(parse(&e.to_string()).unwrap(), e, "{s}");
    }
}
