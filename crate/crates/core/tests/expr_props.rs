//! Property tests for the expression language: print/parse round trips,
//! precedence pins, and evaluation coherence between carriers.

use grwlab_core::carrier::{Func, JetShape};
use grwlab_core::expr::{eval, eval_f64, parse, BinOp, Expr};
use grwlab_core::jet::Jet;
use proptest::prelude::*;

fn literal_strategy() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..1000).prop_map(|n| Expr::literal(n as f64)),
        (0.0f64..100.0).prop_map(Expr::literal),
    ]
}

fn var_strategy() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::var("t")),
        Just(Expr::var("x1")),
        Just(Expr::var("x2")),
    ]
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![literal_strategy(), var_strategy()];
    leaf.prop_recursive(4, 48, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::binary(BinOp::Add, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::binary(BinOp::Sub, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::binary(BinOp::Mul, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::binary(BinOp::Div, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::binary(BinOp::Pow, a, b)),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (
                prop_oneof![
                    Just(Func::Exp),
                    Just(Func::Log),
                    Just(Func::Sqrt),
                    Just(Func::Sin),
                    Just(Func::Cos),
                    Just(Func::Sinh),
                    Just(Func::Cosh)
                ],
                inner
            )
                .prop_map(|(f, a)| Expr::call(f, a)),
        ]
    })
}

proptest! {
    /// Printing any tree and reparsing yields a structurally identical
    /// tree.
    #[test]
    fn print_parse_round_trip(e in expr_strategy()) {
        let printed = e.to_string();
        let reparsed = parse(&printed)
            .unwrap_or_else(|err| panic!("`{printed}` failed to reparse: {err}"));
        prop_assert_eq!(e, reparsed);
    }

    /// Jet evaluation's scalar part equals plain evaluation exactly,
    /// whenever both succeed.
    #[test]
    fn carriers_agree_on_scalar_part(
        e in expr_strategy(),
        t in -2.0f64..2.0,
        x1 in -2.0f64..2.0,
        x2 in -2.0f64..2.0,
    ) {
        let env_f = [("t", t), ("x1", x1), ("x2", x2)];
        let plain = eval_f64(&e, &env_f);
        let coords = Jet::coordinates(&[t, x1, x2], 2);
        let env_j = [
            ("t", coords[0].clone()),
            ("x1", coords[1].clone()),
            ("x2", coords[2].clone()),
        ];
        let jet = eval(&e, &env_j, &JetShape { nvars: 3, order: 2 });
        // Jets have smaller domains than plain values (a power with a
        // variable exponent needs a positive base for its derivatives),
        // so only both-defined outcomes are compared — and then exactly.
        if let (Ok(p), Ok(j)) = (plain, jet) {
            prop_assert_eq!(p, j.value());
        }
    }
}

#[test]
fn spec_precedence_pins() {
    assert_eq!(eval_f64(&parse("2+3*4").unwrap(), &[]).unwrap(), 14.0);
    assert_eq!(eval_f64(&parse("2^3^2").unwrap(), &[]).unwrap(), 512.0);
}
