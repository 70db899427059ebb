//! Seeded expression corpus for derivative verification: random
//! polynomial compositions of bounded degree wrapped in each elementary
//! function, with evaluation points kept inside every function's domain.
//! The jet coefficients of each entry are compared against the
//! finite-difference oracle by the test suites.

use crate::expr::{BinOp, Expr};
use crate::carrier::Func;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub label: String,
    pub expr: Expr,
    pub vars: Vec<String>,
    pub point: Vec<f64>,
}

/// Random polynomial of total degree <= `deg` in `m` variables, as an
/// expression tree. Coefficients are scaled by the monomial count so
/// `|p| <= 1` on the unit box; the finite-difference oracle's truncation
/// error at the pinned step sizes stays well under the comparison
/// tolerance only for compositions of this size.
fn random_poly(rng: &mut ChaCha8Rng, m: usize, deg: usize) -> Expr {
    let monomials = crate::jet::multi_indices(m, deg);
    let scale = monomials.len() as f64;
    let mut acc = Expr::literal(rng.random_range(-1.0..1.0));
    for alpha in &monomials[1..] {
        let c: f64 = rng.random_range(-1.0..1.0) / scale;
        let mut term = Expr::literal(c.abs().max(1e-4));
        for (i, &e) in alpha.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let xi = Expr::var(&format!("x{}", i + 1));
            let factor = if e == 1 {
                xi
            } else {
                Expr::binary(BinOp::Pow, xi, Expr::literal(e as f64))
            };
            term = Expr::binary(BinOp::Mul, term, factor);
        }
        acc = if c < 0.0 {
            Expr::binary(BinOp::Sub, acc, term)
        } else {
            Expr::binary(BinOp::Add, acc, term)
        };
    }
    acc
}

fn scaled(e: Expr, s: f64) -> Expr {
    Expr::binary(BinOp::Mul, Expr::literal(s), e)
}

/// `2 + p/4`: strictly positive since the scaled polynomials stay inside
/// `[-1, 1]` on the sampling box, and with high derivatives small enough
/// that the degree-3 difference stencil keeps its accuracy.
fn positive_of(p: Expr) -> Expr {
    Expr::binary(BinOp::Add, Expr::literal(2.0), scaled(p, 0.25))
}

/// Build the verification corpus: `groups` seeds, each contributing a
/// plain polynomial, every elementary function wrapped around a bounded
/// polynomial, a quotient, and two power forms. Points are drawn in
/// `[-0.9, 0.9]^m`.
pub fn build_corpus(seed: u64, groups: usize) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for g in 0..groups {
        let m = 1 + (g % 3); // mix of 1, 2 and 3 variables
        let vars: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
        let point: Vec<f64> = (0..m).map(|_| rng.random_range(-0.9..0.9)).collect();
        let p = random_poly(&mut rng, m, 4);
        let q = random_poly(&mut rng, m, 3);
        let q2 = random_poly(&mut rng, m, 2);

        let mut push = |label: &str, expr: Expr| {
            out.push(CorpusEntry {
                label: format!("{label}#{g}"),
                expr,
                vars: vars.clone(),
                point: point.clone(),
            });
        };

        push("poly", p.clone());
        push("exp", Expr::call(Func::Exp, scaled(p.clone(), 0.4)));
        push("log", Expr::call(Func::Log, positive_of(p.clone())));
        push("sqrt", Expr::call(Func::Sqrt, positive_of(q.clone())));
        push("sin", Expr::call(Func::Sin, scaled(p.clone(), 0.4)));
        push("cos", Expr::call(Func::Cos, scaled(q.clone(), 0.4)));
        push("sinh", Expr::call(Func::Sinh, scaled(p.clone(), 0.4)));
        push("cosh", Expr::call(Func::Cosh, scaled(q.clone(), 0.4)));
        push(
            "div",
            Expr::binary(BinOp::Div, p.clone(), positive_of(q.clone())),
        );
        push(
            "powf",
            Expr::binary(BinOp::Pow, positive_of(p.clone()), Expr::literal(1.7)),
        );
        // Squaring a quadratic keeps the composition inside degree 4,
        // where the degree-3 difference stencil is exact up to roundoff.
        push(
            "powi",
            Expr::binary(BinOp::Pow, q2.clone(), Expr::literal(2.0)),
        );
        push(
            "mix",
            Expr::binary(
                BinOp::Mul,
                Expr::call(Func::Sin, scaled(p, 0.4)),
                Expr::call(Func::Exp, scaled(q, 0.3)),
            ),
        );
    }
    out
}
