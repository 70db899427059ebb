//! Jet coefficients against the central-difference oracle on the seeded
//! expression corpus, plus the algebraic jet properties (commutativity,
//! associativity, constant flatness, carrier coherence).

use grwlab_core::carrier::JetShape;
use grwlab_core::corpus::build_corpus;
use grwlab_core::expr::{eval, eval_f64};
use grwlab_core::fd::fd_derivative;
use grwlab_core::jet::{multi_indices, Jet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Mixed absolute/relative agreement: differences below
/// `tol * max(1, |a|, |b|)`.
fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn corpus_jets_match_finite_differences() {
    let corpus = build_corpus(2024, 17);
    assert!(corpus.len() >= 200);
    let mut checked = 0usize;
    for entry in &corpus {
        let m = entry.vars.len();
        let jets = Jet::coordinates(&entry.point, 3);
        let env: Vec<(&str, Jet)> = entry
            .vars
            .iter()
            .zip(&jets)
            .map(|(n, j)| (n.as_str(), j.clone()))
            .collect();
        let shape = JetShape { nvars: m, order: 3 };
        let jet = eval(&entry.expr, &env, &shape)
            .unwrap_or_else(|e| panic!("{}: {e}", entry.label));

        let expr = entry.expr.clone();
        let vars = entry.vars.clone();
        let field = move |x: &[f64]| {
            let env: Vec<(&str, f64)> = vars.iter().zip(x).map(|(n, &v)| (n.as_str(), v)).collect();
            eval_f64(&expr, &env)
        };
        for idx in multi_indices(m, 3) {
            let deg: usize = idx.iter().map(|&e| e as usize).sum();
            if deg == 0 {
                continue;
            }
            let h = if deg <= 2 { 1e-3 } else { 1e-2 };
            let fd = fd_derivative(&field, &entry.point, &idx, h)
                .unwrap_or_else(|e| panic!("{} fd {idx:?}: {e}", entry.label));
            let jv = jet.derivative_value(&idx);
            assert!(
                close(jv, fd, 1e-4),
                "{} d{idx:?}: jet {jv} vs fd {fd}",
                entry.label
            );
            checked += 1;
        }
    }
    assert!(checked > 1000, "checked {checked} coefficients");
}

#[test]
fn carrier_coherence_scalar_part_is_exact() {
    for entry in build_corpus(99, 17) {
        let m = entry.vars.len();
        let jets = Jet::coordinates(&entry.point, 2);
        let env_j: Vec<(&str, Jet)> = entry
            .vars
            .iter()
            .zip(&jets)
            .map(|(n, j)| (n.as_str(), j.clone()))
            .collect();
        let env_f: Vec<(&str, f64)> = entry
            .vars
            .iter()
            .zip(&entry.point)
            .map(|(n, &v)| (n.as_str(), v))
            .collect();
        let shape = JetShape { nvars: m, order: 2 };
        let jet = eval(&entry.expr, &env_j, &shape).unwrap();
        let plain = eval_f64(&entry.expr, &env_f).unwrap();
        assert_eq!(jet.value(), plain, "{}: scalar parts must be bitwise equal", entry.label);
    }
}

#[test]
fn jet_ring_laws_within_reassociation_tolerance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let m = rng.random_range(1..=3usize);
        let point: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let coords = Jet::coordinates(&point, 3);
        let mk = |rng: &mut ChaCha8Rng, coords: &[Jet]| {
            let mut acc = coords[0].constant_like(rng.random_range(-1.0..1.0));
            for c in coords {
                let w: f64 = rng.random_range(-1.0..1.0);
                acc = acc.add_jet(&c.scale(w)).mul_jet(&c.plus(2.0)).scale(0.5);
            }
            acc
        };
        let a = mk(&mut rng, &coords);
        let b = mk(&mut rng, &coords);
        let c = mk(&mut rng, &coords);

        let ab = a.add_jet(&b);
        let ba = b.add_jet(&a);
        assert_eq!(ab, ba, "addition is commutative coefficient-wise");

        let left = a.add_jet(&b).add_jet(&c);
        let right = a.add_jet(&b.add_jet(&c));
        for (x, y) in left.coeffs().iter().zip(right.coeffs()) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1e-300));
        }

        let mul_lr = a.mul_jet(&b);
        let mul_rl = b.mul_jet(&a);
        for (x, y) in mul_lr.coeffs().iter().zip(mul_rl.coeffs()) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1e-300));
        }

        let assoc_l = a.mul_jet(&b).mul_jet(&c);
        let assoc_r = a.mul_jet(&b.mul_jet(&c));
        for (x, y) in assoc_l.coeffs().iter().zip(assoc_r.coeffs()) {
            assert!(
                (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0),
                "mul associativity: {x} vs {y}"
            );
        }
    }
}

#[test]
fn constants_stay_flat_through_lifting() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let v: f64 = rng.random_range(-10.0..10.0);
        let c = Jet::constant(3, 3, v);
        assert!(c.coeffs()[1..].iter().all(|&x| x == 0.0));
        let e = c.exp().unwrap();
        assert!(e.coeffs()[1..].iter().all(|&x| x == 0.0));
        assert_eq!(e.value(), v.exp());
    }
}
