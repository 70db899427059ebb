//! Theorem hypothesis/conclusion checkers on the fixture fleet.
#![allow(clippy::needless_range_loop)]

mod common;

use common::{grid_sample, random_sample, random_times};
use grwlab_core::catalog::{all_entries, fixture_hypersurfaces, make_named, FixtureKind};
use grwlab_core::theorems::{
    angle_bound_check, bounded_future_check, log_concavity_hypotheses, nonexistence_hypotheses,
    run_theorem, slice_classifier, support_conclusion, thm2_bound, ConditionStatus, SliceVerdict,
};
use grwlab_core::{parse, GraphHypersurface};

#[test]
fn bound_table_is_exact() {
    let expected = [(2, 0.0), (3, 3.0), (4, 8.0)];
    for (m, want) in expected {
        assert_eq!(thm2_bound(m), want);
    }
    for m in 2..=16 {
        assert_eq!(thm2_bound(m), (m * (m - 2)) as f64);
    }
}

#[test]
fn slice_classifier_agrees_with_itself() {
    for entry in all_entries(2).unwrap() {
        for fixture in fixture_hypersurfaces(&entry, 42).unwrap() {
            let sample = grid_sample(&entry, 4);
            let verdict = slice_classifier(&fixture.hypersurface, &sample).unwrap();
            match fixture.kind {
                FixtureKind::Slice { t0 } => match verdict {
                    SliceVerdict::IsSlice { t0: found } => {
                        assert!((found - t0).abs() < 1e-12)
                    }
                    other => panic!("{} {}: {other:?}", entry.name, fixture.name),
                },
                FixtureKind::Hyperplane => {
                    assert!(matches!(verdict, SliceVerdict::IsSlice { .. }))
                }
                _ => assert!(
                    matches!(verdict, SliceVerdict::NotSlice { .. }),
                    "{} {} misclassified",
                    entry.name,
                    fixture.name
                ),
            }
        }
    }
}

#[test]
fn tilted_graph_is_not_a_slice() {
    let entry = make_named("minkowski", 2, None).unwrap();
    let mh = GraphHypersurface::new(entry.spacetime.clone(), parse("0.5 * x1").unwrap()).unwrap();
    let sample = grid_sample(&entry, 4);
    match slice_classifier(&mh, &sample).unwrap() {
        SliceVerdict::NotSlice { sinh2, .. } => {
            assert!((sinh2 - 1.0 / 3.0).abs() < 1e-12)
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn support_conclusion_on_fixtures() {
    // Slices and the Minkowski hyperboloid satisfy the conclusion
    // exactly; a tilted steady-state graph fails it with a witness.
    for entry in all_entries(2).unwrap() {
        for fixture in fixture_hypersurfaces(&entry, 42).unwrap() {
            if !fixture.exact_cmc() {
                continue;
            }
            let sample = grid_sample(&entry, 4);
            let report = support_conclusion(&fixture.hypersurface, &sample).unwrap();
            assert!(
                matches!(report.conditions[0].status, ConditionStatus::HoldsOnSample),
                "{} {}: {:?}",
                entry.name,
                fixture.name,
                report.conditions[0]
            );
        }
    }

    let entry = make_named("steady_state", 2, None).unwrap();
    let mh = GraphHypersurface::new(entry.spacetime.clone(), parse("0.3 * x1").unwrap()).unwrap();
    let sample = grid_sample(&entry, 5);
    let report = support_conclusion(&mh, &sample).unwrap();
    match &report.conditions[0].status {
        ConditionStatus::FailsAt { value, .. } => {
            // At the origin the product is sinh^2 phi = 0.09/0.91; the
            // sampled maximum is at least that.
            assert!(*value >= 0.09 - 1e-6, "value {value}");
        }
        other => panic!("expected witness, got {other:?}"),
    }
}

#[test]
fn nonexistence_hypotheses_on_eds_slices() {
    // Every Einstein-de Sitter slice has H = rho'/rho > 0, so the sign
    // condition fails with a witness at every slice time.
    let entry = make_named("einstein_de_sitter", 2, None).unwrap();
    for fixture in fixture_hypersurfaces(&entry, 42).unwrap() {
        if !matches!(fixture.kind, FixtureKind::Slice { .. }) {
            continue;
        }
        let sample = grid_sample(&entry, 3);
        let report = nonexistence_hypotheses(&fixture.hypersurface, &sample).unwrap();
        let sign = report
            .conditions
            .iter()
            .find(|c| c.name.starts_with("H *"))
            .unwrap();
        assert!(
            matches!(sign.status, ConditionStatus::FailsAt { .. }),
            "{}: {sign:?}",
            fixture.name
        );
        // The volume-growth condition is never decided from a sample.
        assert!(report
            .conditions
            .iter()
            .any(|c| c.status == ConditionStatus::NotCheckable));
    }
}

#[test]
fn hyperboloid_hypotheses() {
    // H = 1, rho' = 0: the sign condition holds and the infimum estimate
    // is zero, so the second hypothesis fails (consistent with the
    // hyperboloid existing).
    let entry = make_named("minkowski", 2, None).unwrap();
    let fleet = fixture_hypersurfaces(&entry, 42).unwrap();
    let hyper = fleet
        .iter()
        .find(|f| f.kind == FixtureKind::Hyperboloid)
        .unwrap();
    let sample = grid_sample(&entry, 4);
    let report = nonexistence_hypotheses(&hyper.hypersurface, &sample).unwrap();
    let sign = &report
        .conditions
        .iter()
        .find(|c| c.name.starts_with("H *"))
        .unwrap()
        .status;
    assert_eq!(*sign, ConditionStatus::HoldsOnSample);
    let inf = &report
        .conditions
        .iter()
        .find(|c| c.name.starts_with("inf"))
        .unwrap()
        .status;
    assert!(matches!(inf, ConditionStatus::FailsAt { .. }));
}

#[test]
fn angle_bound_vacuous_or_satisfied_on_fixtures() {
    for entry in all_entries(2).unwrap() {
        for fixture in fixture_hypersurfaces(&entry, 42).unwrap() {
            let sample = random_sample(&entry, 30, 77);
            let report = angle_bound_check(&fixture.hypersurface, &sample).unwrap();
            let bound = &report.conditions[0].status;
            assert!(
                !matches!(bound, ConditionStatus::FailsAt { .. }),
                "{} {}: false violation {report:?}",
                entry.name,
                fixture.name
            );
        }
    }
}

#[test]
fn log_concavity_hypotheses_catalog() {
    // Steady state and Einstein-de Sitter satisfy both spacetime
    // hypotheses; a cosh warp fails log-concavity with a witness.
    for name in ["steady_state", "einstein_de_sitter"] {
        let entry = make_named(name, 2, None).unwrap();
        let report = log_concavity_hypotheses(
            &entry.spacetime,
            &random_times(&entry, 20, 81),
            &random_sample(&entry, 5, 82),
            None,
        )
        .unwrap();
        for c in &report.conditions {
            assert!(
                !matches!(c.status, ConditionStatus::FailsAt { .. }),
                "{name}: {c:?}"
            );
        }
    }

    let cosh_warp = grwlab_core::Spacetime::new(
        grwlab_core::WarpFunction::new(
            parse("cosh(t)").unwrap(),
            f64::NEG_INFINITY,
            f64::INFINITY,
        )
        .unwrap(),
        grwlab_core::FiberMetric::euclidean(2).unwrap(),
    );
    let report = log_concavity_hypotheses(
        &cosh_warp,
        &[-0.5, 0.0, 0.5],
        &[vec![0.1, 0.1]],
        None,
    )
    .unwrap();
    let log_cond = report
        .conditions
        .iter()
        .find(|c| c.name.starts_with("(log"))
        .unwrap();
    assert!(
        matches!(log_cond.status, ConditionStatus::FailsAt { .. }),
        "{log_cond:?}"
    );
}

#[test]
fn bounded_future_trend_detection() {
    let entry = make_named("steady_state", 2, None).unwrap();
    let grows =
        GraphHypersurface::new(entry.spacetime.clone(), parse("x1^2 + x2^2").unwrap()).unwrap();
    let sample = grid_sample(&entry, 5);
    let report = bounded_future_check(&grows, &sample).unwrap();
    assert!(
        report.notes.iter().any(|n| n.contains("unbounded-trend")),
        "{report:?}"
    );

    let bounded =
        GraphHypersurface::new(entry.spacetime.clone(), parse("2 + sin(x1)").unwrap()).unwrap();
    let report = bounded_future_check(&bounded, &sample).unwrap();
    let max_note = &report.notes[0];
    let max_tau: f64 = max_note.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(max_tau <= 3.0 + 1e-12, "{max_note}");
    // A flat slice shows no trend at all.
    let slice = GraphHypersurface::new(entry.spacetime.clone(), parse("0.25").unwrap()).unwrap();
    let report = bounded_future_check(&slice, &sample).unwrap();
    assert!(!report.notes.iter().any(|n| n.contains("unbounded-trend")));
}

#[test]
fn theorem_dispatch_covers_all_ids() {
    let entry = make_named("steady_state", 2, None).unwrap();
    let fleet = fixture_hypersurfaces(&entry, 42).unwrap();
    let slice = &fleet[0];
    let sample = grid_sample(&entry, 3);
    let t_sample = random_times(&entry, 5, 83);
    let x_sample = random_sample(&entry, 3, 84);
    for id in grwlab_core::theorems::THEOREM_IDS {
        let report = run_theorem(id, &slice.hypersurface, &sample, &t_sample, &x_sample)
            .unwrap_or_else(|e| panic!("{id}: {e}"));
        assert_eq!(&report.theorem, id);
        assert!(!report.conditions.is_empty());
    }
    assert!(run_theorem("teo9", &slice.hypersurface, &sample, &t_sample, &x_sample).is_err());
}
