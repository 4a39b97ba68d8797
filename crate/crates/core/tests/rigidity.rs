use std::collections::BTreeSet;
use std::sync::Arc;

use kbeta::catalog::{self, CatalogKey};
use kbeta::gca::{PresentationBuilder, QuotientRing};
use kbeta::rigidity::{self, Endomorphism, H1Mode, RigidityError, SolveOptions};

fn ring(key: &CatalogKey, cap: u32) -> Arc<QuotientRing> {
    Arc::new(QuotientRing::new(catalog::load(key).unwrap(), cap))
}

fn solutions(ring: &Arc<QuotientRing>, mode: H1Mode, opts: SolveOptions) -> Vec<Endomorphism> {
    rigidity::solve(ring, &mode, &opts).unwrap().solutions().unwrap()
}

#[test]
fn identity_satisfies_every_constraint() {
    let cases = [(CatalogKey::p33(), 8), (CatalogKey::ppn(3, 4), 8), (CatalogKey::ppn(3, 5), 8), (CatalogKey::ppn(3, 6), 8), (CatalogKey::pp3(5), 14)];
    for (key, cap) in cases {
        let r = ring(&key, cap);
        let id = Endomorphism::identity(&r).unwrap();
        assert_eq!(rigidity::violations(&r, &id, &H1Mode::FixIdentity).unwrap(), Vec::<String>::new(), "{key}");
        assert!(rigidity::surjective_through(&r, &id, cap).unwrap());
    }
}

#[test]
fn found_solutions_satisfy_every_constraint() {
    for key in [CatalogKey::p33(), CatalogKey::ppn(3, 4), CatalogKey::ppn(3, 5)] {
        let r = ring(&key, 8);
        let sols = solutions(&r, H1Mode::FixIdentity, SolveOptions::default());
        assert!(sols.contains(&Endomorphism::identity(&r).unwrap()), "{key}");
        for e in &sols {
            assert!(rigidity::violations(&r, e, &H1Mode::FixIdentity).unwrap().is_empty(), "{key}");
        }
    }
}

#[test]
fn solutions_are_closed_under_composition() {
    let r = ring(&CatalogKey::ppn(3, 4), 8);
    let sols = solutions(&r, H1Mode::FixIdentity, SolveOptions::default());
    let set: BTreeSet<_> = sols.iter().cloned().collect();
    for a in sols.iter().step_by(7) {
        for b in sols.iter().step_by(5) {
            let c = a.compose(&r, b).unwrap();
            assert!(set.contains(&c));
        }
    }
}

#[test]
fn search_order_does_not_change_the_answer() {
    for key in [CatalogKey::p33(), CatalogKey::ppn(3, 4), CatalogKey::ppn(3, 5)] {
        let r = ring(&key, 8);
        let forward = solutions(&r, H1Mode::FixIdentity, SolveOptions::default());
        let backward = solutions(&r, H1Mode::FixIdentity, SolveOptions { reverse_order: true, ..SolveOptions::default() });
        assert_eq!(forward, backward, "{key}");
    }
}

#[test]
fn search_matches_exhaustion_on_a_small_fixture() {
    let pres = PresentationBuilder::new("fixture", 3)
        .generator("y", 1)
        .generator("y'", 1)
        .generator("x", 2)
        .generator("x'", 2)
        .relation("y*y'", "0")
        .relation("x*y'", "x'*y")
        .beta("y", "x")
        .beta("y'", "x'")
        .beta_default("x")
        .beta_default("x'")
        .weak_generators(&["y", "y'"])
        .build()
        .unwrap();
    let r = Arc::new(QuotientRing::new(pres, 4));
    let dim2 = r.dim(2).unwrap();
    for l in rigidity::gl2(3).into_iter().step_by(5) {
        let mode = H1Mode::LinearIso(l);
        let found: BTreeSet<_> = solutions(&r, mode, SolveOptions::default()).into_iter().collect();
        let mut exhaustive = BTreeSet::new();
        let base = found.iter().next().cloned().unwrap_or_else(|| Endomorphism::zero(&r).unwrap());
        for k in 0..3usize.pow(2 * dim2 as u32) {
            let mut e = base.clone();
            let mut kk = k;
            for g in [2, 3] {
                for c in e.coords[g].iter_mut() {
                    *c = (kk % 3) as u8;
                    kk /= 3;
                }
            }
            // weak images come from the mode
            let w = [[l[0][0], l[1][0]], [l[0][1], l[1][1]]];
            e.coords[0] = r.coords_in(&r.presentation().parse(&format!("{}*y + {}*y'", w[0][0], w[0][1])).unwrap(), 1).unwrap();
            e.coords[1] = r.coords_in(&r.presentation().parse(&format!("{}*y + {}*y'", w[1][0], w[1][1])).unwrap(), 1).unwrap();
            if rigidity::violations(&r, &e, &mode).unwrap().is_empty() {
                exhaustive.insert(e);
            }
        }
        assert!(!found.is_empty(), "{l:?}");
        assert_eq!(found, exhaustive, "{l:?}");
    }
}

#[test]
fn weak_generation_scans_all_of_gl2() {
    assert_eq!(rigidity::gl2(3).len(), 48);
    let r = ring(&CatalogKey::p33(), 8);
    let report = rigidity::weak_generation_check(&r, &SolveOptions::default()).unwrap();
    assert_eq!(report.rows.len(), 48);
    assert!(report.passed());
}

#[test]
fn zero_map_is_not_surjective() {
    let r = ring(&CatalogKey::p33(), 8);
    let zero = Endomorphism::zero(&r).unwrap();
    let profile = rigidity::surjectivity_profile(&r, &zero, 3).unwrap();
    assert_eq!(profile[0], (1, 1));
    assert_eq!(profile[1], (0, 2));
    assert!(!rigidity::surjective_through(&r, &zero, 3).unwrap());
}

#[test]
fn errors() {
    let r = ring(&CatalogKey::p33(), 5);
    assert!(matches!(
        rigidity::solve(&r, &H1Mode::FixIdentity, &SolveOptions::default()),
        Err(RigidityError::CapTooSmall { cap: 5, degree: 6 })
    ));
    let r = ring(&CatalogKey::p33(), 8);
    assert!(matches!(
        rigidity::solve(&r, &H1Mode::LinearIso([[1, 1], [1, 1]]), &SolveOptions::default()),
        Err(RigidityError::NotInvertible)
    ));
    assert!(matches!(
        rigidity::solve(&r, &H1Mode::FixIdentity, &SolveOptions { budget: 1, ..SolveOptions::default() }),
        Err(RigidityError::SearchBudgetExceeded { budget: 1 })
    ));
}

#[test]
fn skipped_constraints_are_reported() {
    let r = ring(&CatalogKey::p33(), 8);
    let out = rigidity::solve(&r, &H1Mode::FixIdentity, &SolveOptions::default()).unwrap();
    assert!(out.skipped.iter().any(|s| s.contains("degree 9 above cap 8")));
}
