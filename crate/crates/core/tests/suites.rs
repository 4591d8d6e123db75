use hecke_core::residues::{orbit_of, ResidueTuple};
use hecke_core::scalars::{FieldSpec, HeckeFlavor};
use hecke_core::suites::{standard_orbits, verify_relation_suite, SUITES};
use hecke_core::HeckeError;

fn flavors() -> Vec<HeckeFlavor> {
    let q = |f: FieldSpec, v: i64| HeckeFlavor::nondegenerate(f.from_int(v)).unwrap();
    let c3 = FieldSpec::cyclotomic(3).unwrap();
    vec![
        HeckeFlavor::degenerate(FieldSpec::Rationals),
        HeckeFlavor::degenerate(FieldSpec::prime(2).unwrap()),
        HeckeFlavor::degenerate(FieldSpec::prime(3).unwrap()),
        HeckeFlavor::degenerate(FieldSpec::prime(5).unwrap()),
        q(FieldSpec::Rationals, 2),
        q(FieldSpec::prime(5).unwrap(), -1),
        q(FieldSpec::prime(7).unwrap(), 2),
        HeckeFlavor::nondegenerate(c3.zeta().unwrap()).unwrap(),
    ]
}

#[test]
fn every_suite_passes_on_standard_orbits() {
    for fl in flavors() {
        for orbit in standard_orbits(3, fl.e()) {
            for name in SUITES {
                let rep = verify_relation_suite(name, &fl, &orbit, 3, 7).unwrap();
                assert!(
                    rep.passed(),
                    "{} {} {}: {:?}",
                    fl.describe(),
                    orbit,
                    name,
                    rep.failures()
                );
            }
        }
    }
}

fn orbit(e: u64, v: &[i64]) -> hecke_core::residues::Orbit {
    orbit_of(&ResidueTuple::new(e, v.to_vec()).unwrap())
}

#[test]
fn theta_generic_branch_at_e5() {
    let fl = HeckeFlavor::degenerate(FieldSpec::prime(5).unwrap());
    let rep = verify_relation_suite("theta", &fl, &orbit(5, &[0, 2]), 2, 1).unwrap();
    assert!(rep.passed());
    assert!(rep
        .identities
        .iter()
        .any(|v| v.name == "theta^2" && v.branch == "generic"));
}

#[test]
fn klr_braid_defect_at_e2() {
    let fl = HeckeFlavor::nondegenerate(FieldSpec::prime(5).unwrap().from_int(-1)).unwrap();
    let rep = verify_relation_suite("klr", &fl, &orbit(2, &[0, 1, 0]), 2, 1).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures());
    assert!(rep
        .identities
        .iter()
        .any(|v| v.name == "psi3" && v.branch == "plus-one-e2"));
}

#[test]
fn commuting_relations_need_n4() {
    let fl = HeckeFlavor::degenerate(FieldSpec::Rationals);
    let rep3 = verify_relation_suite("hecke", &fl, &orbit(0, &[0, 1, 2]), 1, 1).unwrap();
    assert!(rep3.not_exercised.iter().any(|b| b.name == "T-commute"));
    let rep4 = verify_relation_suite("klr", &fl, &orbit(0, &[0, 0, 1, 1]), 1, 1).unwrap();
    assert!(rep4.passed(), "{:?}", rep4.failures());
    assert!(rep4.identities.iter().any(|v| v.name == "psi-commute"));
}

#[test]
fn deterministic_and_unknown() {
    let fl = HeckeFlavor::nondegenerate(FieldSpec::Rationals.from_int(2)).unwrap();
    let o = orbit(0, &[0, 1]);
    let a = verify_relation_suite("intertwiner", &fl, &o, 4, 9).unwrap();
    let b = verify_relation_suite("intertwiner", &fl, &o, 4, 9).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert!(matches!(
        verify_relation_suite("nope", &fl, &o, 1, 1),
        Err(HeckeError::SuiteUnknown(_))
    ));
}

#[test]
fn orbit_matrix_covers_every_klr_branch() {
    use std::collections::BTreeSet;
    let mut seen = BTreeSet::new();
    let mut expected = BTreeSet::new();
    for fl in flavors() {
        for orbit in standard_orbits(3, fl.e()) {
            let rep = verify_relation_suite("klr", &fl, &orbit, 1, 3).unwrap();
            for b in rep.exercised() {
                seen.insert((b.name.clone(), b.branch.clone()));
            }
            for b in rep.not_exercised {
                expected.insert((b.name, b.branch));
            }
        }
    }
    let missing: Vec<_> = expected
        .into_iter()
        .filter(|b| !seen.contains(b) && b.0 != "psi-commute")
        .collect();
    assert!(missing.is_empty(), "{missing:?}");
}
