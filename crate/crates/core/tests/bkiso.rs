use hecke_core::bkiso::{
    bk_check, build_images, check_surjectivity, rho, BKReport, ZERO_BLOCK_NOTE,
};
use hecke_core::cyclo::{compute_idempotents, BuildOptions, CycloAlgebra, CycloParams};
use hecke_core::lusztig::{LusztigContext, LusztigElem};
use hecke_core::residues::{orbit_of, Orbit, ResidueTuple};
use hecke_core::scalars::{FieldSpec, HeckeFlavor};

fn build(fl: &HeckeFlavor, n: usize, lam: &[(i64, u32)]) -> CycloAlgebra {
    let params = CycloParams::new(fl.clone(), n, lam.iter().copied().collect()).unwrap();
    CycloAlgebra::build(params, BuildOptions::default()).unwrap()
}

fn orbit(e: u64, xs: &[i64]) -> Orbit {
    orbit_of(&ResidueTuple::new(e, xs.to_vec()).unwrap())
}

fn run(fl: &HeckeFlavor, n: usize, lam: &[(i64, u32)], xs: &[i64]) -> BKReport {
    let alg = build(fl, n, lam);
    let sys = compute_idempotents(&alg).unwrap();
    bk_check(&alg, &sys, &orbit(fl.e(), xs), 11).unwrap()
}

fn status(rep: &BKReport, relation: &str, branch: &str) -> String {
    rep.verdicts
        .iter()
        .find(|v| v.relation == relation && v.branch == branch)
        .map(|v| v.status.clone())
        .unwrap_or_else(|| "missing".into())
}

fn instances() -> Vec<(HeckeFlavor, usize, Vec<i64>)> {
    let c3 = FieldSpec::cyclotomic(3).unwrap();
    vec![
        (
            HeckeFlavor::degenerate(FieldSpec::prime(2).unwrap()),
            2,
            vec![0, 1],
        ),
        (
            HeckeFlavor::degenerate(FieldSpec::prime(3).unwrap()),
            3,
            vec![0, 1, 2],
        ),
        (
            HeckeFlavor::nondegenerate(c3.zeta().unwrap()).unwrap(),
            2,
            vec![0, 1],
        ),
        (
            HeckeFlavor::nondegenerate(FieldSpec::Rationals.from_int(2)).unwrap(),
            2,
            vec![0, 1],
        ),
    ]
}

#[test]
fn end_to_end_instances_pass() {
    for (fl, n, xs) in instances() {
        let rep = run(&fl, n, &[(0, 1)], &xs);
        assert!(rep.passed(), "{}: {:?}", fl.describe(), rep.failures());
        assert!(rep.block_dim > 0);
        assert_eq!(rep.closure_dim, rep.block_dim);
        for rel in [
            "cyclotomic",
            "surjectivity",
            "psi-routes",
            "ff^{-1}",
            "ideal:y-power",
            "ideal:factorization",
        ] {
            assert_eq!(status(&rep, rel, "-"), "pass", "{} {rel}", fl.describe());
        }
        assert!(rep
            .nilpotency_indices
            .iter()
            .all(|k| k.index <= rep.block_dim));
    }
}

#[test]
fn level_one_block_dimensions_sum_to_group_order() {
    for p in [2, 3] {
        let fl = HeckeFlavor::degenerate(FieldSpec::prime(p).unwrap());
        let alg = build(&fl, 3, &[(0, 1)]);
        let sys = compute_idempotents(&alg).unwrap();
        let total: usize = sys
            .orbits()
            .iter()
            .map(|o| sys.block_dim(&alg, o).unwrap())
            .sum();
        assert_eq!(total, 6);
        let units = sys
            .orbits()
            .iter()
            .fold(hecke_core::cyclo::CycloElem::zero(alg.field()), |acc, o| {
                acc.add(&sys.block_idempotent(o))
            });
        assert_eq!(units, alg.one());
    }
}

#[test]
fn level_two_blocks_and_psi3_branches() {
    let fl = HeckeFlavor::degenerate(FieldSpec::prime(5).unwrap());
    let alg = build(&fl, 3, &[(0, 1), (1, 1)]);
    let sys = compute_idempotents(&alg).unwrap();
    for o in sys.orbits() {
        let rep = bk_check(&alg, &sys, &o, 3).unwrap();
        assert!(rep.passed(), "{o}: {:?}", rep.failures());
    }
    let rep = bk_check(&alg, &sys, &orbit(5, &[0, 1, 0]), 3).unwrap();
    assert!(rep.passed());
    assert_eq!(status(&rep, "psi3", "minus-one"), "pass");
    let rep = bk_check(&alg, &sys, &orbit(5, &[1, 0, 1]), 3).unwrap();
    assert!(rep.passed());
    assert_eq!(status(&rep, "psi3", "plus-one"), "pass");
}

#[test]
fn zero_block_is_reported() {
    let fl = HeckeFlavor::degenerate(FieldSpec::prime(2).unwrap());
    let rep = run(&fl, 2, &[(0, 1)], &[0, 0]);
    assert!(rep.passed());
    assert_eq!(rep.note.as_deref(), Some(ZERO_BLOCK_NOTE));
    assert_eq!(rep.block_dim, 0);
}

#[test]
fn rho_of_generators_matches_direct_images() {
    let fl = HeckeFlavor::nondegenerate(FieldSpec::Rationals.from_int(2)).unwrap();
    let alg = build(&fl, 2, &[(0, 1), (1, 1)]);
    let sys = compute_idempotents(&alg).unwrap();
    let o = orbit(0, &[0, 1]);
    let imgs = build_images(&alg, &sys, &o).unwrap();
    let ctx = LusztigContext::new(fl.clone(), o.clone()).unwrap();
    let ec = sys.block_idempotent(&o);
    for r in 1..=2 {
        let x = rho(&alg, &sys, &LusztigElem::x(&ctx, r)).unwrap();
        assert_eq!(x, alg.mul(&alg.x(r).unwrap(), &ec).unwrap());
        assert_eq!(
            &rho(&alg, &sys, &LusztigElem::y(&ctx, r)).unwrap(),
            imgs.y(r)
        );
    }
    let t = rho(&alg, &sys, &LusztigElem::t(&ctx, 1)).unwrap();
    assert_eq!(t, alg.mul(&alg.t(1).unwrap(), &ec).unwrap());
    let (v, closure, block) = check_surjectivity(&imgs).unwrap();
    assert!(v.residual_zero);
    assert_eq!(closure, block);
}

#[test]
fn reports_are_deterministic() {
    let (fl, n, xs) = instances().remove(1);
    let a = serde_json::to_string(&run(&fl, n, &[(0, 1)], &xs)).unwrap();
    let b = serde_json::to_string(&run(&fl, n, &[(0, 1)], &xs)).unwrap();
    assert_eq!(a, b);
}
