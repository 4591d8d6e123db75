use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use hecke_core::bkiso::bk_check;
use hecke_core::cyclo::{
    compute_idempotents, verify_commutation_lemma, verify_ideal_equality, verify_idempotent_system,
    BuildOptions, CycloAlgebra, CycloParams,
};
use hecke_core::report::SuiteReport;
use hecke_core::residues::{orbit_of, Orbit, ResidueTuple};
use hecke_core::scalars::{FieldSpec, HeckeFlavor};
use hecke_core::suites::{standard_orbits, verify_relation_suite};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn deg(f: FieldSpec) -> HeckeFlavor {
    HeckeFlavor::degenerate(f)
}

fn nondeg(f: FieldSpec, q: i64) -> HeckeFlavor {
    HeckeFlavor::nondegenerate(f.from_int(q)).unwrap()
}

fn zeta3() -> HeckeFlavor {
    HeckeFlavor::nondegenerate(FieldSpec::cyclotomic(3).unwrap().zeta().unwrap()).unwrap()
}

fn orbit(e: u64, xs: &[i64]) -> Orbit {
    orbit_of(&ResidueTuple::new(e, xs.to_vec()).unwrap())
}

/// Runs a suite over every (flavor, orbit) pair and demands that all verdicts pass and that every
/// expected branch is hit by at least one run.
fn suite_matrix(name: &str, runs: &[(HeckeFlavor, Vec<Orbit>)], trials: usize) -> Outcome {
    let mut seen = BTreeSet::new();
    let mut expected = BTreeSet::new();
    let mut checks = 0;
    for (fl, orbits) in runs {
        for o in orbits {
            let rep = verify_relation_suite(name, fl, o, trials, 0)
                .map_err(|e| format!("{} {o}: {e}", fl.describe()))?;
            if !rep.passed() {
                return Err(format!("{} {o}: {:?}", fl.describe(), rep.failures()[0]));
            }
            checks += rep.identities.len();
            for b in rep.exercised() {
                expected.insert((b.name.clone(), b.branch.clone()));
                seen.insert((b.name, b.branch));
            }
            for b in rep.not_exercised {
                expected.insert((b.name, b.branch));
            }
        }
    }
    let missing: Vec<_> = expected
        .difference(&seen)
        .map(|(n, b)| format!("{n}/{b}"))
        .collect();
    if missing.is_empty() {
        Ok(format!("{checks} identities, {} branches", seen.len()))
    } else {
        Err(format!("branches never exercised: {}", missing.join(", ")))
    }
}

fn std_runs(flavors: Vec<HeckeFlavor>, n: usize) -> Vec<(HeckeFlavor, Vec<Orbit>)> {
    flavors
        .into_iter()
        .map(|f| {
            let o = standard_orbits(n, f.e());
            (f, o)
        })
        .collect()
}

/// Standard n = 3 orbits plus one n = 4 orbit for the relations between distant generators.
fn with_distant(flavors: Vec<HeckeFlavor>, distant: &[i64]) -> Vec<(HeckeFlavor, Vec<Orbit>)> {
    let mut runs = std_runs(flavors.clone(), 3);
    runs.extend(flavors.into_iter().map(|f| {
        let o = orbit(f.e(), distant);
        (f, vec![o])
    }));
    runs
}

type CycloInstance = (HeckeFlavor, usize, Vec<(i64, u32)>);

fn cyclo_instances() -> Vec<CycloInstance> {
    let mut out = Vec::new();
    for fl in [deg(fp(5)), nondeg(FieldSpec::Rationals, 2)] {
        for (n, lam) in [
            (1, vec![(0, 1), (1, 1)]),
            (2, vec![(0, 1)]),
            (2, vec![(0, 1), (1, 1)]),
            (3, vec![(0, 1)]),
        ] {
            out.push((fl.clone(), n, lam));
        }
    }
    out
}

fn build(fl: &HeckeFlavor, n: usize, lam: &[(i64, u32)]) -> Result<CycloAlgebra, String> {
    let params = CycloParams::new(fl.clone(), n, lam.iter().copied().collect())
        .map_err(|e| e.to_string())?;
    CycloAlgebra::build(params, BuildOptions::default()).map_err(|e| e.to_string())
}

fn describe(fl: &HeckeFlavor, n: usize, lam: &[(i64, u32)]) -> String {
    format!(
        "{} n={n} level={}",
        fl.describe(),
        lam.iter().map(|p| p.1).sum::<u32>()
    )
}

fn require(rep: &SuiteReport, what: &str) -> Result<usize, String> {
    if !rep.passed() {
        return Err(format!("{what}: {:?}", rep.failures()[0]));
    }
    if !rep.not_exercised.is_empty() {
        return Err(format!("{what}: not exercised {:?}", rep.not_exercised));
    }
    Ok(rep.identities.len())
}

fn criterion1() -> Outcome {
    suite_matrix(
        "demazure",
        &std_runs(vec![deg(FieldSpec::Rationals), deg(fp(5))], 3),
        100,
    )
}

fn criterion2() -> Outcome {
    let flavors = vec![deg(fp(3)), nondeg(FieldSpec::Rationals, 2), zeta3()];
    suite_matrix("hecke", &with_distant(flavors, &[0, 1, 0, 1]), 20)
}

fn criterion3() -> Outcome {
    suite_matrix(
        "intertwiner",
        &with_distant(
            vec![deg(fp(5)), nondeg(FieldSpec::Rationals, 2)],
            &[0, 1, 0, 1],
        ),
        20,
    )
}

fn criterion4() -> Outcome {
    let runs = [
        (deg(fp(5)), standard_orbits(2, 5)),
        (deg(fp(2)), standard_orbits(2, 2)),
        (nondeg(FieldSpec::Rationals, 2), standard_orbits(2, 0)),
        (nondeg(fp(5), -1), standard_orbits(2, 2)),
        (nondeg(fp(11), 3), standard_orbits(2, 5)),
    ];
    let deg_runs: Vec<_> = runs
        .iter()
        .filter(|r| r.0.is_degenerate())
        .cloned()
        .collect();
    let nd_runs: Vec<_> = runs
        .iter()
        .filter(|r| !r.0.is_degenerate())
        .cloned()
        .collect();
    let a = suite_matrix("qsym", &deg_runs, 20)?;
    let b = suite_matrix("qsym", &nd_runs, 20)?;
    Ok(format!("degenerate {a}; nondegenerate {b}"))
}

fn criterion5() -> Outcome {
    let a = suite_matrix(
        "theta",
        &with_distant(
            vec![deg(fp(5)), deg(fp(2)), deg(FieldSpec::Rationals)],
            &[0, 1, 0, 1],
        ),
        20,
    )?;
    let b = suite_matrix(
        "theta",
        &with_distant(
            vec![
                nondeg(FieldSpec::Rationals, 2),
                nondeg(fp(5), -1),
                nondeg(fp(11), 3),
            ],
            &[0, 1, 0, 1],
        ),
        20,
    )?;
    Ok(format!("degenerate {a}; nondegenerate {b}"))
}

fn criterion6() -> Outcome {
    let degs = vec![
        deg(FieldSpec::Rationals),
        deg(fp(2)),
        deg(fp(3)),
        deg(fp(5)),
    ];
    let nds = vec![
        nondeg(FieldSpec::Rationals, 2),
        nondeg(fp(5), -1),
        zeta3(),
        nondeg(fp(11), 3),
    ];
    let mut out = Vec::new();
    for flavors in [degs, nds] {
        out.push(suite_matrix(
            "klr",
            &with_distant(flavors, &[0, 0, 1, 1]),
            5,
        )?);
    }
    Ok(format!("degenerate {}; nondegenerate {}", out[0], out[1]))
}

fn criterion7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut dims = Vec::new();
    for (fl, n, lam) in cyclo_instances() {
        let alg = build(&fl, n, &lam)?;
        let name = describe(&fl, n, &lam);
        let expected = alg.params().dimension().unwrap();
        let closure = alg
            .closure_dim(
                &[alg.one()],
                &(1..=n)
                    .flat_map(|r| {
                        let mut g = vec![alg.x(r).unwrap()];
                        if r < n {
                            g.push(alg.t(r).unwrap());
                        }
                        g
                    })
                    .collect::<Vec<_>>(),
            )
            .map_err(|e| e.to_string())?;
        if alg.dim() != expected || closure != expected {
            return Err(format!(
                "{name}: dim {} closure {closure} expected {expected}",
                alg.dim()
            ));
        }
        if !alg
            .check_associativity(30, &mut rng)
            .map_err(|e| e.to_string())?
        {
            return Err(format!("{name}: associativity"));
        }
        dims.push(expected.to_string());
    }
    Ok(format!("dims {}", dims.join(",")))
}

fn criterion8() -> Outcome {
    let mut checks = 0;
    for (fl, n, lam) in cyclo_instances() {
        let alg = build(&fl, n, &lam)?;
        let name = describe(&fl, n, &lam);
        let sys = compute_idempotents(&alg).map_err(|e| format!("{name}: {e}"))?;
        checks += require(
            &verify_idempotent_system(&alg, &sys).map_err(|e| e.to_string())?,
            &format!("{name} idempotents"),
        )?;
        let rep = verify_commutation_lemma(&alg, &sys).map_err(|e| e.to_string())?;
        if !rep.passed() {
            return Err(format!("{name} commutation: {:?}", rep.failures()[0]));
        }
        checks += rep.identities.len();
    }
    Ok(format!("{checks} identities"))
}

fn bk_instances() -> Vec<(HeckeFlavor, usize, Vec<i64>)> {
    vec![
        (deg(fp(2)), 2, vec![0, 1]),
        (deg(fp(3)), 3, vec![0, 1, 2]),
        (zeta3(), 2, vec![0, 1]),
        (nondeg(FieldSpec::Rationals, 2), 2, vec![0, 1]),
    ]
}

fn criterion9() -> Outcome {
    let mut parts = Vec::new();
    for (fl, n, xs) in bk_instances() {
        let alg = build(&fl, n, &[(0, 1)])?;
        let sys = compute_idempotents(&alg).map_err(|e| e.to_string())?;
        let rep = bk_check(&alg, &sys, &orbit(fl.e(), &xs), 0).map_err(|e| e.to_string())?;
        if !rep.passed() {
            return Err(format!("{}: {:?}", fl.describe(), rep.failures()));
        }
        if rep.closure_dim != rep.block_dim {
            return Err(format!(
                "{}: closure {} block {}",
                fl.describe(),
                rep.closure_dim,
                rep.block_dim
            ));
        }
        parts.push(format!("{} block {}", fl.describe(), rep.block_dim));
    }
    Ok(parts.join("; "))
}

fn criterion10() -> Outcome {
    let mut checks = 0;
    for (fl, n, xs) in bk_instances() {
        let alg = build(&fl, n, &[(0, 1)])?;
        let sys = compute_idempotents(&alg).map_err(|e| e.to_string())?;
        let rep =
            verify_ideal_equality(&alg, &sys, &orbit(fl.e(), &xs)).map_err(|e| e.to_string())?;
        checks += require(&rep, &fl.describe())?;
    }
    Ok(format!("{checks} identities"))
}

fn criterion11() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_hecke");
    let commands: [&[&str]; 4] = [
        &["verify", "--field", "fp:3", "--n", "3", "--seed", "5"],
        &[
            "verify",
            "--case",
            "nondegenerate",
            "--field",
            "rat",
            "--q",
            "2",
            "--n",
            "3",
            "--seed",
            "5",
            "--jobs",
            "4",
        ],
        &[
            "bk-check", "--field", "fp:3", "--n", "3", "--lambda", "0:1", "--orbit", "0,1,2",
            "--seed", "5",
        ],
        &["selftest", "--seed", "5"],
    ];
    let mut bytes = 0;
    for args in commands {
        let run = || {
            Command::new(bin)
                .args(args)
                .env_remove("HECKE_FUEL")
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        if a.status.code() != Some(0) || a.stdout.is_empty() {
            return Err(format!("{args:?} exit {:?}", a.status.code()));
        }
        if a.stdout != b.stdout {
            return Err(format!("{args:?} output differs between runs"));
        }
        bytes += a.stdout.len();
    }
    Ok(format!("{bytes} bytes identical across runs"))
}

fn main() {
    let criteria: [(fn() -> Outcome, u64); 11] = [
        (criterion1, 5),
        (criterion2, 10),
        (criterion3, 30),
        (criterion4, 30),
        (criterion5, 60),
        (criterion6, 300),
        (criterion7, 120),
        (criterion8, 120),
        (criterion9, 300),
        (criterion10, 30),
        (criterion11, 300),
    ];
    let mut failed = 0;
    for (k, (f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > Duration::from_secs(*budget) => {
                Err(format!("{msg}; over {budget}s budget"))
            }
            other => other,
        };
        match outcome {
            Ok(msg) => println!(
                "criterion {}: PASS ({:.2}s) {msg}",
                k + 1,
                took.as_secs_f64()
            ),
            Err(msg) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL ({:.2}s) {msg}",
                    k + 1,
                    took.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
