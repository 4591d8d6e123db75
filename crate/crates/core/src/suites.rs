//! Named relation suites over the Lusztig extension.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{HeckeError, Result};
use crate::lusztig::{
    braid_defect_table_y, psi_sq_table_y, q_factor, q_factor_inv, qq_table_y, theta_sq_table_y,
    y_to_x, LusztigContext, LusztigElem,
};
use crate::polyrat::{MultiPoly, RatFunc};
use crate::report::{IdentityVerdict, SuiteParams, SuiteReport};
use crate::residues::{residue_gap, Gap, Orbit, ResidueTuple};
use crate::scalars::HeckeFlavor;
use crate::symgroup::Perm;

pub const SUITES: [&str; 6] = ["demazure", "hecke", "intertwiner", "qsym", "theta", "klr"];

type Job = Box<dyn Fn() -> Result<Vec<IdentityVerdict>> + Send + Sync>;

fn verdict(name: &str, branch: &str, instance: String, residual: &LusztigElem) -> IdentityVerdict {
    IdentityVerdict::new(name, branch, instance, residual.is_zero())
        .with_residual(residual.to_string())
}

fn rf_verdict(name: &str, branch: &str, instance: String, residual: &RatFunc) -> IdentityVerdict {
    IdentityVerdict::new(name, branch, instance, residual.is_zero())
        .with_residual(residual.to_string())
}

fn ri(r: usize, i: &ResidueTuple) -> String {
    format!("r={r},i=({i})")
}

pub fn suite_params(flavor: &HeckeFlavor, orbit: &Orbit, trials: usize, seed: u64) -> SuiteParams {
    SuiteParams {
        flavor: if flavor.is_degenerate() {
            "degenerate".into()
        } else {
            "nondegenerate".into()
        },
        field: flavor.field().to_string(),
        q: flavor.q().map(|q| q.to_string()),
        e: flavor.e(),
        n: orbit.n(),
        orbit: orbit.members().iter().map(|m| m.to_string()).collect(),
        trials,
        seed,
    }
}

/// Runs one named suite; independent identities fan out over the rayon pool.
pub fn verify_relation_suite(
    name: &str,
    flavor: &HeckeFlavor,
    orbit: &Orbit,
    trials: usize,
    seed: u64,
) -> Result<SuiteReport> {
    let n = orbit.n();
    if n == 0 || n > 4 {
        return Err(HeckeError::InvalidInput(format!(
            "relation suites need 1 <= n <= 4, got {n}"
        )));
    }
    let ctx = LusztigContext::new(flavor.clone(), orbit.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = flavor.field();
    let mut samples: Vec<RatFunc> = Vec::new();
    for _ in 0..trials {
        let mut p = MultiPoly::random(field, n, 3, 4, &mut rng);
        while p.is_zero() {
            p = MultiPoly::random(field, n, 3, 4, &mut rng);
        }
        samples.push(RatFunc::from_poly(p));
    }
    let sample_text: Vec<String> = samples.iter().map(|f| f.to_string()).collect();
    let samples = Arc::new(samples);
    let (jobs, expected): (Vec<Job>, Vec<(&str, &str)>) = match name {
        "demazure" => demazure_jobs(n, samples.clone()),
        "hecke" => hecke_jobs(&ctx),
        "intertwiner" => intertwiner_jobs(&ctx, samples.clone()),
        "qsym" => qsym_jobs(&ctx),
        "theta" => theta_jobs(&ctx, samples.clone()),
        "klr" => klr_jobs(&ctx, samples.clone()),
        other => return Err(HeckeError::SuiteUnknown(other.to_string())),
    };
    let results: Vec<Vec<IdentityVerdict>> =
        jobs.par_iter().map(|j| j()).collect::<Result<Vec<_>>>()?;
    let report = SuiteReport {
        suite: name.to_string(),
        params: suite_params(flavor, orbit, trials, seed),
        identities: results.into_iter().flatten().collect(),
        not_exercised: Vec::new(),
        sample: sample_text,
    };
    Ok(report.finish(&expected))
}

fn pairs_far(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 1..n {
        for s in r + 2..n {
            out.push((r, s));
        }
    }
    out
}

fn demazure_jobs(
    n: usize,
    samples: Arc<Vec<RatFunc>>,
) -> (Vec<Job>, Vec<(&'static str, &'static str)>) {
    let mut jobs: Vec<Job> = Vec::new();
    for r in 1..n {
        let samples = samples.clone();
        jobs.push(Box::new(move || {
            let mut fails = [None, None, None, None];
            for (k, f) in samples.iter().enumerate() {
                let g = &samples[(k + 1) % samples.len()];
                let d = f.demazure(r)?;
                let leib = f
                    .mul(g)
                    .demazure(r)?
                    .sub(&d.mul(g).add(&f.swap_vars(r).mul(&g.demazure(r)?)));
                let checks = [
                    leib,
                    d.swap_vars(r).sub(&d),
                    f.swap_vars(r).demazure(r)?.add(&d),
                    d.demazure(r)?,
                ];
                for (slot, c) in fails.iter_mut().zip(checks) {
                    if slot.is_none() && !c.is_zero() {
                        *slot = Some(format!("sample {k}: {c}"));
                    }
                }
            }
            let names = [
                "leibniz",
                "sigma-demazure",
                "demazure-sigma",
                "demazure-square",
            ];
            Ok(names
                .iter()
                .zip(fails)
                .map(|(nm, fail)| {
                    let mut v = IdentityVerdict::new(
                        nm,
                        "-",
                        format!("r={r},trials={}", samples.len()),
                        fail.is_none(),
                    );
                    v.residual = fail;
                    v
                })
                .collect())
        }));
    }
    (
        jobs,
        vec![
            ("leibniz", "-"),
            ("sigma-demazure", "-"),
            ("demazure-sigma", "-"),
            ("demazure-square", "-"),
        ],
    )
}

/// Explicit `T_r X_s - s_r(X_s) T_r` coefficient.
fn tx_correction(ctx: &LusztigContext, r: usize, s: usize) -> RatFunc {
    let field = ctx.field();
    let n = ctx.n();
    let sign = if s == r {
        -1
    } else if s == r + 1 {
        1
    } else {
        0
    };
    let base = RatFunc::constant(n, field.from_int(sign));
    match ctx.flavor().q() {
        None => base,
        Some(q) => base.mul(&ctx.var(r + 1)).scale(&(q - &field.one())),
    }
}

fn explicit_correction(ctx: &LusztigContext, r: usize) -> RatFunc {
    let field = ctx.field();
    let n = ctx.n();
    let diff = RatFunc::var(field, n, r).sub(&RatFunc::var(field, n, r + 1));
    let num = match ctx.flavor().q() {
        None => RatFunc::one(field, n),
        Some(q) => RatFunc::var(field, n, r + 1).scale(&(q - &field.one())),
    };
    num.div(&diff).unwrap()
}

fn quadratic_rhs(ctx: &Arc<LusztigContext>, r: usize) -> LusztigElem {
    match ctx.flavor().q() {
        None => LusztigElem::one(ctx),
        Some(q) => LusztigElem::t(ctx, r)
            .scale(&(q - &ctx.field().one()))
            .add(&LusztigElem::one(ctx).scale(q)),
    }
}

fn hecke_jobs(ctx: &Arc<LusztigContext>) -> (Vec<Job>, Vec<(&'static str, &'static str)>) {
    let n = ctx.n();
    let mut jobs: Vec<Job> = Vec::new();
    let c = ctx.clone();
    jobs.push(Box::new(move || {
        let mut out = Vec::new();
        for r in 1..=n {
            for s in r + 1..=n {
                let a = LusztigElem::x(&c, r).mul(&LusztigElem::x(&c, s))?;
                let b = LusztigElem::x(&c, s).mul(&LusztigElem::x(&c, r))?;
                out.push(verdict(
                    "X-commute",
                    "-",
                    format!("r={r},s={s}"),
                    &a.sub(&b),
                ));
            }
            if !c.flavor().is_degenerate() {
                let a = LusztigElem::x(&c, r).mul(&LusztigElem::x_inv(&c, r))?;
                let b = LusztigElem::x_inv(&c, r).mul(&LusztigElem::x(&c, r))?;
                let one = LusztigElem::one(&c);
                out.push(verdict(
                    "X-inverse",
                    "-",
                    format!("r={r}"),
                    &a.sub(&one).add(&b.sub(&one)),
                ));
            }
        }
        Ok(out)
    }));
    for r in 1..n {
        let c = ctx.clone();
        jobs.push(Box::new(move || {
            let mut out = Vec::new();
            let t = LusztigElem::t(&c, r);
            let sr = Perm::simple(c.n(), r);
            for s in 1..=c.n() {
                let lhs = t.mul(&LusztigElem::x(&c, s))?;
                let rhs = LusztigElem::x(&c, sr.apply(s))
                    .mul(&t)?
                    .add(&LusztigElem::coeff(&c, &tx_correction(&c, r, s)));
                out.push(verdict("TX", "-", format!("r={r},s={s}"), &lhs.sub(&rhs)));
            }
            out.push(verdict(
                "T-quadratic",
                "-",
                format!("r={r}"),
                &t.mul(&t)?.sub(&quadratic_rhs(&c, r)),
            ));
            if let Some(q) = c.flavor().q() {
                let txt = t.mul(&LusztigElem::x(&c, r))?.mul(&t)?;
                out.push(verdict(
                    "TXT",
                    "-",
                    format!("r={r}"),
                    &txt.sub(&LusztigElem::x(&c, r + 1).scale(q)),
                ));
            }
            let sample = LusztigElem::x(&c, 1)
                .add(&t)
                .mul(&LusztigElem::kappa(&c, r))?;
            out.push(verdict(
                "right-T-routes",
                "-",
                format!("r={r}"),
                &sample.mul(&t)?.sub(&sample.mul_right_t(r)),
            ));
            let corr = explicit_correction(&c, r);
            for i in c.orbit().members() {
                let si = i.swap(r);
                let lhs = t.mul(&LusztigElem::eps(&c, i)?)?;
                let ei = LusztigElem::eps(&c, i)?;
                let esi = LusztigElem::eps(&c, &si)?;
                let rhs = esi
                    .mul(&t)?
                    .add(&LusztigElem::coeff(&c, &corr).mul(&esi.sub(&ei))?);
                let branch = if c.flavor().is_degenerate() {
                    "degenerate"
                } else {
                    "nondegenerate"
                };
                out.push(verdict("Tepsilon", branch, ri(r, i), &lhs.sub(&rhs)));
            }
            Ok(out)
        }));
    }
    for (r, s) in pairs_far(n) {
        let c = ctx.clone();
        jobs.push(Box::new(move || {
            let a = LusztigElem::t(&c, r).mul(&LusztigElem::t(&c, s))?;
            let b = LusztigElem::t(&c, s).mul(&LusztigElem::t(&c, r))?;
            Ok(vec![verdict(
                "T-commute",
                "-",
                format!("r={r},s={s}"),
                &a.sub(&b),
            )])
        }));
    }
    for r in 1..n.saturating_sub(1) {
        let c = ctx.clone();
        jobs.push(Box::new(move || {
            let (a, b) = (LusztigElem::t(&c, r), LusztigElem::t(&c, r + 1));
            let lhs = a.mul(&b)?.mul(&a)?;
            let rhs = b.mul(&a)?.mul(&b)?;
            Ok(vec![verdict(
                "T-braid",
                "-",
                format!("r={r}"),
                &lhs.sub(&rhs),
            )])
        }));
    }
    let c = ctx.clone();
    jobs.push(Box::new(move || {
        let mut out = Vec::new();
        for i in c.orbit().members() {
            let ei = LusztigElem::eps(&c, i)?;
            for j in c.orbit().members() {
                let ej = LusztigElem::eps(&c, j)?;
                let expect = if i == j {
                    ei.clone()
                } else {
                    LusztigElem::zero(&c)
                };
                out.push(verdict(
                    "epsilon",
                    "-",
                    format!("i=({i}),j=({j})"),
                    &ei.mul(&ej)?.sub(&expect),
                ));
            }
            for r in 1..=c.n() {
                let x = LusztigElem::x(&c, r);
                out.push(verdict(
                    "Xepsilon",
                    "-",
                    ri(r, i),
                    &x.mul(&ei)?.sub(&ei.mul(&x)?),
                ));
            }
        }
        Ok(out)
    }));
    let mut expected = vec![
        ("X-commute", "-"),
        ("TX", "-"),
        ("T-quadratic", "-"),
        ("T-commute", "-"),
        ("T-braid", "-"),
    ];
    expected.push((
        "Tepsilon",
        if ctx.flavor().is_degenerate() {
            "degenerate"
        } else {
            "nondegenerate"
        },
    ));
    (jobs, expected)
}

fn kappa_sq_rhs(ctx: &Arc<LusztigContext>, r: usize) -> LusztigElem {
    let field = ctx.field();
    let n = ctx.n();
    let (xr, xs) = (ctx.var(r), ctx.var(r + 1));
    let d2 = xr.sub(&xs).pow(2);
    let f = match ctx.flavor().q() {
        None => RatFunc::one(field, n).sub(&RatFunc::one(field, n).div(&d2).unwrap()),
        Some(q) => {
            let qm1 = q - &field.one();
            RatFunc::constant(n, q.clone())
                .sub(&xr.mul(&xs).scale(&(&qm1 * &qm1)).div(&d2).unwrap())
        }
    };
    LusztigElem::coeff(ctx, &f)
}

fn intertwiner_jobs(
    ctx: &Arc<LusztigContext>,
    samples: Arc<Vec<RatFunc>>,
) -> (Vec<Job>, Vec<(&'static str, &'static str)>) {
    let n = ctx.n();
    let mut jobs: Vec<Job> = Vec::new();
    for r in 1..n {
        let c = ctx.clone();
        let samples = samples.clone();
        jobs.push(Box::new(move || {
            let k = LusztigElem::kappa(&c, r);
            let mut fs: Vec<RatFunc> = samples.iter().cloned().collect();
            fs.extend((1..=c.n()).map(|s| c.var(s)));
            let mut fail = None;
            for (idx, f) in fs.iter().enumerate() {
                let lhs = k.mul(&LusztigElem::coeff(&c, f))?;
                let rhs = LusztigElem::coeff(&c, &f.swap_vars(r)).mul(&k)?;
                let res = lhs.sub(&rhs);
                if !res.is_zero() && fail.is_none() {
                    fail = Some(format!("sample {idx}: {res}"));
                }
            }
            let mut out = Vec::new();
            let mut v = IdentityVerdict::new(
                "fkappa",
                "-",
                format!("r={r},samples={}", fs.len()),
                fail.is_none(),
            );
            v.residual = fail;
            out.push(v);
            out.push(verdict(
                "kappa^2",
                "-",
                format!("r={r}"),
                &k.mul(&k)?.sub(&kappa_sq_rhs(&c, r)),
            ));
            for i in c.orbit().members() {
                let ei = LusztigElem::eps(&c, i)?;
                let esi = LusztigElem::eps(&c, &i.swap(r))?;
                out.push(verdict(
                    "kappaepsilon",
                    "-",
                    ri(r, i),
                    &k.mul(&ei)?.sub(&esi.mul(&k)?),
                ));
            }
            Ok(out)
        }));
    }
    for (r, s) in pairs_far(n) {
        let c = ctx.clone();
        jobs.push(Box::new(move || {
            let (a, b) = (LusztigElem::kappa(&c, r), LusztigElem::kappa(&c, s));
            Ok(vec![verdict(
                "kappa2",
                "-",
                format!("r={r},s={s}"),
                &a.mul(&b)?.sub(&b.mul(&a)?),
            )])
        }));
    }
    for r in 1..n.saturating_sub(1) {
        let c = ctx.clone();
        jobs.push(Box::new(move || {
            let (a, b) = (LusztigElem::kappa(&c, r), LusztigElem::kappa(&c, r + 1));
            let lhs = a.mul(&b)?.mul(&a)?;
            let rhs = b.mul(&a)?.mul(&b)?;
            Ok(vec![verdict(
                "kappa3",
                "-",
                format!("r={r}"),
                &lhs.sub(&rhs),
            )])
        }));
    }
    let expected = vec![
        ("fkappa", "-"),
        ("kappa^2", "-"),
        ("kappa2", "-"),
        ("kappa3", "-"),
        ("kappaepsilon", "-"),
    ];
    (jobs, expected)
}

fn gap_branches(name: &'static str) -> Vec<(&'static str, &'static str)> {
    Gap::ALL.iter().map(|g| (name, g.label())).collect()
}

fn qsym_jobs(ctx: &Arc<LusztigContext>) -> (Vec<Job>, Vec<(&'static str, &'static str)>) {
    let mut jobs: Vec<Job> = Vec::new();
    for r in 1..ctx.n() {
        for i in ctx.orbit().members().to_vec() {
            let fl = ctx.flavor().clone();
            jobs.push(Box::new(move || {
                let si = i.swap(r);
                let lhs = q_factor(&fl, r, &si)
                    .swap_vars(r)
                    .mul(&q_factor(&fl, r, &i));
                let rhs = y_to_x(&fl, &i, &qq_table_y(&fl, r, &i));
                let inv = q_factor(&fl, r, &i)
                    .mul(&q_factor_inv(&fl, r, &i)?)
                    .sub(&RatFunc::one(fl.field(), i.n()));
                let branch = residue_gap(&i, r).label();
                Ok(vec![
                    rf_verdict("QsrQsr", branch, ri(r, &i), &lhs.sub(&rhs)),
                    rf_verdict("Q-inverse", branch, ri(r, &i), &inv),
                ])
            }));
        }
    }
    (jobs, gap_branches("QsrQsr"))
}

/// `sum_i f(y(i)) eps(i)` for `f` written in `y`-variables.
fn y_diag(ctx: &Arc<LusztigContext>, f: &RatFunc) -> LusztigElem {
    let fl = ctx.flavor().clone();
    LusztigElem::diag(ctx, |i| Ok(y_to_x(&fl, i, f))).unwrap()
}

fn theta_jobs(
    ctx: &Arc<LusztigContext>,
    samples: Arc<Vec<RatFunc>>,
) -> (Vec<Job>, Vec<(&'static str, &'static str)>) {
    let n = ctx.n();
    let mut jobs: Vec<Job> = Vec::new();
    for r in 1..n {
        let c = ctx.clone();
        let samples = samples.clone();
        jobs.push(Box::new(move || {
            let th = LusztigElem::theta(&c, r);
            let mut out = Vec::new();
            for i in c.orbit().members() {
                let ei = LusztigElem::eps(&c, i)?;
                let esi = LusztigElem::eps(&c, &i.swap(r))?;
                out.push(verdict(
                    "thetaepsilon",
                    "-",
                    ri(r, i),
                    &th.mul(&ei)?.sub(&esi.mul(&th)?),
                ));
                let sq = th.mul(&th.mul(&ei)?)?;
                let table = LusztigElem::term(
                    &c,
                    i,
                    y_to_x(c.flavor(), i, &theta_sq_table_y(c.flavor(), r, i)),
                    Perm::identity(c.n()),
                )?;
                out.push(verdict(
                    "theta^2",
                    residue_gap(i, r).label(),
                    ri(r, i),
                    &sq.sub(&table),
                ));
            }
            let mut fail = None;
            for (idx, f) in samples.iter().enumerate() {
                let lhs = y_diag(&c, f).mul(&th)?;
                let rhs = th.mul(&y_diag(&c, &f.swap_vars(r)))?;
                let res = lhs.sub(&rhs);
                if !res.is_zero() && fail.is_none() {
                    fail = Some(format!("sample {idx}: {res}"));
                }
            }
            let mut v = IdentityVerdict::new(
                "ftheta",
                "-",
                format!("r={r},samples={}", samples.len()),
                fail.is_none(),
            );
            v.residual = fail;
            out.push(v);
            Ok(out)
        }));
    }
    for (r, s) in pairs_far(n) {
        let c = ctx.clone();
        jobs.push(Box::new(move || {
            let (a, b) = (LusztigElem::theta(&c, r), LusztigElem::theta(&c, s));
            Ok(vec![verdict(
                "theta2",
                "-",
                format!("r={r},s={s}"),
                &a.mul(&b)?.sub(&b.mul(&a)?),
            )])
        }));
    }
    for r in 1..n.saturating_sub(1) {
        let c = ctx.clone();
        jobs.push(Box::new(move || {
            let (a, b) = (LusztigElem::theta(&c, r), LusztigElem::theta(&c, r + 1));
            let mut out = Vec::new();
            for i in c.orbit().members() {
                let ei = LusztigElem::eps(&c, i)?;
                let lhs = a.mul(&b.mul(&a.mul(&ei)?)?)?;
                let rhs = b.mul(&a.mul(&b.mul(&ei)?)?)?;
                out.push(verdict("theta3", "-", ri(r, i), &lhs.sub(&rhs)));
            }
            Ok(out)
        }));
    }
    let mut expected = vec![
        ("thetaepsilon", "-"),
        ("ftheta", "-"),
        ("theta2", "-"),
        ("theta3", "-"),
    ];
    expected.extend(gap_branches("theta^2"));
    (jobs, expected)
}

fn klr_jobs(
    ctx: &Arc<LusztigContext>,
    samples: Arc<Vec<RatFunc>>,
) -> (Vec<Job>, Vec<(&'static str, &'static str)>) {
    let n = ctx.n();
    let mut jobs: Vec<Job> = Vec::new();
    let c = ctx.clone();
    let s2 = samples.clone();
    jobs.push(Box::new(move || {
        let mut out = Vec::new();
        let mut fail = None;
        for (idx, f) in s2.iter().enumerate() {
            let prod = y_diag(&c, f).mul(&y_diag(&c, &f.inv()?))?;
            let res = prod.sub(&LusztigElem::one(&c));
            if !res.is_zero() && fail.is_none() {
                fail = Some(format!("sample {idx}: {res}"));
            }
        }
        let mut v = IdentityVerdict::new(
            "ff^{-1}",
            "-",
            format!("samples={}", s2.len()),
            fail.is_none(),
        );
        v.residual = fail;
        out.push(v);
        for r in 1..=c.n() {
            let y = LusztigElem::y(&c, r);
            for i in c.orbit().members() {
                let ei = LusztigElem::eps(&c, i)?;
                out.push(verdict(
                    "yepsilon",
                    "-",
                    ri(r, i),
                    &y.mul(&ei)?.sub(&ei.mul(&y)?),
                ));
            }
            for s in r + 1..=c.n() {
                let z = LusztigElem::y(&c, s);
                out.push(verdict(
                    "y-commute",
                    "-",
                    format!("r={r},s={s}"),
                    &y.mul(&z)?.sub(&z.mul(&y)?),
                ));
            }
        }
        Ok(out)
    }));
    for r in 1..n {
        let c = ctx.clone();
        jobs.push(Box::new(move || {
            let psi = LusztigElem::psi(&c, r);
            let fl = c.flavor().clone();
            let nn = c.n();
            let sr = Perm::simple(nn, r);
            let mut out = vec![IdentityVerdict::new(
                "psi-semirational",
                "-",
                format!("r={r}"),
                psi.in_semirationalization(),
            )];
            for i in c.orbit().members() {
                let ei = LusztigElem::eps(&c, i)?;
                let esi = LusztigElem::eps(&c, &i.swap(r))?;
                let pe = psi.mul(&ei)?;
                out.push(verdict(
                    "psiepsilon",
                    "-",
                    ri(r, i),
                    &pe.sub(&esi.mul(&psi)?),
                ));
                let equal = i.get(r) == i.get(r + 1);
                for s in 1..=nn {
                    let lhs = psi.mul(&LusztigElem::y(&c, s))?.mul(&ei)?;
                    let mut rhs = LusztigElem::y(&c, sr.apply(s)).mul(&pe)?;
                    if equal {
                        let d = if s == r {
                            -1
                        } else if s == r + 1 {
                            1
                        } else {
                            0
                        };
                        rhs = rhs.add(&ei.scale(&fl.field().from_int(d)));
                    }
                    let branch = if equal { "equal" } else { "distinct" };
                    out.push(verdict(
                        "psiyepsilon",
                        branch,
                        format!("r={r},s={s},i=({i})"),
                        &lhs.sub(&rhs),
                    ));
                }
                let sq = psi.mul(&pe)?;
                let table = LusztigElem::term(
                    &c,
                    i,
                    y_to_x(&fl, i, &psi_sq_table_y(&fl, r, i)),
                    Perm::identity(nn),
                )?;
                out.push(verdict(
                    "psi^2",
                    residue_gap(i, r).label(),
                    ri(r, i),
                    &sq.sub(&table),
                ));
                // closed formulas for psi_r eps(i)
                let t = LusztigElem::t(&c, r);
                let qinv = LusztigElem::term(&c, i, q_factor_inv(&fl, r, i)?, Perm::identity(nn))?;
                let (branch, formula) = match (fl.q(), equal) {
                    (_, false) => {
                        let corr = if fl.is_degenerate() {
                            RatFunc::one(fl.field(), nn).div(&c.var(r).sub(&c.var(r + 1)))?
                        } else {
                            explicit_correction(&c, r)
                        };
                        (
                            "distinct",
                            t.add(&LusztigElem::coeff(&c, &corr)).mul(&qinv)?,
                        )
                    }
                    (None, true) => ("equal", t.add(&LusztigElem::one(&c)).mul(&qinv)?),
                    (Some(q), true) => {
                        let lin = c
                            .var(r)
                            .sub(&c.var(r + 1).scale(q))
                            .inv()?
                            .scale(&fl.q_pow(i.get(r)));
                        let f = LusztigElem::term(&c, i, lin, Perm::identity(nn))?;
                        ("combined", t.add(&LusztigElem::one(&c)).mul(&f)?)
                    }
                };
                out.push(verdict("psi-formula", branch, ri(r, i), &pe.sub(&formula)));
            }
            Ok(out)
        }));
    }
    for (r, s) in pairs_far(n) {
        let c = ctx.clone();
        jobs.push(Box::new(move || {
            let (a, b) = (LusztigElem::psi(&c, r), LusztigElem::psi(&c, s));
            Ok(vec![verdict(
                "psi-commute",
                "-",
                format!("r={r},s={s}"),
                &a.mul(&b)?.sub(&b.mul(&a)?),
            )])
        }));
    }
    for r in 1..n.saturating_sub(1) {
        let c = ctx.clone();
        jobs.push(Box::new(move || {
            let (a, b) = (LusztigElem::psi(&c, r), LusztigElem::psi(&c, r + 1));
            let fl = c.flavor().clone();
            let mut out = Vec::new();
            for i in c.orbit().members() {
                let ei = LusztigElem::eps(&c, i)?;
                let lhs = a.mul(&b.mul(&a.mul(&ei)?)?)?;
                let rhs = b.mul(&a.mul(&b.mul(&ei)?)?)?;
                let (branch, table) = braid_defect_table_y(&fl, r, i);
                let expect =
                    LusztigElem::term(&c, i, y_to_x(&fl, i, &table), Perm::identity(c.n()))?;
                out.push(verdict(
                    "psi3",
                    branch,
                    ri(r, i),
                    &lhs.sub(&rhs).sub(&expect),
                ));
            }
            Ok(out)
        }));
    }
    let mut expected = vec![
        ("ff^{-1}", "-"),
        ("yepsilon", "-"),
        ("psiepsilon", "-"),
        ("psiyepsilon", "equal"),
        ("psiyepsilon", "distinct"),
        ("psi-commute", "-"),
        ("psi3", "plus-one"),
        ("psi3", "minus-one"),
        ("psi3", "plus-one-e2"),
        ("psi3", "other"),
        ("psi-formula", "distinct"),
        (
            "psi-formula",
            if ctx.flavor().is_degenerate() {
                "equal"
            } else {
                "combined"
            },
        ),
    ];
    expected.extend(gap_branches("psi^2"));
    (jobs, expected)
}

/// Orbits that together hit every case branch for the given `n` and `e`.
pub fn standard_orbits(n: usize, e: u64) -> Vec<Orbit> {
    let contents: Vec<Vec<i64>> = match n {
        1 => vec![vec![0]],
        2 => vec![vec![0, 0], vec![0, 1], vec![0, 2]],
        3 => vec![
            vec![0, 0, 0],
            vec![0, 0, 1],
            vec![0, 1, 1],
            vec![0, 1, 2],
            vec![0, 0, 2],
        ],
        _ => vec![vec![0; n], (0..n as i64).collect(), {
            let mut v = vec![0; n];
            v[n - 1] = 1;
            v
        }],
    };
    let mut out: Vec<Orbit> = Vec::new();
    for c in contents {
        let t = ResidueTuple::new(e, c).expect("small residues");
        let o = crate::residues::orbit_of(&t);
        if !out.contains(&o) {
            out.push(o);
        }
    }
    out
}
