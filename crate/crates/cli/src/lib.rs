//! Command-line driver: configuration parsing, subcommands and exit codes.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hecke_core::bkiso::{bk_check, BKReport};
use hecke_core::cyclo::{
    compute_idempotents, verify_commutation_lemma, verify_idempotent_system, BuildOptions,
    CycloAlgebra, CycloParams,
};
use hecke_core::report::SuiteReport;
use hecke_core::residues::{orbit_of, Orbit, ResidueTuple};
use hecke_core::scalars::{FieldElem, FieldSpec, HeckeFlavor};
use hecke_core::suites::{standard_orbits, verify_relation_suite, SUITES};
use hecke_core::HeckeError;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "hecke",
    version,
    about = "Exact verification of affine Hecke, KLR and cyclotomic identities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run relation suites in the Lusztig extension.
    Verify(Config),
    /// Build a cyclotomic quotient and report its idempotents and blocks.
    Block(Config),
    /// Verify the KLR presentation of one block end to end.
    BkCheck(Config),
    /// Run a fixed small matrix of all checks.
    Selftest(Config),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    Degenerate,
    Nondegenerate,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    #[arg(long, value_enum, default_value = "degenerate")]
    pub case: Case,
    /// `rat`, `fp:<p>` or `cyclo:<m>`.
    #[arg(long, default_value = "rat")]
    pub field: String,
    /// Integer, fraction or `zeta`; `q=` prefix accepted.
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Expected quantum characteristic, checked against field and q.
    #[arg(long)]
    pub e: Option<u64>,
    /// `residue:multiplicity` pairs, e.g. `0:1,1:1`.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Orbit representative, e.g. `0,1,2`.
    #[arg(long)]
    pub orbit: Option<String>,
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Overrides `HECKE_FUEL`.
    #[arg(long)]
    pub fuel: Option<u64>,
    #[arg(long, default_value_t = hecke_core::cyclo::DEFAULT_DIM_CAP)]
    pub dim_cap: usize,
    /// Record wall-clock time in reports (breaks byte-identity).
    #[arg(long)]
    pub timing: bool,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<HeckeError> for Failure {
    fn from(e: HeckeError) -> Self {
        let code = match e {
            HeckeError::VerificationFailed(_)
            | HeckeError::DimensionMismatch { .. }
            | HeckeError::UnexpectedEigenvalue(_)
            | HeckeError::Internal(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: msg.into(),
    }
}

pub fn parse_q(field: FieldSpec, s: &str) -> Result<FieldElem, Failure> {
    let s = s.trim();
    let s = s.strip_prefix("q=").unwrap_or(s);
    if s == "zeta" {
        return Ok(field.zeta()?);
    }
    let int = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| usage(format!("cannot parse q literal `{s}`")))
    };
    match s.split_once('/') {
        Some((a, b)) => Ok(field
            .from_int(int(a)?)
            .checked_div(&field.from_int(int(b)?))?),
        None => Ok(field.from_int(int(s)?)),
    }
}

impl Config {
    pub fn flavor(&self) -> Result<HeckeFlavor, Failure> {
        let field: FieldSpec = self.field.parse()?;
        let flavor = match self.case {
            Case::Degenerate => {
                if self.q.is_some() {
                    return Err(usage("--q only applies to --case nondegenerate"));
                }
                HeckeFlavor::degenerate(field)
            }
            Case::Nondegenerate => {
                let q = self
                    .q
                    .as_deref()
                    .ok_or_else(|| usage("--case nondegenerate needs --q"))?;
                HeckeFlavor::nondegenerate(parse_q(field, q)?)?
            }
        };
        if let Some(e) = self.e {
            if e != flavor.e() {
                return Err(usage(format!(
                    "--e {e} disagrees with {}",
                    flavor.describe()
                )));
            }
        }
        Ok(flavor)
    }

    pub fn orbit(&self, flavor: &HeckeFlavor) -> Result<Option<Orbit>, Failure> {
        let Some(s) = &self.orbit else {
            return Ok(None);
        };
        let t = ResidueTuple::parse(s, flavor.e())?;
        if t.n() != self.n {
            return Err(usage(format!(
                "--orbit {s} has {} entries but --n is {}",
                t.n(),
                self.n
            )));
        }
        Ok(Some(orbit_of(&t)))
    }

    pub fn build_options(&self) -> Result<BuildOptions, Failure> {
        let mut o = BuildOptions::from_env()?;
        if let Some(f) = self.fuel {
            o.fuel = f;
        }
        o.dim_cap = self.dim_cap;
        Ok(o)
    }

    pub fn params(&self, flavor: &HeckeFlavor) -> Result<CycloParams, Failure> {
        let s = self
            .lambda
            .as_deref()
            .ok_or_else(|| usage("this command needs --lambda"))?;
        Ok(CycloParams::new(
            flavor.clone(),
            self.n,
            CycloParams::parse_lambda(s)?,
        )?)
    }

    fn suites(&self) -> Result<Vec<&'static str>, Failure> {
        if self.suite == "all" {
            return Ok(SUITES.to_vec());
        }
        let names: Vec<&'static str> = self
            .suite
            .split(',')
            .map(|s| {
                SUITES
                    .iter()
                    .copied()
                    .find(|k| *k == s.trim())
                    .ok_or_else(|| usage(format!("unknown suite `{s}`")))
            })
            .collect::<Result<_, _>>()?;
        Ok(names)
    }
}

/// Outcome of a subcommand: JSON document, human summary and pass flag.
pub struct Outcome {
    pub json: Value,
    pub summary: Vec<String>,
    pub passed: bool,
}

pub fn cmd_verify(cfg: &Config) -> Result<Outcome, Failure> {
    let flavor = cfg.flavor()?;
    let orbits = match cfg.orbit(&flavor)? {
        Some(o) => vec![o],
        None => standard_orbits(cfg.n, flavor.e()),
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    let mut summary = Vec::new();
    for name in cfg.suites()? {
        for orbit in &orbits {
            let rep = verify_relation_suite(name, &flavor, orbit, cfg.trials, cfg.seed)?;
            summary.push(format!(
                "{} {name} orbit {orbit}: {} identities, {} failed, {} branches not exercised",
                if rep.passed() { "PASS" } else { "FAIL" },
                rep.identities.len(),
                rep.failures().len(),
                rep.not_exercised.len()
            ));
            reports.push(rep);
        }
    }
    let passed = reports.iter().all(|r| r.passed());
    let json = json!({ "flavor": flavor.describe(), "reports": reports });
    Ok(Outcome {
        json,
        summary,
        passed,
    })
}

fn build(cfg: &Config) -> Result<(HeckeFlavor, CycloAlgebra), Failure> {
    let flavor = cfg.flavor()?;
    let params = cfg.params(&flavor)?;
    let alg = CycloAlgebra::build(params, cfg.build_options()?)?;
    Ok((flavor, alg))
}

pub fn cmd_block(cfg: &Config) -> Result<Outcome, Failure> {
    let (flavor, alg) = build(cfg)?;
    let sys = compute_idempotents(&alg)?;
    let summary_data = alg.summary(&sys)?;
    let mut summary = vec![
        format!(
            "H(Lambda) for Lambda={} over {}: dim {}",
            alg.params().describe_lambda(),
            flavor.describe(),
            alg.dim()
        ),
        format!(
            "nonzero e(i): {}",
            summary_data
                .idempotent_tuples
                .iter()
                .map(|t| format!("({t})"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    ];
    for b in &summary_data.block_dims {
        summary.push(format!("block {{{}}}: dim {}", b.orbit.join(" | "), b.dim));
    }
    let mut json = serde_json::to_value(&summary_data).map_err(|e| usage(e.to_string()))?;
    if let Some(orbit) = cfg.orbit(&flavor)? {
        let d = sys.block_dim(&alg, &orbit)?;
        summary.push(format!("requested orbit {orbit}: block dim {d}"));
        json["orbit"] = json!({ "members": orbit.members().iter().map(|m| m.to_string()).collect::<Vec<_>>(), "dim": d });
    }
    Ok(Outcome {
        json,
        summary,
        passed: true,
    })
}

pub fn cmd_bk_check(cfg: &Config) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let (flavor, alg) = build(cfg)?;
    let orbit = cfg
        .orbit(&flavor)?
        .ok_or_else(|| usage("bk-check needs --orbit"))?;
    let sys = compute_idempotents(&alg)?;
    let mut rep: BKReport = bk_check(&alg, &sys, &orbit, cfg.seed)?;
    if cfg.timing {
        rep.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    let mut summary = vec![format!(
        "orbit {orbit}: block dim {}, closure dim {}, {} verdicts, {} failed",
        rep.block_dim,
        rep.closure_dim,
        rep.verdicts.len(),
        rep.failures().len()
    )];
    for v in &rep.verdicts {
        summary.push(format!(
            "  {:<13} {:<24} {}",
            v.status, v.relation, v.branch
        ));
    }
    if let Some(note) = &rep.note {
        summary.push(note.clone());
    }
    summary.push(rep.conclusion.clone());
    let passed = rep.passed();
    Ok(Outcome {
        json: serde_json::to_value(&rep).map_err(|e| usage(e.to_string()))?,
        summary,
        passed,
    })
}

fn selftest_line(label: &str, ok: bool) -> String {
    format!("{} {label}", if ok { "PASS" } else { "FAIL" })
}

/// Small fixed matrix: suites at `n = 3`, cyclotomic quotients and one block.
pub fn cmd_selftest(cfg: &Config) -> Result<Outcome, Failure> {
    let mut lines = Vec::new();
    let mut all = true;
    let c3 = FieldSpec::cyclotomic(3)?;
    let flavors = vec![
        HeckeFlavor::degenerate(FieldSpec::prime(3)?),
        HeckeFlavor::nondegenerate(FieldSpec::Rationals.from_int(2))?,
        HeckeFlavor::nondegenerate(c3.zeta()?)?,
    ];
    for fl in &flavors {
        for orbit in standard_orbits(3, fl.e()) {
            for name in SUITES {
                let ok = verify_relation_suite(name, fl, &orbit, 3, cfg.seed)?.passed();
                all &= ok;
                lines.push(selftest_line(
                    &format!("{name} {} orbit {orbit}", fl.describe()),
                    ok,
                ));
            }
        }
        for (n, lam) in [
            (1usize, vec![(0i64, 1u32), (1, 1)]),
            (2, vec![(0, 1)]),
            (2, vec![(0, 1), (1, 1)]),
            (3, vec![(0, 1)]),
        ] {
            let params = CycloParams::new(fl.clone(), n, lam.into_iter().collect())?;
            let alg = CycloAlgebra::build(params, cfg.build_options()?)?;
            let sys = compute_idempotents(&alg)?;
            let ok = verify_idempotent_system(&alg, &sys)?.passed()
                && verify_commutation_lemma(&alg, &sys)?.passed();
            all &= ok;
            lines.push(selftest_line(
                &format!(
                    "cyclotomic n={n} Lambda={} dim={} {}",
                    alg.params().describe_lambda(),
                    alg.dim(),
                    fl.describe()
                ),
                ok,
            ));
            if n == 2 {
                for orbit in sys.orbits() {
                    let ok = bk_check(&alg, &sys, &orbit, cfg.seed)?.passed();
                    all &= ok;
                    lines.push(selftest_line(
                        &format!("bk-check n=2 orbit {orbit} {}", fl.describe()),
                        ok,
                    ));
                }
            }
        }
    }
    let json = json!({ "lines": lines, "passed": all });
    Ok(Outcome {
        json,
        summary: lines,
        passed: all,
    })
}

fn configure_jobs(cfg: &Config) -> Result<(), Failure> {
    if let Some(j) = cfg.jobs {
        if j == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        // a pool that is already built keeps its size
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global();
    }
    Ok(())
}

/// Runs a parsed command; writes JSON to `--out` or stdout and the summary to
/// stderr. Returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (cfg, result) = match &cli.command {
        Command::Verify(c) => (c, configure_jobs(c).and_then(|_| cmd_verify(c))),
        Command::Block(c) => (c, configure_jobs(c).and_then(|_| cmd_block(c))),
        Command::BkCheck(c) => (c, configure_jobs(c).and_then(|_| cmd_bk_check(c))),
        Command::Selftest(c) => (c, configure_jobs(c).and_then(|_| cmd_selftest(c))),
    };
    match result {
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
        Ok(out) => {
            for line in &out.summary {
                let _ = writeln!(stderr, "{line}");
            }
            let text = serde_json::to_string_pretty(&out.json).expect("reports serialize") + "\n";
            match &cfg.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                        return EXIT_USAGE;
                    }
                }
                None => {
                    let _ = stdout.write_all(text.as_bytes());
                }
            }
            if out.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
    }
}
