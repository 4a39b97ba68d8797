//! Command-line front end: runs one check suite on a catalog entry or a
//! presentation file and prints a text or JSON report.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on a
//! usage or data error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use kbeta::bss;
use kbeta::catalog::{self, Catalog, CatalogKey, Family, DATA_DIR_ENV};
use kbeta::gca::{Presentation, QuotientRing};
use kbeta::oracle::{self, Bounds};
use kbeta::report::{first_failure, Check, DimRow, Report, Status};
use kbeta::rigidity::{self, RigidityError, SolveOptions};

#[derive(Parser)]
#[command(name = "kbeta", version, about = "Checks mod-p cohomology presentations of the groups P(p, n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural and closure checks of a presentation.
    Validate(Common),
    /// Hilbert function of a presentation.
    Hilbert(Common),
    /// Group cohomology dimensions from a minimal resolution.
    Betti(Common),
    /// Hilbert function against the resolution, degree by degree.
    Compare(Common),
    /// Endomorphisms fixing the weak generators, and their surjectivity.
    Rigidity(Common),
    /// Every invertible map on the weak generators, extended and checked.
    Weakgen(Common),
    /// Bockstein pages, d² = 0 and the p-th power axiom.
    Bss(BssArgs),
    /// The tower of B Z/p^i products feeding the top differential of P(p, n).
    Tower(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// P33, Pp3, Ppn, Tower or Cyclic.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    i: Option<u32>,
    /// A presentation file used instead of a catalog entry.
    #[arg(long, conflicts_with = "family")]
    file: Option<PathBuf>,
    /// Degree bound.
    #[arg(long)]
    cap: Option<u32>,
    /// Search node limit.
    #[arg(long, default_value_t = rigidity::DEFAULT_BUDGET)]
    budget: u64,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
    /// Directory of presentation files replacing the built-in catalog.
    #[arg(long, env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct BssArgs {
    #[command(flatten)]
    common: Common,
    /// Number of pages to compute; defaults to one past the highest listed
    /// Bockstein.
    #[arg(long)]
    pages: Option<u32>,
}

/// A usage or data error, reported with exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Run = Result<Report, UsageError>;

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

struct Target {
    label: String,
    key: Option<CatalogKey>,
    pres: Presentation,
}

impl Common {
    fn catalog(&self) -> Catalog {
        match &self.data_dir {
            Some(dir) => Catalog::with_dir(dir),
            None => Catalog::embedded(),
        }
    }

    fn key(&self) -> Result<CatalogKey, UsageError> {
        let family = self.family.as_deref().ok_or_else(|| usage("either --family or --file is required"))?;
        let family = Family::from_str(family).map_err(|e| usage(e.to_string()))?;
        let p = self.p.ok_or_else(|| usage("--p is required"))?;
        Ok(CatalogKey::new(family, p, self.n, self.i)?)
    }

    fn target(&self) -> Result<Target, UsageError> {
        if let Some(path) = &self.file {
            let pres = catalog::load_external(path)?;
            return Ok(Target { label: path.display().to_string(), key: None, pres });
        }
        let key = self.key()?;
        let pres = self.catalog().load(&key)?;
        Ok(Target { label: key.to_string(), key: Some(key), pres })
    }

    fn cap_or(&self, default: u32) -> Result<u32, UsageError> {
        let cap = self.cap.unwrap_or(default);
        if cap == 0 {
            return Err(usage("--cap must be at least 1"));
        }
        Ok(cap)
    }

    fn solve_options(&self) -> Result<SolveOptions, UsageError> {
        if self.budget == 0 {
            return Err(usage("--budget must be at least 1"));
        }
        Ok(SolveOptions { budget: self.budget, ..SolveOptions::default() })
    }

    fn report(&self, command: &str, label: &str, cap: u32) -> Report {
        let mut r = Report::new(command, label);
        r.param("cap", cap);
        if let Some(p) = self.p {
            r.param("p", p);
        }
        if let Some(n) = self.n {
            r.param("n", n);
        }
        if let Some(i) = self.i {
            r.param("i", i);
        }
        r
    }
}

fn validate(c: &Common) -> Run {
    let cap = c.cap_or(8)?;
    let t = c.target()?;
    let mut r = c.report("validate", &t.label, cap);
    r.extend(catalog::validate_presentation(t.pres, cap).checks);
    Ok(r)
}

fn hilbert(c: &Common) -> Run {
    let cap = c.cap_or(8)?;
    let t = c.target()?;
    let mut r = c.report("hilbert", &t.label, cap);
    let ring = QuotientRing::new(t.pres, cap);
    r.dims.push(DimRow { label: "hilbert".into(), values: ring.hilbert(cap)? });
    r.finish();
    Ok(r)
}

/// `(p, n)` of the group behind a command: from the catalog key, or from
/// `--p` and `--n` directly.
fn group_of(c: &Common, key: Option<&CatalogKey>) -> Result<(u32, u32), UsageError> {
    if let Some(key) = key {
        let n = key.group_n().ok_or_else(|| usage(format!("{key} is not a presentation of some P(p, n)")))?;
        return Ok((key.p, n));
    }
    match (c.p, c.n) {
        (Some(p), Some(n)) => Ok((p, n)),
        _ => Err(usage("--p and --n are required")),
    }
}

fn betti(c: &Common) -> Run {
    let cap = c.cap_or(oracle::DEFAULT_HOMOLOGICAL_CAP)?;
    let key = if c.family.is_some() { Some(c.key()?) } else { None };
    let (p, n) = group_of(c, key.as_ref())?;
    let label = format!("P({p},{n})");
    let mut r = c.report("betti", &label, cap);
    r.dims.push(DimRow { label: "oracle".into(), values: oracle::betti(p, n, cap)? });
    r.finish();
    Ok(r)
}

fn compare(c: &Common) -> Run {
    let cap = c.cap_or(oracle::DEFAULT_HOMOLOGICAL_CAP)?;
    let t = c.target()?;
    let mut r = c.report("compare", &t.label, cap);
    let cmp = match &t.key {
        Some(key) => oracle::compare_hilbert(t.pres, key, cap)?,
        None => {
            let n = c.n.ok_or_else(|| usage("--n is required with --file"))?;
            oracle::compare_presentation(t.pres, n, cap, Bounds::default())?
        }
    };
    r.extend(cmp.checks());
    r.dims.push(DimRow { label: "oracle".into(), values: cmp.oracle });
    r.dims.push(DimRow { label: "presentation".into(), values: cmp.hilbert });
    Ok(r)
}

/// Folds search errors that are verdicts into failing checks; the rest are
/// data errors.
fn search_failure(r: &mut Report, e: RigidityError) -> Result<(), UsageError> {
    match e {
        RigidityError::SearchBudgetExceeded { .. } | RigidityError::FamilyTooLarge { .. } => {
            r.push(Check::fail("search completed", e.to_string()));
            Ok(())
        }
        e => Err(e.into()),
    }
}

fn rigidity_cmd(c: &Common) -> Run {
    let cap = c.cap_or(8)?;
    let opts = c.solve_options()?;
    let t = c.target()?;
    let mut r = c.report("rigidity", &t.label, cap);
    r.param("budget", c.budget);
    let ring = Arc::new(QuotientRing::new(t.pres, cap));
    match rigidity::rigidity_theorem(&ring, &opts) {
        Ok(v) => {
            r.extend(v.checks());
            for (k, e) in v.solutions.iter().enumerate() {
                r.solutions.push(e.format(&ring)?);
                if !v.surjective[k] {
                    let profile = rigidity::surjectivity_profile(&ring, e, cap)?;
                    let d = profile.iter().position(|(a, b)| a != b).unwrap_or(0);
                    r.push(Check::fail(format!("solution {k} surjective"), format!("rank drops in degree {d}")));
                }
            }
        }
        Err(e) => search_failure(&mut r, e)?,
    }
    Ok(r)
}

fn weakgen(c: &Common) -> Run {
    let cap = c.cap_or(8)?;
    let opts = c.solve_options()?;
    let t = c.target()?;
    let mut r = c.report("weakgen", &t.label, cap);
    r.param("budget", c.budget);
    let ring = Arc::new(QuotientRing::new(t.pres, cap));
    match rigidity::weak_generation_check(&ring, &opts) {
        Ok(w) => {
            r.push(Check::pass("maps scanned").with_detail(w.rows.len().to_string()));
            r.push(Check::pass("consistent maps").with_detail(w.consistent_maps().to_string()));
            for row in &w.rows {
                let [[a, b], [cc, d]] = row.matrix;
                r.push(Check::from_bool(
                    format!("L = [[{a},{b}],[{cc},{d}]]"),
                    row.all_surjective,
                    format!("{} extensions", row.solutions),
                ));
            }
        }
        Err(e) => search_failure(&mut r, e)?,
    }
    Ok(r)
}

fn bss_cmd(a: &BssArgs) -> Run {
    let c = &a.common;
    let cap = c.cap_or(8)?;
    let t = c.target()?;
    let count = match a.pages {
        Some(0) => return Err(usage("--pages must be at least 1")),
        Some(k) => k,
        None => t.pres.higher_bocksteins().iter().map(|h| h.page).max().unwrap_or(1) + 1,
    };
    let mut r = c.report("bss", &t.label, cap);
    r.param("pages", count);
    let ring = Arc::new(QuotientRing::new(t.pres, cap));
    let pages = match bss::pages(ring, count) {
        Ok(pg) => pg,
        Err(e @ (bss::BssError::TableValueDead { .. } | bss::BssError::NotACycle { .. } | bss::BssError::InducedNotCycle { .. })) => {
            r.push(Check::fail("pages turn", e.to_string()));
            return Ok(r);
        }
        Err(e) => return Err(e.into()),
    };
    for pg in &pages {
        r.dims.push(DimRow { label: format!("E_{}", pg.index()), values: pg.dims() });
        r.extend(pg.check_d_squared());
    }
    let ax = bss::check_axiom_b(&pages)?;
    if ax.vacuous() {
        r.push(Check::skipped("axiom (b)", "no p-th power survives"));
    }
    r.extend(ax.checks);
    Ok(r)
}

fn tower(c: &Common) -> Run {
    let cap = c.cap_or(8)?;
    let key = c.key()?;
    if key.family != Family::Ppn {
        return Err(usage("tower needs --family Ppn"));
    }
    let n = key.n.expect("Ppn keys carry n");
    let mut r = c.report("tower", &key.to_string(), cap);
    let t = bss::tower_report(&c.catalog(), key.p, n, cap)?;
    r.extend(t.checks);
    r.dims = t.dims;
    Ok(r)
}

fn print_text(r: &Report) {
    println!("{} {}", r.command, r.key);
    for c in &r.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        match &c.detail {
            Some(d) => println!("  {tag} {}: {d}", c.name),
            None => println!("  {tag} {}", c.name),
        }
    }
    for row in &r.dims {
        let vals: Vec<String> = row.values.iter().map(usize::to_string).collect();
        println!("  {}: {}", row.label, vals.join(" "));
    }
    for (k, s) in r.solutions.iter().enumerate() {
        let parts: Vec<String> = s.iter().map(|(g, v)| format!("{g} -> {v}")).collect();
        println!("  solution {k}: {}", parts.join(", "));
    }
    if r.command == "rigidity" {
        let all = r.checks.iter().find(|c| c.name == "all surjective").is_some_and(Check::passed);
        println!("all surjective: {all}");
    }
    for (name, ms) in &r.timings_ms {
        println!("  time {name}: {ms} ms");
    }
    if let Some(f) = first_failure(&r.checks) {
        println!("first failure: {}", f.name);
    }
    println!("passed: {}", r.passed);
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = {
        let start = Instant::now();
        let (common, result) = match &cli.command {
            Command::Validate(c) => (c, validate(c)),
            Command::Hilbert(c) => (c, hilbert(c)),
            Command::Betti(c) => (c, betti(c)),
            Command::Compare(c) => (c, compare(c)),
            Command::Rigidity(c) => (c, rigidity_cmd(c)),
            Command::Weakgen(c) => (c, weakgen(c)),
            Command::Bss(a) => (&a.common, bss_cmd(a)),
            Command::Tower(c) => (c, tower(c)),
        };
        let result = result.map(|mut r| {
            if common.timings {
                r.timings_ms.insert("total".into(), start.elapsed().as_millis() as u64);
            }
            r
        });
        (common, result)
    };
    match result {
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(mut r) => {
            r.finish();
            if common.json {
                println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            } else {
                print_text(&r);
            }
            if r.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
