//! The shipped presentations and their validation.
//!
//! Each entry is transcribed once in [`transcribe`] and serialized to
//! `data/<family>_p<p>[_n<n>][_i<i>].json` by the `gen_catalog` example. The
//! files are compiled into the crate; a directory given at run time takes
//! precedence over the embedded copies.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::gca::format::{self, FormatError};
use crate::gca::{Presentation, PresentationBuilder, PresentationError, QuotientRing};
use crate::ops::{self, OpKind};
use crate::report::Check;

/// Environment variable naming a directory of presentation files.
pub const DATA_DIR_ENV: &str = "KBETA_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    P33,
    Pp3,
    Ppn,
    Tower,
    Cyclic,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::P33, Family::Pp3, Family::Ppn, Family::Tower, Family::Cyclic];

    pub fn name(self) -> &'static str {
        match self {
            Family::P33 => "P33",
            Family::Pp3 => "Pp3",
            Family::Ppn => "Ppn",
            Family::Tower => "Tower",
            Family::Cyclic => "Cyclic",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CatalogError::UnsupportedKey(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unsupported catalog key: {0}")]
    UnsupportedKey(String),
    #[error("{file}: {source}")]
    Parse { file: String, source: FormatError },
    #[error("{file}: {source}")]
    Io { file: String, source: std::io::Error },
    #[error(transparent)]
    Transcription(#[from] PresentationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CatalogKey {
    pub family: Family,
    pub p: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<u32>,
}

fn is_odd_prime(p: u32) -> bool {
    (3..256).contains(&p) && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl CatalogKey {
    /// Checks the parameter rules of the family; `n` and `i` must be given
    /// exactly when the family uses them.
    pub fn new(family: Family, p: u32, n: Option<u32>, i: Option<u32>) -> Result<Self, CatalogError> {
        let bad = |m: String| Err(CatalogError::UnsupportedKey(m));
        if !is_odd_prime(p) {
            return bad(format!("p = {p} is not an odd prime"));
        }
        let (needs_n, needs_i) = match family {
            Family::P33 | Family::Pp3 => (false, false),
            Family::Ppn => (true, false),
            Family::Tower | Family::Cyclic => (false, true),
        };
        if needs_n != n.is_some() {
            return bad(format!("{family} {} a value of n", if needs_n { "requires" } else { "does not take" }));
        }
        if needs_i != i.is_some() {
            return bad(format!("{family} {} a value of i", if needs_i { "requires" } else { "does not take" }));
        }
        match family {
            Family::P33 if p != 3 => return bad("P33 requires p = 3".into()),
            Family::Pp3 if p < 5 => return bad("Pp3 requires p >= 5".into()),
            Family::Ppn if n.unwrap() < 4 => return bad("Ppn requires n >= 4".into()),
            Family::Tower | Family::Cyclic if i.unwrap() < 1 => return bad(format!("{family} requires i >= 1")),
            _ => {}
        }
        Ok(Self { family, p, n, i })
    }

    pub fn p33() -> Self {
        Self::new(Family::P33, 3, None, None).unwrap()
    }

    pub fn pp3(p: u32) -> Self {
        Self::new(Family::Pp3, p, None, None).unwrap()
    }

    pub fn ppn(p: u32, n: u32) -> Self {
        Self::new(Family::Ppn, p, Some(n), None).unwrap()
    }

    pub fn tower(p: u32, i: u32) -> Self {
        Self::new(Family::Tower, p, None, Some(i)).unwrap()
    }

    pub fn cyclic(p: u32, i: u32) -> Self {
        Self::new(Family::Cyclic, p, None, Some(i)).unwrap()
    }

    /// The group order exponent: `P(p, n)` has order `p^n`. `None` outside the P families.
    pub fn group_n(&self) -> Option<u32> {
        match self.family {
            Family::P33 | Family::Pp3 => Some(3),
            Family::Ppn => self.n,
            _ => None,
        }
    }

    pub fn stem(&self) -> String {
        let mut s = format!("{}_p{}", self.family, self.p);
        if let Some(n) = self.n {
            s.push_str(&format!("_n{n}"));
        }
        if let Some(i) = self.i {
            s.push_str(&format!("_i{i}"));
        }
        s
    }

    pub fn file_name(&self) -> String {
        format!("{}.json", self.stem())
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.stem())
    }
}

/// Every key with a shipped data file.
pub fn shipped_keys() -> Vec<CatalogKey> {
    let mut out = vec![CatalogKey::p33(), CatalogKey::pp3(5)];
    for p in [3, 5] {
        for n in 4..=6 {
            out.push(CatalogKey::ppn(p, n));
        }
    }
    for p in [3, 5] {
        for i in 1..=3 {
            out.push(CatalogKey::tower(p, i));
        }
    }
    for p in [3, 5] {
        for i in 1..=3 {
            out.push(CatalogKey::cyclic(p, i));
        }
    }
    out
}

macro_rules! embedded {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../data/", $file)))),*]
    };
}

static EMBEDDED: &[(&str, &str)] = embedded![
    "P33_p3.json",
    "Pp3_p5.json",
    "Ppn_p3_n4.json",
    "Ppn_p3_n5.json",
    "Ppn_p3_n6.json",
    "Ppn_p5_n4.json",
    "Ppn_p5_n5.json",
    "Ppn_p5_n6.json",
    "Tower_p3_i1.json",
    "Tower_p3_i2.json",
    "Tower_p3_i3.json",
    "Tower_p5_i1.json",
    "Tower_p5_i2.json",
    "Tower_p5_i3.json",
    "Cyclic_p3_i1.json",
    "Cyclic_p3_i2.json",
    "Cyclic_p3_i3.json",
    "Cyclic_p5_i1.json",
    "Cyclic_p5_i2.json",
    "Cyclic_p5_i3.json",
];

/// The text of an embedded data file.
pub fn embedded_text(key: &CatalogKey) -> Option<&'static str> {
    let name = key.file_name();
    EMBEDDED.iter().find(|(f, _)| *f == name).map(|(_, t)| *t)
}

/// Where presentation files are read from.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    dir: Option<PathBuf>,
}

impl Catalog {
    /// The files compiled into the crate.
    pub fn embedded() -> Self {
        Self { dir: None }
    }

    /// Files in `dir` take precedence; missing files fall back to the embedded copies.
    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        Self { dir: Some(dir.into()) }
    }

    /// Uses the directory named by `KBETA_DATA_DIR` when it is set.
    pub fn from_env() -> Self {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(d) if !d.is_empty() => Self::with_dir(PathBuf::from(d)),
            _ => Self::embedded(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn text(&self, key: &CatalogKey) -> Result<String, CatalogError> {
        let name = key.file_name();
        if let Some(dir) = &self.dir {
            let path = dir.join(&name);
            if path.exists() {
                return std::fs::read_to_string(&path)
                    .map_err(|source| CatalogError::Io { file: path.display().to_string(), source });
            }
        }
        embedded_text(key)
            .map(str::to_string)
            .ok_or_else(|| CatalogError::UnsupportedKey(format!("no data file {name}")))
    }

    pub fn load(&self, key: &CatalogKey) -> Result<Presentation, CatalogError> {
        let text = self.text(key)?;
        format::from_str(&text).map_err(|source| CatalogError::Parse { file: key.file_name(), source })
    }
}

/// Loads from the embedded data files.
pub fn load(key: &CatalogKey) -> Result<Presentation, CatalogError> {
    Catalog::embedded().load(key)
}

/// Reads a presentation file supplied by the user.
pub fn load_external(path: &Path) -> Result<Presentation, CatalogError> {
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io { file: file.clone(), source })?;
    format::from_str(&text).map_err(|source| CatalogError::Parse { file, source })
}

/// Result of [`validate`].
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub presentation: String,
    pub cap: u32,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Structural checks plus the closure report of [`ops::check_closure`].
pub fn validate_presentation(pres: Presentation, cap: u32) -> ValidationReport {
    let mut checks = Vec::new();
    let alg = pres.algebra();
    let homogeneous = pres.relations().iter().all(|r| alg.degree(&r.polynomial).is_some());
    checks.push(Check::from_bool("relations are homogeneous", homogeneous, ""));
    let admissible = pres.relations().iter().all(|r| r.polynomial.monomials().all(|m| alg.is_admissible(m)));
    checks.push(Check::from_bool("no odd generator squared", admissible, ""));
    // table degrees are enforced at load; record them
    let p = pres.p();
    let mut table_ok = true;
    for (g, info) in pres.generators().iter().enumerate() {
        for op in OpKind::ALL {
            let entry = match op {
                OpKind::Beta => pres.beta_entry(g),
                OpKind::P1 => pres.p1_entry(g),
            };
            if let Some(e) = entry {
                if !e.value.is_zero() && alg.degree(&e.value) != Some(info.degree + op.degree_shift(p)) {
                    table_ok = false;
                }
            }
        }
    }
    checks.push(Check::from_bool("table values have the operation's degree", table_ok, ""));
    let missing_beta: Vec<&str> = pres
        .generators()
        .iter()
        .enumerate()
        .filter(|(g, _)| pres.beta_entry(*g).is_none())
        .map(|(_, info)| info.name.as_str())
        .collect();
    checks.push(Check::from_bool(
        "beta listed or defaulted on every generator",
        missing_beta.is_empty(),
        if missing_beta.is_empty() { String::new() } else { format!("missing: {}", missing_beta.join(", ")) },
    ));
    if pres.max_generator_degree() > cap {
        checks.push(Check::fail(
            "cap covers the generators",
            format!("cap {cap} below generator degree {}", pres.max_generator_degree()),
        ));
    }
    let name = pres.name().to_string();
    let ring = QuotientRing::new(pres, cap);
    let closure = ops::check_closure(&ring);
    checks.extend(closure.checks);
    ValidationReport { presentation: name, cap, checks }
}

pub fn validate(catalog: &Catalog, key: &CatalogKey, cap: u32) -> Result<ValidationReport, CatalogError> {
    Ok(validate_presentation(catalog.load(key)?, cap))
}

// ---------------------------------------------------------------------------
// transcription

/// Builds the presentation for `key` from the transcribed generator, relation
/// and operation lists. Works for any odd prime allowed by the key.
pub fn transcribe(key: &CatalogKey) -> Result<Presentation, CatalogError> {
    let pres = match key.family {
        Family::P33 => p33()?,
        Family::Pp3 => pp3(key.p)?,
        Family::Ppn => ppn(key.p, key.n.expect("validated key"))?,
        Family::Tower => tower(key.p, key.i.expect("validated key"))?,
        Family::Cyclic => cyclic(key.p, key.i.expect("validated key"))?,
    };
    Ok(pres)
}

fn p33() -> Result<Presentation, PresentationError> {
    let mut b = PresentationBuilder::new("P33_p3", 3);
    for (name, deg) in [("y", 1), ("y'", 1), ("x", 2), ("x'", 2), ("Y", 2), ("Y'", 2), ("X", 3), ("X'", 3), ("z", 6)] {
        b = b.generator(name, deg);
    }
    b = b.define("c_2", "x*Y' - x'*Y - x^2 - x'^2");
    let relations = [
        ("y*y'", "0"),
        ("x*y'", "x'*y"),
        ("y*Y", "x*y'"),
        ("y'*Y'", "x*y'"),
        ("y*Y'", "y'*Y"),
        ("Y*Y'", "x*x'"),
        ("Y^2", "x*Y'"),
        ("Y'^2", "x'*Y"),
        ("y*X", "x*Y - x*x'"),
        ("y'*X'", "x'*Y' - x*x'"),
        ("X*y'", "x'*Y - x*Y'"),
        ("X'*y", "x*Y' - x'*Y"),
        ("X*Y", "x'*X"),
        ("X'*Y'", "x*X'"),
        ("X*Y'", "-X'*Y"),
        ("x*X'", "-x'*X"),
        ("X*X'", "0"),
        ("x*(x*Y' + x'*Y)", "-x*x'^2"),
        ("x'*(x*Y' + x'*Y)", "-x'*x^2"),
        ("x^3*y' - x'^3*y", "0"),
        ("x^3*x' - x'^3*x", "0"),
        ("x^3*Y' + x'^3*Y", "-x^2*x'^2"),
        ("x^3*X' + x'^3*X", "0"),
    ];
    for (l, r) in relations {
        b = b.relation(l, r);
    }
    b.beta("y", "x")
        .beta("y'", "x'")
        .beta("Y", "X")
        .beta("Y'", "X'")
        .beta_default("x")
        .beta_default("x'")
        .beta_default("X")
        .beta_default("X'")
        .beta_default("z")
        .p1("X", "x^2*X + z*y")
        .p1("X'", "x'^2*X' - z*y'")
        .p1("z", "z*c_2")
        .weak_generators(&["y", "y'"])
        .note("relations with a chained equality (yY = y'Y' = xy') are split into one relation per equals sign")
        .build()
}

fn c_relations(mut b: PresentationBuilder, p: u32, with_capitals: bool) -> PresentationBuilder {
    let q = p - 1;
    let mut partners = vec!["y", "y'", "x", "x'"];
    if with_capitals {
        partners.extend(["Y", "Y'", "X", "X'"]);
    }
    for i in 2..=q {
        let c = format!("c_{i}");
        for &g in &partners {
            let rhs = if i < q {
                "0".to_string()
            } else {
                match g {
                    "y" => format!("-x^{q}*y"),
                    "y'" => format!("-x'^{q}*y'"),
                    "x" => format!("-x^{p}"),
                    "x'" => format!("-x'^{p}"),
                    "Y" => format!("-x^{q}*Y"),
                    "Y'" => format!("-x'^{q}*Y'"),
                    "X" => format!("-x^{q}*X"),
                    // printed as -x'^{p-1} X; the value forced by applying β to c_{p-1}Y' = -x'^{p-1}Y'
                    "X'" => format!("-x'^{q}*X'"),
                    _ => unreachable!(),
                }
            };
            b = b.relation_unless_trivial(&format!("{c}*{g}"), &rhs);
        }
    }
    for i in 2..=q {
        for j in i..=q {
            let rhs = if i + j < 2 * q {
                "0".to_string()
            } else {
                format!("x^{e}+x'^{e}-x^{q}*x'^{q}", e = 2 * q)
            };
            b = b.relation_unless_trivial(&format!("c_{i}*c_{j}"), &rhs);
        }
    }
    b
}

fn p1_c(mut b: PresentationBuilder, p: u32, as_table: impl Fn(u32) -> bool) -> PresentationBuilder {
    let q = p - 1;
    for i in 2..=q {
        let value = if i < q {
            format!("{i}*z*c_{}", i - 1)
        } else {
            format!("-z*c_{}+x^{e}+x'^{e}-x^{q}*x'^{q}", q - 1, e = 2 * q)
        };
        if as_table(i) {
            b = b.p1(&format!("c_{i}"), &value);
        } else {
            b = b.identity(OpKind::P1, &format!("c_{i}"), &value, &format!("P1(c_{i}) = {value}"));
        }
    }
    b
}

fn pp3(p: u32) -> Result<Presentation, PresentationError> {
    pp3_scaled(p, 1, p - 1)
}

/// The `Pp3` presentation with `c_2 = λ(xY' + x'Y)` and `c_3 = μXX'`. The
/// catalog uses `λ = 1, μ = -1`; `P1(c_3) = 3 z c_2` needs `μ = -λ`.
pub fn pp3_scaled(p: u32, lambda: u32, mu: u32) -> Result<Presentation, PresentationError> {
    let q = p - 1;
    let name = if (lambda % p, mu % p) == (1, p - 1) { format!("Pp3_p{p}") } else { format!("Pp3_p{p}_l{lambda}_m{mu}") };
    let mut b = PresentationBuilder::new(name, p);
    for (name, deg) in [("y", 1), ("y'", 1), ("x", 2), ("x'", 2), ("Y", 2), ("Y'", 2), ("X", 3), ("X'", 3)] {
        b = b.generator(name, deg);
    }
    for i in 4..=p {
        b = b.generator(&format!("d_{i}"), 2 * i - 1);
    }
    for i in 4..=q {
        b = b.generator(&format!("c_{i}"), 2 * i);
    }
    b = b
        .generator("z", 2 * p)
        .define("c_1", "y'*y")
        .define("c_2", &format!("{lambda}*(x*Y' + x'*Y)"))
        .define("c_3", &format!("{mu}*X*X'"));
    let relations = [
        ("y*y'", "0".to_string()),
        ("x*y'", "x'*y".into()),
        ("y*Y", "0".into()),
        ("y'*Y'", "0".into()),
        ("y*Y'", "y'*Y".into()),
        ("Y^2", "0".into()),
        ("Y'^2", "0".into()),
        ("Y*Y'", "0".into()),
        ("y*X", "x*Y".into()),
        ("y'*X'", "x'*Y'".into()),
        ("X*y'", "2*x*Y' + x'*Y".into()),
        ("X'*y", "2*x'*Y + x*Y'".into()),
        ("X*Y", "0".into()),
        ("X'*Y'", "0".into()),
        ("X*Y'", "-X'*Y".into()),
        ("x*X'", "-x'*X".into()),
        ("x*(x*Y' + x'*Y)", "0".into()),
        ("x'*(x*Y' + x'*Y)", "0".into()),
    ];
    for (l, r) in &relations {
        b = b.relation(l, r);
    }
    b = b
        .relation(&format!("x^{p}*y' - x'^{p}*y"), "0")
        .relation(&format!("x^{p}*x'"), "0")
        .relation(&format!("x'^{p}*x"), "0")
        .relation(&format!("x^{p}*Y' + x'^{p}*Y"), "0")
        .relation(&format!("x^{p}*X' + x'^{p}*X"), "0");
    b = c_relations(b, p, true);
    for i in 4..=p {
        let d = format!("d_{i}");
        let cases: [(&str, String); 8] = [
            ("y", if i < p { "0".into() } else { format!("-x^{q}*Y") }),
            ("y'", if i < p { "0".into() } else { format!("-x'^{q}*Y'") }),
            (
                "x",
                if i < q {
                    "0".into()
                } else if i == q {
                    format!("-x^{q}*y")
                } else {
                    format!("x^{q}*X")
                },
            ),
            (
                "x'",
                if i < q {
                    "0".into()
                } else if i == q {
                    format!("-x'^{q}*y'")
                } else {
                    // printed with a minus sign; closure under beta of d_p y' requires the plus sign
                    format!("x'^{q}*X'")
                },
            ),
            ("Y", "0".into()),
            ("Y'", "0".into()),
            ("X", if i != q { "0".into() } else { format!("-x^{q}*Y") }),
            ("X'", if i != q { "0".into() } else { format!("-x'^{q}*Y'") }),
        ];
        for (g, rhs) in cases {
            b = b.relation(&format!("{d}*{g}"), &rhs);
        }
    }
    // d_i d_j: only the ordered case i = p, j = p - 1 is nonzero
    for i in 4..=p {
        for j in 4..i {
            let rhs = if i == p && j == q {
                format!("x^{e}*Y + x'^{e}*Y' + x^{q}*x'^{f}*Y'", e = 2 * p - 3, f = p - 2)
            } else {
                "0".into()
            };
            b = b.relation(&format!("d_{i}*d_{j}"), &rhs);
        }
    }
    for i in 4..=p {
        for j in 2..=q {
            let rhs = if i < q || j < q {
                "0".to_string()
            } else if i == q {
                format!("-x^{e}*y + x'^{e}*y' - x^{q}*x'^{f}*y'", e = 2 * p - 3, f = p - 2)
            } else {
                format!("-x^{e}*X + x'^{e}*X' - x^{q}*x'^{f}*X'", e = 2 * p - 3, f = p - 2)
            };
            b = b.relation_unless_trivial(&format!("d_{i}*c_{j}"), &rhs);
        }
    }
    b = b.beta("y", "x").beta("y'", "x'").beta("Y", "X").beta("Y'", "X'");
    for i in 4..=p {
        b = b.beta(&format!("d_{i}"), &if i < p { format!("c_{i}") } else { "0".into() });
    }
    for g in ["x", "x'", "X", "X'"] {
        b = b.beta_default(g);
    }
    for i in 4..=q {
        b = b.beta_default(&format!("c_{i}"));
    }
    b = b
        .beta_default("z")
        .p1("X", &format!("x^{q}*X + z*y"))
        .p1("X'", &format!("x'^{q}*X' - z*y'"));
    b = p1_c(b, p, |i| i >= 4);
    b.p1("z", &format!("z*c_{q}"))
        .weak_generators(&["y", "y'"])
        .note("c_2 and c_3 are stated only as nonzero multiples of xY' + x'Y and XX'; the scalars are 1 and -1, the pair for which P1(c_3) = 3 z c_2 holds")
        .note("c_1 = y'y as in the n >= 4 presentation; it is used by P1(c_2) = 2 z c_1")
        .note("audit: the printed value of c_{p-1} X' is -x'^{p-1} X; the file uses -x'^{p-1} X', which is what beta applied to c_{p-1} Y' = -x'^{p-1} Y' gives")
        .note("audit: the case brackets of c_i y, c_i x, c_i Y, c_i X and d_i y, d_i x, d_i X carry no conditions; they are read with the conditions printed beside c_i y', c_i x', c_i Y', c_i X', d_i y', d_i x', d_i X'")
        .note("audit: d_i d_j is read for i > j; the printed condition 'i < p' would also kill d_{p-1} d_p = -d_p d_{p-1}")
        .note("audit: x^p x' = x'^p x = 0 is transcribed as two relations")
        .note("audit: d_p x' is printed as -x'^{p-1} X'; the file uses +x'^{p-1} X', mirroring d_p x = x^{p-1} X. With the printed sign, beta of d_p y' = -x'^{p-1} Y' leaves 2 x'^{p-1} X'")
        .note("P1 on d_i is not listed and stays undefined")
        .build()
}

fn ppn(p: u32, n: u32) -> Result<Presentation, PresentationError> {
    let q = p - 1;
    let mut b = PresentationBuilder::new(format!("Ppn_p{p}_n{n}"), p)
        .generator("u", 1)
        .generator("y", 1)
        .generator("y'", 1)
        .generator("x", 2)
        .generator("x'", 2);
    for i in 2..=q {
        b = b.generator(&format!("c_{i}"), 2 * i);
    }
    b = b
        .generator("z", 2 * p)
        .define("c_1", "y'*y")
        .relation("x*y'", "x'*y")
        .relation(&format!("x^{p}*y'"), &format!("x'^{p}*y"))
        .relation(&format!("x^{p}*x'"), &format!("x'^{p}*x"));
    b = c_relations(b, p, false);
    b = b.beta("y", "x").beta("y'", "x'").beta("u", if n == 4 { "y'*y" } else { "0" });
    b = b.beta_default("x").beta_default("x'");
    for i in 2..=q {
        b = b.beta_default(&format!("c_{i}"));
    }
    b = b.beta_default("z").p1("z", &format!("z*c_{q}"));
    b = p1_c(b, p, |_| true);
    if n >= 5 {
        b = b.higher_bockstein(n - 3, "u", "y*y'");
    }
    b.weak_generators(&["y", "y'"])
        .note("beta(u) = y'y for n = 4 and beta_{n-3}(u) = yy' for n >= 5, each as stated")
        .build()
}

fn tower(p: u32, i: u32) -> Result<Presentation, PresentationError> {
    let (u, v) = (format!("u_{i}"), format!("v_{i}"));
    let mut b = PresentationBuilder::new(format!("Tower_p{p}_i{i}"), p)
        .generator(&u, 1)
        .generator("y", 1)
        .generator("y'", 1)
        .generator(&v, 2)
        .generator("x", 2)
        .generator("x'", 2)
        .beta("y", "x")
        .beta("y'", "x'");
    if i == 1 {
        b = b.beta(&u, &v);
    } else {
        b = b.beta_default(&u).higher_bockstein(i, &u, &v);
    }
    b.beta_default(&v)
        .beta_default("x")
        .beta_default("x'")
        .note("higher Bocksteins other than the one on u_i are zero")
        .build()
}

fn cyclic(p: u32, i: u32) -> Result<Presentation, PresentationError> {
    let mut b = PresentationBuilder::new(format!("Cyclic_p{p}_i{i}"), p).generator("u", 1).generator("v", 2);
    if i == 1 {
        b = b.beta("u", "v");
    } else {
        b = b.beta_default("u").higher_bockstein(i, "u", "v");
    }
    b.beta_default("v").note("higher Bocksteins other than the one on u are zero").build()
}
