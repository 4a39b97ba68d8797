//! Finite presentations: generators, relations and the operation tables.

use thiserror::Error;

use super::expr::{self, ExprError};
use super::poly::{FreeAlgebra, GeneratorInfo, Polynomial};
use crate::fplin;
use crate::ops::OpKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Modulus(#[from] fplin::LinalgError),
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
    #[error("{location}: {source}")]
    Expr { location: String, source: ExprError },
}

fn invalid(location: impl Into<String>, message: impl Into<String>) -> PresentationError {
    PresentationError::Invalid { location: location.into(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub polynomial: Polynomial,
    /// Transcribed source text, when known.
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HigherBockstein {
    pub page: u32,
    pub gen: usize,
    pub value: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub value: Polynomial,
}

/// A stated value of an operation on a non-generator element, checked by `validate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub op: OpKind,
    pub argument: Polynomial,
    pub value: Polynomial,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    /// Given explicitly in the presentation.
    Listed,
    /// β defaulted to zero; recorded in the data file.
    Default,
    /// P¹ forced by instability on a generator of degree 1 or 2.
    Instability,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub value: Polynomial,
    pub source: TableSource,
}

/// A finitely presented graded-commutative `F_p`-algebra with β, P¹ and
/// higher Bockstein tables. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    name: String,
    algebra: FreeAlgebra,
    relations: Vec<Relation>,
    beta: Vec<Option<TableEntry>>,
    p1: Vec<Option<TableEntry>>,
    higher_bocksteins: Vec<HigherBockstein>,
    definitions: Vec<Definition>,
    identities: Vec<Identity>,
    weak_generators: Vec<usize>,
    notes: Vec<String>,
}

impl Presentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    pub fn p(&self) -> u32 {
        self.algebra.p() as u32
    }

    pub fn generators(&self) -> &[GeneratorInfo] {
        self.algebra.generators()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn beta_entry(&self, gen: usize) -> Option<&TableEntry> {
        self.beta[gen].as_ref()
    }

    pub fn p1_entry(&self, gen: usize) -> Option<&TableEntry> {
        self.p1[gen].as_ref()
    }

    pub fn higher_bocksteins(&self) -> &[HigherBockstein] {
        &self.higher_bocksteins
    }

    pub fn definitions(&self) -> &[Definition] {
        &self.definitions
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    pub fn weak_generators(&self) -> &[usize] {
        &self.weak_generators
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.generators().iter().map(|g| g.degree).max().unwrap_or(0)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.algebra.generator_index(name)
    }

    pub fn definition(&self, name: &str) -> Option<&Polynomial> {
        self.definitions.iter().find(|d| d.name == name).map(|d| &d.value)
    }

    /// Parses an expression in generators and named definitions.
    pub fn parse(&self, src: &str) -> Result<Polynomial, ExprError> {
        let alg = &self.algebra;
        expr::parse_with(alg, src, |name| {
            alg.generator_index(name).map(|i| alg.gen(i)).or_else(|| self.definition(name).cloned())
        })
    }

    pub fn format(&self, q: &Polynomial) -> String {
        self.algebra.format(q)
    }

    /// Copy with one relation removed; used for negative-control fixtures.
    pub fn without_relation(&self, index: usize) -> Presentation {
        let mut out = self.clone();
        out.relations.remove(index);
        out.name = format!("{}-without-relation-{index}", self.name);
        out
    }

    /// Copy with the higher Bockstein table replaced.
    pub fn with_higher_bocksteins(&self, table: Vec<HigherBockstein>) -> Presentation {
        let mut out = self.clone();
        out.higher_bocksteins = table;
        out
    }
}

/// Incremental construction from transcribed expressions.
#[derive(Debug, Clone)]
pub struct PresentationBuilder {
    name: String,
    p: u32,
    generators: Vec<GeneratorInfo>,
    relations: Vec<(String, Option<Polynomial>, bool)>,
    beta: Vec<(String, Option<String>)>,
    p1: Vec<(String, String)>,
    higher: Vec<(u32, String, String)>,
    definitions: Vec<(String, String)>,
    identities: Vec<(OpKind, String, String, String)>,
    weak: Vec<String>,
    notes: Vec<String>,
}

impl PresentationBuilder {
    pub fn new(name: impl Into<String>, p: u32) -> Self {
        Self {
            name: name.into(),
            p,
            generators: Vec::new(),
            relations: Vec::new(),
            beta: Vec::new(),
            p1: Vec::new(),
            higher: Vec::new(),
            definitions: Vec::new(),
            identities: Vec::new(),
            weak: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn generator(mut self, name: &str, degree: u32) -> Self {
        self.generators.push(GeneratorInfo::new(name, degree));
        self
    }

    pub fn define(mut self, name: &str, expr: &str) -> Self {
        self.definitions.push((name.into(), expr.into()));
        self
    }

    /// A relation `lhs = rhs`, stored as `lhs - rhs`.
    pub fn relation(mut self, lhs: &str, rhs: &str) -> Self {
        self.relations.push((format!("{lhs} = {rhs}"), None, false));
        self
    }

    /// Like [`relation`](Self::relation), but a relation that already holds in the
    /// free algebra is dropped and recorded as a note instead of rejected.
    pub fn relation_unless_trivial(mut self, lhs: &str, rhs: &str) -> Self {
        self.relations.push((format!("{lhs} = {rhs}"), None, true));
        self
    }

    pub fn relation_polynomial(mut self, label: &str, poly: Polynomial) -> Self {
        self.relations.push((label.into(), Some(poly), false));
        self
    }

    pub fn beta(mut self, gen: &str, expr: &str) -> Self {
        self.beta.push((gen.into(), Some(expr.into())));
        self
    }

    pub fn beta_default(mut self, gen: &str) -> Self {
        self.beta.push((gen.into(), None));
        self
    }

    pub fn p1(mut self, gen: &str, expr: &str) -> Self {
        self.p1.push((gen.into(), expr.into()));
        self
    }

    pub fn higher_bockstein(mut self, page: u32, gen: &str, expr: &str) -> Self {
        self.higher.push((page, gen.into(), expr.into()));
        self
    }

    pub fn identity(mut self, op: OpKind, argument: &str, value: &str, label: &str) -> Self {
        self.identities.push((op, argument.into(), value.into(), label.into()));
        self
    }

    pub fn weak_generators(mut self, names: &[&str]) -> Self {
        self.weak = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn note(mut self, note: &str) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn build(self) -> Result<Presentation, PresentationError> {
        let pp = fplin::check_prime(self.p)?;
        let mut raw = RawPresentation::new(self.name, pp, self.generators)?;
        for (name, src) in &self.definitions {
            let value = raw.parse(src, &format!("definition {name}"))?;
            raw.definitions.push(Definition { name: name.clone(), value });
        }
        let mut notes = self.notes;
        for (label, poly, allow_trivial) in self.relations {
            let poly = match poly {
                Some(poly) => poly,
                None => {
                    let (lhs, rhs) = label.split_once(" = ").expect("relation label has the form lhs = rhs");
                    let l = raw.parse(lhs, &label)?;
                    let r = raw.parse(rhs, &label)?;
                    l.sub(&r, pp)
                }
            };
            if allow_trivial && poly.is_zero() {
                notes.push(format!("`{label}` holds in the free graded-commutative algebra and is omitted"));
                continue;
            }
            raw.relations.push(Relation { polynomial: poly, label: Some(label) });
        }
        for (gen, src) in &self.beta {
            let g = raw.gen(gen, "beta")?;
            let entry = match src {
                Some(src) => TableEntry { value: raw.parse(src, &format!("beta({gen})"))?, source: TableSource::Listed },
                None => TableEntry { value: Polynomial::zero(), source: TableSource::Default },
            };
            raw.set_table(OpKind::Beta, g, entry)?;
        }
        for (gen, src) in &self.p1 {
            let g = raw.gen(gen, "p1")?;
            let value = raw.parse(src, &format!("P1({gen})"))?;
            raw.set_table(OpKind::P1, g, TableEntry { value, source: TableSource::Listed })?;
        }
        for (page, gen, src) in &self.higher {
            let g = raw.gen(gen, "higher_bocksteins")?;
            let value = raw.parse(src, &format!("beta_{page}({gen})"))?;
            raw.higher_bocksteins.push(HigherBockstein { page: *page, gen: g, value });
        }
        for (op, arg, value, label) in &self.identities {
            let argument = raw.parse(arg, label)?;
            let value = raw.parse(value, label)?;
            raw.identities.push(Identity { op: *op, argument, value, label: label.clone() });
        }
        for w in &self.weak {
            let g = raw.gen(w, "weak_generators")?;
            raw.weak_generators.push(g);
        }
        raw.notes = notes;
        raw.finish()
    }
}

/// Shared assembly and validation for the builder and the file reader.
pub(crate) struct RawPresentation {
    pub name: String,
    pub algebra: FreeAlgebra,
    pub relations: Vec<Relation>,
    pub beta: Vec<Option<TableEntry>>,
    pub p1: Vec<Option<TableEntry>>,
    pub higher_bocksteins: Vec<HigherBockstein>,
    pub definitions: Vec<Definition>,
    pub identities: Vec<Identity>,
    pub weak_generators: Vec<usize>,
    pub notes: Vec<String>,
}

impl RawPresentation {
    pub fn new(name: String, p: u8, generators: Vec<GeneratorInfo>) -> Result<Self, PresentationError> {
        for (i, g) in generators.iter().enumerate() {
            let loc = format!("generators[{i}]");
            if g.degree == 0 {
                return Err(invalid(loc, format!("generator `{}` has degree 0", g.name)));
            }
            if !valid_name(&g.name) {
                return Err(invalid(loc, format!("`{}` is not a valid generator name", g.name)));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(invalid(loc, format!("duplicate generator `{}`", g.name)));
            }
        }
        let n = generators.len();
        Ok(Self {
            name,
            algebra: FreeAlgebra::new(p, generators),
            relations: Vec::new(),
            beta: vec![None; n],
            p1: vec![None; n],
            higher_bocksteins: Vec::new(),
            definitions: Vec::new(),
            identities: Vec::new(),
            weak_generators: Vec::new(),
            notes: Vec::new(),
        })
    }

    fn parse(&self, src: &str, location: &str) -> Result<Polynomial, PresentationError> {
        let alg = &self.algebra;
        expr::parse_with(alg, src, |name| {
            alg.generator_index(name)
                .map(|i| alg.gen(i))
                .or_else(|| self.definitions.iter().find(|d| d.name == name).map(|d| d.value.clone()))
        })
        .map_err(|source| PresentationError::Expr { location: location.to_string(), source })
    }

    pub fn gen(&self, name: &str, location: &str) -> Result<usize, PresentationError> {
        self.algebra
            .generator_index(name)
            .ok_or_else(|| invalid(location, format!("undeclared generator `{name}`")))
    }

    pub fn set_table(&mut self, op: OpKind, g: usize, entry: TableEntry) -> Result<(), PresentationError> {
        let name = self.algebra.generators()[g].name.clone();
        let table = match op {
            OpKind::Beta => &mut self.beta,
            OpKind::P1 => &mut self.p1,
        };
        if table[g].is_some() {
            return Err(invalid(format!("{}({name})", op.name()), "duplicate table entry"));
        }
        table[g] = Some(entry);
        Ok(())
    }

    pub fn finish(mut self) -> Result<Presentation, PresentationError> {
        let alg = &self.algebra;
        let p = alg.p() as u32;
        let check_degree = |q: &Polynomial, want: u32, loc: &str| -> Result<(), PresentationError> {
            if q.is_zero() {
                return Ok(());
            }
            match alg.degree(q) {
                None => Err(invalid(loc, "value is not homogeneous")),
                Some(d) if d != want => Err(invalid(loc, format!("value has degree {d}, expected {want}"))),
                Some(_) => Ok(()),
            }
        };
        for (i, r) in self.relations.iter().enumerate() {
            let loc = match &r.label {
                Some(l) => format!("relations[{i}] ({l})"),
                None => format!("relations[{i}]"),
            };
            if r.polynomial.is_zero() {
                return Err(invalid(loc, "relation vanishes identically in the free algebra"));
            }
            if alg.degree(&r.polynomial).is_none() {
                return Err(invalid(loc, "relation is not homogeneous"));
            }
        }
        for (g, info) in alg.generators().iter().enumerate() {
            if let Some(e) = &self.beta[g] {
                check_degree(&e.value, info.degree + 1, &format!("beta({})", info.name))?;
            }
            if let Some(e) = &self.p1[g] {
                check_degree(&e.value, info.degree + 2 * (p - 1), &format!("p1({})", info.name))?;
            }
        }
        for h in &self.higher_bocksteins {
            let info = &alg.generators()[h.gen];
            if h.page < 2 {
                return Err(invalid(format!("beta_{}({})", h.page, info.name), "higher Bockstein page must be at least 2"));
            }
            check_degree(&h.value, info.degree + 1, &format!("beta_{}({})", h.page, info.name))?;
        }
        for d in &self.definitions {
            if !d.value.is_zero() && alg.degree(&d.value).is_none() {
                return Err(invalid(format!("definition {}", d.name), "not homogeneous"));
            }
        }
        for id in &self.identities {
            let Some(d) = alg.degree(&id.argument) else {
                return Err(invalid(&id.label, "identity argument must be a nonzero homogeneous element"));
            };
            check_degree(&id.value, d + id.op.degree_shift(p), &id.label)?;
        }
        // instability: P¹ vanishes in degree 1 and is the p-th power in degree 2
        for (g, info) in alg.generators().iter().enumerate() {
            if self.p1[g].is_none() {
                let forced = match info.degree {
                    1 => Some(Polynomial::zero()),
                    2 => Some(alg.pow(&alg.gen(g), p)),
                    _ => None,
                };
                if let Some(value) = forced {
                    self.p1[g] = Some(TableEntry { value, source: TableSource::Instability });
                }
            }
        }
        Ok(Presentation {
            name: self.name,
            algebra: self.algebra,
            relations: self.relations,
            beta: self.beta,
            p1: self.p1,
            higher_bocksteins: self.higher_bocksteins,
            definitions: self.definitions,
            identities: self.identities,
            weak_generators: self.weak_generators,
            notes: self.notes,
        })
    }
}

fn valid_name(name: &str) -> bool {
    let core = name.trim_end_matches('\'');
    let mut chars = core.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
