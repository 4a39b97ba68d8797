//! The presentation file format (JSON).
//!
//! ```json
//! {
//!   "name": "P33_p3",
//!   "prime": 3,
//!   "generators": [{ "name": "y", "degree": 1 }],
//!   "relations": [[{ "coeff": 1, "monomial": { "y": 1, "y'": 1 } }]],
//!   "beta": { "y": [{ "coeff": 1, "monomial": { "x": 1 } }] },
//!   "beta_defaults": ["x"],
//!   "p1": {},
//!   "higher_bocksteins": [{ "page": 2, "gen": "u", "polynomial": [] }]
//! }
//! ```
//!
//! A polynomial is a list of terms; the empty list is zero. Writing always
//! produces the canonical layout: terms by descending exponent vector,
//! monomial entries in generator order.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::poly::{FreeAlgebra, GeneratorInfo, Monomial, Polynomial};
use super::presentation::{
    Definition, HigherBockstein, Identity, Presentation, PresentationError, RawPresentation, Relation, TableEntry,
    TableSource,
};
use crate::fplin;
use crate::ops::OpKind;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed presentation document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
}

fn invalid(location: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Invalid { location: location.into(), message: message.into() }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: i64,
    pub monomial: IndexMap<String, u32>,
}

pub type PolyDoc = Vec<TermDoc>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HigherDoc {
    pub page: u32,
    pub gen: String,
    pub polynomial: PolyDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityDoc {
    pub op: String,
    pub argument: PolyDoc,
    pub value: PolyDoc,
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub name: String,
    pub prime: u32,
    pub generators: Vec<GeneratorInfo>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weak_generators: Vec<String>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub definitions: IndexMap<String, PolyDoc>,
    pub relations: Vec<PolyDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relation_labels: Vec<String>,
    #[serde(default)]
    pub beta: IndexMap<String, PolyDoc>,
    #[serde(default)]
    pub beta_defaults: Vec<String>,
    #[serde(default)]
    pub p1: IndexMap<String, PolyDoc>,
    #[serde(default)]
    pub higher_bocksteins: Vec<HigherDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<IdentityDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Parses a presentation document and validates it.
pub fn from_str(src: &str) -> Result<Presentation, FormatError> {
    let doc: PresentationDoc = serde_json::from_str(src)?;
    from_doc(doc)
}

/// Canonical text of a presentation, newline terminated.
pub fn to_string(pres: &Presentation) -> String {
    let mut s = serde_json::to_string_pretty(&to_doc(pres)).expect("presentation documents always serialize");
    s.push('\n');
    s
}

pub fn from_doc(doc: PresentationDoc) -> Result<Presentation, FormatError> {
    let p = fplin::check_prime(doc.prime).map_err(PresentationError::from)?;
    let mut raw = RawPresentation::new(doc.name, p, doc.generators)?;
    for (name, poly) in &doc.definitions {
        let loc = format!("definitions.{name}");
        if raw.algebra.generator_index(name).is_some() {
            return Err(invalid(loc, "definition shadows a generator"));
        }
        let value = read_poly(&raw.algebra, poly, &loc)?;
        raw.definitions.push(Definition { name: name.clone(), value });
    }
    if !doc.relation_labels.is_empty() && doc.relation_labels.len() != doc.relations.len() {
        return Err(invalid("relation_labels", "must be empty or match the relation count"));
    }
    for (i, poly) in doc.relations.iter().enumerate() {
        let polynomial = read_poly(&raw.algebra, poly, &format!("relations[{i}]"))?;
        raw.relations.push(Relation { polynomial, label: doc.relation_labels.get(i).cloned() });
    }
    for (gen, poly) in &doc.beta {
        let g = raw.gen(gen, "beta")?;
        let value = read_poly(&raw.algebra, poly, &format!("beta.{gen}"))?;
        raw.set_table(OpKind::Beta, g, TableEntry { value, source: TableSource::Listed })?;
    }
    for gen in &doc.beta_defaults {
        let g = raw.gen(gen, "beta_defaults")?;
        raw.set_table(OpKind::Beta, g, TableEntry { value: Polynomial::zero(), source: TableSource::Default })?;
    }
    for (gen, poly) in &doc.p1 {
        let g = raw.gen(gen, "p1")?;
        let value = read_poly(&raw.algebra, poly, &format!("p1.{gen}"))?;
        raw.set_table(OpKind::P1, g, TableEntry { value, source: TableSource::Listed })?;
    }
    for (i, h) in doc.higher_bocksteins.iter().enumerate() {
        let loc = format!("higher_bocksteins[{i}]");
        let g = raw.gen(&h.gen, &loc)?;
        let value = read_poly(&raw.algebra, &h.polynomial, &loc)?;
        raw.higher_bocksteins.push(HigherBockstein { page: h.page, gen: g, value });
    }
    for (i, id) in doc.identities.iter().enumerate() {
        let loc = format!("identities[{i}]");
        let op = OpKind::from_name(&id.op).ok_or_else(|| invalid(&loc, format!("unknown operation `{}`", id.op)))?;
        let argument = read_poly(&raw.algebra, &id.argument, &loc)?;
        let value = read_poly(&raw.algebra, &id.value, &loc)?;
        raw.identities.push(Identity { op, argument, value, label: id.label.clone() });
    }
    for w in &doc.weak_generators {
        let g = raw.gen(w, "weak_generators")?;
        raw.weak_generators.push(g);
    }
    raw.notes = doc.notes;
    Ok(raw.finish()?)
}

pub fn to_doc(pres: &Presentation) -> PresentationDoc {
    let alg = pres.algebra();
    let name_of = |g: usize| alg.generators()[g].name.clone();
    let mut beta = IndexMap::new();
    let mut beta_defaults = Vec::new();
    let mut p1 = IndexMap::new();
    for g in 0..alg.ngens() {
        if let Some(e) = pres.beta_entry(g) {
            match e.source {
                TableSource::Default => beta_defaults.push(name_of(g)),
                _ => {
                    beta.insert(name_of(g), write_poly(alg, &e.value));
                }
            }
        }
        if let Some(e) = pres.p1_entry(g) {
            if e.source == TableSource::Listed {
                p1.insert(name_of(g), write_poly(alg, &e.value));
            }
        }
    }
    let labels: Vec<String> = pres.relations().iter().filter_map(|r| r.label.clone()).collect();
    PresentationDoc {
        name: pres.name().to_string(),
        prime: pres.p(),
        generators: alg.generators().to_vec(),
        weak_generators: pres.weak_generators().iter().map(|&g| name_of(g)).collect(),
        definitions: pres.definitions().iter().map(|d| (d.name.clone(), write_poly(alg, &d.value))).collect(),
        relations: pres.relations().iter().map(|r| write_poly(alg, &r.polynomial)).collect(),
        relation_labels: if labels.len() == pres.relations().len() { labels } else { Vec::new() },
        beta,
        beta_defaults,
        p1,
        higher_bocksteins: pres
            .higher_bocksteins()
            .iter()
            .map(|h| HigherDoc { page: h.page, gen: name_of(h.gen), polynomial: write_poly(alg, &h.value) })
            .collect(),
        identities: pres
            .identities()
            .iter()
            .map(|id| IdentityDoc {
                op: id.op.name().to_string(),
                argument: write_poly(alg, &id.argument),
                value: write_poly(alg, &id.value),
                label: id.label.clone(),
            })
            .collect(),
        notes: pres.notes().to_vec(),
    }
}

pub fn write_poly(alg: &FreeAlgebra, q: &Polynomial) -> PolyDoc {
    q.terms()
        .rev()
        .map(|(m, c)| TermDoc {
            coeff: c as i64,
            monomial: m.support().map(|(i, e)| (alg.generators()[i].name.clone(), e)).collect(),
        })
        .collect()
}

pub fn read_poly(alg: &FreeAlgebra, doc: &PolyDoc, location: &str) -> Result<Polynomial, FormatError> {
    let p = alg.p();
    let mut out = Polynomial::zero();
    for (k, term) in doc.iter().enumerate() {
        let loc = format!("{location}[{k}]");
        if term.coeff < 1 || term.coeff >= p as i64 {
            return Err(invalid(loc, format!("coefficient {} outside [1, {p})", term.coeff)));
        }
        let mut exps = vec![0u32; alg.ngens()];
        for (name, &e) in &term.monomial {
            let g = alg.generator_index(name).ok_or_else(|| invalid(&loc, format!("undeclared generator `{name}`")))?;
            if e == 0 {
                return Err(invalid(&loc, format!("zero exponent on `{name}`")));
            }
            if alg.generators()[g].is_odd() && e > 1 {
                return Err(invalid(&loc, format!("odd generator `{name}` raised to power {e}")));
            }
            exps[g] = e;
        }
        let m = Monomial(exps);
        if out.coefficient(&m) != 0 {
            return Err(invalid(&loc, "repeated monomial"));
        }
        out.add_term(m, term.coeff as u8, p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::presentation::PresentationBuilder;

    fn sample() -> Presentation {
        PresentationBuilder::new("sample", 3)
            .generator("y", 1)
            .generator("y'", 1)
            .generator("x", 2)
            .generator("X", 3)
            .define("c", "y'*y")
            .relation("y*y'", "0")
            .relation("X*y'", "x^2")
            .beta("y", "x")
            .beta_default("x")
            .p1("X", "x^2*X")
            .higher_bockstein(2, "y'", "c")
            .weak_generators(&["y", "y'"])
            .note("fixture")
            .build()
            .unwrap()
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let pres = sample();
        let text = to_string(&pres);
        let back = from_str(&text).unwrap();
        assert_eq!(back, pres);
        assert_eq!(to_string(&back), text);
    }

    #[test]
    fn rejects_odd_square() {
        let text = to_string(&sample()).replacen("\"y'\": 1", "\"y'\": 2", 1);
        let err = from_str(&text).unwrap_err();
        assert!(err.to_string().contains("odd generator"), "{err}");
    }

    #[test]
    fn rejects_out_of_range_coefficients() {
        let text = to_string(&sample()).replacen("\"coeff\": 1", "\"coeff\": 3", 1);
        assert!(from_str(&text).unwrap_err().to_string().contains("outside [1, 3)"));
        let text = to_string(&sample()).replacen("\"coeff\": 1", "\"coeff\": 0", 1);
        assert!(from_str(&text).is_err());
    }

    #[test]
    fn rejects_inhomogeneous_relation() {
        let mut doc = to_doc(&sample());
        doc.relations[0].push(TermDoc { coeff: 1, monomial: [("X".to_string(), 1)].into_iter().collect() });
        let err = from_doc(doc).unwrap_err();
        assert!(err.to_string().contains("relations[0]"), "{err}");
        assert!(err.to_string().contains("not homogeneous"), "{err}");
    }

    #[test]
    fn reports_json_location() {
        let err = from_str("{\"name\": \"x\", \"prime\": 3,,}").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }
}
