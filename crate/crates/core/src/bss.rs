//! Bockstein spectral sequence pages computed degreewise.
//!
//! A page `E_i` is stored as a pair of subspaces `B_i ⊆ Z_i` of each
//! quotient-basis space `V_d`, with `E_i^d = Z_i^d / B_i^d`. Page one has
//! `Z = V`, `B = 0` and differential β. The next page is the homology of
//! the current differential; its own differential comes from a table of
//! values on generators (or on monomials such as `x^p`), extended as a
//! derivation on representatives and then projected.
//!
//! Each turn loses one degree at the top: page `i` is known through degree
//! `cap - (i - 1)`.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{Catalog, CatalogError, CatalogKey};
use crate::fplin::{self, EchelonBasis, FpMatrix};
use crate::gca::{FreeAlgebra, GcaError, Monomial, Polynomial, QuotientRing};
use crate::ops::{self, OpsError};
use crate::report::{Check, DimRow};

#[derive(Debug, Error)]
pub enum BssError {
    #[error("page {page}: the listed value of {source_text} is {value}, which does not survive to page {page}")]
    TableValueDead { page: u32, source_text: String, value: String },
    #[error("page {page}: {source_text} does not survive to page {page}")]
    NotACycle { page: u32, source_text: String },
    #[error("page {page}: the differential of {rep} is {value}, which does not survive to page {page}")]
    InducedNotCycle { page: u32, rep: String, value: String },
    #[error("page {page} would have no degrees left")]
    PageEmpty { page: u32 },
    #[error("degree {degree} is above page {page}'s top degree {top}")]
    AboveTop { page: u32, degree: u32, top: u32 },
    #[error(transparent)]
    Gca(#[from] GcaError),
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Values of a page's differential on chosen sources.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffTable {
    pub entries: Vec<(Monomial, Polynomial)>,
}

impl DiffTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// The higher-Bockstein entries of the presentation for `page`.
    pub fn from_presentation(ring: &QuotientRing, page: u32) -> Self {
        let pres = ring.presentation();
        let ngens = pres.generators().len();
        let entries = pres
            .higher_bocksteins()
            .iter()
            .filter(|h| h.page == page)
            .map(|h| (Monomial::generator(ngens, h.gen), h.value.clone()))
            .collect();
        Self { entries }
    }

    pub fn with_entry(mut self, source: Monomial, value: Polynomial) -> Self {
        self.entries.push((source, value));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone)]
struct PageDegree {
    z: EchelonBasis,
    b: EchelonBasis,
    /// Complement of `b` in `z`, sorted by pivot column.
    reps: Vec<Vec<u8>>,
    rep_pivots: Vec<usize>,
}

impl PageDegree {
    fn new(z: EchelonBasis, b: EchelonBasis) -> Self {
        let mut r = EchelonBasis::new(z.p(), z.ambient_dim());
        for row in z.rows() {
            let mut v = row.clone();
            b.reduce(&mut v);
            r.insert(v);
        }
        let reps = r.sorted_rows();
        let rep_pivots = reps.iter().map(|v| v.iter().position(|&x| x != 0).expect("nonzero row")).collect();
        Self { z, b, reps, rep_pivots }
    }

    fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of a cycle in the representative basis.
    fn project(&self, mut v: Vec<u8>) -> Vec<u8> {
        self.b.reduce(&mut v);
        self.rep_pivots.iter().map(|&c| v[c]).collect()
    }

    fn lift(&self, coords: &[u8], p: u8) -> Vec<u8> {
        let mut v = vec![0u8; self.z.ambient_dim()];
        for (c, rep) in coords.iter().zip(&self.reps) {
            if *c != 0 {
                fplin::axpy(&mut v, *c, rep, p);
            }
        }
        v
    }
}

/// One page of the spectral sequence through degree `top`.
#[derive(Debug, Clone)]
pub struct Page {
    ring: Arc<QuotientRing>,
    index: u32,
    top: u32,
    reversed: bool,
    degrees: Vec<PageDegree>,
    /// `diff[d]` maps degree `d` to degree `d + 1`, for `d < top`.
    diff: Vec<FpMatrix>,
    table: DiffTable,
}

impl Page {
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn top(&self) -> u32 {
        self.top
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    /// The table the differential of this page was built from; empty on page one.
    pub fn table(&self) -> &DiffTable {
        &self.table
    }

    pub fn dim(&self, d: u32) -> usize {
        self.degrees[d as usize].dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(PageDegree::dim).collect()
    }

    pub fn differential(&self, d: u32) -> &FpMatrix {
        &self.diff[d as usize]
    }

    fn p(&self) -> u8 {
        self.ring.p()
    }

    fn to_work(&self, mut v: Vec<u8>) -> Vec<u8> {
        if self.reversed {
            v.reverse();
        }
        v
    }

    fn from_work(&self, v: Vec<u8>) -> Vec<u8> {
        self.to_work(v)
    }

    fn check_degree(&self, d: u32) -> Result<(), BssError> {
        if d > self.top {
            return Err(BssError::AboveTop { page: self.index, degree: d, top: self.top });
        }
        Ok(())
    }

    /// A basis of the boundaries `B_i` in degree `d`, in quotient-basis coordinates.
    pub fn boundaries(&self, d: u32) -> Result<Vec<Vec<u8>>, BssError> {
        self.check_degree(d)?;
        Ok(self.degrees[d as usize].b.rows().iter().map(|r| self.from_work(r.clone())).collect())
    }

    /// Representatives of the classes in degree `d`, as normal forms.
    pub fn representatives(&self, d: u32) -> Result<Vec<Polynomial>, BssError> {
        self.check_degree(d)?;
        self.degrees[d as usize]
            .reps
            .iter()
            .map(|r| Ok(self.ring.from_coords(d, &self.from_work(r.clone()))?))
            .collect()
    }

    /// Coordinates of the class of `q` in degree `d`, or `None` when `q` is
    /// not a cycle on this page.
    pub fn class_of(&self, q: &Polynomial, d: u32) -> Result<Option<Vec<u8>>, BssError> {
        self.check_degree(d)?;
        let v = self.to_work(self.ring.coords_in(q, d)?);
        let deg = &self.degrees[d as usize];
        if !deg.z.contains(&v) {
            return Ok(None);
        }
        Ok(Some(deg.project(v)))
    }

    /// True when `q` survives to this page as a nonzero class.
    pub fn is_nonzero_class(&self, q: &Polynomial, d: u32) -> Result<bool, BssError> {
        Ok(self.class_of(q, d)?.is_some_and(|c| !fplin::is_zero(&c)))
    }

    /// The differential applied to a class given by coordinates in degree `d`.
    pub fn apply(&self, d: u32, coords: &[u8]) -> Vec<u8> {
        self.diff[d as usize].mul_vec(coords).expect("coordinates match the page")
    }

    /// `D ∘ D = 0` in every degree where both maps are known.
    pub fn check_d_squared(&self) -> Vec<Check> {
        (0..self.diff.len().saturating_sub(1))
            .map(|d| {
                let composite = self.diff[d + 1].mul(&self.diff[d]).expect("composable");
                Check::from_bool(
                    format!("page {} d^2 = 0 in degree {d}", self.index),
                    composite.is_zero(),
                    "",
                )
            })
            .collect()
    }
}

/// `E_1` through degree `top`, with differential β.
pub fn page_one(ring: Arc<QuotientRing>, top: u32) -> Result<Page, BssError> {
    page_one_ordered(ring, top, false)
}

/// As [`page_one`], with every subspace kept in reduced echelon form for the
/// reversed column order. Used to check that dimensions do not depend on the
/// choice of representatives.
pub fn page_one_ordered(ring: Arc<QuotientRing>, top: u32, reversed: bool) -> Result<Page, BssError> {
    let p = ring.p();
    let mut degrees = Vec::new();
    for d in 0..=top {
        let n = ring.dim(d)?;
        let mut z = EchelonBasis::new(p as u32, n);
        for k in 0..n {
            let mut e = vec![0u8; n];
            e[k] = 1;
            z.insert(e);
        }
        degrees.push(PageDegree::new(z, EchelonBasis::new(p as u32, n)));
    }
    let mut page = Page { ring, index: 1, top, reversed, degrees, diff: Vec::new(), table: DiffTable::new() };
    for d in 0..top {
        let beta = ops::op_matrix(&page.ring, ops::OpKind::Beta, d)?;
        let reps = page.degrees[d as usize].reps.clone();
        let mut m = FpMatrix::zeros(p as u32, page.dim(d + 1), reps.len()).expect("valid prime");
        for (k, r) in reps.into_iter().enumerate() {
            let image = page.to_work(beta.mul_vec(&page.from_work(r)).expect("matching dims"));
            let col = page.degrees[d as usize + 1].project(image);
            for (row, c) in col.into_iter().enumerate() {
                m.set(row, k, c);
            }
        }
        page.diff.push(m);
    }
    Ok(page)
}

/// Homology of `page`, with differential extended from `table`.
pub fn turn_page(page: &Page, table: &DiffTable) -> Result<Page, BssError> {
    let p = page.p();
    let index = page.index + 1;
    if page.top == 0 {
        return Err(BssError::PageEmpty { page: index });
    }
    let top = page.top - 1;
    let mut degrees = Vec::new();
    for d in 0..=top as usize {
        let old = &page.degrees[d];
        let mut z = old.b.clone();
        for k in page.diff[d].kernel() {
            z.insert(old.lift(&k, p));
        }
        let mut b = old.b.clone();
        if d >= 1 {
            let m = &page.diff[d - 1];
            for c in 0..m.cols() {
                b.insert(old.lift(&m.column(c), p));
            }
        }
        degrees.push(PageDegree::new(z, b));
    }
    let mut next = Page {
        ring: page.ring.clone(),
        index,
        top,
        reversed: page.reversed,
        degrees,
        diff: Vec::new(),
        table: table.clone(),
    };
    let ring = next.ring.clone();
    let alg = ring.algebra();
    let mut sources: Vec<(Monomial, Polynomial, u32)> = Vec::new();
    for (s, value) in &table.entries {
        let e = alg.monomial_degree(s);
        let s_poly = Polynomial::from_term(s.clone(), 1);
        let source_text = alg.format(&s_poly);
        if e < top {
            if next.class_of(&s_poly, e)?.is_none() {
                return Err(BssError::NotACycle { page: index, source_text });
            }
            let nf = ring.normal_form_any(value)?;
            if next.class_of(&nf, e + 1)?.is_none() {
                return Err(BssError::TableValueDead { page: index, source_text, value: alg.format(&nf) });
            }
        }
        sources.push((s.clone(), value.clone(), e));
    }
    sources.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
    for d in 0..top {
        let reps = next.representatives(d)?;
        let mut m = FpMatrix::zeros(p as u32, next.dim(d + 1), reps.len()).expect("valid prime");
        for (k, r) in reps.iter().enumerate() {
            let mut image = Polynomial::zero();
            for (mono, c) in r.terms() {
                image.add_scaled(&derive(alg, &sources, mono), c, p);
            }
            let image = ring.normal_form_any(&image)?;
            let coords = next.class_of(&image, d + 1)?.ok_or_else(|| BssError::InducedNotCycle {
                page: index,
                rep: alg.format(r),
                value: alg.format(&image),
            })?;
            for (row, c) in coords.into_iter().enumerate() {
                m.set(row, k, c);
            }
        }
        next.diff.push(m);
    }
    Ok(next)
}

fn quotient_monomial(m: &Monomial, s: &Monomial) -> Monomial {
    Monomial(m.0.iter().zip(&s.0).map(|(a, b)| a - b).collect())
}

/// Derivation of degree +1 determined by `sources`; generators that are not
/// sources go to zero. A monomial is split off its largest source first.
fn derive(alg: &FreeAlgebra, sources: &[(Monomial, Polynomial, u32)], m: &Monomial) -> Polynomial {
    if m.is_one() {
        return Polynomial::zero();
    }
    let p = alg.p();
    let found = sources.iter().find(|(s, _, _)| s.divides(m));
    let (s, value, e) = match found {
        Some((s, v, e)) => (s.clone(), v.clone(), *e),
        None => {
            let (g, _) = m.support().next().expect("non-unit monomial");
            let s = Monomial::generator(m.0.len(), g);
            (s, Polynomial::zero(), alg.gen_degree(g))
        }
    };
    let rest = quotient_monomial(m, &s);
    let Some((neg, _)) = alg.mul_monomials(&s, &rest) else {
        return Polynomial::zero();
    };
    let s_poly = Polynomial::from_term(s, 1);
    let rest_poly = Polynomial::from_term(rest.clone(), 1);
    let mut out = alg.mul(&value, &rest_poly);
    let tail = alg.mul(&s_poly, &derive(alg, sources, &rest));
    out.add_scaled(&tail, if e % 2 == 0 { 1 } else { p - 1 }, p);
    if neg {
        out = out.scaled(p - 1, p);
    }
    out
}

/// Pages `E_1 .. E_count` of a presentation, turning with its own
/// higher-Bockstein tables. Page one runs through the ring's cap.
pub fn pages(ring: Arc<QuotientRing>, count: u32) -> Result<Vec<Page>, BssError> {
    let top = ring.cap();
    let mut out = vec![page_one(ring.clone(), top)?];
    for i in 2..=count {
        let table = DiffTable::from_presentation(&ring, i);
        let next = turn_page(out.last().expect("nonempty"), &table)?;
        out.push(next);
    }
    Ok(out)
}

/// Result of [`check_axiom_b`].
#[derive(Debug, Clone, Serialize)]
pub struct AxiomBReport {
    pub checks: Vec<Check>,
}

impl AxiomBReport {
    pub fn vacuous(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn passed(&self) -> bool {
        self.mismatches().next().is_none()
    }
}

/// For each even source `x` with a listed differential on page `i` whose
/// `p`-th power survives to page `i + 1` as a nonzero class, compares the
/// page-`(i+1)` differential of `[x^p]` with `[x^{p-1} β_i(x)]`.
pub fn check_axiom_b(pages: &[Page]) -> Result<AxiomBReport, BssError> {
    let mut checks = Vec::new();
    for w in pages.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        let ring = &cur.ring;
        let alg = ring.algebra();
        let p = ring.p();
        let pres = ring.presentation();
        let ngens = pres.generators().len();
        let entries: Vec<(Monomial, Polynomial)> = if cur.index == 1 {
            (0..ngens)
                .filter(|&g| pres.beta_entry(g).is_some())
                .map(|g| (Monomial::generator(ngens, g), pres.beta_entry(g).expect("filtered").value.clone()))
                .collect()
        } else {
            cur.table.entries.clone()
        };
        for (s, value) in entries {
            let e = alg.monomial_degree(&s);
            if e % 2 != 0 || p as u32 * e + 1 > next.top {
                continue;
            }
            let s_poly = Polynomial::from_term(s, 1);
            let power = ring.normal_form_any(&alg.pow(&s_poly, p as u32))?;
            let pe = p as u32 * e;
            let Some(power_class) = next.class_of(&power, pe)? else {
                continue;
            };
            if fplin::is_zero(&power_class) {
                continue;
            }
            let name = format!(
                "page {}: d[{}^{p}] = [{}^{} * ({})]",
                next.index,
                alg.format(&s_poly),
                alg.format(&s_poly),
                p - 1,
                alg.format(&value)
            );
            let lhs = next.apply(pe, &power_class);
            let rhs_poly = ring.normal_form_any(&alg.mul(&alg.pow(&s_poly, p as u32 - 1), &value))?;
            match next.class_of(&rhs_poly, pe + 1)? {
                None => checks.push(Check::fail(name, "right-hand side does not survive")),
                Some(rhs) => {
                    checks.push(Check::from_bool(name, lhs == rhs, format!("differential {lhs:?}, expected {rhs:?}")))
                }
            }
        }
    }
    Ok(AxiomBReport { checks })
}

/// Result of [`tower_report`].
#[derive(Debug, Clone, Serialize)]
pub struct TowerReport {
    pub checks: Vec<Check>,
    pub dims: Vec<DimRow>,
}

impl TowerReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Checks each stage `E(u_i, y, y') ⊗ F_p[v_i, x, x']`, `1 ≤ i ≤ n - 3`, of
/// the tower over `P(p, n)`: its differential `u_i ↦ v_i` turns the page
/// cleanly and `E_{i+1}` is `F_p` in degree 0 through `top`. At the top,
/// the differential of `u` on page `n - 3` of `P(p, n)` must be the nonzero
/// class `[yy']` (for `n = 4`, `β(u) = y'y` directly).
pub fn tower_report(catalog: &Catalog, p: u32, n: u32, top: u32) -> Result<TowerReport, BssError> {
    let mut checks = Vec::new();
    let mut dims = Vec::new();
    for i in 1..=n.saturating_sub(3) {
        let key = CatalogKey::tower(p, i);
        let pres = catalog.load(&key)?;
        let ring = Arc::new(QuotientRing::new(pres, top + i));
        let label = format!("Tower i={i}");
        match pages(ring.clone(), i + 1) {
            Err(e) => checks.push(Check::fail(format!("{label}: pages turn"), e.to_string())),
            Ok(pg) => {
                let alg = ring.algebra();
                let u = alg.gen(ring.presentation().generator_index(&format!("u_{i}")).expect("u_i"));
                let v = alg.gen(ring.presentation().generator_index(&format!("v_{i}")).expect("v_i"));
                let page = &pg[i as usize - 1];
                let du = page.class_of(&u, 1)?.map(|c| page.apply(1, &c));
                let cv = page.class_of(&v, 2)?;
                checks.push(Check::from_bool(
                    format!("{label}: d_{i}[u_{i}] = [v_{i}] != 0"),
                    du.is_some() && du == cv && cv.as_ref().is_some_and(|c| !fplin::is_zero(c)),
                    "",
                ));
                let last = pg.last().expect("pages");
                let got: Vec<usize> = last.dims().into_iter().take(top as usize + 1).collect();
                let mut want = vec![0; top as usize + 1];
                want[0] = 1;
                checks.push(Check::from_bool(
                    format!("{label}: E_{} is F_p in degree 0 through {top}", i + 1),
                    got == want,
                    format!("dims {got:?}"),
                ));
                let sq: Vec<Check> = pg.iter().flat_map(Page::check_d_squared).collect();
                checks.push(Check::from_bool(format!("{label}: d^2 = 0"), sq.iter().all(Check::passed), ""));
                dims.push(DimRow { label: format!("{label} E_{}", i + 1), values: got });
            }
        }
    }
    let key = CatalogKey::ppn(p, n);
    let pres = catalog.load(&key)?;
    let page_index = n - 3;
    let ring = Arc::new(QuotientRing::new(pres, top + page_index.saturating_sub(1)));
    let alg = ring.algebra();
    let idx = |name: &str| ring.presentation().generator_index(name).expect("generator");
    let u = alg.gen(idx("u"));
    let yy = alg.mul(&alg.gen(idx("y")), &alg.gen(idx("y'")));
    if n == 4 {
        let bu = ops::eval_beta(&ring, &u)?;
        let target = ring.normal_form(&alg.mul(&alg.gen(idx("y'")), &alg.gen(idx("y"))))?;
        checks.push(Check::from_bool(
            format!("{key}: beta(u) = y'y != 0"),
            bu == target && !target.is_zero(),
            format!("beta(u) = {}", alg.format(&bu)),
        ));
    } else {
        match pages(ring.clone(), page_index) {
            Err(e) => checks.push(Check::fail(format!("{key}: pages turn"), e.to_string())),
            Ok(pg) => {
                let page = pg.last().expect("pages");
                let class_yy = page.class_of(&yy, 2)?;
                let nonzero = class_yy.as_ref().is_some_and(|c| !fplin::is_zero(c));
                checks.push(Check::from_bool(format!("{key}: [yy'] != 0 on page {page_index}"), nonzero, ""));
                let du = page.class_of(&u, 1)?.map(|c| page.apply(1, &c));
                checks.push(Check::from_bool(
                    format!("{key}: d_{page_index}[u] = [yy']"),
                    du.is_some() && du == class_yy,
                    format!("d[u] = {du:?}, [yy'] = {class_yy:?}"),
                ));
                for (k, pgk) in pg.iter().enumerate() {
                    dims.push(DimRow { label: format!("{key} E_{}", k + 1), values: pgk.dims() });
                }
            }
        }
    }
    Ok(TowerReport { checks, dims })
}
