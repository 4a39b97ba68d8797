//! Endomorphisms of a presentation that commute with β, P¹ and the listed
//! higher Bocksteins, found by search, and the degreewise surjectivity test
//! that certifies each one is an isomorphism.
//!
//! The image of a generator `g` is written `Σ t_k b_k` over the quotient
//! basis in degree `|g|` with unknown coordinates `t_k ∈ F_p`. Generators
//! are introduced in ascending degree; each constraint becomes polynomial
//! equations in the `t_k` as soon as all its generators are present.
//! Equations where an unknown occurs only linearly are solved and
//! substituted; a univariate equation with a single root fixes its unknown.
//! When neither applies the search branches on one unknown. Unknowns that
//! remain free at the end parametrize a family of solutions.
//!
//! Constraints:
//! - every relation maps to zero;
//! - `φ(β g) = β(φ(g))` for every generator with a listed or default β;
//! - `φ(P¹ g) = P¹(φ(g))` for generators whose P¹ is listed; values forced
//!   by instability hold for every assignment and are not imposed;
//! - for a higher Bockstein `β_i(g) = v`, with `a` the coefficient of `g`
//!   in `φ(g)`, `a·v − φ(v)` lies in the boundaries of page `i`.
//!
//! Constraints whose degree exceeds the ring's cap are skipped and listed.

mod tpoly;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use tpoly::{TMono, TPoly};

use crate::bss::{self, BssError};
use crate::fplin::{self, EchelonBasis, FpMatrix};
use crate::gca::{GcaError, Monomial, Polynomial, QuotientRing, TableSource};
use crate::ops::{self, OpKind, OpsError};
use crate::report::Check;

/// Default limit on search nodes.
pub const DEFAULT_BUDGET: u64 = 200_000;
/// Largest family expanded into explicit solutions.
pub const MAX_FAMILY_SIZE: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum RigidityError {
    #[error("cap {cap} is below generator degree {degree}")]
    CapTooSmall { cap: u32, degree: u32 },
    #[error("search exceeded the budget of {budget} nodes")]
    SearchBudgetExceeded { budget: u64 },
    #[error("a family has {size} members, more than can be listed")]
    FamilyTooLarge { size: u64 },
    #[error("the matrix on the weak generators is not invertible")]
    NotInvertible,
    #[error("the presentation designates {0} weak generators; two are needed")]
    WeakGenerators(usize),
    #[error("the constraints have no solution")]
    Inconsistent,
    #[error("higher Bockstein source {0} is not a basis monomial")]
    BadHigherSource(String),
    #[error(transparent)]
    Gca(#[from] GcaError),
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Bss(#[from] BssError),
}

/// What an endomorphism does on the weak generators `y, y'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum H1Mode {
    /// `φ(y) = y`, `φ(y') = y'`.
    FixIdentity,
    /// `φ(w_j) = Σ_i L[i][j] w_i` for the weak generators `w_0, w_1`.
    LinearIso([[u8; 2]; 2]),
}

impl H1Mode {
    fn weak_images(&self, p: u8) -> Result<[[u8; 2]; 2], RigidityError> {
        match *self {
            H1Mode::FixIdentity => Ok([[1, 0], [0, 1]]),
            H1Mode::LinearIso(l) => {
                let det = fplin::sub(fplin::mul(l[0][0], l[1][1], p), fplin::mul(l[0][1], l[1][0], p), p);
                if det == 0 {
                    return Err(RigidityError::NotInvertible);
                }
                Ok(l)
            }
        }
    }
}

/// All invertible 2×2 matrices over `F_p`, in lexicographic order.
pub fn gl2(p: u8) -> Vec<[[u8; 2]; 2]> {
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let det = fplin::sub(fplin::mul(a, d, p), fplin::mul(b, c, p), p);
                    if det != 0 {
                        out.push([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub budget: u64,
    /// Only generators up to this degree take part; constraints involving
    /// others are left out.
    pub max_generator_degree: Option<u32>,
    /// Prefer low-numbered unknowns when solving and branching.
    pub reverse_order: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, max_generator_degree: None, reverse_order: false }
    }
}

/// A degree-preserving assignment of generator images, stored as
/// quotient-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endomorphism {
    pub coords: Vec<Vec<u8>>,
}

impl Endomorphism {
    pub fn identity(ring: &QuotientRing) -> Result<Self, RigidityError> {
        let pres = ring.presentation();
        let alg = ring.algebra();
        let coords = (0..pres.generators().len())
            .map(|g| ring.coords_in(&alg.gen(g), alg.gen_degree(g)))
            .collect::<Result<_, _>>()?;
        Ok(Self { coords })
    }

    /// Sends every generator to zero.
    pub fn zero(ring: &QuotientRing) -> Result<Self, RigidityError> {
        let alg = ring.algebra();
        let coords =
            (0..alg.ngens()).map(|g| Ok(vec![0; ring.dim(alg.gen_degree(g))?])).collect::<Result<_, GcaError>>()?;
        Ok(Self { coords })
    }

    pub fn from_images(ring: &QuotientRing, images: &[Polynomial]) -> Result<Self, RigidityError> {
        let alg = ring.algebra();
        let coords = images
            .iter()
            .enumerate()
            .map(|(g, q)| ring.coords_in(q, alg.gen_degree(g)))
            .collect::<Result<_, _>>()?;
        Ok(Self { coords })
    }

    pub fn images(&self, ring: &QuotientRing) -> Result<Vec<Polynomial>, RigidityError> {
        let alg = ring.algebra();
        self.coords.iter().enumerate().map(|(g, c)| Ok(ring.from_coords(alg.gen_degree(g), c)?)).collect()
    }

    /// Generator name to image, in canonical text form.
    pub fn format(&self, ring: &QuotientRing) -> Result<BTreeMap<String, String>, RigidityError> {
        let pres = ring.presentation();
        Ok(self
            .images(ring)?
            .iter()
            .zip(pres.generators())
            .map(|(q, info)| (info.name.clone(), pres.format(q)))
            .collect())
    }

    /// `φ(q)` in normal form for a homogeneous `q`.
    pub fn apply(&self, ring: &QuotientRing, q: &Polynomial) -> Result<Polynomial, RigidityError> {
        let mut products = Products::new(ring);
        let mut by_degree: BTreeMap<u32, Vec<u8>> = BTreeMap::new();
        let alg = ring.algebra();
        let p = ring.p();
        for (m, c) in q.terms() {
            let d = alg.monomial_degree(m);
            let v = products.eval_monomial_const(&self.coords, m)?;
            let acc = by_degree.entry(d).or_insert_with(|| vec![0; v.len()]);
            fplin::axpy(acc, c, &v, p);
        }
        let mut out = Polynomial::zero();
        for (d, v) in by_degree {
            out.add_scaled(&ring.from_coords(d, &v)?, 1, p);
        }
        Ok(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, ring: &QuotientRing, other: &Endomorphism) -> Result<Endomorphism, RigidityError> {
        let images = other.images(ring)?;
        let composed: Vec<Polynomial> = images.iter().map(|q| self.apply(ring, q)).collect::<Result<_, _>>()?;
        Endomorphism::from_images(ring, &composed)
    }
}

/// `[k][l]` holds the coordinates of `b_k · b_l`.
type ProductTable = Rc<Vec<Vec<Vec<u8>>>>;

/// Products of quotient-basis elements, tabulated per pair of degrees.
struct Products<'r> {
    ring: &'r QuotientRing,
    tables: HashMap<(u32, u32), ProductTable>,
}

impl<'r> Products<'r> {
    fn new(ring: &'r QuotientRing) -> Self {
        Self { ring, tables: HashMap::new() }
    }

    fn table(&mut self, d1: u32, d2: u32) -> Result<ProductTable, GcaError> {
        if let Some(t) = self.tables.get(&(d1, d2)) {
            return Ok(t.clone());
        }
        let b1 = self.ring.degree_basis(d1)?;
        let b2 = self.ring.degree_basis(d2)?;
        let alg = self.ring.algebra();
        let mut t = Vec::with_capacity(b1.dim());
        for m1 in b1.basis_monomials() {
            let mut row = Vec::with_capacity(b2.dim());
            let q1 = Polynomial::from_term(m1.clone(), 1);
            for m2 in b2.basis_monomials() {
                let prod = alg.mul(&q1, &Polynomial::from_term(m2.clone(), 1));
                row.push(self.ring.coords_in(&prod, d1 + d2)?);
            }
            t.push(row);
        }
        let t = Rc::new(t);
        self.tables.insert((d1, d2), t.clone());
        Ok(t)
    }

    fn mul_const(&mut self, d1: u32, a: &[u8], d2: u32, b: &[u8]) -> Result<Vec<u8>, GcaError> {
        let p = self.ring.p();
        let t = self.table(d1, d2)?;
        let mut out = vec![0u8; self.ring.dim(d1 + d2)?];
        for (k, &ak) in a.iter().enumerate() {
            if ak == 0 {
                continue;
            }
            for (l, &bl) in b.iter().enumerate() {
                if bl != 0 {
                    fplin::axpy(&mut out, fplin::mul(ak, bl, p), &t[k][l], p);
                }
            }
        }
        Ok(out)
    }

    fn eval_monomial_const(&mut self, images: &[Vec<u8>], m: &Monomial) -> Result<Vec<u8>, GcaError> {
        let alg = self.ring.algebra();
        let mut deg = 0;
        let mut acc = vec![1u8];
        for (g, e) in m.support() {
            for _ in 0..e {
                let dg = alg.gen_degree(g);
                acc = self.mul_const(deg, &acc, dg, &images[g])?;
                deg += dg;
            }
        }
        Ok(acc)
    }

    fn mul_sym(&mut self, d1: u32, a: &[TPoly], d2: u32, b: &[TPoly]) -> Result<Vec<TPoly>, GcaError> {
        let p = self.ring.p();
        let t = self.table(d1, d2)?;
        let mut out = vec![TPoly::zero(); self.ring.dim(d1 + d2)?];
        for (k, ak) in a.iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            for (l, bl) in b.iter().enumerate() {
                if bl.is_zero() {
                    continue;
                }
                let coeff = ak.mul(bl, p);
                for (m, &c) in t[k][l].iter().enumerate() {
                    if c != 0 {
                        out[m].add_scaled(&coeff, c, p);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `φ(q)` as coordinates in degree `d`, from symbolic generator images.
    fn eval_sym(&mut self, images: &[Option<Vec<TPoly>>], q: &Polynomial, d: u32) -> Result<Vec<TPoly>, GcaError> {
        let alg = self.ring.algebra();
        let p = self.ring.p();
        let mut out = vec![TPoly::zero(); self.ring.dim(d)?];
        for (m, c) in q.terms() {
            let mut deg = 0;
            let mut acc = vec![TPoly::constant(1)];
            for (g, e) in m.support() {
                let img = images[g].as_ref().expect("constraint scheduled after its generators");
                for _ in 0..e {
                    let dg = alg.gen_degree(g);
                    acc = self.mul_sym(deg, &acc, dg, img)?;
                    deg += dg;
                }
            }
            for (o, a) in out.iter_mut().zip(&acc) {
                o.add_scaled(a, c, p);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Relation { poly: Polynomial, degree: u32 },
    /// `φ(value) = M · φ(g)` in degree `degree`.
    Operation { g: usize, value: Polynomial, degree: u32, matrix: FpMatrix },
    /// `a·v − φ(v) ∈ B`, `a` the coordinate `pos` of `φ(g)`.
    Higher { g: usize, pos: usize, value: Polynomial, value_coords: Vec<u8>, degree: u32, boundary: EchelonBasis },
}

#[derive(Debug, Clone)]
struct Constraint {
    label: String,
    step: usize,
    kind: Kind,
}

#[derive(Debug, Clone)]
struct State {
    images: Vec<Option<Vec<TPoly>>>,
    eqs: Vec<TPoly>,
}

/// A set of solutions: images whose coordinates are polynomials in the
/// `free` unknowns, one solution per assignment of those unknowns.
#[derive(Debug, Clone)]
pub struct SolutionFamily {
    pub images: Vec<Option<Vec<TPoly>>>,
    pub free: Vec<u32>,
}

impl SolutionFamily {
    pub fn size(&self, p: u8) -> u64 {
        (p as u64).saturating_pow(self.free.len() as u32)
    }

    /// The members, with generators outside the search left empty.
    pub fn members(&self, p: u8) -> Result<Vec<Endomorphism>, RigidityError> {
        let size = self.size(p);
        if size > MAX_FAMILY_SIZE {
            return Err(RigidityError::FamilyTooLarge { size });
        }
        let mut out = Vec::with_capacity(size as usize);
        let mut values = vec![0u8; self.free.len()];
        let pos: HashMap<u32, usize> = self.free.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for _ in 0..size {
            let lookup = |v: u32| values[pos[&v]];
            let coords = self
                .images
                .iter()
                .map(|img| img.as_ref().map_or_else(Vec::new, |c| c.iter().map(|t| t.eval(&lookup, p)).collect()))
                .collect();
            out.push(Endomorphism { coords });
            for v in values.iter_mut() {
                *v += 1;
                if *v < p {
                    break;
                }
                *v = 0;
            }
        }
        Ok(out)
    }
}

/// Result of [`solve`].
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub families: Vec<SolutionFamily>,
    /// Constraints left out because their degree exceeds the cap, or because
    /// an operation they need is undefined.
    pub skipped: Vec<String>,
    pub nodes: u64,
    p: u8,
}

impl SolveOutcome {
    pub fn count(&self) -> u64 {
        self.families.iter().map(|f| f.size(self.p)).sum()
    }

    /// Every solution, sorted and without repeats.
    pub fn solutions(&self) -> Result<Vec<Endomorphism>, RigidityError> {
        let mut set = BTreeSet::new();
        for f in &self.families {
            set.extend(f.members(self.p)?);
        }
        Ok(set.into_iter().collect())
    }
}

/// State after propagation without branching; see [`propagate`].
#[derive(Debug, Clone)]
pub struct Propagation {
    pub images: Vec<Option<Vec<TPoly>>>,
    /// Equations propagation could not resolve.
    pub pending: Vec<TPoly>,
    pub skipped: Vec<String>,
}

impl Propagation {
    /// The symbolic coordinate of basis monomial `m` in `φ(g)`.
    pub fn coordinate(&self, ring: &QuotientRing, g: usize, m: &Monomial) -> Option<&TPoly> {
        let basis = ring.degree_basis(ring.algebra().gen_degree(g)).ok()?;
        let pos = basis.quotient_position(basis.column_of(m)?)?;
        self.images[g].as_ref().map(|c| &c[pos])
    }

    /// True when `φ(g)` is a known constant equal to `q`.
    pub fn image_is(&self, ring: &QuotientRing, g: usize, q: &Polynomial) -> bool {
        let Some(img) = &self.images[g] else { return false };
        let Ok(want) = ring.coords_in(q, ring.algebra().gen_degree(g)) else { return false };
        img.iter().zip(&want).all(|(t, &w)| t.as_constant() == Some(w))
    }

    /// True when every coordinate of `φ(g)` other than the one on `m` is zero.
    pub fn image_is_multiple_of(&self, ring: &QuotientRing, g: usize, m: &Monomial) -> bool {
        let Some(img) = &self.images[g] else { return false };
        let basis = match ring.degree_basis(ring.algebra().gen_degree(g)) {
            Ok(b) => b,
            Err(_) => return false,
        };
        let Some(pos) = basis.column_of(m).and_then(|c| basis.quotient_position(c)) else { return false };
        img.iter().enumerate().all(|(k, t)| k == pos || t.is_zero())
    }
}

struct Solver<'r> {
    ring: &'r QuotientRing,
    p: u8,
    products: Products<'r>,
    order: Vec<usize>,
    fixed: HashMap<usize, Vec<u8>>,
    constraints: Vec<Constraint>,
    skipped: Vec<String>,
    next_var: u32,
    opts: SolveOptions,
    nodes: u64,
}

fn generators_of(q: &Polynomial) -> BTreeSet<usize> {
    q.monomials().flat_map(|m| m.support().map(|(g, _)| g).collect::<Vec<_>>()).collect()
}

impl<'r> Solver<'r> {
    fn new(ring: &'r Arc<QuotientRing>, mode: &H1Mode, opts: SolveOptions) -> Result<Self, RigidityError> {
        let pres = ring.presentation();
        let alg = ring.algebra();
        let p = ring.p();
        let cap = ring.cap();
        let ngens = pres.generators().len();
        let mut order: Vec<usize> = (0..ngens)
            .filter(|&g| opts.max_generator_degree.is_none_or(|k| alg.gen_degree(g) <= k))
            .collect();
        order.sort_by_key(|&g| (alg.gen_degree(g), g));
        if let Some(&g) = order.iter().max_by_key(|&&g| alg.gen_degree(g)) {
            if alg.gen_degree(g) > cap {
                return Err(RigidityError::CapTooSmall { cap, degree: alg.gen_degree(g) });
            }
        }
        let position: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let step_of = |gens: &BTreeSet<usize>| -> Option<usize> {
            gens.iter().map(|g| position.get(g).copied()).collect::<Option<Vec<_>>>().map(|v| v.into_iter().max().unwrap_or(0))
        };

        let weak = pres.weak_generators();
        let l = mode.weak_images(p)?;
        if weak.len() != 2 && matches!(mode, H1Mode::LinearIso(_)) {
            return Err(RigidityError::WeakGenerators(weak.len()));
        }
        let mut fixed = HashMap::new();
        if weak.len() == 2 {
            for j in 0..2 {
                let mut q = Polynomial::zero();
                for i in 0..2 {
                    q.add_scaled(&alg.gen(weak[i]), l[i][j], p);
                }
                fixed.insert(weak[j], ring.coords_in(&q, alg.gen_degree(weak[j]))?);
            }
        } else {
            for &w in weak {
                fixed.insert(w, ring.coords_in(&alg.gen(w), alg.gen_degree(w))?);
            }
        }

        let mut constraints = Vec::new();
        let mut skipped = Vec::new();
        for (k, rel) in pres.relations().iter().enumerate() {
            let label = rel.label.clone().unwrap_or_else(|| format!("{} = 0", pres.format(&rel.polynomial)));
            let label = format!("relation {k}: {label}");
            let degree = alg.degree(&rel.polynomial).expect("relations are nonzero and homogeneous");
            let Some(step) = step_of(&generators_of(&rel.polynomial)) else { continue };
            if degree > cap {
                skipped.push(format!("{label} (degree {degree} above cap {cap})"));
                continue;
            }
            constraints.push(Constraint { label, step, kind: Kind::Relation { poly: rel.polynomial.clone(), degree } });
        }
        for op in OpKind::ALL {
            let shift = op.degree_shift(pres.p());
            for &g in &order {
                let entry = match op {
                    OpKind::Beta => pres.beta_entry(g),
                    OpKind::P1 => pres.p1_entry(g),
                };
                let Some(entry) = entry else { continue };
                if op == OpKind::P1 && entry.source != TableSource::Listed {
                    continue;
                }
                let name = &pres.generators()[g].name;
                let label = format!("{op}({name}) = {}", pres.format(&entry.value));
                let mut gens = generators_of(&entry.value);
                gens.insert(g);
                let Some(step) = step_of(&gens) else { continue };
                let e = alg.gen_degree(g);
                let degree = e + shift;
                if degree > cap {
                    skipped.push(format!("{label} (degree {degree} above cap {cap})"));
                    continue;
                }
                let matrix = match op_matrix_defined(ring, op, e)? {
                    Some(m) => m,
                    None => {
                        skipped.push(format!("{label} (operation undefined on part of degree {e})"));
                        continue;
                    }
                };
                constraints.push(Constraint {
                    label,
                    step,
                    kind: Kind::Operation { g, value: entry.value.clone(), degree, matrix },
                });
            }
        }
        let mut page_cache: HashMap<u32, Vec<bss::Page>> = HashMap::new();
        for h in pres.higher_bocksteins() {
            let name = &pres.generators()[h.gen].name;
            let label = format!("beta_{}({name}) = {}", h.page, pres.format(&h.value));
            let mut gens = generators_of(&h.value);
            gens.insert(h.gen);
            let Some(step) = step_of(&gens) else { continue };
            let degree = alg.gen_degree(h.gen) + 1;
            if degree + (h.page - 1) > cap {
                skipped.push(format!("{label} (page {} in degree {degree} needs cap {})", h.page, degree + h.page - 1));
                continue;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = page_cache.entry(h.page) {
                e.insert(bss::pages(ring.clone(), h.page)?);
            }
            let page = page_cache[&h.page].last().expect("pages");
            let mut boundary = EchelonBasis::new(p as u32, ring.dim(degree)?);
            for b in page.boundaries(degree)? {
                boundary.insert(b);
            }
            let basis = ring.degree_basis(alg.gen_degree(h.gen))?;
            let mono = Monomial::generator(ngens, h.gen);
            let pos = basis
                .column_of(&mono)
                .and_then(|c| basis.quotient_position(c))
                .ok_or_else(|| RigidityError::BadHigherSource(name.clone()))?;
            let value_coords = ring.coords_in(&h.value, degree)?;
            constraints.push(Constraint {
                label,
                step,
                kind: Kind::Higher { g: h.gen, pos, value: h.value.clone(), value_coords, degree, boundary },
            });
        }
        Ok(Self {
            ring,
            p,
            products: Products::new(ring),
            order,
            fixed,
            constraints,
            skipped,
            next_var: 0,
            opts,
            nodes: 0,
        })
    }

    fn empty_state(&self) -> State {
        State { images: vec![None; self.ring.algebra().ngens()], eqs: Vec::new() }
    }

    fn introduce(&mut self, st: &mut State, k: usize) -> Result<(), RigidityError> {
        let g = self.order[k];
        let coords = match self.fixed.get(&g) {
            Some(c) => c.iter().map(|&x| TPoly::constant(x)).collect(),
            None => {
                let n = self.ring.dim(self.ring.algebra().gen_degree(g))?;
                (0..n)
                    .map(|_| {
                        let v = TPoly::var(self.next_var);
                        self.next_var += 1;
                        v
                    })
                    .collect()
            }
        };
        st.images[g] = Some(coords);
        let ready: Vec<usize> = (0..self.constraints.len()).filter(|&i| self.constraints[i].step == k).collect();
        for i in ready {
            let eqs = self.equations(&self.constraints[i].kind.clone(), &st.images)?;
            st.eqs.extend(eqs.into_iter().filter(|e| !e.is_zero()));
        }
        Ok(())
    }

    fn equations(&mut self, kind: &Kind, images: &[Option<Vec<TPoly>>]) -> Result<Vec<TPoly>, RigidityError> {
        let p = self.p;
        Ok(match kind {
            Kind::Relation { poly, degree } => self.products.eval_sym(images, poly, *degree)?,
            Kind::Operation { g, value, degree, matrix } => {
                let mut lhs = self.products.eval_sym(images, value, *degree)?;
                let src = images[*g].as_ref().expect("scheduled");
                for (r, out) in lhs.iter_mut().enumerate() {
                    for (c, t) in src.iter().enumerate() {
                        let m = matrix.get(r, c);
                        if m != 0 {
                            out.add_scaled(t, fplin::neg(m, p), p);
                        }
                    }
                }
                lhs
            }
            Kind::Higher { g, pos, value, value_coords, degree, boundary } => {
                let a = images[*g].as_ref().expect("scheduled")[*pos].clone();
                let phi_v = self.products.eval_sym(images, value, *degree)?;
                let w: Vec<TPoly> = value_coords
                    .iter()
                    .zip(&phi_v)
                    .map(|(&vc, f)| {
                        let mut t = a.scaled(vc, p);
                        t.add_scaled(f, p - 1, p);
                        t
                    })
                    .collect();
                // residual of w after reduction by the boundary basis
                let mut residual = w.clone();
                for (row, &piv) in boundary.rows().iter().zip(boundary.pivots()) {
                    let coeff = w[piv].clone();
                    if coeff.is_zero() {
                        continue;
                    }
                    for (c, &rc) in row.iter().enumerate() {
                        if rc != 0 {
                            residual[c].add_scaled(&coeff, fplin::neg(rc, p), p);
                        }
                    }
                }
                residual
            }
        })
    }

    fn prefer(&self, a: u32, b: u32) -> bool {
        if self.opts.reverse_order {
            a < b
        } else {
            a > b
        }
    }

    fn substitute(&self, st: &mut State, v: u32, expr: &TPoly) {
        let p = self.p;
        for img in st.images.iter_mut().flatten() {
            for t in img.iter_mut() {
                *t = t.substitute(v, expr, p);
            }
        }
        for e in st.eqs.iter_mut() {
            *e = e.substitute(v, expr, p);
        }
    }

    fn roots(&self, eq: &TPoly) -> Vec<u8> {
        (0..self.p).filter(|&x| eq.eval(&|_| x, self.p) == 0).collect()
    }

    /// Solves what can be solved without branching. `false` on contradiction.
    fn propagate(&self, st: &mut State) -> bool {
        let p = self.p;
        loop {
            st.eqs.retain(|e| !e.is_zero());
            if st.eqs.iter().any(|e| e.as_constant().is_some()) {
                return false;
            }
            for e in st.eqs.iter_mut() {
                let lead = e.terms().last().map(|(_, c)| c).expect("nonzero");
                if lead != 1 {
                    *e = e.scaled(fplin::inv(lead, p), p);
                }
            }
            st.eqs.sort();
            st.eqs.dedup();
            let mut idx: Vec<usize> = (0..st.eqs.len()).collect();
            idx.sort_by_key(|&i| st.eqs[i].len());
            if self.opts.reverse_order {
                idx.reverse();
                idx.sort_by_key(|&i| st.eqs[i].len());
            }
            let mut solved = None;
            for &i in &idx {
                let eq = &st.eqs[i];
                let mut best: Option<(u32, u8)> = None;
                for v in eq.vars() {
                    if let Some(c) = eq.isolated_linear_coefficient(v) {
                        if best.is_none_or(|(b, _)| self.prefer(v, b)) {
                            best = Some((v, c));
                        }
                    }
                }
                if let Some((v, c)) = best {
                    solved = Some((i, v, c));
                    break;
                }
            }
            if let Some((i, v, c)) = solved {
                let eq = st.eqs.swap_remove(i);
                let mut rest = eq.clone();
                rest.add_term(vec![(v, 1)], fplin::neg(c, p), p);
                let expr = rest.scaled(fplin::neg(fplin::inv(c, p), p), p);
                self.substitute(st, v, &expr);
                continue;
            }
            let mut forced = None;
            for e in &st.eqs {
                if let Some(v) = e.single_var() {
                    let roots = self.roots(e);
                    if roots.is_empty() {
                        return false;
                    }
                    if roots.len() == 1 {
                        forced = Some((v, roots[0]));
                        break;
                    }
                }
            }
            if let Some((v, x)) = forced {
                self.substitute(st, v, &TPoly::constant(x));
                continue;
            }
            return true;
        }
    }

    fn choose_branch(&self, st: &State) -> (u32, Vec<u8>) {
        let mut best: Option<(u32, Vec<u8>)> = None;
        for e in &st.eqs {
            if let Some(v) = e.single_var() {
                let roots = self.roots(e);
                let better = match &best {
                    None => true,
                    Some((bv, br)) => roots.len() < br.len() || (roots.len() == br.len() && self.prefer(v, *bv)),
                };
                if better {
                    best = Some((v, roots));
                }
            }
        }
        if let Some(b) = best {
            return b;
        }
        let mut count: BTreeMap<u32, usize> = BTreeMap::new();
        for e in &st.eqs {
            for v in e.vars() {
                *count.entry(v).or_default() += 1;
            }
        }
        let mut pick: Option<(u32, usize)> = None;
        for (&v, &n) in &count {
            let better = match pick {
                None => true,
                Some((bv, bn)) => n > bn || (n == bn && self.prefer(v, bv)),
            };
            if better {
                pick = Some((v, n));
            }
        }
        (pick.expect("pending equations have unknowns").0, (0..self.p).collect())
    }

    fn run(&mut self, mut st: State, k: usize, out: &mut Vec<SolutionFamily>) -> Result<(), RigidityError> {
        self.nodes += 1;
        if self.nodes > self.opts.budget {
            return Err(RigidityError::SearchBudgetExceeded { budget: self.opts.budget });
        }
        if !self.propagate(&mut st) {
            return Ok(());
        }
        if !st.eqs.is_empty() {
            let (v, values) = self.choose_branch(&st);
            for x in values {
                let mut branch = st.clone();
                self.substitute(&mut branch, v, &TPoly::constant(x));
                self.run(branch, k, out)?;
            }
            return Ok(());
        }
        if k == self.order.len() {
            let mut free: Vec<u32> = st.images.iter().flatten().flatten().flat_map(TPoly::vars).collect();
            free.sort_unstable();
            free.dedup();
            out.push(SolutionFamily { images: st.images, free });
            return Ok(());
        }
        self.introduce(&mut st, k)?;
        self.run(st, k + 1, out)
    }
}

/// `P¹` or β as a matrix on degree `d`, or `None` when some basis monomial
/// has an undefined value.
fn op_matrix_defined(ring: &QuotientRing, op: OpKind, d: u32) -> Result<Option<FpMatrix>, RigidityError> {
    match ops::op_matrix(ring, op, d) {
        Ok(m) => Ok(Some(m)),
        Err(OpsError::UndefinedAction { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Every endomorphism satisfying the constraints, as families.
pub fn solve(ring: &Arc<QuotientRing>, mode: &H1Mode, opts: &SolveOptions) -> Result<SolveOutcome, RigidityError> {
    let mut solver = Solver::new(ring, mode, *opts)?;
    let mut families = Vec::new();
    let st = solver.empty_state();
    solver.run(st, 0, &mut families)?;
    Ok(SolveOutcome { families, skipped: solver.skipped.clone(), nodes: solver.nodes, p: solver.p })
}

/// Introduces generators up to `max_generator_degree` and propagates
/// without ever branching.
pub fn propagate(ring: &Arc<QuotientRing>, mode: &H1Mode, max_generator_degree: u32) -> Result<Propagation, RigidityError> {
    let opts = SolveOptions { max_generator_degree: Some(max_generator_degree), ..SolveOptions::default() };
    let mut solver = Solver::new(ring, mode, opts)?;
    let mut st = solver.empty_state();
    for k in 0..solver.order.len() {
        solver.introduce(&mut st, k)?;
        if !solver.propagate(&mut st) {
            return Err(RigidityError::Inconsistent);
        }
    }
    Ok(Propagation { images: st.images, pending: st.eqs, skipped: solver.skipped })
}

/// The labels of the constraints a concrete endomorphism violates, plus a
/// mismatch on the weak generators if any.
pub fn violations(ring: &Arc<QuotientRing>, e: &Endomorphism, mode: &H1Mode) -> Result<Vec<String>, RigidityError> {
    let mut solver = Solver::new(ring, mode, SolveOptions::default())?;
    let mut out = Vec::new();
    for (g, want) in &solver.fixed {
        if &e.coords[*g] != want {
            out.push(format!("image of {}", ring.presentation().generators()[*g].name));
        }
    }
    let images: Vec<Option<Vec<TPoly>>> =
        e.coords.iter().map(|c| Some(c.iter().map(|&x| TPoly::constant(x)).collect())).collect();
    for c in solver.constraints.clone() {
        let eqs = solver.equations(&c.kind, &images)?;
        if eqs.iter().any(|t| !t.is_zero()) {
            out.push(c.label);
        }
    }
    Ok(out)
}

/// Rank of `φ` on each degree `0..=top` against the dimension.
pub fn surjectivity_profile(ring: &QuotientRing, e: &Endomorphism, top: u32) -> Result<Vec<(usize, usize)>, RigidityError> {
    let mut products = Products::new(ring);
    let p = ring.p() as u32;
    let mut out = Vec::new();
    for d in 0..=top {
        let basis = ring.degree_basis(d)?;
        let mut span = EchelonBasis::new(p, basis.dim());
        for m in basis.basis_monomials() {
            span.insert(products.eval_monomial_const(&e.coords, m)?);
        }
        out.push((span.rank(), basis.dim()));
    }
    Ok(out)
}

/// True when `φ` is onto in every degree through `top`, hence bijective there.
pub fn surjective_through(ring: &QuotientRing, e: &Endomorphism, top: u32) -> Result<bool, RigidityError> {
    Ok(surjectivity_profile(ring, e, top)?.iter().all(|(r, d)| r == d))
}

/// Result of [`rigidity_theorem`].
#[derive(Debug, Clone)]
pub struct Verdict {
    pub passed: bool,
    pub solutions: Vec<Endomorphism>,
    pub surjective: Vec<bool>,
    pub skipped: Vec<String>,
    pub nodes: u64,
}

impl Verdict {
    pub fn checks(&self) -> Vec<Check> {
        let mut checks = vec![Check::from_bool(
            "solution set is nonempty",
            !self.solutions.is_empty(),
            format!("{} solutions", self.solutions.len()),
        )];
        let bad = self.surjective.iter().position(|s| !s);
        checks.push(Check::from_bool(
            "all surjective",
            bad.is_none(),
            bad.map(|i| format!("solution {i} is not surjective")).unwrap_or_default(),
        ));
        for s in &self.skipped {
            checks.push(Check::skipped("constraint", s.clone()));
        }
        checks
    }
}

/// Solves under [`H1Mode::FixIdentity`] on a ring whose cap is the degree
/// bound, and certifies every solution surjective through the cap.
pub fn rigidity_theorem(ring: &Arc<QuotientRing>, opts: &SolveOptions) -> Result<Verdict, RigidityError> {
    let outcome = solve(ring, &H1Mode::FixIdentity, opts)?;
    let solutions = outcome.solutions()?;
    let surjective =
        solutions.iter().map(|e| surjective_through(ring, e, ring.cap())).collect::<Result<Vec<_>, _>>()?;
    let passed = !solutions.is_empty() && surjective.iter().all(|&s| s);
    Ok(Verdict { passed, solutions, surjective, skipped: outcome.skipped, nodes: outcome.nodes })
}

/// One row of [`WeakGenReport`].
#[derive(Debug, Clone, Serialize)]
pub struct WeakGenRow {
    pub matrix: [[u8; 2]; 2],
    pub solutions: usize,
    pub all_surjective: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakGenReport {
    pub rows: Vec<WeakGenRow>,
}

impl WeakGenReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.all_surjective)
    }

    pub fn consistent_maps(&self) -> usize {
        self.rows.iter().filter(|r| r.solutions > 0).count()
    }
}

/// For every invertible map on the span of the two weak generators, solves
/// and checks that all extensions are surjective through the cap.
pub fn weak_generation_check(ring: &Arc<QuotientRing>, opts: &SolveOptions) -> Result<WeakGenReport, RigidityError> {
    let mut rows = Vec::new();
    for l in gl2(ring.p()) {
        let outcome = solve(ring, &H1Mode::LinearIso(l), opts)?;
        let solutions = outcome.solutions()?;
        let mut all = true;
        for e in &solutions {
            if !surjective_through(ring, e, ring.cap())? {
                all = false;
                break;
            }
        }
        rows.push(WeakGenRow { matrix: l, solutions: solutions.len(), all_surjective: all });
    }
    Ok(WeakGenReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_has_the_right_order() {
        assert_eq!(gl2(3).len(), 48);
        assert_eq!(gl2(5).len(), 480);
    }
}
