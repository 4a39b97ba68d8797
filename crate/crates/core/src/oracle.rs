//! The groups `P(p, n)` as concrete finite groups and the mod-p Betti
//! numbers of their classifying spaces, from a minimal free resolution of
//! the trivial module over `F_p[G]`.
//!
//! `P(p, n)` is generated by `A, B, C` with `A^p = B^p = C^{p^{n-2}} = 1`,
//! `C` central and `[A, B] = C^{p^{n-3}}`. Every element has a unique normal
//! form `A^a B^b C^c`. Moving `B^b` past `A^{a'}` costs `C^{-q a' b}` where
//! `q = p^{n-3}`, which gives the product rule in [`Group::multiply`].

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{CatalogKey, Family};
use crate::fplin::{self, EchelonBasis, FpMatrix};
use crate::gca::{GcaError, Presentation, QuotientRing};
use crate::report::Check;

/// Largest group order handled by default (`3^6`).
pub const DEFAULT_MAX_ORDER: usize = 729;
/// Default homological cap for [`betti`].
pub const DEFAULT_HOMOLOGICAL_CAP: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("p = {0} is not an odd prime")]
    BadPrime(u32),
    #[error("n = {0} is below 3")]
    BadN(u32),
    #[error("group order {p}^{n} exceeds the bound {bound}")]
    OrderTooLarge { p: u32, n: u32, bound: usize },
    #[error("homological degree {degree} exceeds the cap {cap}")]
    CapExceeded { degree: u32, cap: u32 },
    #[error("{0} is not a P(p, n) catalog entry")]
    NotAGroupKey(String),
    #[error(transparent)]
    Gca(#[from] GcaError),
}

/// `A^a B^b C^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElement {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

/// Upper limits on the work the oracle accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_order: usize,
    pub homological_cap: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Self { max_order: DEFAULT_MAX_ORDER, homological_cap: DEFAULT_HOMOLOGICAL_CAP }
    }
}

/// `P(p, n)` with its elements indexed `0..p^n`.
#[derive(Debug, Clone)]
pub struct Group {
    p: u32,
    n: u32,
    /// Order of `C`.
    m: u32,
    /// `p^{n-3}`.
    q: u32,
}

impl Group {
    pub fn new(p: u32, n: u32) -> Result<Self, OracleError> {
        Self::with_bound(p, n, DEFAULT_MAX_ORDER)
    }

    pub fn with_bound(p: u32, n: u32, max_order: usize) -> Result<Self, OracleError> {
        fplin::check_prime(p).map_err(|_| OracleError::BadPrime(p))?;
        if n < 3 {
            return Err(OracleError::BadN(n));
        }
        let order = (p as u64).checked_pow(n);
        if order.is_none_or(|o| o > max_order as u64) {
            return Err(OracleError::OrderTooLarge { p, n, bound: max_order });
        }
        Ok(Self { p, n, m: p.pow(n - 2), q: p.pow(n - 3) })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        (self.p * self.p * self.m) as usize
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { a: 0, b: 0, c: 0 }
    }

    /// `A`, `B`, `C`.
    pub fn generators(&self) -> [GroupElement; 3] {
        [
            GroupElement { a: 1, b: 0, c: 0 },
            GroupElement { a: 0, b: 1, c: 0 },
            GroupElement { a: 0, b: 0, c: 1 % self.m },
        ]
    }

    pub fn multiply(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        let (p, m) = (self.p as u64, self.m as u64);
        let shift = (self.q as u64 * g.b as u64 * h.a as u64) % m;
        GroupElement {
            a: ((g.a as u64 + h.a as u64) % p) as u32,
            b: ((g.b as u64 + h.b as u64) % p) as u32,
            c: ((g.c as u64 + h.c as u64 + m - shift) % m) as u32,
        }
    }

    pub fn inverse(&self, g: GroupElement) -> GroupElement {
        // (a, b, c)^{-1} = (-a, -b, -c - q a b)
        let (p, m) = (self.p, self.m as u64);
        let shift = (self.q as u64 * g.a as u64 * g.b as u64) % m;
        GroupElement {
            a: (p - g.a) % p,
            b: (p - g.b) % p,
            c: ((2 * m - g.c as u64 - shift) % m) as u32,
        }
    }

    pub fn pow(&self, g: GroupElement, e: u64) -> GroupElement {
        (0..e).fold(self.identity(), |acc, _| self.multiply(acc, g))
    }

    /// `g^{-1} h^{-1} g h`.
    pub fn commutator(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        let gi = self.inverse(g);
        let hi = self.inverse(h);
        self.multiply(self.multiply(gi, hi), self.multiply(g, h))
    }

    pub fn index(&self, g: GroupElement) -> usize {
        ((g.a * self.p + g.b) * self.m + g.c) as usize
    }

    pub fn element(&self, i: usize) -> GroupElement {
        let i = i as u32;
        GroupElement { a: i / (self.p * self.m), b: (i / self.m) % self.p, c: i % self.m }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn element_order(&self, g: GroupElement) -> u64 {
        let mut x = g;
        let mut k = 1;
        while x != self.identity() {
            x = self.multiply(x, g);
            k += 1;
        }
        k
    }

    /// `perm[h] = index(g h)`.
    fn left_permutation(&self, g: GroupElement) -> Vec<usize> {
        self.elements().map(|h| self.index(self.multiply(g, h))).collect()
    }
}

/// Structural invariants of `P(p, n)`, all by exhaustion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupProps {
    pub order: usize,
    pub center_order: usize,
    /// Invariant factors of the abelianization, trivial factors dropped.
    pub abelianization: Vec<u64>,
    pub exponent: u64,
}

pub fn group_props(p: u32, n: u32) -> Result<GroupProps, OracleError> {
    let g = Group::new(p, n)?;
    let gens = g.generators();
    let center_order = g.elements().filter(|&x| gens.iter().all(|&s| g.multiply(x, s) == g.multiply(s, x))).count();
    let exponent = g.elements().map(|x| g.element_order(x)).fold(1, lcm);
    Ok(GroupProps { order: g.order(), center_order, abelianization: abelianization_invariants(p, n), exponent })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Invariant factors of `Z^3` modulo the exponent rows of the relations
/// `A^p, B^p, C^{p^{n-2}}, [A,B] C^{-q}` (the commutators with `C` give zero rows).
pub fn abelianization_invariants(p: u32, n: u32) -> Vec<u64> {
    let (p, m, q) = (p as i64, (p as i64).pow(n - 2), (p as i64).pow(n - 3));
    let rows = vec![vec![p, 0, 0], vec![0, p, 0], vec![0, 0, m], vec![0, 0, -q]];
    smith_diagonal(rows).into_iter().filter(|&d| d != 1).collect()
}

/// Diagonal of the Smith normal form of an integer matrix, zeros dropped,
/// each entry dividing the next.
pub fn smith_diagonal(mut a: Vec<Vec<i64>>) -> Vec<u64> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let Some((r, c)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| a[r][c] != 0)
            .min_by_key(|&(r, c)| a[r][c].abs())
        else {
            break;
        };
        a.swap(t, r);
        for row in a.iter_mut() {
            row.swap(t, c);
        }
        loop {
            let piv = a[t][t];
            let mut done = true;
            for r in t + 1..rows {
                let f = a[r][t] / piv;
                for c in t..cols {
                    a[r][c] -= f * a[t][c];
                }
                if a[r][t] != 0 {
                    done = false;
                }
            }
            for c in t + 1..cols {
                let f = a[t][c] / piv;
                for r in t..rows {
                    a[r][c] -= f * a[r][t];
                }
                if a[t][c] != 0 {
                    done = false;
                }
            }
            if done {
                // the pivot must also divide the rest of the block
                let bad = (t + 1..rows).flat_map(|r| (t + 1..cols).map(move |c| (r, c))).find(|&(r, c)| a[r][c] % piv != 0);
                match bad {
                    None => break,
                    Some((r, _)) => {
                        for c in t..cols {
                            a[t][c] += a[r][c];
                        }
                        continue;
                    }
                }
            }
            let (r, c) = (t..rows)
                .flat_map(|r| (t..cols).map(move |c| (r, c)))
                .filter(|&(r, c)| (r == t || c == t) && a[r][c] != 0)
                .min_by_key(|&(r, c)| a[r][c].abs())
                .expect("pivot row or column is nonzero");
            a.swap(t, r);
            for row in a.iter_mut() {
                row.swap(t, c);
            }
        }
        diag.push(a[t][t].unsigned_abs());
    }
    diag.sort_unstable();
    diag
}

/// Checks that `<C>` is central of order `p^{n-2}` and that `G/<C>` multiplies like `Z/p × Z/p`.
pub fn extension_check(group: &Group) -> bool {
    let c = group.generators()[2];
    let sub: Vec<GroupElement> = (0..group.m as u64).map(|k| group.pow(c, k)).collect();
    let distinct: std::collections::BTreeSet<_> = sub.iter().collect();
    let central = sub.iter().all(|&s| group.elements().all(|x| group.multiply(s, x) == group.multiply(x, s)));
    let quotient_ok = group.elements().all(|x| {
        group.elements().all(|y| {
            let z = group.multiply(x, y);
            z.a == (x.a + y.a) % group.p && z.b == (x.b + y.b) % group.p
        })
    });
    distinct.len() == group.m as usize && central && quotient_ok
}

/// One stage of a minimal resolution `F_i -> F_{i-1}`: the images of the
/// free generators of `F_i`, each a vector of length `|G| · rank F_{i-1}`
/// whose block `j` lists the coefficients on `g · e_j`.
#[derive(Debug, Clone)]
pub struct ResolutionStep {
    pub index: u32,
    pub rank: usize,
    pub boundary: Vec<Vec<u8>>,
}

/// A minimal free resolution of `F_p` over `F_p[G]` through a homological degree.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub group: Group,
    /// `steps[0]` is `F_0 = F_p[G]` with an empty boundary list; the augmentation is implicit.
    pub steps: Vec<ResolutionStep>,
}

impl Resolution {
    pub fn betti(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.rank).collect()
    }

    /// `F_p`-matrix of `d_i` with column `(j, h)` equal to `h · d_i(e_j)`.
    /// For `i = 0` this is the augmentation `F_p[G] -> F_p`.
    pub fn boundary_matrix(&self, i: usize) -> FpMatrix {
        let g = &self.group;
        let nn = g.order();
        let p = g.p;
        if i == 0 {
            return FpMatrix::from_residue_rows(p, nn, vec![vec![1; nn]]).expect("valid prime");
        }
        let target = self.steps[i - 1].rank;
        let perms: Vec<Vec<usize>> = g.elements().map(|h| g.left_permutation(h)).collect();
        let source = self.steps[i].rank;
        let mut m = FpMatrix::zeros(p, nn * target, nn * source).expect("valid prime");
        for (j, w) in self.steps[i].boundary.iter().enumerate() {
            for (hi, perm) in perms.iter().enumerate() {
                let col = j * nn + hi;
                for blk in 0..target {
                    for k in 0..nn {
                        let v = w[blk * nn + k];
                        if v != 0 {
                            m.set(blk * nn + perm[k], col, v);
                        }
                    }
                }
            }
        }
        m
    }

    /// `d_{i-1} ∘ d_i = 0`, checked on the generators of `F_i` for every `i ≥ 1`.
    pub fn check_complex(&self) -> bool {
        (1..self.steps.len()).all(|i| {
            let d = self.boundary_matrix(i - 1);
            self.steps[i].boundary.iter().all(|w| fplin::is_zero(&d.mul_vec(w).expect("matching lengths")))
        })
    }

    /// Every boundary entry lies in the augmentation ideal: each block of each
    /// generator image has coefficient sum zero.
    pub fn check_minimal(&self) -> bool {
        let nn = self.group.order();
        let p = self.group.p as u8;
        self.steps.iter().skip(1).all(|s| {
            s.boundary.iter().all(|w| w.chunks(nn).all(|blk| blk.iter().fold(0u8, |acc, &v| fplin::add(acc, v, p)) == 0))
        })
    }
}

/// Builds a minimal resolution through homological degree `top`.
pub fn resolve(group: Group, top: u32) -> Resolution {
    let nn = group.order();
    let p = group.p;
    let gens = group.generators();
    let gen_perms: Vec<Vec<usize>> = gens.iter().map(|&s| group.left_permutation(s)).collect();
    let mut res = Resolution { group, steps: vec![ResolutionStep { index: 0, rank: 1, boundary: Vec::new() }] };
    for i in 0..top as usize {
        let kernel = res.boundary_matrix(i).kernel();
        let rank_i = res.steps[i].rank;
        let dim = nn * rank_i;
        // (s - 1) K for the group generators s spans I·K, since K is a submodule
        let mut span = EchelonBasis::new(p, dim);
        for k in &kernel {
            for perm in &gen_perms {
                let mut v = vec![0u8; dim];
                for blk in 0..rank_i {
                    for h in 0..nn {
                        v[blk * nn + perm[h]] = k[blk * nn + h];
                    }
                }
                for (x, y) in v.iter_mut().zip(k) {
                    *x = fplin::sub(*x, *y, p as u8);
                }
                span.insert(v);
            }
        }
        let mut boundary = Vec::new();
        for k in kernel {
            if span.insert(k.clone()) {
                boundary.push(k);
            }
        }
        res.steps.push(ResolutionStep { index: i as u32 + 1, rank: boundary.len(), boundary });
    }
    res
}

/// `dim H^i(P(p, n); F_p)` for `i = 0..=top`.
pub fn betti(p: u32, n: u32, top: u32) -> Result<Vec<usize>, OracleError> {
    betti_with(p, n, top, Bounds::default())
}

pub fn betti_with(p: u32, n: u32, top: u32, bounds: Bounds) -> Result<Vec<usize>, OracleError> {
    if top > bounds.homological_cap {
        return Err(OracleError::CapExceeded { degree: top, cap: bounds.homological_cap });
    }
    let group = Group::with_bound(p, n, bounds.max_order)?;
    Ok(resolve(group, top).betti())
}

/// Dimension rows from the oracle and from a presentation, degree by degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub presentation: String,
    pub oracle: Vec<usize>,
    pub hilbert: Vec<usize>,
}

impl Comparison {
    pub fn first_mismatch(&self) -> Option<usize> {
        self.oracle.iter().zip(&self.hilbert).position(|(a, b)| a != b)
    }

    pub fn passed(&self) -> bool {
        self.oracle.len() == self.hilbert.len() && self.first_mismatch().is_none()
    }

    pub fn checks(&self) -> Vec<Check> {
        self.oracle
            .iter()
            .zip(&self.hilbert)
            .enumerate()
            .map(|(d, (a, b))| {
                Check::from_bool(format!("degree {d}"), a == b, format!("oracle {a}, presentation {b}"))
            })
            .collect()
    }
}

/// Compares an arbitrary presentation against `P(p, n)`.
pub fn compare_presentation(pres: Presentation, n: u32, top: u32, bounds: Bounds) -> Result<Comparison, OracleError> {
    let oracle = betti_with(pres.p(), n, top, bounds)?;
    let name = pres.name().to_string();
    let ring = QuotientRing::new(Arc::new(pres), top);
    let hilbert = ring.hilbert(top)?;
    Ok(Comparison { presentation: name, oracle, hilbert })
}

/// Compares a P-family catalog entry with the oracle.
pub fn compare_hilbert(pres: Presentation, key: &CatalogKey, top: u32) -> Result<Comparison, OracleError> {
    let n = match key.family {
        Family::P33 | Family::Pp3 | Family::Ppn => key.group_n().expect("P family"),
        _ => return Err(OracleError::NotAGroupKey(key.to_string())),
    };
    compare_presentation(pres, n, top, Bounds::default())
}
