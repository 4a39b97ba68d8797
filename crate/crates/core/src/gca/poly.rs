//! Monomials and polynomials in a free graded-commutative algebra over `F_p`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fplin;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub name: String,
    pub degree: u32,
}

impl GeneratorInfo {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self { name: name.into(), degree }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Exponent vector indexed by generator position. Odd generators carry 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn generator(ngens: usize, i: usize) -> Self {
        let mut m = Self::one(ngens);
        m.0[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Generators with nonzero exponent, ascending.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// A finite `F_p`-combination of monomials; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, u8>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_term(m: Monomial, c: u8) -> Self {
        let mut out = Self::zero();
        if c != 0 {
            out.terms.insert(m, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u8)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> u8 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: u8, p: u8) {
        let c = c % p;
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = fplin::add(*o.get(), c, p);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, c: u8, p: u8) {
        if c.is_multiple_of(p) {
            return;
        }
        for (m, &d) in &other.terms {
            self.add_term(m.clone(), fplin::mul(c, d, p), p);
        }
    }

    pub fn add(&self, other: &Polynomial, p: u8) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(other, 1, p);
        out
    }

    pub fn sub(&self, other: &Polynomial, p: u8) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(other, p - 1, p);
        out
    }

    pub fn scaled(&self, c: u8, p: u8) -> Polynomial {
        let mut out = Polynomial::zero();
        out.add_scaled(self, c, p);
        out
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn max_exponent_of(&self, gen: usize) -> u32 {
        self.terms.keys().map(|m| m.0[gen]).max().unwrap_or(0)
    }
}

/// The free graded-commutative algebra on a list of generators.
///
/// Products are written in declared generator order; moving an odd generator
/// past another odd generator costs a sign, and odd squares vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeAlgebra {
    p: u8,
    generators: Vec<GeneratorInfo>,
    index: HashMap<String, usize>,
}

impl FreeAlgebra {
    /// Panics on duplicate names; callers validate first.
    pub fn new(p: u8, generators: Vec<GeneratorInfo>) -> Self {
        let index: HashMap<String, usize> =
            generators.iter().enumerate().map(|(i, g)| (g.name.clone(), i)).collect();
        assert_eq!(index.len(), generators.len(), "duplicate generator names");
        Self { p, generators, index }
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn generators(&self) -> &[GeneratorInfo] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn gen_degree(&self, i: usize) -> u32 {
        self.generators[i].degree
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::from_term(Monomial::one(self.ngens()), 1)
    }

    pub fn gen(&self, i: usize) -> Polynomial {
        Polynomial::from_term(Monomial::generator(self.ngens(), i), 1)
    }

    pub fn constant(&self, c: i64) -> Polynomial {
        Polynomial::from_term(Monomial::one(self.ngens()), fplin::reduce(c, self.p))
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.generators).map(|(&e, g)| e * g.degree).sum()
    }

    /// Degree of a homogeneous polynomial; `None` for zero or mixed degrees.
    pub fn degree(&self, q: &Polynomial) -> Option<u32> {
        let mut it = q.monomials().map(|m| self.monomial_degree(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self, q: &Polynomial) -> bool {
        q.is_zero() || self.degree(q).is_some()
    }

    pub fn is_odd_monomial(&self, m: &Monomial) -> bool {
        self.monomial_degree(m) % 2 == 1
    }

    /// A monomial is admissible when no odd generator appears squared.
    pub fn is_admissible(&self, m: &Monomial) -> bool {
        m.0.len() == self.ngens() && m.0.iter().zip(&self.generators).all(|(&e, g)| !g.is_odd() || e <= 1)
    }

    /// Product `a * b` as `(sign, monomial)`, or `None` when an odd generator repeats.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let mut negative = false;
        // odd generators of `a` lying strictly after the current position
        let mut odd_after = a.0.iter().zip(&self.generators).filter(|(&e, g)| e > 0 && g.is_odd()).count();
        let mut out = Vec::with_capacity(a.0.len());
        for (i, g) in self.generators.iter().enumerate() {
            let (ea, eb) = (a.0[i], b.0[i]);
            if g.is_odd() {
                if ea > 0 {
                    odd_after -= 1;
                }
                if eb > 0 {
                    if ea > 0 {
                        return None;
                    }
                    if odd_after % 2 == 1 {
                        negative = !negative;
                    }
                }
            }
            out.push(ea + eb);
        }
        Some((negative, Monomial(out)))
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        let p = self.p;
        let mut out = Polynomial::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((negative, m)) = self.mul_monomials(ma, mb) {
                    let c = fplin::mul(ca, cb, p);
                    out.add_term(m, if negative { fplin::neg(c, p) } else { c }, p);
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &Polynomial, e: u32) -> Polynomial {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    pub fn mul_all<'a>(&self, factors: impl IntoIterator<Item = &'a Polynomial>) -> Polynomial {
        factors.into_iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    /// All admissible monomials of total degree `d`, in the engine's column order:
    /// monomials weighing more on later generators come first.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        let n = self.ngens();
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        self.enumerate(n, d, &mut exps, &mut out);
        out
    }

    // Fills generators from the last one down, largest exponent first.
    fn enumerate(&self, k: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if k == 0 {
            if remaining == 0 {
                out.push(Monomial(exps.clone()));
            }
            return;
        }
        let i = k - 1;
        let g = &self.generators[i];
        let max = if g.is_odd() { 1.min(remaining / g.degree) } else { remaining / g.degree };
        for e in (0..=max).rev() {
            exps[i] = e;
            self.enumerate(i, remaining - e * g.degree, exps, out);
        }
        exps[i] = 0;
    }

    /// Human-readable form, e.g. `x^2*X + z*y`, largest exponent vector first.
    pub fn format(&self, q: &Polynomial) -> String {
        if q.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in q.terms().rev().enumerate() {
            // print coefficients in the symmetric range (-p/2, p/2]
            let signed = if (c as u32) * 2 > self.p as u32 { c as i64 - self.p as i64 } else { c as i64 };
            let (neg, abs) = (signed < 0, signed.unsigned_abs());
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let body = self.format_monomial(m);
            match (abs, body.as_str()) {
                (a, "1") => s.push_str(&a.to_string()),
                (1, b) => s.push_str(b),
                (a, b) => {
                    s.push_str(&a.to_string());
                    s.push('*');
                    s.push_str(b);
                }
            }
        }
        s
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .support()
            .map(|(i, e)| {
                let name = &self.generators[i].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for GeneratorInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (degree {})", self.name, self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext_poly() -> FreeAlgebra {
        FreeAlgebra::new(
            3,
            vec![
                GeneratorInfo::new("y", 1),
                GeneratorInfo::new("y'", 1),
                GeneratorInfo::new("x", 2),
                GeneratorInfo::new("X", 3),
            ],
        )
    }

    #[test]
    fn koszul_signs() {
        let a = ext_poly();
        let (y, yp) = (a.gen(0), a.gen(1));
        let yyp = a.mul(&y, &yp);
        assert_eq!(yyp, Polynomial::from_term(Monomial(vec![1, 1, 0, 0]), 1));
        assert_eq!(a.mul(&yp, &y), yyp.scaled(2, 3));
        assert!(a.mul(&y, &y).is_zero());
        // X (odd) past y' (odd) flips; x (even) commutes
        let x = a.gen(2);
        let big_x = a.gen(3);
        assert_eq!(a.mul(&big_x, &yp), a.mul(&yp, &big_x).scaled(2, 3));
        assert_eq!(a.mul(&x, &y), a.mul(&y, &x));
        // y' * (y * X) = -(y y' X)
        let lhs = a.mul(&yp, &a.mul(&y, &big_x));
        assert_eq!(lhs, Polynomial::from_term(Monomial(vec![1, 1, 0, 1]), 2));
    }

    #[test]
    fn monomial_counts() {
        let a = ext_poly();
        assert_eq!(a.monomials_of_degree(0).len(), 1);
        assert_eq!(a.monomials_of_degree(1).len(), 2);
        // x, y y'
        assert_eq!(a.monomials_of_degree(2).len(), 2);
        // y x, y' x, X
        assert_eq!(a.monomials_of_degree(3).len(), 3);
        for d in 0..8 {
            for m in a.monomials_of_degree(d) {
                assert!(a.is_admissible(&m));
                assert_eq!(a.monomial_degree(&m), d);
            }
        }
    }

    #[test]
    fn formatting() {
        let a = ext_poly();
        let q = a.mul(&a.gen(2), &a.gen(0)).add(&a.gen(3).scaled(2, 3), 3);
        assert_eq!(a.format(&q), "y*x - X");
        assert_eq!(a.format(&Polynomial::zero()), "0");
        assert_eq!(a.format(&a.constant(-1)), "-1");
    }
}
