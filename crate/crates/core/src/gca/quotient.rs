//! Degreewise saturation of the relation ideal, normal forms and the Hilbert function.
//!
//! The degree-`d` slice of the ideal is spanned by the degree-`d` relations
//! together with `g * I_{d - |g|}` for every generator `g`; this is the same
//! span as all monomial multiples of relations. Columns are the degree-`d`
//! monomials in the order of [`FreeAlgebra::monomials_of_degree`], so pivots
//! land on monomials weighing most on later generators and the quotient basis
//! consists of the remaining (non-pivot) monomials.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use super::poly::{FreeAlgebra, Monomial, Polynomial};
use super::presentation::Presentation;
use crate::fplin::{self, EchelonBasis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GcaError {
    #[error("degree {degree} exceeds the configured cap {cap}")]
    CapExceeded { degree: u32, cap: u32 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
}

#[derive(Debug, Clone)]
pub struct DegreeBasis {
    pub degree: u32,
    pub free_monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    pub ideal: EchelonBasis,
    /// Non-pivot columns, ascending.
    pub quotient_basis: Vec<usize>,
    // column -> position in quotient_basis
    quotient_pos: Vec<Option<usize>>,
}

impl DegreeBasis {
    pub fn dim(&self) -> usize {
        self.quotient_basis.len()
    }

    pub fn column_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn basis_monomial(&self, k: usize) -> &Monomial {
        &self.free_monomials[self.quotient_basis[k]]
    }

    pub fn basis_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.quotient_basis.iter().map(|&c| &self.free_monomials[c])
    }

    /// Coordinates of the normal form on the quotient basis.
    pub fn coords_of_free_vector(&self, mut v: Vec<u8>) -> Vec<u8> {
        self.ideal.reduce(&mut v);
        self.quotient_basis.iter().map(|&c| v[c]).collect()
    }

    pub fn quotient_position(&self, column: usize) -> Option<usize> {
        self.quotient_pos[column]
    }
}

/// A presentation together with a degree cap and compute-once degree caches.
#[derive(Debug)]
pub struct QuotientRing {
    pres: Arc<Presentation>,
    cap: u32,
    bases: Vec<OnceLock<Arc<DegreeBasis>>>,
}

/// Cap used when a run does not configure one: 8 at p = 3, 2p + 4 otherwise.
pub fn default_cap(p: u32) -> u32 {
    if p == 3 {
        8
    } else {
        2 * p + 4
    }
}

impl QuotientRing {
    pub fn new(pres: impl Into<Arc<Presentation>>, cap: u32) -> Self {
        let pres = pres.into();
        Self { pres, cap, bases: (0..=cap).map(|_| OnceLock::new()).collect() }
    }

    pub fn with_default_cap(pres: impl Into<Arc<Presentation>>) -> Self {
        let pres = pres.into();
        let cap = default_cap(pres.p());
        Self::new(pres, cap)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn presentation_arc(&self) -> Arc<Presentation> {
        self.pres.clone()
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        self.pres.algebra()
    }

    pub fn p(&self) -> u8 {
        self.algebra().p()
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    fn check_cap(&self, d: u32) -> Result<(), GcaError> {
        if d > self.cap {
            Err(GcaError::CapExceeded { degree: d, cap: self.cap })
        } else {
            Ok(())
        }
    }

    pub fn degree_basis(&self, d: u32) -> Result<Arc<DegreeBasis>, GcaError> {
        self.check_cap(d)?;
        Ok(self.bases[d as usize].get_or_init(|| Arc::new(self.compute_basis(d))).clone())
    }

    fn compute_basis(&self, d: u32) -> DegreeBasis {
        let alg = self.algebra();
        let p = alg.p();
        let free_monomials = alg.monomials_of_degree(d);
        let index: HashMap<Monomial, usize> =
            free_monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let n = free_monomials.len();
        let mut ideal = EchelonBasis::new(p as u32, n);
        let to_vec = |q: &Polynomial| {
            let mut v = vec![0u8; n];
            for (m, c) in q.terms() {
                v[index[m]] = c;
            }
            v
        };
        for r in self.pres.relations() {
            if alg.degree(&r.polynomial) == Some(d) {
                ideal.insert(to_vec(&r.polynomial));
            }
        }
        for (g, info) in alg.generators().iter().enumerate() {
            if info.degree > d {
                continue;
            }
            let lower = self.degree_basis(d - info.degree).expect("lower degrees are within the cap");
            if lower.ideal.rank() == 0 {
                continue;
            }
            let gm = Monomial::generator(alg.ngens(), g);
            // column map: lower column -> (target column, sign)
            let map: Vec<Option<(usize, bool)>> = lower
                .free_monomials
                .iter()
                .map(|m| alg.mul_monomials(&gm, m).map(|(neg, prod)| (index[&prod], neg)))
                .collect();
            for row in lower.ideal.rows() {
                let mut v = vec![0u8; n];
                for (c, &e) in row.iter().enumerate() {
                    if e != 0 {
                        if let Some((t, neg)) = map[c] {
                            v[t] = fplin::add(v[t], if neg { fplin::neg(e, p) } else { e }, p);
                        }
                    }
                }
                ideal.insert(v);
            }
        }
        let quotient_basis = ideal.free_columns();
        let mut quotient_pos = vec![None; n];
        for (k, &c) in quotient_basis.iter().enumerate() {
            quotient_pos[c] = Some(k);
        }
        DegreeBasis { degree: d, free_monomials, index, ideal, quotient_basis, quotient_pos }
    }

    pub fn dim(&self, d: u32) -> Result<usize, GcaError> {
        Ok(self.degree_basis(d)?.dim())
    }

    pub fn hilbert(&self, top: u32) -> Result<Vec<usize>, GcaError> {
        (0..=top).map(|d| self.dim(d)).collect()
    }

    /// Quotient-basis coordinates of a homogeneous polynomial of degree `d`.
    /// Zero is accepted in any degree.
    pub fn coords_in(&self, q: &Polynomial, d: u32) -> Result<Vec<u8>, GcaError> {
        let basis = self.degree_basis(d)?;
        if q.is_zero() {
            return Ok(vec![0; basis.dim()]);
        }
        if self.algebra().degree(q) != Some(d) {
            return Err(GcaError::NotHomogeneous);
        }
        let mut v = vec![0u8; basis.free_monomials.len()];
        for (m, c) in q.terms() {
            let col = basis.column_of(m).expect("admissible monomial of the right degree");
            v[col] = c;
        }
        Ok(basis.coords_of_free_vector(v))
    }

    pub fn from_coords(&self, d: u32, coords: &[u8]) -> Result<Polynomial, GcaError> {
        let basis = self.degree_basis(d)?;
        let p = self.p();
        let mut out = Polynomial::zero();
        for (k, &c) in coords.iter().enumerate() {
            out.add_term(basis.basis_monomial(k).clone(), c, p);
        }
        Ok(out)
    }

    /// The unique representative of `q` supported on the quotient basis.
    pub fn normal_form(&self, q: &Polynomial) -> Result<Polynomial, GcaError> {
        if q.is_zero() {
            return Ok(Polynomial::zero());
        }
        let d = self.algebra().degree(q).ok_or(GcaError::NotHomogeneous)?;
        let coords = self.coords_in(q, d)?;
        self.from_coords(d, &coords)
    }

    /// Normal form of a possibly inhomogeneous polynomial, taken degree by degree.
    pub fn normal_form_any(&self, q: &Polynomial) -> Result<Polynomial, GcaError> {
        let alg = self.algebra();
        let p = self.p();
        let mut parts: std::collections::BTreeMap<u32, Polynomial> = Default::default();
        for (m, c) in q.terms() {
            parts.entry(alg.monomial_degree(m)).or_default().add_term(m.clone(), c, p);
        }
        let mut out = Polynomial::zero();
        for part in parts.values() {
            out.add_scaled(&self.normal_form(part)?, 1, p);
        }
        Ok(out)
    }

    pub fn is_zero(&self, q: &Polynomial) -> Result<bool, GcaError> {
        Ok(self.normal_form_any(q)?.is_zero())
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial, GcaError> {
        self.normal_form_any(&self.algebra().mul(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::presentation::PresentationBuilder;

    fn free_tower() -> QuotientRing {
        let pres = PresentationBuilder::new("tower", 3)
            .generator("u", 1)
            .generator("y", 1)
            .generator("y'", 1)
            .generator("v", 2)
            .generator("x", 2)
            .generator("x'", 2)
            .build()
            .unwrap();
        QuotientRing::new(pres, 8)
    }

    // closed form: coefficient of t^d in (1+t)^3 / (1-t^2)^3
    fn exterior_polynomial_count(d: u32) -> usize {
        let binom3 = [1usize, 3, 3, 1];
        (0..=3u32)
            .filter(|&k| k <= d && (d - k).is_multiple_of(2))
            .map(|k| {
                let m = ((d - k) / 2) as usize;
                binom3[k as usize] * (m + 1) * (m + 2) / 2
            })
            .sum()
    }

    #[test]
    fn free_algebra_hilbert_matches_closed_form() {
        let ring = free_tower();
        let dims = ring.hilbert(8).unwrap();
        assert_eq!(dims[1], 3);
        assert_eq!(dims[2], 6);
        for d in 0..=8 {
            assert_eq!(dims[d as usize], exterior_polynomial_count(d), "degree {d}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let ring = free_tower();
        assert_eq!(ring.degree_basis(9).unwrap_err(), GcaError::CapExceeded { degree: 9, cap: 8 });
    }

    #[test]
    fn relations_reduce_to_zero() {
        let pres = PresentationBuilder::new("t", 5)
            .generator("y", 1)
            .generator("x", 2)
            .generator("w", 2)
            .relation("w^2", "x*w")
            .relation("y*w", "0")
            .build()
            .unwrap();
        let ring = QuotientRing::new(pres, 10);
        let alg = ring.algebra().clone();
        for r in ring.presentation().relations() {
            assert!(ring.normal_form(&r.polynomial).unwrap().is_zero());
        }
        // w^3 = x w^2 = x^2 w
        let w3 = expr_parse(&ring, "w^3");
        assert_eq!(alg.format(&ring.normal_form(&w3).unwrap()), alg.format(&expr_parse(&ring, "x^2*w")));
        assert_eq!(ring.dim(2).unwrap(), 2);
        // degree 4: x^2, x w (w^2 eliminated)
        assert_eq!(ring.dim(4).unwrap(), 2);
    }

    fn expr_parse(ring: &QuotientRing, s: &str) -> Polynomial {
        ring.presentation().parse(s).unwrap()
    }
}
