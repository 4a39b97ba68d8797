//! Polynomials in the unknown coordinates of a search, as functions on `F_p`.
//!
//! Every unknown takes values in `F_p`, so `t^p = t` and exponents are kept
//! in `1..p`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::fplin;

/// A monomial `Π t_v^e`, sorted by variable, exponents in `1..p`.
pub type TMono = Vec<(u32, u8)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct TPoly {
    terms: BTreeMap<TMono, u8>,
}

fn reduce_exp(e: u32, p: u8) -> u8 {
    let p = p as u32;
    if e < p {
        e as u8
    } else {
        (((e - 1) % (p - 1)) + 1) as u8
    }
}

fn mono_mul(a: &TMono, b: &TMono, p: u8) -> TMono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, reduce_exp(a[i].1 as u32 + b[j].1 as u32, p)));
            i += 1;
            j += 1;
        }
    }
    out
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: u8) -> Self {
        let mut t = Self::zero();
        if c != 0 {
            t.terms.insert(Vec::new(), c);
        }
        t
    }

    pub fn var(v: u32) -> Self {
        let mut t = Self::zero();
        t.terms.insert(vec![(v, 1)], 1);
        t
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

    pub fn terms(&self) -> impl Iterator<Item = (&TMono, u8)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    /// The value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<u8> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&Vec::new()).copied(),
            _ => None,
        }
    }

    pub fn is_linear(&self) -> bool {
        self.terms.keys().all(|m| m.len() <= 1 && m.iter().all(|&(_, e)| e == 1))
    }

    pub fn vars(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.terms.keys().flat_map(|m| m.iter().map(|&(v, _)| v)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn add_term(&mut self, m: TMono, c: u8, p: u8) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                let s = fplin::add(*o.get(), c, p);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TPoly, c: u8, p: u8) {
        if c == 0 {
            return;
        }
        for (m, &d) in &other.terms {
            self.add_term(m.clone(), fplin::mul(c, d, p), p);
        }
    }

    pub fn scaled(&self, c: u8, p: u8) -> TPoly {
        let mut out = TPoly::zero();
        out.add_scaled(self, c, p);
        out
    }

    pub fn mul(&self, other: &TPoly, p: u8) -> TPoly {
        if let Some(c) = other.as_constant() {
            return self.scaled(c, p);
        }
        if let Some(c) = self.as_constant() {
            return other.scaled(c, p);
        }
        let mut out = TPoly::zero();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(mono_mul(a, b, p), fplin::mul(ca, cb, p), p);
            }
        }
        out
    }

    /// Replaces `t_v` by `expr`.
    pub fn substitute(&self, v: u32, expr: &TPoly, p: u8) -> TPoly {
        if !self.terms.keys().any(|m| m.iter().any(|&(w, _)| w == v)) {
            return self.clone();
        }
        let mut powers = vec![TPoly::constant(1)];
        let mut out = TPoly::zero();
        for (m, &c) in &self.terms {
            let Some(pos) = m.iter().position(|&(w, _)| w == v) else {
                out.add_term(m.clone(), c, p);
                continue;
            };
            let e = m[pos].1 as usize;
            while powers.len() <= e {
                let next = powers.last().expect("nonempty").mul(expr, p);
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.remove(pos);
            let mut rest_poly = TPoly::zero();
            rest_poly.add_term(rest, c, p);
            out.add_scaled(&rest_poly.mul(&powers[e], p), 1, p);
        }
        out
    }

    /// Value under a full assignment `values[v]`.
    pub fn eval(&self, values: &dyn Fn(u32) -> u8, p: u8) -> u8 {
        let mut acc = 0u8;
        for (m, &c) in &self.terms {
            let mut term = c;
            for &(v, e) in m {
                term = fplin::mul(term, fplin::pow(values(v), e as u64, p), p);
            }
            acc = fplin::add(acc, term, p);
        }
        acc
    }

    /// Coefficient of the monomial `t_v` when `v` occurs in no other term.
    pub fn isolated_linear_coefficient(&self, v: u32) -> Option<u8> {
        let mut coeff = None;
        for (m, &c) in &self.terms {
            if m.iter().any(|&(w, _)| w == v) {
                if m.len() == 1 && m[0].1 == 1 && coeff.is_none() {
                    coeff = Some(c);
                } else {
                    return None;
                }
            }
        }
        coeff
    }

    /// `Some(v)` when exactly one variable occurs.
    pub fn single_var(&self) -> Option<u32> {
        let vs = self.vars();
        (vs.len() == 1).then(|| vs[0])
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, &c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if m.is_empty() || c != 1 {
                write!(f, "{c}")?;
                if !m.is_empty() {
                    f.write_str("*")?;
                }
            }
            let parts: Vec<String> = m
                .iter()
                .map(|&(v, e)| if e == 1 { format!("t{v}") } else { format!("t{v}^{e}") })
                .collect();
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}
