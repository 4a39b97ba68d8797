//! The Bockstein β and the Steenrod power P¹ on a presented algebra.
//!
//! β is extended from its generator table as a derivation of degree +1,
//! `β(ab) = β(a)b + (-1)^{|a|} a β(b)`; P¹ by the Cartan formula
//! `P¹(ab) = P¹(a)b + aP¹(b)`. Values on degree 1 and 2 generators come from
//! instability and are stored in the presentation at load time.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fplin::{self, FpMatrix};
use crate::gca::{GcaError, Monomial, Polynomial, Presentation, QuotientRing};
use crate::report::{Check, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpKind {
    Beta,
    P1,
}

impl OpKind {
    pub const ALL: [OpKind; 2] = [OpKind::Beta, OpKind::P1];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Beta => "beta",
            OpKind::P1 => "P1",
        }
    }

    pub fn from_name(s: &str) -> Option<OpKind> {
        match s {
            "beta" => Some(OpKind::Beta),
            "P1" | "p1" => Some(OpKind::P1),
            _ => None,
        }
    }

    pub fn degree_shift(self, p: u32) -> u32 {
        match self {
            OpKind::Beta => 1,
            OpKind::P1 => 2 * (p - 1),
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpsError {
    #[error("{op} is not defined on generator `{generator}`")]
    UndefinedAction { op: OpKind, generator: String },
    #[error(transparent)]
    Gca(#[from] GcaError),
}

fn table_value(pres: &Presentation, op: OpKind, g: usize) -> Result<&Polynomial, OpsError> {
    let entry = match op {
        OpKind::Beta => pres.beta_entry(g),
        OpKind::P1 => pres.p1_entry(g),
    };
    entry
        .map(|e| &e.value)
        .ok_or_else(|| OpsError::UndefinedAction { op, generator: pres.generators()[g].name.clone() })
}

/// The operation on a monomial, in the free algebra (no reduction).
pub fn eval_monomial_free(pres: &Presentation, op: OpKind, m: &Monomial) -> Result<Polynomial, OpsError> {
    let alg = pres.algebra();
    let p = alg.p();
    let n = alg.ngens();
    // factors in declared order, with repetition
    let factors: Vec<usize> = m.support().flat_map(|(g, e)| std::iter::repeat_n(g, e as usize)).collect();
    let mut out = Polynomial::zero();
    let mut prefix = Monomial::one(n);
    let mut prefix_degree = 0u32;
    for (j, &g) in factors.iter().enumerate() {
        let value = table_value(pres, op, g)?;
        if !value.is_zero() {
            let mut suffix = Monomial::one(n);
            for &h in &factors[j + 1..] {
                suffix.0[h] += 1;
            }
            let left = Polynomial::from_term(prefix.clone(), 1);
            let right = Polynomial::from_term(suffix, 1);
            let term = alg.mul(&alg.mul(&left, value), &right);
            let negative = op == OpKind::Beta && prefix_degree % 2 == 1;
            out.add_scaled(&term, if negative { p - 1 } else { 1 }, p);
        }
        prefix.0[g] += 1;
        prefix_degree += alg.gen_degree(g);
    }
    Ok(out)
}

/// The operation on a polynomial, in the free algebra (no reduction).
pub fn eval_free(pres: &Presentation, op: OpKind, q: &Polynomial) -> Result<Polynomial, OpsError> {
    let p = pres.algebra().p();
    let mut out = Polynomial::zero();
    for (m, c) in q.terms() {
        out.add_scaled(&eval_monomial_free(pres, op, m)?, c, p);
    }
    Ok(out)
}

/// The operation followed by normal form.
pub fn eval(ring: &QuotientRing, op: OpKind, q: &Polynomial) -> Result<Polynomial, OpsError> {
    let v = eval_free(ring.presentation(), op, q)?;
    Ok(ring.normal_form_any(&v)?)
}

pub fn eval_beta(ring: &QuotientRing, q: &Polynomial) -> Result<Polynomial, OpsError> {
    eval(ring, OpKind::Beta, q)
}

pub fn eval_p1(ring: &QuotientRing, q: &Polynomial) -> Result<Polynomial, OpsError> {
    eval(ring, OpKind::P1, q)
}

/// Matrix of the operation from the degree-`d` quotient basis to degree
/// `d + shift`; column `k` holds the image of basis monomial `k`.
pub fn op_matrix(ring: &QuotientRing, op: OpKind, d: u32) -> Result<FpMatrix, OpsError> {
    let shift = op.degree_shift(ring.presentation().p());
    let source = ring.degree_basis(d)?;
    let target = ring.degree_basis(d + shift)?;
    let mut m = FpMatrix::zeros(ring.p() as u32, target.dim(), source.dim()).expect("valid prime");
    for (k, mono) in source.basis_monomials().enumerate() {
        let image = eval_monomial_free(ring.presentation(), op, mono)?;
        let coords = ring.coords_in(&image, d + shift)?;
        for (r, c) in coords.into_iter().enumerate() {
            m.set(r, k, c);
        }
    }
    Ok(m)
}

/// Result of [`check_closure`].
#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    pub presentation: String,
    pub cap: u32,
    pub checks: Vec<Check>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

/// Checks that β and P¹ preserve the relation ideal through the ring's cap,
/// that β∘β vanishes on every basis monomial, and that every stated identity holds.
pub fn check_closure(ring: &QuotientRing) -> ClosureReport {
    let pres = ring.presentation();
    let p = pres.p();
    let cap = ring.cap();
    let alg = pres.algebra();
    let mut checks = Vec::new();

    for (i, r) in pres.relations().iter().enumerate() {
        let label = r.label.clone().unwrap_or_else(|| pres.format(&r.polynomial));
        let d = alg.degree(&r.polynomial).expect("relations are homogeneous");
        for op in OpKind::ALL {
            let name = format!("{op}(relation {i}: {label})");
            let target = d + op.degree_shift(p);
            if target > cap {
                checks.push(Check::skipped(name, format!("degree {target} above cap {cap}")));
                continue;
            }
            match eval(ring, op, &r.polynomial) {
                Ok(v) if v.is_zero() => checks.push(Check::pass(name)),
                Ok(v) => checks.push(Check::fail(name, format!("normal form {}", pres.format(&v)))),
                Err(OpsError::UndefinedAction { generator, .. }) => {
                    checks.push(Check::skipped(name, format!("{op} undefined on {generator}")))
                }
                Err(e) => checks.push(Check::fail(name, e.to_string())),
            }
        }
    }

    for d in 0..=cap.saturating_sub(2) {
        let name = format!("beta^2 = 0 in degree {d}");
        let result = op_matrix(ring, OpKind::Beta, d)
            .and_then(|b1| Ok((b1, op_matrix(ring, OpKind::Beta, d + 1)?)))
            .map(|(b1, b2)| b2.mul(&b1).expect("compatible shapes"));
        match result {
            Ok(m) if m.is_zero() => checks.push(Check::pass(name)),
            Ok(m) => {
                let basis = ring.degree_basis(d).expect("within cap");
                let bad = (0..m.cols()).find(|&c| !fplin::is_zero(&m.column(c))).expect("nonzero column");
                let mono = Polynomial::from_term(basis.basis_monomial(bad).clone(), 1);
                checks.push(Check::fail(name, format!("beta(beta({})) != 0", pres.format(&mono))));
            }
            Err(OpsError::UndefinedAction { generator, .. }) => {
                checks.push(Check::skipped(name, format!("beta undefined on {generator}")))
            }
            Err(e) => checks.push(Check::fail(name, e.to_string())),
        }
    }

    for id in pres.identities() {
        let name = format!("identity {}", id.label);
        let d = alg.degree(&id.argument).expect("validated at load") + id.op.degree_shift(p);
        if d > cap {
            checks.push(Check::skipped(name, format!("degree {d} above cap {cap}")));
            continue;
        }
        let result = eval(ring, id.op, &id.argument)
            .and_then(|lhs| Ok((lhs, ring.normal_form_any(&id.value)?)));
        match result {
            Ok((lhs, rhs)) if lhs == rhs => checks.push(Check::pass(name)),
            Ok((lhs, rhs)) => checks.push(Check::fail(
                name,
                format!("computed {}, stated {}", pres.format(&lhs), pres.format(&rhs)),
            )),
            Err(OpsError::UndefinedAction { generator, op }) => {
                checks.push(Check::skipped(name, format!("{op} undefined on {generator}")))
            }
            Err(e) => checks.push(Check::fail(name, e.to_string())),
        }
    }

    ClosureReport { presentation: pres.name().to_string(), cap, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::PresentationBuilder;

    fn ring() -> QuotientRing {
        let pres = PresentationBuilder::new("t", 3)
            .generator("y", 1)
            .generator("y'", 1)
            .generator("x", 2)
            .generator("x'", 2)
            .generator("X", 3)
            .relation("y*y'", "0")
            .relation("x*y'", "x'*y")
            .relation("x^3*y'", "x'^3*y")
            .relation("x^3*x'", "x'^3*x")
            .beta("y", "x")
            .beta("y'", "x'")
            .beta_default("x")
            .beta_default("x'")
            .beta_default("X")
            .build()
            .unwrap();
        QuotientRing::new(pres, 8)
    }

    fn parse(ring: &QuotientRing, s: &str) -> Polynomial {
        ring.presentation().parse(s).unwrap()
    }

    #[test]
    fn beta_is_a_derivation() {
        let r = ring();
        assert_eq!(eval_beta(&r, &parse(&r, "y")).unwrap(), parse(&r, "x"));
        assert!(eval_beta(&r, &parse(&r, "1")).unwrap().is_zero());
        // β(yy') = xy' - yx', zero modulo xy' = x'y
        let free = eval_free(r.presentation(), OpKind::Beta, &parse(&r, "y*y'")).unwrap();
        assert_eq!(free, parse(&r, "x*y' - y*x'"));
        assert!(eval_beta(&r, &parse(&r, "y*y'")).unwrap().is_zero());
        // sign on the second factor: β(y x) = x^2, β(x y) = x^2 as well
        assert_eq!(eval_beta(&r, &parse(&r, "x*y")).unwrap(), parse(&r, "x^2"));
    }

    #[test]
    fn p1_follows_cartan_and_instability() {
        let r = ring();
        assert!(eval_p1(&r, &parse(&r, "y")).unwrap().is_zero());
        assert_eq!(eval_p1(&r, &parse(&r, "x")).unwrap(), parse(&r, "x^3"));
        // P¹(x x') = x^3 x' + x x'^3
        assert_eq!(eval_free(r.presentation(), OpKind::P1, &parse(&r, "x*x'")).unwrap(), parse(&r, "x^3*x' + x*x'^3"));
        let err = eval_p1(&r, &parse(&r, "X")).unwrap_err();
        assert_eq!(err, OpsError::UndefinedAction { op: OpKind::P1, generator: "X".into() });
    }

    #[test]
    fn closure_report_passes_and_skips() {
        let r = ring();
        let report = check_closure(&r);
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert!(report.count(Status::Pass) > 0);
    }

    #[test]
    fn closure_detects_a_broken_table() {
        let pres = PresentationBuilder::new("t", 3)
            .generator("y", 1)
            .generator("x", 2)
            .generator("w", 3)
            .relation("x*y", "0")
            .beta("y", "x")
            .beta("x", "w")
            .beta_default("w")
            .build()
            .unwrap();
        let r = QuotientRing::new(pres, 6);
        let report = check_closure(&r);
        assert!(!report.passed());
        assert!(report.failures().any(|c| c.name.starts_with("beta^2")));
    }
}
