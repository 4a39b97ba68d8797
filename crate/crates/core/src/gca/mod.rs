//! Graded-commutative algebras over `F_p` given by generators and relations.

pub mod expr;
pub mod format;
mod poly;
mod presentation;
mod quotient;

pub use poly::{FreeAlgebra, GeneratorInfo, Monomial, Polynomial};
pub use presentation::{
    Definition, HigherBockstein, Identity, Presentation, PresentationBuilder, PresentationError, Relation, TableEntry,
    TableSource,
};
pub use quotient::{default_cap, DegreeBasis, GcaError, QuotientRing};
