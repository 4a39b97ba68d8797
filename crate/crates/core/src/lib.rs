//! Exact verification of mod-p cohomology presentations with Bockstein and
//! Steenrod structure for the p-groups `P(p, n)`.
//!
//! The crate is organised bottom-up: [`fplin`] does linear algebra over `F_p`,
//! [`gca`] holds presented graded-commutative algebras, [`ops`] evaluates β and
//! P¹, [`bss`] turns Bockstein pages, [`catalog`] ships the presentations,
//! [`rigidity`] searches endomorphisms and [`oracle`] computes group cohomology
//! dimensions from a minimal resolution.

pub mod bss;
pub mod catalog;
pub mod fplin;
pub mod gca;
pub mod ops;
pub mod oracle;
pub mod report;
pub mod rigidity;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/operations.md")]
    mod operations {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/bockstein.md")]
    mod bockstein {}
    #[doc = include_str!("../../../book/src/rigidity.md")]
    mod rigidity {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
