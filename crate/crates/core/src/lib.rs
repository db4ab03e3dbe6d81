//! Analogue neural dynamics for square linear systems `Ax = b`.
//!
//! The guide in `book/` walks through each module; its code blocks are
//! compiled and run as doc-tests of this crate.

pub mod analysis;
pub mod experiments;
pub mod integrator;
pub mod linalg;
pub mod models;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/linear-algebra.md")]
    mod linear_algebra {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/integration.md")]
    mod integration {}
    #[doc = include_str!("../../../book/src/stability.md")]
    mod stability {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
