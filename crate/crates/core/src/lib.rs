//! Free-group word computations for knots on free Seifert surfaces.
//!
//! A knot is a cyclic word in `F(a, b)`. The modules decide, for such a word:
//!
//! * [`bns`]: whether the BNS invariant of `⟨a, b | K⟩` is empty, by Brown's
//!   lattice-path criterion;
//! * [`uniqueness`]: every spelling `K = λμ̄νλ̄μν̄`, and whether any annulus
//!   word is a proper power;
//! * [`stallings`]: membership and conjugacy into finitely generated
//!   subgroups, including the two boundary subgroups a twisting curve must
//!   avoid.
//!
//! [`expr`] and [`family`] produce the words `K_{p,q,n}` from parametric
//! templates; [`report`] bundles the verdicts for catalogs.
//!
//! ```
//! use knotgroups::expr::Binding;
//! use knotgroups::family::Registry;
//!
//! let k = Registry::builtin()
//!     .require("fig6c")
//!     .unwrap()
//!     .generate(&Binding::new(3, 2, 2))
//!     .unwrap();
//! assert!(knotgroups::bns::classify(&k).unwrap().empty);
//! ```

pub mod bns;
pub mod expr;
pub mod family;
pub mod report;
pub mod stallings;
pub mod svg;
pub mod uniqueness;
pub mod word;

// The guide's chapters double as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/expressions.md")]
    mod expressions {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/bns.md")]
    mod bns {}
    #[doc = include_str!("../../../book/src/uniqueness.md")]
    mod uniqueness {}
    #[doc = include_str!("../../../book/src/stallings.md")]
    mod stallings {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
