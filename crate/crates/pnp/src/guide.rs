//! The user guide, one module per chapter of the mdbook in `book/`.
//!
//! The chapters are included verbatim with `#[doc = include_str!(..)]`, so
//! `cargo test --doc` compiles and runs every code snippet in the book and
//! the guide can never drift out of sync with the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/scheme.md")]
pub mod scheme {}

#[doc = include_str!("../../../book/src/diagnostics.md")]
pub mod diagnostics {}

#[doc = include_str!("../../../book/src/scenarios.md")]
pub mod scenarios {}
