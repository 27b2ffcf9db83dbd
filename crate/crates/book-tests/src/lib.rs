//! Doc-test shim for the guide under `book/`.
//!
//! mdbook cannot run snippets against external crates, so each chapter is
//! included here as a module's documentation and `cargo test --doc` runs
//! every ```rust block in it. One module per chapter keeps failures
//! attributable to their source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/two-level-dynamics.md")]
pub mod two_level_dynamics {}

#[doc = include_str!("../../../book/src/kick-protocol.md")]
pub mod kick_protocol {}

#[doc = include_str!("../../../book/src/entanglement.md")]
pub mod entanglement {}

#[doc = include_str!("../../../book/src/atom-mediated-kicks.md")]
pub mod atom_mediated_kicks {}

#[doc = include_str!("../../../book/src/running-experiments.md")]
pub mod running_experiments {}
