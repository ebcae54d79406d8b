//! Doc-test anchors for the guide chapters under `book/src/`.
//!
//! Each hidden module pulls in one chapter so that `cargo test` compiles
//! and runs every Rust snippet the book shows.

#[doc = include_str!("../../../book/src/gaussian-states.md")]
mod gaussian_states {}

#[doc = include_str!("../../../book/src/entanglement.md")]
mod entanglement {}

#[doc = include_str!("../../../book/src/symmetrization.md")]
mod symmetrization {}

#[doc = include_str!("../../../book/src/teleportation.md")]
mod teleportation {}

#[doc = include_str!("../../../book/src/ghz.md")]
mod ghz {}

#[doc = include_str!("../../../book/src/verification.md")]
mod verification {}
