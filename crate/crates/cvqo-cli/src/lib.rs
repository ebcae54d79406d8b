//! Library half of the `cvqo` command-line tool: figure datasets, report
//! assembly, the oracle verification run and byte-stable formatting.
//!
//! The binary in `main.rs` is a thin argument layer over these functions;
//! the acceptance test suite drives them directly.

pub mod figures;
pub mod format;
pub mod reports;
pub mod verify;
