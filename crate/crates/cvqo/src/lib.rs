//! Gaussian continuous-variable quantum optics engine.
//!
//! `cvqo` builds EPR and GHZ entangled states from squeezed inputs, measures
//! their quantum correlations and photon resources, redistributes biased
//! correlations with local parametric (OPA) operations, and evaluates
//! teleportation fidelities both in closed form and by direct simulation of
//! the Gaussian network.
//!
//! Everything rests on one state carrier, [`gaussian::GaussianState`]
//! (quadrature means plus a covariance matrix with vacuum variance 1), and
//! one operation carrier, [`gaussian::SymplecticOp`].
//!
//! Two independent verification engines live in [`oracle`]: Monte-Carlo
//! sampling with regression-based conditional-variance estimation, and an
//! exact truncated Fock-basis calculus for weak squeezing.
//!
//! A narrative guide with runnable snippets is under `book/` at the
//! repository root; the chapters double as doc-tests of this crate.

pub mod error;
pub mod gaussian;
pub mod metrics;
pub mod oracle;
pub mod protocols;
pub mod teleport;

mod book;

pub use error::{Error, Result};
pub use gaussian::{GaussianState, Quadrature, SymplecticOp, EQ_TOL, PHYS_TOL};
