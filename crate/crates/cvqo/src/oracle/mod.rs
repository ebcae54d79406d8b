//! Independent verification engines for the Gaussian pipeline.
//!
//! [`sampling`] draws quadrature fluctuations from a state's multivariate
//! normal and estimates conditional variances by least-squares regression;
//! [`fock`] carries exact truncated photon-number-basis states through
//! squeezers and beamsplitters and recomputes quadrature covariances from
//! them. Neither path shares code with the covariance engine it checks.

pub mod fock;
pub mod sampling;
