//! Exact state calculus in a truncated photon-number basis.
//!
//! This oracle carries one- and two-mode states as complex amplitude arrays
//! over `|0..cutoff>` per mode, pushes them through squeezers (as exact
//! squeezed-vacuum expansions) and beamsplitters (as exact unitaries on the
//! photon-number basis), and recomputes quadrature covariances from the
//! amplitudes. At weak squeezing it must agree with the covariance engine
//! to well below its own truncation error.
//!
//! Truncation is tracked as `leakage`, the probability mass lost to states
//! above the cutoff; covariance extraction refuses to run when it exceeds
//! [`LEAKAGE_LIMIT`].
//!
//! One number worth recording: splitting a single weakly squeezed beam on a
//! 50/50 beamsplitter gives, to first order in the pair amplitude `xi`,
//!
//! ```text
//! |00> + (xi/sqrt(2)) (|11> + (1/sqrt(2)) (|20> + |02>))
//! ```
//!
//! The unseparated-pair coefficient computed by the exact unitary is
//! `1/sqrt(2)`, not the `1/2` sometimes quoted; the ratio
//! `amp(20)/amp(11)` below is exact at every squeezing strength because
//! the beamsplitter conserves total photon number.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{quad_index, Quadrature};

/// Largest tolerated truncation leakage before covariance extraction.
pub const LEAKAGE_LIMIT: f64 = 1e-6;

/// Complex amplitudes over a truncated one- or two-mode number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    modes: usize,
    cutoff: usize,
    amps: Vec<Complex64>,
    leakage: f64,
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < 4 || !cutoff.is_multiple_of(2) {
        return Err(Error::InvalidCutoff(cutoff));
    }
    Ok(())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

impl FockVector {
    /// `|0>` or `|00>`.
    pub fn vacuum(modes: usize, cutoff: usize) -> Result<Self> {
        if modes == 0 || modes > 2 {
            return Err(Error::DimensionMismatch(format!(
                "Fock oracle supports 1 or 2 modes, got {modes}"
            )));
        }
        check_cutoff(cutoff)?;
        let dim = (cutoff + 1).pow(modes as u32);
        let mut amps = vec![Complex64::ZERO; dim];
        amps[0] = Complex64::ONE;
        Ok(FockVector {
            modes,
            cutoff,
            amps,
            leakage: 0.0,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Probability mass lost to truncation so far.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    fn index(&self, ns: &[usize]) -> usize {
        match *ns {
            [n] if self.modes == 1 => n,
            [m, n] if self.modes == 2 => m * (self.cutoff + 1) + n,
            _ => panic!("occupation list does not match mode count"),
        }
    }

    /// Amplitude on `|n>` or `|m n>`.
    pub fn amplitude(&self, ns: &[usize]) -> Complex64 {
        self.amps[self.index(ns)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability mass on odd total photon number; beamsplitters must keep
    /// it exactly zero for even-parity inputs.
    pub fn odd_parity_mass(&self) -> f64 {
        let d = self.cutoff + 1;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let total = if self.modes == 1 { *i } else { i / d + i % d };
                total % 2 == 1
            })
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Two one-mode vectors combined into a two-mode product state.
    pub fn tensor(&self, other: &FockVector) -> Result<FockVector> {
        if self.modes != 1 || other.modes != 1 {
            return Err(Error::DimensionMismatch(
                "tensor expects two one-mode vectors".into(),
            ));
        }
        if self.cutoff != other.cutoff {
            return Err(Error::DimensionMismatch(format!(
                "cutoffs differ: {} vs {}",
                self.cutoff, other.cutoff
            )));
        }
        let d = self.cutoff + 1;
        let mut amps = vec![Complex64::ZERO; d * d];
        for m in 0..d {
            for n in 0..d {
                amps[m * d + n] = self.amps[m] * other.amps[n];
            }
        }
        Ok(FockVector {
            modes: 2,
            cutoff: self.cutoff,
            amps,
            leakage: 1.0 - (1.0 - self.leakage) * (1.0 - other.leakage),
        })
    }
}

/// Squeezed vacuum with quadrature variances `(G, 1/G)`, expanded over even
/// photon numbers:
///
/// ```text
/// c_{2n} = tanh(r)^n sqrt((2n)!) / (2^n n!) / sqrt(cosh r),  r = ln(G)/2
/// ```
///
/// Odd amplitudes vanish identically. The ratio `c_2/c_0 = tanh(r)/sqrt(2)`
/// is the pair amplitude `xi` of the weak-squeezing picture.
pub fn fock_squeezed_vacuum(gain: f64, cutoff: usize) -> Result<FockVector> {
    if gain <= 0.0 || !gain.is_finite() {
        return Err(Error::InvalidGain(gain));
    }
    check_cutoff(cutoff)?;
    let r = gain.ln() / 2.0;
    let t = r.tanh();
    let norm = 1.0 / r.cosh().sqrt();
    let mut out = FockVector::vacuum(1, cutoff)?;
    let mut total = 0.0;
    for n in 0..=(cutoff / 2) {
        let c = norm * t.powi(n as i32) * factorial(2 * n).sqrt()
            / (2.0f64.powi(n as i32) * factorial(n));
        out.amps[2 * n] = Complex64::new(c, 0.0);
        total += c * c;
    }
    out.leakage = (1.0 - total).max(0.0);
    Ok(out)
}

/// Exact beamsplitter action on a two-mode vector, with the same convention
/// as the covariance engine: `a -> sqrt(eta) a + sqrt(1-eta) b`,
/// `b -> sqrt(1-eta) a - sqrt(eta) b`.
///
/// The map conserves total photon number, so it is evaluated exactly on an
/// extended basis before re-truncating; only the re-truncation adds
/// leakage. Fails if accumulated leakage passes [`LEAKAGE_LIMIT`].
pub fn fock_beamsplitter(input: &FockVector, eta: f64) -> Result<FockVector> {
    if input.modes != 2 {
        return Err(Error::DimensionMismatch(
            "beamsplitter expects a two-mode vector".into(),
        ));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidTransmissivity(eta));
    }
    let t = eta.sqrt();
    let r = (1.0 - eta).sqrt();
    let d_in = input.cutoff + 1;
    // Total photon number is bounded by 2*cutoff, so the extended basis
    // holds the exact image.
    let d_ext = 2 * input.cutoff + 1;
    let mut ext = vec![Complex64::ZERO; d_ext * d_ext];
    for m in 0..d_in {
        for n in 0..d_in {
            let c = input.amps[m * d_in + n];
            if c == Complex64::ZERO {
                continue;
            }
            // (t a' + r b')^m (r a' - t b')^n acting on |00>, normalized.
            let base = (factorial(m) * factorial(n)).sqrt();
            for k in 0..=m {
                let left = binomial(m, k) * t.powi(k as i32) * r.powi((m - k) as i32);
                for l in 0..=n {
                    let right = binomial(n, l) * r.powi(l as i32) * (-t).powi((n - l) as i32);
                    let out_a = k + l;
                    let out_b = m + n - k - l;
                    let coeff = (factorial(out_a) * factorial(out_b)).sqrt() / base * left * right;
                    ext[out_a * d_ext + out_b] += c * coeff;
                }
            }
        }
    }
    let mut out = FockVector {
        modes: 2,
        cutoff: input.cutoff,
        amps: vec![Complex64::ZERO; d_in * d_in],
        leakage: input.leakage,
    };
    let mut lost = 0.0;
    for a in 0..d_ext {
        for b in 0..d_ext {
            let amp = ext[a * d_ext + b];
            if a < d_in && b < d_in {
                out.amps[a * d_in + b] = amp;
            } else {
                lost += amp.norm_sqr();
            }
        }
    }
    out.leakage += lost;
    if out.leakage > LEAKAGE_LIMIT {
        return Err(Error::CutoffTooSmall {
            leakage: out.leakage,
            limit: LEAKAGE_LIMIT,
        });
    }
    Ok(out)
}

/// Apply `X+` or `X-` of one mode to the amplitudes, in a basis extended by
/// one photon so no matrix element is lost.
fn apply_quadrature(state: &FockVector, mode: usize, quad: Quadrature) -> Vec<Complex64> {
    let d_in = state.cutoff + 1;
    let d_ext = d_in + 1;
    let dim_ext = d_ext.pow(state.modes as u32);
    let mut out = vec![Complex64::ZERO; dim_ext];
    // X+ = a + a+; X- = i (a+ - a).
    let (down, up) = match quad {
        Quadrature::Plus => (Complex64::ONE, Complex64::ONE),
        Quadrature::Minus => (Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0)),
    };
    let occupations = |idx: usize| -> (usize, usize) {
        if state.modes == 1 {
            (idx, 0)
        } else {
            (idx / d_in, idx % d_in)
        }
    };
    let ext_index = |m: usize, n: usize| -> usize {
        if state.modes == 1 {
            m
        } else {
            m * d_ext + n
        }
    };
    for (idx, &c) in state.amps.iter().enumerate() {
        if c == Complex64::ZERO {
            continue;
        }
        let (m, n) = occupations(idx);
        let occ = if mode == 0 { m } else { n };
        if occ > 0 {
            let target = if mode == 0 { (m - 1, n) } else { (m, n - 1) };
            out[ext_index(target.0, target.1)] += down * c * (occ as f64).sqrt();
        }
        let target = if mode == 0 { (m + 1, n) } else { (m, n + 1) };
        out[ext_index(target.0, target.1)] += up * c * ((occ + 1) as f64).sqrt();
    }
    out
}

/// Quadrature covariance matrix recomputed from the amplitudes, in the same
/// interleaved `(X1+, X1-, X2+, X2-)` layout as the covariance engine.
/// Entries are symmetrized second moments about the quadrature means.
pub fn fock_quadrature_covariance(state: &FockVector) -> Result<nalgebra::DMatrix<f64>> {
    if state.leakage > LEAKAGE_LIMIT {
        return Err(Error::CutoffTooSmall {
            leakage: state.leakage,
            limit: LEAKAGE_LIMIT,
        });
    }
    let norm_sq = state.norm_sq();
    let dim = 2 * state.modes;
    let mut applied = Vec::with_capacity(dim);
    for mode in 0..state.modes {
        for quad in [Quadrature::Plus, Quadrature::Minus] {
            applied.push(apply_quadrature(state, mode, quad));
        }
    }
    // Embed the state itself in the extended basis for first moments.
    let d_in = state.cutoff + 1;
    let d_ext = d_in + 1;
    let mut embedded = vec![Complex64::ZERO; d_ext.pow(state.modes as u32)];
    for (idx, &c) in state.amps.iter().enumerate() {
        let target = if state.modes == 1 {
            idx
        } else {
            (idx / d_in) * d_ext + idx % d_in
        };
        embedded[target] = c;
    }
    let inner = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
    };
    let mut means = vec![0.0; dim];
    for (i, xi) in applied.iter().enumerate() {
        means[i] = inner(&embedded, xi).re / norm_sq;
    }
    let mut cov = nalgebra::DMatrix::zeros(dim, dim);
    for mode_a in 0..state.modes {
        for quad_a in [Quadrature::Plus, Quadrature::Minus] {
            let i = quad_index(mode_a, quad_a);
            for mode_b in 0..state.modes {
                for quad_b in [Quadrature::Plus, Quadrature::Minus] {
                    let j = quad_index(mode_b, quad_b);
                    let second = inner(&applied[i], &applied[j]).re / norm_sq;
                    cov[(i, j)] = second - means[i] * means[j];
                }
            }
        }
    }
    Ok(cov)
}
