//! Multimode Gaussian states of the optical field and the symplectic
//! operations that move them around.
//!
//! # Conventions
//!
//! A state over `M` modes is carried by a mean quadrature vector of length
//! `2M` and a real symmetric `2M x 2M` covariance matrix. Quadratures are
//! interleaved per mode as `(X1+, X1-, X2+, X2-, ...)`, where `X+` is the
//! amplitude quadrature and `X-` the phase quadrature.
//!
//! Variances are normalized so that the vacuum has `V+ = V- = 1` and the
//! uncertainty relation reads `V+ V- >= 1`. To convert to the `hbar/2`
//! convention divide every covariance entry by 2 (there `V_vac = 1/2`).
//!
//! The beamsplitter convention is
//!
//! ```text
//! out_a = sqrt(eta) in_a + sqrt(1 - eta) in_b
//! out_b = sqrt(1 - eta) in_a - sqrt(eta) in_b
//! ```
//!
//! applied identically to both quadratures (zero phase difference between
//! the inputs); `eta = 1/2` gives the usual `(in_a +/- in_b)/sqrt(2)` pair.
//! A squeezer (degenerate OPA in the classical pump limit) with gain `G`
//! maps `X+ -> sqrt(G) X+` and `X- -> X-/sqrt(G)`.
//!
//! States carry no sideband-frequency parameter: everything here describes
//! fluctuations at one fixed sideband frequency.
//!
//! Tolerances: exact-equality checks use [`EQ_TOL`] (1e-12); physicality and
//! purity checks use [`PHYS_TOL`] (1e-9). Covariances are re-symmetrized
//! after every operation to suppress round-off drift.
//!
//! All values are immutable; every operation returns a new state, so values
//! can be shared freely across threads.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for exact-equality checks (covariance symmetry, recipe purity).
pub const EQ_TOL: f64 = 1e-12;

/// Tolerance for physicality and purity checks.
pub const PHYS_TOL: f64 = 1e-9;

/// One of the two conjugate quadratures of a mode.
///
/// `Plus` is the amplitude quadrature, `Minus` the phase quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    Plus,
    Minus,
}

impl Quadrature {
    /// Offset of this quadrature inside a mode's `(X+, X-)` pair.
    pub fn offset(self) -> usize {
        match self {
            Quadrature::Plus => 0,
            Quadrature::Minus => 1,
        }
    }

    /// The conjugate quadrature.
    pub fn conjugate(self) -> Quadrature {
        match self {
            Quadrature::Plus => Quadrature::Minus,
            Quadrature::Minus => Quadrature::Plus,
        }
    }
}

/// Row/column index of `(mode, quadrature)` in the interleaved layout.
pub fn quad_index(mode: usize, quad: Quadrature) -> usize {
    2 * mode + quad.offset()
}

/// A multimode Gaussian state: mean quadrature vector plus quadrature
/// covariance matrix in the vacuum-variance-1 normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

/// A linear map on the quadrature vector representing a squeezer,
/// beamsplitter, mode permutation or any composition of those.
///
/// The maps used here preserve the symplectic form of the `(X+, X-)`
/// pairing, so they send pure Gaussian states to pure Gaussian states.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticOp {
    modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticOp {
    /// Identity map on `modes` modes.
    pub fn identity(modes: usize) -> Self {
        SymplecticOp {
            modes,
            matrix: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    /// Single-mode squeezer with gain `G`: `X+ -> sqrt(G) X+`,
    /// `X- -> X-/sqrt(G)` on the selected mode.
    pub fn squeezer(modes: usize, mode: usize, gain: f64) -> Result<Self> {
        check_mode(mode, modes)?;
        if gain <= 0.0 || !gain.is_finite() {
            return Err(Error::InvalidGain(gain));
        }
        let mut op = Self::identity(modes);
        let root = gain.sqrt();
        let p = quad_index(mode, Quadrature::Plus);
        let m = quad_index(mode, Quadrature::Minus);
        op.matrix[(p, p)] = root;
        op.matrix[(m, m)] = 1.0 / root;
        Ok(op)
    }

    /// Beamsplitter between `mode_a` and `mode_b` with transmissivity `eta`,
    /// acting identically on both quadratures.
    pub fn beamsplitter(modes: usize, mode_a: usize, mode_b: usize, eta: f64) -> Result<Self> {
        check_mode(mode_a, modes)?;
        check_mode(mode_b, modes)?;
        if mode_a == mode_b {
            return Err(Error::SameMode(mode_a));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidTransmissivity(eta));
        }
        let t = eta.sqrt();
        let r = (1.0 - eta).sqrt();
        let mut op = Self::identity(modes);
        for quad in [Quadrature::Plus, Quadrature::Minus] {
            let a = quad_index(mode_a, quad);
            let b = quad_index(mode_b, quad);
            op.matrix[(a, a)] = t;
            op.matrix[(a, b)] = r;
            op.matrix[(b, a)] = r;
            op.matrix[(b, b)] = -t;
        }
        Ok(op)
    }

    /// Relabeling that swaps two modes.
    pub fn mode_swap(modes: usize, mode_a: usize, mode_b: usize) -> Result<Self> {
        check_mode(mode_a, modes)?;
        check_mode(mode_b, modes)?;
        let mut op = Self::identity(modes);
        if mode_a != mode_b {
            for quad in [Quadrature::Plus, Quadrature::Minus] {
                let a = quad_index(mode_a, quad);
                let b = quad_index(mode_b, quad);
                op.matrix[(a, a)] = 0.0;
                op.matrix[(b, b)] = 0.0;
                op.matrix[(a, b)] = 1.0;
                op.matrix[(b, a)] = 1.0;
            }
        }
        Ok(op)
    }

    /// Composition `next . self` (apply `self` first).
    pub fn then(&self, next: &SymplecticOp) -> Result<Self> {
        if self.modes != next.modes {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose maps on {} and {} modes",
                self.modes, next.modes
            )));
        }
        Ok(SymplecticOp {
            modes: self.modes,
            matrix: &next.matrix * &self.matrix,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.clone().lu().determinant()
    }

    /// Largest entrywise deviation of `S J S^T` from the symplectic form `J`
    /// of the `(X+, X-)` pairing. Zero (up to round-off) for a valid map.
    pub fn symplectic_defect(&self) -> f64 {
        let n = 2 * self.modes;
        let mut j = DMatrix::zeros(n, n);
        for mode in 0..self.modes {
            let p = 2 * mode;
            j[(p, p + 1)] = 1.0;
            j[(p + 1, p)] = -1.0;
        }
        let image = &self.matrix * &j * self.matrix.transpose();
        (image - j).abs().max()
    }

    /// The 3x3 (or `M x M`) mode-mixing matrix of a map that acts
    /// identically on both quadrature blocks, read off the `X+` entries.
    pub fn mode_mixing_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.modes, self.modes);
        for i in 0..self.modes {
            for j in 0..self.modes {
                m[(i, j)] = self.matrix[(2 * i, 2 * j)];
            }
        }
        m
    }
}

fn check_mode(mode: usize, modes: usize) -> Result<()> {
    if mode >= modes {
        return Err(Error::ModeOutOfRange { mode, modes });
    }
    Ok(())
}

impl GaussianState {
    /// The `modes`-mode vacuum: zero mean, identity covariance.
    pub fn vacuum(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::EmptyState);
        }
        Ok(GaussianState {
            modes,
            mean: DVector::zeros(2 * modes),
            cov: DMatrix::identity(2 * modes, 2 * modes),
        })
    }

    /// Build a state from raw parts, validating dimensions and symmetry.
    pub fn from_parts(modes: usize, mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = 2 * modes;
        if mean.len() != n || cov.nrows() != n || cov.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected mean length {} and cov {}x{}",
                n, n, n
            )));
        }
        let asym = (&cov - cov.transpose()).abs().max();
        if asym > 1e-9 {
            return Err(Error::InvalidSerializedState(format!(
                "covariance asymmetric by {asym:e}"
            )));
        }
        let mut state = GaussianState { modes, mean, cov };
        state.symmetrize();
        Ok(state)
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Mean of one quadrature.
    pub fn mean_of(&self, mode: usize, quad: Quadrature) -> Result<f64> {
        check_mode(mode, self.modes)?;
        Ok(self.mean[quad_index(mode, quad)])
    }

    /// Variance `V+` or `V-` of one mode.
    pub fn variance(&self, mode: usize, quad: Quadrature) -> Result<f64> {
        check_mode(mode, self.modes)?;
        let i = quad_index(mode, quad);
        Ok(self.cov[(i, i)])
    }

    /// Covariance `<dX_a dX_b>` between two (mode, quadrature) labels.
    pub fn correlation(
        &self,
        mode_a: usize,
        quad_a: Quadrature,
        mode_b: usize,
        quad_b: Quadrature,
    ) -> Result<f64> {
        check_mode(mode_a, self.modes)?;
        check_mode(mode_b, self.modes)?;
        Ok(self.cov[(quad_index(mode_a, quad_a), quad_index(mode_b, quad_b))])
    }

    /// Average sideband photon number of one mode,
    /// `n = (V+ + V-)/2 - 1`, clamped to zero from tiny negative round-off.
    pub fn sideband_photons(&self, mode: usize) -> Result<f64> {
        let n = 0.5
            * (self.variance(mode, Quadrature::Plus)? + self.variance(mode, Quadrature::Minus)?)
            - 1.0;
        if (-EQ_TOL..=0.0).contains(&n) {
            Ok(0.0)
        } else {
            Ok(n)
        }
    }

    /// Apply a symplectic map: `mean -> S mean`, `cov -> S cov S^T`.
    pub fn apply(&self, op: &SymplecticOp) -> Result<Self> {
        if op.modes != self.modes {
            return Err(Error::DimensionMismatch(format!(
                "map on {} modes applied to {}-mode state",
                op.modes, self.modes
            )));
        }
        let mut out = GaussianState {
            modes: self.modes,
            mean: &op.matrix * &self.mean,
            cov: &op.matrix * &self.cov * op.matrix.transpose(),
        };
        out.symmetrize();
        Ok(out)
    }

    /// Squeeze one mode with gain `G` (`X+ -> sqrt(G) X+`, `X- -> X-/sqrt(G)`).
    pub fn squeeze(&self, mode: usize, gain: f64) -> Result<Self> {
        self.apply(&SymplecticOp::squeezer(self.modes, mode, gain)?)
    }

    /// Mix two modes on a beamsplitter of transmissivity `eta`.
    pub fn beamsplitter(&self, mode_a: usize, mode_b: usize, eta: f64) -> Result<Self> {
        self.apply(&SymplecticOp::beamsplitter(
            self.modes, mode_a, mode_b, eta,
        )?)
    }

    /// Swap the labels of two modes.
    pub fn swap_modes(&self, mode_a: usize, mode_b: usize) -> Result<Self> {
        self.apply(&SymplecticOp::mode_swap(self.modes, mode_a, mode_b)?)
    }

    /// Shift the mean of one quadrature; the covariance is untouched.
    /// Models an ideal amplitude or phase modulator.
    pub fn displace(&self, mode: usize, quad: Quadrature, amount: f64) -> Result<Self> {
        check_mode(mode, self.modes)?;
        let mut out = self.clone();
        out.mean[quad_index(mode, quad)] += amount;
        Ok(out)
    }

    /// Tensor product with another state (its modes are appended).
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let modes = self.modes + other.modes;
        let n = 2 * modes;
        let na = 2 * self.modes;
        let mut mean = DVector::zeros(n);
        let mut cov = DMatrix::zeros(n, n);
        mean.rows_mut(0, na).copy_from(&self.mean);
        mean.rows_mut(na, 2 * other.modes).copy_from(&other.mean);
        cov.view_mut((0, 0), (na, na)).copy_from(&self.cov);
        cov.view_mut((na, na), (2 * other.modes, 2 * other.modes))
            .copy_from(&other.cov);
        GaussianState { modes, mean, cov }
    }

    /// Marginal state over the listed modes, in the listed order.
    pub fn reduced(&self, keep: &[usize]) -> Result<GaussianState> {
        if keep.is_empty() {
            return Err(Error::EmptyState);
        }
        for &m in keep {
            check_mode(m, self.modes)?;
        }
        let rows: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let n = rows.len();
        let mut mean = DVector::zeros(n);
        let mut cov = DMatrix::zeros(n, n);
        for (i, &ri) in rows.iter().enumerate() {
            mean[i] = self.mean[ri];
            for (j, &rj) in rows.iter().enumerate() {
                cov[(i, j)] = self.cov[(ri, rj)];
            }
        }
        Ok(GaussianState {
            modes: keep.len(),
            mean,
            cov,
        })
    }

    /// Condition on an ideal homodyne measurement of one quadrature with a
    /// known `outcome`. The measured mode is consumed; the remaining
    /// covariance is the Schur complement of the measured row/column and the
    /// remaining mean is updated linearly by `(outcome - prior mean)`.
    ///
    /// Conditioning the last mode away yields an empty (0-mode) state.
    pub fn condition_on(
        &self,
        mode: usize,
        quad: Quadrature,
        outcome: f64,
    ) -> Result<GaussianState> {
        check_mode(mode, self.modes)?;
        let q = quad_index(mode, quad);
        let var = self.cov[(q, q)];
        if var <= EQ_TOL {
            return Err(Error::DegenerateMeasurement(var));
        }
        // Rows kept: everything except the measured mode's pair. The
        // unmeasured quadrature of that mode is traced out with it.
        let rows: Vec<usize> = (0..2 * self.modes).filter(|&r| r / 2 != mode).collect();
        let n = rows.len();
        let mut mean = DVector::zeros(n);
        let mut cov = DMatrix::zeros(n, n);
        let shift = (outcome - self.mean[q]) / var;
        for (i, &ri) in rows.iter().enumerate() {
            mean[i] = self.mean[ri] + self.cov[(ri, q)] * shift;
            for (j, &rj) in rows.iter().enumerate() {
                cov[(i, j)] = self.cov[(ri, rj)] - self.cov[(ri, q)] * self.cov[(q, rj)] / var;
            }
        }
        let mut out = GaussianState {
            modes: self.modes - 1,
            mean,
            cov,
        };
        out.symmetrize();
        Ok(out)
    }

    /// Like [`condition_on`](Self::condition_on) but with the outcome drawn
    /// from the measured quadrature's marginal. Returns the conditioned
    /// state together with the sampled outcome. Deterministic per RNG state.
    pub fn condition_sampled<R: Rng + ?Sized>(
        &self,
        mode: usize,
        quad: Quadrature,
        rng: &mut R,
    ) -> Result<(GaussianState, f64)> {
        check_mode(mode, self.modes)?;
        let q = quad_index(mode, quad);
        let var = self.cov[(q, q)];
        if var <= EQ_TOL {
            return Err(Error::DegenerateMeasurement(var));
        }
        let z: f64 = rng.sample(StandardNormal);
        let outcome = self.mean[q] + var.sqrt() * z;
        Ok((self.condition_on(mode, quad, outcome)?, outcome))
    }

    /// `det(cov)`; equals 1 for pure states in this normalization.
    pub fn purity_determinant(&self) -> f64 {
        self.cov.clone().lu().determinant()
    }

    /// Whether `det(cov)` is within `tol` of 1.
    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity_determinant() - 1.0).abs() <= tol
    }

    /// Single-mode uncertainty product `V+ V- - C^2` where `C` is the
    /// intra-mode cross covariance. Physical states give `>= 1`.
    pub fn uncertainty_product(&self, mode: usize) -> Result<f64> {
        check_mode(mode, self.modes)?;
        let p = quad_index(mode, Quadrature::Plus);
        let m = quad_index(mode, Quadrature::Minus);
        Ok(self.cov[(p, p)] * self.cov[(m, m)] - self.cov[(p, m)].powi(2))
    }

    /// Check that every single-mode marginal respects the uncertainty bound
    /// and that the covariance is positive semi-definite, both within
    /// [`PHYS_TOL`].
    pub fn check_physical(&self) -> Result<()> {
        for mode in 0..self.modes {
            let u = self.uncertainty_product(mode)?;
            if u < 1.0 - PHYS_TOL {
                return Err(Error::NotPositiveSemiDefinite(u - 1.0));
            }
        }
        let eig = self.cov.clone().symmetric_eigen();
        let min = eig.eigenvalues.min();
        if min < -PHYS_TOL {
            return Err(Error::NotPositiveSemiDefinite(min));
        }
        Ok(())
    }

    fn symmetrize(&mut self) {
        let t = self.cov.transpose();
        self.cov += t;
        self.cov *= 0.5;
    }
}

/// Flat JSON representation: `mode_count`, `mean`, row-major `cov`.
#[derive(Serialize, Deserialize)]
struct RawState {
    mode_count: usize,
    mean: Vec<f64>,
    cov: Vec<f64>,
}

impl Serialize for GaussianState {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let n = 2 * self.modes;
        let raw = RawState {
            mode_count: self.modes,
            mean: self.mean.iter().copied().collect(),
            cov: (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| self.cov[(i, j)])
                .collect(),
        };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianState {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = RawState::deserialize(deserializer)?;
        if raw.mode_count == 0 {
            return Err(serde::de::Error::custom("mode_count must be at least 1"));
        }
        let n = 2 * raw.mode_count;
        if raw.mean.len() != n || raw.cov.len() != n * n {
            return Err(serde::de::Error::custom(format!(
                "expected mean length {} and cov length {}",
                n,
                n * n
            )));
        }
        let mean = DVector::from_vec(raw.mean);
        let cov = DMatrix::from_row_slice(n, n, &raw.cov);
        GaussianState::from_parts(raw.mode_count, mean, cov)
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn max_cov_diff(a: &GaussianState, b: &GaussianState) -> f64 {
        (a.cov() - b.cov()).abs().max()
    }

    #[test]
    fn vacuum_is_identity_covariance() {
        let v1 = GaussianState::vacuum(1).unwrap();
        assert_eq!(v1.variance(0, Quadrature::Plus).unwrap(), 1.0);
        assert_eq!(v1.variance(0, Quadrature::Minus).unwrap(), 1.0);
        assert_eq!(
            v1.correlation(0, Quadrature::Plus, 0, Quadrature::Minus)
                .unwrap(),
            0.0
        );
        let v2 = GaussianState::vacuum(2).unwrap();
        assert_eq!(v2.cov(), &DMatrix::identity(4, 4));
        assert_eq!(v2.sideband_photons(0).unwrap(), 0.0);
    }

    #[test]
    fn vacuum_rejects_zero_modes() {
        assert_eq!(GaussianState::vacuum(0), Err(Error::EmptyState));
    }

    #[test]
    fn squeezer_scales_variances() {
        let s = GaussianState::vacuum(1).unwrap().squeeze(0, 4.0).unwrap();
        assert!((s.variance(0, Quadrature::Plus).unwrap() - 4.0).abs() < EQ_TOL);
        assert!((s.variance(0, Quadrature::Minus).unwrap() - 0.25).abs() < EQ_TOL);

        let w = GaussianState::vacuum(1).unwrap().squeeze(0, 0.25).unwrap();
        assert!((w.variance(0, Quadrature::Plus).unwrap() - 0.25).abs() < EQ_TOL);
        assert!((w.variance(0, Quadrature::Minus).unwrap() - 4.0).abs() < EQ_TOL);
    }

    #[test]
    fn squeezer_unit_gain_is_identity_and_inverse_composes() {
        let s = GaussianState::vacuum(2)
            .unwrap()
            .squeeze(0, 0.7)
            .unwrap()
            .beamsplitter(0, 1, 0.5)
            .unwrap();
        let same = s.squeeze(1, 1.0).unwrap();
        assert!(max_cov_diff(&s, &same) < EQ_TOL);
        let round_trip = s.squeeze(0, 3.0).unwrap().squeeze(0, 1.0 / 3.0).unwrap();
        assert!(max_cov_diff(&s, &round_trip) < EQ_TOL);
    }

    #[test]
    fn squeezer_rejects_bad_gain() {
        let v = GaussianState::vacuum(1).unwrap();
        assert!(matches!(v.squeeze(0, 0.0), Err(Error::InvalidGain(_))));
        assert!(matches!(v.squeeze(0, -1.0), Err(Error::InvalidGain(_))));
        assert!(matches!(v.squeeze(0, f64::NAN), Err(Error::InvalidGain(_))));
        assert!(matches!(
            v.squeeze(0, f64::INFINITY),
            Err(Error::InvalidGain(_))
        ));
        assert!(matches!(
            v.squeeze(1, 2.0),
            Err(Error::ModeOutOfRange { .. })
        ));
    }

    #[test]
    fn beamsplitter_preserves_vacuum_exactly() {
        let v = GaussianState::vacuum(2).unwrap();
        let out = v.beamsplitter(0, 1, 0.5).unwrap();
        assert!(max_cov_diff(&v, &out) < EQ_TOL);
    }

    #[test]
    fn beamsplitter_second_moments_by_hand() {
        // Mode 0 squeezed to V+ = 0.5, mode 1 vacuum, mixed 50/50:
        // each output V+ = (0.5 + 1)/2, inter-beam <dX+ dX+> = (0.5 - 1)/2.
        let s = GaussianState::vacuum(2)
            .unwrap()
            .squeeze(0, 0.5)
            .unwrap()
            .beamsplitter(0, 1, 0.5)
            .unwrap();
        assert!((s.variance(0, Quadrature::Plus).unwrap() - 0.75).abs() < EQ_TOL);
        assert!((s.variance(1, Quadrature::Plus).unwrap() - 0.75).abs() < EQ_TOL);
        assert!(
            (s.correlation(0, Quadrature::Plus, 1, Quadrature::Plus)
                .unwrap()
                + 0.25)
                .abs()
                < EQ_TOL
        );
    }

    #[test]
    fn beamsplitter_rejects_bad_arguments() {
        let v = GaussianState::vacuum(2).unwrap();
        assert_eq!(v.beamsplitter(0, 0, 0.5), Err(Error::SameMode(0)));
        assert!(matches!(
            v.beamsplitter(0, 1, 0.0),
            Err(Error::InvalidTransmissivity(_))
        ));
        assert!(matches!(
            v.beamsplitter(0, 1, 1.0),
            Err(Error::InvalidTransmissivity(_))
        ));
    }

    #[test]
    fn beamsplitter_conserves_photon_number() {
        let s = GaussianState::vacuum(2)
            .unwrap()
            .squeeze(0, 0.3)
            .unwrap()
            .squeeze(1, 2.5)
            .unwrap();
        let before = s.sideband_photons(0).unwrap() + s.sideband_photons(1).unwrap();
        let after_state = s.beamsplitter(0, 1, 0.37).unwrap();
        let after =
            after_state.sideband_photons(0).unwrap() + after_state.sideband_photons(1).unwrap();
        assert!((before - after).abs() < EQ_TOL);
    }

    #[test]
    fn photon_numbers_match_hand_values() {
        let s = GaussianState::vacuum(1).unwrap().squeeze(0, 4.0).unwrap();
        assert!((s.sideband_photons(0).unwrap() - 1.125).abs() < EQ_TOL);

        // EPR beam from a single squeezed input with G = 0.25.
        let epr = GaussianState::vacuum(2)
            .unwrap()
            .squeeze(0, 0.25)
            .unwrap()
            .beamsplitter(0, 1, 0.5)
            .unwrap();
        assert!((epr.sideband_photons(0).unwrap() - 0.5625).abs() < EQ_TOL);
    }

    #[test]
    fn squeezer_photon_cost() {
        for g in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let s = GaussianState::vacuum(1).unwrap().squeeze(0, g).unwrap();
            let expected = 0.5 * (g + 1.0 / g) - 1.0;
            assert!((s.sideband_photons(0).unwrap() - expected).abs() < EQ_TOL);
        }
    }

    #[test]
    fn displacement_shifts_mean_only() {
        let v = GaussianState::vacuum(1).unwrap();
        let d = v.displace(0, Quadrature::Plus, 2.0).unwrap();
        assert_eq!(d.mean_of(0, Quadrature::Plus).unwrap(), 2.0);
        assert_eq!(d.mean_of(0, Quadrature::Minus).unwrap(), 0.0);
        assert_eq!(d.cov(), v.cov());

        let back = d.displace(0, Quadrature::Plus, -2.0).unwrap();
        assert_eq!(back, v);
        let noop = v.displace(0, Quadrature::Minus, 0.0).unwrap();
        assert_eq!(noop, v);
    }

    #[test]
    fn conditioning_uncorrelated_mode_changes_nothing() {
        let s = GaussianState::vacuum(2).unwrap().squeeze(0, 0.5).unwrap();
        let kept = s.condition_on(1, Quadrature::Plus, 0.3).unwrap();
        assert_eq!(kept.mode_count(), 1);
        assert!((kept.variance(0, Quadrature::Plus).unwrap() - 0.5).abs() < EQ_TOL);
        assert!(kept.mean().abs().max() < EQ_TOL);
    }

    #[test]
    fn conditioning_epr_partner_gives_conditional_variance() {
        // Single squeezed beam V1+ = 0.5 mixed with vacuum; measuring X+ of
        // one output leaves the other with V+ = 2*0.5*1/(0.5+1) = 2/3.
        let s = GaussianState::vacuum(2)
            .unwrap()
            .squeeze(0, 0.5)
            .unwrap()
            .beamsplitter(0, 1, 0.5)
            .unwrap();
        let kept = s.condition_on(1, Quadrature::Plus, 0.0).unwrap();
        assert!((kept.variance(0, Quadrature::Plus).unwrap() - 2.0 / 3.0).abs() < EQ_TOL);
    }

    #[test]
    fn conditioning_preserves_purity_of_remainder() {
        let s = GaussianState::vacuum(2)
            .unwrap()
            .squeeze(0, 0.5)
            .unwrap()
            .beamsplitter(0, 1, 0.5)
            .unwrap();
        let kept = s.condition_on(1, Quadrature::Plus, 1.3).unwrap();
        assert!((kept.purity_determinant() - 1.0).abs() < PHYS_TOL);
    }

    #[test]
    fn conditioning_the_last_mode_leaves_an_empty_state() {
        let s = GaussianState::vacuum(1).unwrap().squeeze(0, 0.5).unwrap();
        let empty = s.condition_on(0, Quadrature::Plus, 0.7).unwrap();
        assert_eq!(empty.mode_count(), 0);
        assert_eq!(empty.mean().len(), 0);
    }

    #[test]
    fn conditioning_rejects_degenerate_quadrature() {
        let mut cov = DMatrix::identity(4, 4);
        cov[(2, 2)] = 0.0;
        let s = GaussianState::from_parts(2, DVector::zeros(4), cov).unwrap();
        assert!(matches!(
            s.condition_on(1, Quadrature::Plus, 0.0),
            Err(Error::DegenerateMeasurement(_))
        ));
    }

    #[test]
    fn sampled_conditioning_is_seed_deterministic() {
        let s = GaussianState::vacuum(2)
            .unwrap()
            .squeeze(0, 0.4)
            .unwrap()
            .beamsplitter(0, 1, 0.5)
            .unwrap()
            .displace(0, Quadrature::Plus, 1.7)
            .unwrap();
        let mut rng_a = ChaCha8Rng::seed_from_u64(11);
        let mut rng_b = ChaCha8Rng::seed_from_u64(11);
        let (state_a, outcome_a) = s
            .condition_sampled(0, Quadrature::Plus, &mut rng_a)
            .unwrap();
        let (state_b, outcome_b) = s
            .condition_sampled(0, Quadrature::Plus, &mut rng_b)
            .unwrap();
        assert_eq!(outcome_a, outcome_b);
        assert_eq!(state_a, state_b);
    }

    #[test]
    fn purity_and_physicality_track_operations() {
        let s = GaussianState::vacuum(3)
            .unwrap()
            .squeeze(0, 0.2)
            .unwrap()
            .squeeze(1, 5.0)
            .unwrap()
            .beamsplitter(0, 1, 0.3)
            .unwrap()
            .beamsplitter(1, 2, 0.5)
            .unwrap();
        assert!(s.is_pure(PHYS_TOL));
        s.check_physical().unwrap();
        for mode in 0..3 {
            assert!(s.uncertainty_product(mode).unwrap() >= 1.0 - PHYS_TOL);
        }
    }

    #[test]
    fn symplectic_ops_pass_form_check() {
        let sq = SymplecticOp::squeezer(2, 0, 3.7).unwrap();
        let bs = SymplecticOp::beamsplitter(2, 0, 1, 0.42).unwrap();
        let both = sq.then(&bs).unwrap();
        for op in [&sq, &bs, &both] {
            assert!(op.symplectic_defect() < EQ_TOL);
            assert!((op.determinant().abs() - 1.0).abs() < PHYS_TOL);
        }
    }

    #[test]
    fn tensor_and_reduced_round_trip() {
        let a = GaussianState::vacuum(1).unwrap().squeeze(0, 0.5).unwrap();
        let b = GaussianState::vacuum(1)
            .unwrap()
            .displace(0, Quadrature::Minus, -1.0)
            .unwrap();
        let joint = a.tensor(&b);
        assert_eq!(joint.mode_count(), 2);
        assert_eq!(&joint.reduced(&[0]).unwrap(), &a);
        assert_eq!(&joint.reduced(&[1]).unwrap(), &b);
    }

    #[test]
    fn mode_swap_relabels() {
        let s = GaussianState::vacuum(2).unwrap().squeeze(0, 0.25).unwrap();
        let swapped = s.swap_modes(0, 1).unwrap();
        assert!((swapped.variance(1, Quadrature::Plus).unwrap() - 0.25).abs() < EQ_TOL);
        assert!((swapped.variance(0, Quadrature::Plus).unwrap() - 1.0).abs() < EQ_TOL);
    }

    #[test]
    fn json_round_trip() {
        let s = GaussianState::vacuum(2)
            .unwrap()
            .squeeze(0, 0.5)
            .unwrap()
            .beamsplitter(0, 1, 0.5)
            .unwrap()
            .displace(1, Quadrature::Plus, 3.0)
            .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: GaussianState = serde_json::from_str(&text).unwrap();
        assert!(max_cov_diff(&s, &back) < EQ_TOL);
        assert_eq!(s.mean(), back.mean());

        let bad =
            serde_json::from_str::<GaussianState>(r#"{"mode_count":1,"mean":[0.0],"cov":[1.0]}"#);
        assert!(bad.is_err());
    }
}
