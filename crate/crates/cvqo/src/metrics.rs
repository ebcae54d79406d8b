//! Conditional variances, the EPR and GHZ correlation criteria, and the
//! photon-resource maximality measure `lambda`.
//!
//! The primary definition of every conditional variance is the Schur
//! complement of the conditioning block, i.e. the residual variance of the
//! best linear estimate of the target quadrature from the conditioner
//! quadratures. With a single conditioner this reduces to the familiar
//! `V_b - |<dX_b dX_a>|^2 / V_a`.
//!
//! For the three-beam case a closed-form expansion is also in circulation
//! in which the triple-correlation term `C_ab C_ac C_bc` enters the
//! subtracted numerator with the opposite sign to the Schur complement
//! (`+2 C_ab C_ac C_bc` instead of `-2 C_ab C_ac C_bc`). Both values are
//! computed here; the Schur form is authoritative for the violation flag
//! and the expanded form is reported alongside it as a cross-check. On GHZ
//! states built from one squeezed beam the two genuinely differ, since the
//! triple product of the (negative) inter-beam correlations is nonzero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{quad_index, GaussianState, Quadrature, EQ_TOL};

/// Purity gate for photon-resource comparisons. Looser than the purity
/// *assertion* tolerance so that long operation chains are not rejected for
/// round-off drift alone.
const PURITY_GATE: f64 = 1e-6;

/// Conditional variance of `target`'s quadrature given homodyne knowledge of
/// the same quadrature of every mode in `conditioners`.
///
/// Returns the Schur complement `V_t - S_tc S_cc^-1 S_ct` restricted to the
/// chosen quadrature. Fails with [`Error::DegenerateConditioner`] when the
/// conditioning block is singular (a perfectly squeezed or duplicated
/// conditioner).
pub fn conditional_variance(
    state: &GaussianState,
    target: usize,
    conditioners: &[usize],
    quad: Quadrature,
) -> Result<f64> {
    let modes = state.mode_count();
    if target >= modes {
        return Err(Error::ModeOutOfRange {
            mode: target,
            modes,
        });
    }
    for &c in conditioners {
        if c >= modes {
            return Err(Error::ModeOutOfRange { mode: c, modes });
        }
        if c == target {
            return Err(Error::SameMode(c));
        }
    }
    let cov = state.cov();
    let t = quad_index(target, quad);
    if conditioners.is_empty() {
        return Ok(cov[(t, t)]);
    }
    let idx: Vec<usize> = conditioners.iter().map(|&c| quad_index(c, quad)).collect();
    let k = idx.len();
    let mut block = nalgebra::DMatrix::zeros(k, k);
    let mut cross = nalgebra::DVector::zeros(k);
    for (i, &ri) in idx.iter().enumerate() {
        cross[i] = cov[(t, ri)];
        for (j, &rj) in idx.iter().enumerate() {
            block[(i, j)] = cov[(ri, rj)];
        }
    }
    let lu = block.lu();
    if lu.determinant().abs() <= EQ_TOL {
        return Err(Error::DegenerateConditioner);
    }
    let solved = lu.solve(&cross).ok_or(Error::DegenerateConditioner)?;
    Ok(cov[(t, t)] - cross.dot(&solved))
}

/// EPR correlation report for a mode pair.
///
/// `vcv_plus`/`vcv_minus` infer mode `b` from mode `a`; `product` is their
/// product and `entangled` is the strict `product < 1` criterion. Photon
/// numbers are the actual per-beam sideband counts, `n_maximal` the minimum
/// count compatible with the same product, and `lambda` their ratio (`None`
/// when the state carries no photons or the pair is not pure).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EprReport {
    pub vcv_plus: f64,
    pub vcv_minus: f64,
    pub product: f64,
    pub entangled: bool,
    pub n_epr_a: f64,
    pub n_epr_b: f64,
    pub n_maximal: f64,
    pub lambda: Option<f64>,
}

/// Evaluate the EPR criterion for the pair `(mode_a, mode_b)`, inferring
/// `b` from `a` in both quadratures.
pub fn epr_product(state: &GaussianState, mode_a: usize, mode_b: usize) -> Result<EprReport> {
    if mode_a == mode_b {
        return Err(Error::SameMode(mode_a));
    }
    let vcv_plus = conditional_variance(state, mode_b, &[mode_a], Quadrature::Plus)?;
    let vcv_minus = conditional_variance(state, mode_b, &[mode_a], Quadrature::Minus)?;
    let product = vcv_plus * vcv_minus;
    let n_epr_a = state.sideband_photons(mode_a)?;
    let n_epr_b = state.sideband_photons(mode_b)?;
    let n_maximal = if product > 0.0 {
        minimal_photon_number(vcv_plus, vcv_minus)?
    } else {
        f64::INFINITY
    };
    let lambda = maximality_lambda(state, mode_a, mode_b).unwrap_or(None);
    Ok(EprReport {
        vcv_plus,
        vcv_minus,
        product,
        entangled: product < 1.0,
        n_epr_a,
        n_epr_b,
        n_maximal,
        lambda,
    })
}

/// Direction-insensitive EPR product: the larger (more conservative) of the
/// two inference directions. For every pure non-rotated pair the directions
/// coincide exactly (the minus covariance block is the inverse of the plus
/// block, collapsing both products to the same expression); only mixed
/// pairs can differ.
pub fn symmetrized_epr_product(state: &GaussianState, mode_a: usize, mode_b: usize) -> Result<f64> {
    let ab = epr_product(state, mode_a, mode_b)?.product;
    let ba = epr_product(state, mode_b, mode_a)?.product;
    Ok(ab.max(ba))
}

/// Minimum sideband photon number per beam compatible with a given pair of
/// conditional variances: `1/sqrt(vcv+ vcv-) - 1`.
///
/// Over all pairs with the same product this is the minimum of
/// `(1/v+ + 1/v-)/2 - 1`, attained when the two are equal.
pub fn minimal_photon_number(vcv_plus: f64, vcv_minus: f64) -> Result<f64> {
    for v in [vcv_plus, vcv_minus] {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::InvalidVariance(v));
        }
    }
    Ok(1.0 / (vcv_plus * vcv_minus).sqrt() - 1.0)
}

/// Ratio of the minimum photon number needed for the pair's correlation
/// strength to the photon number actually present (mean of the two beams).
///
/// `Some(1)` for unbiased pure entanglement, `Some(< 1)` for biased pure
/// entanglement, `None` for the degenerate photon-free case (two vacua).
/// Requires the reduced pair state to be pure; mixed pairs are rejected.
///
/// The ratio is a quotient of two quantities that both vanish as the state
/// approaches vacuum, so its round-off error grows like `eps / n_epr`;
/// values are only meaningful well away from the photon-free manifold.
pub fn maximality_lambda(
    state: &GaussianState,
    mode_a: usize,
    mode_b: usize,
) -> Result<Option<f64>> {
    if mode_a == mode_b {
        return Err(Error::SameMode(mode_a));
    }
    let pair = state.reduced(&[mode_a, mode_b])?;
    let det = pair.purity_determinant();
    if (det - 1.0).abs() > PURITY_GATE {
        return Err(Error::ImpureState(det));
    }
    let n_a = state.sideband_photons(mode_a)?;
    let n_b = state.sideband_photons(mode_b)?;
    let n_mean = 0.5 * (n_a + n_b);
    if n_mean <= EQ_TOL {
        return Ok(None);
    }
    let vcv_plus = conditional_variance(state, mode_b, &[mode_a], Quadrature::Plus)?;
    let vcv_minus = conditional_variance(state, mode_b, &[mode_a], Quadrature::Minus)?;
    let n_max = minimal_photon_number(vcv_plus, vcv_minus)?;
    Ok(Some(n_max / n_mean))
}

/// Three-beam correlation report.
///
/// `vcv3_plus`/`vcv3_minus` condition the target on the other two beams via
/// the Schur complement; `violation` is the strict `product < 1` flag. The
/// `cross_check` fields hold the expanded closed form with the opposite
/// triple-correlation sign (see the module docs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhzReport {
    pub target: usize,
    pub vcv3_plus: f64,
    pub vcv3_minus: f64,
    pub product: f64,
    pub violation: bool,
    pub vcv3_plus_cross_check: f64,
    pub vcv3_minus_cross_check: f64,
}

/// Evaluate the three-beam correlation criterion for `target` conditioned
/// on `other_a` and `other_b`.
pub fn ghz_product(
    state: &GaussianState,
    target: usize,
    other_a: usize,
    other_b: usize,
) -> Result<GhzReport> {
    if other_a == other_b {
        return Err(Error::SameMode(other_a));
    }
    let conditioners = [other_a, other_b];
    let vcv3_plus = conditional_variance(state, target, &conditioners, Quadrature::Plus)?;
    let vcv3_minus = conditional_variance(state, target, &conditioners, Quadrature::Minus)?;
    let product = vcv3_plus * vcv3_minus;
    let cross_plus =
        expanded_three_beam_variance(state, target, other_a, other_b, Quadrature::Plus)?;
    let cross_minus =
        expanded_three_beam_variance(state, target, other_a, other_b, Quadrature::Minus)?;
    Ok(GhzReport {
        target,
        vcv3_plus,
        vcv3_minus,
        product,
        violation: product < 1.0,
        vcv3_plus_cross_check: cross_plus,
        vcv3_minus_cross_check: cross_minus,
    })
}

/// Expanded three-beam conditional variance with the triple-correlation term
/// subtracted twice:
///
/// ```text
/// V_a - (V_b C_ac^2 + V_c C_ab^2 + 2 C_ab C_ac C_bc) / (V_b V_c - C_bc^2)
/// ```
///
/// The Schur complement carries `-2 C_ab C_ac C_bc` in the numerator
/// instead. Kept as a cross-check; not used for violation flags.
pub fn expanded_three_beam_variance(
    state: &GaussianState,
    target: usize,
    other_a: usize,
    other_b: usize,
    quad: Quadrature,
) -> Result<f64> {
    let v_a = state.variance(target, quad)?;
    let v_b = state.variance(other_a, quad)?;
    let v_c = state.variance(other_b, quad)?;
    let c_ab = state.correlation(target, quad, other_a, quad)?;
    let c_ac = state.correlation(target, quad, other_b, quad)?;
    let c_bc = state.correlation(other_a, quad, other_b, quad)?;
    let denom = v_b * v_c - c_bc * c_bc;
    if denom.abs() <= EQ_TOL {
        return Err(Error::DegenerateConditioner);
    }
    Ok(v_a - (v_b * c_ac * c_ac + v_c * c_ab * c_ab + 2.0 * c_ab * c_ac * c_bc) / denom)
}
