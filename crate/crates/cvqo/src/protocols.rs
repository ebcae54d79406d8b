//! Recipes for the entangled resources (biased and unbiased EPR pairs,
//! GHZ triples) and the local-OPA protocol that makes biased pure
//! entanglement unbiased without changing its strength.
//!
//! # EPR pairs
//!
//! [`make_epr_pair`] mixes two minimum-uncertainty squeezed vacua on a
//! 50/50 beamsplitter. For pure inputs the conditional-variance product of
//! the outputs has the closed form `4 / (2 + V1+ V2- + V1- V2+)`.
//!
//! [`symmetrize_epr`] applies one squeezer with the same gain to each
//! entangled beam. Any gain leaves the product unchanged; the gain
//! `G = sqrt(V1-/V2+)` from [`symmetrizing_gain`] equalizes the two
//! conditional variances, which also drops the per-beam photon number to
//! the minimum the correlation strength allows. A single-squeezer pair
//! symmetrized this way is entrywise identical to a two-squeezer pair
//! built with squeezed variances `sqrt(s)`.
//!
//! # GHZ triples
//!
//! [`make_ghz_triple`] realizes the three-beam network
//!
//! ```text
//! GHZ1 = sqrt(1/3) X1 - sqrt(2/3) X2
//! GHZ2 = sqrt(1/3) X1 + sqrt(1/6) X2 + sqrt(1/2) X3
//! GHZ3 = sqrt(1/3) X1 + sqrt(1/6) X2 - sqrt(1/2) X3
//! ```
//!
//! as a cascade of two beamsplitters (1:2 then 1:1) plus a relabeling; the
//! composite mode-mixing matrix equals the coefficients above.
//!
//! Two published GHZ formulas needed numerical adjudication here:
//!
//! * The balanced-input condition: with beams 2 and 3 squeezed to `v`, the
//!   beam-1 variance from [`ghz_maximal_input_variance`] produces equal
//!   three-beam conditional variances when it is paired with the **same**
//!   quadrature (`V1+ = f(V2,3+)`), not the conjugate one. The conjugate
//!   pairing leaves the state biased; [`GhzRecipe::maximal`] uses the
//!   pairing that passes the check.
//! * The OPA gain for a single-squeezer GHZ state:
//!   [`ghz_symmetrizing_gain`] evaluates the published expression, which
//!   carries a `1/sqrt(3)` prefactor and evaluates to `1/sqrt(3)` even for
//!   an unsqueezed input. Applying it does *not* equalize the conditional
//!   variances (their ratio lands at 3, not 1). Dropping the prefactor
//!   does: [`ghz_equalizing_gain`] returns
//!   `sqrt((V1- + 2)/(V1+ + 2))`, and the resulting state matches a
//!   three-squeezer maximal construction. Both gains are exposed.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, SymplecticOp, EQ_TOL};

fn check_pure_input(v_plus: f64, v_minus: f64) -> Result<()> {
    for v in [v_plus, v_minus] {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::InvalidVariance(v));
        }
    }
    let uncertainty = v_plus * v_minus;
    if (uncertainty - 1.0).abs() > EQ_TOL {
        return Err(Error::ImpureRecipe(uncertainty));
    }
    Ok(())
}

/// Input-beam variances for an EPR pair; each beam must be minimum
/// uncertainty (`V+ V- = 1`).
///
/// Inputs are parameterized by variance rather than squeezing parameter:
/// the implied squeezer gain on vacuum is just `G = V+`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EprRecipe {
    pub v1_plus: f64,
    pub v1_minus: f64,
    pub v2_plus: f64,
    pub v2_minus: f64,
}

impl EprRecipe {
    /// Build and validate a recipe from all four variances.
    pub fn new(v1_plus: f64, v1_minus: f64, v2_plus: f64, v2_minus: f64) -> Result<Self> {
        check_pure_input(v1_plus, v1_minus)?;
        check_pure_input(v2_plus, v2_minus)?;
        Ok(EprRecipe {
            v1_plus,
            v1_minus,
            v2_plus,
            v2_minus,
        })
    }

    /// Pure recipe from the two independent degrees of freedom: beam 1's
    /// amplitude variance and beam 2's phase variance.
    pub fn pure(v1_plus: f64, v2_minus: f64) -> Result<Self> {
        for v in [v1_plus, v2_minus] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::InvalidVariance(v));
            }
        }
        Ok(EprRecipe {
            v1_plus,
            v1_minus: 1.0 / v1_plus,
            v2_plus: 1.0 / v2_minus,
            v2_minus,
        })
    }

    /// One amplitude-squeezed beam (`V1+ = s`) mixed with vacuum.
    pub fn single_squeezed(s: f64) -> Result<Self> {
        Self::pure(s, 1.0)
    }

    /// Two equally squeezed beams on orthogonal quadratures
    /// (`V1+ = V2- = s`); the unbiased workhorse.
    pub fn two_squeezed(s: f64) -> Result<Self> {
        Self::pure(s, s)
    }

    /// Squeezer gains that produce the two input beams from vacuum.
    pub fn squeezer_gains(&self) -> (f64, f64) {
        (self.v1_plus, self.v2_plus)
    }
}

/// Mix the recipe's two squeezed vacua on a 50/50 beamsplitter; mode 0 and
/// mode 1 are the two entangled outputs.
pub fn make_epr_pair(recipe: &EprRecipe) -> Result<GaussianState> {
    check_pure_input(recipe.v1_plus, recipe.v1_minus)?;
    check_pure_input(recipe.v2_plus, recipe.v2_minus)?;
    GaussianState::vacuum(2)?
        .squeeze(0, recipe.v1_plus)?
        .squeeze(1, recipe.v2_plus)?
        .beamsplitter(0, 1, 0.5)
}

/// Gain `G = sqrt(V1- / V2+)` that makes pure EPR entanglement unbiased.
///
/// For a single squeezed input beam this is the standard deviation of its
/// anti-squeezed quadrature, `sqrt(V1-)`.
pub fn symmetrizing_gain(v1_minus: f64, v2_plus: f64) -> Result<f64> {
    for v in [v1_minus, v2_plus] {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::InvalidVariance(v));
        }
    }
    Ok((v1_minus / v2_plus).sqrt())
}

/// Pass both entangled beams through local squeezers with one shared gain.
///
/// The conditional-variance product is untouched for every `G > 0`; with
/// the gain from [`symmetrizing_gain`] the output is unbiased and maximal.
pub fn symmetrize_epr(
    state: &GaussianState,
    mode_a: usize,
    mode_b: usize,
    gain: f64,
) -> Result<GaussianState> {
    if mode_a == mode_b {
        return Err(Error::SameMode(mode_a));
    }
    state.squeeze(mode_a, gain)?.squeeze(mode_b, gain)
}

/// Input-beam variances for the three-beam GHZ network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzRecipe {
    pub v1_plus: f64,
    pub v1_minus: f64,
    pub v2_plus: f64,
    pub v2_minus: f64,
    pub v3_plus: f64,
    pub v3_minus: f64,
}

impl GhzRecipe {
    pub fn new(
        v1_plus: f64,
        v1_minus: f64,
        v2_plus: f64,
        v2_minus: f64,
        v3_plus: f64,
        v3_minus: f64,
    ) -> Result<Self> {
        check_pure_input(v1_plus, v1_minus)?;
        check_pure_input(v2_plus, v2_minus)?;
        check_pure_input(v3_plus, v3_minus)?;
        Ok(GhzRecipe {
            v1_plus,
            v1_minus,
            v2_plus,
            v2_minus,
            v3_plus,
            v3_minus,
        })
    }

    /// Pure recipe from the three amplitude variances.
    pub fn from_plus_variances(v1_plus: f64, v2_plus: f64, v3_plus: f64) -> Result<Self> {
        for v in [v1_plus, v2_plus, v3_plus] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::InvalidVariance(v));
            }
        }
        Ok(GhzRecipe {
            v1_plus,
            v1_minus: 1.0 / v1_plus,
            v2_plus,
            v2_minus: 1.0 / v2_plus,
            v3_plus,
            v3_minus: 1.0 / v3_plus,
        })
    }

    /// Three vacuum inputs.
    pub fn vacuum() -> Self {
        GhzRecipe {
            v1_plus: 1.0,
            v1_minus: 1.0,
            v2_plus: 1.0,
            v2_minus: 1.0,
            v3_plus: 1.0,
            v3_minus: 1.0,
        }
    }

    /// One squeezed beam (`V1+ = s`) divided equally in three.
    pub fn single_squeezed(s: f64) -> Result<Self> {
        Self::from_plus_variances(s, 1.0, 1.0)
    }

    /// Three equally squeezed beams with beam 1 orthogonal to beams 2, 3:
    /// `V1+ = s`, `V2+ = V3+ = 1/s`.
    pub fn equal_squeezed(s: f64) -> Result<Self> {
        if s <= 0.0 || !s.is_finite() {
            return Err(Error::InvalidVariance(s));
        }
        Self::from_plus_variances(s, 1.0 / s, 1.0 / s)
    }

    /// Balanced (maximal) recipe: beams 2 and 3 at `V2,3+ = v23` and beam 1
    /// at the variance from [`ghz_maximal_input_variance`] paired on the
    /// same quadrature, which is the pairing that numerically yields
    /// `Vcv3+ = Vcv3-` (see the module docs).
    pub fn maximal(v23: f64) -> Result<Self> {
        let v1 = ghz_maximal_input_variance(v23)?;
        Self::from_plus_variances(v1, v23, v23)
    }

    /// The exact network coefficients; rows are output beams, columns input
    /// beams, identical for both quadratures.
    pub fn coefficient_matrix() -> Matrix3<f64> {
        let third = (1.0f64 / 3.0).sqrt();
        let two_thirds = (2.0f64 / 3.0).sqrt();
        let sixth = (1.0f64 / 6.0).sqrt();
        let half = (1.0f64 / 2.0).sqrt();
        Matrix3::new(
            third,
            -two_thirds,
            0.0, //
            third,
            sixth,
            half, //
            third,
            sixth,
            -half,
        )
    }
}

/// Composite symplectic map of the GHZ network on three modes
/// (beamsplitter cascade plus relabeling).
pub fn ghz_network_op() -> SymplecticOp {
    let first = SymplecticOp::beamsplitter(3, 0, 1, 2.0 / 3.0).expect("valid beamsplitter");
    let second = SymplecticOp::beamsplitter(3, 0, 2, 0.5).expect("valid beamsplitter");
    let relabel = SymplecticOp::mode_swap(3, 0, 1).expect("valid swap");
    first
        .then(&second)
        .and_then(|op| op.then(&relabel))
        .expect("mode counts agree")
}

/// Combine the recipe's three squeezed vacua into a GHZ triple; output mode
/// `i` carries beam `GHZ(i+1)` of the network above.
pub fn make_ghz_triple(recipe: &GhzRecipe) -> Result<GaussianState> {
    check_pure_input(recipe.v1_plus, recipe.v1_minus)?;
    check_pure_input(recipe.v2_plus, recipe.v2_minus)?;
    check_pure_input(recipe.v3_plus, recipe.v3_minus)?;
    GaussianState::vacuum(3)?
        .squeeze(0, recipe.v1_plus)?
        .squeeze(1, recipe.v2_plus)?
        .squeeze(2, recipe.v3_plus)?
        .apply(&ghz_network_op())
}

/// Beam-1 variance that balances the three-beam conditional variances when
/// beams 2 and 3 sit at `v23`:
///
/// ```text
/// V1 = (1 - v^2 + sqrt(1 - v^2 + v^4)) / v,   v = v23
/// ```
///
/// Self-consistent under purity: `f(v) f(1/v) = 1`, so applying it to both
/// quadratures of beam 1 keeps the beam minimum uncertainty.
pub fn ghz_maximal_input_variance(v23: f64) -> Result<f64> {
    if v23 <= 0.0 || !v23.is_finite() {
        return Err(Error::InvalidVariance(v23));
    }
    let v2 = v23 * v23;
    Ok((1.0 - v2 + (1.0 - v2 + v2 * v2).sqrt()) / v23)
}

/// The published OPA gain for turning a single-squeezer GHZ state maximal:
///
/// ```text
/// G = (1/sqrt(3)) * sqrt((V1- + 2) / (V1+ + 2))
/// ```
///
/// Evaluated exactly as printed. Note that it returns `1/sqrt(3)` for an
/// unsqueezed beam and does not equalize the conditional variances; see
/// [`ghz_equalizing_gain`] for the variant that does.
pub fn ghz_symmetrizing_gain(v1_plus: f64, v1_minus: f64) -> Result<f64> {
    for v in [v1_plus, v1_minus] {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::InvalidVariance(v));
        }
    }
    Ok(((v1_minus + 2.0) / (v1_plus + 2.0)).sqrt() / 3.0f64.sqrt())
}

/// OPA gain `sqrt((V1- + 2)/(V1+ + 2))` that actually equalizes the
/// three-beam conditional variances of a single-squeezer GHZ state
/// (`sqrt(3)` times [`ghz_symmetrizing_gain`]); the result matches a
/// balanced three-squeezer construction. Returns 1 for an unsqueezed beam.
pub fn ghz_equalizing_gain(v1_plus: f64, v1_minus: f64) -> Result<f64> {
    for v in [v1_plus, v1_minus] {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::InvalidVariance(v));
        }
    }
    Ok(((v1_minus + 2.0) / (v1_plus + 2.0)).sqrt())
}

/// Apply one squeezer with shared gain `G` to all three GHZ beams.
pub fn symmetrize_ghz(state: &GaussianState, gain: f64) -> Result<GaussianState> {
    if state.mode_count() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "GHZ symmetrization expects 3 modes, got {}",
            state.mode_count()
        )));
    }
    state.squeeze(0, gain)?.squeeze(1, gain)?.squeeze(2, gain)
}
