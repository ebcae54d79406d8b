//! Unity-gain continuous-variable teleportation: closed-form fidelities,
//! optimal parametric gains, and a full Gaussian simulation of the
//! teleporter network that must reproduce the closed forms.
//!
//! # Network and conventions
//!
//! The simulated teleporter takes a two-mode entangled resource (modes A
//! and B) and a one-mode signal S:
//!
//! 1. each resource mode passes through a local OPA with shared gain `G`;
//! 2. S and A mix on a 50/50 beamsplitter, giving `(S + A)/sqrt(2)` and
//!    `(S - A)/sqrt(2)`;
//! 3. `X+` is detected on the sum port and `X-` on the difference port;
//! 4. B is displaced by `sqrt(2)` times each outcome (amplitude and phase
//!    modulators), which makes the signal displacement carry through with
//!    unity gain: `X_out = X_S + (X_A + X_B)` for `X+` and
//!    `X_out = X_S + (X_B - X_A)` for `X-`.
//!
//! This port/sign assignment is fixed by the contract that the output
//! variances must come out as `V+_out = 2 G V1+ + V+_sig` and
//! `V-_out = (2/G) V2- + V-_sig`, with `V1+`/`V2-` the squeezed variances
//! of the resource's two *input* beams.
//!
//! The returned output state is the ensemble state over measurement
//! outcomes (equivalently the Heisenberg-picture linear combination), which
//! is what those added-noise formulas describe.
//!
//! # Report normalization
//!
//! [`TeleportReport`] stores output variances divided by the corresponding
//! signal variances (for a coherent signal that is no change). In that
//! frame one formula covers coherent and squeezed signals alike:
//! `F = 2 / sqrt((v_out+ + 1)(v_out- + 1))`, and the report enforces it by
//! construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, Quadrature};

const RESOURCE_PURITY_GATE: f64 = 1e-6;

/// Outcome multipliers applied by the amplitude/phase modulators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedforwardGains {
    pub plus: f64,
    pub minus: f64,
}

impl FeedforwardGains {
    /// The unity-gain setting `(sqrt(2), sqrt(2))`: the coherent
    /// displacement of the output equals that of the signal.
    pub fn unity() -> Self {
        FeedforwardGains {
            plus: std::f64::consts::SQRT_2,
            minus: std::f64::consts::SQRT_2,
        }
    }

    fn is_unity(&self) -> bool {
        (self.plus - std::f64::consts::SQRT_2).abs() < 1e-12
            && (self.minus - std::f64::consts::SQRT_2).abs() < 1e-12
    }
}

/// Result of one teleportation run or closed-form evaluation.
///
/// `v_out_plus`/`v_out_minus` are signal-normalized output variances;
/// `fidelity` always satisfies `2 / sqrt((v+ + 1)(v- + 1))` and refers to
/// unity-gain operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeleportReport {
    pub v_out_plus: f64,
    pub v_out_minus: f64,
    pub fidelity: f64,
    pub parametric_gain: f64,
    pub feedforward_unity: bool,
    pub beats_classical: bool,
}

impl TeleportReport {
    /// Assemble a report from signal-normalized output variances; the
    /// fidelity field is derived, so the report invariant holds by
    /// construction.
    pub fn from_output_variances(
        v_out_plus: f64,
        v_out_minus: f64,
        parametric_gain: f64,
        feedforward_unity: bool,
    ) -> Result<Self> {
        let fidelity = fidelity_from_output(v_out_plus, v_out_minus)?;
        Ok(TeleportReport {
            v_out_plus,
            v_out_minus,
            fidelity,
            parametric_gain,
            feedforward_unity,
            beats_classical: fidelity > 0.5,
        })
    }
}

/// Coherent-signal teleportation fidelity from output variances:
/// `F = 2 / sqrt((V+_out + 1)(V-_out + 1))`.
pub fn fidelity_from_output(v_out_plus: f64, v_out_minus: f64) -> Result<f64> {
    for v in [v_out_plus, v_out_minus] {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::InvalidVariance(v));
        }
    }
    Ok(2.0 / ((v_out_plus + 1.0) * (v_out_minus + 1.0)).sqrt())
}

fn check_resource_variance(v: f64) -> Result<()> {
    // Zero is allowed as the ideal (infinite squeezing) limit.
    if v < 0.0 || !v.is_finite() {
        return Err(Error::InvalidVariance(v));
    }
    Ok(())
}

fn check_gain(gain: f64) -> Result<()> {
    if gain <= 0.0 || !gain.is_finite() {
        return Err(Error::InvalidGain(gain));
    }
    Ok(())
}

/// Closed-form coherent-signal teleportation at unity gain with parametric
/// gain `G` on a resource built from input beams with squeezed variances
/// `v1_plus` and `v2_minus`:
///
/// ```text
/// V+_out = 2 G V1+ + 1        V-_out = (2/G) V2- + 1
/// F = 1 / sqrt(V1+ V2- + G V1+ + V2-/G + 1)
/// ```
pub fn coherent_fidelity(v1_plus: f64, v2_minus: f64, gain: f64) -> Result<TeleportReport> {
    check_resource_variance(v1_plus)?;
    check_resource_variance(v2_minus)?;
    check_gain(gain)?;
    let v_out_plus = 2.0 * gain * v1_plus + 1.0;
    let v_out_minus = 2.0 / gain * v2_minus + 1.0;
    TeleportReport::from_output_variances(v_out_plus, v_out_minus, gain, true)
}

/// Best coherent-signal fidelity for a given entanglement strength:
/// `F_max = 1 / (sqrt(V1+ V2-) + 1)`, reached at `G = sqrt(V2-/V1+)`.
///
/// Returns `(gain, F_max)`; the gain is `None` in the ideal limits where a
/// resource variance is zero and the optimum is not attained at a finite
/// positive gain.
pub fn max_coherent_fidelity(v1_plus: f64, v2_minus: f64) -> Result<(Option<f64>, f64)> {
    check_resource_variance(v1_plus)?;
    check_resource_variance(v2_minus)?;
    let f_max = 1.0 / ((v1_plus * v2_minus).sqrt() + 1.0);
    let gain = if v1_plus > 0.0 && v2_minus > 0.0 {
        Some((v2_minus / v1_plus).sqrt())
    } else {
        None
    };
    Ok((gain, f_max))
}

/// Teleportation fidelity for a minimum-uncertainty amplitude-squeezed
/// signal with squeezed variance `v_sqz` and arbitrary unknown coherent
/// displacement:
///
/// ```text
/// F = 1 / sqrt(V1+ V2- + G V1+ / V_sqz + V2- V_sqz / G + 1)
/// ```
///
/// With `v_sqz = 1` this reduces exactly to [`coherent_fidelity`].
pub fn squeezed_signal_fidelity(
    v1_plus: f64,
    v2_minus: f64,
    gain: f64,
    v_sqz: f64,
) -> Result<TeleportReport> {
    check_resource_variance(v1_plus)?;
    check_resource_variance(v2_minus)?;
    check_gain(gain)?;
    if v_sqz <= 0.0 || !v_sqz.is_finite() {
        return Err(Error::InvalidVariance(v_sqz));
    }
    // Raw output variances are 2 G V1+ + V_sqz and (2/G) V2- + 1/V_sqz;
    // normalizing by the signal variances gives the report fields.
    let v_out_plus = 2.0 * gain * v1_plus / v_sqz + 1.0;
    let v_out_minus = 2.0 * v2_minus * v_sqz / gain + 1.0;
    TeleportReport::from_output_variances(v_out_plus, v_out_minus, gain, true)
}

/// Parametric gain maximizing [`squeezed_signal_fidelity`]:
/// `G = V_sqz sqrt(V2-/V1+)`. The attained fidelity equals the coherent
/// `F_max`. `None` in the zero-variance ideal limits.
pub fn optimal_squeezed_signal_gain(v1_plus: f64, v2_minus: f64, v_sqz: f64) -> Option<f64> {
    if v1_plus > 0.0 && v2_minus > 0.0 && v_sqz > 0.0 {
        Some(v_sqz * (v2_minus / v1_plus).sqrt())
    } else {
        None
    }
}

/// Map a two-mode resource state back to the effective input-beam squeezed
/// variances `(V1+, V2-)` that enter the closed-form fidelities.
///
/// The teleporter's added noise is `Var(X_A+ + X_B+) = 2 V1+` in amplitude
/// and `Var(X_B- - X_A-) = 2 V2-` in phase, so the effective values are
/// read off the joint second moments. For a pair built by 50/50 mixing they
/// equal the recipe's input variances exactly.
pub fn effective_input_variances(resource: &GaussianState) -> Result<(f64, f64)> {
    if resource.mode_count() != 2 {
        return Err(Error::ResourceModeCount(resource.mode_count()));
    }
    let vp = 0.5
        * (resource.variance(0, Quadrature::Plus)?
            + resource.variance(1, Quadrature::Plus)?
            + 2.0 * resource.correlation(0, Quadrature::Plus, 1, Quadrature::Plus)?);
    let vm = 0.5
        * (resource.variance(0, Quadrature::Minus)? + resource.variance(1, Quadrature::Minus)?
            - 2.0 * resource.correlation(0, Quadrature::Minus, 1, Quadrature::Minus)?);
    Ok((vp, vm))
}

/// Run the full Gaussian teleporter.
///
/// `resource` is the raw two-mode entangled pair (the OPAs with gain
/// `parametric_gain` are applied inside, one per station). `feedforward`
/// defaults to the unity-gain setting. Returns the ensemble output state
/// and a report with signal-normalized variances.
pub fn simulate_teleporter(
    resource: &GaussianState,
    signal: &GaussianState,
    parametric_gain: f64,
    feedforward: Option<FeedforwardGains>,
) -> Result<(GaussianState, TeleportReport)> {
    if resource.mode_count() != 2 {
        return Err(Error::ResourceModeCount(resource.mode_count()));
    }
    if signal.mode_count() != 1 {
        return Err(Error::SignalModeCount(signal.mode_count()));
    }
    check_gain(parametric_gain)?;
    let det = resource.purity_determinant();
    if (det - 1.0).abs() > RESOURCE_PURITY_GATE {
        return Err(Error::ImpureState(det));
    }
    let ff = feedforward.unwrap_or_else(FeedforwardGains::unity);

    // Joint layout: mode 0 = signal, 1 = resource A (Alice), 2 = resource B
    // (Bob). OPAs on the resource, then Alice's 50/50 mix of S with A.
    let joint = signal
        .tensor(resource)
        .squeeze(1, parametric_gain)?
        .squeeze(2, parametric_gain)?
        .beamsplitter(0, 1, 0.5)?;

    // Ensemble output after homodyne + feedforward:
    //   X_out+ = X_B+ + ff.plus  * X+ of the sum port (mode 0)
    //   X_out- = X_B- + ff.minus * X- of the difference port (mode 1)
    let mut map = nalgebra::DMatrix::zeros(2, 6);
    map[(0, 4)] = 1.0;
    map[(0, 0)] = ff.plus;
    map[(1, 5)] = 1.0;
    map[(1, 3)] = ff.minus;
    let out_mean = &map * joint.mean();
    let out_cov = &map * joint.cov() * map.transpose();
    let output = GaussianState::from_parts(1, out_mean, out_cov)?;

    let v_out_plus =
        output.variance(0, Quadrature::Plus)? / signal.variance(0, Quadrature::Plus)?;
    let v_out_minus =
        output.variance(0, Quadrature::Minus)? / signal.variance(0, Quadrature::Minus)?;
    let report = TeleportReport::from_output_variances(
        v_out_plus,
        v_out_minus,
        parametric_gain,
        ff.is_unity(),
    )?;
    Ok((output, report))
}

/// Fidelity between a pure one-mode Gaussian `signal` and an arbitrary
/// one-mode Gaussian `output`:
///
/// ```text
/// F = 2 / sqrt(det(S_sig + S_out)) * exp(-1/2 dm^T (S_sig + S_out)^-1 dm)
/// ```
///
/// Used to cross-check the simulated teleporter against the report's
/// variance-formula fidelity.
pub fn overlap_fidelity(signal: &GaussianState, output: &GaussianState) -> Result<f64> {
    if signal.mode_count() != 1 {
        return Err(Error::SignalModeCount(signal.mode_count()));
    }
    if output.mode_count() != 1 {
        return Err(Error::SignalModeCount(output.mode_count()));
    }
    let sum = signal.cov() + output.cov();
    let det = sum[(0, 0)] * sum[(1, 1)] - sum[(0, 1)] * sum[(1, 0)];
    if det <= 0.0 {
        return Err(Error::NotPositiveSemiDefinite(det));
    }
    let dm = output.mean() - signal.mean();
    // 2x2 inverse applied to dm.
    let quad = (sum[(1, 1)] * dm[0] * dm[0] - 2.0 * sum[(0, 1)] * dm[0] * dm[1]
        + sum[(0, 0)] * dm[1] * dm[1])
        / det;
    Ok(2.0 / det.sqrt() * (-0.5 * quad).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::EQ_TOL;
    use crate::protocols::{make_epr_pair, symmetrizing_gain, EprRecipe};

    #[test]
    fn fidelity_from_output_values() {
        assert!((fidelity_from_output(1.0, 1.0).unwrap() - 1.0).abs() < EQ_TOL);
        assert!((fidelity_from_output(3.0, 3.0).unwrap() - 0.5).abs() < EQ_TOL);
        assert!((fidelity_from_output(1.0, 9.0).unwrap() - 2.0 / 20.0f64.sqrt()).abs() < EQ_TOL);
        assert!(matches!(
            fidelity_from_output(0.0, 1.0),
            Err(Error::InvalidVariance(_))
        ));
    }

    #[test]
    fn coherent_fidelity_reference_points() {
        // Perfect single-beam entanglement caps at 1/sqrt(2).
        let r = coherent_fidelity(1.0, 0.0, 1.0).unwrap();
        assert!((r.fidelity - std::f64::consts::FRAC_1_SQRT_2).abs() < EQ_TOL);
        // No entanglement: the classical limit.
        let r = coherent_fidelity(1.0, 1.0, 1.0).unwrap();
        assert!((r.fidelity - 0.5).abs() < EQ_TOL);
        assert!(!r.beats_classical);
        // Perfect unbiased entanglement.
        let r = coherent_fidelity(0.0, 0.0, 1.0).unwrap();
        assert!((r.fidelity - 1.0).abs() < EQ_TOL);
        assert!(matches!(
            coherent_fidelity(1.0, 1.0, 0.0),
            Err(Error::InvalidGain(_))
        ));
    }

    #[test]
    fn coherent_fidelity_two_displayed_forms_agree() {
        for (v1, v2, g) in [(0.5, 0.5, 1.0), (0.25, 1.0, 2.0), (0.1, 0.7, 0.4)] {
            let r = coherent_fidelity(v1, v2, g).unwrap();
            let direct = 1.0 / (v1 * v2 + g * v1 + v2 / g + 1.0).sqrt();
            assert!((r.fidelity - direct).abs() < EQ_TOL);
            assert!((r.v_out_plus - (2.0 * g * v1 + 1.0)).abs() < EQ_TOL);
            assert!((r.v_out_minus - (2.0 / g * v2 + 1.0)).abs() < EQ_TOL);
        }
    }

    #[test]
    fn max_coherent_fidelity_values_and_optimality() {
        let (g, f) = max_coherent_fidelity(0.5, 0.5).unwrap();
        assert_eq!(g, Some(1.0));
        assert!((f - 2.0 / 3.0).abs() < EQ_TOL);

        let (g, f) = max_coherent_fidelity(1.0, 1.0).unwrap();
        assert_eq!(g, Some(1.0));
        assert!((f - 0.5).abs() < EQ_TOL);

        let (g, f) = max_coherent_fidelity(0.0, 0.0).unwrap();
        assert_eq!(g, None);
        assert!((f - 1.0).abs() < EQ_TOL);
        let (g, f) = max_coherent_fidelity(0.0, 0.5).unwrap();
        assert_eq!(g, None);
        assert!((f - 1.0).abs() < EQ_TOL);

        // The optimum dominates a gain sweep.
        let (g_opt, f_max) = max_coherent_fidelity(0.25, 0.7).unwrap();
        let f_at_opt = coherent_fidelity(0.25, 0.7, g_opt.unwrap())
            .unwrap()
            .fidelity;
        assert!((f_at_opt - f_max).abs() < EQ_TOL);
        for i in 1..50 {
            let g = 0.05 * i as f64;
            let f = coherent_fidelity(0.25, 0.7, g).unwrap().fidelity;
            assert!(f <= f_max + EQ_TOL);
        }
    }

    #[test]
    fn symmetrized_and_raw_resources_reach_the_same_maximum() {
        // A single squeezed beam s = 0.25 and its two-squeezer equivalent
        // (sqrt(s), sqrt(s)) share F_max = 1/(sqrt(s) + 1).
        let s: f64 = 0.25;
        let (_, f_raw) = max_coherent_fidelity(s, 1.0).unwrap();
        let (_, f_sym) = max_coherent_fidelity(s.sqrt(), s.sqrt()).unwrap();
        assert!((f_raw - f_sym).abs() < EQ_TOL);
        assert!((f_raw - 1.0 / (s.sqrt() + 1.0)).abs() < EQ_TOL);
    }

    #[test]
    fn squeezed_signal_reference_points() {
        // Unentangled resource, G = 1, V_sqz = 0.1.
        let r = squeezed_signal_fidelity(1.0, 1.0, 1.0, 0.1).unwrap();
        assert!((r.fidelity - 1.0 / 12.1f64.sqrt()).abs() < EQ_TOL);
        assert!(!r.beats_classical);

        // Unbiased resource at optimal gain G = V_sqz: F = 1/(v + 1).
        for v in [1.0, 0.5, 0.2] {
            let g = optimal_squeezed_signal_gain(v, v, 0.1).unwrap();
            assert!((g - 0.1).abs() < EQ_TOL);
            let r = squeezed_signal_fidelity(v, v, g, 0.1).unwrap();
            assert!((r.fidelity - 1.0 / (v + 1.0)).abs() < EQ_TOL);
        }

        // V_sqz = 1 is the coherent case.
        for (v1, v2, g) in [(0.5, 0.5, 1.0), (0.25, 1.0, 2.0)] {
            let a = squeezed_signal_fidelity(v1, v2, g, 1.0).unwrap();
            let b = coherent_fidelity(v1, v2, g).unwrap();
            assert!((a.fidelity - b.fidelity).abs() < EQ_TOL);
        }

        assert!(matches!(
            squeezed_signal_fidelity(1.0, 1.0, 1.0, 0.0),
            Err(Error::InvalidVariance(_))
        ));
    }

    #[test]
    fn weak_unbiased_entanglement_fails_on_squeezed_signals() {
        for v in [1.0, 0.95, 0.9] {
            let r = squeezed_signal_fidelity(v, v, 1.0, 0.1).unwrap();
            assert!(r.fidelity < 0.5, "v={v} gave {}", r.fidelity);
        }
    }

    #[test]
    fn simulated_classical_teleporter() {
        let resource = make_epr_pair(&EprRecipe::pure(1.0, 1.0).unwrap()).unwrap();
        let signal = GaussianState::vacuum(1).unwrap();
        let (_, report) = simulate_teleporter(&resource, &signal, 1.0, None).unwrap();
        assert!((report.fidelity - 0.5).abs() < 1e-10);
        let closed = coherent_fidelity(1.0, 1.0, 1.0).unwrap();
        assert!((report.fidelity - closed.fidelity).abs() < 1e-10);
    }

    #[test]
    fn simulated_teleporter_transfers_the_mean_and_hits_f_max() {
        let recipe = EprRecipe::single_squeezed(0.25).unwrap();
        let resource = make_epr_pair(&recipe).unwrap();
        let gain = symmetrizing_gain(recipe.v1_minus, recipe.v2_plus).unwrap();
        let signal = GaussianState::vacuum(1)
            .unwrap()
            .displace(0, Quadrature::Plus, 3.0)
            .unwrap()
            .displace(0, Quadrature::Minus, -2.0)
            .unwrap();
        let (output, report) = simulate_teleporter(&resource, &signal, gain, None).unwrap();
        assert!((output.mean_of(0, Quadrature::Plus).unwrap() - 3.0).abs() < 1e-10);
        assert!((output.mean_of(0, Quadrature::Minus).unwrap() + 2.0).abs() < 1e-10);
        let (_, f_max) = max_coherent_fidelity(0.25, 1.0).unwrap();
        assert!((report.fidelity - f_max).abs() < 1e-10);
        // Overlap of the actual Wigner functions agrees with the report.
        let overlap = overlap_fidelity(&signal, &output).unwrap();
        assert!((overlap - report.fidelity).abs() < 1e-10);
    }

    #[test]
    fn simulated_squeezed_signal_matches_the_closed_form() {
        let resource = make_epr_pair(&EprRecipe::two_squeezed(0.5).unwrap()).unwrap();
        let signal = GaussianState::vacuum(1).unwrap().squeeze(0, 0.1).unwrap();
        let (output, report) = simulate_teleporter(&resource, &signal, 0.1, None).unwrap();
        assert!((report.fidelity - 1.0 / 1.5).abs() < 1e-10);
        let closed = squeezed_signal_fidelity(0.5, 0.5, 0.1, 0.1).unwrap();
        assert!((report.fidelity - closed.fidelity).abs() < 1e-10);
        assert!((report.v_out_plus - closed.v_out_plus).abs() < 1e-10);
        assert!((report.v_out_minus - closed.v_out_minus).abs() < 1e-10);
        let overlap = overlap_fidelity(&signal, &output).unwrap();
        assert!((overlap - report.fidelity).abs() < 1e-10);
    }

    #[test]
    fn effective_variances_invert_the_recipe() {
        for recipe in [
            EprRecipe::single_squeezed(0.25).unwrap(),
            EprRecipe::two_squeezed(0.5).unwrap(),
            EprRecipe::pure(0.7, 0.3).unwrap(),
        ] {
            let pair = make_epr_pair(&recipe).unwrap();
            let (v1p, v2m) = effective_input_variances(&pair).unwrap();
            assert!((v1p - recipe.v1_plus).abs() < EQ_TOL);
            assert!((v2m - recipe.v2_minus).abs() < EQ_TOL);
        }
    }

    #[test]
    fn simulate_rejects_bad_shapes() {
        let resource = make_epr_pair(&EprRecipe::pure(1.0, 1.0).unwrap()).unwrap();
        let signal = GaussianState::vacuum(1).unwrap();
        let three = GaussianState::vacuum(3).unwrap();
        assert!(matches!(
            simulate_teleporter(&three, &signal, 1.0, None),
            Err(Error::ResourceModeCount(3))
        ));
        let two_signal = GaussianState::vacuum(2).unwrap();
        assert!(matches!(
            simulate_teleporter(&resource, &two_signal, 1.0, None),
            Err(Error::SignalModeCount(2))
        ));
        assert!(matches!(
            simulate_teleporter(&resource, &signal, -1.0, None),
            Err(Error::InvalidGain(_))
        ));
    }

    #[test]
    fn non_unity_feedforward_is_flagged() {
        let resource = make_epr_pair(&EprRecipe::pure(1.0, 1.0).unwrap()).unwrap();
        let signal = GaussianState::vacuum(1).unwrap();
        let custom = FeedforwardGains {
            plus: 1.0,
            minus: 1.0,
        };
        let (_, report) = simulate_teleporter(&resource, &signal, 1.0, Some(custom)).unwrap();
        assert!(!report.feedforward_unity);
    }
}
