//! JSON report assembly: entanglement before/after symmetrization, and
//! teleportation runs with their closed-form counterparts.

use serde::Serialize;

use cvqo::gaussian::{GaussianState, Quadrature};
use cvqo::metrics::{epr_product, ghz_product, EprReport, GhzReport};
use cvqo::protocols::{
    ghz_equalizing_gain, ghz_symmetrizing_gain, make_epr_pair, make_ghz_triple, symmetrize_epr,
    symmetrize_ghz, symmetrizing_gain, EprRecipe, GhzRecipe,
};
use cvqo::teleport::{simulate_teleporter, squeezed_signal_fidelity, TeleportReport};

use crate::figures::SweepRange;
use crate::format::{csv_line, sig6};

/// EPR correlations before and after the local-OPA step.
#[derive(Debug, Serialize)]
pub struct EprReportPair {
    pub recipe: EprRecipe,
    pub gain: f64,
    pub before: EprReport,
    pub after: EprReport,
}

/// Run the pair pipeline; `gain` defaults to `sqrt(V1-/V2+)`.
pub fn epr_report_pair(recipe: &EprRecipe, gain: Option<f64>) -> cvqo::Result<EprReportPair> {
    let gain = match gain {
        Some(g) => g,
        None => symmetrizing_gain(recipe.v1_minus, recipe.v2_plus)?,
    };
    let pair = make_epr_pair(recipe)?;
    let before = epr_product(&pair, 0, 1)?;
    let after = epr_product(&symmetrize_epr(&pair, 0, 1, gain)?, 0, 1)?;
    Ok(EprReportPair {
        recipe: *recipe,
        gain,
        before,
        after,
    })
}

/// A GHZ report plus a balance flag (`|Vcv3+ - Vcv3-| < 1e-9`).
#[derive(Debug, Serialize)]
pub struct GhzStateReport {
    pub balanced: bool,
    #[serde(flatten)]
    pub report: GhzReport,
}

impl GhzStateReport {
    fn from_state(state: &GaussianState) -> cvqo::Result<Self> {
        let report = ghz_product(state, 0, 1, 2)?;
        Ok(GhzStateReport {
            balanced: (report.vcv3_plus - report.vcv3_minus).abs() < 1e-9,
            report,
        })
    }
}

/// Which shared OPA gain the GHZ report applies.
#[derive(Debug, Clone, Copy)]
pub enum GhzGainChoice {
    /// `sqrt(Vcv3-/Vcv3+)` of the built state: balances the conditional
    /// variances for any recipe. Coincides with
    /// `sqrt((V1- + 2)/(V1+ + 2))` on single-squeezer recipes.
    Equalizing,
    /// The published `1/sqrt(3)`-prefactored expression (does not balance).
    PrintedForm,
    Custom(f64),
}

/// GHZ correlations before and after one shared OPA gain on all beams.
/// Both candidate gains are always reported so the discrepancy between
/// them stays visible.
#[derive(Debug, Serialize)]
pub struct GhzReportPair {
    pub recipe: GhzRecipe,
    pub gain_applied: f64,
    pub gain_printed_form: f64,
    pub gain_formula_equalizing: f64,
    pub gain_state_equalizing: f64,
    pub before: GhzStateReport,
    pub after: GhzStateReport,
}

pub fn ghz_report_pair(recipe: &GhzRecipe, choice: GhzGainChoice) -> cvqo::Result<GhzReportPair> {
    let printed = ghz_symmetrizing_gain(recipe.v1_plus, recipe.v1_minus)?;
    let formula_equalizing = ghz_equalizing_gain(recipe.v1_plus, recipe.v1_minus)?;
    let triple = make_ghz_triple(recipe)?;
    let before = GhzStateReport::from_state(&triple)?;
    // The state-derived gain balances any recipe, since both conditional
    // variances scale homogeneously with the shared gain.
    let state_equalizing = (before.report.vcv3_minus / before.report.vcv3_plus).sqrt();
    let gain_applied = match choice {
        GhzGainChoice::Equalizing => state_equalizing,
        GhzGainChoice::PrintedForm => printed,
        GhzGainChoice::Custom(g) => g,
    };
    let after = GhzStateReport::from_state(&symmetrize_ghz(&triple, gain_applied)?)?;
    Ok(GhzReportPair {
        recipe: *recipe,
        gain_applied,
        gain_printed_form: printed,
        gain_formula_equalizing: formula_equalizing,
        gain_state_equalizing: state_equalizing,
        before,
        after,
    })
}

/// One simulated teleportation run next to its closed form.
#[derive(Debug, Serialize)]
pub struct TeleportRun {
    pub v1_plus: f64,
    pub v2_minus: f64,
    pub parametric_gain: f64,
    pub v_sqz: f64,
    pub signal_mean_plus: f64,
    pub signal_mean_minus: f64,
    pub simulated: TeleportReport,
    pub closed_form: TeleportReport,
    pub output_state: GaussianState,
}

#[allow(clippy::too_many_arguments)]
pub fn run_teleport(
    v1_plus: f64,
    v2_minus: f64,
    gain: f64,
    v_sqz: f64,
    mean_plus: f64,
    mean_minus: f64,
) -> cvqo::Result<TeleportRun> {
    let resource = make_epr_pair(&EprRecipe::pure(v1_plus, v2_minus)?)?;
    let signal = GaussianState::vacuum(1)?
        .squeeze(0, v_sqz)?
        .displace(0, Quadrature::Plus, mean_plus)?
        .displace(0, Quadrature::Minus, mean_minus)?;
    let (output_state, simulated) = simulate_teleporter(&resource, &signal, gain, None)?;
    let closed_form = squeezed_signal_fidelity(v1_plus, v2_minus, gain, v_sqz)?;
    Ok(TeleportRun {
        v1_plus,
        v2_minus,
        parametric_gain: gain,
        v_sqz,
        signal_mean_plus: mean_plus,
        signal_mean_minus: mean_minus,
        simulated,
        closed_form,
        output_state,
    })
}

/// CSV sweep of the fidelity over parametric gain, columns
/// `v1_plus, v2_minus, gain, v_sqz, fidelity`.
pub fn teleport_gain_sweep_csv(
    v1_plus: f64,
    v2_minus: f64,
    v_sqz: f64,
    range: &SweepRange,
) -> cvqo::Result<String> {
    let mut out = csv_line(
        &["v1_plus", "v2_minus", "gain", "v_sqz", "fidelity"]
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>(),
    );
    for gain in range.values() {
        let report = squeezed_signal_fidelity(v1_plus, v2_minus, gain, v_sqz)?;
        out.push_str(&csv_line(&[
            sig6(v1_plus),
            sig6(v2_minus),
            sig6(gain),
            sig6(v_sqz),
            sig6(report.fidelity),
        ]));
    }
    Ok(out)
}
