//! Figure datasets: entanglement strength and teleportation fidelity swept
//! against squeezing, computed through the covariance pipeline.

use serde::Serialize;

use cvqo::metrics::epr_product;
use cvqo::protocols::{make_epr_pair, EprRecipe};
use cvqo::teleport::{coherent_fidelity, max_coherent_fidelity, squeezed_signal_fidelity};

use crate::format::{csv_line, sig6};

/// An inclusive sweep `lo..hi` with `steps` points, parsed from `lo:hi:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self, String> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(format!("range needs finite lo < hi (got {lo}:{hi})"));
        }
        if steps < 2 {
            return Err(format!("range needs at least 2 steps (got {steps})"));
        }
        Ok(SweepRange { lo, hi, steps })
    }

    /// Parse `lo:hi:n`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:n, got `{text}`"));
        }
        let lo: f64 = parts[0].parse().map_err(|e| format!("bad lo: {e}"))?;
        let hi: f64 = parts[1].parse().map_err(|e| format!("bad hi: {e}"))?;
        let steps: usize = parts[2]
            .parse()
            .map_err(|e| format!("bad step count: {e}"))?;
        Self::new(lo, hi, steps)
    }

    /// The sweep domain must sit inside `(0, 1]` for squeezed variances.
    pub fn require_unit_interval(&self) -> Result<(), String> {
        if self.lo <= 0.0 || self.hi > 1.0 {
            return Err(format!(
                "squeezed variance must lie in (0, 1] (got {}:{})",
                self.lo, self.hi
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.lo + step * i as f64).collect()
    }
}

fn db_of(s: f64) -> f64 {
    -10.0 * s.log10()
}

/// Row of the entanglement-vs-squeezing dataset.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Fig1Row {
    pub s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_db: Option<f64>,
    pub product_two_beams: f64,
    pub product_one_beam: f64,
}

/// Conditional-variance product against squeezed variance `s`, for a pair
/// from two orthogonally squeezed beams and a pair from one squeezed beam.
pub fn fig1_rows(range: &SweepRange, with_db: bool) -> cvqo::Result<Vec<Fig1Row>> {
    range
        .values()
        .into_iter()
        .map(|s| {
            let two = make_epr_pair(&EprRecipe::two_squeezed(s)?)?;
            let one = make_epr_pair(&EprRecipe::single_squeezed(s)?)?;
            Ok(Fig1Row {
                s,
                s_db: with_db.then(|| db_of(s)),
                product_two_beams: epr_product(&two, 0, 1)?.product,
                product_one_beam: epr_product(&one, 0, 1)?.product,
            })
        })
        .collect()
}

/// Row of the coherent-signal fidelity dataset.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Fig3Row {
    pub s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_db: Option<f64>,
    pub f_no_opa: f64,
    pub f_opa: f64,
}

/// Coherent-signal fidelity from a single squeezed beam of variance `s`,
/// at `G = 1` and at the optimal gain.
pub fn fig3_rows(range: &SweepRange, with_db: bool) -> cvqo::Result<Vec<Fig3Row>> {
    range
        .values()
        .into_iter()
        .map(|s| {
            Ok(Fig3Row {
                s,
                s_db: with_db.then(|| db_of(s)),
                f_no_opa: coherent_fidelity(s, 1.0, 1.0)?.fidelity,
                f_opa: max_coherent_fidelity(s, 1.0)?.1,
            })
        })
        .collect()
}

/// Row of the squeezed-signal fidelity dataset.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Fig4Row {
    pub v: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_db: Option<f64>,
    pub f_no_opa: f64,
    pub f_opa: f64,
}

/// Squeezed-signal fidelity (`V_sqz` fixed) with an unbiased resource of
/// squeezed variance `v`, at `G = 1` and at the optimal `G = V_sqz`.
pub fn fig4_rows(range: &SweepRange, v_sqz: f64, with_db: bool) -> cvqo::Result<Vec<Fig4Row>> {
    range
        .values()
        .into_iter()
        .map(|v| {
            Ok(Fig4Row {
                v,
                v_db: with_db.then(|| db_of(v)),
                f_no_opa: squeezed_signal_fidelity(v, v, 1.0, v_sqz)?.fidelity,
                f_opa: squeezed_signal_fidelity(v, v, v_sqz, v_sqz)?.fidelity,
            })
        })
        .collect()
}

fn csv_of<R, F>(header: &[&str], rows: &[R], fields: F) -> String
where
    F: Fn(&R) -> Vec<f64>,
{
    let mut out = csv_line(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in rows {
        out.push_str(&csv_line(
            &fields(row).into_iter().map(sig6).collect::<Vec<_>>(),
        ));
    }
    out
}

pub fn fig1_csv(rows: &[Fig1Row]) -> String {
    if rows.first().is_some_and(|r| r.s_db.is_some()) {
        csv_of(
            &["s", "s_db", "product_two_beams", "product_one_beam"],
            rows,
            |r| {
                vec![
                    r.s,
                    r.s_db.unwrap(),
                    r.product_two_beams,
                    r.product_one_beam,
                ]
            },
        )
    } else {
        csv_of(&["s", "product_two_beams", "product_one_beam"], rows, |r| {
            vec![r.s, r.product_two_beams, r.product_one_beam]
        })
    }
}

pub fn fig3_csv(rows: &[Fig3Row]) -> String {
    if rows.first().is_some_and(|r| r.s_db.is_some()) {
        csv_of(&["s", "s_db", "f_no_opa", "f_opa"], rows, |r| {
            vec![r.s, r.s_db.unwrap(), r.f_no_opa, r.f_opa]
        })
    } else {
        csv_of(&["s", "f_no_opa", "f_opa"], rows, |r| {
            vec![r.s, r.f_no_opa, r.f_opa]
        })
    }
}

pub fn fig4_csv(rows: &[Fig4Row]) -> String {
    if rows.first().is_some_and(|r| r.v_db.is_some()) {
        csv_of(&["v", "v_db", "f_no_opa", "f_opa"], rows, |r| {
            vec![r.v, r.v_db.unwrap(), r.f_no_opa, r.f_opa]
        })
    } else {
        csv_of(&["v", "f_no_opa", "f_opa"], rows, |r| {
            vec![r.v, r.f_no_opa, r.f_opa]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing_and_validation() {
        let r = SweepRange::parse("0.1:1.0:10").unwrap();
        assert_eq!(
            r,
            SweepRange {
                lo: 0.1,
                hi: 1.0,
                steps: 10
            }
        );
        assert_eq!(r.values().len(), 10);
        assert!((r.values()[9] - 1.0).abs() < 1e-12);
        assert!(SweepRange::parse("1.0:0.1:10").is_err());
        assert!(SweepRange::parse("0.1:1.0:1").is_err());
        assert!(SweepRange::parse("0.1:1.0").is_err());
        assert!(SweepRange::parse("a:b:c").is_err());
        assert!(SweepRange::parse("0.0:1.0:5")
            .unwrap()
            .require_unit_interval()
            .is_err());
        assert!(SweepRange::parse("0.1:1.5:5")
            .unwrap()
            .require_unit_interval()
            .is_err());
    }

    #[test]
    fn fig1_anchor_values() {
        let range = SweepRange::new(0.5, 1.0, 2).unwrap();
        let rows = fig1_rows(&range, false).unwrap();
        assert!((rows[0].product_two_beams - 0.64).abs() < 1e-9);
        assert!((rows[0].product_one_beam - 8.0 / 9.0).abs() < 1e-9);
        assert!((rows[1].product_two_beams - 1.0).abs() < 1e-9);
        assert!((rows[1].product_one_beam - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fig3_anchor_values() {
        let range = SweepRange::new(0.5, 1.0, 2).unwrap();
        let rows = fig3_rows(&range, false).unwrap();
        assert!((rows[0].f_no_opa - 1.0 / 3.0f64.sqrt()).abs() < 1e-9);
        assert!((rows[0].f_opa - 1.0 / (0.5f64.sqrt() + 1.0)).abs() < 1e-9);
        assert!((rows[1].f_no_opa - 0.5).abs() < 1e-9);
        assert!((rows[1].f_opa - 0.5).abs() < 1e-9);
    }

    #[test]
    fn fig3_rows_match_the_simulated_teleporter() {
        use cvqo::protocols::{make_epr_pair, symmetrizing_gain};
        use cvqo::teleport::simulate_teleporter;

        let range = SweepRange::new(0.2, 0.8, 4).unwrap();
        let rows = fig3_rows(&range, false).unwrap();
        for row in rows {
            let recipe = EprRecipe::single_squeezed(row.s).unwrap();
            let resource = make_epr_pair(&recipe).unwrap();
            let signal = cvqo::GaussianState::vacuum(1).unwrap();
            let (_, plain) = simulate_teleporter(&resource, &signal, 1.0, None).unwrap();
            assert!((plain.fidelity - row.f_no_opa).abs() < 1e-10);
            let gain = symmetrizing_gain(recipe.v1_minus, recipe.v2_plus).unwrap();
            let (_, tuned) = simulate_teleporter(&resource, &signal, gain, None).unwrap();
            assert!((tuned.fidelity - row.f_opa).abs() < 1e-10);
        }
    }

    #[test]
    fn fig4_anchor_values() {
        let range = SweepRange::new(0.5, 1.0, 2).unwrap();
        let rows = fig4_rows(&range, 0.1, false).unwrap();
        assert!((rows[1].f_no_opa - 1.0 / 12.1f64.sqrt()).abs() < 1e-9);
        assert!((rows[1].f_opa - 0.5).abs() < 1e-9);
        assert!((rows[0].f_opa - 1.0 / 1.5).abs() < 1e-9);
        assert!(rows[1].f_no_opa < 0.5);
    }

    #[test]
    fn csv_has_header_and_db_column_on_request() {
        let range = SweepRange::new(0.25, 1.0, 4).unwrap();
        let plain = fig1_csv(&fig1_rows(&range, false).unwrap());
        assert!(plain.starts_with("s,product_two_beams,product_one_beam\n"));
        assert_eq!(plain.lines().count(), 5);
        let with_db = fig1_csv(&fig1_rows(&range, true).unwrap());
        assert!(with_db.starts_with("s,s_db,product_two_beams,product_one_beam\n"));
        assert!(with_db.contains("6.02060")); // -10 log10(0.25)
    }
}
