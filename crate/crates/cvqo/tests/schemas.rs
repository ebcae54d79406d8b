//! Pins the JSON field names of the externally consumed report and state
//! types; downstream tooling parses these keys verbatim.

use std::collections::BTreeSet;

use cvqo::gaussian::GaussianState;
use cvqo::metrics::{epr_product, ghz_product};
use cvqo::protocols::{make_epr_pair, make_ghz_triple, EprRecipe, GhzRecipe};
use cvqo::teleport::coherent_fidelity;

fn keys(value: &serde_json::Value) -> BTreeSet<String> {
    value
        .as_object()
        .expect("object")
        .keys()
        .cloned()
        .collect()
}

fn expect_keys(value: &serde_json::Value, expected: &[&str]) {
    let expected: BTreeSet<String> = expected.iter().map(|s| s.to_string()).collect();
    assert_eq!(keys(value), expected);
}

#[test]
fn epr_report_field_names() {
    let pair = make_epr_pair(&EprRecipe::single_squeezed(0.5).unwrap()).unwrap();
    let report = epr_product(&pair, 0, 1).unwrap();
    let value = serde_json::to_value(&report).unwrap();
    expect_keys(
        &value,
        &[
            "vcv_plus",
            "vcv_minus",
            "product",
            "entangled",
            "n_epr_a",
            "n_epr_b",
            "n_maximal",
            "lambda",
        ],
    );
}

#[test]
fn ghz_report_field_names() {
    let triple = make_ghz_triple(&GhzRecipe::single_squeezed(0.5).unwrap()).unwrap();
    let report = ghz_product(&triple, 0, 1, 2).unwrap();
    let value = serde_json::to_value(&report).unwrap();
    expect_keys(
        &value,
        &[
            "target",
            "vcv3_plus",
            "vcv3_minus",
            "product",
            "violation",
            "vcv3_plus_cross_check",
            "vcv3_minus_cross_check",
        ],
    );
}

#[test]
fn teleport_report_field_names() {
    let report = coherent_fidelity(0.5, 0.5, 1.0).unwrap();
    let value = serde_json::to_value(report).unwrap();
    expect_keys(
        &value,
        &[
            "v_out_plus",
            "v_out_minus",
            "fidelity",
            "parametric_gain",
            "feedforward_unity",
            "beats_classical",
        ],
    );
}

#[test]
fn gaussian_state_field_names_and_layout() {
    let state = GaussianState::vacuum(2).unwrap().squeeze(0, 0.5).unwrap();
    let value = serde_json::to_value(&state).unwrap();
    expect_keys(&value, &["mode_count", "mean", "cov"]);
    assert_eq!(value["mode_count"], serde_json::json!(2));
    assert_eq!(value["mean"].as_array().unwrap().len(), 4);
    let cov = value["cov"].as_array().unwrap();
    assert_eq!(cov.len(), 16);
    // Row-major: entry (0,0) is V1+, entry (1,1) sits at index 5.
    assert!((cov[0].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((cov[5].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn recipe_field_names() {
    let epr = serde_json::to_value(EprRecipe::single_squeezed(0.5).unwrap()).unwrap();
    expect_keys(&epr, &["v1_plus", "v1_minus", "v2_plus", "v2_minus"]);
    let ghz = serde_json::to_value(GhzRecipe::vacuum()).unwrap();
    expect_keys(
        &ghz,
        &[
            "v1_plus", "v1_minus", "v2_plus", "v2_minus", "v3_plus", "v3_minus",
        ],
    );
}
