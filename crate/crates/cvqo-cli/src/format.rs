//! Fixed output formatting so that CSV and JSON emissions are byte-stable
//! run to run.

/// Format with six significant digits: plain decimal inside
/// `[1e-4, 1e6)`, exponential outside. `printf`'s `%.6g` without the
/// trailing-zero stripping.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// One CSV line from already-formatted fields.
pub fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}
