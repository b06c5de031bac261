//! Browser bindings: beam patterns, a coverage curve and the lattice
//! interference series. Arrays are returned flat for cheap transfer.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use hexbeam::engine::{coverage_curve, default_thresholds, Downtilt, Mode, NetworkConfig, Scenario};
use hexbeam::interference::isr_series_approx;
use hexbeam::special::SeriesConfig;
use hexbeam::PatternParams;
use wasm_bindgen::prelude::*;

/// Largest trial count accepted from the page.
pub const MAX_TRIALS: u32 = 50_000;

fn parse_mode(mode: &str) -> Result<Mode, String> {
    match mode {
        "3d" => Ok(Mode::Beamforming3d),
        "2d" => Ok(Mode::Beamforming2d),
        "sector" => Ok(Mode::SectorNoBf),
        other => Err(format!("unknown mode {other:?}")),
    }
}

/// `[angle_deg, H, V]` triples from -90 to 90 degrees.
pub fn pattern_rows(theta_h_deg: f64, theta_v_deg: f64, step_deg: f64) -> Result<Vec<f64>, String> {
    if !(step_deg > 0.0) {
        return Err("step must be positive".into());
    }
    let p = PatternParams::from_degrees(theta_h_deg, theta_v_deg).map_err(|e| e.to_string())?;
    let n = (180.0 / step_deg).floor() as usize;
    let mut out = Vec::with_capacity(3 * (n + 1));
    for k in 0..=n {
        let deg = -90.0 + step_deg * k as f64;
        out.extend([deg, p.horizontal(deg.to_radians()), p.vertical(deg.to_radians())]);
    }
    Ok(out)
}

/// Coverage on the default threshold grid. A non-finite `tilt_deg`
/// selects variable downtilt.
#[allow(clippy::too_many_arguments)]
pub fn coverage_values(
    mode: &str,
    theta_h_deg: f64,
    theta_v_deg: f64,
    tilt_deg: f64,
    eta: f64,
    trials: u32,
    seed: u32,
) -> Result<Vec<f64>, String> {
    if trials > MAX_TRIALS {
        return Err(format!("at most {MAX_TRIALS} trials"));
    }
    let sc = Scenario {
        mode: parse_mode(mode)?,
        theta_h3db_deg: theta_h_deg,
        theta_v3db_deg: theta_v_deg,
        downtilt: if tilt_deg.is_finite() { Downtilt::Fixed(tilt_deg) } else { Downtilt::Variable },
        eta,
        n_trials: trials as u64,
        seed: seed as u64,
        ..Default::default()
    };
    let c = coverage_curve(&NetworkConfig::default(), &sc, &default_thresholds()).map_err(|e| e.to_string())?;
    Ok(c.coverage)
}

/// `[x, value]` pairs of the lattice series for `x` in `(0, x_max]`.
pub fn series_rows(two_b: f64, x_max: f64, points: u32) -> Result<Vec<f64>, String> {
    if !(x_max > 0.0 && x_max < 1.0) || points == 0 {
        return Err("need 0 < x_max < 1 and at least one point".into());
    }
    let cfg = SeriesConfig { max_terms: 400, rel_tol: 1e-12 };
    let mut out = Vec::with_capacity(2 * points as usize);
    for k in 1..=points {
        let x = x_max * k as f64 / points as f64;
        let s = isr_series_approx(x, two_b / 2.0, &cfg).map_err(|e| e.to_string())?;
        out.extend([x, s.value]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn thresholds_db() -> Vec<f64> {
    default_thresholds()
}

#[wasm_bindgen]
pub fn pattern_curve(theta_h_deg: f64, theta_v_deg: f64, step_deg: f64) -> Result<Vec<f64>, JsError> {
    pattern_rows(theta_h_deg, theta_v_deg, step_deg).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn coverage_ccdf(
    mode: &str,
    theta_h_deg: f64,
    theta_v_deg: f64,
    tilt_deg: f64,
    eta: f64,
    trials: u32,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    coverage_values(mode, theta_h_deg, theta_v_deg, tilt_deg, eta, trials, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn isr_series_curve(two_b: f64, x_max: f64, points: u32) -> Result<Vec<f64>, JsError> {
    series_rows(two_b, x_max, points).map_err(|e| JsError::new(&e))
}
