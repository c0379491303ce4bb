//! Browser bindings for the ferrimagnetic negativity tools.
//!
//! Each operation is a plain Rust function returning `Result<_, String>` so it
//! can be tested natively; the `#[wasm_bindgen]` wrappers only convert errors.

use ferri_core::closed_form::threshold_temperature;
use ferri_core::entanglement::negativity_numeric;
use ferri_core::sweep::{solve_threshold_with, PairThermalModel, ThresholdQuery};
use ferri_core::{ChainSpec, DimCap, TwiceSpin};
use wasm_bindgen::prelude::*;

/// Hilbert-space limit for the page; larger rings stall the browser tab.
pub const BROWSER_DIM_CAP: DimCap = DimCap(4096);

fn model(twice_s: u32, cells: usize) -> Result<PairThermalModel, String> {
    let spin = TwiceSpin::new(twice_s).map_err(|e| e.to_string())?;
    let spec = ChainSpec::ring_or_pair(cells, spin).map_err(|e| e.to_string())?;
    PairThermalModel::new(&spec, BROWSER_DIM_CAP).map_err(|e| e.to_string())
}

/// Interleaved `[T0, N0, c0, T1, N1, c1, ...]` over an evenly spaced grid,
/// where `N` is the pair negativity and `c` the nearest-neighbour correlator.
pub fn negativity_curve(twice_s: u32, cells: usize, t_min: f64, t_max: f64, steps: usize) -> Result<Vec<f64>, String> {
    if !(t_min > 0.0 && t_max >= t_min && t_max.is_finite()) || steps < 2 {
        return Err("need 0 < t_min <= t_max and at least two steps".into());
    }
    let m = model(twice_s, cells)?;
    let mut out = Vec::with_capacity(3 * steps);
    for k in 0..steps {
        let t = t_min + (t_max - t_min) * k as f64 / (steps - 1) as f64;
        let p = m.evaluate(&m.ensemble(t).map_err(|e| e.to_string())?);
        out.extend([t, p.negativity, p.correlator]);
    }
    Ok(out)
}

/// Interleaved `[2s, T_th]` rows for `2s = 1..=max_twice_s`. With one cell the
/// closed form is used; rings are solved numerically.
pub fn threshold_table(max_twice_s: u32, cells: usize) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for twice_s in 1..=max_twice_s {
        let spin = TwiceSpin::new(twice_s).map_err(|e| e.to_string())?;
        let t = if cells == 1 {
            threshold_temperature(spin)
        } else {
            let m = model(twice_s, cells)?;
            let q = ThresholdQuery::new(spin, cells);
            solve_threshold_with(&m, &q).map_err(|e| e.to_string())?.temperature
        };
        out.extend([twice_s as f64, t]);
    }
    Ok(out)
}

/// Ascending partial-transpose spectrum of the thermal `(0, 1)` pair state.
pub fn pair_spectrum(twice_s: u32, cells: usize, temperature: f64) -> Result<Vec<f64>, String> {
    let m = model(twice_s, cells)?;
    let ens = m.ensemble(temperature).map_err(|e| e.to_string())?;
    Ok(negativity_numeric(&m.pair_state(&ens)).spectrum)
}

#[wasm_bindgen(js_name = negativityCurve)]
pub fn negativity_curve_js(twice_s: u32, cells: usize, t_min: f64, t_max: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    negativity_curve(twice_s, cells, t_min, t_max, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = thresholdTable)]
pub fn threshold_table_js(max_twice_s: u32, cells: usize) -> Result<Vec<f64>, JsError> {
    threshold_table(max_twice_s, cells).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = pairSpectrum)]
pub fn pair_spectrum_js(twice_s: u32, cells: usize, temperature: f64) -> Result<Vec<f64>, JsError> {
    pair_spectrum(twice_s, cells, temperature).map_err(|e| JsError::new(&e))
}
