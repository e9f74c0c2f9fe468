//! Browser bindings for the demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain Rust function so the logic is
//! testable without a JavaScript host. Orbits come back as flat
//! `Float64Array`s of rows `t, x1, y1, x2, y2, z`.

use maxwell_bloch::equilibria::{cartan_classify, origin_stability_certificate, CartanType, Stability};
use maxwell_bloch::integrate::{integrate, IntegratorConfig};
use maxwell_bloch::solutions::{homoclinic, Branch, HomoclinicParams};
use maxwell_bloch::State5;
use wasm_bindgen::prelude::*;

/// Values per row in the flattened orbit arrays.
pub const STRIDE: usize = 6;

const MAX_SAMPLES: usize = 200_000;

fn push_row(out: &mut Vec<f64>, t: f64, p: &State5) {
    out.push(t);
    out.extend_from_slice(&p.to_array());
}

pub fn classify_json(c: f64) -> Result<String, String> {
    if !c.is_finite() {
        return Err("c must be finite".into());
    }
    let r = cartan_classify(&State5::new(0.0, 0.0, 0.0, 0.0, c), c).map_err(|e| e.to_string())?;
    let mut stable = r.stable;
    if r.kind == CartanType::Degenerate {
        let cert = origin_stability_certificate(2.0, 11).map_err(|e| e.to_string())?;
        if cert.unique_solution {
            stable = Stability::Stable;
        }
    }
    let value = serde_json::json!({
        "c": c,
        "kind": r.kind.as_str(),
        "alpha": r.alpha,
        "roots": r.roots.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "A": r.a,
        "B": r.b,
        "stable": stable.as_str(),
    });
    Ok(value.to_string())
}

pub fn homoclinic_rows(c: f64, theta0: f64, plus: bool, t_min: f64, t_max: f64, samples: usize) -> Result<Vec<f64>, String> {
    let sign = if plus { Branch::Plus } else { Branch::Minus };
    let params = HomoclinicParams::new(c, theta0, sign).map_err(|e| e.to_string())?;
    if !(t_min.is_finite() && t_max.is_finite() && t_max > t_min) {
        return Err("need finite t_min < t_max".into());
    }
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must lie in 2..={MAX_SAMPLES}"));
    }
    let mut out = Vec::with_capacity(samples * STRIDE);
    for k in 0..samples {
        let t = t_min + (t_max - t_min) * k as f64 / (samples - 1) as f64;
        push_row(&mut out, t, &homoclinic(&params, t));
    }
    Ok(out)
}

pub fn simulate_rows(p0: [f64; 5], t_end: f64, tol: f64) -> Result<Vec<f64>, String> {
    let p0 = State5::from_array(p0);
    if !p0.is_finite() {
        return Err("initial state must be finite".into());
    }
    let cfg = IntegratorConfig::rk45(tol, t_end);
    cfg.validate().map_err(|e| e.to_string())?;
    let traj = match integrate(&p0, &cfg) {
        Ok(t) => t,
        // Show what was computed before the failure.
        Err(fail) => fail.partial,
    };
    let mut out = Vec::with_capacity(traj.len() * STRIDE);
    for (t, p) in traj.times.iter().zip(&traj.states).take(MAX_SAMPLES) {
        push_row(&mut out, *t, p);
    }
    Ok(out)
}

/// JSON classification of the equilibrium `(0, 0, 0, 0, c)`.
#[wasm_bindgen]
pub fn classify(c: f64) -> Result<String, JsError> {
    classify_json(c).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = homoclinicOrbit)]
pub fn homoclinic_orbit(c: f64, theta0: f64, plus: bool, t_min: f64, t_max: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    homoclinic_rows(c, theta0, plus, t_min, t_max, samples).map_err(|e| JsError::new(&e))
}

/// Adaptive integration from `(x1, y1, x2, y2, z)` over `[0, t_end]`.
#[wasm_bindgen]
pub fn simulate(x1: f64, y1: f64, x2: f64, y2: f64, z: f64, t_end: f64, tol: f64) -> Result<Vec<f64>, JsError> {
    simulate_rows([x1, y1, x2, y2, z], t_end, tol).map_err(|e| JsError::new(&e))
}
