//! wasm-bindgen entry points for the browser demo. Every function returns a
//! JSON document; failures come back as `{"error": "..."}`.

use bellbound_core::inequality::{chsh, triangle, PairwiseInequality};
use bellbound_core::noise::{noisy_curve, partitioned_threshold};
use bellbound_core::optimizer::{scan_theta, ThetaFamily};
use bellbound_core::quantum::{chsh_directions, planar_star, UnitVectorConfig};
use bellbound_core::webs::{antiweb_edges, web_edges, WebSpec};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Bouquet value against the cone angle. `k = 0` selects the 12-bouquet,
/// otherwise the `(2k+1)`-bouquet.
#[wasm_bindgen]
pub fn bouquet_curve(k: usize, points: usize) -> String {
    let family = if k == 0 {
        ThetaFamily::Bouquet12
    } else {
        ThetaFamily::Bouquet2k1 { k }
    };
    respond(
        scan_theta(family, points)
            .map(|s| {
                json!({
                    "grid": s.grid,
                    "best_theta": s.best_theta,
                    "best_value": s.best_value,
                    "violation_interval": s.violation_interval,
                })
            })
            .map_err(|e| e.to_string()),
    )
}

fn builtin(name: &str) -> Result<(PairwiseInequality, UnitVectorConfig), String> {
    match name {
        "triangle" => Ok((triangle(), planar_star(3))),
        "chsh" => {
            // singlet directions with the right block negated
            let vecs = chsh_directions()
                .vectors()
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    if k < 2 {
                        v.clone()
                    } else {
                        v.iter().map(|c| -c).collect()
                    }
                })
                .collect();
            let cfg = UnitVectorConfig::new(3, vecs).map_err(|e| e.to_string())?;
            Ok((chsh(), cfg))
        }
        other => Err(format!("unknown inequality '{other}'")),
    }
}

/// Noisy value `V(eta)` for `triangle` or `chsh`, with its threshold.
#[wasm_bindgen]
pub fn werner_curve(name: &str, points: usize) -> String {
    respond((|| {
        let (b, cfg) = builtin(name)?;
        let threshold = partitioned_threshold(&b, &cfg).map_err(|e| e.to_string())?;
        let etas: Vec<f64> = (1..=points.max(1))
            .map(|i| i as f64 / points.max(1) as f64)
            .collect();
        let curve = noisy_curve(&b, &cfg, &etas).map_err(|e| e.to_string())?;
        Ok(json!({
            "curve": curve,
            "eta_threshold": threshold.eta_threshold,
            "quantum_sum": threshold.quantum_value,
            "noise": threshold.noise,
        }))
    })())
}

/// Web and antiweb edges of `W_p^r`.
#[wasm_bindgen]
pub fn web_graph(p: usize, r: usize) -> String {
    respond(
        WebSpec::from_pr(p, r)
            .map(|spec| {
                json!({
                    "p": p,
                    "q": spec.q(),
                    "r": r,
                    "web": web_edges(&spec).iter().collect::<Vec<_>>(),
                    "antiweb": antiweb_edges(&spec).iter().collect::<Vec<_>>(),
                })
            })
            .map_err(|e| e.to_string()),
    )
}
