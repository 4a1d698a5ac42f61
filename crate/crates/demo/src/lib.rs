//! Browser bindings for the trace-code toolkit. The `*_json` functions are
//! plain Rust so they can be tested natively; the exported wrappers only
//! convert errors.

use serde_json::json;
use tracecode::report::{self, Report, RunConfig};
use tracecode::{FieldElement, RingElement, TraceCode};
use wasm_bindgen::prelude::*;

/// Largest Gray length the profile view will lay out symbol by symbol.
pub const MAX_PROFILE_LENGTH: usize = 1 << 16;

fn config(p: u32, m: usize) -> RunConfig {
    RunConfig {
        workers: 1,
        timing: false,
        ..RunConfig::new(p, m)
    }
}

pub fn spectrum_json(p: u32, m: usize) -> Result<String, String> {
    let r = report::spectrum(&config(p, m)).map_err(|e| e.to_string())?;
    Ok(r.to_json().to_string())
}

pub fn gauss_json(p: u32, m: usize) -> Result<String, String> {
    let r = report::gauss(&config(p, m)).map_err(|e| e.to_string())?;
    Ok(r.to_json().to_string())
}

/// Codeword of `a = a0 + a1 u + a2 v + a3 uv`, coefficients given by their
/// field encodings: its class, Lee weight, the character-sum weight, the
/// weight of each Gray block and (for short codes) the Gray word itself.
pub fn codeword_json(p: u32, m: usize, coeffs: [u32; 4]) -> Result<String, String> {
    let code = TraceCode::new(config(p, m).field().map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let f = code.field();
    let parts = coeffs
        .iter()
        .map(|&c| f.element(c))
        .collect::<tracecode::Result<Vec<FieldElement>>>()
        .map_err(|e| e.to_string())?;
    let a = RingElement::new(parts[0], parts[1], parts[2], parts[3]);
    let class = if a.is_zero() {
        "zero"
    } else if a.is_uv_multiple() {
        if f.is_square(a.0[3]) {
            "square multiple of uv"
        } else {
            "non-square multiple of uv"
        }
    } else {
        "generic"
    };
    let gray = code.gray_word(&a).map_err(|e| e.to_string())?;
    let n = code.ring_length();
    let blocks: Vec<usize> = gray
        .0
        .chunks(n)
        .map(|b| b.iter().filter(|&&s| s != 0).count())
        .collect();
    let word = (gray.0.len() <= MAX_PROFILE_LENGTH).then(|| {
        gray.0
            .iter()
            .map(|&s| char::from_digit(s, 36).unwrap_or('?'))
            .collect::<String>()
    });
    Ok(json!({
        "p": p,
        "m": m,
        "element": a.to_string(),
        "class": class,
        "N": gray.0.len(),
        "lee_weight": code.lee_weight_of(&a),
        "character_sum_weight": code.weight_via_character_sum(&a).map_err(|e| e.to_string())?,
        "block_weights": blocks,
        "gray_word": word,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn spectrum(p: u32, m: usize) -> Result<String, JsError> {
    spectrum_json(p, m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn gauss(p: u32, m: usize) -> Result<String, JsError> {
    gauss_json(p, m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn codeword(p: u32, m: usize, a0: u32, a1: u32, a2: u32, a3: u32) -> Result<String, JsError> {
    codeword_json(p, m, [a0, a1, a2, a3]).map_err(|e| JsError::new(&e))
}
