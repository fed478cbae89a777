//! Browser bindings for the composite DNA toolkit.
//!
//! Every export returns a JSON string so the page needs no generated type
//! glue beyond the raw functions.

use cdna_core::capacity::{one_redundancy_bound, rll_capacity, PowerOptions};
use cdna_core::combined_codec::CombinedCodec;
use cdna_core::verifier::{self, BalanceMode, Epsilon, GcWindow};
use cdna_core::CompositeAlphabet;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_CURVE_L: usize = 8;
const COMBINED_ALPHABET: &str = "M=AT~N=CG";

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    pub l: usize,
    pub lambda: f64,
    pub capacity_bits: f64,
    pub bound: u64,
}

#[derive(Debug, Serialize)]
pub struct RllReport {
    pub l: usize,
    pub ok: bool,
    pub start: Option<usize>,
    pub window: Option<String>,
    pub base: Option<char>,
}

#[derive(Debug, Serialize)]
pub struct BalanceReport {
    pub eps: String,
    pub mode: String,
    pub min_gc: usize,
    pub max_gc: usize,
    pub lo: i64,
    pub hi: i64,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct Inspection {
    pub word: String,
    pub length: usize,
    pub realizations: String,
    pub longest_run: usize,
    pub rll: RllReport,
    pub balance: BalanceReport,
}

#[derive(Debug, Serialize)]
pub struct Encoding {
    pub alphabet: String,
    pub payload: String,
    pub codeword: String,
    pub n: usize,
    pub payload_len: usize,
    pub body_len: usize,
    pub index_len: usize,
    pub redundancy: usize,
    pub rate: f64,
    pub grid: Vec<usize>,
    pub flip_point: usize,
    pub rll_ok: bool,
    pub balanced: bool,
    pub gc_count: usize,
    pub decoded_ok: bool,
}

fn alphabet(spec: &str) -> Result<CompositeAlphabet, String> {
    CompositeAlphabet::parse(spec.trim()).map_err(|e| e.to_string())
}

fn epsilon(text: &str) -> Result<Epsilon, String> {
    text.trim().parse().map_err(|e: cdna_core::verifier::VerifyError| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn capacity_curve_json(spec: &str, max_l: usize) -> Result<String, String> {
    let alph = alphabet(spec)?;
    if max_l == 0 || max_l > MAX_CURVE_L {
        return Err(format!("max l must be between 1 and {MAX_CURVE_L}"));
    }
    let mut points = Vec::with_capacity(max_l);
    for l in 1..=max_l {
        let r = rll_capacity(l, &alph, PowerOptions::default()).map_err(|e| e.to_string())?;
        let bound = one_redundancy_bound(l, &alph).map_err(|e| e.to_string())?;
        points.push(CurvePoint { l, lambda: r.lambda, capacity_bits: r.capacity_bits, bound });
    }
    to_json(&points)
}

pub fn inspect_word_json(
    spec: &str,
    word: &str,
    l: usize,
    eps: &str,
    strict: bool,
) -> Result<String, String> {
    let alph = alphabet(spec)?;
    let x = alph.parse_word(word.trim()).map_err(|e| e.to_string())?;
    let eps = epsilon(eps)?;
    let mode = if strict { BalanceMode::Strict } else { BalanceMode::Lenient };
    let violation = verifier::rll_violation(&alph, &x, l);
    let bounds = verifier::gc_bounds(&alph, &x);
    let window = GcWindow::new(x.len(), eps, mode);
    let count = verifier::realization_count(&alph, &x);
    let report = Inspection {
        word: alph.format(&x),
        length: x.len(),
        realizations: if count == u128::MAX { "overflow".into() } else { count.to_string() },
        longest_run: verifier::longest_run(&x),
        rll: RllReport {
            l,
            ok: violation.is_none(),
            start: violation.map(|v| v.start),
            window: violation.map(|v| alph.format(&x[v.start..v.start + l + 1])),
            base: violation.map(|v| v.base.as_char()),
        },
        balance: BalanceReport {
            eps: eps.to_string(),
            mode: if strict { "strict" } else { "lenient" }.into(),
            min_gc: bounds.min_gc,
            max_gc: bounds.max_gc,
            lo: window.lo,
            hi: window.hi,
            ok: window.contains(bounds),
        },
    };
    to_json(&report)
}

pub fn combined_encode_json(n: usize, l: usize, eps: &str, payload: &str) -> Result<String, String> {
    let alph = alphabet(COMBINED_ALPHABET)?;
    let eps = epsilon(eps)?;
    let codec = CombinedCodec::new(&alph, n, l, eps).map_err(|e| e.to_string())?;
    let p = codec.params().clone();
    let x = alph.parse_word(payload.trim()).map_err(|e| e.to_string())?;
    if x.len() != p.payload_len {
        return Err(format!("payload must have {} symbols, got {}", p.payload_len, x.len()));
    }
    let c = codec.encode(&x).map_err(|e| e.to_string())?;
    let grid = codec.grid_points();
    let rank = cdna_core::gc_codec::read_index_suffix(&c[n - p.r_eps..]).map_err(|e| e.to_string())?;
    let encoding = Encoding {
        alphabet: alph.spec(),
        payload: alph.format(&x),
        codeword: alph.format(&c),
        n,
        payload_len: p.payload_len,
        body_len: p.body_len,
        index_len: p.r_eps,
        redundancy: p.redundancy(),
        rate: p.rate(alph.len()),
        flip_point: grid[rank as usize],
        grid,
        rll_ok: verifier::is_rll(&alph, &c, l),
        balanced: verifier::is_eps_balanced(&alph, &c, eps, BalanceMode::Strict),
        gc_count: verifier::gc_bounds(&alph, &c).min_gc,
        decoded_ok: codec.decode(&c).map(|d| d == x).unwrap_or(false),
    };
    to_json(&encoding)
}

/// Payload length accepted by `combined_encode` for these parameters.
pub fn combined_payload_len(n: usize, l: usize, eps: &str) -> Result<usize, String> {
    let alph = alphabet(COMBINED_ALPHABET)?;
    let codec = CombinedCodec::new(&alph, n, l, epsilon(eps)?).map_err(|e| e.to_string())?;
    Ok(codec.params().payload_len)
}

#[wasm_bindgen]
pub fn capacity_curve(spec: &str, max_l: usize) -> Result<String, JsError> {
    capacity_curve_json(spec, max_l).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn inspect_word(spec: &str, word: &str, l: usize, eps: &str, strict: bool) -> Result<String, JsError> {
    inspect_word_json(spec, word, l, eps, strict).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn combined_encode(n: usize, l: usize, eps: &str, payload: &str) -> Result<String, JsError> {
    combined_encode_json(n, l, eps, payload).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn payload_len(n: usize, l: usize, eps: &str) -> Result<usize, JsError> {
    combined_payload_len(n, l, eps).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn curve() {
        let v: Value = serde_json::from_str(&capacity_curve_json("M=AC", 2).unwrap()).unwrap();
        let pts = v.as_array().unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts[0]["capacity_bits"].as_f64().unwrap() - 1.733).abs() < 5e-4);
        assert!(capacity_curve_json("M=AC", 0).is_err());
        assert!(capacity_curve_json("M=XY", 2).is_err());
    }

    #[test]
    fn inspection() {
        let v: Value =
            serde_json::from_str(&inspect_word_json("M=AC", "ACMCMATA", 3, "0.1", false).unwrap()).unwrap();
        assert_eq!(v["realizations"], "4");
        assert_eq!(v["rll"]["ok"], false);
        assert_eq!(v["rll"]["start"], 1);
        assert_eq!(v["rll"]["window"], "CMCM");
        assert_eq!(v["rll"]["base"], "C");
        assert_eq!((v["balance"]["min_gc"].as_u64(), v["balance"]["max_gc"].as_u64()), (Some(2), Some(4)));
        assert_eq!(v["balance"]["ok"], false);

        let v: Value =
            serde_json::from_str(&inspect_word_json("M=AC", "ACMGGMTA", 3, "1/10", false).unwrap()).unwrap();
        assert_eq!(v["rll"]["ok"], true);
        assert_eq!(v["balance"]["ok"], true);
        assert!(inspect_word_json("M=AC", "ACXG", 3, "0.1", false).is_err());
    }

    #[test]
    fn encoding() {
        let k = combined_payload_len(40, 3, "1/8").unwrap();
        assert_eq!(k, 26);
        let payload: String = "ACGTMN".chars().cycle().take(k).collect();
        let v: Value = serde_json::from_str(&combined_encode_json(40, 3, "1/8", &payload).unwrap()).unwrap();
        assert_eq!(v["codeword"].as_str().unwrap().len(), 40);
        assert_eq!(v["rll_ok"], true);
        assert_eq!(v["balanced"], true);
        assert_eq!(v["decoded_ok"], true);
        assert_eq!(v["redundancy"], 14);
        assert!(combined_encode_json(40, 3, "1/8", "ACGT").is_err());
    }
}
