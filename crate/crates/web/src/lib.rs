//! Browser bindings: fibre layout of the family over the 12th roots of
//! unity, a traced node transfer, and the Yau-Zaslow table. Every export
//! returns a JSON string; the page does the drawing.

use k3lab::curves::{yau_zaslow, CurveConfig};
use k3lab::families::FamilyParams;
use k3lab::kodaira::fibre_report;
use k3lab::modulipath::{node_transfer_path, TraceOptions};
use num_complex::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct Fibre {
    pub re: f64,
    pub im: f64,
    pub kodaira: String,
    pub euler: u32,
}

#[derive(Debug, Serialize)]
pub struct Layout {
    pub k: f64,
    pub fibres: Vec<Fibre>,
    pub total_euler: u32,
    pub smooth: bool,
}

/// Positions and types of the singular fibres at real `K` (0 is cuspidal).
pub fn layout(k: f64) -> Result<Layout, String> {
    let w = FamilyParams::roots_of_unity(Complex64::new(k, 0.0)).build().map_err(|e| e.to_string())?;
    let r = fibre_report(&w).map_err(|e| e.to_string())?;
    let fibres = r
        .fibres
        .iter()
        .filter_map(|f| {
            let t = f.position.affine_coordinate()?;
            Some(Fibre { re: t.re, im: t.im, kodaira: f.kodaira.to_string(), euler: f.euler })
        })
        .collect();
    Ok(Layout { k, fibres, total_euler: r.total_euler, smooth: r.surface_smooth })
}

#[derive(Debug, Serialize)]
pub struct Frame {
    pub t: f64,
    /// Fibres over the `a_i`, then the moving ones.
    pub fibres: Vec<[f64; 2]>,
    pub m: Vec<u32>,
}

#[derive(Debug, Serialize)]
pub struct Transfer {
    pub frames: Vec<Frame>,
    pub valid: bool,
    pub eps_cont: f64,
}

/// Node transfer for `m = (m1, m2, 0, ..., 0)` at `K`.
pub fn transfer(m1: u32, m2: u32, k: f64, steps: usize) -> Result<Transfer, String> {
    let mut m = vec![m1, m2];
    m.resize(12, 0);
    let cfg = CurveConfig::new(m1 + m2, m).map_err(|e| e.to_string())?;
    let opts = TraceOptions { steps: steps.max(2), k, ..TraceOptions::default() };
    let r = node_transfer_path(&cfg, k, &opts).map_err(|e| e.to_string())?;
    let frames = r.samples.iter().map(|s| Frame { t: s.t, fibres: s.fibres.iter().map(|f| [f.pos.re, f.pos.im]).collect(), m: s.m.clone() }).collect();
    Ok(Transfer { frames, valid: r.is_valid(), eps_cont: r.eps_cont })
}

/// `[g, n_g]` rows, numbers as decimal strings.
pub fn yz_rows(g_max: usize) -> Vec<(usize, String)> {
    yau_zaslow(g_max).iter().enumerate().map(|(g, n)| (g, n.to_string())).collect()
}

fn json<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.map(|v| serde_json::to_string(&v).expect("plain data")).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn fibre_layout(k: f64) -> Result<String, JsValue> {
    json(layout(k))
}

#[wasm_bindgen]
pub fn transfer_trace(m1: u32, m2: u32, k: f64, steps: usize) -> Result<String, JsValue> {
    json(transfer(m1, m2, k, steps))
}

#[wasm_bindgen]
pub fn yz_table(g_max: usize) -> Result<String, JsValue> {
    json(if g_max > 200 { Err(format!("g_max {g_max} is too large for the page")) } else { Ok(yz_rows(g_max)) })
}
