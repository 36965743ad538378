//! Scatter of fibre trajectories in the `t`-plane.

use std::fmt::Write;

use k3lab::modulipath::ModuliPathSample;
use num_complex::Complex64;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 24.0;

/// One polyline per listed fibre, broken wherever the number of fibres
/// changes (a cusp limit), plus dots at both ends.
pub fn trajectories(samples: &[ModuliPathSample]) -> String {
    let pts = samples.iter().flat_map(|s| s.fibres.iter().map(|f| f.pos));
    let (mut lo, mut hi) = (Complex64::new(f64::INFINITY, f64::INFINITY), Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for z in pts {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    if !lo.re.is_finite() {
        lo = Complex64::new(-1.0, -1.0);
        hi = Complex64::new(1.0, 1.0);
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let xy = |z: Complex64| (MARGIN + (z.re - lo.re) * scale, SIZE - MARGIN - (z.im - lo.im) * scale);

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    let mut start = 0;
    while start < samples.len() {
        let n = samples[start].fibres.len();
        let end = samples[start..].iter().position(|s| s.fibres.len() != n).map_or(samples.len(), |k| start + k);
        let statics = samples[start].a.len();
        for i in 0..n {
            let colour = if i < statics { "#1f5fa8" } else { "#c2461b" };
            let mut d = String::new();
            for s in &samples[start..end] {
                let (x, y) = xy(s.fibres[i].pos);
                write!(d, "{x:.2},{y:.2} ").unwrap();
            }
            writeln!(out, r#"<polyline fill="none" stroke="{colour}" stroke-width="1" points="{}"/>"#, d.trim_end()).unwrap();
        }
        start = end;
    }
    for (s, fill) in [(samples.first(), "#2a9d3a"), (samples.last(), "black")] {
        for f in s.map(|s| s.fibres.as_slice()).unwrap_or_default() {
            let (x, y) = xy(f.pos);
            writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{fill}"/>"#).unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}
