//! JSON and JSONL encodings shared by the command line and the browser demo.
//!
//! Complex numbers are pairs of decimal strings. Floats use the shortest
//! representation that parses back to the same bits; exact values are
//! written `"p"` or `"p/q"`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rational, parse_rational, GaussRat};
use crate::forms::{BinaryForm, FormError, Order, ProjPoint};
use crate::kodaira::{FibreRecord, FibreReport};
use crate::modulipath::{FibreSample, ModuliPathSample};
use crate::weierstrass::{WeierstrassData, WeierstrassError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read number {0:?}")]
    Number(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

pub type ComplexJson = [String; 2];

pub fn float_string(x: f64) -> String {
    format!("{x:?}")
}

pub fn complex_json(z: Complex64) -> ComplexJson {
    [float_string(z.re), float_string(z.im)]
}

fn parse_float(s: &str) -> Result<f64, FormatError> {
    s.trim().parse().map_err(|_| FormatError::Number(s.to_string()))
}

pub fn parse_complex(z: &ComplexJson) -> Result<Complex64, FormatError> {
    Ok(Complex64::new(parse_float(&z[0])?, parse_float(&z[1])?))
}

fn exact_json(z: &GaussRat) -> ComplexJson {
    [format_rational(&z.re), format_rational(&z.im)]
}

fn parse_exact(z: &ComplexJson) -> Option<GaussRat> {
    Some(GaussRat::new(parse_rational(&z[0])?, parse_rational(&z[1])?))
}

/// A binary form: `coeffs[i]` multiplies `x0^(degree-i) x1^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: usize,
    pub coeffs: Vec<ComplexJson>,
}

impl FormJson {
    pub fn from_form(f: &BinaryForm) -> Self {
        let coeffs = match f.exact_coeffs() {
            Some(c) => c.iter().map(exact_json).collect(),
            None => f.coeffs().iter().map(|&z| complex_json(z)).collect(),
        };
        Self { degree: f.degree(), coeffs }
    }

    /// Exact when every entry reads as a rational, otherwise floating point.
    pub fn to_form(&self) -> Result<BinaryForm, FormatError> {
        if self.coeffs.len() != self.degree + 1 {
            return Err(FormatError::Shape(format!("degree {} needs {} coefficients, got {}", self.degree, self.degree + 1, self.coeffs.len())));
        }
        if let Some(exact) = self.coeffs.iter().map(parse_exact).collect::<Option<Vec<_>>>() {
            return Ok(BinaryForm::from_exact(exact)?);
        }
        let c = self.coeffs.iter().map(parse_complex).collect::<Result<Vec<_>, _>>()?;
        Ok(BinaryForm::from_complex(c)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeierstrassJson {
    #[serde(rename = "A")]
    pub a: FormJson,
    #[serde(rename = "B")]
    pub b: FormJson,
}

impl WeierstrassJson {
    pub fn from_data(w: &WeierstrassData) -> Self {
        Self { a: FormJson::from_form(w.a()), b: FormJson::from_form(w.b()) }
    }

    pub fn to_data(&self) -> Result<WeierstrassData, FormatError> {
        Ok(WeierstrassData::new(self.a.to_form()?, self.b.to_form()?)?)
    }
}

pub fn weierstrass_to_string(w: &WeierstrassData) -> String {
    serde_json::to_string_pretty(&WeierstrassJson::from_data(w)).expect("plain data")
}

pub fn weierstrass_from_str(s: &str) -> Result<WeierstrassData, FormatError> {
    serde_json::from_str::<WeierstrassJson>(s)?.to_data()
}

/// Homogeneous coordinates `[p0, p1]`, plus `t = p0/p1` when finite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub point: [ComplexJson; 2],
    pub t: Option<ComplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<[ComplexJson; 2]>,
}

impl PointJson {
    pub fn from_point(p: &ProjPoint) -> Self {
        let (p0, p1) = p.coords();
        Self {
            point: [complex_json(p0), complex_json(p1)],
            t: p.affine_coordinate().map(complex_json),
            exact: p.exact_coords().map(|(x, y)| [exact_json(x), exact_json(y)]),
        }
    }
}

fn order_json(o: Order) -> serde_json::Value {
    match o {
        Order::Finite(n) => n.into(),
        Order::Infinite => "inf".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FibreJson {
    pub position: PointJson,
    /// `μ(A)`, an integer or `"inf"`.
    pub a_order: serde_json::Value,
    pub b_order: serde_json::Value,
    pub d_order: u32,
    pub kodaira: String,
    pub euler: u32,
    pub rdp: String,
    /// Verdict of the smoothness probe at this fibre, when it was run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_smooth: Option<bool>,
}

impl FibreJson {
    pub fn from_record(r: &FibreRecord) -> Self {
        Self {
            position: PointJson::from_point(&r.position),
            a_order: order_json(r.a_order),
            b_order: order_json(r.b_order),
            d_order: r.d_order,
            kodaira: r.kodaira.to_string(),
            euler: r.euler,
            rdp: r.rdp.to_string(),
            probe_smooth: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FibreReportJson {
    pub fibres: Vec<FibreJson>,
    pub total_euler: u32,
    pub surface_smooth: bool,
    pub minimal: bool,
}

impl FibreReportJson {
    pub fn from_report(r: &FibreReport) -> Self {
        Self {
            fibres: r.fibres.iter().map(FibreJson::from_record).collect(),
            total_euler: r.total_euler,
            surface_smooth: r.surface_smooth,
            minimal: r.minimal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreSampleJson {
    pub pos: ComplexJson,
    pub mult: u32,
}

/// One line of a path file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleJson {
    pub t: f64,
    #[serde(rename = "K")]
    pub k: ComplexJson,
    pub a: Vec<ComplexJson>,
    pub fibres: Vec<FibreSampleJson>,
    pub m: Vec<u32>,
    pub provenance: String,
}

impl SampleJson {
    pub fn from_sample(s: &ModuliPathSample) -> Self {
        Self {
            t: s.t,
            k: complex_json(s.k),
            a: s.a.iter().map(|&z| complex_json(z)).collect(),
            fibres: s.fibres.iter().map(|f| FibreSampleJson { pos: complex_json(f.pos), mult: f.mult }).collect(),
            m: s.m.clone(),
            provenance: s.provenance.clone(),
        }
    }

    pub fn to_sample(&self) -> Result<ModuliPathSample, FormatError> {
        if self.m.len() != self.fibres.len() {
            return Err(FormatError::Shape(format!("{} multiplicities for {} fibres", self.m.len(), self.fibres.len())));
        }
        Ok(ModuliPathSample {
            t: self.t,
            k: parse_complex(&self.k)?,
            a: self.a.iter().map(parse_complex).collect::<Result<_, _>>()?,
            fibres: self
                .fibres
                .iter()
                .map(|f| Ok(FibreSample { pos: parse_complex(&f.pos)?, mult: f.mult }))
                .collect::<Result<_, FormatError>>()?,
            m: self.m.clone(),
            provenance: self.provenance.clone(),
        })
    }
}

/// One JSON object per line, newline terminated.
pub fn samples_to_jsonl(samples: &[ModuliPathSample]) -> String {
    let mut out = String::new();
    for s in samples {
        out.push_str(&serde_json::to_string(&SampleJson::from_sample(s)).expect("plain data"));
        out.push('\n');
    }
    out
}

pub fn samples_from_jsonl(text: &str) -> Result<Vec<ModuliPathSample>, FormatError> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| serde_json::from_str::<SampleJson>(l)?.to_sample()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cuspidal_family, nodal_family, roots_of_unity};

    #[test]
    fn floats_round_trip_bitwise() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 5e-324, 123456789.123, -0.0, f64::MAX] {
            assert_eq!(parse_float(&float_string(x)).unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn inexact_family_round_trips() {
        let w = nodal_family(&roots_of_unity(), Complex64::new(0.25, 0.0)).unwrap();
        let text = weierstrass_to_string(&w);
        let back = weierstrass_from_str(&text).unwrap();
        assert!(!back.is_exact());
        for (x, y) in w.a().coeffs().iter().chain(w.b().coeffs()).zip(back.a().coeffs().iter().chain(back.b().coeffs())) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        assert_eq!(weierstrass_to_string(&back), text);
    }

    #[test]
    fn exact_data_round_trips() {
        let b = BinaryForm::from_exact((0..13).map(|i| GaussRat::ratio(i - 6, 7)).collect()).unwrap();
        let a = BinaryForm::from_exact((0..9).map(|i| GaussRat::new(GaussRat::ratio(1, i + 1).re, GaussRat::ratio(-2, 3).re)).collect()).unwrap();
        let w = WeierstrassData::new(a, b).unwrap();
        let text = weierstrass_to_string(&w);
        assert!(text.contains("\"1/7\"") && text.contains("\"-2/3\""));
        let back = weierstrass_from_str(&text).unwrap();
        assert_eq!(back.a().exact_coeffs(), w.a().exact_coeffs());
        assert_eq!(back.b().exact_coeffs(), w.b().exact_coeffs());
    }

    #[test]
    fn schema_is_checked() {
        let bad = r#"{"A": {"degree": 8, "coeffs": [["1","0"]]}, "B": {"degree": 12, "coeffs": []}}"#;
        assert!(matches!(weierstrass_from_str(bad), Err(FormatError::Shape(_))));
        let wrong_degree = serde_json::to_string(&WeierstrassJson {
            a: FormJson { degree: 7, coeffs: vec![["0".into(), "0".into()]; 8] },
            b: FormJson { degree: 12, coeffs: vec![["1".into(), "0".into()]; 13] },
        })
        .unwrap();
        assert!(matches!(weierstrass_from_str(&wrong_degree), Err(FormatError::Weierstrass(_))));
        assert!(matches!(weierstrass_from_str("{"), Err(FormatError::Json(_))));
    }

    #[test]
    fn report_lists_cusps() {
        let w = cuspidal_family(&roots_of_unity()).unwrap();
        let r = FibreReportJson::from_report(&crate::kodaira::fibre_report(&w).unwrap());
        assert_eq!(r.fibres.len(), 12);
        assert!(r.fibres.iter().all(|f| f.kodaira == "II" && f.a_order == "inf" && f.b_order == 1 && f.d_order == 2 && f.rdp == "none"));
        assert_eq!(r.total_euler, 24);
    }

    #[test]
    fn samples_round_trip() {
        let s = ModuliPathSample {
            t: 0.375,
            k: Complex64::new(0.25, -1e-17),
            a: roots_of_unity(),
            fibres: roots_of_unity().into_iter().map(|pos| FibreSample { pos, mult: 2 }).collect(),
            m: vec![3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            provenance: "cusp-limit".into(),
        };
        let text = samples_to_jsonl(&[s.clone(), s.clone()]);
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("{\"t\":0.375,\"K\":[\"0.25\",\"-1e-17\"]"));
        assert_eq!(samples_from_jsonl(&text).unwrap(), vec![s.clone(), s]);
    }
}
