//! Failures mapped to exit codes and a JSON object on stderr.

use k3lab::curves::CurvesError;
use k3lab::families::FamilyError;
use k3lab::format::FormatError;
use k3lab::forms::FormError;
use k3lab::kodaira::KodairaError;
use k3lab::modulipath::PathError;
use k3lab::weierstrass::WeierstrassError;
use serde::Serialize;

/// Bad input: flags, files, preconditions.
pub const EXIT_VALIDATION: i32 = 1;
/// Root finding or path tracking failed.
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    /// `module::operation` that failed.
    pub operation: String,
    pub kind: String,
    pub message: String,
    #[serde(skip)]
    pub code: i32,
}

#[derive(Serialize)]
struct Envelope<'a> {
    error: &'a CliError,
}

impl CliError {
    pub fn validation(operation: &str, kind: &str, message: impl Into<String>) -> Self {
        Self { operation: operation.into(), kind: kind.into(), message: message.into(), code: EXIT_VALIDATION }
    }

    pub fn numeric(operation: &str, kind: &str, message: impl Into<String>) -> Self {
        Self { operation: operation.into(), kind: kind.into(), message: message.into(), code: EXIT_NUMERIC }
    }

    pub fn io(operation: &str, e: std::io::Error) -> Self {
        Self::validation(operation, "Io", e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&Envelope { error: self }).expect("plain data")
    }
}

/// Variant name from the `Debug` form.
fn kind<E: std::fmt::Debug>(e: &E) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_alphanumeric() && c != '_').next().unwrap_or_default().to_string()
}

fn form(operation: &str, e: &FormError) -> CliError {
    match e {
        FormError::NoConvergence { .. } => CliError::numeric(operation, &kind(e), e.to_string()),
        _ => CliError::validation(operation, &kind(e), e.to_string()),
    }
}

pub fn weierstrass(operation: &str, e: &WeierstrassError) -> CliError {
    match e {
        WeierstrassError::Form(f) => form(operation, f),
        _ => CliError::validation(operation, &kind(e), e.to_string()),
    }
}

pub fn kodaira(operation: &str, e: &KodairaError) -> CliError {
    match e {
        KodairaError::Weierstrass(w) => weierstrass(operation, w),
        _ => CliError::validation(operation, &kind(e), e.to_string()),
    }
}

pub fn family(operation: &str, e: &FamilyError) -> CliError {
    match e {
        FamilyError::Weierstrass(w) => weierstrass(operation, w),
        _ => CliError::validation(operation, &kind(e), e.to_string()),
    }
}

pub fn path(operation: &str, e: &PathError) -> CliError {
    match e {
        PathError::Collision { .. } | PathError::BranchAmbiguity { .. } => CliError::numeric(operation, &kind(e), e.to_string()),
        PathError::Family(f) => family(operation, f),
        _ => CliError::validation(operation, &kind(e), e.to_string()),
    }
}

pub fn curves(operation: &str, e: &CurvesError) -> CliError {
    CliError::validation(operation, &kind(e), e.to_string())
}

pub fn format(operation: &str, e: &FormatError) -> CliError {
    match e {
        FormatError::Form(f) => form(operation, f),
        FormatError::Weierstrass(w) => weierstrass(operation, w),
        _ => CliError::validation(operation, &kind(e), e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_and_codes() {
        let e = path("modulipath::permutation_path", &PathError::BranchAmbiguity { k: num_complex::Complex64::new(0.25, 0.0), halvings: 14 });
        assert_eq!((e.kind.as_str(), e.code), ("BranchAmbiguity", EXIT_NUMERIC));
        let e = path("modulipath::track_beta", &PathError::DegenerateK);
        assert_eq!((e.kind.as_str(), e.code), ("DegenerateK", EXIT_VALIDATION));
        let e = kodaira("kodaira::fibre_report", &KodairaError::Weierstrass(WeierstrassError::Form(FormError::NoConvergence { worst: 1.0 })));
        assert_eq!((e.kind.as_str(), e.code), ("NoConvergence", EXIT_NUMERIC));
        let v: serde_json::Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(v["error"]["operation"], "kodaira::fibre_report");
    }
}
