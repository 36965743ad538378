//! Sampled paths through pairs `[C, X_{(a_i),K}]`: swapping fibre positions,
//! degenerating to the cuspidal surface and back, and moving one unit of
//! curve multiplicity between neighbouring cuspidal fibres.
//!
//! A sample lists the singular fibres of its surface. For `K ≠ 0` these are
//! the twelve fibres over the `a_i` (in tuple order) followed by the twelve
//! roots of `p(t) = -2K`, `p = ∏(t - a_i)`, in tracked order. For `K = 0`
//! only the twelve cuspidal fibres over the `a_i` remain. `m` gives the curve
//! multiplicity on each listed fibre.

mod legs;
mod track;
mod verify;

use num_complex::Complex64;
use thiserror::Error;

use crate::families::FamilyError;

pub use legs::{connect_to_canonical, cusp_limit_path, node_transfer_path, permutation_path, Permutation};
pub use track::track_beta;
pub use verify::{verify_path, verify_path_with};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("fibres within {distance:e} of each other during {leg}")]
    Collision { leg: &'static str, distance: f64 },
    #[error("root tracking ambiguous near K = {k} after {halvings} halvings")]
    BranchAmbiguity { k: Complex64, halvings: u32 },
    #[error("K = 1/2: t¹² = 1 - 2K has a repeated root")]
    DegenerateK,
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Samples per leg before adaptive refinement.
    pub steps: usize,
    pub eps_sep: f64,
    /// Fixed `K` for the nodal legs.
    pub k: f64,
    /// Radius of a transposition arc relative to half the distance swapped.
    pub arc_factor: f64,
    /// Retries of a transposition with a wider, jittered arc.
    pub retries: u32,
    pub max_halvings: u32,
    pub seed: u64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self { steps: 256, eps_sep: 1e-6, k: 0.25, arc_factor: 1.25, retries: 6, max_halvings: 14, seed: 0 }
    }
}

impl TraceOptions {
    /// Defaults, with the jitter seed taken from `K3LAB_SEED` when set.
    pub fn from_env() -> Self {
        let seed = std::env::var("K3LAB_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0);
        Self { seed, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FibreSample {
    pub pos: Complex64,
    /// Order of `Δ` at the fibre: 1 nodal, 2 cuspidal.
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuliPathSample {
    pub t: f64,
    pub k: Complex64,
    pub a: Vec<Complex64>,
    pub fibres: Vec<FibreSample>,
    /// Curve multiplicity per entry of `fibres`.
    pub m: Vec<u32>,
    pub provenance: String,
}

impl ModuliPathSample {
    pub fn genus(&self) -> u64 {
        self.m.iter().map(|&x| x as u64).sum()
    }

    pub fn is_cuspidal(&self) -> bool {
        self.k == Complex64::new(0.0, 0.0)
    }

    /// Multiplicities on the fibres over the `a_i`.
    pub fn static_config(&self) -> Vec<u32> {
        self.m[..self.a.len()].to_vec()
    }
}

/// Expected family and fibre data at one end of a path.
#[derive(Debug, Clone, PartialEq)]
pub struct Endpoint {
    pub a: Vec<Complex64>,
    pub k: Complex64,
    /// Curve multiplicity on each fibre over `a_i`.
    pub m: Vec<u32>,
    /// Extra fibres with their curve multiplicity whose positions must be
    /// matched (moving fibres on nodal surfaces).
    pub carried: Vec<(Complex64, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Mass,
    Separation,
    Family,
    Discontinuity,
    Multiplicity,
    Endpoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub sample: usize,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathReport {
    pub samples: Vec<ModuliPathSample>,
    pub continuous: bool,
    pub endpoint_match: bool,
    /// Largest positional residual over both declared endpoints.
    pub endpoint_residual: f64,
    pub invariant_violations: Vec<Violation>,
    pub eps_cont: f64,
    pub eps_sep: f64,
    pub start: Option<Endpoint>,
    pub end: Option<Endpoint>,
    pub verified: bool,
}

impl PathReport {
    pub(crate) fn new(samples: Vec<ModuliPathSample>, eps_sep: f64, start: Option<Endpoint>, end: Option<Endpoint>) -> Self {
        let eps_cont = 10.0 * verify::max_displacement(&samples);
        Self {
            samples,
            continuous: false,
            endpoint_match: false,
            endpoint_residual: f64::NAN,
            invariant_violations: Vec::new(),
            eps_cont,
            eps_sep,
            start,
            end,
            verified: false,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.verified && self.continuous && self.endpoint_match && self.invariant_violations.is_empty()
    }

    pub fn last(&self) -> &ModuliPathSample {
        self.samples.last().expect("paths have at least one sample")
    }

    /// Smallest distance between any two fibres of any sample.
    pub fn min_fibre_separation(&self) -> f64 {
        self.samples.iter().map(|s| verify::separation(&s.fibres)).fold(f64::INFINITY, f64::min)
    }
}
