//! The two explicit families over twelve distinct points `a_1..a_12`:
//! the cuspidal surface `A = 0, B = α` and the nodal surface
//! `A = ∛(K²)·δ·x1⁸, B = α + K x1¹²`, where `α = ∏(x0 − a_i x1)` and
//! `δ = −∛(27/4)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{BinaryForm, ProjPoint};
use crate::weierstrass::{WeierstrassData, WeierstrassError};

pub const FAMILY_SIZE: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("expected {FAMILY_SIZE} points, got {0}")]
    WrongCount(usize),
    #[error("points {0} and {1} coincide (separation {2:.3e})")]
    DuplicatePoints(usize, usize, f64),
    #[error("the nodal family needs K != 0")]
    ZeroK,
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

/// Parameters `(a, K)` of a surface `X_{(a_i),K}`; `K = 0` is the cuspidal one.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyParams {
    pub a: Vec<Complex64>,
    pub k: Complex64,
}

impl FamilyParams {
    /// `α_n = e^{πin/6}`, `n = 1..12`.
    pub fn roots_of_unity(k: Complex64) -> Self {
        Self { a: roots_of_unity(), k }
    }

    pub fn build(&self) -> Result<WeierstrassData, FamilyError> {
        if self.k == Complex64::new(0.0, 0.0) {
            cuspidal_family(&self.a)
        } else {
            nodal_family(&self.a, self.k)
        }
    }
}

pub fn roots_of_unity() -> Vec<Complex64> {
    (1..=FAMILY_SIZE).map(|n| unit_root(n as i64)).collect()
}

/// `e^{πin/6}` with the axis-aligned values written exactly.
pub fn unit_root(n: i64) -> Complex64 {
    let k = n.rem_euclid(12);
    let h = 3f64.sqrt() / 2.0;
    let (re, im) = match k {
        0 => (1.0, 0.0),
        1 => (h, 0.5),
        2 => (0.5, h),
        3 => (0.0, 1.0),
        4 => (-0.5, h),
        5 => (-h, 0.5),
        6 => (-1.0, 0.0),
        7 => (-h, -0.5),
        8 => (-0.5, -h),
        9 => (0.0, -1.0),
        10 => (0.5, -h),
        _ => (h, -0.5),
    };
    Complex64::new(re, im)
}

/// `−∛(27/4)`.
pub fn delta_constant() -> f64 {
    -(27.0f64 / 4.0).cbrt()
}

/// `∛(K²) = r^{2/3} e^{2iθ/3}` for `K = r e^{iθ}` with `θ ∈ [0, 2π)`, so that
/// its cube is exactly `K²`.
pub fn cube_root_k_squared(k: Complex64) -> Complex64 {
    let r = k.norm();
    let mut theta = k.arg();
    if theta < 0.0 {
        theta += std::f64::consts::TAU;
    }
    Complex64::from_polar(r.powf(2.0 / 3.0), 2.0 * theta / 3.0)
}

/// Smallest pairwise distance, with the index pair attaining it.
pub fn min_separation(points: &[Complex64]) -> (f64, usize, usize) {
    let mut best = (f64::INFINITY, 0, 0);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = (points[i] - points[j]).norm();
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    best
}

pub(crate) fn check_points(a: &[Complex64]) -> Result<(), FamilyError> {
    if a.len() != FAMILY_SIZE {
        return Err(FamilyError::WrongCount(a.len()));
    }
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (d, i, j) = min_separation(a);
    if d <= 1e-8 * scale || d == 0.0 {
        return Err(FamilyError::DuplicatePoints(i, j, d));
    }
    Ok(())
}

/// `α = ∏ (x0 − a_i x1)`.
pub fn alpha(a: &[Complex64]) -> BinaryForm {
    BinaryForm::from_roots(a)
}

/// `X_{(a_i),0}`: `A = 0`, `B = α`.
pub fn cuspidal_family(a: &[Complex64]) -> Result<WeierstrassData, FamilyError> {
    check_points(a)?;
    Ok(WeierstrassData::new(BinaryForm::zero(8), alpha(a))?)
}

/// `X_{(a_i),K}`: `A = ∛(K²)·δ·x1⁸`, `B = α + K x1¹²`.
pub fn nodal_family(a: &[Complex64], k: Complex64) -> Result<WeierstrassData, FamilyError> {
    check_points(a)?;
    if k == Complex64::new(0.0, 0.0) {
        return Err(FamilyError::ZeroK);
    }
    let big_a = BinaryForm::monomial(8, 8, cube_root_k_squared(k) * delta_constant());
    let big_b = alpha(a).sum(&BinaryForm::monomial(12, 12, k)).expect("degree 12");
    Ok(WeierstrassData::new(big_a, big_b)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyPattern {
    /// Twenty-four distinct roots of `Δ`: smooth, all fibres nodal.
    SmoothNodal,
    /// Twelve double roots with `A ≡ 0`: twelve cuspidal fibres.
    Cuspidal,
    /// Roots of `Δ` collide in some other way.
    RootCollision,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyValidation {
    pub pattern: FamilyPattern,
    pub distinct_roots: usize,
    /// Smallest distance between distinct roots; 0 when a root is repeated
    /// outside the cuspidal pattern.
    pub min_separation: f64,
    pub roots: Vec<(ProjPoint, u32)>,
}

/// Reports whether `Δ` has 24 distinct roots, the cuspidal pattern, or
/// neither. Never fails: root-finder trouble is reported as a collision.
pub fn validate_family(w: &WeierstrassData) -> FamilyValidation {
    let roots = match w.discriminant_roots() {
        Ok(r) => r,
        Err(_) => {
            return FamilyValidation { pattern: FamilyPattern::RootCollision, distinct_roots: 0, min_separation: 0.0, roots: Vec::new() }
        }
    };
    let pts: Vec<(ProjPoint, u32)> = roots.into_iter().map(|r| (r.point, r.multiplicity)).collect();
    let mut sep = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            sep = sep.min(pts[i].0.distance(&pts[j].0));
        }
    }
    let all_simple = pts.iter().all(|(_, m)| *m == 1);
    let all_double = pts.iter().all(|(_, m)| *m == 2);
    let pattern = if all_simple && pts.len() == 24 {
        FamilyPattern::SmoothNodal
    } else if all_double && pts.len() == 12 && w.a().is_zero() {
        FamilyPattern::Cuspidal
    } else {
        FamilyPattern::RootCollision
    };
    if pattern == FamilyPattern::RootCollision && pts.iter().any(|(_, m)| *m > 1) {
        sep = 0.0;
    }
    FamilyValidation { pattern, distinct_roots: pts.len(), min_separation: sep, roots: pts }
}
