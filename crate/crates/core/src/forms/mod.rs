//! Homogeneous binary forms over the complex numbers, with an optional exact
//! Gaussian-rational shadow that is carried through arithmetic whenever every
//! input is exact.
//!
//! A form of degree `d` is stored as `c[0..=d]` with `c[i]` the coefficient of
//! `x0^(d-i) x1^i`. The affine chart `x1 = 1` uses the coordinate
//! `t = x0/x1`; the point at infinity `[1:0]` is where `c[0]` is read off.

mod roots;

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::exact::{ExactPoly, GaussRat};

pub use roots::{polynomial_roots, roots_with_options, Root, RootOptions};
pub(crate) use roots::{aberth, backward_error, horner};

/// Default relative threshold for deciding that a Taylor coefficient vanishes.
pub const DEFAULT_ORDER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error("the zero form has no well-defined roots")]
    ZeroForm,
    #[error("root iteration did not converge (worst backward error {worst:.3e})")]
    NoConvergence { worst: f64 },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("a form needs at least one coefficient")]
    Empty,
}

/// Multiplicity of a zero, with `Infinite` reserved for the zero form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    /// `self >= n`, with infinity dominating everything.
    pub fn at_least(self, n: u32) -> bool {
        match self {
            Order::Finite(k) => k >= n,
            Order::Infinite => true,
        }
    }

    pub fn is(self, n: u32) -> bool {
        self == Order::Finite(n)
    }
}

impl std::ops::Add for Order {
    type Output = Order;
    fn add(self, rhs: Order) -> Order {
        match (self, rhs) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A point `[p0 : p1]` of the projective line, scaled so that the coordinate
/// of larger modulus equals 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    p0: Complex64,
    p1: Complex64,
    exact: Option<(GaussRat, GaussRat)>,
}

impl ProjPoint {
    /// `None` when both coordinates vanish.
    pub fn new(p0: Complex64, p1: Complex64) -> Option<Self> {
        let (m0, m1) = (p0.norm(), p1.norm());
        if !(m0 > 0.0 || m1 > 0.0) || !m0.is_finite() || !m1.is_finite() {
            return None;
        }
        let (p0, p1) = if m0 > m1 {
            (Complex64::new(1.0, 0.0), p1 / p0)
        } else {
            (p0 / p1, Complex64::new(1.0, 0.0))
        };
        Some(Self { p0, p1, exact: None })
    }

    /// The affine point `[t : 1]`.
    pub fn affine(t: Complex64) -> Self {
        Self::new(t, Complex64::new(1.0, 0.0)).expect("finite affine point")
    }

    /// `[1 : 0]`.
    pub fn infinity() -> Self {
        Self { p0: Complex64::new(1.0, 0.0), p1: Complex64::new(0.0, 0.0), exact: Some((GaussRat::one(), GaussRat::zero())) }
    }

    /// `[t : 1]` with exact coordinates.
    pub fn exact_affine(t: GaussRat) -> Self {
        let mut p = Self::affine(t.to_c64());
        p.exact = Some((t, GaussRat::one()));
        p
    }

    pub fn coords(&self) -> (Complex64, Complex64) {
        (self.p0, self.p1)
    }

    pub fn exact_coords(&self) -> Option<&(GaussRat, GaussRat)> {
        self.exact.as_ref()
    }

    pub fn is_infinity(&self) -> bool {
        self.p1 == Complex64::new(0.0, 0.0)
    }

    /// `t = p0/p1` when the point is finite.
    pub fn affine_coordinate(&self) -> Option<Complex64> {
        (!self.is_infinity()).then(|| self.p0 / self.p1)
    }

    /// The same point with both coordinates multiplied by `lambda`
    /// (unnormalised, for homogeneity checks).
    pub fn scaled_coords(&self, lambda: Complex64) -> (Complex64, Complex64) {
        (self.p0 * lambda, self.p1 * lambda)
    }

    /// Chordal-style proximity: `|p0 q1 - p1 q0| <= tol` on normalised
    /// coordinates, exact comparison when both points carry exact data.
    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        if let (Some((a0, a1)), Some((b0, b1))) = (&self.exact, &other.exact) {
            return (a0 * b1) == (a1 * b0);
        }
        (self.p0 * other.p1 - self.p1 * other.p0).norm() <= tol
    }

    /// Distance used for separation checks: affine distance when both points
    /// are finite, chordal cross-product otherwise.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        match (self.affine_coordinate(), other.affine_coordinate()) {
            (Some(a), Some(b)) => (a - b).norm(),
            _ => (self.p0 * other.p1 - self.p1 * other.p0).norm(),
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.p0, self.p1)
    }
}

/// A homogeneous form in `(x0, x1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryForm {
    coeffs: Vec<Complex64>,
    exact: Option<Vec<GaussRat>>,
    /// Running first-order estimate of the absolute rounding error of each
    /// coefficient, accumulated by the arithmetic that produced the form.
    noise: Option<Vec<f64>>,
}

const EPS: f64 = f64::EPSILON;

fn add_noise(a: Option<&[f64]>, b: Option<&[f64]>, extra: Vec<f64>) -> Option<Vec<f64>> {
    let mut v = extra;
    for src in [a, b].into_iter().flatten() {
        for (x, y) in v.iter_mut().zip(src) {
            *x += y;
        }
    }
    Some(v)
}

impl BinaryForm {
    pub fn from_complex(coeffs: Vec<Complex64>) -> Result<Self, FormError> {
        if coeffs.is_empty() {
            return Err(FormError::Empty);
        }
        Ok(Self { coeffs, exact: None, noise: None })
    }

    pub fn from_exact(coeffs: Vec<GaussRat>) -> Result<Self, FormError> {
        if coeffs.is_empty() {
            return Err(FormError::Empty);
        }
        Ok(Self { coeffs: coeffs.iter().map(GaussRat::to_c64).collect(), exact: Some(coeffs), noise: None })
    }

    pub fn zero(degree: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); degree + 1], exact: Some(vec![GaussRat::zero(); degree + 1]), noise: None }
    }

    /// `c · x0^(d-i) x1^i`, exact when `c` is.
    pub fn monomial_exact(degree: usize, i: usize, c: GaussRat) -> Self {
        let mut v = vec![GaussRat::zero(); degree + 1];
        v[i] = c;
        Self::from_exact(v).expect("nonempty")
    }

    pub fn monomial(degree: usize, i: usize, c: Complex64) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); degree + 1];
        v[i] = c;
        Self { coeffs: v, exact: None, noise: None }
    }

    /// `∏ (x0 - r x1)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::from_complex(vec![Complex64::new(1.0, 0.0)]).expect("nonempty"), |acc, r| {
            acc.product(&Self::from_complex(vec![Complex64::new(1.0, 0.0), -r]).expect("nonempty"))
        })
    }

    /// Exact `∏ (x0 - r x1)`.
    pub fn from_roots_exact(roots: &[GaussRat]) -> Self {
        roots.iter().fold(Self::from_exact(vec![GaussRat::one()]).expect("nonempty"), |acc, r| {
            acc.product(&Self::from_exact(vec![GaussRat::one(), -r]).expect("nonempty"))
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn exact_coeffs(&self) -> Option<&[GaussRat]> {
        self.exact.as_deref()
    }

    /// Absolute error estimate per coefficient, if any arithmetic rounded.
    pub fn noise(&self) -> Option<&[f64]> {
        self.noise.as_deref()
    }

    /// Declares an absolute error bound for each coefficient (e.g. measured
    /// data). The form becomes inexact.
    pub fn with_noise(mut self, noise: Vec<f64>) -> Result<Self, FormError> {
        if noise.len() != self.coeffs.len() {
            return Err(FormError::DegreeMismatch { left: self.degree(), right: noise.len().saturating_sub(1) });
        }
        self.exact = None;
        self.noise = Some(noise);
        Ok(self)
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(e) => e.iter().all(GaussRat::is_zero),
            None => self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0)),
        }
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn evaluate(&self, p: &ProjPoint) -> Complex64 {
        let (p0, p1) = p.coords();
        self.evaluate_at(p0, p1)
    }

    /// `Σ c_i p0^(d-i) p1^i` at unnormalised coordinates.
    pub fn evaluate_at(&self, p0: Complex64, p1: Complex64) -> Complex64 {
        // Horner in the ratio that stays bounded
        let d = self.degree() as i32;
        if p1.norm() >= p0.norm() {
            let t = p0 / p1;
            let mut acc = Complex64::new(0.0, 0.0);
            for c in &self.coeffs {
                acc = acc * t + c;
            }
            acc * p1.powi(d)
        } else {
            let s = p1 / p0;
            let mut acc = Complex64::new(0.0, 0.0);
            for c in self.coeffs.iter().rev() {
                acc = acc * s + c;
            }
            acc * p0.powi(d)
        }
    }

    /// Ascending coefficients of `f(t, 1)`; degree drops when `[1:0]` is a root.
    pub fn chart0(&self) -> Vec<Complex64> {
        self.coeffs.iter().rev().copied().collect()
    }

    /// Ascending coefficients of `f(1, s)`.
    pub fn chart1(&self) -> Vec<Complex64> {
        self.coeffs.clone()
    }

    pub fn chart0_exact(&self) -> Option<ExactPoly> {
        self.exact.as_ref().map(|e| ExactPoly::new(e.iter().rev().cloned().collect()))
    }

    pub fn chart1_exact(&self) -> Option<ExactPoly> {
        self.exact.as_ref().map(|e| ExactPoly::new(e.clone()))
    }

    pub fn product(&self, rhs: &BinaryForm) -> BinaryForm {
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let exact = match (&self.exact, &rhs.exact) {
            (Some(a), Some(b)) => {
                let mut e = vec![GaussRat::zero(); n];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        e[i + j] = &e[i + j] + &(x * y);
                    }
                }
                Some(e)
            }
            _ => None,
        };
        match exact {
            Some(e) => BinaryForm::from_exact(e).expect("nonempty"),
            None => {
                // first-order rounding estimate rather than a worst-case bound
                let mut extra = vec![0.0; n];
                for (i, a) in self.coeffs.iter().enumerate() {
                    for (j, b) in rhs.coeffs.iter().enumerate() {
                        let mut e = 2.0 * EPS * a.norm() * b.norm();
                        if let Some(nb) = &rhs.noise {
                            e += a.norm() * nb[j];
                        }
                        if let Some(na) = &self.noise {
                            e += na[i] * b.norm();
                            if let Some(nb) = &rhs.noise {
                                e += na[i] * nb[j];
                            }
                        }
                        extra[i + j] += e;
                    }
                }
                BinaryForm { coeffs: out, exact: None, noise: Some(extra) }
            }
        }
    }

    pub fn sum(&self, rhs: &BinaryForm) -> Result<BinaryForm, FormError> {
        if self.degree() != rhs.degree() {
            return Err(FormError::DegreeMismatch { left: self.degree(), right: rhs.degree() });
        }
        Ok(match (&self.exact, &rhs.exact) {
            (Some(a), Some(b)) => BinaryForm::from_exact(a.iter().zip(b).map(|(x, y)| x + y).collect())?,
            _ => {
                let coeffs: Vec<Complex64> = self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect();
                let extra = coeffs.iter().map(|c| EPS * c.norm()).collect();
                let noise = add_noise(self.noise.as_deref(), rhs.noise.as_deref(), extra);
                BinaryForm { coeffs, exact: None, noise }
            }
        })
    }

    /// Multiplication by an inexact scalar; the result is inexact.
    pub fn scale(&self, c: Complex64) -> BinaryForm {
        let coeffs: Vec<Complex64> = self.coeffs.iter().map(|x| x * c).collect();
        let mut noise: Vec<f64> = coeffs.iter().map(|x| 2.0 * EPS * x.norm()).collect();
        if let Some(n) = &self.noise {
            for (x, y) in noise.iter_mut().zip(n) {
                *x += c.norm() * y;
            }
        }
        BinaryForm { coeffs, exact: None, noise: Some(noise) }
    }

    pub fn scale_exact(&self, c: &GaussRat) -> BinaryForm {
        match &self.exact {
            Some(e) => BinaryForm::from_exact(e.iter().map(|x| x * c).collect()).expect("nonempty"),
            None => self.scale(c.to_c64()),
        }
    }

    pub fn pow(&self, e: u32) -> BinaryForm {
        let one = match self.exact {
            Some(_) => BinaryForm::from_exact(vec![GaussRat::one()]).expect("nonempty"),
            None => BinaryForm::from_complex(vec![Complex64::new(1.0, 0.0)]).expect("nonempty"),
        };
        (0..e).fold(one, |acc, _| acc.product(self))
    }

    /// `μ_p(f)`, using [`DEFAULT_ORDER_TOL`] for inexact data.
    pub fn vanishing_order(&self, p: &ProjPoint) -> Order {
        self.vanishing_order_tol(p, DEFAULT_ORDER_TOL)
    }

    /// `μ_p(f)`. Exact division when both the form and the point are exact;
    /// otherwise the first Taylor coefficient at `p` whose modulus exceeds
    /// `tol` times its componentwise magnitude.
    pub fn vanishing_order_tol(&self, p: &ProjPoint, tol: f64) -> Order {
        if self.is_zero() {
            return Order::Infinite;
        }
        if let (Some(e), Some((p0, p1))) = (&self.exact, p.exact_coords()) {
            if p1.is_zero() {
                let k = e.iter().take_while(|c| c.is_zero()).count();
                return Order::Finite(k as u32);
            }
            let t0 = p0.div(p1).expect("p1 nonzero");
            let poly = self.chart0_exact().expect("exact");
            return Order::Finite(poly.root_multiplicity(&t0).expect("nonzero form"));
        }
        let (p0, p1) = p.coords();
        let (asc, u) = if p1.norm() >= p0.norm() { (self.chart0(), p0 / p1) } else { (self.chart1(), p1 / p0) };
        let taylor = taylor_coefficients(&asc, u);
        let mags = taylor_magnitudes(&asc, u.norm());
        for (k, (t, m)) in taylor.iter().zip(&mags).enumerate() {
            if t.norm() > tol * m {
                return Order::Finite(k as u32);
            }
        }
        // every coefficient below threshold: numerically the zero form
        Order::Finite(self.degree() as u32)
    }

    /// All roots with multiplicities; backward errors are checked against `tol`.
    pub fn roots_with_multiplicity(&self, tol: f64) -> Result<Vec<Root>, FormError> {
        roots_with_options(self, &RootOptions { tol, ..RootOptions::default() })
    }
}

/// Taylor coefficients `f^(k)(u)/k!` of an ascending polynomial.
pub(crate) fn taylor_coefficients(asc: &[Complex64], u: Complex64) -> Vec<Complex64> {
    let mut work = asc.to_vec();
    let n = work.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // synthetic division of work[k..] by (t - u)
        for j in (k..n - 1).rev() {
            let carry = work[j + 1] * u;
            work[j] += carry;
        }
        out.push(work[k]);
    }
    out
}

/// `Σ_j |a_j| C(j,k) r^(j-k)` for every `k`, the componentwise size of the
/// `k`-th Taylor coefficient at a point of modulus `r`.
pub(crate) fn taylor_magnitudes(asc: &[Complex64], r: f64) -> Vec<f64> {
    let abs: Vec<Complex64> = asc.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect();
    taylor_coefficients(&abs, Complex64::new(r, 0.0)).into_iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_examples() {
        let x1_8 = BinaryForm::monomial_exact(8, 8, GaussRat::one());
        assert_eq!(x1_8.evaluate(&ProjPoint::infinity()), c(0.0, 0.0));

        let mut v = vec![GaussRat::zero(); 13];
        v[0] = GaussRat::one();
        v[12] = GaussRat::from_int(-1);
        let f = BinaryForm::from_exact(v).unwrap();
        assert_eq!(f.evaluate(&ProjPoint::affine(c(1.0, 0.0))), c(0.0, 0.0));

        // x0^2 + 3 x0 x1 at [2:1]
        let g = BinaryForm::from_exact(vec![GaussRat::one(), GaussRat::from_int(3), GaussRat::zero()]).unwrap();
        let p = ProjPoint::new(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        // normalised to [1 : 1/2], so the value is 10 / 2^2
        assert!((g.evaluate(&p) - c(2.5, 0.0)).norm() < 1e-15);
        assert!((g.evaluate_at(c(2.0, 0.0), c(1.0, 0.0)) - c(10.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn vanishing_orders() {
        let x1_8 = BinaryForm::monomial_exact(8, 8, GaussRat::one());
        assert_eq!(x1_8.vanishing_order(&ProjPoint::infinity()), Order::Finite(8));
        assert_eq!(x1_8.vanishing_order(&ProjPoint::exact_affine(GaussRat::one())), Order::Finite(0));
        assert_eq!(BinaryForm::zero(8).vanishing_order(&ProjPoint::infinity()), Order::Infinite);

        // (x0 - x1)^2 x1^22
        let f = BinaryForm::from_roots_exact(&[GaussRat::one(), GaussRat::one()])
            .product(&BinaryForm::monomial_exact(22, 22, GaussRat::one()));
        assert_eq!(f.vanishing_order(&ProjPoint::exact_affine(GaussRat::one())), Order::Finite(2));
        // numeric path agrees
        assert_eq!(f.vanishing_order(&ProjPoint::affine(c(1.0, 0.0))), Order::Finite(2));
        assert_eq!(f.vanishing_order(&ProjPoint::new(c(1.0, 0.0), c(0.0, 0.0)).unwrap()), Order::Finite(22));
    }

    #[test]
    fn product_examples() {
        let f = BinaryForm::from_roots(&[c(0.3, 0.1)]);
        let z = BinaryForm::zero(5);
        let p = f.product(&z);
        assert_eq!(p.degree(), 6);
        assert!(p.coeffs().iter().all(|x| x.norm() == 0.0));
        assert!(!p.is_exact());

        let a = GaussRat::ratio(3, 2);
        let d = BinaryForm::from_roots_exact(&[a.clone(), -&a]);
        assert_eq!(d.exact_coeffs().unwrap(), &[GaussRat::one(), GaussRat::zero(), GaussRat::ratio(-9, 4)]);

        let roots: Vec<Complex64> = (1..=12).map(|n| Complex64::from_polar(1.0, std::f64::consts::PI * n as f64 / 6.0)).collect();
        let cyc = BinaryForm::from_roots(&roots);
        for (i, x) in cyc.coeffs().iter().enumerate() {
            let expect = match i {
                0 => 1.0,
                12 => -1.0,
                _ => 0.0,
            };
            assert!((x - c(expect, 0.0)).norm() < 1e-13, "coefficient {i} = {x}");
        }
    }

    #[test]
    fn sum_requires_same_degree() {
        let a = BinaryForm::zero(3);
        let b = BinaryForm::zero(4);
        assert_eq!(a.sum(&b), Err(FormError::DegreeMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn order_arithmetic() {
        assert!(Order::Infinite > Order::Finite(100));
        assert!(Order::Infinite.at_least(4));
        assert_eq!(Order::Finite(2) + Order::Finite(3), Order::Finite(5));
        assert_eq!(Order::Finite(2) + Order::Infinite, Order::Infinite);
    }

    #[test]
    fn taylor_shift() {
        // (t-2)^2 = 4 - 4t + t^2 at u = 2 -> [0, 0, 1]
        let t = taylor_coefficients(&[c(4.0, 0.0), c(-4.0, 0.0), c(1.0, 0.0)], c(2.0, 0.0));
        assert_eq!(t, vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }
}
