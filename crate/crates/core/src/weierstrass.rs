//! Weierstrass data `(A, B)` of degrees `(8, 12)` over the projective line:
//! the fibration `y²z = x³ + A x z² + B z³`.

use std::sync::OnceLock;

use num_complex::Complex64;
use thiserror::Error;

use crate::exact::{ExactPoly, GaussRat};
use crate::forms::{self, BinaryForm, FormError, Order, ProjPoint, RootOptions};

/// Relative residual below which `Δ(p)` counts as zero for the probe.
const ROOT_CHECK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeierstrassError {
    #[error("A must have degree 8, found {0}")]
    DegreeA(usize),
    #[error("B must have degree 12, found {0}")]
    DegreeB(usize),
    #[error("the discriminant -16(4A^3 + 27B^2) vanishes identically")]
    ZeroDiscriminant,
    #[error("Δ does not vanish at the point (relative residual {0:.3e})")]
    NotSingularFibre(f64),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// `-16(4A³ + 27B²)`, exact when both inputs are. For inexact data the
/// result counts as zero when every coefficient is within its rounding bound.
pub fn discriminant(a: &BinaryForm, b: &BinaryForm) -> Result<BinaryForm, WeierstrassError> {
    let cube = a.pow(3).scale_exact(&GaussRat::from_int(4));
    let square = b.pow(2).scale_exact(&GaussRat::from_int(27));
    let delta = cube.sum(&square)?.scale_exact(&GaussRat::from_int(-16));
    let cancelled = match delta.noise() {
        Some(noise) => delta.coeffs().iter().zip(noise).all(|(c, n)| c.norm() <= *n),
        None => delta.is_zero(),
    };
    if cancelled {
        return Err(WeierstrassError::ZeroDiscriminant);
    }
    Ok(delta)
}

/// A root of `Δ` with the vanishing orders of `A`, `B` and `Δ` there.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPoint {
    pub point: ProjPoint,
    pub a_order: Order,
    pub b_order: Order,
    pub d_order: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalityReport {
    pub minimal: bool,
    pub violations: Vec<ProjPoint>,
}

/// Outcome of the partial-derivative test at a singular fibre.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub smooth: bool,
    /// `∂f/∂u = A'(u) x + B'(u)` at the singular point of the fibre.
    pub value: Complex64,
    /// `|value|` over `|A'(u) x| + |B'(u)|`.
    pub relative: f64,
    /// Chart used (0: `u = x0/x1`, 1: `u = x1/x0`) and the coordinates found.
    pub chart: u8,
    pub u: Complex64,
    pub x: Complex64,
}

#[derive(Debug, Clone)]
pub struct WeierstrassData {
    a: BinaryForm,
    b: BinaryForm,
    delta: BinaryForm,
    /// Per chart: roots of the squarefree part of `Δ`, and the roots over
    /// which the surface is singular (exact data only).
    singular_roots: [OnceLock<Option<SingularRoots>>; 2],
}

#[derive(Debug, Clone)]
struct SingularRoots {
    roots: Vec<Complex64>,
    singular: Vec<usize>,
}

impl PartialEq for WeierstrassData {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl WeierstrassData {
    pub fn new(a: BinaryForm, b: BinaryForm) -> Result<Self, WeierstrassError> {
        if a.degree() != 8 {
            return Err(WeierstrassError::DegreeA(a.degree()));
        }
        if b.degree() != 12 {
            return Err(WeierstrassError::DegreeB(b.degree()));
        }
        let delta = discriminant(&a, &b)?;
        Ok(Self { a, b, delta, singular_roots: Default::default() })
    }

    pub fn a(&self) -> &BinaryForm {
        &self.a
    }

    pub fn b(&self) -> &BinaryForm {
        &self.b
    }

    pub fn discriminant(&self) -> &BinaryForm {
        &self.delta
    }

    pub fn is_exact(&self) -> bool {
        self.a.is_exact() && self.b.is_exact()
    }

    /// Roots of `Δ` with multiplicities, clustered at the resolution its
    /// accumulated rounding allows.
    pub fn discriminant_roots(&self) -> Result<Vec<forms::Root>, FormError> {
        self.delta.roots_with_multiplicity(1e-8)
    }

    /// Every root of `Δ` with `(μ(A), μ(B), μ(Δ))`. For exact data the orders
    /// come from an exact stratification by squarefree parts and gcds, and only
    /// the final (simple) roots are located numerically.
    pub fn singular_points(&self) -> Result<Vec<SingularPoint>, WeierstrassError> {
        let mut pts = if self.is_exact() { self.exact_strata()? } else { self.numeric_strata()? };
        pts.sort_by(|x, y| {
            let key = |p: &SingularPoint| p.point.affine_coordinate().map(|t| (0, t.re, t.im)).unwrap_or((1, 0.0, 0.0));
            let (a, b) = (key(x), key(y));
            a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2))
        });
        Ok(pts)
    }

    fn numeric_strata(&self) -> Result<Vec<SingularPoint>, WeierstrassError> {
        let roots = self.discriminant_roots()?;
        Ok(roots
            .into_iter()
            .map(|r| SingularPoint {
                a_order: self.a.vanishing_order(&r.point),
                b_order: self.b.vanishing_order(&r.point),
                d_order: r.multiplicity,
                point: r.point,
            })
            .collect())
    }

    fn exact_strata(&self) -> Result<Vec<SingularPoint>, WeierstrassError> {
        let mut out = Vec::new();
        let inf = ProjPoint::infinity();
        if let Order::Finite(d) = self.delta.vanishing_order(&inf) {
            if d > 0 {
                out.push(SingularPoint { a_order: self.a.vanishing_order(&inf), b_order: self.b.vanishing_order(&inf), d_order: d, point: inf });
            }
        }
        let delta = self.delta.chart0_exact().expect("exact");
        let a_parts = squarefree_or_infinite(&self.a);
        let b_parts = squarefree_or_infinite(&self.b);
        for (k, factor) in delta.squarefree_decomposition() {
            for (piece_a, a_order) in split_by(&factor, &a_parts) {
                for (piece, b_order) in split_by(&piece_a, &b_parts) {
                    let opts = RootOptions { simple: true, ..RootOptions::default() };
                    for (z, m, _) in forms::polynomial_roots(&piece.to_c64(), &opts)? {
                        debug_assert_eq!(m, 1);
                        out.push(SingularPoint { point: ProjPoint::affine(z), a_order, b_order, d_order: k });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Minimality: at every root of `Δ`, `μ(A) ≤ 3` or `μ(B) ≤ 5`.
    pub fn check_minimal(&self) -> Result<MinimalityReport, WeierstrassError> {
        let violations: Vec<ProjPoint> = self
            .singular_points()?
            .into_iter()
            .filter(|s| s.a_order.at_least(4) && s.b_order.at_least(6))
            .map(|s| s.point)
            .collect();
        Ok(MinimalityReport { minimal: violations.is_empty(), violations })
    }

    /// Whether the total space is smooth at the singular point of the fibre
    /// over `p` (which must be a root of `Δ`).
    pub fn smoothness_probe(&self, p: &ProjPoint, tol: f64) -> Result<bool, WeierstrassError> {
        self.probe_detail(p, tol).map(|r| r.smooth)
    }

    pub fn probe_detail(&self, p: &ProjPoint, tol: f64) -> Result<ProbeResult, WeierstrassError> {
        let (p0, p1) = p.coords();
        let (chart, u) = if p1.norm() >= p0.norm() { (0u8, p0 / p1) } else { (1u8, p1 / p0) };
        let pick = |f: &BinaryForm| if chart == 0 { f.chart0() } else { f.chart1() };
        let delta = pick(&self.delta);
        let residual = forms::backward_error(&delta, u);
        if residual > ROOT_CHECK {
            return Err(WeierstrassError::NotSingularFibre(residual));
        }
        let (a, b) = (pick(&self.a), pick(&self.b));
        let (da, db) = (deriv(&a), deriv(&b));
        let (dda, ddb) = (deriv(&da), deriv(&db));
        let h = |f: &[Complex64]| forms::horner(f, u);
        let r = u.norm();
        // rounding of an evaluation, plus the form's own uncertainty
        let noise = |f: &BinaryForm| -> f64 {
            f.noise().map_or(0.0, |e| {
                let e: Vec<f64> = if chart == 0 { e.iter().rev().copied().collect() } else { e.to_vec() };
                e.iter().rev().fold(0.0, |acc, x| acc * r + x)
            })
        };
        let rounding = |f: &[Complex64]| 8.0 * f.len() as f64 * f64::EPSILON * magnitude(f, r);
        let chart_noise = self.delta.noise().map(|e| if chart == 0 { e.iter().rev().copied().collect() } else { e.to_vec() });
        let du = location_uncertainty(&delta, chart_noise.as_deref(), u);
        let (av, bv, dav, dbv) = (h(&a), h(&b), h(&da), h(&db));
        let err_a = rounding(&a) + noise(&self.a) + dav.norm() * du;
        let err_b = rounding(&b) + noise(&self.b) + dbv.norm() * du;
        let zero = Complex64::new(0.0, 0.0);
        // A(p) = 0 forces B(p) = 0 on Δ = 0, and the singular point is x = 0
        let (x, dx, err_x) = if av.norm() <= 4.0 * err_a {
            (zero, zero, 0.0)
        } else {
            let x = -3.0 * bv / (2.0 * av);
            let dx = -3.0 * (dbv * av - bv * dav) / (2.0 * av * av);
            (x, dx, x.norm() * (err_a / av.norm() + err_b / bv.norm().max(f64::MIN_POSITIVE)).min(1.0))
        };
        let value = dav * x + dbv;
        let local = dav.norm() * x.norm() + dbv.norm();
        let slope = (h(&dda) * x + dav * dx + h(&ddb)).norm();
        let err = rounding(&da) * x.norm() + rounding(&db) + dav.norm() * err_x + slope * du;
        let relative = if local > 0.0 { value.norm() / local } else { 0.0 };
        let smooth = match self.exact_probe(chart, u) {
            Some(s) => s,
            None => value.norm() > (tol * local).max(4.0 * err),
        };
        Ok(ProbeResult { smooth, value, relative, chart, u, x })
    }

    /// Exact form of the probe: on the squarefree part `D` of `Δ`, the
    /// surface is singular over roots of `gcd(D / G, 2AB' - 3A'B)` (where
    /// `x = -3B/2A`) and of `gcd(G, B')` (where `A = B = 0`, `x = 0`), with
    /// `G = gcd(D, A)`. Only the choice of root nearest `u` is numeric.
    fn exact_probe(&self, chart: u8, u: Complex64) -> Option<bool> {
        if !self.is_exact() {
            return None;
        }
        let sr = self.singular_roots[chart as usize].get_or_init(|| self.exact_singular_roots(chart)).as_ref()?;
        let here = (0..sr.roots.len()).min_by(|&i, &j| (sr.roots[i] - u).norm().total_cmp(&(sr.roots[j] - u).norm()))?;
        Some(!sr.singular.contains(&here))
    }

    fn exact_singular_roots(&self, chart: u8) -> Option<SingularRoots> {
        let pick = |f: &BinaryForm| if chart == 0 { f.chart0_exact() } else { f.chart1_exact() };
        let (a, b, d) = (pick(&self.a)?, pick(&self.b)?, pick(&self.delta)?);
        let reduced = d.div_exact(&d.gcd(&d.derivative()))?;
        if reduced.degree()? == 0 {
            return None;
        }
        let on_a = reduced.gcd(&a);
        let rest = reduced.div_exact(&on_a)?;
        let int = |n: i64| ExactPoly::new(vec![GaussRat::from_int(n)]);
        let w = int(2).mul(&a).mul(&b.derivative()).sub(&int(3).mul(&a.derivative()).mul(&b));
        let bad = rest.gcd(&w).mul(&on_a.gcd(&b.derivative()));
        let opts = RootOptions { simple: true, ..RootOptions::default() };
        let roots: Vec<Complex64> = forms::polynomial_roots(&reduced.to_c64(), &opts).ok()?.into_iter().map(|r| r.0).collect();
        let nearest = |z: Complex64| (0..roots.len()).min_by(|&i, &j| (roots[i] - z).norm().total_cmp(&(roots[j] - z).norm()));
        let singular = if bad.degree()? == 0 {
            Vec::new()
        } else {
            forms::polynomial_roots(&bad.to_c64(), &opts).ok()?.into_iter().map(|r| nearest(r.0)).collect::<Option<Vec<_>>>()?
        };
        Some(SingularRoots { roots, singular })
    }

    pub fn chart_equations(&self) -> (ChartEquation, ChartEquation) {
        (
            ChartEquation { chart: 0, a: self.a.chart0(), b: self.b.chart0() },
            ChartEquation { chart: 1, a: self.a.chart1(), b: self.b.chart1() },
        )
    }
}

fn deriv(asc: &[Complex64]) -> Vec<Complex64> {
    asc.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

/// How far `u` may sit from the root of `delta` it approximates. With `m`
/// the first Taylor order at `u` clearly above rounding,
/// `|u - root| ≲ |T_{m-1}| / |T_m|`.
fn location_uncertainty(delta: &[Complex64], noise: Option<&[f64]>, u: Complex64) -> f64 {
    let r = u.norm();
    let floor = 16.0 * f64::EPSILON * r.max(1.0);
    let t = forms::taylor_coefficients(delta, u);
    let mag = forms::taylor_magnitudes(delta, r);
    let noise_t = noise.map(|e| {
        let e: Vec<Complex64> = e.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        forms::taylor_coefficients(&e, Complex64::new(r, 0.0)).into_iter().map(|c| c.re).collect::<Vec<_>>()
    });
    let err = |k: usize| 8.0 * delta.len() as f64 * f64::EPSILON * mag[k] + noise_t.as_ref().map_or(0.0, |e| e[k]);
    for m in 1..t.len() {
        if t[m].norm() > 64.0 * err(m) {
            return ((t[m - 1].norm() + err(m - 1)) / t[m].norm()).max(floor);
        }
    }
    floor
}

fn magnitude(asc: &[Complex64], r: f64) -> f64 {
    asc.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// Squarefree parts `(order, factor)` of the affine part of an exact form, or
/// `None` for the zero form.
fn squarefree_or_infinite(f: &BinaryForm) -> Option<Vec<(u32, ExactPoly)>> {
    if f.is_zero() {
        None
    } else {
        Some(f.chart0_exact().expect("exact").squarefree_decomposition())
    }
}

/// Splits a squarefree polynomial by the order of a second polynomial at its
/// roots.
fn split_by(piece: &ExactPoly, parts: &Option<Vec<(u32, ExactPoly)>>) -> Vec<(ExactPoly, Order)> {
    let Some(parts) = parts else {
        return vec![(piece.clone(), Order::Infinite)];
    };
    let mut rest = piece.monic();
    let mut out = Vec::new();
    for (j, fj) in parts {
        let g = rest.gcd(fj);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.div_exact(&g).expect("gcd divides");
            out.push((g, Order::Finite(*j)));
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push((rest, Order::Finite(0)));
    }
    out
}

/// `y²z − x³ − A_c(u) x z² − B_c(u) z³` on one affine chart of the base.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartEquation {
    pub chart: u8,
    /// Ascending coefficients of `A_c`.
    pub a: Vec<Complex64>,
    /// Ascending coefficients of `B_c`.
    pub b: Vec<Complex64>,
}

impl ChartEquation {
    pub fn eval(&self, u: Complex64, x: Complex64, y: Complex64, z: Complex64) -> Complex64 {
        let a = forms::horner(&self.a, u);
        let b = forms::horner(&self.b, u);
        y * y * z - x * x * x - a * x * z * z - b * z * z * z
    }

    /// `[∂/∂u, ∂/∂x, ∂/∂y, ∂/∂z]`.
    pub fn gradient(&self, u: Complex64, x: Complex64, y: Complex64, z: Complex64) -> [Complex64; 4] {
        let a = forms::horner(&self.a, u);
        let b = forms::horner(&self.b, u);
        let da = forms::horner(&deriv(&self.a), u);
        let db = forms::horner(&deriv(&self.b), u);
        [
            -(da * x * z * z) - db * z * z * z,
            -3.0 * x * x - a * z * z,
            2.0 * y * z,
            y * y - 2.0 * a * x * z - 3.0 * b * z * z,
        ]
    }

    /// Gluing map from chart 0 to chart 1: `(1/u, x/u⁴, y/u⁶, z)`.
    pub fn transport(u: Complex64, x: Complex64, y: Complex64, z: Complex64) -> Option<[Complex64; 4]> {
        if u.norm() == 0.0 {
            return None;
        }
        Some([u.inv(), x / u.powi(4), y / u.powi(6), z])
    }
}
