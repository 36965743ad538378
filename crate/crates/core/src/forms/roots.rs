//! Simultaneous (Aberth–Ehrlich) root iteration with inclusion-disc clustering.

use num_complex::Complex64;

use super::{BinaryForm, FormError, ProjPoint};
use crate::exact::ExactPoly;

const EPS: f64 = f64::EPSILON;

/// One root of a binary form.
#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub point: ProjPoint,
    pub multiplicity: u32,
    /// `|f(z)| / Σ|c_i||z|^i` in the chart where the root is finite.
    pub backward_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootOptions {
    /// Maximum accepted relative backward error per reported root.
    pub tol: f64,
    /// Approximations closer than this (relative to `max(1, |z|)`) are merged.
    pub cluster_radius: f64,
    pub max_iter: usize,
    /// Absolute uncertainty of each coefficient, ascending for
    /// [`polynomial_roots`] and in form order for [`roots_with_options`],
    /// where it defaults to the bound the form carries.
    pub coeff_noise: Option<Vec<f64>>,
    /// The roots are known to be distinct (an exact squarefree factor): no
    /// clustering, every approximation is polished as a simple root.
    pub simple: bool,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { tol: 1e-8, cluster_radius: 1e-6, max_iter: 2000, coeff_noise: None, simple: false }
    }
}

pub(crate) fn horner(asc: &[Complex64], z: Complex64) -> Complex64 {
    asc.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn abs_horner(asc: &[Complex64], r: f64) -> f64 {
    asc.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// Normwise backward error `|p(z)| / (max_k |a_k| · Σ_k |z|^k)`.
pub(crate) fn backward_error(asc: &[Complex64], z: Complex64) -> f64 {
    let norm = asc.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if norm == 0.0 {
        return 0.0;
    }
    let r = z.norm();
    if r > 1.0 {
        let rev: Vec<Complex64> = asc.iter().rev().copied().collect();
        let y = z.inv();
        let powers: f64 = (0..asc.len()).map(|k| y.norm().powi(k as i32)).sum();
        horner(&rev, y).norm() / (norm * powers)
    } else {
        let powers: f64 = (0..asc.len()).map(|k| r.powi(k as i32)).sum();
        horner(asc, z).norm() / (norm * powers)
    }
}

/// Componentwise backward error `|p(z)| / Σ|a_k||z|^k`.
pub(crate) fn componentwise_backward_error(asc: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    if r > 1.0 {
        // evaluate the reversal at 1/z to stay in range
        let rev: Vec<Complex64> = asc.iter().rev().copied().collect();
        let y = z.inv();
        let den = abs_horner(&rev, y.norm());
        if den == 0.0 {
            return 0.0;
        }
        horner(&rev, y).norm() / den
    } else {
        let den = abs_horner(asc, r);
        if den == 0.0 {
            return 0.0;
        }
        horner(asc, z).norm() / den
    }
}

/// Newton correction `p(z)/p'(z)`, evaluated through the reversed polynomial
/// outside the unit disc. Also returns the backward error at `z`.
fn newton_ratio(asc: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let n = asc.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in asc.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        let den = abs_horner(asc, z.norm());
        let be = if den == 0.0 { 0.0 } else { p.norm() / den };
        (if p == Complex64::new(0.0, 0.0) { p } else { p / dp }, be)
    } else {
        let y = z.inv();
        let mut q = Complex64::new(0.0, 0.0);
        let mut dq = Complex64::new(0.0, 0.0);
        // q(y) = Σ a_k y^(n-k): ascending coefficients of q are asc reversed
        for c in asc.iter() {
            dq = dq * y + q;
            q = q * y + c;
        }
        let den = asc.iter().fold(0.0, |acc, c| acc * y.norm() + c.norm());
        let be = if den == 0.0 { 0.0 } else { q.norm() / den };
        if q == Complex64::new(0.0, 0.0) {
            return (q, be);
        }
        (z * q / (q * n as f64 - y * dq), be)
    }
}

/// Aberth iteration on a polynomial with nonzero leading and constant terms.
/// Returns the approximations and whether every one reached rounding level.
pub(crate) fn aberth(asc: &[Complex64], init: Option<&[Complex64]>, max_iter: usize) -> (Vec<Complex64>, bool) {
    let n = asc.len() - 1;
    if n == 0 {
        return (Vec::new(), true);
    }
    let lead = asc[n];
    if n == 1 {
        return (vec![-asc[0] / lead], true);
    }
    let mut z: Vec<Complex64> = match init {
        Some(v) if v.len() == n => v.to_vec(),
        _ => initial_guesses(asc),
    };
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, be) = newton_ratio(asc, z[i]);
            if be <= 4.0 * (n as f64) * EPS {
                done[i] = true;
                continue;
            }
            all = false;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).filter(|v| v.is_finite()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                if w.norm() <= EPS * z[i].norm() {
                    done[i] = true;
                }
            } else {
                let bump = Complex64::new(1e-3, 1e-3) * (1.0 + z[i].norm());
                z[i] += bump;
            }
        }
        if all {
            return (z, true);
        }
    }
    let ok = done.iter().all(|&d| d);
    (z, ok)
}

fn initial_guesses(asc: &[Complex64]) -> Vec<Complex64> {
    let n = asc.len() - 1;
    let r = (asc[0].norm() / asc[n].norm()).powf(1.0 / n as f64);
    let r = if r.is_finite() && r > 0.0 { r } else { 1.0 };
    (0..n)
        .map(|k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect()
}

/// Groups approximations whose inclusion discs overlap or that lie within the
/// clustering radius; returns centroid and multiplicity per group.
fn cluster(asc: &[Complex64], z: &[Complex64], radius: f64, noise: Option<&[f64]>) -> Vec<(Complex64, u32)> {
    let n = z.len();
    let lead = asc[asc.len() - 1].norm();
    let rad: Vec<f64> = (0..n)
        .map(|i| {
            let zi = z[i];
            let mut err = 4.0 * (n as f64) * EPS * abs_horner(asc, zi.norm());
            if let Some(u) = noise {
                err += u.iter().rev().fold(0.0, |acc, c| acc * zi.norm() + c);
            }
            let num = n as f64 * (horner(asc, zi).norm() + err);
            let den: f64 = (0..n).filter(|&j| j != i).map(|j| (zi - z[j]).norm()).filter(|d| *d > 0.0).product();
            let r = num / (lead * den);
            if r.is_finite() {
                r
            } else {
                0.0
            }
        })
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut k = i;
        while p[k] != r {
            let next = p[k];
            p[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = (z[i] - z[j]).norm();
            let scale = z[i].norm().max(z[j].norm()).max(1.0);
            if d <= rad[i] + rad[j] || d <= radius * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    let mut out = Vec::new();
    for (_, g) in groups {
        for part in split_group(asc, z, g, radius, noise) {
            let c = part.iter().map(|&i| z[i]).sum::<Complex64>() / part.len() as f64;
            let m = part.len() as u32;
            out.push((polish(asc, c, m), m));
        }
    }
    out
}

/// Overlapping discs only say the roots are unresolved. A group is kept
/// whole if it behaves like a multiple root; otherwise the largest
/// neighbourhood of some member that does is peeled off, and so on.
fn split_group(asc: &[Complex64], z: &[Complex64], mut g: Vec<usize>, radius: f64, noise: Option<&[f64]>) -> Vec<Vec<usize>> {
    let pts = |idx: &[usize]| idx.iter().map(|&k| z[k]).collect::<Vec<_>>();
    let tight = |idx: &[usize]| {
        let c = idx.iter().map(|&k| z[k]).sum::<Complex64>() / idx.len() as f64;
        idx.iter().all(|&k| (z[k] - c).norm() <= radius * c.norm().max(1.0))
    };
    let mut parts = Vec::new();
    while !g.is_empty() {
        if g.len() == 1 || tight(&g) || is_multiple_root(asc, &pts(&g), noise) {
            parts.push(g);
            break;
        }
        let mut best: Vec<usize> = vec![g[0]];
        for &centre in &g {
            let mut near = g.clone();
            near.sort_by(|&a, &b| (z[a] - z[centre]).norm().total_cmp(&(z[b] - z[centre]).norm()));
            for m in (best.len() + 1..g.len()).rev() {
                if tight(&near[..m]) || is_multiple_root(asc, &pts(&near[..m]), noise) {
                    best = near[..m].to_vec();
                    break;
                }
            }
        }
        g.retain(|k| !best.contains(k));
        parts.push(best);
    }
    parts
}

/// Whether the centroid of `pts` is an `m`-fold root up to rounding: its
/// Taylor coefficients of order below `m` must vanish to within the error of
/// the coefficients propagated to the centroid.
fn is_multiple_root(asc: &[Complex64], pts: &[Complex64], noise: Option<&[f64]>) -> bool {
    let m = pts.len();
    let n = asc.len() - 1;
    let c = newton_on_derivative(asc, pts.iter().sum::<Complex64>() / m as f64, m as u32);
    let r = c.norm();
    let err: Vec<f64> = (0..=n)
        .map(|j| 8.0 * (n as f64) * EPS * asc[j].norm() + noise.and_then(|u| u.get(j)).copied().unwrap_or(0.0))
        .collect();
    let mut taylor = asc.to_vec();
    let mut bound = err;
    let mut e0 = 0.0;
    for k in 0..m {
        let t = horner(&taylor, c).norm();
        let e = bound.iter().rev().fold(0.0, |acc, b| acc * r + b);
        if k == 0 {
            e0 = e;
        }
        if t > 16.0 * e {
            return false;
        }
        // next Taylor coefficient: derivative divided by k + 1
        taylor = derivative(&taylor).into_iter().map(|x| x / (k + 1) as f64).collect();
        bound = bound.iter().enumerate().skip(1).map(|(j, b)| b * j as f64 / (k + 1) as f64).collect();
        if taylor.is_empty() {
            return false;
        }
    }
    // multiplicity exactly m
    let tm = horner(&taylor, c).norm();
    if tm <= 16.0 * bound.iter().rev().fold(0.0, |acc, b| acc * r + b) {
        return false;
    }
    // an m-fold root moves by about (e / |T_m|)^(1/m) under the given error
    let spread = (16.0 * e0 / tm).powf(1.0 / m as f64);
    // members of a true cluster are ill-conditioned: moving one to the centre
    // changes p by no more than the noise
    let d1 = derivative(asc);
    pts.iter().all(|z| (z - c).norm() <= 4.0 * spread && horner(&d1, *z).norm() * (z - c).norm() <= 64.0 * m as f64 * e0)
}

fn derivative(asc: &[Complex64]) -> Vec<Complex64> {
    asc.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

/// Newton on the `(m-1)`-th derivative, where an `m`-fold root is simple.
fn newton_on_derivative(asc: &[Complex64], c: Complex64, m: u32) -> Complex64 {
    let mut d = asc.to_vec();
    for _ in 1..m {
        d = derivative(&d);
    }
    if d.len() < 2 {
        return c;
    }
    let mut z = c;
    for _ in 0..32 {
        let (ratio, _) = newton_ratio(&d, z);
        if !ratio.is_finite() {
            return c;
        }
        z -= ratio;
        if ratio.norm() <= EPS * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// [`newton_on_derivative`], kept only if it does not worsen the backward
/// error of the polynomial itself.
fn polish(asc: &[Complex64], c: Complex64, m: u32) -> Complex64 {
    let z = newton_on_derivative(asc, c, m);
    if z.is_finite() && componentwise_backward_error(asc, z) <= componentwise_backward_error(asc, c) {
        z
    } else {
        c
    }
}

/// Roots of an ascending affine polynomial with multiplicities and backward
/// errors. Exact zero roots and a vanishing leading part are handled before
/// iterating.
pub fn polynomial_roots(asc: &[Complex64], opts: &RootOptions) -> Result<Vec<(Complex64, u32, f64)>, FormError> {
    let mut p: Vec<Complex64> = asc.to_vec();
    while p.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
        p.pop();
    }
    if p.is_empty() {
        return Err(FormError::ZeroForm);
    }
    let zeros = p.iter().take_while(|c| **c == Complex64::new(0.0, 0.0)).count();
    let core = &p[zeros..];
    let noise = opts.coeff_noise.as_ref().map(|u| u[zeros.min(u.len())..u.len().min(p.len())].to_vec());
    let mut out = Vec::new();
    if zeros > 0 {
        out.push((Complex64::new(0.0, 0.0), zeros as u32, 0.0));
    }
    if core.len() > 1 {
        let (z, _) = aberth(core, None, opts.max_iter);
        let found = if opts.simple { z.iter().map(|&c| (polish(core, c, 1), 1)).collect() } else { cluster(core, &z, opts.cluster_radius, noise.as_deref()) };
        for (c, m) in found {
            let be = backward_error(&p, c);
            // an exact zero root that the cluster also caught
            if zeros > 0 && c.norm() <= opts.cluster_radius {
                out[0].1 += m;
                continue;
            }
            out.push((c, m, be));
        }
    }
    let worst = out.iter().map(|r| r.2).fold(0.0, f64::max);
    if worst >= opts.tol || worst.is_nan() {
        return Err(FormError::NoConvergence { worst });
    }
    Ok(out)
}

/// Roots of a binary form. Exact forms are first split into squarefree
/// factors by exact arithmetic, so each factor's roots are simple.
pub fn roots_with_options(f: &BinaryForm, opts: &RootOptions) -> Result<Vec<Root>, FormError> {
    if f.is_zero() {
        return Err(FormError::ZeroForm);
    }
    let d = f.degree();
    let norm = f.max_coeff();
    let at_inf = match f.exact_coeffs() {
        Some(e) => e.iter().take_while(|c| c.is_zero()).count(),
        None => f.coeffs().iter().take_while(|c| c.norm() <= 1e-14 * norm).count(),
    };
    let mut out = Vec::new();
    if at_inf > 0 {
        out.push(Root { point: ProjPoint::infinity(), multiplicity: at_inf as u32, backward_error: 0.0 });
    }
    if at_inf == d {
        return Ok(out);
    }
    let full = f.chart0();
    let affine: Vec<Complex64> = full[..=d - at_inf].to_vec();
    match f.chart0_exact() {
        Some(exact) => {
            for (k, factor) in ExactPoly::squarefree_decomposition(&exact) {
                let simple = polynomial_roots(&factor.to_c64(), &RootOptions { coeff_noise: None, simple: true, ..opts.clone() })?;
                for (z, m, _) in simple {
                    out.push(Root { point: ProjPoint::affine(z), multiplicity: m * k, backward_error: backward_error(&affine, z) });
                }
            }
            let worst = out.iter().map(|r| r.backward_error).fold(0.0, f64::max);
            if worst >= opts.tol {
                return Err(FormError::NoConvergence { worst });
            }
        }
        None => {
            let noise = opts.coeff_noise.as_deref().or(f.noise());
            let opts = RootOptions { coeff_noise: noise.map(|u| u.iter().rev().take(affine.len()).copied().collect()), ..opts.clone() };
            for (z, m, be) in polynomial_roots(&affine, &opts)? {
                out.push(Root { point: ProjPoint::affine(z), multiplicity: m, backward_error: be });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussRat;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn twelfth_roots_of_unity() {
        let mut v = vec![c(0.0, 0.0); 13];
        v[0] = c(1.0, 0.0);
        v[12] = c(-1.0, 0.0);
        let f = BinaryForm::from_complex(v).unwrap();
        let roots = f.roots_with_multiplicity(1e-10).unwrap();
        assert_eq!(roots.len(), 12);
        for n in 1..=12 {
            let target = Complex64::from_polar(1.0, std::f64::consts::PI * n as f64 / 6.0);
            let hit = roots.iter().filter(|r| (r.point.affine_coordinate().unwrap() - target).norm() < 1e-12).count();
            assert_eq!(hit, 1, "root {n}");
        }
        assert!(roots.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn pure_power_at_infinity() {
        let f = BinaryForm::monomial(24, 24, c(2.0, 0.0));
        let roots = f.roots_with_multiplicity(1e-8).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].point.is_infinity());
        assert_eq!(roots[0].multiplicity, 24);
    }

    #[test]
    fn squared_form_gives_double_roots() {
        let roots: Vec<Complex64> = (1..=12).map(|n| Complex64::from_polar(1.0, std::f64::consts::PI * n as f64 / 6.0)).collect();
        let b = BinaryForm::from_roots(&roots);
        let delta = b.product(&b).scale(c(-432.0, 0.0));
        let found = delta.roots_with_multiplicity(1e-8).unwrap();
        assert_eq!(found.len(), 12);
        assert!(found.iter().all(|r| r.multiplicity == 2));
    }

    #[test]
    fn zero_form_is_an_error() {
        assert_eq!(BinaryForm::zero(4).roots_with_multiplicity(1e-8), Err(FormError::ZeroForm));
    }

    #[test]
    fn exact_path_uses_squarefree_split() {
        // (x0 - x1)^3 (x0 + 2 x1) x1^2
        let one = GaussRat::one();
        let f = BinaryForm::from_roots_exact(&[one.clone(), one.clone(), one, GaussRat::from_int(-2)])
            .product(&BinaryForm::monomial_exact(2, 2, GaussRat::one()));
        let roots = f.roots_with_multiplicity(1e-10).unwrap();
        let total: u32 = roots.iter().map(|r| r.multiplicity).sum();
        assert_eq!(total, 6);
        let at_one = roots.iter().find(|r| r.point.affine_coordinate().is_some_and(|t| (t - c(1.0, 0.0)).norm() < 1e-12)).unwrap();
        assert_eq!(at_one.multiplicity, 3);
        assert!(roots.iter().any(|r| r.point.is_infinity() && r.multiplicity == 2));
    }
}
