//! Per-sample checks and sample-to-sample continuity.

use num_complex::Complex64;

use super::{Endpoint, FibreSample, ModuliPathSample, PathReport, Violation, ViolationKind};
use crate::families::{validate_family, FamilyParams, FamilyPattern};
use crate::forms::horner;

/// Tolerance for matching a listed fibre to a root of `Δ`.
const ROOT_MATCH: f64 = 1e-6;
/// Endpoints must agree to this.
const ENDPOINT_TOL: f64 = 1e-8;

pub(crate) fn separation(fibres: &[FibreSample]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..fibres.len() {
        for j in i + 1..fibres.len() {
            d = d.min((fibres[i].pos - fibres[j].pos).norm());
        }
    }
    d
}

fn nearest(p: Complex64, pts: &[Complex64]) -> (usize, f64) {
    pts.iter().enumerate().map(|(i, q)| (i, (p - q).norm())).min_by(|x, y| x.1.total_cmp(&y.1)).unwrap_or((usize::MAX, f64::INFINITY))
}

/// Sends each point of the larger set to its nearest neighbour in the
/// smaller; returns the map (indices into the smaller) and the largest
/// distance travelled. `swapped` tells whether `x` was the smaller set.
fn pair(x: &[Complex64], y: &[Complex64]) -> (Vec<usize>, f64, bool) {
    let (big, small, swapped) = if x.len() >= y.len() { (x, y, false) } else { (y, x, true) };
    let mut map = Vec::with_capacity(big.len());
    let mut worst: f64 = 0.0;
    for p in big {
        let (i, d) = nearest(*p, small);
        map.push(i);
        worst = worst.max(d);
    }
    (map, worst, swapped)
}

fn is_injective(map: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    for &i in map {
        if i >= n || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// Parameter and fibre motion from one sample to the next.
fn displacement(s0: &ModuliPathSample, s1: &ModuliPathSample) -> f64 {
    let (_, da, _) = pair(&s0.a, &s1.a);
    let p0: Vec<Complex64> = s0.fibres.iter().map(|f| f.pos).collect();
    let p1: Vec<Complex64> = s1.fibres.iter().map(|f| f.pos).collect();
    let (_, df, _) = pair(&p0, &p1);
    (s1.k - s0.k).norm().max(da).max(df)
}

pub(crate) fn max_displacement(samples: &[ModuliPathSample]) -> f64 {
    samples.windows(2).map(|w| displacement(&w[0], &w[1])).fold(0.0, f64::max)
}

/// Inclusion discs about approximations `z_i` of all roots of `asc`: with
/// `r_i = n(|p(z_i)| + err_i) / (|lead| ∏_{j≠i} |z_i - z_j|)`, pairwise
/// disjoint discs each hold exactly one root. Returns the radii if they are
/// disjoint and within tolerance.
fn certify_simple_roots(asc: &[Complex64], noise: Option<&[f64]>, z: &[Complex64]) -> Option<Vec<f64>> {
    let n = asc.len() - 1;
    let lead = asc[n].norm();
    let lead_noise = noise.map_or(0.0, |e| e[n]);
    if n != z.len() || lead <= 2.0 * lead_noise {
        return None;
    }
    let mut radii = Vec::with_capacity(n);
    for (i, &zi) in z.iter().enumerate() {
        let r = zi.norm();
        let mut abs = 0.0;
        let mut err = 0.0;
        for (k, c) in asc.iter().enumerate().rev() {
            abs = abs * r + c.norm();
            err = err * r + noise.map_or(0.0, |e| e[k]);
        }
        err += 4.0 * n as f64 * f64::EPSILON * abs;
        let mut prod = lead - lead_noise;
        for (j, &zj) in z.iter().enumerate() {
            if j != i {
                prod *= (zi - zj).norm();
            }
        }
        let ri = n as f64 * (horner(asc, zi).norm() + err) / prod;
        if !(ri <= ROOT_MATCH * r.max(1.0)) {
            return None;
        }
        radii.push(ri);
    }
    for i in 0..n {
        for j in i + 1..n {
            if radii[i] + radii[j] >= (z[i] - z[j]).norm() {
                return None;
            }
        }
    }
    Some(radii)
}

fn check_family(s: &ModuliPathSample) -> Result<(), String> {
    let params = FamilyParams { a: s.a.clone(), k: s.k };
    let w = params.build().map_err(|e| e.to_string())?;
    if !s.is_cuspidal() && s.fibres.iter().all(|f| f.mult == 1) {
        let delta = w.discriminant();
        let noise: Option<Vec<f64>> = delta.noise().map(|e| e.iter().rev().copied().collect());
        let pts: Vec<Complex64> = s.fibres.iter().map(|f| f.pos).collect();
        if certify_simple_roots(&delta.chart0(), noise.as_deref(), &pts).is_some() {
            return Ok(());
        }
    }
    let v = validate_family(&w);
    let (want, count, mult) = if s.is_cuspidal() { (FamilyPattern::Cuspidal, 12, 2) } else { (FamilyPattern::SmoothNodal, 24, 1) };
    if v.pattern != want {
        return Err(format!("expected {want:?}, found {:?}", v.pattern));
    }
    if s.fibres.len() != count {
        return Err(format!("{} fibres listed, {count} expected", s.fibres.len()));
    }
    let roots: Vec<(Complex64, u32)> = v.roots.iter().filter_map(|(p, m)| p.affine_coordinate().map(|z| (z, *m))).collect();
    if roots.len() != count {
        return Err(format!("Δ has {} finite roots, {count} expected", roots.len()));
    }
    let pts: Vec<Complex64> = roots.iter().map(|r| r.0).collect();
    let (map, _, _) = pair(&s.fibres.iter().map(|f| f.pos).collect::<Vec<_>>(), &pts);
    if !is_injective(&map, pts.len()) {
        return Err("listed fibres do not match the roots of Δ one to one".into());
    }
    for (f, &i) in s.fibres.iter().zip(&map) {
        let tol = ROOT_MATCH * f.pos.norm().max(1.0);
        if (f.pos - pts[i]).norm() > tol || f.mult != mult || roots[i].1 != mult {
            return Err(format!("fibre at {} does not match a root of Δ of order {mult}", f.pos));
        }
    }
    Ok(())
}

/// Continuity between consecutive samples. Fibres pair by nearest
/// neighbour; when a nodal surface degenerates, the two nodal fibres that
/// meet a cusp are summed.
fn check_step(s0: &ModuliPathSample, s1: &ModuliPathSample, eps: f64) -> Vec<(ViolationKind, String)> {
    let mut out = Vec::new();
    let dk = (s1.k - s0.k).norm();
    if dk >= eps {
        out.push((ViolationKind::Discontinuity, format!("K moved by {dk:e}")));
    }
    let (amap, da, _) = pair(&s0.a, &s1.a);
    if !is_injective(&amap, s1.a.len().min(s0.a.len())) || da >= eps {
        out.push((ViolationKind::Discontinuity, format!("fibre positions a moved by {da:e}")));
    }
    let p0: Vec<Complex64> = s0.fibres.iter().map(|f| f.pos).collect();
    let p1: Vec<Complex64> = s1.fibres.iter().map(|f| f.pos).collect();
    let (map, df, swapped) = pair(&p0, &p1);
    if df >= eps {
        out.push((ViolationKind::Discontinuity, format!("a fibre moved by {df:e}")));
    }
    let (big, small) = if swapped { (s1, s0) } else { (s0, s1) };
    let mut m_sum = vec![0u32; small.fibres.len()];
    let mut d_sum = vec![0u32; small.fibres.len()];
    for (j, &i) in map.iter().enumerate() {
        if i < small.fibres.len() {
            m_sum[i] += big.m[j];
            d_sum[i] += big.fibres[j].mult;
        }
    }
    for i in 0..small.fibres.len() {
        if m_sum[i] != small.m[i] || d_sum[i] != small.fibres[i].mult {
            out.push((
                ViolationKind::Multiplicity,
                format!("fibre at {}: curve multiplicity {} vs {}, Δ order {} vs {}", small.fibres[i].pos, small.m[i], m_sum[i], small.fibres[i].mult, d_sum[i]),
            ));
        }
    }
    out
}

/// Residual against an expected endpoint, and whether the curve data agree.
fn endpoint_residual(s: &ModuliPathSample, e: &Endpoint) -> (f64, bool) {
    if s.a.len() != e.a.len() {
        return (f64::INFINITY, false);
    }
    let mut r = (s.k - e.k).norm();
    for (x, y) in s.a.iter().zip(&e.a) {
        r = r.max((x - y).norm());
    }
    let n = s.a.len();
    let mut ok = s.m[..n] == e.m[..];
    let moving: Vec<Complex64> = s.fibres[n..].iter().map(|f| f.pos).collect();
    let mut claimed = vec![0u32; moving.len()];
    for &(pos, mult) in &e.carried {
        let (j, d) = nearest(pos, &moving);
        r = r.max(d);
        if j < moving.len() {
            claimed[j] = mult;
        } else {
            ok = false;
        }
    }
    ok &= s.m[n..] == claimed[..];
    (r, ok)
}

/// Fills in the verdicts using the report's own `eps_cont`.
pub fn verify_path(report: PathReport, g: u64) -> PathReport {
    let eps = report.eps_cont;
    verify_path_with(report, g, eps)
}

/// As [`verify_path`] with an explicit continuity threshold, e.g. one taken
/// from a finer reference path.
pub fn verify_path_with(mut report: PathReport, g: u64, eps_cont: f64) -> PathReport {
    let mut violations = Vec::new();
    let mut push = |sample: usize, kind: ViolationKind, detail: String| violations.push(Violation { sample, kind, detail });
    for (i, s) in report.samples.iter().enumerate() {
        if s.genus() != g {
            push(i, ViolationKind::Mass, format!("Σm = {}, g = {g}", s.genus()));
        }
        if s.m.len() != s.fibres.len() {
            push(i, ViolationKind::Mass, format!("{} multiplicities for {} fibres", s.m.len(), s.fibres.len()));
            continue;
        }
        let sep = separation(&s.fibres);
        if sep <= report.eps_sep {
            push(i, ViolationKind::Separation, format!("fibres {sep:e} apart"));
        }
        if let Err(e) = check_family(s) {
            push(i, ViolationKind::Family, e);
        }
        if i > 0 {
            for (kind, detail) in check_step(&report.samples[i - 1], s, eps_cont) {
                push(i, kind, detail);
            }
        }
    }
    let mut residual: f64 = 0.0;
    let mut matched = true;
    if let (Some(e), Some(s)) = (&report.start, report.samples.first()) {
        let (r, ok) = endpoint_residual(s, e);
        residual = residual.max(r);
        matched &= ok;
    }
    if let (Some(e), Some(s)) = (&report.end, report.samples.last()) {
        let (r, ok) = endpoint_residual(s, e);
        residual = residual.max(r);
        matched &= ok;
    }
    let endpoint_match = matched && residual < ENDPOINT_TOL;
    if !endpoint_match {
        let last = report.samples.len().saturating_sub(1);
        push(last, ViolationKind::Endpoint, format!("endpoint residual {residual:e}, curve data match: {matched}"));
    }
    report.continuous = !violations.iter().any(|v| matches!(v.kind, ViolationKind::Discontinuity | ViolationKind::Multiplicity));
    report.endpoint_match = endpoint_match;
    report.endpoint_residual = residual;
    report.invariant_violations = violations;
    report.eps_cont = eps_cont;
    report.verified = true;
    report
}
