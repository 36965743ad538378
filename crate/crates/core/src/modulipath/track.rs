//! Continuation of the roots of `p(t) = -2K` and of `t¹² = 1 - 2K`.

use num_complex::Complex64;

use super::{PathError, TraceOptions};
use crate::forms::{aberth, polynomial_roots, RootOptions};

/// Ascending coefficients of `p(t) + 2K`.
pub(crate) fn beta_poly(a: &[Complex64], k: Complex64) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for r in a {
        let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        p = next;
    }
    p[0] += k * 2.0;
    p
}

/// The roots of `p(t) = -2K`, computed from scratch.
pub(crate) fn fresh_betas(a: &[Complex64], k: Complex64) -> Result<Vec<Complex64>, PathError> {
    let roots = polynomial_roots(&beta_poly(a, k), &RootOptions::default())
        .map_err(|e| PathError::Precondition(format!("roots of p(t) = -2K: {e}")))?;
    if roots.iter().any(|r| r.1 != 1) {
        return Err(PathError::Collision { leg: "fresh roots", distance: 0.0 });
    }
    Ok(roots.into_iter().map(|r| r.0).collect())
}

pub(crate) fn min_distance(points: &[Complex64]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.min((points[i] - points[j]).norm());
        }
    }
    d
}

/// Reorders `new` to follow `prev` by nearest neighbours. Fails unless the
/// pairing is a bijection, each match is clearly nearer than the runner-up,
/// and no point moved more than a third of the distance to its nearest
/// neighbour.
pub(crate) fn match_nearest(prev: &[Complex64], new: &[Complex64]) -> Option<Vec<Complex64>> {
    if prev.len() != new.len() {
        return None;
    }
    let mut used = vec![false; new.len()];
    let mut out = Vec::with_capacity(prev.len());
    for (i, p) in prev.iter().enumerate() {
        let spacing = prev.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| (p - q).norm()).fold(f64::INFINITY, f64::min);
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = f64::INFINITY;
        for (j, q) in new.iter().enumerate() {
            let d = (p - q).norm();
            if d < best.0 {
                second = best.0;
                best = (d, j);
            } else if d < second {
                second = d;
            }
        }
        if best.1 == usize::MAX || used[best.1] || best.0 * 2.0 >= second || best.0 * 3.0 >= spacing {
            return None;
        }
        used[best.1] = true;
        out.push(new[best.1]);
    }
    Some(out)
}

/// One continuation step: Aberth warm-started at the previous roots.
pub(crate) fn step_betas(a: &[Complex64], k: Complex64, prev: &[Complex64]) -> Option<Vec<Complex64>> {
    let poly = beta_poly(a, k);
    let (z, ok) = aberth(&poly, Some(prev), 500);
    if !ok {
        return None;
    }
    match_nearest(prev, &z)
}

/// Whether all fibres, static and moving together, pair with their
/// successors unambiguously by nearest neighbour.
fn jointly_matched(a0: &[Complex64], b0: &[Complex64], a1: &[Complex64], b1: &[Complex64]) -> bool {
    let prev: Vec<Complex64> = a0.iter().chain(b0).copied().collect();
    let next: Vec<Complex64> = a1.iter().chain(b1).copied().collect();
    match_nearest(&prev, &next).is_some_and(|m| m == next)
}

/// Roots of a sampled leg.
#[derive(Debug, Clone)]
pub(crate) struct RawSample {
    pub tau: f64,
    pub a: Vec<Complex64>,
    pub k: Complex64,
    pub betas: Vec<Complex64>,
}

/// Follows the roots of `p(t) = -2K` along `tau ↦ (a(tau), K(tau))` from
/// `tau0` to `tau1`, halving steps where the pairing is unclear. `K` must
/// stay away from 0.
pub(crate) fn track_leg(
    eval: &dyn Fn(f64) -> (Vec<Complex64>, Complex64),
    tau0: f64,
    tau1: f64,
    init: Option<Vec<Complex64>>,
    opts: &TraceOptions,
    leg: &'static str,
) -> Result<Vec<RawSample>, PathError> {
    let (a0, k0) = eval(tau0);
    let betas = match init {
        Some(b) => b,
        None => fresh_betas(&a0, k0)?,
    };
    let check = |a: &[Complex64], b: &[Complex64]| {
        let all: Vec<Complex64> = a.iter().chain(b).copied().collect();
        let d = min_distance(&all);
        if d <= opts.eps_sep {
            Err(PathError::Collision { leg, distance: d })
        } else {
            Ok(())
        }
    };
    check(&a0, &betas)?;
    let mut out = vec![RawSample { tau: tau0, a: a0, k: k0, betas }];
    let steps = opts.steps.max(1);
    for i in 1..=steps {
        let target = tau0 + (tau1 - tau0) * i as f64 / steps as f64;
        let mut cur = out.last().expect("nonempty").tau;
        let mut h = target - cur;
        let mut halvings = 0;
        while (target - cur).abs() > 1e-15 {
            let next = if (target - cur).abs() <= h.abs() * (1.0 + 1e-12) { target } else { cur + h };
            let (a, k) = eval(next);
            let last = out.last().expect("nonempty");
            let step = step_betas(&a, k, &last.betas).filter(|b| jointly_matched(&last.a, &last.betas, &a, b));
            match step {
                Some(b) => {
                    check(&a, &b)?;
                    out.push(RawSample { tau: next, a, k, betas: b });
                    cur = next;
                }
                None => {
                    halvings += 1;
                    if halvings > opts.max_halvings {
                        return Err(PathError::BranchAmbiguity { k, halvings });
                    }
                    h /= 2.0;
                }
            }
        }
    }
    Ok(out)
}

/// The twelve roots of `t¹² = w`, starting from the principal one.
fn twelfth_roots(w: Complex64) -> [Complex64; 12] {
    let r = w.powf(1.0 / 12.0);
    std::array::from_fn(|j| r * Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 12.0))
}

/// One Newton step on `t¹² - w`; enough to bring closed-form roots to
/// working precision.
fn refine(t: Complex64, w: Complex64) -> Complex64 {
    let t11 = t.powi(11);
    t - (t11 * t - w) / (t11 * 12.0)
}

/// A continuous choice of `β` with `β¹² = 1 - 2K` along sampled `K`,
/// starting at the root nearest `seed`. Samples are subdivided linearly in
/// `K` until the nearest root is unambiguous.
pub fn track_beta(k_path: &[Complex64], seed: Complex64) -> Result<Vec<Complex64>, PathError> {
    track_beta_with(k_path, seed, TraceOptions::default().max_halvings)
}

pub(crate) fn track_beta_with(k_path: &[Complex64], seed: Complex64, max_halvings: u32) -> Result<Vec<Complex64>, PathError> {
    let one = Complex64::new(1.0, 0.0);
    let w = |k: Complex64| one - k * 2.0;
    if k_path.iter().any(|k| w(*k).norm() < 1e-12) {
        return Err(PathError::DegenerateK);
    }
    let Some(first) = k_path.first() else {
        return Ok(Vec::new());
    };
    let pick = |prev: Complex64, k: Complex64| -> Option<Complex64> {
        let roots = twelfth_roots(w(k));
        let mut d: Vec<(f64, Complex64)> = roots.iter().map(|r| ((r - prev).norm(), *r)).collect();
        d.sort_by(|x, y| x.0.total_cmp(&y.0));
        // unambiguous when well inside half the spacing of the roots
        let spacing = 2.0 * w(k).norm().powf(1.0 / 12.0) * (std::f64::consts::PI / 12.0).sin();
        (d[0].0 < spacing / 4.0 && d[0].0 * 2.0 < d[1].0).then_some(d[0].1)
    };
    let start = twelfth_roots(w(*first))
        .into_iter()
        .min_by(|x, y| (x - seed).norm().total_cmp(&(y - seed).norm()))
        .expect("twelve roots");
    let mut out = vec![refine(start, w(*first))];
    for pair in k_path.windows(2) {
        let (k0, k1) = (pair[0], pair[1]);
        let mut prev = *out.last().expect("nonempty");
        let mut s: f64 = 0.0;
        let mut h = 1.0;
        let mut halvings = 0;
        while s < 1.0 {
            let next = (s + h).min(1.0);
            let k = k0 + (k1 - k0) * next;
            if w(k).norm() < 1e-12 {
                return Err(PathError::DegenerateK);
            }
            match pick(prev, k) {
                Some(b) => {
                    prev = b;
                    s = next;
                }
                None => {
                    halvings += 1;
                    if halvings > max_halvings {
                        return Err(PathError::BranchAmbiguity { k, halvings });
                    }
                    h /= 2.0;
                }
            }
        }
        out.push(refine(prev, w(k1)));
    }
    Ok(out)
}
