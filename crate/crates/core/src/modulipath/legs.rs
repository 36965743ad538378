use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::track::{fresh_betas, track_beta_with, track_leg, RawSample};
use super::{verify, Endpoint, FibreSample, ModuliPathSample, PathError, PathReport, TraceOptions};
use crate::curves::CurveConfig;
use crate::families::{check_points, roots_of_unity, FAMILY_SIZE};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A permutation of `0..n`: point `i` ends at the position of point `σ(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PathError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(PathError::Precondition(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self(images))
    }

    /// Cycle notation with 1-based labels, e.g. `(1 2)(3 5 4)`.
    pub fn from_cycles(n: usize, text: &str) -> Result<Self, PathError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let bad = || PathError::Precondition(format!("cannot read permutation {text:?}"));
        let body = text.trim();
        if body.is_empty() || body == "()" || body == "id" {
            return Ok(Self(images));
        }
        for cycle in body.split(')') {
            let cycle = cycle.trim();
            if cycle.is_empty() {
                continue;
            }
            let inner = cycle.strip_prefix('(').ok_or_else(bad)?;
            let labels: Vec<usize> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            for w in 0..labels.len() {
                let (x, y) = (labels[w], labels[(w + 1) % labels.len()]);
                if x == 0 || x > n || y == 0 || y > n || seen[x - 1] {
                    return Err(bad());
                }
                seen[x - 1] = true;
                images[x - 1] = y - 1;
            }
        }
        Ok(Self(images))
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    /// `(a_{σ(1)}, ..., a_{σ(n)})`.
    pub fn apply<T: Copy>(&self, a: &[T]) -> Vec<T> {
        self.0.iter().map(|&j| a[j]).collect()
    }

    /// Swaps of point pairs, in order, that carry every point `i` to the
    /// position of `σ(i)`.
    pub fn transpositions(&self) -> Vec<(usize, usize)> {
        let n = self.0.len();
        let mut at: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        for p in 0..n {
            let i = self.0.iter().position(|&x| x == p).expect("bijective");
            let j = at.iter().position(|&x| x == p).expect("bijective");
            if i != j {
                out.push((i, j));
                at.swap(i, j);
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.0[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PathError;
    fn from_str(s: &str) -> Result<Self, PathError> {
        Self::from_cycles(FAMILY_SIZE, s)
    }
}

/// A leg in local time `t ∈ [0, 1]`.
struct Piece(Vec<ModuliPathSample>);

fn nodal_sample(raw: &RawSample, static_m: &[u32], beta_m: &[u32], provenance: &str) -> ModuliPathSample {
    let fibres = raw.a.iter().chain(&raw.betas).map(|&pos| FibreSample { pos, mult: 1 }).collect();
    ModuliPathSample {
        t: raw.tau,
        k: raw.k,
        a: raw.a.clone(),
        fibres,
        m: static_m.iter().chain(beta_m).copied().collect(),
        provenance: provenance.to_string(),
    }
}

fn cusp_sample(t: f64, a: &[Complex64], m: &[u32], provenance: &str) -> ModuliPathSample {
    ModuliPathSample {
        t,
        k: ZERO,
        a: a.to_vec(),
        fibres: a.iter().map(|&pos| FibreSample { pos, mult: 2 }).collect(),
        m: m.to_vec(),
        provenance: provenance.to_string(),
    }
}

fn reversed(mut samples: Vec<ModuliPathSample>, provenance: &str) -> Vec<ModuliPathSample> {
    samples.reverse();
    for s in &mut samples {
        s.t = 1.0 - s.t;
        s.provenance = provenance.to_string();
    }
    samples
}

/// Concatenates legs, mapping leg `i` onto `[i/n, (i+1)/n]`.
fn assemble(pieces: Vec<Piece>) -> Vec<ModuliPathSample> {
    let n = pieces.len().max(1) as f64;
    let mut out = Vec::new();
    for (i, Piece(samples)) in pieces.into_iter().enumerate() {
        for mut s in samples {
            s.t = (i as f64 + s.t) / n;
            out.push(s);
        }
    }
    out
}

fn check_config(m: &[u32]) -> Result<(), PathError> {
    if m.len() != FAMILY_SIZE {
        return Err(PathError::Precondition(format!("need {FAMILY_SIZE} multiplicities, got {}", m.len())));
    }
    Ok(())
}

fn check_k(k: f64) -> Result<(), PathError> {
    if !(k > 0.0 && k < 0.5) {
        return Err(PathError::Precondition(format!("K must be real in (0, 1/2), got {k}")));
    }
    Ok(())
}

/// Which `a_i` each root of `p(t) = -2K` tends to as `K → 0` along the leg.
fn merge_targets(a: &[Complex64], betas: &[Complex64]) -> Result<Vec<usize>, PathError> {
    let mut used = vec![false; a.len()];
    let mut out = Vec::with_capacity(betas.len());
    for b in betas {
        let i = (0..a.len()).min_by(|&x, &y| (a[x] - b).norm().total_cmp(&(a[y] - b).norm())).expect("nonempty");
        if used[i] {
            return Err(PathError::Precondition("two moving fibres tend to the same cusp".into()));
        }
        used[i] = true;
        out.push(i);
    }
    Ok(out)
}

/// Raw samples of `K = (1 - τ)K0` for `τ ∈ [0, 1)`, stopping one step short
/// of the cuspidal surface.
fn descend(a: &[Complex64], k0: f64, init: Option<Vec<Complex64>>, opts: &TraceOptions) -> Result<Vec<RawSample>, PathError> {
    let steps = opts.steps.max(2);
    let last = (steps - 1) as f64 / steps as f64;
    let inner = TraceOptions { steps: steps - 1, ..*opts };
    let a = a.to_vec();
    let eval = move |tau: f64| (a.clone(), Complex64::new((1.0 - tau) * k0, 0.0));
    track_leg(&eval, 0.0, last, init, &inner, "cusp limit")
}

/// `K0 → 0` with the moving fibres carrying `beta_m`; returns the leg and the
/// merged multiplicities on the cusps.
fn cusp_return(
    a: &[Complex64],
    static_m: &[u32],
    init: Option<(Vec<Complex64>, Vec<u32>)>,
    k0: f64,
    opts: &TraceOptions,
    provenance: &str,
) -> Result<(Piece, Vec<u32>), PathError> {
    let (betas, beta_m) = match init {
        Some((b, m)) => (Some(b), m),
        None => (None, vec![0; FAMILY_SIZE]),
    };
    let raw = descend(a, k0, betas, opts)?;
    let targets = merge_targets(a, &raw.last().expect("nonempty").betas)?;
    let mut merged = static_m.to_vec();
    for (j, &i) in targets.iter().enumerate() {
        merged[i] += beta_m[j];
    }
    let mut samples: Vec<ModuliPathSample> = raw.iter().map(|r| nodal_sample(r, static_m, &beta_m, provenance)).collect();
    samples.push(cusp_sample(1.0, a, &merged, provenance));
    Ok((Piece(samples), merged))
}

/// `0 → K0`, optionally splitting one unit off the cusp at `split` onto the
/// moving fibre born there. Returns the leg and the state at `K0`.
fn cusp_exit(
    a: &[Complex64],
    m: &[u32],
    split: Option<usize>,
    k0: f64,
    opts: &TraceOptions,
) -> Result<(Piece, Vec<u32>, Vec<Complex64>, Vec<u32>), PathError> {
    let raw = descend(a, k0, None, opts)?;
    let targets = merge_targets(a, &raw.last().expect("nonempty").betas)?;
    let mut static_m = m.to_vec();
    let mut beta_m = vec![0; FAMILY_SIZE];
    if let Some(i) = split {
        if static_m[i] == 0 {
            return Err(PathError::Precondition(format!("no multiplicity to split off fibre {}", i + 1)));
        }
        static_m[i] -= 1;
        let j = targets.iter().position(|&t| t == i).expect("bijection");
        beta_m[j] = 1;
    }
    let mut samples: Vec<ModuliPathSample> = raw.iter().map(|r| nodal_sample(r, &static_m, &beta_m, "cusp-exit")).collect();
    samples.push(cusp_sample(1.0, a, m, "cusp-exit"));
    let betas = raw[0].betas.clone();
    Ok((Piece(reversed(samples, "cusp-exit")), static_m, betas, beta_m))
}

/// Rotation of points `i` and `j` half a turn about their midpoint, with
/// the radius bulging by `rho` halfway.
fn swap_leg(
    a: &[Complex64],
    betas: Vec<Complex64>,
    (i, j): (usize, usize),
    k: f64,
    rho: f64,
    clockwise: bool,
    opts: &TraceOptions,
) -> Result<Vec<RawSample>, PathError> {
    let (zi, zj) = (a[i], a[j]);
    let mid = (zi + zj) / 2.0;
    let base = a.to_vec();
    let sign = if clockwise { -1.0 } else { 1.0 };
    let eval = move |tau: f64| {
        let mut cur = base.clone();
        if tau >= 1.0 {
            cur[i] = zj;
            cur[j] = zi;
        } else {
            let r = 1.0 + (rho - 1.0) * (PI * tau).sin();
            let turn = Complex64::from_polar(r, sign * PI * tau);
            cur[i] = mid + (zi - mid) * turn;
            cur[j] = mid + (zj - mid) * turn;
        }
        (cur, Complex64::new(k, 0.0))
    };
    track_leg(&eval, 0.0, 1.0, Some(betas), opts, "transposition")
}

/// All transposition legs of `sigma` at fixed `K`, retrying collisions with
/// wider jittered arcs. Returns the pieces and the moving-fibre roots at the
/// end.
fn permutation_pieces(
    a: &[Complex64],
    sigma: &Permutation,
    static_m: &[u32],
    k: f64,
    opts: &TraceOptions,
) -> Result<(Vec<Piece>, Vec<Complex64>, Vec<Complex64>), PathError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cur = a.to_vec();
    let mut betas = fresh_betas(&cur, Complex64::new(k, 0.0))?;
    let beta_m = vec![0; FAMILY_SIZE];
    let mut pieces = Vec::new();
    for pair in sigma.transpositions() {
        let mut attempt = 0;
        let raw = loop {
            let (rho, clockwise) = if attempt == 0 {
                (opts.arc_factor, false)
            } else {
                (opts.arc_factor * (1.0 + 0.35 * attempt as f64) + rng.gen_range(0.0..0.1), attempt % 2 == 1)
            };
            match swap_leg(&cur, betas.clone(), pair, k, rho, clockwise, opts) {
                Ok(r) => break r,
                Err(e @ (PathError::Collision { .. } | PathError::BranchAmbiguity { .. })) => {
                    attempt += 1;
                    if attempt > opts.retries {
                        return Err(e);
                    }
                }
                Err(e) => return Err(e),
            }
        };
        let last = raw.last().expect("nonempty");
        cur = last.a.clone();
        betas = last.betas.clone();
        pieces.push(Piece(raw.iter().map(|r| nodal_sample(r, static_m, &beta_m, "perm")).collect()));
    }
    Ok((pieces, cur, betas))
}

/// Realises `σ` on the fibre positions at fixed `K`: the curve keeps
/// multiplicity `m_i` on the fibre over the moving point `i`, which ends at
/// `a_{σ(i)}`.
pub fn permutation_path(a: &[Complex64], sigma: &Permutation, m: &CurveConfig, k: f64, opts: &TraceOptions) -> Result<PathReport, PathError> {
    check_points(a)?;
    check_config(&m.multiplicities)?;
    if sigma.len() != a.len() {
        return Err(PathError::Precondition(format!("permutation of {} points for {} positions", sigma.len(), a.len())));
    }
    if k == 0.0 || !k.is_finite() {
        return Err(PathError::Precondition("K must be nonzero".into()));
    }
    let kc = Complex64::new(k, 0.0);
    let start = Endpoint { a: a.to_vec(), k: kc, m: m.multiplicities.clone(), carried: Vec::new() };
    let end = Endpoint { a: sigma.apply(a), k: kc, m: m.multiplicities.clone(), carried: Vec::new() };
    let samples = if sigma.is_identity() {
        let betas = fresh_betas(a, kc)?;
        let raw = RawSample { tau: 0.0, a: a.to_vec(), k: kc, betas };
        vec![nodal_sample(&raw, &m.multiplicities, &[0; FAMILY_SIZE], "identity")]
    } else {
        let (pieces, _, _) = permutation_pieces(a, sigma, &m.multiplicities, k, opts)?;
        assemble(pieces)
    };
    Ok(verify::verify_path(PathReport::new(samples, opts.eps_sep, Some(start), Some(end)), m.total()))
}

/// Degenerates `X_{(a_i),K0}` to the cuspidal surface along real `K`, the
/// curve keeping its multiplicities on the fibres over the `a_i`.
pub fn cusp_limit_path(a: &[Complex64], m: &CurveConfig, k0: f64, opts: &TraceOptions) -> Result<PathReport, PathError> {
    check_points(a)?;
    check_config(&m.multiplicities)?;
    check_k(k0)?;
    let (Piece(samples), merged) = cusp_return(a, &m.multiplicities, None, k0, opts, "cusp-limit")?;
    let start = Endpoint { a: a.to_vec(), k: Complex64::new(k0, 0.0), m: m.multiplicities.clone(), carried: Vec::new() };
    let end = Endpoint { a: a.to_vec(), k: ZERO, m: merged, carried: Vec::new() };
    Ok(verify::verify_path(PathReport::new(samples, opts.eps_sep, Some(start), Some(end)), m.total()))
}

/// `β(K)` continued from `β(0) = 1` along real `K`.
fn beta_of(k: f64, opts: &TraceOptions) -> Result<Complex64, PathError> {
    let n = opts.steps.max(2);
    let ks: Vec<Complex64> = (0..=n).map(|i| Complex64::new(k * i as f64 / n as f64, 0.0)).collect();
    let b = track_beta_with(&ks, Complex64::new(1.0, 0.0), opts.max_halvings)?;
    Ok(*b.last().expect("nonempty"))
}

/// The moving-fibre loop on `X_{(α_i),K(s)}` with
/// `K(s) = (1 - (ψ(s)β)¹²)/2`, `ψ(s) = e^{πis/6}`; the fibre over `ψ(s)βα_1`
/// carries one unit taken from `α_2`. At `s = 0` that fibre sits over
/// `βα_1`, at `s = 1` over `βα_2`.
pub fn node_transfer_path(m: &CurveConfig, k: f64, opts: &TraceOptions) -> Result<PathReport, PathError> {
    check_config(&m.multiplicities)?;
    check_k(k)?;
    let ms = &m.multiplicities;
    if ms.windows(2).any(|w| w[0] < w[1]) || ms[1] == 0 {
        return Err(PathError::Precondition(format!("need m sorted descending with m_2 ≥ 1, got {ms:?}")));
    }
    let (piece, static_m, _, beta) = transfer_piece(ms, k, opts)?;
    let alpha = roots_of_unity();
    let kc = Complex64::new(k, 0.0);
    let start = Endpoint { a: alpha.clone(), k: kc, m: static_m.clone(), carried: vec![(beta * alpha[0], 1)] };
    let end = Endpoint { a: alpha.clone(), k: kc, m: static_m, carried: vec![(beta * alpha[1], 1)] };
    Ok(verify::verify_path(PathReport::new(piece.0, opts.eps_sep, Some(start), Some(end)), m.total()))
}

fn transfer_piece(ms: &[u32], k: f64, opts: &TraceOptions) -> Result<(Piece, Vec<u32>, Vec<u32>, Complex64), PathError> {
    let alpha = roots_of_unity();
    let beta = beta_of(k, opts)?;
    let w = Complex64::new(1.0 - 2.0 * k, 0.0);
    let a = alpha.clone();
    let eval = move |s: f64| (a.clone(), (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * PI * s) * w) / 2.0);
    let init = fresh_betas(&alpha, Complex64::new(k, 0.0))?;
    // order the moving fibres as βα_j so the carried one is first
    let targets: Vec<Complex64> = alpha.iter().map(|x| beta * x).collect();
    let init = super::track::match_nearest(&targets, &init).ok_or(PathError::BranchAmbiguity { k: Complex64::new(k, 0.0), halvings: 0 })?;
    let raw = track_leg(&eval, 0.0, 1.0, Some(init), opts, "node transfer")?;
    let mut static_m = ms.to_vec();
    static_m[1] -= 1;
    let mut beta_m = vec![0; FAMILY_SIZE];
    beta_m[0] = 1;
    let samples = raw.iter().map(|r| nodal_sample(r, &static_m, &beta_m, "node-transfer")).collect();
    Ok((Piece(samples), static_m, beta_m, beta))
}

/// Descending order of the fibres by multiplicity, stable in index.
fn sorting_permutation(m: &[u32]) -> (Permutation, Vec<usize>) {
    let mut order: Vec<usize> = (0..m.len()).collect();
    order.sort_by(|&x, &y| m[y].cmp(&m[x]));
    let mut images = vec![0; m.len()];
    for (r, &i) in order.iter().enumerate() {
        images[i] = r;
    }
    (Permutation(images), order)
}

/// From `[S + Σ m_i N_{α_i}, X_{(α_i),0}]` to `[S + gN_{α_1}, X_{(α_i),0}]`:
/// sort by a permutation at `K`, then move units from the fibre over `α_2`
/// to the one over `α_1`, one node-transfer round each, re-sorting whenever
/// `α_2` runs empty.
pub fn connect_to_canonical(m: &CurveConfig, k: f64, opts: &TraceOptions) -> Result<PathReport, PathError> {
    check_config(&m.multiplicities)?;
    check_k(k)?;
    let alpha = roots_of_unity();
    let g = m.total();
    let mut cur = m.multiplicities.clone();
    let mut pieces: Vec<Piece> = Vec::new();
    loop {
        if cur.windows(2).any(|w| w[0] < w[1]) {
            let (sigma, order) = sorting_permutation(&cur);
            let (exit, static_m, _, _) = cusp_exit(&alpha, &cur, None, k, opts)?;
            pieces.push(exit);
            let (perm, end_a, _) = permutation_pieces(&alpha, &sigma, &static_m, k, opts)?;
            pieces.extend(perm);
            // relabel by position: the point now over α_r is the one that
            // carried order[r]
            debug_assert!(end_a.iter().zip(sigma.apply(&alpha)).all(|(x, y)| (x - y).norm() < 1e-12));
            cur = order.iter().map(|&i| cur[i]).collect();
            let (ret, merged) = cusp_return(&alpha, &cur, None, k, opts, "cusp-return")?;
            pieces.push(ret);
            cur = merged;
        }
        if cur[1] == 0 {
            break;
        }
        let (exit, _, _, _) = cusp_exit(&alpha, &cur, Some(1), k, opts)?;
        pieces.push(exit);
        let (transfer, static_m, beta_m, _) = transfer_piece(&cur, k, opts)?;
        let first_betas: Vec<Complex64> = transfer.0[0].fibres[FAMILY_SIZE..].iter().map(|f| f.pos).collect();
        pieces.push(Piece(reversed(transfer.0, "node-transfer")));
        let (ret, merged) = cusp_return(&alpha, &static_m, Some((first_betas, beta_m)), k, opts, "cusp-return")?;
        pieces.push(ret);
        cur = merged;
    }
    let samples = if pieces.is_empty() { vec![cusp_sample(0.0, &alpha, &cur, "identity")] } else { assemble(pieces) };
    let start = Endpoint { a: alpha.clone(), k: ZERO, m: m.multiplicities.clone(), carried: Vec::new() };
    let mut canonical = vec![0; FAMILY_SIZE];
    canonical[0] = g as u32;
    let end = Endpoint { a: alpha, k: ZERO, m: canonical, carried: Vec::new() };
    Ok(verify::verify_path(PathReport::new(samples, opts.eps_sep, Some(start), Some(end)), g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation() {
        let p = Permutation::from_cycles(5, "(1 2)(3 5 4)").unwrap();
        assert_eq!(p.images(), &[1, 0, 4, 2, 3]);
        assert_eq!(p.to_string(), "(1 2)(3 5 4)");
        assert!(Permutation::from_cycles(3, "(1 1)").is_err());
        assert!(Permutation::from_cycles(3, "(1 4)").is_err());
        assert!(Permutation::from_cycles(3, "()").unwrap().is_identity());
    }

    #[test]
    fn transpositions_realise_the_permutation() {
        let p = Permutation::from_cycles(12, "(1 2 3 4 5 6 7 8 9 10 11 12)").unwrap();
        let t = p.transpositions();
        assert_eq!(t.len(), 11);
        let mut at: Vec<usize> = (0..12).collect();
        for (i, j) in t {
            at.swap(i, j);
        }
        assert_eq!(at, p.images());
    }

    #[test]
    fn sorting_is_stable() {
        let (sigma, order) = sorting_permutation(&[0, 2, 1, 2, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&order[..4], &[1, 3, 2, 0]);
        assert_eq!(sigma.images()[1], 0);
        assert_eq!(sigma.images()[3], 1);
    }
}
