//! Classes on the rank-two lattice spanned by the section `S` and the fibre
//! `E`, rational members of `|S + gE|`, and the numerology around them.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvesError {
    #[error("geometric genus {h} exceeds the arithmetic genus {pa}")]
    InvalidGenus { h: u64, pa: u64 },
    #[error("quartic numbers are known for l = 1, 2 only, got {0}")]
    BadDegree(u32),
    #[error("multiplicities sum to {sum}, expected g = {g}")]
    WrongSum { sum: u64, g: u32 },
    #[error("{0}")]
    Precondition(String),
}

/// `s·S + e·E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeClass {
    pub s: i64,
    pub e: i64,
}

impl LatticeClass {
    pub const S: LatticeClass = LatticeClass { s: 1, e: 0 };
    pub const E: LatticeClass = LatticeClass { s: 0, e: 1 };

    pub fn new(s: i64, e: i64) -> Self {
        Self { s, e }
    }

    /// The polarization `S + gE`.
    pub fn polarization(g: i64) -> Self {
        Self { s: 1, e: g }
    }

    pub fn self_intersection(&self) -> i64 {
        intersect(self, self)
    }
}

impl Add for LatticeClass {
    type Output = LatticeClass;
    fn add(self, rhs: Self) -> Self {
        LatticeClass { s: self.s + rhs.s, e: self.e + rhs.e }
    }
}

impl Mul<LatticeClass> for i64 {
    type Output = LatticeClass;
    fn mul(self, rhs: LatticeClass) -> LatticeClass {
        LatticeClass { s: self * rhs.s, e: self * rhs.e }
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}S{:+}E", self.s, self.e)
    }
}

/// Intersection pairing with `S² = -2`, `E² = 0`, `S·E = 1`.
pub fn intersect(c1: &LatticeClass, c2: &LatticeClass) -> i64 {
    -2 * c1.s * c2.s + c1.s * c2.e + c2.s * c1.e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polarization {
    pub self_intersection: i64,
    pub primitive: bool,
    /// Positive square and positive on both `S` and `E`. Only these two test
    /// curves are checked.
    pub ample: bool,
    /// `c² = 2g - 2`.
    pub matches_genus: bool,
}

pub fn polarization_check(c: &LatticeClass, g: i64) -> Result<Polarization, CurvesError> {
    if c.s < 0 || c.e < 0 || (c.s == 0 && c.e == 0) {
        return Err(CurvesError::Precondition(format!("class {c} must have nonnegative coefficients, not both zero")));
    }
    let sq = c.self_intersection();
    Ok(Polarization {
        self_intersection: sq,
        primitive: c.s.gcd(&c.e) == 1,
        ample: sq > 0 && intersect(c, &LatticeClass::S) > 0 && intersect(c, &LatticeClass::E) > 0,
        matches_genus: sq == 2 * g - 2,
    })
}

/// A member `S + Σ m_i N_i` of `|S + gE|`: the section plus `m_i` times the
/// singular fibre with index `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveConfig {
    pub g: u32,
    pub multiplicities: Vec<u32>,
}

impl CurveConfig {
    pub fn new(g: u32, multiplicities: Vec<u32>) -> Result<Self, CurvesError> {
        let sum: u64 = multiplicities.iter().map(|&m| m as u64).sum();
        if sum != g as u64 {
            return Err(CurvesError::WrongSum { sum, g });
        }
        Ok(Self { g, multiplicities })
    }

    /// All of `g` on fibre `i` out of `s`.
    pub fn concentrated(g: u32, s: usize, i: usize) -> Self {
        let mut m = vec![0; s];
        m[i] = g;
        Self { g, multiplicities: m }
    }

    pub fn total(&self) -> u64 {
        self.multiplicities.iter().map(|&m| m as u64).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.multiplicities.iter().enumerate().filter(|(_, m)| **m > 0).map(|(i, _)| i)
    }

    pub fn class(&self) -> LatticeClass {
        LatticeClass::polarization(self.g as i64)
    }
}

/// Lexicographic stream of nonnegative `(m_1, ..., m_s)` with sum `g`,
/// starting at `(0, ..., 0, g)`.
#[derive(Debug, Clone)]
pub struct Compositions {
    g: u32,
    next: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = CurveConfig;

    fn next(&mut self) -> Option<CurveConfig> {
        let cur = self.next.take()?;
        let s = cur.len();
        // rightmost position with mass to its right gets one more unit
        let mut rest = 0u32;
        let mut succ = None;
        for i in (0..s.saturating_sub(1)).rev() {
            rest += cur[i + 1];
            if rest > 0 {
                let mut n = cur.clone();
                n[i] += 1;
                for x in &mut n[i + 1..] {
                    *x = 0;
                }
                n[s - 1] = rest - 1;
                succ = Some(n);
                break;
            }
        }
        self.next = succ;
        Some(CurveConfig { g: self.g, multiplicities: cur })
    }
}

pub fn enumerate_rational_members(g: u32, s: usize) -> Result<Compositions, CurvesError> {
    if s == 0 {
        return Err(CurvesError::Precondition("need at least one singular fibre".into()));
    }
    let mut start = vec![0; s];
    start[s - 1] = g;
    Ok(Compositions { g, next: Some(start) })
}

/// `C(g + s - 1, s - 1)`, the length of [`enumerate_rational_members`].
pub fn count_rational_members(g: u32, s: usize) -> BigUint {
    if s == 0 {
        return BigUint::zero();
    }
    binomial(g as u64 + s as u64 - 1, s as u64 - 1)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Coefficients `n_0..=n_{g_max}` of `∏_{n≥1} (1 - qⁿ)^{-24}`.
pub fn yau_zaslow(g_max: usize) -> Vec<BigUint> {
    let mut series = vec![BigUint::zero(); g_max + 1];
    series[0] = BigUint::one();
    for n in 1..=g_max {
        // dividing by (1 - qⁿ) is a running sum with stride n
        for _ in 0..24 {
            for i in n..=g_max {
                let prev = series[i - n].clone();
                series[i] += prev;
            }
        }
    }
    series
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeveriQuery {
    pub g: u64,
    pub k: u64,
    pub h: u64,
}

impl SeveriQuery {
    /// `1 + k²(g - 1)`.
    pub fn arithmetic_genus(&self) -> u64 {
        1 + self.k * self.k * self.g.saturating_sub(1)
    }

    /// `(kL)² = k²(2g - 2)`.
    pub fn self_intersection(&self) -> u64 {
        self.k * self.k * (2 * self.g).saturating_sub(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeveriNumbers {
    pub dimension: u64,
    pub node_count: u64,
}

pub fn severi_numbers(q: &SeveriQuery) -> Result<SeveriNumbers, CurvesError> {
    if q.g == 0 || q.k == 0 {
        return Err(CurvesError::Precondition(format!("need g ≥ 1 and k ≥ 1, got g = {}, k = {}", q.g, q.k)));
    }
    let pa = q.arithmetic_genus();
    if q.h > pa {
        return Err(CurvesError::InvalidGenus { h: q.h, pa });
    }
    Ok(SeveriNumbers { dimension: q.h, node_count: pa - q.h })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeryAmple {
    /// `⌊(2g - 2)/4⌋` for the primitive class.
    pub k_very_ample_level: u64,
    /// `⌊k(g - 1)/2⌋` for the `k`-th multiple.
    pub multiple_level: u64,
    /// `⌈(k(6k - 1)(g - 1) + 4)/6⌉`.
    pub h_min_irreducible: u64,
}

pub fn very_ample_and_bound(g: u64, k: u64) -> Result<VeryAmple, CurvesError> {
    if g <= 2 || k == 0 {
        return Err(CurvesError::Precondition(format!("need g > 2 and k ≥ 1, got g = {g}, k = {k}")));
    }
    let num = k * (6 * k - 1) * (g - 1) + 4;
    Ok(VeryAmple {
        k_very_ample_level: (2 * g - 2) / 4,
        multiple_level: k * (g - 1) / 2,
        h_min_irreducible: num.div_ceil(6),
    })
}

/// Dimension counts for nodal curves on a quartic surface cut by degree-`l`
/// hypersurfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuarticNumbers {
    pub l: u32,
    pub dim_w_s: u32,
    pub kernel_dim: u32,
    pub fibre_dim: u32,
}

impl QuarticNumbers {
    /// `fibre = dim W_S + kernel - 1` and `fibre = 35 - C(l + 3, 3)`.
    pub fn is_consistent(&self) -> bool {
        let sections = binomial(self.l as u64 + 3, 3);
        self.fibre_dim + 1 == self.dim_w_s + self.kernel_dim && BigUint::from(35u32 - self.fibre_dim) == sections
    }
}

pub fn quartic_severi_numbers(l: u32) -> Result<QuarticNumbers, CurvesError> {
    let (dim_w_s, kernel_dim, fibre_dim) = match l {
        1 => (11, 21, 31),
        2 => (15, 11, 25),
        _ => return Err(CurvesError::BadDegree(l)),
    };
    Ok(QuarticNumbers { l, dim_w_s, kernel_dim, fibre_dim })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CombVertex {
    /// The section component.
    Spine,
    /// Component `index` (from 1) of the chain over fibre `fibre`.
    Chain { fibre: usize, index: u32 },
}

/// Dual graph of the unramified comb: a spine with one chain per fibre of
/// positive multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombGraph {
    pub vertices: Vec<CombVertex>,
    pub edges: Vec<(usize, usize)>,
}

impl CombGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// First Betti number of the graph, `|E| - |V| + 1` when connected.
    pub fn arithmetic_genus(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.arithmetic_genus() == 0
    }

    /// Chain lengths by fibre index.
    pub fn chain_lengths(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        for v in &self.vertices {
            if let CombVertex::Chain { fibre, .. } = v {
                match out.iter_mut().find(|(f, _)| f == fibre) {
                    Some((_, n)) => *n += 1,
                    None => out.push((*fibre, 1)),
                }
            }
        }
        out
    }
}

pub fn unramified_comb(cfg: &CurveConfig) -> CombGraph {
    let mut vertices = vec![CombVertex::Spine];
    let mut edges = Vec::new();
    for (fibre, &m) in cfg.multiplicities.iter().enumerate() {
        let mut prev = 0;
        for index in 1..=m {
            vertices.push(CombVertex::Chain { fibre, index });
            let v = vertices.len() - 1;
            edges.push((prev, v));
            prev = v;
        }
    }
    CombGraph { vertices, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        let l = LatticeClass::polarization(5);
        assert_eq!(l.self_intersection(), 8);
        assert_eq!(LatticeClass::E.self_intersection(), 0);
        assert_eq!(intersect(&LatticeClass::new(2, 3), &LatticeClass::new(1, 1)), 1);
    }

    #[test]
    fn polarization_examples() {
        let p = polarization_check(&LatticeClass::polarization(3), 3).unwrap();
        assert_eq!((p.self_intersection, p.primitive, p.ample, p.matches_genus), (4, true, true, true));
        let p = polarization_check(&LatticeClass::polarization(2), 2).unwrap();
        assert_eq!((p.self_intersection, p.primitive, p.ample), (2, true, false));
        assert!(!polarization_check(&LatticeClass::new(2, 2), 3).unwrap().primitive);
        assert!(polarization_check(&LatticeClass::new(0, 0), 3).is_err());
    }

    #[test]
    fn small_enumerations() {
        let all: Vec<_> = enumerate_rational_members(2, 3).unwrap().map(|c| c.multiplicities).collect();
        assert_eq!(all, vec![vec![0, 0, 2], vec![0, 1, 1], vec![0, 2, 0], vec![1, 0, 1], vec![1, 1, 0], vec![2, 0, 0]]);
        assert_eq!(enumerate_rational_members(7, 1).unwrap().count(), 1);
        assert_eq!(enumerate_rational_members(0, 4).unwrap().count(), 1);
        assert_eq!(count_rational_members(3, 12), BigUint::from(364u32));
        assert_eq!(count_rational_members(3, 24), BigUint::from(2600u32));
    }

    #[test]
    fn big_counts_do_not_overflow() {
        let c = count_rational_members(200, 24);
        assert!(c > BigUint::from(u64::MAX));
    }

    #[test]
    fn yau_zaslow_head() {
        let s = yau_zaslow(3);
        let v: Vec<u64> = s.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(v, vec![1, 24, 324, 3200]);
        assert_eq!(yau_zaslow(0), vec![BigUint::one()]);
    }

    #[test]
    fn severi_examples() {
        assert_eq!(severi_numbers(&SeveriQuery { g: 3, k: 1, h: 0 }).unwrap(), SeveriNumbers { dimension: 0, node_count: 3 });
        assert_eq!(severi_numbers(&SeveriQuery { g: 3, k: 2, h: 5 }).unwrap(), SeveriNumbers { dimension: 5, node_count: 4 });
        assert_eq!(severi_numbers(&SeveriQuery { g: 3, k: 1, h: 3 }).unwrap().node_count, 0);
        assert_eq!(severi_numbers(&SeveriQuery { g: 3, k: 1, h: 4 }), Err(CurvesError::InvalidGenus { h: 4, pa: 3 }));
    }

    #[test]
    fn very_ample_examples() {
        assert_eq!(very_ample_and_bound(7, 1).unwrap().h_min_irreducible, 6);
        assert_eq!(very_ample_and_bound(3, 1).unwrap().k_very_ample_level, 1);
        assert_eq!(very_ample_and_bound(5, 3).unwrap().multiple_level, 6);
        assert!(very_ample_and_bound(2, 1).is_err());
    }

    #[test]
    fn quartic_examples() {
        let q = quartic_severi_numbers(1).unwrap();
        assert_eq!((q.dim_w_s, q.kernel_dim, q.fibre_dim), (11, 21, 31));
        assert!(q.is_consistent());
        let q = quartic_severi_numbers(2).unwrap();
        assert_eq!((q.dim_w_s, q.kernel_dim, q.fibre_dim), (15, 11, 25));
        assert!(q.is_consistent());
        assert_eq!(quartic_severi_numbers(3), Err(CurvesError::BadDegree(3)));
    }

    #[test]
    fn comb_shapes() {
        let one = unramified_comb(&CurveConfig::concentrated(4, 12, 0));
        assert_eq!(one.vertex_count(), 5);
        assert_eq!(one.chain_lengths(), vec![(0, 4)]);
        assert!(one.is_tree());
        let star = unramified_comb(&CurveConfig::new(3, vec![1, 0, 1, 1]).unwrap());
        assert_eq!(star.vertex_count(), 4);
        assert!(star.edges.iter().all(|&(a, _)| a == 0));
        assert!(star.is_tree());
    }
}
