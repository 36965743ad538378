//! Exact arithmetic over the Gaussian rationals `Q(i)` and univariate
//! polynomials with such coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A Gaussian rational `re + i·im` with arbitrary-precision parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    /// `num/den` as a real Gaussian rational. Panics on `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// Nearest `f64` to a big rational; falls back to scaled division when the
/// parts do not fit.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    let (n2, d2) = if shift > 0 {
        (n.clone(), d.clone() << (shift as usize))
    } else {
        (n.clone() << ((-shift) as usize), d.clone())
    };
    let q = BigRational::new(n2, d2).to_f64().unwrap_or(f64::NAN);
    q * 2f64.powi(shift as i32)
}

/// Parses `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(f, "{}{}{}i", format_rational(&self.re), sign, format_rational(&self.im.abs()))
        }
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

/// Univariate polynomial over `Q(i)`, coefficients in ascending degree.
/// Always trimmed: the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoly {
    coeffs: Vec<GaussRat>,
}

impl ExactPoly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(GaussRat::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![GaussRat::one()] }
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&GaussRat> {
        self.coeffs.last()
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(GaussRat::to_c64).collect()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussRat::from_int(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.lead().and_then(GaussRat::inv) {
            Some(inv) => Self::new(self.coeffs.iter().map(|c| c * &inv).collect()),
            None => self.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![GaussRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = GaussRat::zero();
        Self::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).unwrap_or(&zero);
                    let b = rhs.coeffs.get(k).unwrap_or(&zero);
                    a - b
                })
                .collect(),
        )
    }

    /// Euclidean division. Returns `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dlead_inv = divisor.lead()?.inv()?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::new(Vec::new()), self.clone()));
        }
        let mut quot = vec![GaussRat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &dlead_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * d);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; `None` unless `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, rhs: &Self) -> Self {
        if !self.is_zero() && !rhs.is_zero() {
            if let Some(h) = modular::gcd(self, rhs) {
                return h;
            }
        }
        self.euclid_gcd(rhs)
    }

    fn euclid_gcd(&self, rhs: &Self) -> Self {
        let mut a = self.monic();
        let mut b = rhs.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun squarefree decomposition: returns `(k, f_k)` with `self = c·∏ f_k^k`,
    /// each `f_k` monic, squarefree, pairwise coprime and non-constant.
    pub fn squarefree_decomposition(&self) -> Vec<(u32, ExactPoly)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let d = f.derivative();
        let a0 = f.gcd(&d);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let c = d.div_exact(&a0).expect("gcd divides derivative");
        let mut dpoly = c.sub(&b.derivative());
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&dpoly);
            if a.degree().unwrap_or(0) > 0 {
                out.push((k, a.clone()));
            }
            let nb = b.div_exact(&a).expect("gcd divides");
            let nc = dpoly.div_exact(&a).expect("gcd divides");
            dpoly = nc.sub(&nb.derivative());
            b = nb;
            k += 1;
        }
        out
    }

    /// Multiplicity of `t0` as a root, by repeated exact division.
    pub fn root_multiplicity(&self, t0: &GaussRat) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let lin = Self::new(vec![-t0, GaussRat::one()]);
        let mut p = self.clone();
        let mut k = 0;
        while let Some(q) = p.div_exact(&lin) {
            p = q;
            k += 1;
        }
        Some(k)
    }
}

/// Multi-modular gcd. Each prime `p ≡ 1 (mod 4)` is used twice, once for
/// each square root of `-1` standing in for `i`; the two images give the
/// real and imaginary parts of every coefficient. A ring map that keeps both
/// leading coefficients can only raise the degree of the gcd, so images of
/// the smallest degree seen are combined by CRT and rational reconstruction,
/// and a candidate dividing both inputs with that degree is the gcd.
mod modular {
    use super::{BigRational, ExactPoly, GaussRat};
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    /// Beyond this many primes the caller falls back to Euclid.
    const MAX_PRIMES: usize = 48;

    fn mul(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a, p);
            }
            a = mul(a, a, p);
            e >>= 1;
        }
        r
    }

    fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    fn is_prime(n: u64) -> bool {
        if n < 2 || n % 2 == 0 {
            return n == 2;
        }
        let (mut d, mut s) = (n - 1, 0);
        while d % 2 == 0 {
            d /= 2;
            s += 1;
        }
        'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if a % n == 0 {
                continue;
            }
            let mut x = pow(a, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 1..s {
                x = mul(x, x, n);
                if x == n - 1 {
                    continue 'witness;
                }
            }
            return false;
        }
        true
    }

    /// Primes `≡ 1 (mod 4)` below `2⁶²`, descending.
    fn primes() -> impl Iterator<Item = u64> {
        (0u64..).map(|k| (1u64 << 62) - 3 - 4 * k).filter(|&n| is_prime(n))
    }

    pub(super) fn sqrt_minus_one(p: u64) -> u64 {
        let g = (2..).find(|&g| pow(g, (p - 1) / 2, p) == p - 1).expect("p is an odd prime");
        pow(g, (p - 1) / 4, p)
    }

    fn int(n: &BigInt, p: u64) -> u64 {
        n.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
    }

    fn rat(r: &BigRational, p: u64) -> Option<u64> {
        let d = int(r.denom(), p);
        (d != 0).then(|| mul(int(r.numer(), p), inv(d, p), p))
    }

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn rem(a: &mut Vec<u64>, b: &[u64], p: u64) {
        let lb = inv(*b.last().expect("nonzero"), p);
        while a.len() >= b.len() {
            let q = mul(*a.last().expect("nonempty"), lb, p);
            let shift = a.len() - b.len();
            for (k, &x) in b.iter().enumerate() {
                a[shift + k] = (a[shift + k] + p - mul(q, x, p)) % p;
            }
            trim(a);
        }
    }

    /// Monic gcd of the images under `i ↦ j`, or `None` if a denominator or
    /// leading coefficient vanishes mod `p`.
    fn image_gcd(f: &ExactPoly, g: &ExactPoly, p: u64, j: u64) -> Option<Vec<u64>> {
        let lift = |q: &ExactPoly| q.coeffs().iter().map(|c| Some((rat(&c.re, p)? + mul(rat(&c.im, p)?, j, p)) % p)).collect::<Option<Vec<u64>>>();
        let (mut a, mut b) = (lift(f)?, lift(g)?);
        if *a.last()? == 0 || *b.last()? == 0 {
            return None;
        }
        while !b.is_empty() {
            rem(&mut a, &b, p);
            std::mem::swap(&mut a, &mut b);
        }
        let l = inv(*a.last()?, p);
        Some(a.iter().map(|&x| mul(x, l, p)).collect())
    }

    /// Wang's rational reconstruction of `u mod m` with both parts below `√(m/2)`.
    fn reconstruct(u: &BigInt, m: &BigInt) -> Option<BigRational> {
        let bound = (m / BigInt::from(2)).sqrt();
        let (mut r0, mut r1) = (m.clone(), u.clone());
        let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
        while r1 > bound {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            let t2 = &t0 - &q * &t1;
            (r0, r1, t0, t1) = (r1, r2, t1, t2);
        }
        if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
            return None;
        }
        Some(BigRational::new(r1, t1))
    }

    fn crt(acc: &mut BigInt, m: &BigInt, r: u64, p: u64) {
        let a = int(acc, p);
        let k = mul((r + p - a) % p, inv(int(m, p), p), p);
        *acc += m * BigInt::from(k);
    }

    pub(super) fn gcd(f: &ExactPoly, g: &ExactPoly) -> Option<ExactPoly> {
        let mut degree = usize::MAX;
        let mut modulus = BigInt::one();
        let mut re: Vec<BigInt> = Vec::new();
        let mut im: Vec<BigInt> = Vec::new();
        let mut last: Option<ExactPoly> = None;
        for p in primes().take(MAX_PRIMES) {
            let j = sqrt_minus_one(p);
            let (Some(h1), Some(h2)) = (image_gcd(f, g, p, j), image_gcd(f, g, p, p - j)) else {
                continue;
            };
            if h1.len() != h2.len() || h1.len() - 1 > degree {
                continue;
            }
            if h1.len() == 1 {
                return Some(ExactPoly::one());
            }
            if h1.len() - 1 < degree {
                degree = h1.len() - 1;
                modulus = BigInt::one();
                re = vec![BigInt::zero(); h1.len()];
                im = vec![BigInt::zero(); h1.len()];
                last = None;
            }
            let half = inv(2, p);
            let half_j = inv(mul(2, j, p), p);
            for k in 0..h1.len() {
                crt(&mut re[k], &modulus, mul((h1[k] + h2[k]) % p, half, p), p);
                crt(&mut im[k], &modulus, mul((h1[k] + p - h2[k]) % p, half_j, p), p);
            }
            modulus *= BigInt::from(p);
            let candidate = re.iter().zip(&im).map(|(a, b)| Some(GaussRat::new(reconstruct(a, &modulus)?, reconstruct(b, &modulus)?))).collect::<Option<Vec<_>>>().map(ExactPoly::new);
            if let Some(h) = candidate.as_ref().filter(|_| candidate == last) {
                if f.div_exact(h).is_some() && g.div_exact(h).is_some() {
                    return Some(h.clone());
                }
            }
            last = candidate;
        }
        None
    }
}
