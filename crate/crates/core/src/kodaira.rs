//! Kodaira fibre types from the vanishing orders of `A`, `B` and `Δ`.
//!
//! Decision table (characteristic zero, short Weierstrass form), checked in
//! order:
//!
//! | orders `(a, b, d)`            | type   |
//! |-------------------------------|--------|
//! | `d = 0`                       | `I0`   |
//! | `a = 0`                       | `I_d`  |
//! | `a ≥ 1, b = 1`                | `II`   |
//! | `a = 1, b ≥ 2`                | `III`  |
//! | `a ≥ 2, b = 2`                | `IV`   |
//! | `a = 2, b = 3, d = 6 + n`     | `I_n*` |
//! | `a ≥ 3, b = 3` or `a = 2, b ≥ 4` | `I0*` |
//! | `a ≥ 3, b = 4`                | `IV*`  |
//! | `a = 3, b ≥ 5`                | `III*` |
//! | `a ≥ 4, b = 5`                | `II*`  |
//! | `a ≥ 4, b ≥ 6`                | not minimal |
//!
//! The Euler number of the fibre always equals `d`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{Order, ProjPoint};
use crate::weierstrass::{WeierstrassData, WeierstrassError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KodairaError {
    #[error("Weierstrass data is not minimal at {0}")]
    NonMinimal(String),
    #[error("orders (a={a}, b={b}, d={d}) match no fibre type")]
    InconsistentOrders { a: Order, b: Order, d: u32 },
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KodairaType {
    I0,
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Euler number of the fibre.
    pub fn euler(self) -> u32 {
        match self {
            KodairaType::I0 => 0,
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => n + 6,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Rational double point of the Weierstrass surface at the fibre.
    pub fn rdp(self) -> Rdp {
        match self {
            KodairaType::I0 | KodairaType::II => Rdp::None,
            KodairaType::I(n) if n <= 1 => Rdp::None,
            KodairaType::I(n) => Rdp::A(n - 1),
            KodairaType::III => Rdp::A(1),
            KodairaType::IV => Rdp::A(2),
            KodairaType::IStar(n) => Rdp::D(n + 4),
            KodairaType::IVStar => Rdp::E6,
            KodairaType::IIIStar => Rdp::E7,
            KodairaType::IIStar => Rdp::E8,
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I0 => write!(f, "I0"),
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rdp {
    None,
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl fmt::Display for Rdp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rdp::None => write!(f, "none"),
            Rdp::A(k) => write!(f, "A{k}"),
            Rdp::D(k) => write!(f, "D{k}"),
            Rdp::E6 => write!(f, "E6"),
            Rdp::E7 => write!(f, "E7"),
            Rdp::E8 => write!(f, "E8"),
        }
    }
}

/// Applies the decision table to `(μ(A), μ(B), μ(Δ))`.
pub fn classify_orders(a: Order, b: Order, d: u32) -> Result<KodairaType, KodairaError> {
    let bad = || KodairaError::InconsistentOrders { a, b, d };
    if d == 0 {
        return Ok(KodairaType::I0);
    }
    if a.is(0) {
        return if b.is(0) { Ok(KodairaType::I(d)) } else { Err(bad()) };
    }
    if a.at_least(4) && b.at_least(6) {
        return Err(KodairaError::NonMinimal(format!("orders ({a}, {b}, {d})")));
    }
    let ty = if b.is(1) {
        KodairaType::II
    } else if a.is(1) && b.at_least(2) {
        KodairaType::III
    } else if b.is(2) {
        KodairaType::IV
    } else if a.is(2) && b.is(3) {
        if d < 6 {
            return Err(bad());
        }
        KodairaType::IStar(d - 6)
    } else if b.is(3) || (a.is(2) && b.at_least(4)) {
        KodairaType::IStar(0)
    } else if b.is(4) {
        KodairaType::IVStar
    } else if a.is(3) && b.at_least(5) {
        KodairaType::IIIStar
    } else if b.is(5) {
        KodairaType::IIStar
    } else {
        return Err(bad());
    };
    if ty.euler() != d {
        return Err(bad());
    }
    Ok(ty)
}

/// One classified fibre.
#[derive(Debug, Clone, PartialEq)]
pub struct FibreRecord {
    pub position: ProjPoint,
    pub a_order: Order,
    pub b_order: Order,
    pub d_order: u32,
    pub kodaira: KodairaType,
    pub euler: u32,
    pub rdp: Rdp,
}

impl FibreRecord {
    fn from_orders(position: ProjPoint, a: Order, b: Order, d: u32) -> Result<Self, KodairaError> {
        let kodaira = classify_orders(a, b, d).map_err(|e| match e {
            KodairaError::NonMinimal(_) => KodairaError::NonMinimal(position.to_string()),
            other => other,
        })?;
        Ok(Self { position, a_order: a, b_order: b, d_order: d, kodaira, euler: kodaira.euler(), rdp: kodaira.rdp() })
    }
}

/// Every singular fibre of a surface.
#[derive(Debug, Clone, PartialEq)]
pub struct FibreReport {
    pub fibres: Vec<FibreRecord>,
    pub total_euler: u32,
    pub surface_smooth: bool,
    pub minimal: bool,
}

/// Classifies the fibre over `p`. Roots of `Δ` are matched against the
/// surface's singular points (so exact data keeps exact orders); any other
/// point is a smooth `I0` fibre.
pub fn classify_fibre(w: &WeierstrassData, p: &ProjPoint) -> Result<FibreRecord, KodairaError> {
    let pts = w.singular_points()?;
    if let Some(s) = pts.iter().find(|s| s.point.approx_eq(p, 1e-7)) {
        return FibreRecord::from_orders(p.clone(), s.a_order, s.b_order, s.d_order);
    }
    let d = w.discriminant().vanishing_order(p).finite().unwrap_or(0);
    FibreRecord::from_orders(p.clone(), w.a().vanishing_order(p), w.b().vanishing_order(p), d)
}

pub fn fibre_report(w: &WeierstrassData) -> Result<FibreReport, KodairaError> {
    let fibres = w
        .singular_points()?
        .into_iter()
        .map(|s| FibreRecord::from_orders(s.point, s.a_order, s.b_order, s.d_order))
        .collect::<Result<Vec<_>, _>>()?;
    let total_euler = fibres.iter().map(|f| f.euler).sum();
    let surface_smooth = fibres.iter().all(|f| f.rdp == Rdp::None);
    let minimal = w.check_minimal()?.minimal;
    Ok(FibreReport { fibres, total_euler, surface_smooth, minimal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussRat;
    use crate::forms::BinaryForm;

    const F: fn(u32) -> Order = Order::Finite;

    #[test]
    fn table_rows() {
        assert_eq!(classify_orders(Order::Infinite, F(1), 2).unwrap(), KodairaType::II);
        assert_eq!(classify_orders(F(0), F(0), 1).unwrap(), KodairaType::I(1));
        assert_eq!(classify_orders(Order::Infinite, F(2), 4).unwrap(), KodairaType::IV);
        assert_eq!(classify_orders(F(1), F(2), 3).unwrap(), KodairaType::III);
        assert_eq!(classify_orders(F(2), F(3), 24).unwrap(), KodairaType::IStar(18));
        assert_eq!(classify_orders(F(2), F(4), 6).unwrap(), KodairaType::IStar(0));
        assert_eq!(classify_orders(F(5), F(3), 6).unwrap(), KodairaType::IStar(0));
        assert_eq!(classify_orders(F(3), F(4), 8).unwrap(), KodairaType::IVStar);
        assert_eq!(classify_orders(F(3), F(7), 9).unwrap(), KodairaType::IIIStar);
        assert_eq!(classify_orders(F(4), F(5), 10).unwrap(), KodairaType::IIStar);
        assert_eq!(classify_orders(F(1), F(0), 0).unwrap(), KodairaType::I0);
        assert!(matches!(classify_orders(F(4), F(6), 12), Err(KodairaError::NonMinimal(_))));
        assert!(matches!(classify_orders(F(1), F(2), 5), Err(KodairaError::InconsistentOrders { .. })));
    }

    #[test]
    fn rdp_column() {
        assert_eq!(KodairaType::IStar(18).rdp(), Rdp::D(22));
        assert_eq!(KodairaType::IStar(18).euler(), 24);
        assert_eq!(KodairaType::I(5).rdp(), Rdp::A(4));
        assert_eq!(KodairaType::I(1).rdp(), Rdp::None);
        assert_eq!(KodairaType::III.rdp(), Rdp::A(1));
        assert_eq!(KodairaType::IV.rdp(), Rdp::A(2));
        assert_eq!(KodairaType::IIStar.rdp(), Rdp::E8);
    }

    /// Every orders triple a minimal Weierstrass model can produce is in the table.
    #[test]
    fn table_is_total_on_realisable_orders() {
        for a in (0..=8).map(F).chain([Order::Infinite]) {
            for b in (0..=12).map(F).chain([Order::Infinite]) {
                if a == Order::Infinite && b == Order::Infinite {
                    continue;
                }
                if a.at_least(4) && b.at_least(6) {
                    continue;
                }
                // generic discriminant order is min(3a, 2b); only a=0=b or
                // (a,b)=(2,3) allow cancellation
                let generic = match (a, b) {
                    (Order::Infinite, Order::Finite(b)) => 2 * b,
                    (Order::Finite(a), Order::Infinite) => 3 * a,
                    (Order::Finite(a), Order::Finite(b)) => (3 * a).min(2 * b),
                    _ => unreachable!(),
                };
                let ds: Vec<u32> = match (a, b) {
                    (Order::Finite(0), Order::Finite(0)) => (0..=24).collect(),
                    (Order::Finite(2), Order::Finite(3)) => (6..=24).collect(),
                    _ => vec![generic],
                };
                for d in ds {
                    let t = classify_orders(a, b, d).unwrap_or_else(|e| panic!("({a},{b},{d}): {e}"));
                    assert_eq!(t.euler(), d);
                }
            }
        }
    }

    #[test]
    fn i9_star_fibre_at_infinity() {
        // h = x1 (x0^3 + x0 x1^2 + 2 x1^3), A = -3 h^2, B = 2 h^3 + x1^12
        let h = BinaryForm::from_exact(vec![
            GaussRat::zero(),
            GaussRat::one(),
            GaussRat::zero(),
            GaussRat::one(),
            GaussRat::from_int(2),
        ])
        .unwrap();
        let a = h.pow(2).scale_exact(&GaussRat::from_int(-3));
        let b = h.pow(3).scale_exact(&GaussRat::from_int(2)).sum(&BinaryForm::monomial_exact(12, 12, GaussRat::one())).unwrap();
        let w = WeierstrassData::new(a, b).unwrap();
        let rep = fibre_report(&w).unwrap();
        assert_eq!(rep.total_euler, 24);
        let inf = rep.fibres.iter().find(|f| f.position.is_infinity()).unwrap();
        assert_eq!(inf.kodaira, KodairaType::IStar(9));
        assert_eq!(inf.rdp, Rdp::D(13));
        assert!(!rep.surface_smooth);
        assert_eq!(rep.fibres.iter().filter(|f| f.kodaira == KodairaType::I(1)).count(), 9);
    }

    #[test]
    fn smooth_point_is_i0() {
        let b = BinaryForm::from_roots_exact(&(1..=12).map(GaussRat::from_int).collect::<Vec<_>>());
        let w = WeierstrassData::new(BinaryForm::zero(8), b).unwrap();
        let r = classify_fibre(&w, &ProjPoint::exact_affine(GaussRat::ratio(1, 2))).unwrap();
        assert_eq!(r.kodaira, KodairaType::I0);
        assert_eq!(r.euler, 0);
        let r = classify_fibre(&w, &ProjPoint::exact_affine(GaussRat::from_int(3))).unwrap();
        assert_eq!(r.kodaira, KodairaType::II);
    }
}
