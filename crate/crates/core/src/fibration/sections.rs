use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::exact::{ratfunc_valuation, Place, RatFunc, RatPoly};

use super::{kodaira_type_at, q, FibrationError, KodairaType, WeierstrassModel, A_INDEX};

/// A section of the fibration: the zero section or a point over ℚ(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Section {
    Zero,
    Point { x: RatFunc, y: RatFunc },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionOrder {
    Finite(u32),
    ExceedsCap,
}

impl std::fmt::Display for SectionOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SectionOrder::Finite(n) => write!(f, "{n}"),
            SectionOrder::ExceedsCap => f.write_str("infinite or above the search cap"),
        }
    }
}

impl Section {
    /// A point, verified to satisfy the Weierstrass equation identically.
    pub fn point(w: &WeierstrassModel, x: RatFunc, y: RatFunc) -> Result<Self, FibrationError> {
        if !w.equation(&x, &y).is_zero() {
            return Err(FibrationError::NotOnCurve);
        }
        Ok(Section::Point { x, y })
    }

    pub fn from_polys(w: &WeierstrassModel, x: RatPoly, y: RatPoly) -> Result<Self, FibrationError> {
        Self::point(w, x.into(), y.into())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Section::Zero)
    }

    pub fn coords(&self) -> Option<(&RatFunc, &RatFunc)> {
        match self {
            Section::Zero => None,
            Section::Point { x, y } => Some((x, y)),
        }
    }

    pub fn is_on(&self, w: &WeierstrassModel) -> bool {
        match self {
            Section::Zero => true,
            Section::Point { x, y } => w.equation(x, y).is_zero(),
        }
    }

    pub fn neg(&self, w: &WeierstrassModel) -> Self {
        match self {
            Section::Zero => Section::Zero,
            Section::Point { x, y } => {
                let a1: RatFunc = w.a1().clone().into();
                let a3: RatFunc = w.a3().clone().into();
                Section::Point { x: x.clone(), y: &(&(-y) - &(&a1 * x)) - &a3 }
            }
        }
    }

    /// Chord–tangent addition over ℚ(t).
    pub fn add(&self, other: &Self, w: &WeierstrassModel) -> Self {
        let (x1, y1, x2, y2) = match (self, other) {
            (Section::Zero, p) | (p, Section::Zero) => return p.clone(),
            (Section::Point { x: x1, y: y1 }, Section::Point { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = w.long_coefficients().clone().map(RatFunc::from);
        let (lambda, nu) = if x1 == x2 {
            let denom = &(&(y1 + y2) + &(&a1 * x2)) + &a3;
            if denom.is_zero() {
                return Section::Zero;
            }
            let three = RatFunc::constant(q(3));
            let two = RatFunc::constant(q(2));
            let num_l = &(&(&(&three * &(x1 * x1)) + &(&(&two * &a2) * x1)) + &a4) - &(&a1 * y1);
            let num_n = &(&(&(-&(&(x1 * x1) * x1)) + &(&a4 * x1)) + &(&two * &a6)) - &(&a3 * y1);
            let d = &(&(&two * y1) + &(&a1 * x1)) + &a3;
            ((&num_l / &d).unwrap(), (&num_n / &d).unwrap())
        } else {
            let dx = x2 - x1;
            ((&(y2 - y1) / &dx).unwrap(), (&(&(y1 * x2) - &(y2 * x1)) / &dx).unwrap())
        };
        let x3 = &(&(&(&(&lambda * &lambda) + &(&a1 * &lambda)) - &a2) - x1) - x2;
        let y3 = &(&(-&(&(&lambda + &a1) * &x3)) - &nu) - &a3;
        Section::Point { x: x3, y: y3 }
    }

    pub fn mul(&self, k: u32, w: &WeierstrassModel) -> Self {
        (0..k).fold(Section::Zero, |acc, _| acc.add(self, w))
    }
}

/// Order of `P` in the Mordell–Weil group, if at most `cap`.
pub fn section_order(w: &WeierstrassModel, p: &Section, cap: u32) -> Result<SectionOrder, FibrationError> {
    if !p.is_on(w) {
        return Err(FibrationError::NotOnCurve);
    }
    let mut acc = p.clone();
    for k in 1..=cap {
        if acc.is_zero() {
            return Ok(SectionOrder::Finite(k));
        }
        acc = acc.add(p, w);
    }
    Ok(SectionOrder::ExceedsCap)
}

/// The model and point seen in the local coordinate `s = 1/t` at ∞.
fn localize(w: &WeierstrassModel, x: &RatFunc, y: &RatFunc, place: &Place) -> (Vec<RatPoly>, RatFunc, RatFunc, Place) {
    match place {
        Place::Finite(_) => (w.long_coefficients().to_vec(), x.clone(), y.clone(), place.clone()),
        Place::Infinity => {
            let chi = w.chi() as usize;
            let a = w
                .long_coefficients()
                .iter()
                .zip(A_INDEX)
                .map(|(p, i)| p.reversed(i as usize * chi).expect("degree bounds hold"))
                .collect();
            let xs = x.at_infinity(2 * chi as i64);
            let ys = y.at_infinity(3 * chi as i64);
            (a, xs, ys, Place::at(&BigRational::zero()))
        }
    }
}

fn val(f: &RatFunc, place: &Place) -> Option<i64> {
    if f.is_zero() {
        None
    } else {
        Some(ratfunc_valuation(f, place, 0).expect("nonzero"))
    }
}

/// Fiber component met by `P`.
///
/// `I_n`: components `C0 … C_{n−1}` around the cycle; the index is
/// `min(v(2y + a1x + a3), ⌊n/2⌋)` when `P` passes through the node, which
/// fixes it up to the reflection `i ↦ n − i`.
///
/// `IV*`: non-identity components `C1 − C2 − C3 − C4`, `C2 − C5 − C6`; the far
/// simple components `C4`, `C6` are told apart by the sign of the residue of
/// `y/π²` in the coordinates `y² = x³ + A x + B` (rational places only).
pub fn contact_component(w: &WeierstrassModel, p: &Section, place: &Place) -> Result<u32, FibrationError> {
    let (kind, local) = kodaira_type_at(w, place)?;
    if !matches!(kind, KodairaType::I(_) | KodairaType::IVStar) {
        return Err(FibrationError::UnsupportedFiber(kind.to_string()));
    }
    let Some((x, y)) = p.coords() else { return Ok(0) };
    if local.shift != 0 {
        return Err(FibrationError::NonMinimalAt(place.to_string()));
    }
    let (a, x, y, lp) = localize(w, x, y, place);
    if val(&x, &lp).is_some_and(|v| v < 0) {
        return Ok(0);
    }
    let [a1, a2, a3, a4, _a6] = [0, 1, 2, 3, 4].map(|i| RatFunc::from(a[i].clone()));
    match kind {
        KodairaType::I(n) if n <= 1 => Ok(0),
        KodairaType::I(n) => {
            let psi2 = &(&(&RatFunc::constant(q(2)) * &y) + &(&a1 * &x)) + &a3;
            let phi = &(&(&(&RatFunc::constant(q(3)) * &(&x * &x)) + &(&(&RatFunc::constant(q(2)) * &a2) * &x)) + &a4)
                - &(&a1 * &y);
            let through_node = val(&psi2, &lp).is_none_or(|v| v > 0) && val(&phi, &lp).is_none_or(|v| v > 0);
            if !through_node {
                return Ok(0);
            }
            let alpha = val(&psi2, &lp).map_or(n / 2, |v| (v as u32).min(n / 2));
            Ok(alpha)
        }
        _ => {
            let t0 = lp
                .rational_point()
                .ok_or_else(|| FibrationError::UnsupportedFiber(format!("IV* over the non-rational place {place}")))?;
            let half = RatFunc::constant(BigRational::new(1.into(), 2.into()));
            let ys = &y + &(&half * &(&(&a1 * &x) + &a3));
            let quarter = RatFunc::constant(BigRational::new(1.into(), 4.into()));
            let c = &a2 + &(&quarter * &(&a1 * &a1));
            let xs = &x + &(&RatFunc::constant(BigRational::new(1.into(), 3.into())) * &c);
            if val(&xs, &lp).is_some_and(|v| v <= 0) || val(&ys, &lp).is_some_and(|v| v <= 0) {
                return Ok(0);
            }
            if val(&ys, &lp) != Some(2) {
                return Err(FibrationError::InconsistentTorsion(format!(
                    "section meets the IV* fiber at {place} with v(y) ≠ 2"
                )));
            }
            let pi = RatFunc::from(RatPoly::linear_root(&t0));
            let r = (&ys / &(&pi * &pi)).unwrap().eval(&t0)?;
            Ok(if r.is_positive() { 4 } else { 6 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn pure_cubic(d: RatPoly) -> WeierstrassModel {
        WeierstrassModel::squared(2, RatPoly::zero(), RatPoly::zero(), &d * &d).unwrap()
    }

    #[test]
    fn flex_point_has_order_three() {
        let d = RatPoly::from_ints(&[-1, 0, 1]).pow(2);
        let w = pure_cubic(d.clone());
        let p = Section::from_polys(&w, RatPoly::zero(), d).unwrap();
        assert_eq!(section_order(&w, &p, 12).unwrap(), SectionOrder::Finite(3));
        assert_eq!(section_order(&w, &Section::Zero, 12).unwrap(), SectionOrder::Finite(1));
        assert!(Section::from_polys(&w, RatPoly::from_int(1), RatPoly::zero()).is_err());
    }

    #[test]
    fn iv_star_contacts() {
        let d = RatPoly::from_ints(&[-1, 0, 1]).pow(2);
        let w = pure_cubic(d.clone());
        let p = Section::from_polys(&w, RatPoly::zero(), d).unwrap();
        let m = p.neg(&w);
        for place in [Place::at(&rat(1, 1)), Place::at(&rat(-1, 1)), Place::Infinity] {
            assert_eq!(contact_component(&w, &p, &place).unwrap(), 4);
            assert_eq!(contact_component(&w, &m, &place).unwrap(), 6);
            assert_eq!(contact_component(&w, &Section::Zero, &place).unwrap(), 0);
        }
    }

    #[test]
    fn group_law_is_associative_on_multiples() {
        // y² = x³ − x + t² with P = (0, t), Q = (1, t)
        let w = WeierstrassModel::squared(2, RatPoly::zero(), RatPoly::from_int(-1), RatPoly::monomial(rat(1, 1), 2)).unwrap();
        let p = Section::from_polys(&w, RatPoly::zero(), RatPoly::t()).unwrap();
        let qq = Section::from_polys(&w, RatPoly::from_int(1), RatPoly::t()).unwrap();
        let lhs = p.add(&qq, &w).add(&p, &w);
        let rhs = p.add(&p.add(&qq, &w), &w);
        assert_eq!(lhs, rhs);
        assert!(lhs.is_on(&w));
        assert!(p.add(&p.neg(&w), &w).is_zero());
    }
}
