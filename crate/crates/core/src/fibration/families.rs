//! The concrete surfaces: the isotrivial `3IV*` surface, the one-parameter
//! `2IV* + I6 + 2I1` family, and the `I18` Tate-normal-form family.

use num_rational::BigRational;

use crate::exact::RatPoly;

use super::{flex_on_axis, twist, FibrationError, Section, WeierstrassModel};

fn t2_minus_1() -> RatPoly {
    RatPoly::from_ints(&[-1, 0, 1])
}

/// `y² = x³ + (t² − 1)⁴`.
pub fn x3_model() -> WeierstrassModel {
    WeierstrassModel::squared(2, RatPoly::zero(), RatPoly::zero(), t2_minus_1().pow(4)).expect("smooth generic fiber")
}

/// `(0, (t² − 1)²)`, of order 3.
pub fn x3_section(w: &WeierstrassModel) -> Result<Section, FibrationError> {
    Section::from_polys(w, RatPoly::zero(), t2_minus_1().pow(2))
}

fn eq3_ab(k: &BigRational) -> (RatPoly, RatPoly) {
    let a = t2_minus_1();
    // b = k t⁴ − k t²
    let b = RatPoly::new(vec![BigRational::from_integer(0.into()), BigRational::from_integer(0.into()), -k.clone(), BigRational::from_integer(0.into()), k.clone()]);
    (a, b)
}

/// `y² = x³ + (t² − 1)²(x − k t⁴ + k t²)²`.
pub fn eq3_model(k: &BigRational) -> Result<WeierstrassModel, FibrationError> {
    let (a, b) = eq3_ab(k);
    let a2 = &a * &a;
    let m2 = RatPoly::from_int(-2);
    let w = WeierstrassModel::squared(2, a2.clone(), &(&a2 * &b) * &m2, &a2 * &(&b * &b))?;
    Ok(w.with_param("k", k.clone()))
}

/// `(0, (t² − 1)(k t⁴ − k t²))`, of order 3.
pub fn eq3_section(w: &WeierstrassModel, k: &BigRational) -> Result<Section, FibrationError> {
    let (a, b) = eq3_ab(k);
    Section::from_polys(w, RatPoly::zero(), &a * &b)
}

/// Tate normal form `y² + (1 + βt) xy + t⁶ y = x³`; the point `(0, 0)` is
/// 3-torsion. `β = 0` is the default (and the member on which `t ↦ −t` acts).
pub fn i18_model(beta: &BigRational) -> Result<WeierstrassModel, FibrationError> {
    let a1 = RatPoly::new(vec![BigRational::from_integer(1.into()), beta.clone()]);
    let a3 = RatPoly::monomial(BigRational::from_integer(1.into()), 6);
    let w = WeierstrassModel::long(2, a1, RatPoly::zero(), a3, RatPoly::zero(), RatPoly::zero())?;
    Ok(w.with_param("beta", beta.clone()))
}

pub fn i18_section(w: &WeierstrassModel) -> Result<Section, FibrationError> {
    Section::from_polys(w, RatPoly::zero(), RatPoly::zero())
}

/// Second 3-torsion point on the quotient of the `β = 0` member by its
/// 3-torsion translation, on the model produced by `quotient_by_three_torsion`:
/// `x = 108t⁴ + 36t² + 12`, `y = 108t²(9t⁴ + 3t² + 1)`. (The dual-isogeny
/// kernel is only rational on the twist by −3; see `flex_on_axis`.)
pub const I18_R_SECTION: (&[i64], &[i64]) = (&[12, 0, 36, 0, 108], &[0, 0, 108, 0, 324, 0, 972]);

pub fn i18_quotient_section(y: &WeierstrassModel) -> Result<Section, FibrationError> {
    Section::from_polys(y, RatPoly::from_ints(I18_R_SECTION.0), RatPoly::from_ints(I18_R_SECTION.1))
}

/// The 3-torsion of a quotient `y² = x³ + C x² + A x + B` by a 3-torsion
/// translation generates the dual kernel, which is rational only over
/// `ℚ(√−3)`; on the twist by `−3` it is the rational flex `(0, √B)`.
pub fn dual_kernel_on_twist(y: &WeierstrassModel) -> Result<(WeierstrassModel, Section), FibrationError> {
    let tw = twist(y, &BigRational::from_integer((-3).into()))?;
    let p = flex_on_axis(&tw)?;
    Ok((tw, p))
}
