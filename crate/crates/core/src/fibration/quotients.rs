use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::exact::{RatFunc, RatPoly};

use super::{q, section_order, FibrationError, Section, SectionOrder, WeierstrassModel};

/// Normal forms of a curve with a 3-torsion point at `(0, ·)`:
/// `y² = x³ + d²` or `y² = x³ + a²(x − b)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThreeTorsionForm {
    D(RatPoly),
    AB { a: RatFunc, b: RatFunc },
}

impl ThreeTorsionForm {
    /// The squared model `y² = x³ + d²` or `y² = x³ + a²(x − b)²`, with its
    /// 3-torsion point `(0, d)` resp. `(0, ab)`.
    pub fn model(&self, chi: u32) -> Result<(WeierstrassModel, Section), FibrationError> {
        match self {
            ThreeTorsionForm::D(d) => {
                let w = WeierstrassModel::squared(chi, RatPoly::zero(), RatPoly::zero(), d * d)?;
                let p = Section::from_polys(&w, RatPoly::zero(), d.clone())?;
                Ok((w, p))
            }
            ThreeTorsionForm::AB { a, b } => {
                let a2 = a * a;
                let c = poly(&a2)?;
                let aa = poly(&(&RatFunc::constant(q(-2)) * &(&a2 * b)))?;
                let bb = poly(&(&a2 * &(b * b)))?;
                let w = WeierstrassModel::squared(chi, c, aa, bb)?;
                let p = Section::point(&w, RatFunc::zero(), a * b)?;
                Ok((w, p))
            }
        }
    }
}

fn poly(f: &RatFunc) -> Result<RatPoly, FibrationError> {
    f.as_poly().cloned().ok_or_else(|| FibrationError::NotPolynomial(f.to_string()))
}

/// Moves the 3-torsion point `P` to `(0, 0)`, straightens its flex tangent to
/// `y = 0` (giving `y² + a1 xy + a3 y = x³`) and completes the square:
/// `a = a1/2`, `b = −a3/a1`, or `d = a3/2` when `a1 = 0`.
pub fn to_three_torsion_form(w: &WeierstrassModel, p: &Section) -> Result<ThreeTorsionForm, FibrationError> {
    match section_order(w, p, 3)? {
        SectionOrder::Finite(3) => {}
        other => return Err(FibrationError::NoThreeTorsion(format!("section has order {other:?}"))),
    }
    let (r, t) = p.coords().expect("order 3");
    let [a1, a2, a3, a4, a6] = w.long_coefficients().clone().map(RatFunc::from);
    let c = |n: i64| RatFunc::constant(q(n));
    // x = x' + r, y = y' + t
    let a2p = &a2 + &(&c(3) * r);
    let a3p = &(&a3 + &(r * &a1)) + &(&c(2) * t);
    let a4p = &(&(&a4 + &(&(&c(2) * r) * &a2)) - &(t * &a1)) + &(&c(3) * &(r * r));
    let a6p = &(&(&(&(&(&a6 + &(r * &a4)) + &(&(r * r) * &a2)) + &(&(r * r) * r)) - &(t * &a3)) - &(t * t))
        - &(&(r * t) * &a1);
    debug_assert!(a6p.is_zero());
    if a3p.is_zero() {
        return Err(FibrationError::NoThreeTorsion("point is 2-torsion".into()));
    }
    // y' = y'' + s x'
    let s = (&a4p / &a3p)?;
    let a1pp = &a1 + &(&c(2) * &s);
    let a2pp = &(&a2p - &(&s * &a1)) - &(&s * &s);
    if !a2pp.is_zero() {
        return Err(FibrationError::NoThreeTorsion("tangent at the point is not a flex".into()));
    }
    let half = RatFunc::constant(BigRational::new(1.into(), 2.into()));
    if a1pp.is_zero() {
        Ok(ThreeTorsionForm::D(poly(&(&half * &a3p))?))
    } else {
        let b = -&(&a3p / &a1pp)?;
        Ok(ThreeTorsionForm::AB { a: &half * &a1pp, b })
    }
}

/// Quotient by translation by the 3-torsion section `P`:
/// `y² = x³ − 27d²`, resp. `y² = x³ − 27a²(x − 4a² − 27b)²`, with constant
/// denominators cleared and the model minimalized.
pub fn quotient_by_three_torsion(w: &WeierstrassModel, p: &Section) -> Result<WeierstrassModel, FibrationError> {
    let form = to_three_torsion_form(w, p)?;
    let out = match form {
        ThreeTorsionForm::D(d) => {
            WeierstrassModel::squared(w.chi(), RatPoly::zero(), RatPoly::zero(), (&d * &d).scale(&q(-27)))?
        }
        ThreeTorsionForm::AB { a, b } => {
            let k = |n: i64| RatFunc::constant(q(n));
            let a2 = &a * &a;
            let ac = &(&k(4) * &(&a2 * &a)) + &(&k(27) * &(&a * &b));
            let cc = poly(&(&k(-27) * &a2))?;
            let aa = poly(&(&k(54) * &(&a * &ac)))?;
            let bb = poly(&(&k(-27) * &(&ac * &ac)))?;
            WeierstrassModel::squared(w.chi(), cc, aa, bb)?
        }
    };
    Ok(clear_denominators(&out).minimalized().with_params(w.params().clone()))
}

/// Smallest constant rescaling `aᵢ ↦ uⁱ aᵢ` making all coefficients integral.
pub fn clear_denominators(w: &WeierstrassModel) -> WeierstrassModel {
    let mut need: Vec<(u64, u32)> = Vec::new();
    for (p, i) in w.long_coefficients().iter().zip(super::A_INDEX) {
        let mut den = BigInt::one();
        for c in p.coeffs() {
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        for (prime, e) in factor(&den) {
            let want = e.div_ceil(i);
            match need.iter_mut().find(|(pp, _)| *pp == prime) {
                Some(entry) => entry.1 = entry.1.max(want),
                None => need.push((prime, want)),
            }
        }
    }
    let u = need.iter().fold(BigInt::one(), |acc, (p, e)| acc * BigInt::from(*p).pow(*e));
    if u.is_one() {
        return w.clone();
    }
    w.rescale(&BigRational::from_integer(u))
}

fn factor(n: &BigInt) -> Vec<(u64, u32)> {
    use num_traits::ToPrimitive;
    let mut n = n.to_u64().expect("denominators stay small");
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Quadratic twist `y² = x³ + D C x² + D² A x + D³ B` of the squared form.
pub fn twist(w: &WeierstrassModel, d: &BigRational) -> Result<WeierstrassModel, FibrationError> {
    let s = w.to_squared();
    let [c, a, b] = s.squared_coefficients().unwrap();
    let d2 = d * d;
    let d3 = &d2 * d;
    Ok(WeierstrassModel::squared(w.chi(), c.scale(d), a.scale(&d2), b.scale(&d3))?.with_params(w.params().clone()))
}

/// The point `(0, √B)` on a squared form, if `B` is a square and the point is 3-torsion.
pub fn flex_on_axis(w: &WeierstrassModel) -> Result<Section, FibrationError> {
    let [_, _, b] = w.squared_coefficients().ok_or(FibrationError::NotSquaredForm)?;
    let e = b.sqrt().ok_or_else(|| FibrationError::NoThreeTorsion("B is not a square".into()))?;
    let p = Section::from_polys(w, RatPoly::zero(), e)?;
    match section_order(w, &p, 3)? {
        SectionOrder::Finite(3) => Ok(p),
        o => Err(FibrationError::NoThreeTorsion(format!("(0, √B) has order {o:?}"))),
    }
}

/// Quotient by `(x, y, t) ↦ (x, −y, −t)` on `y² = x³ + C x² + A x + B` with
/// even `C`, `A`, `B`: `X = x t²`, `Y = y t³`, `τ = t²` give
/// `C′ = τ C̃(τ)`, `A′ = τ² Ã(τ)`, `B′ = τ³ B̃(τ)` where `f(t) = f̃(t²)`.
pub fn quotient_by_involution(w: &WeierstrassModel) -> Result<WeierstrassModel, FibrationError> {
    if w.chi() != 2 {
        return Err(FibrationError::Invalid("involution quotient needs a K3 model (χ = 2)".into()));
    }
    let s = w.to_squared();
    let [c, a, b] = s.squared_coefficients().unwrap();
    let tau = RatPoly::t();
    let mut out = Vec::new();
    for (f, name, k) in [(c, "C", 1u32), (a, "A", 2), (b, "B", 3)] {
        let half = f.even_part_in_square().map_err(|_| FibrationError::OddTerm(name))?;
        out.push(&half * &tau.pow(k));
    }
    let [c2, a2, b2]: [RatPoly; 3] = out.try_into().unwrap();
    let m = WeierstrassModel::squared(2, c2, a2, b2)?;
    Ok(clear_denominators(&m).minimalized().with_params(w.params().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::fibration::classify;

    fn x3() -> (WeierstrassModel, Section) {
        let d = RatPoly::from_ints(&[-1, 0, 1]).pow(2);
        ThreeTorsionForm::D(d).model(2).unwrap()
    }

    #[test]
    fn pure_cubic_form_and_quotient() {
        let (w, p) = x3();
        let d = RatPoly::from_ints(&[-1, 0, 1]).pow(2);
        assert_eq!(to_three_torsion_form(&w, &p).unwrap(), ThreeTorsionForm::D(d.clone()));
        let y = quotient_by_three_torsion(&w, &p).unwrap();
        assert_eq!(y.a6(), &(&d * &d).scale(&q(-27)));
        assert!(classify(&y).unwrap().matches("3IV*"));
    }

    #[test]
    fn tate_normal_form_completes_to_ab() {
        let w = WeierstrassModel::long(
            2,
            RatPoly::from_int(1),
            RatPoly::zero(),
            RatPoly::monomial(rat(1, 1), 6),
            RatPoly::zero(),
            RatPoly::zero(),
        )
        .unwrap();
        let p = Section::from_polys(&w, RatPoly::zero(), RatPoly::zero()).unwrap();
        let f = to_three_torsion_form(&w, &p).unwrap();
        let expected = ThreeTorsionForm::AB {
            a: RatFunc::constant(rat(1, 2)),
            b: RatPoly::monomial(rat(-1, 1), 6).into(),
        };
        assert_eq!(f, expected);
        // Oracle: the completed square has the same j-invariant.
        let (m, _) = f.model(2).unwrap();
        assert_eq!(m.c_invariants().j(), w.c_invariants().j());
    }

    #[test]
    fn involution_rejects_odd_terms() {
        let w = WeierstrassModel::squared(2, RatPoly::t(), RatPoly::zero(), RatPoly::from_int(1)).unwrap();
        assert!(matches!(quotient_by_involution(&w), Err(FibrationError::OddTerm("C"))));
    }

    #[test]
    fn involution_of_pure_cubic() {
        let (w, _) = x3();
        let z = quotient_by_involution(&w).unwrap();
        let tau = RatPoly::t();
        let expected = &tau.pow(3) * &RatPoly::from_ints(&[-1, 1]).pow(4);
        assert_eq!(z.a6(), &expected);
    }

    #[test]
    fn clearing_denominators_is_minimal() {
        let w = WeierstrassModel::squared(
            2,
            RatPoly::constant(rat(1, 4)),
            RatPoly::monomial(rat(1, 2), 6),
            RatPoly::monomial(rat(1, 4), 12),
        )
        .unwrap();
        let c = clear_denominators(&w);
        assert_eq!(c.a2(), &RatPoly::from_int(1));
        assert_eq!(c.a4(), &RatPoly::monomial(rat(8, 1), 6));
    }
}
