//! Elliptic surfaces over ℙ¹ given by Weierstrass equations over ℚ(t).
//!
//! A model of Euler characteristic `χ` carries `deg aᵢ ≤ i·χ`; valuations at
//! ∞ are read off from these weights (`v∞(aᵢ) = i·χ − deg aᵢ`).

mod families;
mod kodaira;
mod ns;
mod quotients;
mod sections;
mod symmetry;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::exact::{ExactError, RatPoly};
use crate::lattice::LatticeError;

pub use families::{
    dual_kernel_on_twist, eq3_model, eq3_section, i18_model, i18_quotient_section, i18_section, x3_model, x3_section, I18_R_SECTION,
};
pub use kodaira::{bad_places, classify, kodaira_type_at, Fiber, KodairaConfiguration, KodairaType, LocalData};
pub use ns::{
    align_orientations, apply_gamma, component_cartan, ns_from_sections, ns_lattice, shioda_tate_rank, torsion_glue, transcendental_from_ns,
    trivial_lattice, NsLattice, TorsionSection, TransLatticeReport, TrivialLattice, T_CANDIDATES,
};
pub use quotients::{
    clear_denominators, flex_on_axis, quotient_by_involution, quotient_by_three_torsion, to_three_torsion_form, twist,
    ThreeTorsionForm,
};
pub use sections::{contact_component, section_order, Section, SectionOrder};
pub use symmetry::{x3_symmetries, X3Symmetries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FibrationError {
    #[error("discriminant vanishes identically")]
    Singular,
    #[error("coefficient `{name}` has degree {degree} > {bound}")]
    DegreeBound { name: &'static str, degree: usize, bound: usize },
    #[error("could not minimalize at {0}")]
    NotMinimalizable(String),
    #[error("Euler numbers sum to {got}, expected {expected}")]
    EulerMismatch { got: u64, expected: u64 },
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("no 3-torsion section: {0}")]
    NoThreeTorsion(String),
    #[error("fiber type {0} is not supported here")]
    UnsupportedFiber(String),
    #[error("model is not minimal at {0}")]
    NonMinimalAt(String),
    #[error("odd-degree term in `{0}`: the involution t ↦ −t is not defined")]
    OddTerm(&'static str),
    #[error("expected a squared short form y² = x³ + Cx² + Ax + B")]
    NotSquaredForm,
    #[error("coefficient is not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("inconsistent torsion data: {0}")]
    InconsistentTorsion(String),
    #[error("Shioda–Tate rank would be negative ({0})")]
    NegativeRank(i64),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Long,
    /// `y² = x³ + C x² + A x + B`
    Short,
}

/// `y² + a1 xy + a3 y = x³ + a2 x² + a4 x + a6` over ℚ[t].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    chi: u32,
    form: Form,
    a: [RatPoly; 5],
    params: BTreeMap<String, BigRational>,
}

pub const A_NAMES: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];
pub const A_INDEX: [u32; 5] = [1, 2, 3, 4, 6];

/// `c4`, `c6`, `Δ` with `c4³ − c6² = 1728 Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CInvariants {
    pub c4: RatPoly,
    pub c6: RatPoly,
    pub delta: RatPoly,
}

impl CInvariants {
    /// `j = c4³/Δ` as a rational function (numerator, denominator).
    pub fn j(&self) -> crate::exact::RatFunc {
        crate::exact::RatFunc::new(self.c4.pow(3), self.delta.clone()).expect("Δ ≠ 0")
    }
}

impl WeierstrassModel {
    pub fn long(chi: u32, a1: RatPoly, a2: RatPoly, a3: RatPoly, a4: RatPoly, a6: RatPoly) -> Result<Self, FibrationError> {
        Self::build(chi, Form::Long, [a1, a2, a3, a4, a6])
    }

    /// `y² = x³ + C x² + A x + B`.
    pub fn squared(chi: u32, c: RatPoly, a: RatPoly, b: RatPoly) -> Result<Self, FibrationError> {
        Self::build(chi, Form::Short, [RatPoly::zero(), c, RatPoly::zero(), a, b])
    }

    fn build(chi: u32, form: Form, a: [RatPoly; 5]) -> Result<Self, FibrationError> {
        for ((p, name), i) in a.iter().zip(A_NAMES).zip(A_INDEX) {
            let bound = (i * chi) as usize;
            if let Some(d) = p.degree().filter(|&d| d > bound) {
                let name = match (form, name) {
                    (Form::Short, "a2") => "C",
                    (Form::Short, "a4") => "A",
                    (Form::Short, "a6") => "B",
                    _ => name,
                };
                return Err(FibrationError::DegreeBound { name, degree: d, bound });
            }
        }
        let m = WeierstrassModel { chi, form, a, params: BTreeMap::new() };
        if m.c_invariants_unchecked().delta.is_zero() {
            return Err(FibrationError::Singular);
        }
        Ok(m)
    }

    pub fn with_params(mut self, params: BTreeMap<String, BigRational>) -> Self {
        self.params = params;
        self
    }

    pub fn with_param(mut self, key: &str, v: BigRational) -> Self {
        self.params.insert(key.into(), v);
        self
    }

    pub fn chi(&self) -> u32 {
        self.chi
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn params(&self) -> &BTreeMap<String, BigRational> {
        &self.params
    }

    pub fn long_coefficients(&self) -> &[RatPoly; 5] {
        &self.a
    }

    pub fn a1(&self) -> &RatPoly {
        &self.a[0]
    }
    pub fn a2(&self) -> &RatPoly {
        &self.a[1]
    }
    pub fn a3(&self) -> &RatPoly {
        &self.a[2]
    }
    pub fn a4(&self) -> &RatPoly {
        &self.a[3]
    }
    pub fn a6(&self) -> &RatPoly {
        &self.a[4]
    }

    pub fn is_squared(&self) -> bool {
        self.a[0].is_zero() && self.a[2].is_zero()
    }

    /// `[C, A, B]` when `a1 = a3 = 0`.
    pub fn squared_coefficients(&self) -> Option<[&RatPoly; 3]> {
        self.is_squared().then(|| [&self.a[1], &self.a[3], &self.a[4]])
    }

    /// Completes the square, `y ↦ y − (a1 x + a3)/2`.
    pub fn to_squared(&self) -> Self {
        if self.is_squared() {
            let mut m = self.clone();
            m.form = Form::Short;
            return m;
        }
        let half = BigRational::new(1.into(), 2.into());
        let quarter = BigRational::new(1.into(), 4.into());
        let [a1, a2, a3, a4, a6] = &self.a;
        let c = a2 + &(a1 * a1).scale(&quarter);
        let a = a4 + &(a1 * a3).scale(&half);
        let b = a6 + &(a3 * a3).scale(&quarter);
        let mut m = Self::squared(self.chi, c, a, b).expect("isomorphic model");
        m.params = self.params.clone();
        m
    }

    fn c_invariants_unchecked(&self) -> CInvariants {
        let [a1, a2, a3, a4, a6] = &self.a;
        let k = |n: i64| BigRational::from_integer(BigInt::from(n));
        let b2 = &(a1 * a1) + &a2.scale(&k(4));
        let b4 = &a4.scale(&k(2)) + &(a1 * a3);
        let b6 = &(a3 * a3) + &a6.scale(&k(4));
        let b8 = &(&(&(&(&(a1 * a1) * a6) + &(a2 * a6).scale(&k(4))) - &(&(a1 * a3) * a4)) + &(&(a2 * a3) * a3))
            - &(a4 * a4);
        let c4 = &(&b2 * &b2) - &b4.scale(&k(24));
        let c6 = &(&(&(&b2 * &b2) * &b2).scale(&k(-1)) + &(&b2 * &b4).scale(&k(36))) - &b6.scale(&k(216));
        let delta = &(&(&(&(&b2 * &b2) * &b8).scale(&k(-1)) - &(&(&b4 * &b4) * &b4).scale(&k(8)))
            - &(&b6 * &b6).scale(&k(27)))
            + &(&(&b2 * &b4) * &b6).scale(&k(9));
        CInvariants { c4, c6, delta }
    }

    /// c-invariants, with the identity `c4³ − c6² = 1728Δ` checked.
    pub fn c_invariants(&self) -> CInvariants {
        let c = self.c_invariants_unchecked();
        debug_assert_eq!(
            &c.c4.pow(3) - &c.c6.pow(2),
            c.delta.scale(&BigRational::from_integer(1728.into()))
        );
        c
    }

    /// Weighted degree bounds of `(c4, c6, Δ)`.
    pub fn c_weights(&self) -> (i64, i64, i64) {
        let chi = self.chi as i64;
        (4 * chi, 6 * chi, 12 * chi)
    }

    /// Evaluates `y² + a1xy + a3y − (x³ + a2x² + a4x + a6)`.
    pub fn equation(&self, x: &crate::exact::RatFunc, y: &crate::exact::RatFunc) -> crate::exact::RatFunc {
        use crate::exact::RatFunc;
        let [a1, a2, a3, a4, a6] = self.a.clone().map(RatFunc::from);
        let lhs = &(&(y * y) + &(&(&a1 * x) * y)) + &(&a3 * y);
        let rhs = &(&(&(&(x * x) * x) + &(&a2 * &(x * x))) + &(&a4 * x)) + &a6;
        &lhs - &rhs
    }

    /// Scales `x ↦ u² x`, `y ↦ u³ y` by a constant: `aᵢ ↦ uⁱ aᵢ`.
    pub fn rescale(&self, u: &BigRational) -> Self {
        let mut m = self.clone();
        for (p, i) in m.a.iter_mut().zip(A_INDEX) {
            *p = p.scale(&num_traits::pow(u.clone(), i as usize));
        }
        m
    }

    /// Rescales by a constant so that all coefficients are integral, then
    /// removes common 12th-power-type factors `π^{i}` from `aᵢ` at every finite
    /// place where that is possible.
    pub fn minimalized(&self) -> Self {
        let mut den = BigInt::one();
        for p in &self.a {
            for c in p.coeffs() {
                den = num_integer::Integer::lcm(&den, c.denom());
            }
        }
        let mut m = self.rescale(&BigRational::from_integer(den));
        let nonzero: Vec<(usize, RatPoly)> =
            m.a.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(i, p)| (i, p.clone())).collect();
        let polys: Vec<RatPoly> = nonzero.iter().map(|(_, p)| p.clone()).collect();
        if let Ok(basis) = crate::exact::coprime_basis(&polys) {
            for el in basis {
                let k = nonzero
                    .iter()
                    .zip(&el.exponents)
                    .map(|((i, _), e)| e / A_INDEX[*i])
                    .min()
                    .unwrap_or(0);
                if k == 0 {
                    continue;
                }
                for (i, _) in &nonzero {
                    let d = el.poly.pow(k * A_INDEX[*i]);
                    m.a[*i] = m.a[*i].div_exact(&d).expect("divisible by construction");
                }
            }
        }
        m
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |p: &RatPoly, suffix: &str| {
            if p.is_zero() {
                None
            } else {
                Some(format!("({p}){suffix}"))
            }
        };
        let [a1, a2, a3, a4, a6] = &self.a;
        let mut lhs = vec!["y^2".to_string()];
        lhs.extend(term(a1, "*x*y"));
        lhs.extend(term(a3, "*y"));
        let mut rhs = vec!["x^3".to_string()];
        rhs.extend(term(a2, "*x^2"));
        rhs.extend(term(a4, "*x"));
        rhs.extend(term(a6, ""));
        write!(f, "{} = {}", lhs.join(" + "), rhs.join(" + "))
    }
}

pub(crate) fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_invariants_of_pure_cubic() {
        let b = RatPoly::from_ints(&[1, 0, -1]).pow(4);
        let m = WeierstrassModel::squared(2, RatPoly::zero(), RatPoly::zero(), b.clone()).unwrap();
        let c = m.c_invariants();
        assert!(c.c4.is_zero());
        assert_eq!(c.c6, b.scale(&q(-864)));
        assert_eq!(c.delta, (&b * &b).scale(&q(-432)));
    }

    #[test]
    fn degree_bound_enforced() {
        let b = RatPoly::monomial(q(1), 13);
        assert!(matches!(
            WeierstrassModel::squared(2, RatPoly::zero(), RatPoly::zero(), b),
            Err(FibrationError::DegreeBound { name: "B", .. })
        ));
        assert!(matches!(
            WeierstrassModel::squared(2, RatPoly::zero(), RatPoly::zero(), RatPoly::zero()),
            Err(FibrationError::Singular)
        ));
    }

    #[test]
    fn completing_the_square_preserves_j() {
        let m = WeierstrassModel::long(
            2,
            RatPoly::from_int(1),
            RatPoly::zero(),
            RatPoly::monomial(q(1), 6),
            RatPoly::zero(),
            RatPoly::zero(),
        )
        .unwrap();
        let s = m.to_squared();
        assert_eq!(m.c_invariants().j(), s.c_invariants().j());
        assert_eq!(s.a2(), &RatPoly::constant(BigRational::new(1.into(), 4.into())));
    }

    #[test]
    fn minimalization_removes_sixth_powers() {
        let t = RatPoly::t();
        let m = WeierstrassModel::squared(2, RatPoly::zero(), t.pow(4), t.pow(7)).unwrap();
        let n = m.minimalized();
        assert_eq!(n.a4(), &RatPoly::from_int(1));
        assert_eq!(n.a6(), &t);
    }
}
