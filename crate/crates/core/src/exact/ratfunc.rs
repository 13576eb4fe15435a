use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::RatPoly;
use super::ExactError;

/// Element of ℚ(t), kept reduced with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: RatPoly,
    den: RatPoly,
}

impl RatFunc {
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (n, d) = (num.div_exact(&g)?, den.div_exact(&g)?);
        let lc = d.leading().recip();
        Ok(RatFunc { num: n.scale(&lc), den: d.scale(&lc) })
    }

    pub fn zero() -> Self {
        RatFunc { num: RatPoly::default(), den: RatPoly::from_int(1) }
    }

    pub fn one() -> Self {
        Self::from(RatPoly::from_int(1))
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from(RatPoly::constant(c))
    }

    pub fn num(&self) -> &RatPoly {
        &self.num
    }

    pub fn den(&self) -> &RatPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&RatPoly> {
        self.den.is_constant().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational, ExactError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    /// `deg num − deg den` (None for zero).
    pub fn degree(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap() as i64)
    }

    /// `s^w · f(1/s)` as an element of ℚ(s).
    pub fn at_infinity(&self, w: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let n = self.num.reversed(dn).unwrap();
        let d = self.den.reversed(dd).unwrap();
        // f(1/s) = s^{dd-dn} · n(s)/d(s)
        let shift = w + dd as i64 - dn as i64;
        let (n, d) = if shift >= 0 {
            (&n * &RatPoly::monomial(BigRational::one(), shift as usize), d)
        } else {
            (n, &d * &RatPoly::monomial(BigRational::one(), (-shift) as usize))
        };
        Self::new(n, d).unwrap()
    }

    pub fn compose(&self, g: &RatPoly) -> Result<Self, ExactError> {
        Self::new(self.num.compose(g), self.den.compose(g))
    }
}

impl From<RatPoly> for RatFunc {
    fn from(p: RatPoly) -> Self {
        RatFunc::new(p, RatPoly::from_int(1)).unwrap()
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RatFunc::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den).unwrap()
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Div for &RatFunc {
    type Output = Result<RatFunc, ExactError>;
    fn div(self, rhs: &RatFunc) -> Result<RatFunc, ExactError> {
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops_reduce() {
        let a = RatFunc::new(RatPoly::from_ints(&[-1, 0, 1]), RatPoly::from_ints(&[2, 2])).unwrap();
        assert_eq!(a.num(), &RatPoly::from_ints(&[-1, 1]).scale(&crate::exact::rat(1, 2)));
        assert_eq!(a.den(), &RatPoly::from_int(1));
        let b = RatFunc::new(RatPoly::from_int(1), RatPoly::t()).unwrap();
        let s = &a + &b;
        let back = &s - &b;
        assert_eq!(back, a);
        assert_eq!((&s / &s).unwrap(), RatFunc::one());
    }

    #[test]
    fn infinity_chart() {
        // t² + 1 with weight 4 → s² + s⁴
        let f = RatFunc::from(RatPoly::from_ints(&[1, 0, 1]));
        assert_eq!(f.at_infinity(4), RatFunc::from(RatPoly::from_ints(&[0, 0, 1, 0, 1])));
        let g = RatFunc::new(RatPoly::from_int(1), RatPoly::t()).unwrap();
        assert_eq!(g.at_infinity(0), RatFunc::from(RatPoly::t()));
    }
}
