//! Text input for Weierstrass equations such as `y^2 = x^3 + (t^2-1)^4` or
//! `y^2 + x*y + t^6*y = x^3`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::RatPoly;
use crate::fibration::{FibrationError, WeierstrassModel};

/// Exponents of (x, y, t).
type Mono = (u32, u32, u32);

#[derive(Clone, Debug, Default, PartialEq)]
struct Poly(BTreeMap<Mono, BigRational>);

impl Poly {
    fn constant(c: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((0, 0, 0), c);
        }
        Poly(m)
    }

    fn var(m: Mono) -> Self {
        Poly(BTreeMap::from([(m, BigRational::one())]))
    }

    fn add(&self, o: &Self, sign: i64) -> Self {
        let mut out = self.0.clone();
        for (k, v) in &o.0 {
            let e = out.entry(*k).or_insert_with(BigRational::zero);
            *e += v * BigRational::from_integer(sign.into());
            if e.is_zero() {
                out.remove(k);
            }
        }
        Poly(out)
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Poly::default();
        for (a, u) in &self.0 {
            for (b, v) in &o.0 {
                let k = (a.0 + b.0, a.1 + b.1, a.2 + b.2);
                out = out.add(&Poly(BTreeMap::from([(k, u * v)])), 1);
            }
        }
        out
    }

    fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => self.0.get(&(0, 0, 0)).cloned(),
            _ => None,
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, String> {
        Err(format!("{msg} at offset {}", self.pos))
    }

    fn peek(&mut self) -> Option<u8> {
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, 1);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, -1);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.unary()?.as_constant().ok_or("division by a non-constant")?;
                    if d.is_zero() {
                        return self.err("division by zero");
                    }
                    acc = acc.mul(&Poly::constant(d.recip()));
                }
                // implicit product: `2t`, `(t-1)(t+1)`, `x y`
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Poly::default().add(&self.unary()?, -1))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, String> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.uint()?;
        let e: u32 = e.try_into().map_err(|_| format!("exponent too large at offset {}", self.pos))?;
        Ok((0..e).fold(Poly::constant(BigRational::one()), |acc, _| acc.mul(&base)))
    }

    fn uint(&mut self) -> Result<BigInt, String> {
        self.peek();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn atom(&mut self) -> Result<Poly, String> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Poly::constant(BigRational::from_integer(self.uint()?))),
            Some(b'x') => {
                self.pos += 1;
                Ok(Poly::var((1, 0, 0)))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Poly::var((0, 1, 0)))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(Poly::var((0, 0, 1)))
            }
            _ => self.err("unexpected input"),
        }
    }
}

fn parse_side(s: &str) -> Result<Poly, String> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// The coefficient of `x^i y^j` as a polynomial in `t`.
fn coeff(p: &Poly, i: u32, j: u32) -> RatPoly {
    let mut out = RatPoly::zero();
    for (&(a, b, c), v) in &p.0 {
        if (a, b) == (i, j) {
            out = &out + &RatPoly::monomial(v.clone(), c as usize);
        }
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum EquationError {
    #[error("{0}")]
    Syntax(String),
    #[error("not a Weierstrass equation: {0}")]
    Shape(String),
    #[error(transparent)]
    Model(#[from] FibrationError),
}

/// Parses `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` (terms may sit on
/// either side). Without `xy` and `y` terms the model is kept in short form.
pub fn parse_equation(s: &str, chi: u32) -> Result<WeierstrassModel, EquationError> {
    let (l, r) = s.split_once('=').ok_or_else(|| EquationError::Syntax("missing `=`".into()))?;
    let lhs = parse_side(l).map_err(EquationError::Syntax)?;
    let rhs = parse_side(r).map_err(EquationError::Syntax)?;
    let e = lhs.add(&rhs, -1);
    let allowed = [(0, 2), (1, 1), (0, 1), (3, 0), (2, 0), (1, 0), (0, 0)];
    if let Some(((i, j, _), _)) = e.0.iter().find(|((i, j, _), _)| !allowed.contains(&(*i, *j))) {
        return Err(EquationError::Shape(format!("monomial x^{i} y^{j}")));
    }
    if coeff(&e, 0, 2) != RatPoly::from_int(1) || coeff(&e, 3, 0) != RatPoly::from_int(-1) {
        return Err(EquationError::Shape("expected y^2 = x^3 + … with unit leading terms".into()));
    }
    let a1 = coeff(&e, 1, 1);
    let a3 = coeff(&e, 0, 1);
    let minus = |p: RatPoly| -&p;
    let (a2, a4, a6) = (minus(coeff(&e, 2, 0)), minus(coeff(&e, 1, 0)), minus(coeff(&e, 0, 0)));
    let w = if a1.is_zero() && a3.is_zero() {
        WeierstrassModel::squared(chi, a2, a4, a6)?
    } else {
        WeierstrassModel::long(chi, a1, a2, a3, a4, a6)?
    };
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::Form;

    #[test]
    fn pure_cubic() {
        let w = parse_equation("y^2=x^3+(t^2-1)^4", 2).unwrap();
        assert_eq!(w.form(), Form::Short);
        assert_eq!(w.a6(), &RatPoly::from_ints(&[-1, 0, 1]).pow(4));
        assert!(w.a2().is_zero());
    }

    #[test]
    fn tate_normal_form() {
        let w = parse_equation("y^2 + x*y + t^6 y = x^3", 2).unwrap();
        assert_eq!(w.form(), Form::Long);
        assert_eq!(w.a1(), &RatPoly::from_int(1));
        assert_eq!(w.a3(), &RatPoly::monomial(BigRational::one(), 6));
    }

    #[test]
    fn terms_on_both_sides_and_fractions() {
        let w = parse_equation("y^2 - (1/2)x = x^3 + 3/4 t", 2).unwrap();
        assert_eq!(w.a4(), &RatPoly::constant(BigRational::new(1.into(), 2.into())));
        assert_eq!(w.a6(), &RatPoly::monomial(BigRational::new(3.into(), 4.into()), 1));
        assert!(matches!(parse_equation("y^2 = x^4", 2), Err(EquationError::Shape(_))));
        assert!(matches!(parse_equation("y^2 = x^3 +", 2), Err(EquationError::Syntax(_))));
        assert!(matches!(parse_equation("y^2 = x^3 + t/0", 2), Err(EquationError::Syntax(_))));
    }
}
