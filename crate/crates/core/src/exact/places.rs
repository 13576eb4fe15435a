use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::factor::factor_squarefree;
use super::poly::RatPoly;
use super::ratfunc::RatFunc;
use super::ExactError;

/// Trial-divisor budget for splitting off rational roots.
pub const ROOT_SEARCH_CAP: usize = 20_000;

/// A place of ℚ(t)/ℚ: a monic irreducible-or-coprime-basis polynomial, or ∞.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(RatPoly),
    Infinity,
}

impl Place {
    pub fn at(r: &BigRational) -> Self {
        Place::Finite(RatPoly::linear_root(r))
    }

    /// Number of geometric points over the place.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(q) => q.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// The rational point `t = r` if the place has degree one.
    pub fn rational_point(&self) -> Option<BigRational> {
        match self {
            Place::Finite(q) if q.degree() == Some(1) => Some(-q.coeff(0) / q.coeff(1)),
            _ => None,
        }
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Greater,
            (_, Place::Infinity) => Ordering::Less,
            (Place::Finite(a), Place::Finite(b)) => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| match (self.rational_point(), other.rational_point()) {
                    (Some(x), Some(y)) => x.cmp(&y),
                    _ => a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()),
                }),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            return Ok(Place::Infinity);
        }
        crate::io::parse_poly(&s).map(|p| Place::Finite(p.monic())).map_err(serde::de::Error::custom)
    }
}

/// One element of a coprime basis with the exponent it carries in each input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub poly: RatPoly,
    pub exponents: Vec<u32>,
}

/// Pairwise coprime monic square-free polynomials `qᵢ` such that every input
/// is `content · ∏ qᵢ^{eᵢ}`. Elements are irreducible over ℚ.
pub fn coprime_basis(polys: &[RatPoly]) -> Result<Vec<BasisElement>, ExactError> {
    if polys.iter().any(|p| p.is_zero()) {
        return Err(ExactError::ZeroPolynomial);
    }
    let mut basis: Vec<RatPoly> = Vec::new();
    for f in polys {
        for (_, s) in f.squarefree_decomposition() {
            insert_coprime(&mut basis, s);
        }
    }
    let mut split: Vec<RatPoly> = basis.iter().flat_map(factor_squarefree).collect();
    split.sort_by_key(|a| Place::Finite(a.clone()));
    split
        .into_iter()
        .map(|q| {
            let exponents = polys.iter().map(|f| finite_valuation(f, &q)).collect::<Result<Vec<_>, _>>()?;
            Ok(BasisElement { poly: q, exponents })
        })
        .collect()
}

fn insert_coprime(basis: &mut Vec<RatPoly>, g: RatPoly) {
    let mut g = g.monic();
    let mut i = 0;
    while i < basis.len() && !g.is_constant() {
        let d = basis[i].gcd(&g);
        if d.is_constant() {
            i += 1;
            continue;
        }
        let rest = basis[i].div_exact(&d).unwrap();
        g = g.div_exact(&d).unwrap().monic();
        basis[i] = d;
        if !rest.is_constant() {
            basis.push(rest.monic());
        }
        i += 1;
    }
    if !g.is_constant() {
        basis.push(g);
    }
}

fn finite_valuation(f: &RatPoly, q: &RatPoly) -> Result<u32, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let mut e = 0;
    let mut cur = f.clone();
    loop {
        let (quo, rem) = cur.div_rem(q)?;
        if !rem.is_zero() {
            return Ok(e);
        }
        cur = quo;
        e += 1;
    }
}

/// Order of vanishing of `f` at `place`. At ∞ the polynomial is regarded as a
/// section of weight `weight`, so `v∞ = weight − deg f`.
pub fn place_valuation(f: &RatPoly, place: &Place, weight: i64) -> Result<i64, ExactError> {
    match place {
        Place::Finite(q) => finite_valuation(f, q).map(i64::from),
        Place::Infinity => {
            let d = f.degree().ok_or(ExactError::ZeroPolynomial)?;
            Ok(weight - d as i64)
        }
    }
}

pub fn ratfunc_valuation(f: &RatFunc, place: &Place, weight: i64) -> Result<i64, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    match place {
        Place::Finite(_) => Ok(place_valuation(f.num(), place, 0)? - place_valuation(f.den(), place, 0)?),
        Place::Infinity => Ok(weight - f.degree().unwrap()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn basis_of_overlapping_inputs() {
        // (t²−1)³ · (t²+1) and t (t−1)
        let a = &RatPoly::from_ints(&[-1, 0, 1]).pow(3) * &RatPoly::from_ints(&[1, 0, 1]);
        let b = RatPoly::from_ints(&[0, -1, 1]);
        let basis = coprime_basis(&[a.clone(), b.clone()]).unwrap();
        let polys: Vec<_> = basis.iter().map(|e| e.poly.clone()).collect();
        assert_eq!(
            polys,
            vec![
                RatPoly::from_ints(&[1, 1]),
                RatPoly::t(),
                RatPoly::from_ints(&[-1, 1]),
                RatPoly::from_ints(&[1, 0, 1]),
            ]
        );
        assert_eq!(basis[0].exponents, vec![3, 0]);
        assert_eq!(basis[2].exponents, vec![3, 1]);
        // reconstruct a up to content
        let mut prod = RatPoly::from_int(1);
        for e in &basis {
            prod = &prod * &e.poly.pow(e.exponents[0]);
        }
        assert_eq!(prod.monic(), a.monic());
    }

    #[test]
    fn valuation_at_infinity_uses_weight() {
        let f = RatPoly::from_ints(&[1, 0, 0, 1]);
        assert_eq!(place_valuation(&f, &Place::Infinity, 12).unwrap(), 9);
        assert_eq!(place_valuation(&f, &Place::at(&rat(-1, 1)), 0).unwrap(), 1);
        assert!(place_valuation(&RatPoly::default(), &Place::Infinity, 3).is_err());
    }
}
