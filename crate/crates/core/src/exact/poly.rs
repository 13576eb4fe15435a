use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

/// Dense univariate polynomial over ℚ in the variable `t`.
/// Invariant: no trailing zero coefficients (zero polynomial is empty).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_ints(&[c])
    }

    pub fn t() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `t − r`
    pub fn linear_root(r: &BigRational) -> Self {
        Self::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(k.into())).collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::from_int(1);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), ExactError> {
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let dd = d.degree().unwrap();
        let lead_inv = d.leading().recip();
        let mut r = self.coeffs.clone();
        let Some(n) = self.degree() else { return Ok((Self::default(), Self::default())) };
        if n < dd {
            return Ok((Self::default(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = &r[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * dc;
            }
            q[k] = c;
        }
        Ok((Self::new(q), Self::new(r)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Result<Self, ExactError> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ExactError::NotDivisible)
        }
    }

    pub fn divides(&self, f: &Self) -> bool {
        !self.is_zero() && f.div_rem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `f = c · ∏ sᵢ^i` with monic, pairwise
    /// coprime, square-free `sᵢ`. Returns `(i, sᵢ)` for non-constant factors.
    pub fn squarefree_decomposition(&self) -> Vec<(u32, Self)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.div_exact(&a).unwrap();
        let mut d = &df.div_exact(&a).unwrap() - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let s = b.gcd(&d);
            b = b.div_exact(&s).unwrap();
            let c = d.div_exact(&s).unwrap();
            d = &c - &b.derivative();
            if !s.is_constant() {
                out.push((i, s));
            }
            i += 1;
        }
        out
    }

    /// Rational roots via the rational root theorem, ascending. `None` if the
    /// candidate search would exceed `cap` trial divisors.
    pub fn rational_roots(&self, cap: usize) -> Option<Vec<BigRational>> {
        if self.is_constant() {
            return Some(Vec::new());
        }
        let mut roots = Vec::new();
        let mut f = self.clone();
        if f.coeff(0).is_zero() {
            roots.push(BigRational::zero());
            while f.coeff(0).is_zero() {
                f = Self::new(f.coeffs[1..].to_vec());
            }
        }
        if f.is_constant() {
            return Some(roots);
        }
        let den = f.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = f.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let p_div = divisors(&ints[0].abs(), cap)?;
        let q_div = divisors(&ints.last().unwrap().abs(), cap)?;
        if p_div.len().saturating_mul(q_div.len()) > cap {
            return None;
        }
        let mut cands = Vec::new();
        for p in &p_div {
            for q in &q_div {
                let r = BigRational::new(p.clone(), q.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            if f.eval(&r).is_zero() {
                roots.push(r);
            }
        }
        roots.sort();
        Some(roots)
    }

    /// Integer multiple with coprime integer coefficients and positive leading term.
    pub fn primitive_part(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        for c in ints.iter_mut() {
            *c = &*c / &g * &sign;
        }
        ints
    }

    /// `s^w · f(1/s)`; requires `deg f ≤ w`.
    pub fn reversed(&self, w: usize) -> Result<Self, ExactError> {
        match self.degree() {
            None => Ok(Self::default()),
            Some(d) if d > w => Err(ExactError::DegreeBound { degree: d, bound: w }),
            Some(_) => {
                let mut v = vec![BigRational::zero(); w + 1];
                for (k, c) in self.coeffs.iter().enumerate() {
                    v[w - k] = c.clone();
                }
                Ok(Self::new(v))
            }
        }
    }

    /// `f(c·t)`
    pub fn scale_var(&self, c: &BigRational) -> Self {
        let mut p = BigRational::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            v.push(x * &p);
            p = &p * c;
        }
        Self::new(v)
    }

    /// `f(g(t))`
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::default();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(k, c)| k % 2 == 0 || c.is_zero())
    }

    /// For even `f`, the polynomial `f̃` with `f(t) = f̃(t²)`.
    pub fn even_part_in_square(&self) -> Result<Self, ExactError> {
        if !self.is_even() {
            return Err(ExactError::NotEven);
        }
        Ok(Self::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// Exact square root if `self` is a perfect square in ℚ[t].
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::default());
        }
        let n = self.degree().unwrap();
        if n % 2 == 1 {
            return None;
        }
        let lead = rat_sqrt(&self.leading())?;
        let m = n / 2;
        // Coefficients of the root from the top down.
        let mut r = vec![BigRational::zero(); m + 1];
        r[m] = lead;
        let two_lead = &r[m] * BigRational::from_integer(2.into());
        for k in (0..m).rev() {
            // coefficient of t^{m+k} in r² equals self[m+k]
            let mut s = BigRational::zero();
            for i in k + 1..m {
                let j = m + k - i;
                if j > k && j <= m {
                    s += &r[i] * &r[j];
                }
            }
            r[k] = (self.coeff(m + k) - s) / &two_lead;
        }
        let root = Self::new(r);
        (&root * &root == *self).then_some(root)
    }

    pub fn max_height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.numer().abs().max(c.denom().abs())).max().unwrap_or_default()
    }
}

pub fn rat_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

fn divisors(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    if n.is_zero() {
        return Some(vec![BigInt::one()]);
    }
    let nf = n.to_u64()?;
    let mut out = Vec::new();
    let mut k: u64 = 1;
    while k.checked_mul(k)? <= nf {
        if nf % k == 0 {
            out.push(BigInt::from(k));
            if k * k != nf {
                out.push(BigInt::from(nf / k));
            }
            if out.len() > cap {
                return None;
            }
        }
        k += 1;
        if k as usize > cap.saturating_mul(1000) {
            return None;
        }
    }
    Some(out)
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::default();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        RatPoly::new(v)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(RatPoly, Add add, Sub sub, Mul mul);

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let coeff_str = if a.is_integer() { a.numer().to_string() } else { format!("({a})") };
            match k {
                0 => write!(f, "{coeff_str}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{coeff_str}*")?;
                    }
                    if k == 1 {
                        write!(f, "t")?
                    } else {
                        write!(f, "t^{k}")?
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn division_and_gcd() {
        let a = RatPoly::from_ints(&[-1, 0, 1]); // t² − 1
        let b = RatPoly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, RatPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let g = RatPoly::from_ints(&[2, 2]).gcd(&RatPoly::from_ints(&[-2, 0, 2]));
        assert_eq!(g, b);
    }

    #[test]
    fn yun_decomposition() {
        // (t−1)² (t+2)³ t
        let f = &(&RatPoly::from_ints(&[-1, 1]).pow(2) * &RatPoly::from_ints(&[2, 1]).pow(3)) * &RatPoly::t();
        let dec = f.scale(&rat(5, 3)).squarefree_decomposition();
        assert_eq!(
            dec,
            vec![(1, RatPoly::t()), (2, RatPoly::from_ints(&[-1, 1])), (3, RatPoly::from_ints(&[2, 1]))]
        );
    }

    #[test]
    fn roots_and_sqrt() {
        let f = &RatPoly::from_ints(&[-1, 2]) * &RatPoly::from_ints(&[3, 1, 0, 1]);
        assert_eq!(f.rational_roots(1000).unwrap(), vec![rat(1, 2)]);
        let g = RatPoly::from_ints(&[1, -2, 1]).pow(2);
        assert_eq!(g.sqrt().unwrap(), RatPoly::from_ints(&[1, -2, 1]));
        assert!(RatPoly::from_ints(&[1, 0, 2]).sqrt().is_none());
    }

    #[test]
    fn reversal() {
        let f = RatPoly::from_ints(&[1, 2]);
        assert_eq!(f.reversed(3).unwrap(), RatPoly::from_ints(&[0, 0, 2, 1]));
        assert!(f.reversed(0).is_err());
    }
}
