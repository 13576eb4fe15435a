use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Lattice, LatticeError, Signature};
use crate::exact::{smith, RatMatrix};

/// Largest group order handled by the exhaustive isomorphism test.
pub const FQF_ORDER_CAP: u64 = 10_000;
const BACKTRACK_BUDGET: u64 = 5_000_000;

/// Finite quadratic form `(A, q)`: `A = ⊕ ℤ/dᵢ` with `d₁ | d₂ | …`, `q` given on
/// generators by `q(gᵢ) mod 2` on the diagonal and `b(gᵢ, gⱼ) mod 1` off it.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    invariants: Vec<BigInt>,
    gram: Vec<Vec<BigRational>>,
    lifts: Option<RatMatrix>,
}

fn mod_unit(x: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(m.into());
    
    x - (x / &m).floor() * &m
}

impl FiniteQuadraticForm {
    pub fn new(invariants: Vec<BigInt>, gram: Vec<Vec<BigRational>>) -> Result<Self, LatticeError> {
        let k = invariants.len();
        if gram.len() != k || gram.iter().any(|r| r.len() != k) {
            return Err(LatticeError::Dimension { got: gram.len(), expected: k });
        }
        let mut g = gram;
        for i in 0..k {
            for j in 0..k {
                g[i][j] = if i == j { mod_unit(&g[i][j], 2) } else { mod_unit(&g[i][j], 1) };
            }
        }
        Ok(FiniteQuadraticForm { invariants, gram: g, lifts: None })
    }

    pub fn trivial() -> Self {
        FiniteQuadraticForm { invariants: Vec::new(), gram: Vec::new(), lifts: None }
    }

    pub fn invariants(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    /// Generators as vectors of `L ⊗ ℚ` (lattice coordinates) when built from a lattice.
    pub fn lifts(&self) -> Option<&RatMatrix> {
        self.lifts.as_ref()
    }

    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }

    pub fn length(&self) -> usize {
        self.invariants.len()
    }

    pub fn p_length(&self, p: u64) -> usize {
        super::p_length(&self.invariants, p)
    }

    pub fn is_p_elementary(&self, p: u64) -> bool {
        self.invariants.iter().all(|d| *d == BigInt::from(p))
    }

    pub fn opposite(&self) -> Self {
        let gram = self.gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let mut out = Self::new(self.invariants.clone(), gram).unwrap();
        out.lifts = self.lifts.clone();
        out
    }

    /// `q(x)` mod 2 for an element given in generator coordinates.
    pub fn value(&self, x: &[i64]) -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..x.len() {
            s += &self.gram[i][i] * BigRational::from_integer((x[i] * x[i]).into());
            for j in i + 1..x.len() {
                s += &self.gram[i][j] * BigRational::from_integer((2 * x[i] * x[j]).into());
            }
        }
        mod_unit(&s, 2)
    }

    pub fn pairing(&self, x: &[i64], y: &[i64]) -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..x.len() {
            for j in 0..y.len() {
                s += &self.gram[i][j] * BigRational::from_integer((x[i] * y[j]).into());
            }
        }
        mod_unit(&s, 1)
    }

    /// Lift of an element to `L*` (requires `lifts`).
    pub fn lift(&self, x: &[i64]) -> Option<Vec<BigRational>> {
        let l = self.lifts.as_ref()?;
        let coeffs: Vec<BigRational> = x.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        Some(crate::exact::vec_mat(&coeffs, l))
    }

    fn small_invariants(&self) -> Result<Vec<u64>, LatticeError> {
        let order = self.order();
        match order.to_u64() {
            Some(o) if o <= FQF_ORDER_CAP => Ok(self.invariants.iter().map(|d| d.to_u64().unwrap()).collect()),
            _ => Err(LatticeError::OrderCap { order, cap: FQF_ORDER_CAP }),
        }
    }

    /// All elements in mixed-radix order (bounded by `FQF_ORDER_CAP`).
    pub fn elements(&self) -> Result<Vec<Vec<i64>>, LatticeError> {
        let inv = self.small_invariants()?;
        Ok(Enumerated::elements(&inv))
    }

    pub fn element_order(&self, x: &[i64]) -> BigInt {
        self.invariants
            .iter()
            .zip(x)
            .fold(BigInt::one(), |acc, (d, &c)| acc.lcm(&(d / d.gcd(&BigInt::from(c)))))
    }
}

impl fmt::Debug for FiniteQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv: Vec<String> = self.invariants.iter().map(|d| d.to_string()).collect();
        write!(f, "FQF[{}]", inv.join(","))?;
        for r in &self.gram {
            let row: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, " ({})", row.join(" "))?;
        }
        Ok(())
    }
}

/// Discriminant form `L*/L` of an even nondegenerate lattice.
pub fn discriminant_form(l: &Lattice) -> Result<FiniteQuadraticForm, LatticeError> {
    if !l.is_even() {
        return Err(LatticeError::NotEven);
    }
    if l.det().is_zero() {
        return Err(LatticeError::Degenerate);
    }
    let nf = smith(l.gram());
    let n = l.rank();
    let mut lifts = Vec::new();
    let mut invariants = Vec::new();
    for i in 0..n {
        let d = nf.d[(i, i)].clone();
        if d.is_one() {
            continue;
        }
        let dr = BigRational::from_integer(d.clone());
        lifts.push(nf.u.row(i).iter().map(|x| BigRational::from_integer(x.clone()) / &dr).collect::<Vec<_>>());
        invariants.push(d);
    }
    let k = lifts.len();
    let mut gram = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = l.inner(&lifts[i], &lifts[j]);
        }
    }
    let mut q = FiniteQuadraticForm::new(invariants, gram)?;
    q.lifts = if k > 0 { Some(RatMatrix::from_rows(lifts)) } else { None };
    Ok(q)
}

/// Integer model of a form: values scaled by `n = lcm(dᵢ)`, `q` mod `2n`, `b` mod `n`.
struct Enumerated {
    inv: Vec<u64>,
    n: i64,
    table: Vec<Vec<i64>>,
    elems: Vec<Vec<i64>>,
    qv: Vec<i64>,
    ord: Vec<u64>,
    radix: Vec<usize>,
}

impl Enumerated {
    fn elements(inv: &[u64]) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &d in inv {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for e in &out {
                for c in 0..d as i64 {
                    let mut v = e.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    fn build(q: &FiniteQuadraticForm) -> Result<Self, LatticeError> {
        let inv = q.small_invariants()?;
        let n = inv.iter().fold(1u64, |a, &d| a.lcm(&d)) as i64;
        let nr = BigRational::from_integer(n.into());
        let k = inv.len();
        let mut table = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let v = &q.gram[i][j] * &nr;
                if !v.is_integer() {
                    return Err(LatticeError::NotIntegral);
                }
                table[i][j] = v.to_integer().to_i64().unwrap();
            }
        }
        let elems = Self::elements(&inv);
        let mut radix = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            radix[i] = radix[i + 1] * inv[i + 1] as usize;
        }
        let mut e = Enumerated { inv, n, table, elems, qv: vec![], ord: vec![], radix };
        e.qv = e.elems.iter().map(|x| e.q(x)).collect();
        e.ord = e.elems.iter().map(|x| e.order(x)).collect();
        Ok(e)
    }

    fn q(&self, x: &[i64]) -> i64 {
        let k = x.len();
        let mut s: i64 = 0;
        let m = 2 * self.n;
        for i in 0..k {
            s = (s + x[i] * x[i] % m * self.table[i][i]) % m;
            for j in i + 1..k {
                s = (s + 2 * x[i] * x[j] % m * self.table[i][j]) % m;
            }
        }
        s.rem_euclid(m)
    }

    fn b(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s: i64 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                s = (s + x[i] * y[j] % self.n * self.table[i][j]) % self.n;
            }
        }
        s.rem_euclid(self.n)
    }

    fn order(&self, x: &[i64]) -> u64 {
        self.inv.iter().zip(x).fold(1u64, |acc, (&d, &c)| acc.lcm(&(d / d.gcd(&(c as u64)))))
    }

    fn index(&self, x: &[i64]) -> usize {
        x.iter().zip(&self.radix).map(|(&c, &r)| c as usize * r).sum()
    }

    fn add(&self, x: &[i64], y: &[i64], m: i64) -> Vec<i64> {
        x.iter().zip(y).zip(&self.inv).map(|((&a, &b), &d)| (a + m * b).rem_euclid(d as i64)).collect()
    }

    fn profile(&self) -> HashMap<(u64, i64), usize> {
        let mut h = HashMap::new();
        for i in 0..self.elems.len() {
            *h.entry((self.ord[i], self.qv[i])).or_insert(0) += 1;
        }
        h
    }
}

/// Exhaustive isometry test for finite quadratic forms of order ≤ `FQF_ORDER_CAP`.
pub fn fqf_isomorphic(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm) -> Result<bool, LatticeError> {
    if a.invariants != b.invariants {
        return Ok(false);
    }
    let ea = Enumerated::build(a)?;
    let eb = Enumerated::build(b)?;
    if ea.profile() != eb.profile() {
        return Ok(false);
    }
    let k = ea.inv.len();
    if k == 0 {
        return Ok(true);
    }
    let candidates: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..eb.elems.len()).filter(|&e| eb.ord[e] == ea.inv[i] && eb.qv[e] == ea.table[i][i] % (2 * ea.n)).collect()
        })
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut budget = BACKTRACK_BUDGET;
    let mut member = vec![false; eb.elems.len()];
    member[0] = true;
    let mut subgroup = vec![0usize];
    let found = backtrack(&ea, &eb, &candidates, &mut chosen, &mut member, &mut subgroup, &mut budget);
    if budget == 0 && !found {
        return Err(LatticeError::Budget(BACKTRACK_BUDGET));
    }
    Ok(found)
}

fn backtrack(
    ea: &Enumerated,
    eb: &Enumerated,
    candidates: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    member: &mut Vec<bool>,
    subgroup: &mut Vec<usize>,
    budget: &mut u64,
) -> bool {
    let i = chosen.len();
    if i == candidates.len() {
        return true;
    }
    let d = ea.inv[i] as i64;
    'cand: for &c in &candidates[i] {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let h = &eb.elems[c];
        for (j, &prev) in chosen.iter().enumerate() {
            if eb.b(h, &eb.elems[prev]) != ea.table[i][j].rem_euclid(ea.n) {
                continue 'cand;
            }
        }
        // ⟨h⟩ ∩ current subgroup must be trivial.
        for m in 1..d {
            let mh: Vec<i64> = h.iter().zip(&eb.inv).map(|(&x, &dd)| (x * m).rem_euclid(dd as i64)).collect();
            if member[eb.index(&mh)] {
                continue 'cand;
            }
        }
        let base_len = subgroup.len();
        for s in 0..base_len {
            let sv = eb.elems[subgroup[s]].clone();
            for m in 1..d {
                let idx = eb.index(&eb.add(&sv, h, m));
                member[idx] = true;
                subgroup.push(idx);
            }
        }
        chosen.push(c);
        if backtrack(ea, eb, candidates, chosen, member, subgroup, budget) {
            return true;
        }
        chosen.pop();
        for idx in subgroup.drain(base_len..) {
            member[idx] = false;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenusVerdict {
    Unique,
    Unknown,
}

impl fmt::Display for GenusVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenusVerdict::Unique => "unique",
            GenusVerdict::Unknown => "unknown",
        })
    }
}

/// Sufficient criteria for the genus of `(signature, q)` to contain one class:
/// indefinite with `l(A) ≤ rank − 2`, or definite of rank ≤ 2 where the
/// reduced binary forms of that determinant are searched directly.
pub fn genus_unique(sig: Signature, q: &FiniteQuadraticForm) -> GenusVerdict {
    let rank = sig.pos + sig.neg;
    if sig.zero > 0 {
        return GenusVerdict::Unknown;
    }
    if sig.pos > 0 && sig.neg > 0 && q.length() + 2 <= rank {
        return GenusVerdict::Unique;
    }
    if (sig.pos == 0 || sig.neg == 0) && rank <= 2 {
        let sign: i64 = if sig.neg > 0 { -1 } else { 1 };
        let matches = definite_classes(rank, q.order(), sign)
            .into_iter()
            .filter(|l| discriminant_form(l).ok().is_some_and(|ql| fqf_isomorphic(&ql, q).unwrap_or(false)))
            .count();
        if matches == 1 {
            return GenusVerdict::Unique;
        }
    }
    if sig.pos > 0 && sig.neg > 0 && rank >= 3 && !has_large_square_like_divisor(rank, &q.order()) {
        return GenusVerdict::Unique;
    }
    GenusVerdict::Unknown
}

/// Whether `k^{n(n−1)/2}` divides `4^{⌊n/2⌋}·d` for some non-square
/// `k ≡ 0, 1 (mod 4)`; when it does not, an indefinite genus of rank `n ≥ 3`
/// has a single class (Conway–Sloane, SPLAG ch. 15).
fn has_large_square_like_divisor(n: usize, d: &BigInt) -> bool {
    let big = BigInt::from(4u32).pow((n / 2) as u32) * d;
    let e = (n * (n - 1) / 2) as u32;
    let mut k = 2u64;
    loop {
        let ke = BigInt::from(k).pow(e);
        if ke > big {
            return false;
        }
        let r = k.isqrt();
        if (k.is_multiple_of(4) || k % 4 == 1) && r * r != k && (&big % &ke).is_zero() {
            return true;
        }
        k += 1;
    }
}

/// One representative per isometry class of even definite lattices of rank
/// ≤ 2 and given |det|.
fn definite_classes(rank: usize, det: BigInt, sign: i64) -> Vec<Lattice> {
    let Some(det) = det.to_i64() else { return Vec::new() };
    match rank {
        0 => vec![Lattice::diagonal(&[])],
        1 if det % 2 == 0 => vec![Lattice::diagonal(&[sign * det])],
        2 => {
            let mut out = Vec::new();
            // Reduced: 0 ≤ 2b ≤ a ≤ c, a and c even, ac − b² = det.
            let mut a = 2;
            while 3 * a * a <= 4 * det {
                for b in 0..=a / 2 {
                    let num = det + b * b;
                    if num % a == 0 {
                        let c = num / a;
                        if c >= a && c % 2 == 0 {
                            out.push(Lattice::from_i64(&[&[sign * a, sign * b], &[sign * b, sign * c]]));
                        }
                    }
                }
                a += 2;
            }
            out
        }
        _ => Vec::new(),
    }
}
