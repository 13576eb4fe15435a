//! Named lattices with their construction recipes and certified invariants.
//!
//! Sign convention: `E6` is positive definite, `E6(-1)` negative definite;
//! `U = [[0,1],[1,0]]`, `A2 = [[2,-1],[-1,2]]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact::{rat, IntMatrix};
use crate::lattice::{
    discriminant_form, orthogonal_complement, overlattice, root_count, Lattice, LatticeError, Overlattice, Signature,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown lattice name `{0}`")]
    Unknown(String),
    #[error("cannot parse lattice expression `{expr}`: {reason}")]
    Parse { expr: String, reason: String },
    #[error("self-check failed for `{name}`: {field} is {got}, expected {expected}")]
    SelfCheck { name: String, field: &'static str, got: String, expected: String },
    #[error("construction of `{name}` failed: {source}")]
    Construction { name: String, source: LatticeError },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedInvariants {
    pub rank: usize,
    pub abs_det: u64,
    pub signature: (usize, usize),
    pub even: bool,
    /// `(p, length)` when the discriminant group is p-elementary.
    pub elementary: Option<(u64, usize)>,
    /// Number of vectors of norm ±2 (definite lattices only).
    pub roots: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub recipe: &'static str,
    pub lattice: Lattice,
    pub expected: ExpectedInvariants,
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.recipe)
    }
}

/// Names of the fixed (parameter-free) catalog entries.
pub const FIXED_NAMES: &[&str] = &[
    "U", "A2", "E6", "E7", "E8", "K12", "Nikulin", "M3", "Kummer2", "Kummer3", "E6triple_primed", "M3E6_primed",
    "LambdaK3", "Omega2", "Omega3",
];

// ---------------------------------------------------------------------------
// Root lattices

fn dynkin(n: usize, edges: &[(usize, usize)]) -> Lattice {
    let mut g = IntMatrix::scalar(n, &BigInt::from(2));
    for &(i, j) in edges {
        g[(i, j)] = BigInt::from(-1);
        g[(j, i)] = BigInt::from(-1);
    }
    Lattice::new(g).unwrap()
}

fn labelled(l: Lattice, prefix: &str) -> Lattice {
    let n = l.rank();
    l.with_labels((1..=n).map(|i| format!("{prefix}{i}")).collect())
}

pub fn a_n(n: usize) -> Lattice {
    let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    labelled(dynkin(n, &edges), "a")
}

/// Chain d1 − … − d_{n−1} with d_n attached to d_{n−2}.
pub fn d_n(n: usize) -> Lattice {
    assert!(n >= 4);
    let mut edges: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
    edges.push((n - 3, n - 1));
    labelled(dynkin(n, &edges), "d")
}

/// e1 − e2 − e3 − e4 − e5 with e6 attached to e3.
pub fn e6() -> Lattice {
    labelled(dynkin(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]), "e")
}

/// Chain e1 … e6 with e7 attached to e3.
pub fn e7() -> Lattice {
    labelled(dynkin(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)]), "e")
}

/// Chain e1 … e7 with e8 attached to e3.
pub fn e8() -> Lattice {
    labelled(dynkin(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]), "e")
}

pub fn u() -> Lattice {
    Lattice::from_i64(&[&[0, 1], &[1, 0]]).with_labels(vec!["u1".into(), "u2".into()])
}

// ---------------------------------------------------------------------------
// Glue constructions

fn zeros(n: usize) -> Vec<BigRational> {
    vec![BigRational::zero(); n]
}

/// The E6 glue class `v = (e1 + 2e2 + e4 + 2e5)/3`.
pub fn e6_glue() -> Vec<BigRational> {
    [1, 2, 0, 1, 2, 0].iter().map(|&c| rat(c, 3)).collect()
}

/// The A2 glue class `z = (a1 + 2a2)/3`.
pub fn a2_glue() -> Vec<BigRational> {
    vec![rat(1, 3), rat(2, 3)]
}

fn place(v: &[BigRational], offset: usize, n: usize, scale: i64) -> Vec<BigRational> {
    let mut out = zeros(n);
    for (i, x) in v.iter().enumerate() {
        out[offset + i] = x * BigRational::from_integer(scale.into());
    }
    out
}

fn add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn built(name: &str, r: Result<Overlattice, LatticeError>) -> Result<Overlattice, CatalogError> {
    r.map_err(|source| CatalogError::Construction { name: name.into(), source })
}

/// `(E6(−1)³)′ = E6(−1)³ + x`, `x = v⁽¹⁾ + v⁽²⁾ + v⁽³⁾`.
pub fn e6_triple_primed() -> Result<Overlattice, CatalogError> {
    let base = e6().rescale(-1).power(3);
    let v = e6_glue();
    let x = add(&add(&place(&v, 0, 18, 1), &place(&v, 6, 18, 1)), &place(&v, 12, 18, 1));
    built("E6triple_primed", overlattice(&base, &[x]))
}

/// Base lattice `U ⊕ A2 ⊕ E6(−1)³` with labelled basis.
pub fn lambda_k3_base() -> Lattice {
    Lattice::direct_sum(&[&u(), &a_n(2), &e6().rescale(-1).power(3)])
}

/// `(U ⊕ A2 ⊕ E6(−1)³)″ = base + {x, y}`, `y = (a1 + 2a2)/3 + v⁽¹⁾ − v⁽²⁾`.
pub fn lambda_k3_model() -> Result<Overlattice, CatalogError> {
    let base = lambda_k3_base();
    let v = e6_glue();
    let x = add(&add(&place(&v, 4, 22, 1), &place(&v, 10, 22, 1)), &place(&v, 16, 22, 1));
    let y = add(&add(&place(&a2_glue(), 2, 22, 1), &place(&v, 4, 22, 1)), &place(&v, 10, 22, -1));
    built("LambdaK3", overlattice(&base, &[x, y]))
}

/// Nikulin lattice: `A1(−1)⁸ + ½Σ eᵢ`.
pub fn nikulin() -> Result<Overlattice, CatalogError> {
    let base = Lattice::diagonal(&[-2; 8]);
    built("Nikulin", overlattice(&base, &[vec![rat(1, 2); 8]]))
}

/// `M_{ℤ/3} = A2(−1)⁶ + Σ z⁽ʲ⁾`.
pub fn m3() -> Result<Overlattice, CatalogError> {
    let base = a_n(2).rescale(-1).power(6);
    let hat = (0..6).fold(zeros(12), |acc, j| add(&acc, &place(&a2_glue(), 2 * j, 12, 1)));
    built("M3", overlattice(&base, &[hat]))
}

/// `(M_{ℤ/3} ⊕ E6(−1))′`: A2(−1)⁶ ⊕ E6(−1) + {M̂, n}, `n = v − z⁽¹⁾ + z⁽³⁾ − z⁽⁴⁾ + z⁽⁵⁾`.
pub fn m3_e6_primed() -> Result<Overlattice, CatalogError> {
    let base = Lattice::direct_sum(&[&a_n(2).rescale(-1).power(6), &e6().rescale(-1)]);
    let z = a2_glue();
    let hat = (0..6).fold(zeros(18), |acc, j| add(&acc, &place(&z, 2 * j, 18, 1)));
    let mut n = place(&e6_glue(), 12, 18, 1);
    for (j, s) in [(0, -1), (2, 1), (3, -1), (4, 1)] {
        n = add(&n, &place(&z, 2 * j, 18, s));
    }
    built("M3E6_primed", overlattice(&base, &[hat, n]))
}

/// Kummer lattice for ℤ/2: A1(−1)¹⁶ on the points of 𝔽₂⁴, glued by half-sums
/// over every affine hyperplane (the first-order Reed–Muller code).
pub fn kummer2() -> Result<Overlattice, CatalogError> {
    let base = Lattice::diagonal(&[-2; 16]);
    let mut glue = Vec::new();
    for normal in 1u32..16 {
        for c in 0..2 {
            let word: Vec<BigRational> = (0u32..16)
                .map(|p| if (normal & p).count_ones() % 2 == c { rat(1, 2) } else { BigRational::zero() })
                .collect();
            glue.push(word);
        }
    }
    glue.push(vec![rat(1, 2); 16]);
    built("Kummer2", overlattice(&base, &glue))
}

/// Kummer lattice for ℤ/3: A2(−1)⁹ on the points of AG(2,3), glued by
/// `Σ f(p) z⁽ᵖ⁾` for the affine functions `f = αx + βy + γ`.
pub fn kummer3() -> Result<Overlattice, CatalogError> {
    let base = a_n(2).rescale(-1).power(9);
    let z = a2_glue();
    let word = |f: &dyn Fn(i64, i64) -> i64| {
        let mut w = zeros(18);
        for px in 0..3 {
            for py in 0..3 {
                let p = (3 * px + py) as usize;
                w = add(&w, &place(&z, 2 * p, 18, f(px, py).rem_euclid(3)));
            }
        }
        w
    };
    let glue = vec![word(&|x, _| x), word(&|_, y| y), word(&|_, _| 1)];
    built("Kummer3", overlattice(&base, &glue))
}

/// Coinvariant lattice of the cyclic permutation of the three E6 blocks of
/// `(E6(−1)³)′`: the complement of the diagonal `e⁽¹⁾ + e⁽²⁾ + e⁽³⁾`.
pub fn k12() -> Result<Lattice, CatalogError> {
    let o = e6_triple_primed()?;
    let diag: Vec<Vec<BigRational>> = (0..6)
        .map(|i| {
            let mut v = zeros(18);
            for j in 0..3 {
                v[6 * j + i] = rat(1, 1);
            }
            let c = o.to_new_coords(&v).expect("diagonal lies in the base");
            c.into_iter().map(BigRational::from_integer).collect()
        })
        .collect();
    let perp = orthogonal_complement(&o.lattice, &crate::exact::RatMatrix::from_rows(diag))
        .map_err(|source| CatalogError::Construction { name: "K12".into(), source })?;
    Ok(perp.lattice)
}

// ---------------------------------------------------------------------------
// Entries

fn fixed_entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    let exp = |rank, abs_det, signature, elementary, roots| ExpectedInvariants {
        rank,
        abs_det,
        signature,
        even: true,
        elementary,
        roots,
    };
    let (recipe, lattice, expected) = match name {
        "U" => ("hyperbolic plane [[0,1],[1,0]]", u(), exp(2, 1, (1, 1), None, None)),
        "A2" => ("Cartan matrix of A2", a_n(2), exp(2, 3, (2, 0), Some((3, 1)), Some(6))),
        "E6" => ("Cartan matrix, e6 on e3", e6(), exp(6, 3, (6, 0), Some((3, 1)), Some(72))),
        "E7" => ("Cartan matrix, e7 on e3", e7(), exp(7, 2, (7, 0), Some((2, 1)), Some(126))),
        "E8" => ("Cartan matrix, e8 on e3", e8(), exp(8, 1, (8, 0), None, Some(240))),
        "K12" | "Omega3" => (
            "complement of the diagonal E6 in (E6(-1)^3)'",
            k12()?,
            exp(12, 729, (0, 12), Some((3, 6)), Some(0)),
        ),
        "Omega2" => ("E8(-2)", e8().rescale(-2), exp(8, 256, (0, 8), Some((2, 8)), Some(0))),
        "Nikulin" | "M2" => (
            "A1(-1)^8 + (1/2)·sum",
            nikulin()?.lattice,
            exp(8, 64, (0, 8), Some((2, 6)), Some(16)),
        ),
        "M3" => ("A2(-1)^6 + sum of z^(j)", m3()?.lattice, exp(12, 81, (0, 12), Some((3, 4)), Some(36))),
        "Kummer2" => (
            "A1(-1)^16 over F2^4 + affine-hyperplane half-sums",
            kummer2()?.lattice,
            exp(16, 64, (0, 16), Some((2, 6)), Some(32)),
        ),
        "Kummer3" => (
            "A2(-1)^9 over AG(2,3) + affine-function z-sums",
            kummer3()?.lattice,
            exp(18, 27, (0, 18), Some((3, 3)), Some(54)),
        ),
        "E6triple_primed" => (
            "E6(-1)^3 + (v1+v2+v3)",
            e6_triple_primed()?.lattice,
            exp(18, 3, (0, 18), Some((3, 1)), Some(216)),
        ),
        "M3E6_primed" => (
            "A2(-1)^6 + E6(-1) + {M^, n}",
            m3_e6_primed()?.lattice,
            exp(18, 27, (0, 18), Some((3, 3)), Some(108)),
        ),
        "LambdaK3" => (
            "U + A2 + E6(-1)^3 + {x, y}",
            lambda_k3_model()?.lattice,
            exp(22, 1, (3, 19), None, None),
        ),
        _ => return Err(CatalogError::Unknown(name.into())),
    };
    Ok(CatalogEntry { name: name.into(), recipe, lattice, expected })
}

/// Checks a lattice against a declared invariant vector.
pub fn check_invariants(name: &str, l: &Lattice, e: &ExpectedInvariants) -> Result<(), CatalogError> {
    let fail = |field, got: String, expected: String| {
        Err(CatalogError::SelfCheck { name: name.into(), field, got, expected })
    };
    if l.rank() != e.rank {
        return fail("rank", l.rank().to_string(), e.rank.to_string());
    }
    let det = l.det().abs();
    if det != BigInt::from(e.abs_det) {
        return fail("|det|", det.to_string(), e.abs_det.to_string());
    }
    let sig = l.signature();
    if (sig.pos, sig.neg) != e.signature || sig.zero != 0 {
        return fail("signature", sig.to_string(), format!("({},{})", e.signature.0, e.signature.1));
    }
    if l.is_even() != e.even {
        return fail("parity", l.is_even().to_string(), e.even.to_string());
    }
    if let Some((p, len)) = e.elementary {
        let q = discriminant_form(l).map_err(|source| CatalogError::Construction { name: name.into(), source })?;
        if !q.is_p_elementary(p) || q.length() != len {
            return fail("elementary", format!("{:?}", q.invariants()), format!("({p})^{len}"));
        }
    }
    if let Some(r) = e.roots {
        let got = root_count(l).map_err(|source| CatalogError::Construction { name: name.into(), source })?;
        if got != r {
            return fail("roots", got.to_string(), r.to_string());
        }
    }
    Ok(())
}

fn cache() -> &'static Mutex<HashMap<String, Lattice>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Lattice>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Builds a fixed entry and runs its self-check (results are memoised).
pub fn entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    let e = fixed_entry(name)?;
    if cache().lock().unwrap().get(name) != Some(&e.lattice) {
        check_invariants(name, &e.lattice, &e.expected)?;
        cache().lock().unwrap().insert(name.into(), e.lattice.clone());
    }
    Ok(e)
}

/// A catalog with optional Gram overrides, used for fault injection.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    overrides: BTreeMap<String, IntMatrix>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_override(mut self, name: &str, gram: IntMatrix) -> Self {
        self.overrides.insert(name.into(), gram);
        self
    }

    /// Fixed entry with its self-check applied to the (possibly overridden) Gram.
    pub fn fixed(&self, name: &str) -> Result<Lattice, CatalogError> {
        match self.overrides.get(name) {
            None => Ok(entry(name)?.lattice),
            Some(g) => {
                let expected = fixed_entry(name)?.expected;
                let l = Lattice::new(g.clone()).map_err(|source| CatalogError::Construction { name: name.into(), source })?;
                check_invariants(name, &l, &expected)?;
                Ok(l)
            }
        }
    }

    /// Parses and builds an expression such as `U(3)+A2`, `E8(-2)`, `A2(-1)^6`,
    /// `<6>`, `(E8^2+A2)(-1)`, `D4(-1)` or a fixed catalog name.
    pub fn lattice(&self, expr: &str) -> Result<Lattice, CatalogError> {
        let mut p = Parser { s: expr.as_bytes(), pos: 0, expr, cat: self };
        let l = p.expr()?;
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(l)
    }
}

/// Default-catalog lookup; see [`Catalog::lattice`] for the accepted grammar.
pub fn named_lattice(expr: &str) -> Result<Lattice, CatalogError> {
    Catalog::new().lattice(expr)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    expr: &'a str,
    cat: &'a Catalog,
}

impl Parser<'_> {
    fn err(&self, reason: &str) -> CatalogError {
        CatalogError::Parse { expr: self.expr.into(), reason: format!("{reason} at offset {}", self.pos) }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Lattice, CatalogError> {
        let mut parts = vec![self.term()?];
        loop {
            self.skip_ws();
            if self.peek() == Some(b'+') || self.peek_str("⊕") {
                self.pos += if self.peek() == Some(b'+') { 1 } else { "⊕".len() };
                parts.push(self.term()?);
            } else {
                break;
            }
        }
        let refs: Vec<&Lattice> = parts.iter().collect();
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Lattice::direct_sum(&refs) })
    }

    fn peek_str(&self, t: &str) -> bool {
        self.s[self.pos..].starts_with(t.as_bytes())
    }

    fn int(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let r = std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok();
        if r.is_none() {
            self.pos = start;
        }
        r
    }

    fn term(&mut self) -> Result<Lattice, CatalogError> {
        self.skip_ws();
        let mut l = self.primary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'(') => {
                    let save = self.pos;
                    self.pos += 1;
                    match self.int() {
                        Some(n) if n != 0 => {
                            self.skip_ws();
                            if self.peek() != Some(b')') {
                                return Err(self.err("expected `)`"));
                            }
                            self.pos += 1;
                            l = l.rescale(n);
                        }
                        _ => {
                            self.pos = save;
                            return Err(self.err("expected a nonzero integer scale"));
                        }
                    }
                }
                Some(b'^') => {
                    self.pos += 1;
                    let k = self.int().filter(|&k| k >= 0).ok_or_else(|| self.err("expected exponent"))?;
                    l = l.power(k as usize);
                }
                _ => return Ok(l),
            }
        }
    }

    fn primary(&mut self) -> Result<Lattice, CatalogError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let l = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(l)
            }
            Some(b'<') => {
                self.pos += 1;
                let n = self.int().ok_or_else(|| self.err("expected integer"))?;
                self.skip_ws();
                if self.peek() != Some(b'>') {
                    return Err(self.err("expected `>`"));
                }
                self.pos += 1;
                Ok(Lattice::diagonal(&[n]))
            }
            _ => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                if word.is_empty() {
                    return Err(self.err("expected a lattice name"));
                }
                self.atom(word).map_err(|e| match e {
                    CatalogError::Unknown(_) => CatalogError::Unknown(word.into()),
                    other => other,
                })
            }
        }
    }

    fn atom(&self, word: &str) -> Result<Lattice, CatalogError> {
        if FIXED_NAMES.contains(&word) || word == "M2" {
            let key = if word == "M2" { "Nikulin" } else { word };
            return self.cat.fixed(key);
        }
        let (head, digits) = word.split_at(word.find(|c: char| c.is_ascii_digit()).unwrap_or(word.len()));
        let n: usize = digits.parse().map_err(|_| CatalogError::Unknown(word.into()))?;
        match head {
            "A" if n >= 1 => Ok(a_n(n)),
            "D" if n >= 4 => Ok(d_n(n)),
            _ => Err(CatalogError::Unknown(word.into())),
        }
    }
}

/// Discriminant-group sizes for quick display.
pub fn describe(l: &Lattice) -> String {
    let sig: Signature = l.signature();
    format!("rank {} sig {} det {}", l.rank(), sig, l.det())
}

pub fn abs_det_u64(l: &Lattice) -> Option<u64> {
    l.det().abs().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parser_handles_scales_powers_and_sums() {
        let l = named_lattice("U(3)+<6>").unwrap();
        assert_eq!(l.rank(), 3);
        assert_eq!(l.det(), BigInt::from(-54));
        let l = named_lattice("(E8^2+A2)(-1)").unwrap();
        assert_eq!(l.rank(), 18);
        assert!(l.is_negative_definite());
        assert_eq!(named_lattice("D4(-1)").unwrap().det(), BigInt::from(4));
        assert!(matches!(named_lattice("F4"), Err(CatalogError::Unknown(_))));
        assert!(matches!(named_lattice("A2(0)"), Err(CatalogError::Parse { .. })));
    }

    #[test]
    fn small_entries_self_check() {
        for name in ["U", "A2", "E6", "E7", "E8", "Nikulin", "M3", "Omega2"] {
            entry(name).unwrap();
        }
    }

    #[test]
    fn override_triggers_failure() {
        let bad = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        let cat = Catalog::new().with_override("A2", bad);
        assert!(matches!(cat.fixed("A2"), Err(CatalogError::SelfCheck { field: "|det|", .. })));
        assert!(Catalog::new().fixed("A2").is_ok());
    }
}

#[cfg(test)]
mod heavy {
    use super::*;

    #[test]
    fn glued_entries_self_check() {
        for name in ["K12", "Kummer2", "Kummer3", "E6triple_primed", "M3E6_primed", "LambdaK3"] {
            if let Err(e) = entry(name) {
                panic!("{e}");
            }
        }
    }
}
