//! Factorization in ℚ[t]: Cantor–Zassenhaus modulo a small prime, linear
//! Hensel lifting, and recombination of the lifted factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RatPoly;

const PRIMES: [u64; 12] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Monic irreducible factors over ℚ of a square-free `f`, sorted by degree
/// then coefficients. Constants give an empty list.
pub fn factor_squarefree(f: &RatPoly) -> Vec<RatPoly> {
    if f.is_constant() {
        return Vec::new();
    }
    let mut g = f.primitive_part();
    let mut out = Vec::new();
    if g[0].is_zero() {
        out.push(RatPoly::t());
        g.remove(0);
    }
    if g.len() > 1 {
        out.extend(factor_primitive(&g).into_iter().map(|h| to_rat(&h).monic()));
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    out
}

fn to_rat(g: &[BigInt]) -> RatPoly {
    RatPoly::new(g.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

fn factor_primitive(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n == 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    // Fewest modular factors among the usable primes.
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    for &p in &PRIMES {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce(f, p);
        if gcd_p(&fp, &derivative_p(&fp, p), p).len() > 1 {
            continue;
        }
        let facs = factor_mod_p(&make_monic(&fp, p), p);
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
    }
    let (p, facs) = best.expect("a square-free integer polynomial stays square-free modulo some small prime");
    if facs.len() == 1 {
        return vec![f.to_vec()];
    }
    // Coefficients of a factor of f·lc are bounded by |lc|·2ⁿ·‖f‖₂.
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = lc.abs() * (BigInt::one() << n) * (norm2.sqrt() + 1u32);
    let mut modulus = BigInt::from(p);
    let mut k = 1;
    while modulus <= &bound * 2u32 {
        modulus *= p;
        k += 1;
    }
    let lifted = hensel_lift(f, &facs, p, k);
    recombine(f, lifted, &modulus)
}

fn recombine(f: &[BigInt], mut facs: Vec<Vec<BigInt>>, m: &BigInt) -> Vec<Vec<BigInt>> {
    let mut f = f.to_vec();
    let mut out = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= facs.len() {
        let lc = f.last().unwrap().clone();
        for subset in subsets(facs.len(), s) {
            let mut g = vec![lc.clone()];
            for &i in &subset {
                g = mul_mod(&g, &facs[i], m);
            }
            let g = primitive(&symmetric(&g, m));
            if let Some(q) = div_exact_z(&f, &g) {
                out.push(g);
                f = q;
                for &i in subset.iter().rev() {
                    facs.remove(i);
                }
                continue 'outer;
            }
        }
        s += 1;
    }
    out.push(primitive(&f));
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn primitive(g: &[BigInt]) -> Vec<BigInt> {
    let c = g.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    let sign = if g.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    trim_z(g.iter().map(|x| x / &c * &sign).collect())
}

fn symmetric(g: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half: BigInt = m / 2u32;
    trim_z(g.iter().map(|c| {
        let r = c.mod_floor(m);
        if r > half { r - m } else { r }
    }).collect())
}

fn trim_z(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
    v
}

fn div_exact_z(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let (n, d) = (f.len() - 1, g.len() - 1);
    if d > n {
        return None;
    }
    let mut r = f.to_vec();
    let mut q = vec![BigInt::zero(); n - d + 1];
    let lg = g.last().unwrap();
    for i in (0..=n - d).rev() {
        let (c, rem) = r[i + d].div_rem(lg);
        if !rem.is_zero() {
            return None;
        }
        for j in 0..=d {
            r[i + j] -= &c * &g[j];
        }
        q[i] = c;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out.iter().map(|c| c.mod_floor(m)).collect()
}

fn mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Lifts `f ≡ lc(f) ∏ uᵢ (mod p)` (monic `uᵢ`) to monic factors modulo `p^k`.
fn hensel_lift(f: &[BigInt], facs: &[Vec<u64>], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let m = BigInt::from(p).pow(k);
    let mut rest: Vec<BigInt> = f.to_vec();
    let mut out = Vec::new();
    for i in 0..facs.len() - 1 {
        let g0 = &facs[i];
        let h0 = facs[i + 1..].iter().fold(vec![1u64], |acc, u| mul_p(&acc, u, p));
        let lc = rest.last().unwrap().mod_floor(&m);
        let h0 = scale_p(&h0, (&lc % BigInt::from(p)).to_u64().unwrap(), p);
        let (g, h) = lift_pair(&rest, g0, &h0, p, k);
        out.push(g);
        rest = h;
    }
    let lc = rest.last().unwrap().clone();
    let inv = lc.modinv(&m).expect("leading coefficient is a unit");
    out.push(rest.iter().map(|c| (c * &inv).mod_floor(&m)).collect());
    out
}

/// `f ≡ g h (mod p)` with monic `g` lifted to `mod p^k`, `g` stays monic.
fn lift_pair(f: &[BigInt], g0: &[u64], h0: &[u64], p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (_, _, t) = ext_gcd_p(g0, h0, p);
    let pb = BigInt::from(p);
    let mut g: Vec<BigInt> = g0.iter().map(|&c| BigInt::from(c)).collect();
    let mut h: Vec<BigInt> = h0.iter().map(|&c| BigInt::from(c)).collect();
    let mut m = pb.clone();
    for _ in 1..k {
        let gh = mul_z(&g, &h);
        let len = f.len().max(gh.len());
        let mut e = vec![0u64; len];
        for (i, slot) in e.iter_mut().enumerate() {
            let fi = f.get(i).cloned().unwrap_or_default();
            let gi = gh.get(i).cloned().unwrap_or_default();
            let d = fi - gi;
            debug_assert!((&d % &m).is_zero());
            *slot = (d / &m).mod_floor(&pb).to_u64().unwrap();
        }
        let e = trim_p(e);
        // σ g + τ h = e with deg τ < deg g
        let tau = divrem_p(&mul_p(&t, &e, p), g0, p).1;
        let sigma = divrem_p(&sub_p(&e, &mul_p(&tau, h0, p), p), g0, p).0;
        add_scaled(&mut g, &tau, &m);
        add_scaled(&mut h, &sigma, &m);
        m *= p;
    }
    let g = g.iter().map(|c| c.mod_floor(&m)).collect();
    let h = h.iter().map(|c| c.mod_floor(&m)).collect();
    (g, h)
}

fn add_scaled(a: &mut Vec<BigInt>, b: &[u64], m: &BigInt) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (x, &y) in a.iter_mut().zip(b) {
        *x += m * y;
    }
}

// ---- polynomials over 𝔽_p, ascending coefficients, no trailing zeros ----

fn reduce(f: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    trim_p(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn trim_p(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_p(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn scale_p(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    trim_p(a.iter().map(|&x| x * c % p).collect())
}

fn make_monic(a: &[u64], p: u64) -> Vec<u64> {
    scale_p(a, inv_p(*a.last().unwrap(), p), p)
}

fn sub_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim_p((0..n).map(|i| (a.get(i).unwrap_or(&0) + p - b.get(i).unwrap_or(&0)) % p).collect())
}

fn mul_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim_p(out)
}

fn divrem_p(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = inv_p(*b.last().unwrap(), p);
    let d = b.len() - 1;
    let mut q = vec![0u64; r.len() - d];
    for i in (0..q.len()).rev() {
        let c = r[i + d] * inv % p;
        q[i] = c;
        for j in 0..=d {
            r[i + j] = (r[i + j] + p - c * b[j] % p) % p;
        }
    }
    (trim_p(q), trim_p(r))
}

fn gcd_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = divrem_p(&a, &b, p).1;
        a = b;
        b = r;
    }
    if a.is_empty() { a } else { make_monic(&a, p) }
}

/// `(g, s, t)` with `s a + t b = g = gcd(a, b)` monic.
fn ext_gcd_p(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem_p(&r0, &r1, p);
        let s2 = sub_p(&s0, &mul_p(&q, &s1, p), p);
        let t2 = sub_p(&t0, &mul_p(&q, &t1, p), p);
        (r0, r1, s0, s1, t0, t1) = (r1, r, s1, s2, t1, t2);
    }
    let inv = inv_p(*r0.last().unwrap(), p);
    (scale_p(&r0, inv, p), scale_p(&s0, inv, p), scale_p(&t0, inv, p))
}

fn derivative_p(a: &[u64], p: u64) -> Vec<u64> {
    trim_p(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

fn powmod_p(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = divrem_p(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = divrem_p(&mul_p(&r, &b, p), m, p).1;
        }
        b = divrem_p(&mul_p(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

/// Monic irreducible factors of a monic square-free `f` over 𝔽_p (p odd).
fn factor_mod_p(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let x = vec![0u64, 1];
    let mut rest = f.to_vec();
    let mut h = x.clone();
    let mut d = 1usize;
    while rest.len() > 1 {
        if 2 * d > rest.len() - 1 {
            out.push(rest.clone());
            break;
        }
        h = powmod_p(&h, p as u128, &rest, p);
        let g = gcd_p(&sub_p(&h, &x, p), &rest, p);
        if g.len() > 1 {
            equal_degree(&g, d, p, &mut out);
            rest = divrem_p(&rest, &g, p).0;
            h = divrem_p(&h, &rest, p).1;
        }
        d += 1;
    }
    out.sort();
    out
}

fn equal_degree(g: &[u64], d: usize, p: u64, out: &mut Vec<Vec<u64>>) {
    if g.len() - 1 == d {
        out.push(g.to_vec());
        return;
    }
    let e = ((p as u128).pow(d as u32) - 1) / 2;
    // Deterministic sweep of splitting polynomials t^j + c.
    for j in 1..g.len() - 1 {
        for c in 0..p {
            let mut a = vec![0u64; j + 1];
            a[0] = c;
            a[j] = 1;
            let b = sub_p(&powmod_p(&a, e, g, p), &[1], p);
            let s = gcd_p(&b, g, p);
            if s.len() > 1 && s.len() < g.len() {
                equal_degree(&s, d, p, out);
                equal_degree(&divrem_p(g, &s, p).0, d, p, out);
                return;
            }
        }
    }
    unreachable!("equal-degree splitting found no split");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    fn product(fs: &[RatPoly]) -> RatPoly {
        fs.iter().fold(p(&[1]), |a, b| &a * b)
    }

    #[test]
    fn splits_over_q_but_not_further() {
        // 27t⁶ − 1 = (3t² − 1)(9t⁴ + 3t² + 1)
        let f = factor_squarefree(&p(&[-1, 0, 0, 0, 0, 0, 27]));
        assert_eq!(f.len(), 2);
        assert_eq!(f[0], p(&[-1, 0, 3]).monic());
        assert_eq!(f[1], p(&[1, 0, 3, 0, 9]).monic());
        // Swinnerton-Dyer: irreducible, splits into quadratics mod every p.
        let sd = p(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_squarefree(&sd), vec![sd.clone()]);
    }

    #[test]
    fn products_are_recovered() {
        let parts = vec![p(&[0, 1]), p(&[2, 1]), p(&[1, 1, 1]), p(&[-2, 0, 0, 1]), p(&[1, 0, 0, 0, 0, 1, 1])];
        let f = product(&parts).scale(&BigRational::from_integer(6.into()));
        let got = factor_squarefree(&f);
        assert_eq!(got.len(), parts.len());
        assert_eq!(product(&got), f.monic());
        for g in &parts {
            assert!(got.contains(&g.monic()));
        }
    }

    #[test]
    fn cyclotomic_irreducible() {
        let phi = p(&[1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1]);
        let got = factor_squarefree(&phi);
        assert_eq!(got, vec![phi]);
        let t12 = p(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(factor_squarefree(&t12).len(), 6);
    }
}
