use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Lattice, LatticeError};

/// Node budget for a single Fincke–Pohst enumeration.
pub const ENUMERATION_BUDGET: u64 = 200_000_000;

/// Number of roots: vectors of norm 2 (positive definite) or −2 (negative definite).
pub fn root_count(l: &Lattice) -> Result<usize, LatticeError> {
    if l.rank() == 0 {
        return Ok(0);
    }
    let sign = definite_sign(l)?;
    count_vectors_of_norm(l, 2 * sign)
}

fn definite_sign(l: &Lattice) -> Result<i64, LatticeError> {
    if l.is_positive_definite() {
        Ok(1)
    } else if l.is_negative_definite() {
        Ok(-1)
    } else {
        Err(LatticeError::NotDefinite)
    }
}

pub fn count_vectors_of_norm(l: &Lattice, norm: i64) -> Result<usize, LatticeError> {
    let mut count = 0;
    enumerate(l, norm, &mut |_| count += 1)?;
    Ok(count)
}

/// All vectors (lattice coordinates) of the given norm in a definite lattice.
pub fn short_vectors(l: &Lattice, norm: i64) -> Result<Vec<Vec<BigInt>>, LatticeError> {
    let mut out = Vec::new();
    enumerate(l, norm, &mut |v| out.push(v.iter().map(|&x| BigInt::from(x)).collect()))?;
    Ok(out)
}

fn enumerate(l: &Lattice, norm: i64, sink: &mut dyn FnMut(&[i64])) -> Result<(), LatticeError> {
    if l.rank() == 0 || norm == 0 {
        return Ok(());
    }
    let sign = definite_sign(l)?;
    if norm.signum() != sign {
        return Ok(());
    }
    let n = l.rank();
    let g: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| (l.gram()[(i, j)].to_i128().expect("Gram entry fits i128")) * sign as i128).collect())
        .collect();
    let (t, gr) = lll(g);
    let target = (norm * sign) as i128;
    let mut budget = ENUMERATION_BUDGET;
    let mut x = vec![0i64; n];
    let mut orig = vec![0i64; n];
    let q = cholesky(&gr);
    let bound = target as f64 * (1.0 + 1e-9) + 1e-9;
    let mut emit = |x: &[i64]| {
        if exact_norm(&gr, x) == target {
            for (j, o) in orig.iter_mut().enumerate() {
                *o = (0..n).map(|i| x[i] * t[i][j] as i64).sum();
            }
            sink(&orig);
        }
    };
    fp_recurse(&q, n - 1, bound, &mut x, &mut budget, &mut emit)?;
    Ok(())
}

fn exact_norm(g: &[Vec<i128>], x: &[i64]) -> i128 {
    let n = x.len();
    let mut s = 0i128;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        let mut r = 0i128;
        for j in 0..n {
            r += g[i][j] * x[j] as i128;
        }
        s += x[i] as i128 * r;
    }
    s
}

/// Fincke–Pohst quadratic form: `xᵀGx = Σᵢ q[i][i] (xᵢ + Σ_{j>i} q[i][j] xⱼ)²`.
fn cholesky(g: &[Vec<i128>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut q: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    q
}

fn fp_recurse(
    q: &[Vec<f64>],
    i: usize,
    remaining: f64,
    x: &mut [i64],
    budget: &mut u64,
    emit: &mut dyn FnMut(&[i64]),
) -> Result<(), LatticeError> {
    if *budget == 0 {
        return Err(LatticeError::Budget(ENUMERATION_BUDGET));
    }
    *budget -= 1;
    let n = x.len();
    let c: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let r = (remaining / q[i][i]).max(0.0).sqrt();
    let lo = (c - r - 1e-9).ceil() as i64;
    let hi = (c + r + 1e-9).floor() as i64;
    for v in lo..=hi {
        x[i] = v;
        let d = v as f64 - c;
        let rem = remaining - q[i][i] * d * d;
        if rem < -1e-7 {
            continue;
        }
        if i == 0 {
            if x.iter().any(|&y| y != 0) {
                emit(x);
            }
        } else {
            fp_recurse(q, i - 1, rem, x, budget, emit)?;
        }
    }
    x[i] = 0;
    Ok(())
}

/// LLL on a positive definite Gram matrix. Returns `(T, T·G·Tᵀ)`.
fn lll(mut g: Vec<Vec<i128>>) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let n = g.len();
    let mut t: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        let (mu, b) = gram_schmidt(&g);
        let mut changed = false;
        for j in (0..k).rev() {
            let (mu2, _) = if changed { gram_schmidt(&g) } else { (mu.clone(), b.clone()) };
            let r = mu2[k][j].round() as i128;
            if r != 0 {
                reduce(&mut g, &mut t, k, j, r);
                changed = true;
            }
        }
        let (mu, b) = if changed { gram_schmidt(&g) } else { (mu, b) };
        if b[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            k += 1;
        } else {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            t.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    (t, g)
}

/// `b_k ← b_k − r·b_j`, i.e. `G ← E G Eᵀ` with `E = I − r·e_k e_jᵀ`.
fn reduce(g: &mut [Vec<i128>], t: &mut [Vec<i128>], k: usize, j: usize, r: i128) {
    let n = g.len();
    let (gkk, gkj, gjj) = (g[k][k], g[k][j], g[j][j]);
    for i in 0..n {
        if i != k {
            let v = g[k][i] - r * g[j][i];
            g[k][i] = v;
            g[i][k] = v;
        }
    }
    g[k][k] = gkk - 2 * r * gkj + r * r * gjj;
    for c in 0..n {
        let v = t[k][c] - r * t[j][c];
        t[k][c] = v;
    }
}

fn gram_schmidt(g: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    let mut r = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i][j] as f64;
            for k in 0..j {
                s -= mu[j][k] * r[i][k];
            }
            r[i][j] = s;
            if j < i {
                mu[i][j] = s / b[j];
            }
        }
        b[i] = r[i][i];
    }
    (mu, b)
}
