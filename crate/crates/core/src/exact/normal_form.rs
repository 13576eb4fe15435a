use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `u · m · v = d`, with `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

fn add_row_multiple(m: &mut IntMatrix, target: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for j in 0..m.ncols() {
        let delta = &m[(src, j)] * f;
        m[(target, j)] += delta;
    }
}

fn add_col_multiple(m: &mut IntMatrix, target: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for i in 0..m.nrows() {
        let delta = &m[(i, src)] * f;
        m[(i, target)] += delta;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.ncols() {
        m[(r, j)] = -m[(r, j)].clone();
    }
}

/// Row-style Hermite normal form: `u · m = h` with `v = I`.
///
/// `h` is in row echelon form, pivots positive, entries above each pivot
/// reduced into `[0, pivot)`. Zero rows sit at the bottom.
pub fn hermite(m: &IntMatrix) -> NormalForm {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if pivot_row == rows {
            break;
        }
        loop {
            let best = (pivot_row..rows).filter(|&i| !h[(i, c)].is_zero()).min_by_key(|&i| h[(i, c)].abs());
            let Some(p) = best else { break };
            h.swap_rows(pivot_row, p);
            u.swap_rows(pivot_row, p);
            let mut done = true;
            for i in pivot_row + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(pivot_row, c)]);
                add_row_multiple(&mut h, i, pivot_row, &q);
                add_row_multiple(&mut u, i, pivot_row, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, c)].is_zero() {
            continue;
        }
        if h[(pivot_row, c)].is_negative() {
            negate_row(&mut h, pivot_row);
            negate_row(&mut u, pivot_row);
        }
        for i in 0..pivot_row {
            let q = -h[(i, c)].div_floor(&h[(pivot_row, c)]);
            add_row_multiple(&mut h, i, pivot_row, &q);
            add_row_multiple(&mut u, i, pivot_row, &q);
        }
        pivots.push(c);
        pivot_row += 1;
    }
    NormalForm { d: h, u, v: IntMatrix::identity(cols) }
}

/// Smith normal form: diagonal `d` with `d₁ | d₂ | …`, all non-negative.
pub fn smith(m: &IntMatrix) -> NormalForm {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[(i, j)].is_zero() && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(d, u, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                add_row_multiple(&mut d, i, t, &q);
                add_row_multiple(&mut u, i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                add_col_multiple(&mut d, j, t, &q);
                add_col_multiple(&mut v, j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into row t and go again.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offender {
                Some(i) => {
                    add_row_multiple(&mut d, t, i, &BigInt::one());
                    add_row_multiple(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    finish(d, u, v)
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix) -> NormalForm {
    NormalForm { d, u, v }
}

/// Invariant factors (diagonal of the Smith form, zeros included).
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let nf = smith(m);
    (0..m.nrows().min(m.ncols())).map(|i| nf.d[(i, i)].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(m: &IntMatrix) {
        let nf = smith(m);
        assert_eq!(&(&nf.u * m) * &nf.v, nf.d);
        assert!(nf.u.det().abs().is_one());
        assert!(nf.v.det().abs().is_one());
        let k = m.nrows().min(m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if i != j {
                    assert!(nf.d[(i, j)].is_zero());
                }
            }
        }
        for i in 1..k {
            let (a, b) = (&nf.d[(i - 1, i - 1)], &nf.d[(i, i)]);
            assert!(!a.is_negative());
            if a.is_zero() {
                assert!(b.is_zero());
            } else {
                assert!(b.is_multiple_of(a));
            }
        }
    }

    #[test]
    fn smith_known_cases() {
        let a2 = IntMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
        assert_eq!(invariant_factors(&a2), vec![BigInt::from(1), BigInt::from(3)]);
        let m = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        check_smith(&m);
        assert_eq!(invariant_factors(&m), [2, 6, 12].map(BigInt::from).to_vec());
        let rect = IntMatrix::from_i64(&[&[6, 4, 0], &[3, 9, 3]]);
        check_smith(&rect);
        check_smith(&IntMatrix::from_i64(&[&[0, 0], &[0, 5], &[0, 0]]));
    }

    #[test]
    fn hermite_echelon() {
        let m = IntMatrix::from_i64(&[&[3, 6, 9], &[2, 4, 8], &[1, 1, 1], &[0, 0, 0]]);
        let nf = hermite(&m);
        assert_eq!(&nf.u * &m, nf.d);
        assert!(nf.u.det().abs().is_one());
        assert_eq!(nf.d.row(0), &int(&[1, 0, 1])[..]);
        assert_eq!(nf.d.row(1), &int(&[0, 1, 0])[..]);
        assert_eq!(nf.d.row(2), &int(&[0, 0, 6])[..]);
        assert!(nf.d.row(3).iter().all(|x| x.is_zero()));
    }

    fn int(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }
}
