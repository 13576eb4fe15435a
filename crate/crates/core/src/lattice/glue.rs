use std::collections::{BTreeSet, HashSet};
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{discriminant_form, Lattice, LatticeError};
use crate::exact::{hermite, smith, vec_mat, IntMatrix, RatMatrix};

/// `L ⊂ L'` with the basis of `L'` written in coordinates of `L`.
#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: Lattice,
    pub parent: Lattice,
    /// Rows: basis of the overlattice in parent coordinates.
    pub basis: RatMatrix,
    basis_inv: RatMatrix,
    pub index: BigInt,
}

impl Overlattice {
    /// Coordinates in the overlattice of a parent-coordinate vector.
    pub fn to_new_coords(&self, v: &[BigRational]) -> Result<Vec<BigInt>, LatticeError> {
        if v.len() != self.parent.rank() {
            return Err(LatticeError::Dimension { got: v.len(), expected: self.parent.rank() });
        }
        let c = vec_mat(v, &self.basis_inv);
        if c.iter().any(|x| !x.is_integer()) {
            return Err(LatticeError::NotInLattice);
        }
        Ok(c.into_iter().map(|x| x.to_integer()).collect())
    }

    pub fn to_parent(&self, v: &[BigInt]) -> Vec<BigRational> {
        let r: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        vec_mat(&r, &self.basis)
    }

    /// Maps the parent's standard basis into the new coordinates (rows).
    pub fn parent_embedding(&self) -> IntMatrix {
        self.basis_inv.to_int().expect("parent lattice sits inside the overlattice")
    }

    /// Composition: `self` is an overlattice of `inner.lattice`; re-express over `inner.parent`.
    pub fn over(&self, inner: &Overlattice) -> Overlattice {
        let basis = &self.basis * &inner.basis;
        let basis_inv = basis.inverse().expect("invertible basis");
        Overlattice {
            lattice: self.lattice.clone(),
            parent: inner.parent.clone(),
            basis,
            basis_inv,
            index: &self.index * &inner.index,
        }
    }
}

/// `L + Σ ℤ gᵢ` for glue vectors `gᵢ ∈ L*`.
pub fn overlattice(l: &Lattice, glue: &[Vec<BigRational>]) -> Result<Overlattice, LatticeError> {
    let n = l.rank();
    for (i, g) in glue.iter().enumerate() {
        if g.len() != n {
            return Err(LatticeError::Dimension { got: g.len(), expected: n });
        }
        if !l.in_dual(g) {
            return Err(LatticeError::GlueNotInDual { index: i });
        }
    }
    let mut rows = RatMatrix::identity(n).to_rows();
    rows.extend(glue.iter().cloned());
    let all = RatMatrix::from_rows(rows);
    let den = all.common_denominator();
    let dr = BigRational::from_integer(den.clone());
    let scaled = all.scaled(&dr).to_int().expect("cleared denominators");
    let h = hermite(&scaled).d;
    let rows_idx: Vec<usize> = (0..n).collect();
    let basis = h.select_rows(&rows_idx).to_rat().scaled(&dr.recip());
    let gram = &(&basis * &l.gram().to_rat()) * &basis.transpose();
    let gram = gram.to_int().ok_or(LatticeError::NotIntegral)?;
    let new = Lattice::new(gram)?;
    if l.is_even() && !new.is_even() {
        return Err(LatticeError::OddOverlattice);
    }
    let basis_inv = basis.inverse()?;
    let index = rat_det(&basis_inv).abs().to_integer();
    Ok(Overlattice { lattice: new, parent: l.clone(), basis, basis_inv, index })
}

fn rat_det(m: &RatMatrix) -> BigRational {
    let n = m.nrows();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else { return BigRational::zero() };
        if p != k {
            a.swap_rows(p, k);
            det = -det;
        }
        let piv = a[(k, k)].clone();
        det *= &piv;
        for i in k + 1..n {
            let f = &a[(i, k)] / &piv;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = &a[(k, j)] * &f;
                a[(i, j)] -= v;
            }
        }
    }
    det
}

#[derive(Clone, Debug)]
pub struct PrimitiveClosure {
    /// Rows: basis of `(ℚS) ∩ L` in lattice coordinates.
    pub basis: IntMatrix,
    /// `[(ℚS) ∩ L : ℤS]` (for independent rows of S).
    pub index: BigInt,
}

/// Saturation of the span of the rows of `s` inside `L = ℤⁿ`.
pub fn primitive_closure(s: &IntMatrix) -> Result<PrimitiveClosure, LatticeError> {
    let nf = smith(s);
    let r = (0..s.nrows().min(s.ncols())).take_while(|&i| !nf.d[(i, i)].is_zero()).count();
    let vinv = nf.v.to_rat().inverse()?.to_int().expect("unimodular");
    let idx: Vec<usize> = (0..r).collect();
    let index = (0..r).map(|i| nf.d[(i, i)].clone()).product();
    Ok(PrimitiveClosure { basis: vinv.select_rows(&idx), index })
}

#[derive(Clone, Debug)]
pub struct Sublattice {
    /// Rows in coordinates of the ambient lattice.
    pub basis: IntMatrix,
    pub lattice: Lattice,
}

/// `S^⊥ ⊂ L` for `S` spanned by the rows of `s` (rational rows allowed).
pub fn orthogonal_complement(l: &Lattice, s: &RatMatrix) -> Result<Sublattice, LatticeError> {
    if s.ncols() != l.rank() {
        return Err(LatticeError::Dimension { got: s.ncols(), expected: l.rank() });
    }
    let den = BigRational::from_integer(s.common_denominator());
    let s_int = s.scaled(&den).to_int().unwrap();
    let a = l.gram() * &s_int.transpose(); // n × k; want x·a = 0
    let nf = smith(&a);
    let r = (0..a.nrows().min(a.ncols())).take_while(|&i| !nf.d[(i, i)].is_zero()).count();
    let idx: Vec<usize> = (r..l.rank()).collect();
    let basis = nf.u.select_rows(&idx);
    let lattice = l.restrict(&basis)?;
    Ok(Sublattice { basis, lattice })
}

#[derive(Clone, Debug)]
pub struct GluedCandidate {
    /// Generator of the isotropic subgroup, in discriminant-group coordinates.
    pub element: Vec<i64>,
    /// A lift of the generator to `L*`.
    pub glue: Vec<BigRational>,
    pub overlattice: Overlattice,
}

#[derive(Clone, Debug)]
pub struct OverlatticeSearch {
    pub candidates: Vec<GluedCandidate>,
    /// Orbits (indices into `candidates`) under sign changes of the blocks.
    pub orbits: Vec<Vec<usize>>,
}

/// Even overlattices of index `p` (prime) in which every block — a coordinate
/// range of an orthogonal decomposition — remains primitive.
pub fn enumerate_overlattices(l: &Lattice, p: u64, blocks: &[Range<usize>]) -> Result<OverlatticeSearch, LatticeError> {
    check_blocks(l, blocks)?;
    let q = discriminant_form(l)?;
    let elems = q.elements()?;
    let pb = BigInt::from(p);
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut candidates = Vec::new();
    for x in elems {
        if q.element_order(&x) != pb || !q.value(&x).is_zero() || seen.contains(&x) {
            continue;
        }
        for k in 1..p as i64 {
            seen.insert(multiple(&q, &x, k));
        }
        let glue = q.lift(&x).expect("lattice form has lifts");
        if !blocks_primitive(&glue, blocks) {
            continue;
        }
        let overlattice = overlattice(l, std::slice::from_ref(&glue))?;
        candidates.push(GluedCandidate { element: x, glue, overlattice });
    }
    let orbits = sign_orbits(&q, &candidates, blocks)?;
    Ok(OverlatticeSearch { candidates, orbits })
}

fn multiple(q: &super::FiniteQuadraticForm, x: &[i64], k: i64) -> Vec<i64> {
    x.iter()
        .zip(q.invariants())
        .map(|(&c, d)| {
            let d: i64 = d.try_into().unwrap();
            (c * k).rem_euclid(d)
        })
        .collect()
}

fn check_blocks(l: &Lattice, blocks: &[Range<usize>]) -> Result<(), LatticeError> {
    let mut covered = vec![false; l.rank()];
    for b in blocks {
        if b.end > l.rank() {
            return Err(LatticeError::BadBlocks);
        }
        for i in b.clone() {
            if covered[i] {
                return Err(LatticeError::BadBlocks);
            }
            covered[i] = true;
        }
    }
    if !covered.iter().all(|&c| c) {
        return Err(LatticeError::BadBlocks);
    }
    for (bi, b) in blocks.iter().enumerate() {
        for (bj, c) in blocks.iter().enumerate() {
            if bi != bj && b.clone().any(|i| c.clone().any(|j| !l.gram()[(i, j)].is_zero())) {
                return Err(LatticeError::BadBlocks);
            }
        }
    }
    Ok(())
}

/// A block stays primitive in `L + ℤg` (g of prime order) unless g is
/// integral outside the block and non-integral inside it.
fn blocks_primitive(g: &[BigRational], blocks: &[Range<usize>]) -> bool {
    blocks.iter().all(|b| {
        let inside_integral = b.clone().all(|i| g[i].is_integer());
        let outside_integral = (0..g.len()).filter(|i| !b.contains(i)).all(|i| g[i].is_integer());
        !(outside_integral && !inside_integral)
    })
}

fn sign_orbits(
    q: &super::FiniteQuadraticForm,
    cands: &[GluedCandidate],
    blocks: &[Range<usize>],
) -> Result<Vec<Vec<usize>>, LatticeError> {
    // Each candidate ↔ the set of its subgroup's nonzero elements, as lifts reduced mod L.
    let reduce = |v: &[BigRational]| -> Vec<BigRational> { v.iter().map(|x| x - x.floor()).collect() };
    let keys: Vec<BTreeSet<Vec<BigRational>>> = cands
        .iter()
        .map(|c| {
            (1..q.element_order(&c.element).try_into().unwrap_or(1i64))
                .map(|k| reduce(&c.glue.iter().map(|x| x * BigRational::from_integer(k.into())).collect::<Vec<_>>()))
                .collect()
        })
        .collect();
    let mut orbit_of = vec![usize::MAX; cands.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let nb = blocks.len().min(20);
    for i in 0..cands.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbits.push(vec![i]);
        orbit_of[i] = id;
        for mask in 1u32..(1 << nb) {
            let flipped: Vec<BigRational> = cands[i]
                .glue
                .iter()
                .enumerate()
                .map(|(c, x)| {
                    let bi = blocks.iter().position(|b| b.contains(&c)).unwrap();
                    if bi < nb && mask & (1 << bi) != 0 {
                        -x
                    } else {
                        x.clone()
                    }
                })
                .collect();
            let key = reduce(&flipped);
            for j in 0..cands.len() {
                if orbit_of[j] == usize::MAX && keys[j].contains(&key) {
                    orbit_of[j] = id;
                    orbits[id].push(j);
                }
            }
        }
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, IntMatrix};

    #[test]
    fn a1_squared_glues_to_d2_like() {
        // <-2> ⊕ <-2> glued by (1/2, 1/2) gives the odd lattice <-1>²... reject.
        let l = Lattice::diagonal(&[-2, -2]);
        let g = vec![rat(1, 2), rat(1, 2)];
        assert!(matches!(overlattice(&l, &[g]), Err(LatticeError::OddOverlattice)));
        let l4 = Lattice::diagonal(&[-2, -2, -2, -2]);
        let g = vec![rat(1, 2); 4];
        let o = overlattice(&l4, &[g]).unwrap();
        assert_eq!(o.index, BigInt::from(2));
        assert_eq!(o.lattice.det(), BigInt::from(4));
        assert!(matches!(overlattice(&l4, &[vec![rat(1, 3), rat(0, 1), rat(0, 1), rat(0, 1)]]), Err(LatticeError::GlueNotInDual { index: 0 })));
    }

    #[test]
    fn closure_and_complement() {
        let s = IntMatrix::from_i64(&[&[2, 4, 0]]);
        let c = primitive_closure(&s).unwrap();
        assert_eq!(c.index, BigInt::from(2));
        assert_eq!(c.basis.nrows(), 1);
        let l = Lattice::from_i64(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let perp = orthogonal_complement(&l, &IntMatrix::from_i64(&[&[1, 0, 0]]).to_rat()).unwrap();
        assert_eq!(perp.lattice.rank(), 2);
        for r in perp.basis.rows_iter() {
            assert!(l.inner_int(r, &[BigInt::one(), BigInt::zero(), BigInt::zero()]).is_zero());
        }
        assert_eq!(perp.lattice.det().abs(), BigInt::from(8));
    }
}
