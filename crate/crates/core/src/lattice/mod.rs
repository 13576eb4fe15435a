//! Even integral lattices given by Gram matrices.

mod discform;
mod embedding;
mod glue;
mod isometry;
mod roots;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{IntMatrix, RatMatrix};

pub use discform::{discriminant_form, fqf_isomorphic, genus_unique, FiniteQuadraticForm, GenusVerdict, FQF_ORDER_CAP};
pub use embedding::{is_primitive_embedding, length_obstruction, LengthObstruction};
pub use glue::{
    enumerate_overlattices, orthogonal_complement, overlattice, primitive_closure, GluedCandidate, OverlatticeSearch,
    Overlattice, PrimitiveClosure, Sublattice,
};
pub use isometry::{group_order, isometry_from_images, GroupInfo, Isometry};
pub use roots::{count_vectors_of_norm, root_count, short_vectors, ENUMERATION_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("lattice is degenerate")]
    Degenerate,
    #[error("lattice is not even")]
    NotEven,
    #[error("lattice is not definite")]
    NotDefinite,
    #[error("glue vector {index} is not in the dual lattice")]
    GlueNotInDual { index: usize },
    #[error("glued lattice is not integral")]
    NotIntegral,
    #[error("glued lattice is odd")]
    OddOverlattice,
    #[error("vector has wrong length {got}, expected {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("vector does not lie in the lattice")]
    NotInLattice,
    #[error("finite quadratic form of order {order} exceeds cap {cap}")]
    OrderCap { order: BigInt, cap: u64 },
    #[error("enumeration budget of {0} nodes exhausted")]
    Budget(u64),
    #[error("prescribed images do not define an isometry: {0}")]
    NotAnIsometry(String),
    #[error("group closure exceeded {0} elements")]
    GroupCap(usize),
    #[error("blocks do not form an orthogonal decomposition")]
    BadBlocks,
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero == 0 {
            write!(f, "({},{})", self.pos, self.neg)
        } else {
            write!(f, "({},{},{})", self.pos, self.neg, self.zero)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub rank: usize,
    pub signature: Signature,
    pub det: BigInt,
    pub even: bool,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    labels: Option<Vec<String>>,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(Lattice { gram, labels: None })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(IntMatrix::from_i64(rows)).expect("symmetric Gram")
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        Self::new(IntMatrix::from_fn(n, n, |i, j| if i == j { entries[i].into() } else { BigInt::zero() })).unwrap()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.rank());
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == name)
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn signature(&self) -> Signature {
        signature_of(&self.gram.to_rat())
    }

    pub fn invariants(&self) -> Invariants {
        Invariants { rank: self.rank(), signature: self.signature(), det: self.det(), even: self.is_even() }
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature().pos == self.rank()
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature().neg == self.rank()
    }

    pub fn rescale(&self, n: i64) -> Self {
        Lattice { gram: self.gram.scaled(&n.into()), labels: self.labels.clone() }
    }

    pub fn direct_sum(parts: &[&Lattice]) -> Self {
        let blocks: Vec<&IntMatrix> = parts.iter().map(|p| &p.gram).collect();
        let gram = IntMatrix::block_diag(&blocks);
        let labels = if parts.iter().all(|p| p.labels.is_some()) {
            Some(parts.iter().flat_map(|p| p.labels.clone().unwrap()).collect())
        } else {
            None
        };
        Lattice { gram, labels }
    }

    pub fn power(&self, k: usize) -> Self {
        let parts: Vec<&Lattice> = std::iter::repeat_n(self, k).collect();
        let mut out = Self::direct_sum(&parts);
        if let Some(l) = &self.labels {
            out.labels = Some((1..=k).flat_map(|j| l.iter().map(move |s| format!("{s}^{j}"))).collect());
        }
        out
    }

    pub fn inner(&self, u: &[BigRational], v: &[BigRational]) -> BigRational {
        self.gram.to_rat().bilinear(u, v)
    }

    pub fn inner_int(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        self.gram.bilinear(u, v)
    }

    pub fn norm(&self, v: &[BigRational]) -> BigRational {
        self.inner(v, v)
    }

    /// `v` lies in `L*` iff `v·G` is integral.
    pub fn in_dual(&self, v: &[BigRational]) -> bool {
        let g = self.gram.to_rat();
        crate::exact::vec_mat(v, &g).iter().all(|x| x.is_integer())
    }

    /// Gram of the sublattice spanned by the rows of `basis` (lattice coordinates).
    pub fn restrict(&self, basis: &IntMatrix) -> Result<Lattice, LatticeError> {
        Lattice::new(&(basis * &self.gram) * &basis.transpose())
    }

    /// Same as `restrict` for rational rows; fails unless the result is integral.
    pub fn restrict_rat(&self, basis: &RatMatrix) -> Result<Lattice, LatticeError> {
        let g = &(basis * &self.gram.to_rat()) * &basis.transpose();
        Lattice::new(g.to_int().ok_or(LatticeError::NotIntegral)?)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{:?}", self.gram)
    }
}

/// Signature by rational congruence diagonalisation.
pub fn signature_of(a: &RatMatrix) -> Signature {
    let n = a.nrows();
    let mut m = a.clone();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        if m[(k, k)].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !m[(i, i)].is_zero()) {
                swap_sym(&mut m, k, i);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !m[(i, j)].is_zero())
            {
                // e_i ← e_i + e_j gives a nonzero diagonal entry 2·m_ij.
                add_sym(&mut m, i, j, &BigRational::one());
                swap_sym(&mut m, k, i);
            } else {
                break;
            }
        }
        let p = m[(k, k)].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = -(&m[(i, k)] / &p);
            add_sym(&mut m, i, k, &f);
        }
        k += 1;
    }
    Signature { pos, neg, zero: n - pos - neg }
}

fn swap_sym(m: &mut RatMatrix, a: usize, b: usize) {
    m.swap_rows(a, b);
    m.swap_cols(a, b);
}

/// e_t ← e_t + f·e_s applied on both sides.
fn add_sym(m: &mut RatMatrix, t: usize, s: usize, f: &BigRational) {
    let n = m.nrows();
    for j in 0..n {
        let d = &m[(s, j)] * f;
        m[(t, j)] += d;
    }
    for i in 0..n {
        let d = &m[(i, s)] * f;
        m[(i, t)] += d;
    }
}

pub(crate) fn p_length(invariants: &[BigInt], p: u64) -> usize {
    let p = BigInt::from(p);
    invariants.iter().filter(|d| d.is_multiple_of(&p)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_of_hyperbolic_and_definite() {
        let u = Lattice::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(u.signature(), Signature { pos: 1, neg: 1, zero: 0 });
        let a2 = Lattice::from_i64(&[&[2, -1], &[-1, 2]]);
        let s = Lattice::direct_sum(&[&u, &a2.rescale(-1), &Lattice::diagonal(&[0])]);
        assert_eq!(s.signature(), Signature { pos: 1, neg: 3, zero: 1 });
        assert_eq!(u.det(), BigInt::from(-1));
    }
}
