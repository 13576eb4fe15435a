use std::collections::{HashSet, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Lattice, LatticeError};
use crate::exact::{IntMatrix, RatMatrix};

/// Integral isometry acting on row vectors, `v ↦ v·M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Isometry {
    pub matrix: IntMatrix,
}

impl Isometry {
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { matrix: &self.matrix * &other.matrix }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == IntMatrix::identity(self.matrix.nrows())
    }
}

/// The unique linear map sending each source vector to its image, checked to
/// be an integral isometry of `l`. Sources must span `l ⊗ ℚ`.
pub fn isometry_from_images(
    l: &Lattice,
    sources: &[Vec<BigRational>],
    images: &[Vec<BigRational>],
) -> Result<Isometry, LatticeError> {
    let n = l.rank();
    if sources.len() != images.len() {
        return Err(LatticeError::NotAnIsometry("source/image count mismatch".into()));
    }
    for v in sources.iter().chain(images) {
        if v.len() != n {
            return Err(LatticeError::Dimension { got: v.len(), expected: n });
        }
    }
    let x = RatMatrix::from_rows(sources.to_vec());
    let y = RatMatrix::from_rows(images.to_vec());
    let (_, piv) = x.transpose().rref();
    if piv.len() < n {
        return Err(LatticeError::NotAnIsometry("sources do not span".into()));
    }
    let xs = x.select_rows(&piv);
    let ys = y.select_rows(&piv);
    let m = &xs.inverse()? * &ys;
    if &x * &m != y {
        return Err(LatticeError::NotAnIsometry("images are not linearly consistent".into()));
    }
    let m = m.to_int().ok_or_else(|| LatticeError::NotAnIsometry("map is not integral".into()))?;
    let g = l.gram();
    if &(&m * g) * &m.transpose() != *g {
        return Err(LatticeError::NotAnIsometry("form is not preserved".into()));
    }
    if !m.det().abs().is_one() {
        return Err(LatticeError::NotAnIsometry("map is not invertible over ℤ".into()));
    }
    Ok(Isometry { matrix: m })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupInfo {
    pub order: usize,
    pub abelian: bool,
}

/// Order of the group generated by `gens` (closure by BFS, bounded by `cap`).
pub fn group_order(gens: &[Isometry], cap: usize) -> Result<GroupInfo, LatticeError> {
    let Some(first) = gens.first() else { return Ok(GroupInfo { order: 1, abelian: true }) };
    let id = Isometry { matrix: IntMatrix::identity(first.matrix.nrows()) };
    let mut seen: HashSet<Isometry> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let gh = g.compose(h);
            if seen.insert(gh.clone()) {
                if seen.len() > cap {
                    return Err(LatticeError::GroupCap(cap));
                }
                queue.push_back(gh);
            }
        }
    }
    let abelian = gens.iter().all(|a| gens.iter().all(|b| a.compose(b) == b.compose(a)));
    Ok(GroupInfo { order: seen.len(), abelian })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn weyl_group_of_a2() {
        let a2 = Lattice::from_i64(&[&[2, -1], &[-1, 2]]);
        let e = |a, b| vec![rat(a, 1), rat(b, 1)];
        // reflections in the two simple roots
        let s1 = isometry_from_images(&a2, &[e(1, 0), e(0, 1)], &[e(-1, 0), e(1, 1)]).unwrap();
        let s2 = isometry_from_images(&a2, &[e(1, 0), e(0, 1)], &[e(1, 1), e(0, -1)]).unwrap();
        let info = group_order(&[s1, s2], 100).unwrap();
        assert_eq!(info, GroupInfo { order: 6, abelian: false });
        assert!(isometry_from_images(&a2, &[e(1, 0), e(0, 1)], &[e(1, 0), e(1, 0)]).is_err());
    }
}
