//! The symmetric group on three letters acting on `NS` of the `3IV*` surface,
//! generated by translation by the 3-torsion section and `(x, y, t) ↦ (x, −y, −t)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::lattice::{group_order, isometry_from_images, GroupInfo, Isometry};

use super::{classify, ns_lattice, x3_model, x3_section, FibrationError, KodairaType, NsLattice, TorsionSection};

/// `NS` of `y² = x³ + (t² − 1)⁴` and its two generating isometries
/// (translation `σ*` first, then `ι*`).
pub struct X3Symmetries {
    pub ns: NsLattice,
    pub translation: Isometry,
    pub involution: Isometry,
}

impl X3Symmetries {
    pub fn group(&self, cap: usize) -> Result<GroupInfo, FibrationError> {
        Ok(group_order(&[self.translation.clone(), self.involution.clone()], cap)?)
    }
}

// Multiplicities of C0..C6 in the IV* fiber (C0 is the identity component).
const IV_STAR_MULT: [i64; 7] = [1, 2, 3, 2, 1, 2, 1];

pub fn x3_symmetries() -> Result<X3Symmetries, FibrationError> {
    let w = x3_model();
    let cfg = classify(&w)?;
    let p = x3_section(&w)?;
    let ts = TorsionSection::from_section(&w, &cfg, &p, 3)?;
    let ns = ns_lattice(&cfg, std::slice::from_ref(&ts))?;
    let triv = &ns.trivial;
    let n = triv.lattice.rank();
    if triv.blocks.len() != 3 || triv.blocks.iter().any(|b| b.1 != KodairaType::IVStar) {
        return Err(FibrationError::Invalid("expected three IV* fibers".into()));
    }
    let unit = |i: usize| -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); n];
        v[i] = BigRational::from_integer(1.into());
        v
    };
    // Class of component Cj (j = 0..6) of fiber b, in trivial coordinates.
    let comp = |b: usize, j: usize| -> Vec<BigRational> {
        let off = triv.blocks[b].2;
        if j > 0 {
            return unit(off + j - 1);
        }
        let mut v = unit(0);
        for (k, &m) in IV_STAR_MULT.iter().enumerate().skip(1) {
            v[off + k - 1] -= BigRational::from_integer(BigInt::from(m));
        }
        v
    };
    let sources: Vec<Vec<BigRational>> = (0..n).map(unit).collect();

    // σ*: O ↦ P, F fixed, C0 → C4 → C6 → C0 and C1 → C3 → C5 → C1 on each fiber.
    let rot = [4, 3, 2, 5, 6, 1, 0];
    let mut sigma = vec![unit(0), ns.glue[0].clone()];
    for b in 0..3 {
        for j in 1..=6 {
            sigma.push(comp(b, rot[j]));
        }
    }
    // ι*: fibers over t = ±1 swapped, ∞ fixed, the two outer arms exchanged.
    let pi = [0, 1, 2, 5, 6, 3, 4];
    let swap = [1, 0, 2];
    let mut iota = vec![unit(0), unit(1)];
    for b in 0..3 {
        for j in 1..=6 {
            iota.push(comp(swap[b], pi[j]));
        }
    }

    let to_ns = |vs: &[Vec<BigRational>]| -> Result<Vec<Vec<BigRational>>, FibrationError> {
        vs.iter()
            .map(|v| {
                let c = ns.overlattice.to_new_coords(v)?;
                Ok(c.into_iter().map(BigRational::from_integer).collect())
            })
            .collect()
    };
    let src = to_ns(&sources)?;
    let translation = isometry_from_images(ns.lattice(), &src, &to_ns(&sigma)?)?;
    let involution = isometry_from_images(ns.lattice(), &src, &to_ns(&iota)?)?;
    Ok(X3Symmetries { ns, translation, involution })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generates_s3() {
        let s = x3_symmetries().unwrap();
        assert_eq!(s.group(1000).unwrap(), GroupInfo { order: 6, abelian: false });
        assert!(s.translation.compose(&s.translation).compose(&s.translation).is_identity());
        assert!(s.involution.compose(&s.involution).is_identity());
    }
}
