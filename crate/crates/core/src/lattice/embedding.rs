use num_bigint::BigInt;

use num_traits::{One, Signed, ToPrimitive};

use super::{discriminant_form, primitive_closure, Lattice, LatticeError};
use crate::exact::IntMatrix;

/// Certificate that `T` has no primitive embedding into `M`: for the prime
/// `p`, the complement `R` would need `l_p(A_R) ≥ l_p(A_M) − l_p(A_T)`, which
/// exceeds `rank R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthObstruction {
    pub prime: u64,
    pub required_length: usize,
    pub complement_rank: usize,
}

pub fn length_obstruction(t: &Lattice, m: &Lattice) -> Result<Option<LengthObstruction>, LatticeError> {
    if t.rank() > m.rank() {
        return Ok(Some(LengthObstruction { prime: 0, required_length: t.rank(), complement_rank: 0 }));
    }
    let qt = discriminant_form(t)?;
    let qm = discriminant_form(m)?;
    let complement_rank = m.rank() - t.rank();
    let prod = qt.order() * qm.order();
    for p in prime_divisors(&prod) {
        let required = qm.p_length(p).saturating_sub(qt.p_length(p));
        if required > complement_rank {
            return Ok(Some(LengthObstruction { prime: p, required_length: required, complement_rank }));
        }
    }
    Ok(None)
}

/// Whether the rows of `images` (coordinates in `M`) span a primitive
/// sublattice isometric to `T` via `tᵢ ↦ rowᵢ`.
pub fn is_primitive_embedding(t: &Lattice, m: &Lattice, images: &IntMatrix) -> Result<bool, LatticeError> {
    if images.nrows() != t.rank() || images.ncols() != m.rank() {
        return Err(LatticeError::Dimension { got: images.nrows(), expected: t.rank() });
    }
    let gram = &(images * m.gram()) * &images.transpose();
    if gram != *t.gram() {
        return Ok(false);
    }
    Ok(primitive_closure(images)?.index.is_one())
}

fn prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs().to_u64().unwrap_or(u64::MAX);
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
