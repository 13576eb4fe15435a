//! Lattice-theoretic consequences for order-3 structures: the complement of
//! `(E6(−1)³)′` in the K3 lattice, the `⟨2d⟩ ⊕ (E6(−1)³)′` overlattice scan,
//! and the length obstruction for order 6.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::catalog::{self, CatalogError};
use crate::exact::{IntMatrix, RatMatrix};
use crate::lattice::{
    enumerate_overlattices, is_primitive_embedding, length_obstruction, orthogonal_complement, Lattice, LatticeError,
    LengthObstruction,
};

fn construction(name: &str) -> impl Fn(LatticeError) -> CatalogError + '_ {
    move |source| CatalogError::Construction { name: name.into(), source }
}

/// `((E6(−1)³)′)^⊥` inside the glued model `(U ⊕ A2 ⊕ E6(−1)³)″` of `Λ_K3`.
pub fn e6_cube_complement() -> Result<Lattice, CatalogError> {
    let model = catalog::lambda_k3_model()?;
    let n = model.parent.rank();
    let rows: Vec<Vec<BigRational>> = (4..n)
        .map(|i| {
            let mut v = vec![BigRational::from_integer(0.into()); n];
            v[i] = BigRational::from_integer(1.into());
            let c = model.to_new_coords(&v).expect("base vectors lie in the overlattice");
            c.into_iter().map(BigRational::from_integer).collect()
        })
        .collect();
    let perp = orthogonal_complement(&model.lattice, &RatMatrix::from_rows(rows)).map_err(construction("LambdaK3"))?;
    Ok(perp.lattice)
}

/// Index-3 even overlattices of `⟨2d⟩ ⊕ (E6(−1)³)′` in which both summands
/// stay primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOutcome {
    pub d: u64,
    /// Isotropic subgroups of order 3 meeting neither summand.
    pub subgroups: usize,
    /// Classes up to `±1` on each summand.
    pub classes: usize,
}

impl ScanOutcome {
    pub fn exists(&self) -> bool {
        self.subgroups > 0
    }
}

pub fn scan_e6_cube(d: u64) -> Result<ScanOutcome, CatalogError> {
    let e = catalog::e6_triple_primed()?.lattice;
    let two_d = Lattice::diagonal(&[2 * d as i64]);
    let l = Lattice::direct_sum(&[&two_d, &e]);
    let search = enumerate_overlattices(&l, 3, &[0..1, 1..l.rank()]).map_err(construction("<2d>+E6triple_primed"))?;
    Ok(ScanOutcome { d, subgroups: search.candidates.len(), classes: search.orbits.len() })
}

/// `U ⊕ ⟨2⟩` and an ambient lattice: the obstruction certificate (if any)
/// and, when one is known, an explicit primitive embedding.
#[derive(Clone, Debug)]
pub struct EmbeddingVerdict {
    pub ambient: String,
    pub obstruction: Option<LengthObstruction>,
    pub witness: Option<IntMatrix>,
}

fn u_plus_2() -> Lattice {
    Lattice::direct_sum(&[&catalog::u(), &Lattice::diagonal(&[2])])
}

/// Tests `U ⊕ ⟨2⟩ ↪ ambient` by the discriminant-length bound; for ambients
/// starting with `U²`, also a direct witness `U ⊕ ⟨u₁ + u₂⟩`.
pub fn order6_embedding(ambient: &str) -> Result<EmbeddingVerdict, CatalogError> {
    let t = u_plus_2();
    let m = catalog::named_lattice(ambient)?;
    let obstruction = length_obstruction(&t, &m).map_err(construction(ambient))?;
    let mut witness = None;
    if m.rank() >= 4 && m.gram().submatrix(&[0, 1, 2, 3], &[0, 1, 2, 3]) == catalog::u().power(2).gram().clone() {
        let mut rows = vec![vec![BigInt::from(0); m.rank()]; 3];
        rows[0][0] = 1.into();
        rows[1][1] = 1.into();
        rows[2][2] = 1.into();
        rows[2][3] = 1.into();
        let w = IntMatrix::from_rows(rows);
        if is_primitive_embedding(&t, &m, &w).map_err(construction(ambient))? {
            witness = Some(w);
        }
    }
    Ok(EmbeddingVerdict { ambient: ambient.into(), obstruction, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order6_bound_on_rank_six_ambient() {
        let v = order6_embedding("U+U(6)^2").unwrap();
        let o = v.obstruction.unwrap();
        assert_eq!((o.prime, o.required_length, o.complement_rank), (3, 4, 3));
        assert!(v.witness.is_none());
    }

    #[test]
    fn order6_embeds_once_u_squared_is_present() {
        let v = order6_embedding("U^2+U(6)^2").unwrap();
        assert!(v.obstruction.is_none());
        assert!(v.witness.is_some());
    }

    #[test]
    fn small_scan_values() {
        assert!(!scan_e6_cube(1).unwrap().exists());
        let s = scan_e6_cube(3).unwrap();
        assert_eq!((s.subgroups, s.classes), (2, 1));
    }
}
