use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::catalog::{self, a_n, d_n, e7, e8};
use crate::exact::{IntMatrix, RatMatrix};
use crate::lattice::{
    discriminant_form, fqf_isomorphic, genus_unique, overlattice, FiniteQuadraticForm, GenusVerdict, Lattice,
    LatticeError, Overlattice, Signature,
};

use super::{contact_component, FibrationError, KodairaConfiguration, KodairaType, Section, WeierstrassModel};

/// `U ⊕ ⨁ R_v(−1)` on the basis `F, O, C_i^(v)`.
#[derive(Clone, Debug)]
pub struct TrivialLattice {
    pub lattice: Lattice,
    /// Per reducible geometric fiber: (index into `cfg.fibers`, type, offset of `C1`).
    pub blocks: Vec<(usize, KodairaType, usize)>,
    pub chi: u32,
}

/// Positive Cartan matrix on the non-identity components, in the labelling
/// used by [`contact_component`].
pub fn component_cartan(kind: KodairaType) -> Lattice {
    match kind {
        KodairaType::I(n) => a_n(n as usize - 1),
        KodairaType::III => a_n(1),
        KodairaType::IV => a_n(2),
        KodairaType::IStar(n) => d_n(n as usize + 4),
        KodairaType::IVStar => {
            let mut g = IntMatrix::scalar(6, &BigInt::from(2));
            for (i, j) in [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5)] {
                g[(i, j)] = BigInt::from(-1);
                g[(j, i)] = BigInt::from(-1);
            }
            Lattice::new(g).unwrap()
        }
        KodairaType::IIIStar => e7(),
        KodairaType::IIStar => e8(),
        KodairaType::II => unreachable!("irreducible"),
    }
}

pub fn trivial_lattice(cfg: &KodairaConfiguration) -> TrivialLattice {
    let chi = cfg.chi as i64;
    let mut parts = vec![Lattice::from_i64(&[&[0, 1], &[1, -chi]])];
    let mut labels = vec!["F".to_string(), "O".to_string()];
    let mut blocks = Vec::new();
    let mut offset = 2;
    for (v, (idx, kind)) in cfg.reducible().into_iter().enumerate() {
        let r = component_cartan(kind).rescale(-1);
        blocks.push((idx, kind, offset));
        offset += r.rank();
        labels.extend((1..=r.rank()).map(|j| format!("C{j}^({})", v + 1)));
        parts.push(r);
    }
    let refs: Vec<&Lattice> = parts.iter().collect();
    TrivialLattice { lattice: Lattice::direct_sum(&refs).with_labels(labels), blocks, chi: cfg.chi }
}

/// A torsion section through its contact components, one per reducible
/// geometric fiber (in the order of [`KodairaConfiguration::reducible`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionSection {
    pub order: u32,
    pub contacts: Vec<u32>,
}

impl TorsionSection {
    /// Contact data of `P` on every reducible fiber of `w`.
    pub fn from_section(
        w: &WeierstrassModel,
        cfg: &KodairaConfiguration,
        p: &Section,
        order: u32,
    ) -> Result<Self, FibrationError> {
        let mut contacts = Vec::new();
        for (idx, _) in cfg.reducible() {
            contacts.push(contact_component(w, p, &cfg.fibers[idx].place)?);
        }
        Ok(TorsionSection { order, contacts })
    }
}

/// Class of a torsion section in `NS ⊗ ℚ`, trivial-lattice coordinates:
/// `P = O + χF + Σ_v G_v⁻¹ e_{i_v}` (`G_v` the negative-definite block).
pub fn torsion_glue(triv: &TrivialLattice, ts: &TorsionSection) -> Result<Vec<BigRational>, FibrationError> {
    if ts.contacts.len() != triv.blocks.len() {
        return Err(FibrationError::InconsistentTorsion(format!(
            "{} contacts for {} reducible fibers",
            ts.contacts.len(),
            triv.blocks.len()
        )));
    }
    let n = triv.lattice.rank();
    let mut v = vec![BigRational::zero(); n];
    v[0] = BigRational::from_integer(triv.chi.into());
    v[1] = BigRational::from_integer(1.into());
    for (&(_, kind, off), &i) in triv.blocks.iter().zip(&ts.contacts) {
        if i == 0 {
            continue;
        }
        if i >= kind.components() {
            return Err(FibrationError::InconsistentTorsion(format!("component {i} on a fiber of type {kind}")));
        }
        let g = component_cartan(kind).rescale(-1);
        let inv = g.gram().to_rat().inverse().map_err(LatticeError::from)?;
        for j in 0..g.rank() {
            v[off + j] = inv[(i as usize - 1, j)].clone();
        }
    }
    Ok(v)
}

#[derive(Clone, Debug)]
pub struct NsLattice {
    pub trivial: TrivialLattice,
    pub overlattice: Overlattice,
    pub glue: Vec<Vec<BigRational>>,
}

impl NsLattice {
    pub fn lattice(&self) -> &Lattice {
        &self.overlattice.lattice
    }
}

/// Glues the trivial lattice by the torsion classes, checking height zero
/// (`P² = −χ`, `P·O = 0`), evenness, `index = |torsion|` and
/// `det(NS) · index² = det(Triv)`.
pub fn ns_lattice(cfg: &KodairaConfiguration, torsion: &[TorsionSection]) -> Result<NsLattice, FibrationError> {
    let trivial = trivial_lattice(cfg);
    let mut glue = Vec::new();
    for ts in torsion {
        let v = torsion_glue(&trivial, ts)?;
        let norm = trivial.lattice.norm(&v);
        if norm != BigRational::from_integer(BigInt::from(-(cfg.chi as i64))) {
            return Err(FibrationError::InconsistentTorsion(format!("section class has self-intersection {norm}")));
        }
        glue.push(v);
    }
    let over = overlattice(&trivial.lattice, &glue).map_err(|e| match e {
        LatticeError::NotIntegral | LatticeError::OddOverlattice | LatticeError::GlueNotInDual { .. } => {
            FibrationError::InconsistentTorsion(e.to_string())
        }
        other => other.into(),
    })?;
    let expected: u64 = torsion.iter().map(|t| t.order as u64).product();
    if over.index != BigInt::from(expected) {
        return Err(FibrationError::InconsistentTorsion(format!(
            "glue has index {}, torsion order {expected}",
            over.index
        )));
    }
    let lhs = over.lattice.det() * &over.index * &over.index;
    assert_eq!(lhs, trivial.lattice.det(), "determinant division law");
    Ok(NsLattice { trivial, overlattice: over, glue })
}

/// Flips `i ↦ n − i` on `I_n` fibers of `other` until the sections in `base`
/// together with `other` glue to an even overlattice of the expected index.
/// Contact indices on `I_n` are only determined up to this reflection, and
/// sections computed on different models need a common orientation.
pub fn align_orientations(
    cfg: &KodairaConfiguration,
    base: &[TorsionSection],
    other: &TorsionSection,
) -> Result<TorsionSection, FibrationError> {
    let kinds: Vec<KodairaType> = cfg.reducible().into_iter().map(|(_, k)| k).collect();
    let flippable: Vec<usize> = (0..kinds.len())
        .filter(|&v| match kinds[v] {
            KodairaType::I(n) => {
                let i = other.contacts[v];
                i != 0 && 2 * i != n
            }
            _ => false,
        })
        .collect();
    if flippable.len() > 16 {
        return Err(FibrationError::Invalid("too many fibers to align".into()));
    }
    for mask in 0u32..(1 << flippable.len()) {
        let mut cand = other.clone();
        for (bit, &v) in flippable.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                if let KodairaType::I(n) = kinds[v] {
                    cand.contacts[v] = n - cand.contacts[v];
                }
            }
        }
        let mut all = base.to_vec();
        all.push(cand.clone());
        if ns_lattice(cfg, &all).is_ok() {
            return Ok(cand);
        }
    }
    Err(FibrationError::InconsistentTorsion("no orientation makes the sections glue".into()))
}

/// Classifies `w` and glues its trivial lattice by 3-torsion sections, each
/// given on a model with the same fibers as `w` (a quadratic twist is fine:
/// it changes neither the places nor the contact components up to orientation).
pub fn ns_from_sections(
    w: &WeierstrassModel,
    torsion: &[(&WeierstrassModel, &Section)],
) -> Result<(KodairaConfiguration, NsLattice), FibrationError> {
    let cfg = super::classify(w)?;
    let mut found: Vec<TorsionSection> = Vec::new();
    for (m, p) in torsion {
        let mcfg = super::classify(m)?;
        let same = mcfg.fibers.len() == cfg.fibers.len()
            && mcfg.fibers.iter().zip(&cfg.fibers).all(|(a, b)| a.place == b.place && a.kind == b.kind);
        if !same {
            return Err(FibrationError::InconsistentTorsion(format!(
                "section model has fibers {} instead of {}",
                mcfg.summary(),
                cfg.summary()
            )));
        }
        let order = match super::section_order(m, p, 12)? {
            super::SectionOrder::Finite(n) if n > 1 => n,
            o => return Err(FibrationError::InconsistentTorsion(format!("section of order {o:?}"))),
        };
        let ts = TorsionSection::from_section(m, &mcfg, p, order)?;
        let ts = if found.is_empty() { ts } else { align_orientations(&cfg, &found, &ts)? };
        found.push(ts);
    }
    let ns = ns_lattice(&cfg, &found)?;
    Ok((cfg, ns))
}

/// `ρ − 2 − Σ(m_v − 1)`.
pub fn shioda_tate_rank(rho: u64, cfg: &KodairaConfiguration) -> Result<u64, FibrationError> {
    let r = rho as i64 - 2 - cfg.component_excess() as i64;
    if r < 0 {
        return Err(FibrationError::NegativeRank(r));
    }
    Ok(r as u64)
}

/// Candidate transcendental lattices compared against computed forms.
pub const T_CANDIDATES: &[&str] = &[
    "A2",
    "A2(2)",
    "U+A2",
    "U+<2>",
    "U+<6>",
    "A2+<-2>",
    "A2+<-6>",
    "U(2)+<4>",
    "U(2)+<12>",
    "A2(2)+<-12>",
    "U(3)+<6>",
    "U(6)+<12>",
    "U(3)+A2",
];

#[derive(Clone, Debug)]
pub struct TransLatticeReport {
    pub signature: Signature,
    pub form: FiniteQuadraticForm,
    pub matches: Vec<String>,
    pub genus: GenusVerdict,
}

/// Signature `(2, 20 − ρ)` and form `−q_NS` of `T = NS^⊥` in the K3 lattice,
/// with every candidate of the same signature and isomorphic form.
pub fn transcendental_from_ns(ns: &Lattice) -> Result<TransLatticeReport, FibrationError> {
    let rank = ns.rank();
    let sig = ns.signature();
    if rank > 20 || sig.pos != 1 || sig.zero != 0 {
        return Err(FibrationError::Invalid(format!("NS must be hyperbolic of rank ≤ 20, got rank {rank} sig {sig}")));
    }
    let signature = Signature { pos: 2, neg: 20 - rank, zero: 0 };
    let form = discriminant_form(ns)?.opposite();
    let mut matches = Vec::new();
    for name in T_CANDIDATES {
        let cand = catalog::named_lattice(name).map_err(|e| FibrationError::Invalid(e.to_string()))?;
        let s = cand.signature();
        if (s.pos, s.neg) != (signature.pos, signature.neg) {
            continue;
        }
        if fqf_isomorphic(&discriminant_form(&cand)?, &form)? {
            matches.push(name.to_string());
        }
    }
    let genus = genus_unique(signature, &form);
    Ok(TransLatticeReport { signature, form, matches, genus })
}

/// Image of a sublattice of `U ⊕ A2` (rows in the basis `u1, u2, a1, a2`)
/// under `γ(uᵢ) = wᵢ`, `γ(a1) = (b1 + 2b2)/3`, `γ(a2) = b2`, inside
/// `U(3) ⊕ A2(3) ⊗ ℚ` (`w1·w2 = 3`, `bᵢ² = 6`, `b1·b2 = −3`).
pub fn apply_gamma(coords: &IntMatrix) -> Result<Lattice, FibrationError> {
    if coords.ncols() != 4 {
        return Err(FibrationError::Invalid("coordinates must be given in the basis u1, u2, a1, a2".into()));
    }
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let gamma = RatMatrix::from_rows(vec![
        vec![r(1, 1), r(0, 1), r(0, 1), r(0, 1)],
        vec![r(0, 1), r(1, 1), r(0, 1), r(0, 1)],
        vec![r(0, 1), r(0, 1), r(1, 3), r(2, 3)],
        vec![r(0, 1), r(0, 1), r(0, 1), r(1, 1)],
    ]);
    let target = catalog::named_lattice("U(3)+A2(3)").expect("catalog grammar");
    let images = &coords.to_rat() * &gamma;
    let gram = &(&images * &target.gram().to_rat()) * &images.transpose();
    let gram = gram.to_int().ok_or(LatticeError::NotIntegral)?;
    Ok(Lattice::new(gram)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_examples() {
        let full = IntMatrix::identity(4);
        let img = apply_gamma(&full).unwrap();
        let expected = catalog::named_lattice("U(3)+A2").unwrap();
        assert!(fqf_isomorphic(&discriminant_form(&img).unwrap(), &discriminant_form(&expected).unwrap()).unwrap());
        let sub = IntMatrix::from_i64(&[&[1, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let img = apply_gamma(&sub).unwrap();
        assert_eq!(img.det(), BigInt::from(-18));
        assert_eq!(img.gram()[(0, 0)], BigInt::from(-6));
    }

    #[test]
    fn shioda_tate() {
        let cfg = KodairaConfiguration { chi: 2, fibers: vec![] };
        assert_eq!(shioda_tate_rank(3, &cfg).unwrap(), 1);
        assert!(shioda_tate_rank(1, &cfg).is_err());
    }
}
