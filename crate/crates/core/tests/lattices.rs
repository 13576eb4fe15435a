use num_bigint::BigInt;

use k3si::catalog::{self, named_lattice};
use k3si::lattice::{discriminant_form, fqf_isomorphic, genus_unique, root_count, GenusVerdict, Lattice};
use k3si::structures::{e6_cube_complement, scan_e6_cube};

fn same_form(a: &Lattice, b: &Lattice) -> bool {
    fqf_isomorphic(&discriminant_form(a).unwrap(), &discriminant_form(b).unwrap()).unwrap()
}

fn opposite_form(a: &Lattice, b: &Lattice) -> bool {
    fqf_isomorphic(&discriminant_form(a).unwrap(), &discriminant_form(b).unwrap().opposite()).unwrap()
}

#[test]
fn root_counts_of_the_negative_definite_table() {
    let table = [
        ("Kummer2", 32),
        ("E8(-1)+Nikulin", 256),
        ("Kummer3", 54),
        ("M3E6_primed", 108),
        ("E6triple_primed", 216),
        ("(E8^2+A2)(-1)", 486),
        ("E8(-1)^2", 480),
    ];
    for (name, expected) in table {
        let l = named_lattice(name).unwrap();
        assert!(l.is_negative_definite(), "{name}");
        assert_eq!(root_count(&l).unwrap(), expected, "{name}");
    }
}

#[test]
fn k3_lattice_model_is_unimodular() {
    let m = catalog::lambda_k3_model().unwrap();
    assert!(m.lattice.is_even());
    let det = m.lattice.det();
    assert_eq!(&det * &det, BigInt::from(1));
    assert_eq!((m.lattice.signature().pos, m.lattice.signature().neg), (3, 19));
    assert_eq!(m.index, BigInt::from(9));
    assert_eq!(m.parent.det(), BigInt::from(-81));
}

#[test]
fn complement_of_e6_cube_is_u_plus_a2() {
    let c = e6_cube_complement().unwrap();
    let sig = c.signature();
    assert_eq!((sig.pos, sig.neg), (3, 1));
    let q = discriminant_form(&c).unwrap();
    assert_eq!(q.invariants(), &[BigInt::from(3)]);
    assert_eq!(q.gram()[0][0], k3si::exact::rat(2, 3));
    assert_eq!(genus_unique(sig, &q), GenusVerdict::Unique);
    assert!(same_form(&c, &named_lattice("U+A2").unwrap()));
}

#[test]
fn discriminant_form_identities() {
    let n = named_lattice("Nikulin").unwrap();
    assert!(same_form(&n, &named_lattice("U(2)^3").unwrap()));
    let o2 = named_lattice("Omega2").unwrap();
    assert!(same_form(&o2, &named_lattice("U(2)^4").unwrap()));
    let target = named_lattice("U(3)+A2").unwrap();
    assert!(opposite_form(&named_lattice("M3E6_primed").unwrap(), &target));
    assert!(opposite_form(&named_lattice("Kummer3").unwrap(), &target));
    // and not merely the same form
    assert!(!same_form(&named_lattice("Kummer3").unwrap(), &target));
}

#[test]
fn overlattice_scan_over_small_d() {
    let mut exists = Vec::new();
    for d in 1..=12 {
        let s = scan_e6_cube(d).unwrap();
        if s.exists() {
            assert_eq!(s.classes, 1, "d = {d}");
            exists.push(d);
        }
    }
    // 2d/9 + 4/3 ≡ 0 (mod 2) forces d ≡ 3 (mod 9)
    assert_eq!(exists, vec![3, 12]);
}

#[test]
fn k12_short_vectors() {
    let k = catalog::entry("K12").unwrap().lattice;
    assert_eq!(k3si::lattice::count_vectors_of_norm(&k, -4).unwrap(), 756);
    assert_eq!(root_count(&k).unwrap(), 0);
}
