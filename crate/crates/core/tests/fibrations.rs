use num_bigint::BigInt;
use num_rational::BigRational;

use k3si::catalog::named_lattice;
use k3si::exact::{rat, IntMatrix, RatPoly};
use k3si::fibration::*;
use k3si::lattice::{discriminant_form, fqf_isomorphic, GenusVerdict, Lattice};

fn t_report(w: &WeierstrassModel, torsion: &[(&WeierstrassModel, &Section)]) -> (KodairaConfiguration, NsLattice, TransLatticeReport) {
    let (cfg, ns) = ns_from_sections(w, torsion).unwrap();
    let t = transcendental_from_ns(ns.lattice()).unwrap();
    (cfg, ns, t)
}

fn abs_det(l: &Lattice) -> BigInt {
    let d = l.det();
    if d < BigInt::from(0) { -d } else { d }
}

#[test]
fn isotrivial_pure_cubic_and_its_quotients() {
    let x = x3_model();
    let p = x3_section(&x).unwrap();
    assert!(classify(&x).unwrap().matches("3IV*"));
    assert_eq!(
        bad_places(&x).unwrap().iter().map(ToString::to_string).collect::<Vec<_>>(),
        vec!["t + 1", "t - 1", "inf"]
    );

    let (_, ns, t) = t_report(&x, &[(&x, &p)]);
    assert_eq!(ns.lattice().rank(), 20);
    assert_eq!(abs_det(ns.lattice()), BigInt::from(3));
    let u_e8_e8_a2 = named_lattice("U+E8(-1)^2+A2(-1)").unwrap();
    assert!(fqf_isomorphic(&discriminant_form(ns.lattice()).unwrap(), &discriminant_form(&u_e8_e8_a2).unwrap()).unwrap());
    assert_eq!(t.matches, vec!["A2"]);
    assert_eq!(t.genus, GenusVerdict::Unique);

    let y = quotient_by_three_torsion(&x, &p).unwrap();
    assert_eq!(y.a6(), &RatPoly::from_ints(&[-1, 0, 1]).pow(4).scale(&rat(-27, 1)));
    assert!(classify(&y).unwrap().matches("3IV*"));
    // the quotient again carries 3-torsion (over ℚ(√−3))
    let (tw, q) = dual_kernel_on_twist(&y).unwrap();
    assert_eq!(section_order(&tw, &q, 12).unwrap(), SectionOrder::Finite(3));

    let z = quotient_by_involution(&x).unwrap();
    let tau = RatPoly::t();
    assert_eq!(z.a6(), &(&tau.pow(3) * &RatPoly::from_ints(&[-1, 1]).pow(4)));
    let (_, _, tz) = t_report(&z, &[]);
    assert!(classify(&z).unwrap().matches("II*+IV*+I0*"));
    assert_eq!(tz.matches, vec!["A2(2)"]);

    let w = quotient_by_involution(&y).unwrap();
    assert_eq!(w.a6(), &(&tau.pow(3) * &RatPoly::from_ints(&[-1, 1]).pow(4)).scale(&rat(-27, 1)));
    assert_eq!(classify(&w).unwrap().counts(), classify(&z).unwrap().counts());
}

#[test]
fn s3_acts_on_ns_of_the_pure_cubic() {
    let s = x3_symmetries().unwrap();
    let g = s.group(100).unwrap();
    assert_eq!((g.order, g.abelian), (6, false));
}

#[test]
fn ns_with_d4_and_e6_blocks_gives_a2_twice() {
    let ns = named_lattice("U+E8(-1)+D4(-1)+E6(-1)").unwrap();
    let t = transcendental_from_ns(&ns).unwrap();
    let q = discriminant_form(&ns).unwrap();
    assert_eq!(q.invariants(), &[BigInt::from(2), BigInt::from(6)]);
    assert_eq!(t.matches, vec!["A2(2)"]);
}

fn eq3_family(k: BigRational) {
    let x = eq3_model(&k).unwrap();
    let p = eq3_section(&x, &k).unwrap();
    assert_eq!(section_order(&x, &p, 12).unwrap(), SectionOrder::Finite(3));
    let (a, b) = match to_three_torsion_form(&x, &p).unwrap() {
        ThreeTorsionForm::AB { a, b } => (a, b),
        other => panic!("{other:?}"),
    };
    // a is only defined up to sign (the equation involves a²); the section
    // (0, +ab) yields a = 1 − t²
    assert_eq!(a, RatPoly::from_ints(&[1, 0, -1]).into());
    let b_expected = RatPoly::new(vec![rat(0, 1), rat(0, 1), -k.clone(), rat(0, 1), k.clone()]);
    assert_eq!(b, b_expected.into());

    let (cfg, ns, t) = t_report(&x, &[(&x, &p)]);
    assert!(cfg.matches("2IV*+I6+2I1"), "{}", cfg.summary());
    assert_eq!(shioda_tate_rank(19, &cfg).unwrap(), 0);
    assert_eq!(abs_det(ns.lattice()), BigInt::from(6));
    assert_eq!(t.matches, vec!["U+<6>", "A2+<-2>"]);
    let u6 = named_lattice("U+<6>").unwrap();
    let a2m2 = named_lattice("A2+<-2>").unwrap();
    assert!(fqf_isomorphic(&discriminant_form(&u6).unwrap(), &discriminant_form(&a2m2).unwrap()).unwrap());

    let y = quotient_by_three_torsion(&x, &p).unwrap();
    let (tw, q) = dual_kernel_on_twist(&y).unwrap();
    let (cfg, _, t) = t_report(&y, &[(&tw, &q)]);
    assert!(cfg.matches("2IV*+2I3+I2"), "{}", cfg.summary());
    assert_eq!(t.matches, vec!["A2+<-6>"]);

    let z = quotient_by_involution(&x).unwrap();
    let (cfg, _, t) = t_report(&z, &[]);
    assert!(cfg.matches("IV*+I3*+I0*+I1"), "{}", cfg.summary());
    assert_eq!(t.matches, vec!["U(2)+<12>"]);

    let w = quotient_by_involution(&y).unwrap();
    let (cfg, _, t) = t_report(&w, &[]);
    assert!(cfg.matches("IV*+I1*+I0*+I3"), "{}", cfg.summary());
    assert_eq!(t.matches, vec!["A2(2)+<-12>"]);
}

#[test]
fn one_parameter_family_at_k_equal_one() {
    eq3_family(rat(1, 1));
}

#[test]
fn one_parameter_family_at_k_equal_minus_five_thirds() {
    eq3_family(rat(-5, 3));
}

#[test]
fn tate_normal_form_family() {
    let x = i18_model(&rat(0, 1)).unwrap();
    let p = i18_section(&x).unwrap();
    let (cfg, _, t) = t_report(&x, &[(&x, &p)]);
    assert!(cfg.matches("I18+6I1"), "{}", cfg.summary());
    assert_eq!(shioda_tate_rank(19, &cfg).unwrap(), 0);
    let i18 = cfg.fibers.iter().find(|f| f.kind == KodairaType::I(18)).unwrap();
    assert!([6, 12].contains(&contact_component(&x, &p, &i18.place).unwrap()));
    assert_eq!(t.matches, vec!["U+<2>"]);

    let y = quotient_by_three_torsion(&x, &p).unwrap();
    let (tw, q) = dual_kernel_on_twist(&y).unwrap();
    let r = i18_quotient_section(&y).unwrap();
    let (cfg, ns, t) = t_report(&y, &[(&tw, &q), (&y, &r)]);
    assert!(cfg.matches("I6+6I3"), "{}", cfg.summary());
    assert_eq!(ns.overlattice.index, BigInt::from(9));
    assert_eq!(abs_det(ns.lattice()), BigInt::from(54));
    assert_eq!(t.matches, vec!["U(3)+<6>"]);

    let z = quotient_by_involution(&x).unwrap();
    let (cfg, _, t) = t_report(&z, &[]);
    assert!(cfg.matches("I9*+I0*+3I1"), "{}", cfg.summary());
    assert_eq!(t.matches, vec!["U(2)+<4>"]);

    let w = quotient_by_involution(&y).unwrap();
    let (cfg, _, t) = t_report(&w, &[]);
    assert!(cfg.matches("I3*+I0*+3I3"), "{}", cfg.summary());
    assert_eq!(t.matches, vec!["U(6)+<12>"]);
}

#[test]
fn tate_normal_form_with_linear_a1_keeps_fibers() {
    let x = i18_model(&rat(2, 1)).unwrap();
    assert!(classify(&x).unwrap().matches("I18+6I1"));
    // no t ↦ −t symmetry once β ≠ 0
    assert!(matches!(quotient_by_involution(&x), Err(FibrationError::OddTerm(_))));
}

#[test]
fn gamma_images() {
    let same = |a: &Lattice, b: &str| {
        let b = named_lattice(b).unwrap();
        a.rank() == b.rank()
            && a.signature() == b.signature()
            && fqf_isomorphic(&discriminant_form(a).unwrap(), &discriminant_form(&b).unwrap()).unwrap()
    };
    assert!(same(&apply_gamma(&IntMatrix::identity(4)).unwrap(), "U(3)+A2"));
    let sub = IntMatrix::from_i64(&[&[1, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    assert!(same(&apply_gamma(&sub).unwrap(), "<-6>+A2"));
    let u_2 = IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
    let img = apply_gamma(&u_2).unwrap();
    assert_eq!(img, named_lattice("U(3)+<6>").unwrap());
}

#[test]
fn contact_components_on_tate_normal_form() {
    // (0,0) meets the I18 fiber at t = 0 in component 6 (or 12, reflected)
    let x = i18_model(&rat(0, 1)).unwrap();
    let p = i18_section(&x).unwrap();
    let v = contact_component(&x, &p, &k3si::exact::Place::at(&rat(0, 1))).unwrap();
    assert_eq!(v, 6);
    let m = contact_component(&x, &p.neg(&x), &k3si::exact::Place::at(&rat(0, 1))).unwrap();
    assert!([6, 12].contains(&m));
    let bad = i18_model(&rat(0, 1)).unwrap();
    let q = Section::point(&bad, k3si::exact::RatFunc::constant(rat(1, 1)), k3si::exact::RatFunc::constant(rat(1, 1)));
    assert!(matches!(q, Err(FibrationError::NotOnCurve)));
}
