use std::fs;
use std::path::{Path, PathBuf};

use k3si::exact::RatPoly;
use k3si::fibration::{classify, section_order, Form, Section, SectionOrder, WeierstrassModel};
use k3si::io::{parse_model_text, section_from_value, IoError, ModelFile};

fn models_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn load(name: &str) -> ModelFile {
    let text = fs::read_to_string(models_dir().join(name)).unwrap();
    parse_model_text(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn weierstrass(name: &str) -> WeierstrassModel {
    match load(name) {
        ModelFile::Weierstrass(w) => w,
        other => panic!("{name}: {other:?}"),
    }
}

const EXPECTED: &[(&str, &str)] = &[
    ("x3.json", "3IV*"),
    ("x3_quotient.json", "3IV*"),
    ("x3_involution.json", "II*+IV*+I0*"),
    ("x3_quotient_involution.json", "II*+IV*+I0*"),
    ("eq3_k1.json", "2IV*+I6+2I1"),
    ("eq3_k1_quotient.json", "2IV*+2I3+I2"),
    ("eq3_k1_involution.json", "IV*+I3*+I0*+I1"),
    ("eq3_k1_quotient_involution.json", "IV*+I1*+I0*+I3"),
    ("eq3_k2.json", "2IV*+I6+2I1"),
    ("eq3_k2_quotient.json", "2IV*+2I3+I2"),
    ("eq3_k2_involution.json", "IV*+I3*+I0*+I1"),
    ("eq3_k2_quotient_involution.json", "IV*+I1*+I0*+I3"),
    ("i18.json", "I18+6I1"),
    ("i18_beta2.json", "I18+6I1"),
    ("i18_quotient.json", "I6+6I3"),
    ("i18_involution.json", "I9*+I0*+3I1"),
    ("i18_quotient_involution.json", "I3*+I0*+3I3"),
];

#[test]
fn every_model_file_parses() {
    let mut seen = 0;
    for entry in fs::read_dir(models_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if name.ends_with("_section.json") {
            // sections are read against their model below
            continue;
        }
        load(&name);
        seen += 1;
    }
    assert_eq!(seen, EXPECTED.len() + 1);
}

#[test]
fn configurations_and_discriminant_identity() {
    for (name, cfg) in EXPECTED {
        let w = weierstrass(name);
        let c = w.c_invariants();
        let lhs = &c.c4.pow(3) - &c.c6.pow(2);
        assert_eq!(lhs, c.delta.scale(&k3si::exact::rat(1728, 1)), "{name}");
        let got = classify(&w).unwrap();
        assert_eq!(got.euler_sum(), 12 * w.chi() as u64, "{name}");
        assert!(got.matches(cfg), "{name}: {}", got.summary());
    }
}

#[test]
fn stored_section_has_order_three() {
    let w = weierstrass("eq3_k1.json");
    let text = fs::read_to_string(models_dir().join("eq3_k1_section.json")).unwrap();
    let (x, y) = section_from_value(&serde_json::from_str(&text).unwrap(), "").unwrap();
    let p = Section::point(&w, x, y).unwrap();
    assert_eq!(section_order(&w, &p, 12).unwrap(), SectionOrder::Finite(3));
}

#[test]
fn lattice_file() {
    match load("a2.json") {
        ModelFile::Lattice { name, lattice } => {
            assert_eq!(name.as_deref(), Some("A2"));
            assert!(lattice.is_even());
            assert_eq!(lattice.det(), 3.into());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn equation_text_gives_short_form() {
    let w = weierstrass("x3.json");
    assert_eq!(w.form(), Form::Short);
    assert_eq!(w.chi(), 2);
    assert_eq!(w.a6(), &RatPoly::from_ints(&[-1, 0, 1]).pow(4));
}

#[test]
fn malformed_inputs_name_the_path() {
    let bad = r#"{"chi": 2, "form": "long", "a1": [], "a2": [], "a3": [], "a4": [], "a6": ["1", "1/0"]}"#;
    match parse_model_text(bad) {
        Err(IoError::Schema { path, reason }) => {
            assert_eq!(path, "a6[1]");
            assert!(reason.contains("zero denominator"));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_model_text(r#"{"chi": 2}"#), Err(IoError::Schema { .. })));
    assert!(matches!(parse_model_text("{"), Err(IoError::Json(_))));
    // Δ ≡ 0 is rejected as an invariant failure
    let singular = r#"{"chi": 1, "form": "short", "C": [], "A": [], "B": []}"#;
    assert!(matches!(parse_model_text(singular), Err(IoError::Invariant { .. })));
}
