//! Acceptance run: one PASS/FAIL line per criterion. Built with
//! `harness = false`, so the lines are printed on every `cargo test`.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use k3si::catalog::{named_lattice, Catalog};
use k3si::fibration::classify;
use k3si::io::ModelFile;
use k3si::lattice::{discriminant_form, fqf_isomorphic, root_count};
use k3si_cli::parse_model_file;
use k3si_cli::report::{Claim, Status, CLAIMS};

struct Verdict {
    ok: bool,
    detail: String,
}

fn claim(id: &str) -> (Claim, Duration) {
    let spec = CLAIMS.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("no claim `{id}`"));
    let start = Instant::now();
    let c = spec.run(&Catalog::new());
    (c, start.elapsed())
}

fn from_claim(id: &str) -> Verdict {
    let (c, _) = claim(id);
    Verdict { ok: c.status == Status::Pass, detail: c.computed }
}

fn timed_claim(id: &str, limit: Duration) -> Verdict {
    let (c, t) = claim(id);
    let fast = t < limit;
    Verdict {
        ok: c.status == Status::Pass && fast,
        detail: format!("{} [{:.2?}, limit {:?}]", c.computed, t, limit),
    }
}

fn root_table() -> Verdict {
    let mut v = from_claim("root-count-table");
    for name in ["Kummer2", "E8(-1)+Nikulin", "Kummer3", "M3E6_primed", "E6triple_primed", "(E8^2+A2)(-1)"] {
        let l = named_lattice(name).unwrap();
        let start = Instant::now();
        let _ = root_count(&l);
        let t = start.elapsed();
        if t >= Duration::from_secs(60) {
            v.ok = false;
            v.detail.push_str(&format!("; {name} took {t:.2?}"));
        }
    }
    v
}

fn disc_forms() -> Verdict {
    let mut v = from_claim("discriminant-forms");
    for (a, b) in [("Nikulin", "U(2)^3"), ("Omega2", "U(2)^4"), ("M3E6_primed", "U(3)+A2"), ("Kummer3", "U(3)+A2")] {
        let (la, lb) = (named_lattice(a).unwrap(), named_lattice(b).unwrap());
        let start = Instant::now();
        let qa = discriminant_form(&la).unwrap();
        let qb = discriminant_form(&lb).unwrap();
        let _ = fqf_isomorphic(&qa, &qb);
        let _ = fqf_isomorphic(&qa, &qb.opposite());
        let t = start.elapsed();
        if t >= Duration::from_secs(1) {
            v.ok = false;
            v.detail.push_str(&format!("; {a} vs {b} took {t:.2?}"));
        }
    }
    v
}

fn property_suite() -> Verdict {
    let mut v = timed_claim("property-suite", Duration::from_secs(120));
    // the shipped model files as well
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models");
    let mut n = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.to_string_lossy().ends_with("_section.json") {
            continue;
        }
        if let Ok(ModelFile::Weierstrass(w)) = parse_model_file(&path) {
            n += 1;
            let sum = classify(&w).map(|c| c.euler_sum()).unwrap_or(0);
            if sum != 24 {
                v.ok = false;
                v.detail.push_str(&format!("; {} has Euler sum {sum}", path.display()));
            }
        }
    }
    v.detail.push_str(&format!("; {n} model files with Euler sum 24"));
    v
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Verdict>)> = vec![
        (1, "root-count table", Box::new(root_table)),
        (2, "E8(-1)^2 non-embedding", Box::new(|| from_claim("e8-pair-non-embedding"))),
        (3, "K3 lattice model", Box::new(|| from_claim("k3-lattice-model"))),
        (4, "complement of (E6(-1)^3)'", Box::new(|| from_claim("e6-cube-complement"))),
        (5, "discriminant-form suite", Box::new(disc_forms)),
        (6, "overlattice scan d = 1..12", Box::new(|| from_claim("overlattice-scan"))),
        (7, "pure cubic pipeline", Box::new(|| timed_claim("pure-cubic-pipeline", Duration::from_secs(5)))),
        (8, "S3 action on NS", Box::new(|| from_claim("s3-action"))),
        (9, "2IV*+I6 family", Box::new(|| from_claim("family-2IV*I6"))),
        (10, "I18 family", Box::new(|| from_claim("family-I18"))),
        (11, "order-6 obstruction", Box::new(|| from_claim("order-6-obstruction"))),
        (12, "property suite", Box::new(property_suite)),
    ];
    let mut failed = 0;
    for (n, name, check) in &criteria {
        let v = check();
        if !v.ok {
            failed += 1;
        }
        println!("{} criterion {n:>2} ({name}): {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
