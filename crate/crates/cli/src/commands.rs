//! Subcommand definitions and dispatch for the `k3si` binary.

use std::path::Path;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use k3si::catalog::{describe, Catalog};
use k3si::exact::{IntMatrix, RatMatrix};
use k3si::fibration::{
    apply_gamma, classify, ns_from_sections, quotient_by_involution, quotient_by_three_torsion, section_order,
    transcendental_from_ns, Section, SectionOrder, WeierstrassModel,
};
use k3si::io::{fraction_from_value, lattice_to_value, model_to_value, section_from_value, ModelFile};
use k3si::lattice::{
    discriminant_form, enumerate_overlattices, fqf_isomorphic, genus_unique, orthogonal_complement, root_count,
    FiniteQuadraticForm, Lattice,
};

use crate::{parse_model_file, report};

#[derive(Parser)]
#[command(name = "k3si", version, about = "Exact lattice and elliptic-fibration computations for K3 surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice operations. LATTICE is a catalog expression (`U(3)+A2`,
    /// `E6(-1)^3`, `Kummer3`, …) or a path to a lattice JSON file.
    #[command(subcommand)]
    Lat(LatCommand),
    /// Elliptic fibrations given as Weierstrass-model JSON files.
    #[command(subcommand)]
    Fib(FibCommand),
    /// Re-runs every reproduced claim; exits nonzero if any fails.
    VerifyPaper {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum LatCommand {
    /// Rank, signature, determinant, parity and discriminant group.
    Info { lattice: String },
    /// Number of roots (vectors of norm ±2) of a definite lattice.
    Roots { lattice: String },
    /// The discriminant quadratic form.
    Discform { lattice: String },
    /// Compares discriminant forms (and their opposites) of two lattices.
    Compare { a: String, b: String },
    /// Orthogonal complement of the span of ROWS, e.g. `[[1,0],[0,"1/2"]]`.
    Complement {
        lattice: String,
        #[arg(long)]
        rows: String,
    },
    /// Even index-p overlattices keeping each block (e.g. `0..1,1..19`) primitive.
    Overlattices {
        lattice: String,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        blocks: Option<String>,
    },
}

#[derive(Subcommand)]
enum FibCommand {
    /// Singular fibers by place.
    Classify { model: String },
    /// Quotient by the fiberwise involution induced by t ↦ −t.
    QuotientInv { model: String },
    /// Quotient by translation by a 3-torsion section.
    #[command(name = "quotient-3t")]
    Quotient3t {
        model: String,
        #[arg(long)]
        section: String,
    },
    /// Néron–Severi lattice from the trivial lattice and torsion sections,
    /// with transcendental-lattice candidates.
    Ns {
        model: String,
        #[arg(long = "section")]
        sections: Vec<String>,
    },
    /// Image under γ of a sublattice of U ⊕ A2 given in the basis u1, u2, a1, a2.
    Gamma {
        #[arg(long)]
        rows: String,
    },
}

type CmdResult = Result<Value, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn load_lattice(arg: &str) -> Result<Lattice, String> {
    if Path::new(arg).is_file() {
        return match parse_model_file(arg).map_err(err)? {
            ModelFile::Lattice { lattice, .. } => Ok(lattice),
            ModelFile::Weierstrass(_) => Err(format!("{arg} holds a Weierstrass model, not a lattice")),
        };
    }
    Catalog::new().lattice(arg).map_err(err)
}

fn load_model(arg: &str) -> Result<WeierstrassModel, String> {
    match parse_model_file(arg).map_err(err)? {
        ModelFile::Weierstrass(w) => Ok(w),
        ModelFile::Lattice { .. } => Err(format!("{arg} holds a lattice, not a Weierstrass model")),
    }
}

fn load_section(w: &WeierstrassModel, arg: &str) -> Result<Section, String> {
    let text = std::fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{arg}: {e}"))?;
    let (x, y) = section_from_value(&v, "").map_err(|e| format!("{arg}: {e}"))?;
    Section::point(w, x, y).map_err(|e| format!("{arg}: {e}"))
}

fn parse_rows(text: &str) -> Result<RatMatrix, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("rows: {e}"))?;
    let rows = v.as_array().ok_or("rows: expected a list of rows")?;
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let r = r.as_array().ok_or_else(|| format!("rows[{i}]: expected a list"))?;
        let row: Result<Vec<BigRational>, String> = r
            .iter()
            .enumerate()
            .map(|(j, x)| fraction_from_value(x, &format!("rows[{i}][{j}]")).map_err(err))
            .collect();
        out.push(row?);
    }
    RatMatrix::try_from_rows(out).map_err(err)
}

fn parse_blocks(text: &str, rank: usize) -> Result<Vec<std::ops::Range<usize>>, String> {
    text.split(',')
        .map(|b| {
            let (s, e) = b.trim().split_once("..").ok_or_else(|| format!("block `{b}`: expected start..end"))?;
            let s: usize = s.parse().map_err(|_| format!("block `{b}`: bad start"))?;
            let e: usize = e.parse().map_err(|_| format!("block `{b}`: bad end"))?;
            if s >= e || e > rank {
                return Err(format!("block `{b}` out of range for rank {rank}"));
            }
            Ok(s..e)
        })
        .collect()
}

fn form_value(q: &FiniteQuadraticForm) -> Value {
    json!({
        "invariants": q.invariants().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "q": q.gram().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn info_value(l: &Lattice) -> Result<Value, String> {
    let q = discriminant_form(l).map_err(err)?;
    let sig = l.signature();
    Ok(json!({
        "rank": l.rank().to_string(),
        "signature": sig.to_string(),
        "det": l.det().to_string(),
        "even": l.is_even(),
        "discriminant_group": q.invariants().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "genus": format!("{:?}", genus_unique(sig, &q)).to_lowercase(),
    }))
}

fn lat(cmd: LatCommand) -> CmdResult {
    match cmd {
        LatCommand::Info { lattice } => info_value(&load_lattice(&lattice)?),
        LatCommand::Roots { lattice } => {
            let l = load_lattice(&lattice)?;
            Ok(json!({ "roots": root_count(&l).map_err(err)?.to_string() }))
        }
        LatCommand::Discform { lattice } => Ok(form_value(&discriminant_form(&load_lattice(&lattice)?).map_err(err)?)),
        LatCommand::Compare { a, b } => {
            let (la, lb) = (load_lattice(&a)?, load_lattice(&b)?);
            let (qa, qb) = (discriminant_form(&la).map_err(err)?, discriminant_form(&lb).map_err(err)?);
            Ok(json!({
                "a": describe(&la),
                "b": describe(&lb),
                "same_form": fqf_isomorphic(&qa, &qb).map_err(err)?,
                "opposite_form": fqf_isomorphic(&qa, &qb.opposite()).map_err(err)?,
                "same_signature": la.signature() == lb.signature(),
            }))
        }
        LatCommand::Complement { lattice, rows } => {
            let l = load_lattice(&lattice)?;
            let s = parse_rows(&rows)?;
            let c = orthogonal_complement(&l, &s).map_err(err)?;
            let mut v = info_value(&c.lattice)?;
            v["lattice"] = lattice_to_value(None, &c.lattice);
            v["basis"] = json!(c.basis.rows_iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>());
            Ok(v)
        }
        LatCommand::Overlattices { lattice, prime, blocks } => {
            let l = load_lattice(&lattice)?;
            let blocks = match blocks {
                Some(b) => parse_blocks(&b, l.rank())?,
                None => vec![0..l.rank()],
            };
            let search = enumerate_overlattices(&l, prime, &blocks).map_err(err)?;
            let candidates: Vec<Value> = search
                .candidates
                .iter()
                .map(|c| {
                    json!({
                        "glue": c.glue.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "det": c.overlattice.lattice.det().to_string(),
                        "even": c.overlattice.lattice.is_even(),
                    })
                })
                .collect();
            Ok(json!({ "candidates": candidates, "classes": search.orbits.len().to_string() }))
        }
    }
}

fn fib(cmd: FibCommand) -> CmdResult {
    match cmd {
        FibCommand::Classify { model } => {
            let w = load_model(&model)?;
            let cfg = classify(&w).map_err(err)?;
            let fibers: Vec<Value> = cfg
                .fibers
                .iter()
                .map(|f| json!({ "place": f.place.to_string(), "type": f.kind.to_string(), "degree": f.multiplicity.to_string() }))
                .collect();
            Ok(json!({ "summary": cfg.summary(), "euler": cfg.euler_sum().to_string(), "fibers": fibers }))
        }
        FibCommand::QuotientInv { model } => Ok(model_to_value(&quotient_by_involution(&load_model(&model)?).map_err(err)?)),
        FibCommand::Quotient3t { model, section } => {
            let w = load_model(&model)?;
            let p = load_section(&w, &section)?;
            Ok(model_to_value(&quotient_by_three_torsion(&w, &p).map_err(err)?))
        }
        FibCommand::Ns { model, sections } => {
            let w = load_model(&model)?;
            let mut ps = Vec::new();
            for s in &sections {
                let p = load_section(&w, s)?;
                match section_order(&w, &p, 12).map_err(err)? {
                    SectionOrder::Finite(_) => ps.push(p),
                    SectionOrder::ExceedsCap => return Err(format!("{s}: not a torsion section of order ≤ 12")),
                }
            }
            let torsion: Vec<(&WeierstrassModel, &Section)> = ps.iter().map(|p| (&w, p)).collect();
            let (cfg, ns) = ns_from_sections(&w, &torsion).map_err(err)?;
            let l = ns.lattice();
            let t = transcendental_from_ns(l).map_err(err)?;
            Ok(json!({
                "fibers": cfg.summary(),
                "ns": { "rank": l.rank().to_string(), "det": l.det().to_string(), "signature": l.signature().to_string(),
                        "index_over_trivial": ns.overlattice.index.to_string() },
                "transcendental": {
                    "signature": t.signature.to_string(),
                    "form": form_value(&t.form),
                    "matches": t.matches,
                    "genus": format!("{:?}", t.genus).to_lowercase(),
                },
            }))
        }
        FibCommand::Gamma { rows } => {
            let m = parse_rows(&rows)?;
            let m: IntMatrix = m.to_int().ok_or("rows must be integral")?;
            let img = apply_gamma(&m).map_err(err)?;
            let mut v = info_value(&img)?;
            v["lattice"] = lattice_to_value(None, &img);
            Ok(v)
        }
    }
}

/// What a command printed and the process exit code it asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
/// Exit codes: 0 success, 1 a report claim failed, 2 usage or input error.
pub fn execute<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Output { code, stdout, stderr };
        }
    };
    let result = match cli.command {
        Command::Lat(c) => lat(c),
        Command::Fib(c) => fib(c),
        Command::VerifyPaper { json } => {
            let r = report::verify_paper(&Catalog::new());
            let stdout = if json { format!("{}\n", r.to_json()) } else { r.to_text() };
            return Output { code: u8::from(r.failed()), stdout, stderr: String::new() };
        }
    };
    match result {
        Ok(v) => Output {
            code: 0,
            stdout: format!("{}\n", serde_json::to_string_pretty(&v).expect("json")),
            stderr: String::new(),
        },
        Err(e) => Output { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

#[cfg(test)]
mod tests {
    use std::path::PathBuf;

    use super::execute;

    fn models() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
    }

    fn k3si(args: &[&str]) -> (i32, String, String) {
        let out = execute(std::iter::once("k3si").chain(args.iter().copied()));
        (i32::from(out.code), out.stdout, out.stderr)
    }

    fn json(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap_or_else(|e| panic!("{e}: {s}"))
    }

    #[test]
    fn lat_commands() {
        let (code, out, _) = k3si(&["lat", "info", "U(3)+A2"]);
        assert_eq!(code, 0);
        let v = json(&out);
        assert_eq!(v["det"], "-27");
        assert_eq!(v["signature"], "(3,1)");
        assert_eq!(v["discriminant_group"], serde_json::json!(["3", "3", "3"]));

        let a2 = models().join("a2.json");
        let (code, out, _) = k3si(&["lat", "roots", a2.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(json(&out)["roots"], "6");

        let (_, out, _) = k3si(&["lat", "discform", "A2"]);
        assert_eq!(json(&out)["q"], serde_json::json!([["2/3"]]));

        let (_, out, _) = k3si(&["lat", "compare", "Kummer3", "U(3)+A2"]);
        let v = json(&out);
        assert_eq!((v["same_form"].as_bool(), v["opposite_form"].as_bool()), (Some(false), Some(true)));

        let (_, out, _) = k3si(&["lat", "complement", "U+A2", "--rows", "[[0,0,1,0],[0,0,0,1]]"]);
        assert_eq!(json(&out)["det"], "-1");

        let (_, out, _) = k3si(&["lat", "overlattices", "<6>+<-6>", "--prime", "3", "--blocks", "0..1,1..2"]);
        let v = json(&out);
        assert_eq!(v["candidates"].as_array().unwrap().len(), 2);

        let (code, _, err) = k3si(&["lat", "info", "Nonsense"]);
        assert_eq!(code, 2);
        assert!(err.contains("Nonsense"));
    }

    #[test]
    fn fib_commands() {
        let x3 = models().join("x3.json");
        let x3 = x3.to_str().unwrap();
        let (code, out, _) = k3si(&["fib", "classify", x3]);
        assert_eq!(code, 0);
        let v = json(&out);
        assert_eq!(v["summary"], "3IV*");
        assert_eq!(v["euler"], "24");

        let (code, out, _) = k3si(&["fib", "quotient-inv", x3]);
        assert_eq!(code, 0);
        let dir = tempfile::tempdir().unwrap();
        let z = dir.path().join("z.json");
        std::fs::write(&z, &out).unwrap();
        let (_, out, _) = k3si(&["fib", "classify", z.to_str().unwrap()]);
        assert_eq!(json(&out)["summary"], "II*+IV*+I0*");

        let eq3 = models().join("eq3_k1.json");
        let sec = models().join("eq3_k1_section.json");
        let (code, out, err) = k3si(&["fib", "quotient-3t", eq3.to_str().unwrap(), "--section", sec.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
        let y = dir.path().join("y.json");
        std::fs::write(&y, &out).unwrap();
        let (_, out, _) = k3si(&["fib", "classify", y.to_str().unwrap()]);
        assert_eq!(json(&out)["summary"], "2IV*+2I3+I2");

        let (code, out, err) = k3si(&["fib", "ns", eq3.to_str().unwrap(), "--section", sec.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
        let v = json(&out);
        assert_eq!(v["ns"]["det"], "6");
        assert_eq!(v["ns"]["signature"], "(1,18)");
        assert_eq!(v["transcendental"]["matches"], serde_json::json!(["U+<6>", "A2+<-2>"]));

        let (_, out, _) = k3si(&["fib", "gamma", "--rows", "[[1,0,0,0],[0,1,0,0],[0,0,0,1]]"]);
        assert_eq!(json(&out)["lattice"]["gram"], serde_json::json!([["0", "3", "0"], ["3", "0", "0"], ["0", "0", "6"]]));
    }

    #[test]
    fn verify_paper_exit_code_tracks_failures() {
        let (code, out, _) = k3si(&["verify-paper", "--json"]);
        let v = json(&out);
        let any_fail = v["claims"].as_array().unwrap().iter().any(|c| c["status"] == "fail");
        assert_eq!(code != 0, any_fail);
        let (_, text, _) = k3si(&["verify-paper"]);
        assert!(text.contains("claims:"));
    }

    #[test]
    fn usage_errors() {
        let (code, _, err) = k3si(&["lat", "frobnicate"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
        let (code, out, _) = k3si(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("verify-paper"));
    }
}
