//! JSON interchange: exact fractions, coefficient lists, lattices, glue
//! vectors, Weierstrass models and sections.
//!
//! Fractions are written `["num","den"]`; on input a bare integer or an
//! `"a/b"` string is accepted as well. Every schema error carries the JSON
//! path of the offending value (`a4[2]`, `gram[1][0]`, …).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::equation::{parse_equation, EquationError};
use crate::exact::{IntMatrix, RatFunc, RatPoly};
use crate::fibration::{Form, WeierstrassModel};
use crate::lattice::{Lattice, LatticeError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("schema error at `{path}`: {reason}")]
    Schema { path: String, reason: String },
    #[error("invariant check failed at `{path}`: {reason}")]
    Invariant { path: String, reason: String },
    #[error("invalid JSON: {0}")]
    Json(String),
}

fn schema(path: &str, reason: impl fmt::Display) -> IoError {
    IoError::Schema { path: if path.is_empty() { "$".into() } else { path.into() }, reason: reason.to_string() }
}

fn child(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.into()
    } else {
        format!("{path}.{key}")
    }
}

fn index(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

// ---------------------------------------------------------------------------
// Scalars

fn parse_bigint(s: &str, path: &str) -> Result<BigInt, IoError> {
    s.trim().parse::<BigInt>().map_err(|_| schema(path, format!("`{s}` is not an integer")))
}

fn make_fraction(n: BigInt, d: BigInt, path: &str) -> Result<BigRational, IoError> {
    if d.is_zero() {
        return Err(schema(path, "zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

/// Parses `"a/b"`, `"a"`, an integer, or `["a","b"]`.
pub fn fraction_from_value(v: &Value, path: &str) -> Result<BigRational, IoError> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(BigRational::from_integer(parse_bigint(&n.to_string(), path)?)),
        Value::String(s) => match s.split_once('/') {
            Some((a, b)) => make_fraction(parse_bigint(a, path)?, parse_bigint(b, path)?, path),
            None => Ok(BigRational::from_integer(parse_bigint(s, path)?)),
        },
        Value::Array(a) if a.len() == 2 => {
            let part = |x: &Value, i| match x {
                Value::String(s) => parse_bigint(s, &index(path, i)),
                Value::Number(n) if n.is_i64() || n.is_u64() => parse_bigint(&n.to_string(), &index(path, i)),
                _ => Err(schema(&index(path, i), "expected an integer string")),
            };
            make_fraction(part(&a[0], 0)?, part(&a[1], 1)?, path)
        }
        _ => Err(schema(path, "expected a fraction [\"num\",\"den\"]")),
    }
}

pub fn fraction_to_value(q: &BigRational) -> Value {
    json!([q.numer().to_string(), q.denom().to_string()])
}

fn int_from_value(v: &Value, path: &str) -> Result<BigInt, IoError> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_bigint(&n.to_string(), path),
        Value::String(s) => parse_bigint(s, path),
        _ => Err(schema(path, "expected an integer")),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, IoError> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, IoError> {
    o.get(key).ok_or_else(|| schema(&child(path, key), "missing field"))
}

fn parse_json(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}

// ---------------------------------------------------------------------------
// Polynomials and rational functions

pub fn poly_from_value(v: &Value, path: &str) -> Result<RatPoly, IoError> {
    let coeffs = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, c)| fraction_from_value(c, &index(path, i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatPoly::new(coeffs))
}

pub fn poly_to_value(p: &RatPoly) -> Value {
    Value::Array(p.coeffs().iter().map(fraction_to_value).collect())
}

/// A rational function as `[numerator coefficients, denominator coefficients]`.
pub fn ratfunc_from_value(v: &Value, path: &str) -> Result<RatFunc, IoError> {
    let a = array(v, path)?;
    if a.len() != 2 {
        return Err(schema(path, "expected [numerator, denominator]"));
    }
    let num = poly_from_value(&a[0], &index(path, 0))?;
    let den = poly_from_value(&a[1], &index(path, 1))?;
    RatFunc::new(num, den).map_err(|e| schema(&index(path, 1), e))
}

pub fn ratfunc_to_value(f: &RatFunc) -> Value {
    json!([poly_to_value(f.num()), poly_to_value(f.den())])
}

/// Parses a polynomial in `t` written like `t^2 - 3*t + 1/2` or `-(2/3)*t^4 + t`.
pub fn parse_poly(s: &str) -> Result<RatPoly, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for (i, c) in compact.chars().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 && !cur.ends_with('^') => {
                terms.push(std::mem::take(&mut cur));
            }
            _ => {}
        }
        cur.push(c);
    }
    terms.push(cur);
    let mut out = RatPoly::zero();
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.strip_prefix('+').unwrap_or(&term)),
        };
        let (coef_str, var_str) = match body.find('t') {
            Some(pos) => (body[..pos].trim_end_matches('*'), Some(&body[pos + 1..])),
            None => (body, None),
        };
        let coef_str = coef_str.trim_start_matches('(').trim_end_matches(')');
        let coef = if coef_str.is_empty() {
            BigRational::one()
        } else {
            let v = Value::String(coef_str.to_string());
            fraction_from_value(&v, "").map_err(|e| format!("bad coefficient in `{term}`: {e}"))?
        };
        let exp = match var_str {
            None => 0,
            Some("") => 1,
            Some(rest) => rest
                .strip_prefix('^')
                .and_then(|e| e.parse::<usize>().ok())
                .ok_or_else(|| format!("bad exponent in `{term}`"))?,
        };
        out = &out + &RatPoly::monomial(coef * BigRational::from_integer(sign.into()), exp);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Lattices and glue vectors

pub fn lattice_from_value(v: &Value, path: &str) -> Result<(Option<String>, Lattice), IoError> {
    let o = object(v, path)?;
    let name = match o.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(schema(&child(path, "name"), "expected a string")),
    };
    let gpath = child(path, "gram");
    let rows = array(field(o, "gram", path)?, &gpath)?;
    let n = rows.len();
    let mut g = IntMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let rpath = index(&gpath, i);
        let row = array(row, &rpath)?;
        if row.len() != n {
            return Err(schema(&rpath, format!("row has {} entries, expected {n}", row.len())));
        }
        for (j, x) in row.iter().enumerate() {
            g[(i, j)] = int_from_value(x, &index(&rpath, j))?;
        }
    }
    let mut lattice = Lattice::new(g).map_err(|e| IoError::Invariant { path: gpath.clone(), reason: e.to_string() })?;
    if let Some(labels) = o.get("labels") {
        let lpath = child(path, "labels");
        let labels = array(labels, &lpath)?
            .iter()
            .enumerate()
            .map(|(i, s)| s.as_str().map(String::from).ok_or_else(|| schema(&index(&lpath, i), "expected a string")))
            .collect::<Result<Vec<_>, _>>()?;
        if labels.len() != n {
            return Err(schema(&lpath, format!("{} labels for rank {n}", labels.len())));
        }
        lattice = lattice.with_labels(labels);
    }
    Ok((name, lattice))
}

pub fn lattice_to_value(name: Option<&str>, l: &Lattice) -> Value {
    let g = l.gram();
    let gram: Vec<Value> =
        (0..l.rank()).map(|i| Value::Array((0..l.rank()).map(|j| json!(g[(i, j)].to_string())).collect())).collect();
    let mut o = Map::new();
    if let Some(n) = name {
        o.insert("name".into(), json!(n));
    }
    o.insert("gram".into(), Value::Array(gram));
    if let Some(labels) = l.labels() {
        o.insert("labels".into(), json!(labels));
    }
    Value::Object(o)
}

pub fn parse_lattice(text: &str) -> Result<Lattice, IoError> {
    Ok(lattice_from_value(&parse_json(text)?, "")?.1)
}

pub fn glue_from_value(v: &Value, path: &str) -> Result<Vec<BigRational>, IoError> {
    let o = object(v, path)?;
    let cpath = child(path, "coords");
    array(field(o, "coords", path)?, &cpath)?
        .iter()
        .enumerate()
        .map(|(i, c)| fraction_from_value(c, &index(&cpath, i)))
        .collect()
}

pub fn glue_to_value(g: &[BigRational]) -> Value {
    json!({ "coords": g.iter().map(fraction_to_value).collect::<Vec<_>>() })
}

/// Accepts a single glue object or an array of them.
pub fn parse_glue_list(text: &str) -> Result<Vec<Vec<BigRational>>, IoError> {
    let v = parse_json(text)?;
    match &v {
        Value::Array(items) => items.iter().enumerate().map(|(i, g)| glue_from_value(g, &index("", i))).collect(),
        _ => Ok(vec![glue_from_value(&v, "")?]),
    }
}

// ---------------------------------------------------------------------------
// Weierstrass models and sections

const LONG_KEYS: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];
const SHORT_KEYS: [&str; 3] = ["C", "A", "B"];

/// `{"chi", "form", "a1".."a6" | "C","A","B", "params"}`, or
/// `{"chi", "equation": "y^2 = …", "params"}` with the equation as text.
pub fn model_from_value(v: &Value, path: &str) -> Result<WeierstrassModel, IoError> {
    let o = object(v, path)?;
    let chi_path = child(path, "chi");
    let chi = field(o, "chi", path)?
        .as_u64()
        .filter(|&c| c >= 1)
        .ok_or_else(|| schema(&chi_path, "expected a positive integer"))? as u32;
    let params = params_from(o, path)?;
    if let Some(eq) = o.get("equation") {
        let epath = child(path, "equation");
        let text = eq.as_str().ok_or_else(|| schema(&epath, "expected a string"))?;
        let model = parse_equation(text, chi).map_err(|e| match e {
            EquationError::Model(m) => IoError::Invariant { path: epath.clone(), reason: m.to_string() },
            other => schema(&epath, other),
        })?;
        return Ok(model.with_params(params));
    }
    let form = match field(o, "form", path)?.as_str() {
        Some("long") => Form::Long,
        Some("short") => Form::Short,
        _ => return Err(schema(&child(path, "form"), "expected \"long\" or \"short\"")),
    };
    let keys: &[&str] = if form == Form::Long { &LONG_KEYS } else { &SHORT_KEYS };
    let mut coeffs = Vec::new();
    for k in keys {
        let p = match o.get(*k) {
            Some(x) => poly_from_value(x, &child(path, k))?,
            None => RatPoly::zero(),
        };
        coeffs.push(p);
    }
    let built = match form {
        Form::Long => {
            let [a1, a2, a3, a4, a6]: [RatPoly; 5] = coeffs.try_into().unwrap();
            WeierstrassModel::long(chi, a1, a2, a3, a4, a6)
        }
        Form::Short => {
            let [c, a, b]: [RatPoly; 3] = coeffs.try_into().unwrap();
            WeierstrassModel::squared(chi, c, a, b)
        }
    };
    let model = built.map_err(|e| {
        let reason = e.to_string();
        let field_path = keys.iter().find(|k| reason.contains(&format!("`{k}`"))).map(|k| child(path, k));
        IoError::Invariant { path: field_path.unwrap_or_else(|| if path.is_empty() { "$".into() } else { path.into() }), reason }
    })?;
    Ok(model.with_params(params))
}

fn params_from(o: &Map<String, Value>, path: &str) -> Result<BTreeMap<String, BigRational>, IoError> {
    let mut params = BTreeMap::new();
    if let Some(p) = o.get("params") {
        let ppath = child(path, "params");
        for (k, x) in object(p, &ppath)? {
            params.insert(k.clone(), fraction_from_value(x, &child(&ppath, k))?);
        }
    }
    Ok(params)
}

pub fn model_to_value(m: &WeierstrassModel) -> Value {
    let mut o = Map::new();
    o.insert("chi".into(), json!(m.chi()));
    match m.form() {
        Form::Long => {
            o.insert("form".into(), json!("long"));
            for (k, p) in LONG_KEYS.iter().zip(m.long_coefficients()) {
                o.insert((*k).into(), poly_to_value(p));
            }
        }
        Form::Short => {
            o.insert("form".into(), json!("short"));
            let [c, a, b] = m.squared_coefficients().expect("short form carries C, A, B");
            for (k, p) in SHORT_KEYS.iter().zip([c, a, b]) {
                o.insert((*k).into(), poly_to_value(p));
            }
        }
    }
    if !m.params().is_empty() {
        let params: Map<String, Value> = m.params().iter().map(|(k, v)| (k.clone(), fraction_to_value(v))).collect();
        o.insert("params".into(), Value::Object(params));
    }
    Value::Object(o)
}

pub fn parse_model(text: &str) -> Result<WeierstrassModel, IoError> {
    model_from_value(&parse_json(text)?, "")
}

/// A section as `{"x": [num, den], "y": [num, den]}`.
pub fn section_from_value(v: &Value, path: &str) -> Result<(RatFunc, RatFunc), IoError> {
    let o = object(v, path)?;
    let x = ratfunc_from_value(field(o, "x", path)?, &child(path, "x"))?;
    let y = ratfunc_from_value(field(o, "y", path)?, &child(path, "y"))?;
    Ok((x, y))
}

pub fn section_to_value(x: &RatFunc, y: &RatFunc) -> Value {
    json!({ "x": ratfunc_to_value(x), "y": ratfunc_to_value(y) })
}

/// Either kind of model file.
#[derive(Clone, Debug)]
pub enum ModelFile {
    Weierstrass(WeierstrassModel),
    Lattice { name: Option<String>, lattice: Lattice },
}

/// Dispatches on the presence of `gram` (lattice) or `form` / `equation`
/// (Weierstrass).
pub fn parse_model_text(text: &str) -> Result<ModelFile, IoError> {
    let v = parse_json(text)?;
    let o = object(&v, "")?;
    if o.contains_key("gram") {
        let (name, lattice) = lattice_from_value(&v, "")?;
        Ok(ModelFile::Lattice { name, lattice })
    } else if o.contains_key("form") || o.contains_key("equation") {
        Ok(ModelFile::Weierstrass(model_from_value(&v, "")?))
    } else {
        Err(schema("", "neither a lattice (`gram`) nor a Weierstrass model (`form`)"))
    }
}

impl From<LatticeError> for IoError {
    fn from(e: LatticeError) -> Self {
        IoError::Invariant { path: "$".into(), reason: e.to_string() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions() {
        assert_eq!(fraction_from_value(&json!(["3", "-6"]), "x").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(fraction_from_value(&json!("5/10"), "x").unwrap(), BigRational::new(1.into(), 2.into()));
        let e = fraction_from_value(&json!("1/0"), "a4[2]").unwrap_err();
        assert!(matches!(e, IoError::Schema { ref path, .. } if path == "a4[2]"));
    }

    #[test]
    fn poly_text_roundtrip() {
        for s in ["t^2 - 3*t + 1", "-(2/3)*t^4 + t", "7", "-t", "(1/2)"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p, "{s}");
        }
        assert_eq!(parse_poly("t^2-1").unwrap(), RatPoly::from_ints(&[-1, 0, 1]));
        assert!(parse_poly("t^x").is_err());
    }

    #[test]
    fn lattice_json() {
        let text = r#"{"name":"A2","gram":[[2,-1],["-1",2]],"labels":["a1","a2"]}"#;
        let l = parse_lattice(text).unwrap();
        assert_eq!(l.det(), BigInt::from(3));
        let back = lattice_to_value(Some("A2"), &l);
        assert_eq!(lattice_from_value(&back, "").unwrap().1, l);
        let bad = r#"{"gram":[[2,1],[0,2]]}"#;
        assert!(matches!(parse_lattice(bad), Err(IoError::Invariant { .. })));
        let bad = r#"{"gram":[[2,1],[1]]}"#;
        assert!(matches!(parse_lattice(bad), Err(IoError::Schema { ref path, .. }) if path == "gram[1]"));
    }
}
