//! JSON documents for objects, morphisms, sequences and extension blocks.
//!
//! Coefficient lists run from low to high degree. Serialization trims
//! trailing zeros (the zero element is `[]`); parsing accepts any length up to
//! `s` and trailing zeros beyond it.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::abelian::ShortExactSeq;
use crate::error::{BreuilError, Result};
use crate::linalg::TMatrix;
use crate::monodromy::MonodromyModule;
use crate::phimod::{PhiModule, PhiMorphism};
use crate::ring::{RingParams, TPoly};

pub const MODULE_FORMAT: &str = "breuil-phimod/1";
pub const MORPHISM_FORMAT: &str = "breuil-morphism/1";
pub const SEQUENCE_FORMAT: &str = "breuil-seq/1";
pub const BLOCK_FORMAT: &str = "breuil-block/1";

/// A parsed object document: with or without a monodromy operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleDocument {
    Phi(PhiModule),
    Monodromy(MonodromyModule),
}

impl ModuleDocument {
    pub fn phi(&self) -> &PhiModule {
        match self {
            ModuleDocument::Phi(m) => m,
            ModuleDocument::Monodromy(m) => m.base(),
        }
    }

    pub fn into_phi(self) -> PhiModule {
        match self {
            ModuleDocument::Phi(m) => m,
            ModuleDocument::Monodromy(m) => m.base().clone(),
        }
    }
}

type Coeffs = Vec<u32>;

#[derive(Serialize)]
struct ModuleOut {
    format: &'static str,
    p: u32,
    e: u32,
    r: u32,
    s: usize,
    d: usize,
    c: Coeffs,
    #[serde(rename = "A")]
    a: Vec<Vec<Coeffs>>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    n: Option<Vec<Vec<Coeffs>>>,
}

#[derive(Serialize)]
struct MorphismOut {
    format: &'static str,
    source: ModuleOut,
    target: ModuleOut,
    #[serde(rename = "X")]
    x: Vec<Vec<Coeffs>>,
}

#[derive(Serialize)]
struct SequenceOut {
    format: &'static str,
    left: ModuleOut,
    middle: ModuleOut,
    right: ModuleOut,
    inj: Vec<Vec<Coeffs>>,
    surj: Vec<Vec<Coeffs>>,
}

#[derive(Serialize)]
struct BlockOut {
    format: &'static str,
    #[serde(rename = "C0")]
    c0: Vec<Vec<Coeffs>>,
}

fn matrix_out(m: &TMatrix) -> Vec<Vec<Coeffs>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.trimmed().to_vec()).collect()).collect()
}

fn module_out(m: &PhiModule, n: Option<&TMatrix>) -> ModuleOut {
    let params = m.params();
    ModuleOut {
        format: MODULE_FORMAT,
        p: params.p(),
        e: params.e(),
        r: params.r(),
        s: params.s(),
        d: m.rank(),
        c: params.c().trimmed().to_vec(),
        a: matrix_out(m.a()),
        n: n.map(matrix_out),
    }
}

fn to_text<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

pub fn serialize_module(m: &PhiModule) -> String {
    to_text(&module_out(m, None))
}

pub fn serialize_monodromy(m: &MonodromyModule) -> String {
    to_text(&module_out(m.base(), Some(m.lambda())))
}

pub fn serialize_document(doc: &ModuleDocument) -> String {
    match doc {
        ModuleDocument::Phi(m) => serialize_module(m),
        ModuleDocument::Monodromy(m) => serialize_monodromy(m),
    }
}

pub fn serialize_morphism(f: &PhiMorphism) -> String {
    to_text(&MorphismOut {
        format: MORPHISM_FORMAT,
        source: module_out(f.source(), None),
        target: module_out(f.target(), None),
        x: matrix_out(f.x()),
    })
}

pub fn serialize_sequence(seq: &ShortExactSeq) -> String {
    to_text(&SequenceOut {
        format: SEQUENCE_FORMAT,
        left: module_out(&seq.left, None),
        middle: module_out(&seq.middle, None),
        right: module_out(&seq.right, None),
        inj: matrix_out(seq.inj.x()),
        surj: matrix_out(seq.surj.x()),
    })
}

pub fn serialize_block(c0: &TMatrix) -> String {
    to_text(&BlockOut { format: BLOCK_FORMAT, c0: matrix_out(c0) })
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> BreuilError {
    BreuilError::ParseError { location: location.into(), message: message.into() }
}

fn validation(e: BreuilError) -> BreuilError {
    match e {
        e @ (BreuilError::ParseError { .. } | BreuilError::ValidationError(_)) => e,
        e => BreuilError::ValidationError(Box::new(e)),
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| parse_error(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_error(path, format!("missing field `{key}`")))
}

fn child(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| parse_error(path, "expected a non-negative integer"))
}

fn check_format(obj: &Value, expected: &str, path: &str) -> Result<()> {
    let tag = field(obj, "format", path)?
        .as_str()
        .ok_or_else(|| parse_error(child(path, "format"), "expected a string"))?;
    if tag != expected {
        return Err(parse_error(child(path, "format"), format!("expected `{expected}`, found `{tag}`")));
    }
    Ok(())
}

fn coeff_list(v: &Value, path: &str) -> Result<Vec<u64>> {
    let arr = v.as_array().ok_or_else(|| parse_error(path, "expected a coefficient array"))?;
    arr.iter().enumerate().map(|(k, x)| uint(x, &format!("{path}[{k}]"))).collect()
}

fn poly(v: &Value, p: u32, s: usize, path: &str) -> Result<TPoly> {
    let coeffs = coeff_list(v, path)?;
    if let Some(k) = coeffs.iter().position(|&x| x >= p as u64) {
        return Err(parse_error(format!("{path}[{k}]"), format!("coefficient must lie in [0, {p})")));
    }
    if coeffs.iter().skip(s).any(|&x| x != 0) {
        return Err(parse_error(path, format!("nonzero coefficient beyond u^{}", s - 1)));
    }
    let residues: Vec<u32> = coeffs.iter().take(s).map(|&x| x as u32).collect();
    Ok(TPoly::from_residues(p, s, &residues))
}

fn matrix(v: &Value, p: u32, s: usize, rows: usize, cols: usize, path: &str) -> Result<TMatrix> {
    let arr = v.as_array().ok_or_else(|| parse_error(path, "expected an array of rows"))?;
    if arr.len() != rows {
        return Err(parse_error(path, format!("expected {rows} rows, found {}", arr.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, row) in arr.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let entries = row.as_array().ok_or_else(|| parse_error(&rpath, "expected a row array"))?;
        if entries.len() != cols {
            return Err(parse_error(&rpath, format!("expected {cols} entries, found {}", entries.len())));
        }
        let row: Result<Vec<TPoly>> =
            entries.iter().enumerate().map(|(j, x)| poly(x, p, s, &format!("{rpath}[{j}]"))).collect();
        out.push(row?);
    }
    Ok(TMatrix::from_rows(p, s, cols, &out))
}

/// The number of rows of a nested array, for matrices whose shape is implied.
fn shape_of(v: &Value, path: &str) -> Result<(usize, usize)> {
    let arr = v.as_array().ok_or_else(|| parse_error(path, "expected an array of rows"))?;
    let cols = match arr.first() {
        None => 0,
        Some(r) => r.as_array().ok_or_else(|| parse_error(format!("{path}[0]"), "expected a row array"))?.len(),
    };
    Ok((arr.len(), cols))
}

fn module_from_value(obj: &Value, path: &str) -> Result<ModuleDocument> {
    if !obj.is_object() {
        return Err(parse_error(path, "expected an object document"));
    }
    check_format(obj, MODULE_FORMAT, path)?;
    let small = |key: &str| -> Result<u64> { uint(field(obj, key, path)?, &child(path, key)) };
    let narrow = |key: &str, v: u64| -> Result<u32> {
        u32::try_from(v).map_err(|_| parse_error(child(path, key), "integer out of range"))
    };
    let p = narrow("p", small("p")?)?;
    let e = narrow("e", small("e")?)?;
    let r = narrow("r", small("r")?)?;
    let s = small("s")? as usize;
    let d = small("d")? as usize;
    let c_raw = coeff_list(field(obj, "c", path)?, &child(path, "c"))?;
    if c_raw.iter().any(|&x| x > u32::MAX as u64) {
        return Err(parse_error(child(path, "c"), "integer out of range"));
    }
    let c: Vec<u32> = c_raw.iter().map(|&x| x as u32).collect();
    let params = RingParams::new(p, e, r, s, &c).map_err(validation)?;
    let a = matrix(field(obj, "A", path)?, p, s, d, d, &child(path, "A"))?;
    let m = PhiModule::new(params, a).map_err(validation)?;
    match obj.get("N") {
        None | Some(Value::Null) => Ok(ModuleDocument::Phi(m)),
        Some(n) => {
            let lambda = matrix(n, p, s, d, d, &child(path, "N"))?;
            Ok(ModuleDocument::Monodromy(MonodromyModule::new(m, lambda).map_err(validation)?))
        }
    }
}

pub fn parse_module(text: &str) -> Result<ModuleDocument> {
    module_from_value(&parse_json(text)?, "")
}

/// Reads an object document from a file.
pub fn read_module(path: &Path) -> Result<ModuleDocument> {
    let text = read_text(path)?;
    parse_module(&text)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| parse_error(path.display().to_string(), e.to_string()))
}

/// An embedded object document, or a path to one relative to `base`.
fn module_ref(obj: &Value, key: &str, base: Option<&Path>) -> Result<PhiModule> {
    let v = field(obj, key, "")?;
    match v {
        Value::String(rel) => {
            let full: PathBuf = base.map_or_else(|| PathBuf::from(rel), |b| b.join(rel));
            Ok(read_module(&full)?.into_phi())
        }
        _ => Ok(module_from_value(v, key)?.into_phi()),
    }
}

/// Parses a morphism document; string references are resolved against `base`.
pub fn parse_morphism(text: &str, base: Option<&Path>) -> Result<PhiMorphism> {
    let obj = parse_json(text)?;
    check_format(&obj, MORPHISM_FORMAT, "")?;
    let source = module_ref(&obj, "source", base)?;
    let target = module_ref(&obj, "target", base)?;
    if source.params() != target.params() {
        return Err(BreuilError::ValidationError(Box::new(BreuilError::ParamMismatch(
            "source and target parameters differ".into(),
        ))));
    }
    let x = matrix(field(&obj, "X", "")?, source.p(), source.s(), source.rank(), target.rank(), "X")?;
    PhiMorphism::new(source, target, x).map_err(validation)
}

pub fn parse_sequence(text: &str, base: Option<&Path>) -> Result<ShortExactSeq> {
    let obj = parse_json(text)?;
    check_format(&obj, SEQUENCE_FORMAT, "")?;
    let left = module_ref(&obj, "left", base)?;
    let middle = module_ref(&obj, "middle", base)?;
    let right = module_ref(&obj, "right", base)?;
    if left.params() != middle.params() || middle.params() != right.params() {
        return Err(BreuilError::ValidationError(Box::new(BreuilError::ParamMismatch(
            "sequence terms have different parameters".into(),
        ))));
    }
    let (p, s) = (middle.p(), middle.s());
    let inj = matrix(field(&obj, "inj", "")?, p, s, left.rank(), middle.rank(), "inj")?;
    let surj = matrix(field(&obj, "surj", "")?, p, s, middle.rank(), right.rank(), "surj")?;
    let inj = PhiMorphism::new(left, middle.clone(), inj).map_err(validation)?;
    let surj = PhiMorphism::new(middle, right, surj).map_err(validation)?;
    Ok(ShortExactSeq::new(inj, surj))
}

/// Parses an extension block over the ring of `params`.
pub fn parse_block(text: &str, params: &RingParams) -> Result<TMatrix> {
    let obj = parse_json(text)?;
    check_format(&obj, BLOCK_FORMAT, "")?;
    let v = field(&obj, "C0", "")?;
    let (rows, cols) = shape_of(v, "C0")?;
    matrix(v, params.p(), params.s(), rows, cols, "C0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{fixture_rng, random_object};

    const MINIMAL: &str = r#"{"format": "breuil-phimod/1", "p": 3, "e": 2, "r": 1, "s": 6, "d": 1,
        "c": [1], "A": [[[0, 0, 1]]]}"#;

    #[test]
    fn minimal_document() {
        let m = parse_module(MINIMAL).unwrap().into_phi();
        assert!(m.is_multiplicative());
        assert_eq!(parse_module(&serialize_module(&m)).unwrap().into_phi(), m);
    }

    #[test]
    fn untrimmed_coefficients_are_accepted() {
        let text = MINIMAL.replace("[[[0, 0, 1]]]", "[[[0, 0, 1, 0, 0, 0, 0, 0]]]").replace("[1]", "[1, 0, 0]");
        let m = parse_module(&text).unwrap().into_phi();
        assert!(serialize_module(&m).contains("\"c\": [\n    1\n  ]"));
    }

    #[test]
    fn validation_and_parse_errors() {
        let bad = MINIMAL.replace("\"e\": 2", "\"e\": 3");
        assert!(matches!(parse_module(&bad), Err(BreuilError::ValidationError(_))));
        let garbled = &MINIMAL[..40];
        assert!(matches!(parse_module(garbled), Err(BreuilError::ParseError { .. })));
        let range = MINIMAL.replace("[[[0, 0, 1]]]", "[[[0, 0, 7]]]");
        match parse_module(&range) {
            Err(BreuilError::ParseError { location, .. }) => assert_eq!(location, "A[0][0][2]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn monodromy_documents_round_trip() {
        let params = RingParams::with_unit_c(5, 2, 1, 10).unwrap();
        let base = random_object(&mut fixture_rng(3), &params, 2);
        let m = MonodromyModule::new(base, TMatrix::identity(5, 10, 2)).unwrap();
        let text = serialize_monodromy(&m);
        assert_eq!(parse_module(&text).unwrap(), ModuleDocument::Monodromy(m));
    }

    #[test]
    fn morphism_documents_round_trip() {
        let params = RingParams::with_unit_c(3, 2, 1, 4).unwrap();
        let m = random_object(&mut fixture_rng(5), &params, 2);
        let id = PhiMorphism::identity(&m);
        let back = parse_morphism(&serialize_morphism(&id), None).unwrap();
        assert_eq!(back, id);
        assert_eq!(back.x(), id.x());
    }
}
