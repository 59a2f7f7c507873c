//! JSON documents for polytopes, monoids, point sets, series and verdicts.
//!
//! Rationals are written as `"p/q"` strings; integers as JSON numbers when
//! they fit in `i64` and as decimal strings otherwise. Readers accept both.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::criteria::{int_json, Verdict};
use crate::error::{Error, Result};
use crate::exactlat::IntVector;
use crate::monoid::AffineMonoid;
use crate::polycone::{parse_rational, RationalPolytope};
use crate::series::{RationalSeries, TruncatedSeries};

fn parse_doc(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

fn field<'a>(doc: &'a Value, name: &str) -> Result<&'a Value> {
    doc.get(name)
        .ok_or_else(|| Error::Parse(format!("missing field \"{name}\"")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("field {path}: expected an array")))
}

fn integer(v: &Value, path: &str) -> Result<BigInt> {
    let bad = || Error::Parse(format!("field {path}: expected an integer"));
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(bad),
        Value::String(s) => s.trim().parse().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn rational(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| Error::Parse(format!("field {path}: {e}"))),
        other => integer(other, path).map(BigRational::from_integer),
    }
}

fn int_vectors(v: &Value, path: &str) -> Result<Vec<IntVector>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let p = format!("{path}[{i}]");
            Ok(IntVector(
                array(row, &p)?
                    .iter()
                    .enumerate()
                    .map(|(j, x)| integer(x, &format!("{p}[{j}]")))
                    .collect::<Result<_>>()?,
            ))
        })
        .collect()
}

fn usize_field(doc: &Value, name: &str) -> Result<usize> {
    field(doc, name)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::Parse(format!("field {name}: expected a nonnegative integer")))
}

pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn ints_to_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

/// `{"vertices": [["p/q", ...], ...]}`.
pub fn parse_polytope(text: &str) -> Result<RationalPolytope> {
    let doc = parse_doc(text)?;
    let rows = array(field(&doc, "vertices")?, "vertices")?;
    let pts = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let p = format!("vertices[{i}]");
            array(row, &p)?
                .iter()
                .enumerate()
                .map(|(j, x)| rational(x, &format!("{p}[{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RationalPolytope::new(pts)
}

pub fn polytope_to_json(p: &RationalPolytope) -> Value {
    let rows: Vec<Value> = p
        .vertices()
        .iter()
        .map(|v| Value::Array(v.iter().map(|q| json!(rational_string(q))).collect()))
        .collect();
    json!({ "vertices": rows })
}

/// `{"ambient": m, "generators": [[ints], ...]}`.
pub fn parse_monoid(text: &str) -> Result<AffineMonoid> {
    let doc = parse_doc(text)?;
    let ambient = usize_field(&doc, "ambient")?;
    let gens = int_vectors(field(&doc, "generators")?, "generators")?;
    AffineMonoid::new(gens, ambient)
}

pub fn monoid_to_json(m: &AffineMonoid) -> Value {
    json!({
        "ambient": m.ambient_dim(),
        "generators": m.generators().iter().map(|g| ints_to_json(g.entries())).collect::<Vec<_>>(),
    })
}

/// `{"points": [[ints], ...]}`.
pub fn parse_points(text: &str) -> Result<Vec<IntVector>> {
    let doc = parse_doc(text)?;
    int_vectors(field(&doc, "points")?, "points")
}

pub fn points_to_json(pts: &[IntVector]) -> Value {
    json!({ "points": pts.iter().map(|p| ints_to_json(p.entries())).collect::<Vec<_>>() })
}

/// A univariate series document in either of its two shapes.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesDoc {
    Truncated(TruncatedSeries),
    Rational(RationalSeries),
}

pub fn truncated_to_json(s: &TruncatedSeries) -> Value {
    json!({"trunc": s.truncation_degree(), "coeffs": ints_to_json(&s.coeffs())})
}

pub fn rational_to_json(r: &RationalSeries) -> Value {
    json!({"numerator": ints_to_json(r.numerator()), "q": r.q(), "pole_order": r.pole_order()})
}

pub fn series_to_json(s: &SeriesDoc) -> Value {
    match s {
        SeriesDoc::Truncated(t) => truncated_to_json(t),
        SeriesDoc::Rational(r) => rational_to_json(r),
    }
}

/// `{"trunc": N, "coeffs": [...]}` or `{"numerator": [...], "q": q, "pole_order": d}`.
pub fn parse_series(text: &str) -> Result<SeriesDoc> {
    let doc = parse_doc(text)?;
    let ints = |name: &str| -> Result<Vec<BigInt>> {
        array(field(&doc, name)?, name)?
            .iter()
            .enumerate()
            .map(|(i, x)| integer(x, &format!("{name}[{i}]")))
            .collect()
    };
    if doc.get("numerator").is_some() {
        let r = RationalSeries::new(ints("numerator")?, usize_field(&doc, "q")?, usize_field(&doc, "pole_order")?)?;
        return Ok(SeriesDoc::Rational(r));
    }
    let trunc = usize_field(&doc, "trunc")?;
    let coeffs = ints("coeffs")?;
    if coeffs.len() > trunc + 1 {
        return Err(Error::Parse(format!(
            "field coeffs: {} entries exceed truncation {trunc}",
            coeffs.len()
        )));
    }
    let mut s = TruncatedSeries::zero(1, trunc);
    for (i, c) in coeffs.into_iter().enumerate() {
        s.add_term(IntVector(vec![BigInt::from(i)]), c);
    }
    Ok(SeriesDoc::Truncated(s))
}

pub fn parse_verdict(text: &str) -> Result<Verdict> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

/// Vectors given on the command line as `"1 0 -2"` or `"1,0,-2"`.
pub fn parse_int_vector(s: &str) -> Result<IntVector> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<BigInt>().map_err(|_| Error::Parse(format!("invalid integer {t:?} in {s:?}"))))
        .collect::<Result<Vec<_>>>()
        .map(IntVector)
}
