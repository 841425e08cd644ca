//! Text forms of weights, labels and cosets, and the JSON envelope.

use std::fmt::{self, Write as _};

use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use serde_json::{json, Value};

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::fusion::FusionTable;
use crate::modular::SMatrix;
use crate::weights::{admissible_weights, AffineWeight, Admissible, Coweight, GammaCoset, Label, Q};

pub const SCHEMA: u64 = 1;

fn perr(what: &str, s: &str) -> Error {
    Error::Parse(format!("bad {what}: {s:?}"))
}

/// `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| perr("rational", s))?;
    let d: i64 = d.parse().map_err(|_| perr("rational", s))?;
    if d == 0 || n.checked_abs().is_none() || d.checked_abs().is_none() {
        return Err(perr("rational", s));
    }
    // keep headroom for the arithmetic that follows
    if n.abs() > 1 << 40 || d.abs() > 1 << 40 {
        return Err(perr("rational (out of range)", s));
    }
    Ok(Ratio::new(n, d))
}

pub fn parse_big_rational(s: &str) -> Result<BigRational> {
    s.trim().parse::<BigRational>().map_err(|_| perr("rational", s))
}

fn split_n<'a>(s: &'a str, n: usize, what: &str) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(perr(what, s));
    }
    Ok(parts)
}

/// `"l0,l1,l2"` with rational entries.
pub fn parse_affine(s: &str) -> Result<AffineWeight> {
    let p = split_n(s, 3, "weight")?;
    Ok(AffineWeight::new(parse_rational(p[0])?, parse_rational(p[1])?, parse_rational(p[2])?))
}

/// `"l0,l1,l2"` with nonnegative integer entries; the level is checked when `u` is given.
pub fn parse_label(s: &str, u: Option<i64>) -> Result<Label> {
    let p = split_n(s, 3, "label")?;
    let mut l = [0i64; 3];
    for (x, t) in l.iter_mut().zip(&p) {
        *x = t.parse().map_err(|_| perr("label", s))?;
        if *x < 0 || *x > 1 << 20 {
            return Err(perr("label", s));
        }
    }
    let l = Label(l);
    if let Some(u) = u {
        l.check(u)?;
    }
    Ok(l)
}

/// `"a/b,c/d"`: root coordinates of a representative.
pub fn parse_gamma(s: &str) -> Result<GammaCoset> {
    let p = split_n(s, 2, "coset")?;
    Ok(GammaCoset::from_root_coords(parse_rational(p[0])?, parse_rational(p[1])?))
}

pub fn parse_coweight(s: &str) -> Result<Coweight> {
    let p = split_n(s, 2, "coweight")?;
    let g1: i64 = p[0].parse().map_err(|_| perr("coweight", s))?;
    let g2: i64 = p[1].parse().map_err(|_| perr("coweight", s))?;
    if g1.abs() > 1 << 30 || g2.abs() > 1 << 30 {
        return Err(perr("coweight", s));
    }
    Ok(Coweight::new(g1, g2))
}

/// `{"cyclotomic_order": N, "coeffs": ["p/q", ...]}`.
pub fn cyc_from_json(v: &Value) -> Result<CycNum> {
    let n = v
        .get("cyclotomic_order")
        .and_then(Value::as_u64)
        .filter(|n| (1..=5_000).contains(n))
        .ok_or_else(|| perr("cyclotomic number", &v.to_string()))?;
    let cs = v.get("coeffs").and_then(Value::as_array).ok_or_else(|| perr("cyclotomic number", &v.to_string()))?;
    if cs.len() > n as usize {
        return Err(perr("cyclotomic number (too many coefficients)", &v.to_string()));
    }
    let coeffs = cs
        .iter()
        .map(|c| c.as_str().ok_or_else(|| perr("coefficient", &c.to_string())).and_then(parse_big_rational))
        .collect::<Result<Vec<_>>>()?;
    Ok(CycNum::from_dense(n as u32, &coeffs))
}

pub fn envelope(kind: &str, body: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA, "kind": kind });
    if let (Some(m), Value::Object(b)) = (v.as_object_mut(), body) {
        m.extend(b);
    }
    v
}

pub fn check_envelope(v: &Value, kind: &str) -> Result<()> {
    if v.get("schema").and_then(Value::as_u64) != Some(SCHEMA) {
        return Err(Error::Parse("missing or unsupported schema".into()));
    }
    match v.get("kind").and_then(Value::as_str) {
        Some(k) if k == kind => Ok(()),
        other => Err(Error::Parse(format!("expected kind {kind:?}, found {other:?}"))),
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn complex_rows(m: &[Vec<Complex64>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(|z| complex_json(*z)).collect())).collect())
}

/// Exact matrix plus its `[re, im]` rendering.
pub fn smatrix_to_json<L: Clone + PartialEq + fmt::Display>(u: i64, algebra: &str, m: &SMatrix<L>) -> Value {
    envelope(
        "s-matrix",
        json!({
            "u": u,
            "algebra": algebra,
            "labels": m.labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "entries": m.entries.iter().map(|r| r.iter().map(CycNum::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "complex": complex_rows(&m.to_complex()),
        }),
    )
}

pub fn smatrix_numeric_json<L: Clone + PartialEq + fmt::Display>(u: i64, algebra: &str, m: &SMatrix<L>) -> Value {
    envelope(
        "s-matrix",
        json!({
            "u": u,
            "algebra": algebra,
            "labels": m.labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "complex": complex_rows(&m.to_complex()),
        }),
    )
}

/// Reads back `(u, algebra, matrix)`; labels are parsed with `parse`.
pub fn smatrix_from_json<L>(v: &Value, parse: impl Fn(i64, &str) -> Result<L>) -> Result<(i64, String, SMatrix<L>)> {
    check_envelope(v, "s-matrix")?;
    let u = v.get("u").and_then(Value::as_i64).ok_or_else(|| perr("u", &v.to_string()))?;
    let algebra = v.get("algebra").and_then(Value::as_str).ok_or_else(|| perr("algebra", &v.to_string()))?.to_string();
    let labels = v
        .get("labels")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("labels", &v.to_string()))?
        .iter()
        .map(|l| l.as_str().ok_or_else(|| perr("label", &l.to_string())).and_then(|s| parse(u, s)))
        .collect::<Result<Vec<_>>>()?;
    let rows = v.get("entries").and_then(Value::as_array).ok_or_else(|| perr("entries", &v.to_string()))?;
    if rows.len() != labels.len() {
        return Err(Error::Parse(format!("{} rows for {} labels", rows.len(), labels.len())));
    }
    let mut entries = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.as_array().filter(|r| r.len() == labels.len()).ok_or_else(|| perr("matrix row", &r.to_string()))?;
        entries.push(r.iter().map(cyc_from_json).collect::<Result<Vec<_>>>()?);
    }
    Ok((u, algebra, SMatrix { labels, entries }))
}

/// Admissible weight from its affine literal.
pub fn parse_admissible(u: i64, s: &str) -> Result<Admissible> {
    let w = parse_affine(s)?;
    admissible_weights(u)?.into_iter().find(|a| a.weight == w).ok_or_else(|| Error::NotAdmissible(s.to_string(), u))
}

/// Complex rendering, one row per line, `label,re,im,re,im,...`.
pub fn complex_csv(labels: &[String], m: &[Vec<Complex64>]) -> String {
    let mut out = String::from("label");
    for l in labels {
        let _ = write!(out, ",\"re {l}\",\"im {l}\"");
    }
    out.push('\n');
    for (l, r) in labels.iter().zip(m) {
        let _ = write!(out, "\"{l}\"");
        for z in r {
            let _ = write!(out, ",{:e},{:e}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

/// Nonzero `[a, b, c, N]` quadruples.
pub fn fusion_table_to_json(t: &FusionTable, method: &str) -> Value {
    envelope(
        "fusion-table",
        json!({
            "u": t.u,
            "method": method,
            "labels": t.labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "entries": t
                .entries()
                .filter(|e| e.3 > 0)
                .map(|(a, b, c, n)| json!([a.to_string(), b.to_string(), c.to_string(), n]))
                .collect::<Vec<_>>(),
        }),
    )
}

pub fn fusion_table_from_json(v: &Value) -> Result<FusionTable> {
    check_envelope(v, "fusion-table")?;
    let u = v.get("u").and_then(Value::as_i64).ok_or_else(|| perr("u", &v.to_string()))?;
    crate::weights::check_u(u)?;
    if u > 15 {
        return Err(Error::Parse(format!("fusion table too large for u = {u}")));
    }
    let es = v.get("entries").and_then(Value::as_array).ok_or_else(|| perr("entries", &v.to_string()))?;
    let mut out = Vec::with_capacity(es.len());
    for e in es {
        let a = e.as_array().filter(|a| a.len() == 4).ok_or_else(|| perr("fusion entry", &e.to_string()))?;
        let l = |i: usize| a[i].as_str().ok_or_else(|| perr("label", &a[i].to_string())).and_then(|s| parse_label(s, Some(u)));
        let n = a[3].as_u64().ok_or_else(|| perr("multiplicity", &a[3].to_string()))?;
        out.push((l(0)?, l(1)?, l(2)?, n));
    }
    let t = FusionTable::from_entries(u, out)?;
    if let Some(ls) = v.get("labels").and_then(Value::as_array) {
        let given = ls.iter().map(|l| l.as_str().unwrap_or_default().to_string()).collect::<Vec<_>>();
        if given != t.labels.iter().map(ToString::to_string).collect::<Vec<_>>() {
            return Err(Error::Parse("label order does not match the alcove enumeration".into()));
        }
    }
    Ok(t)
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}
