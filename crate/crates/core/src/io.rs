//! Readers and writers for point sets, vector configurations, hypergraphs
//! and species lists, plus serde helpers for exact numbers.
//!
//! Numeric entries are JSON integers or strings holding an integer or a
//! fraction `p/q`. Floats are rejected so every input is exact.

use num::BigInt;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::exactla::{parse_rational, Rational};
use crate::geometry::{GeometryError, PointSet};
use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::matroid::{MatroidError, VectorConfiguration};
use crate::stoichiometry::{parse_formula, AtomUniverse, Species, StoichiometryError};

pub fn ser_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(x) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}

/// Integers that fit in i64 are written as JSON numbers, larger ones as strings.
pub fn ser_bigints<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    struct Big<'a>(&'a BigInt);
    impl Serialize for Big<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            ser_bigint(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&Big(x))?;
    }
    seq.end()
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("input is empty")]
    Empty,
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{location}: {message}")]
    Entry { location: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Stoichiometry(#[from] StoichiometryError),
}

impl IoError {
    /// True for failures of a well-formed input to satisfy a structural
    /// requirement, such as repeated points.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            IoError::Geometry(GeometryError::DuplicatePoint { .. })
                | IoError::Hypergraph(HypergraphError::DuplicateEdge(..) | HypergraphError::NotLinear { .. })
        )
    }
}

fn entry_error(location: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Entry {
        location: location.into(),
        message: message.into(),
    }
}

pub fn rational_from_json(v: &Value, location: &str) -> Result<Rational, IoError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(u.into()))
            } else {
                Err(entry_error(location, format!("{n} is not exact; write it as a fraction string")))
            }
        }
        Value::String(s) => parse_rational(s).map_err(|e| entry_error(location, e.to_string())),
        other => Err(entry_error(location, format!("expected a number, found {other}"))),
    }
}

/// Rows, optional labels, and the common row length.
type Rows = (Vec<Vec<Rational>>, Option<Vec<String>>, usize);

fn rows_from_json(text: &str, key: &str) -> Result<Rows, IoError> {
    let value: Value = serde_json::from_str(text)?;
    let (rows, labels, dim) = match &value {
        Value::Array(rows) => (rows.as_slice(), None, None),
        Value::Object(map) => {
            let rows = map
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| entry_error("top level", format!("missing array field {key:?}")))?;
            let labels = match map.get("labels") {
                None | Some(Value::Null) => None,
                Some(v) => Some(Vec::<String>::deserialize(v).map_err(|e| entry_error("labels", e.to_string()))?),
            };
            let dim = match map.get("dimension") {
                None | Some(Value::Null) => None,
                Some(v) => Some(
                    v.as_u64()
                        .ok_or_else(|| entry_error("dimension", "expected a nonnegative integer"))?
                        as usize,
                ),
            };
            (rows.as_slice(), labels, dim)
        }
        _ => return Err(entry_error("top level", format!("expected an array or an object with {key:?}"))),
    };
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| entry_error(format!("row {i}"), "expected an array"))?;
        let parsed = entries
            .iter()
            .enumerate()
            .map(|(j, v)| rational_from_json(v, &format!("row {i}, entry {j}")))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(parsed);
    }
    let dim = match dim.or_else(|| out.first().map(Vec::len)) {
        Some(d) => d,
        None => return Err(IoError::Empty),
    };
    Ok((out, labels, dim))
}

/// CSV with one row per point. A first row containing letters is a header;
/// a header starting with `label` marks a label column.
fn rows_from_csv(text: &str) -> Result<Rows, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = reader.records().peekable();
    let mut labelled = false;
    if let Some(Ok(first)) = records.peek() {
        if first.iter().any(|f| f.chars().any(char::is_alphabetic)) {
            labelled = first.get(0).is_some_and(|f| f.eq_ignore_ascii_case("label"));
            records.next();
        }
    }
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (i, rec) in records.enumerate() {
        let rec = rec?;
        let mut fields = rec.iter();
        if labelled {
            labels.push(fields.next().unwrap_or_default().to_string());
        }
        let row = fields
            .enumerate()
            .map(|(j, f)| parse_rational(f).map_err(|e| entry_error(format!("record {i}, field {j}"), e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let dim = rows.first().map(Vec::len).ok_or(IoError::Empty)?;
    Ok((rows, labelled.then_some(labels), dim))
}

fn looks_like_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('[' | '{'))
}

fn read_rows(text: &str, key: &str) -> Result<Rows, IoError> {
    if text.trim().is_empty() {
        return Err(IoError::Empty);
    }
    if looks_like_json(text) {
        rows_from_json(text, key)
    } else {
        rows_from_csv(text)
    }
}

/// Point set from JSON (`[[..], ..]` or `{"points": .., "labels": ..}`) or CSV.
pub fn read_points(text: &str) -> Result<PointSet, IoError> {
    let (rows, labels, dim) = read_rows(text, "points")?;
    Ok(PointSet::new(dim, rows, labels)?)
}

/// Vector configuration from JSON (`[[..], ..]` or `{"vectors": ..}`) or CSV.
pub fn read_vectors(text: &str) -> Result<VectorConfiguration, IoError> {
    let (rows, labels, dim) = read_rows(text, "vectors")?;
    Ok(VectorConfiguration::new(dim, rows, labels)?)
}

#[derive(Serialize)]
struct PointsOut<'a> {
    dimension: usize,
    #[serde(serialize_with = "ser_rows")]
    points: &'a [Vec<Rational>],
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<&'a [String]>,
}

fn ser_rows<S: Serializer>(rows: &&[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    strings.serialize(s)
}

/// JSON that [`read_points`] reads back to the same point set.
pub fn points_to_json(ps: &PointSet) -> String {
    serde_json::to_string_pretty(&PointsOut {
        dimension: ps.dimension(),
        points: ps.points(),
        labels: ps.labels(),
    })
    .expect("point sets serialize")
}

#[derive(Deserialize)]
struct HypergraphIn {
    n: usize,
    edges: Vec<Vec<usize>>,
}

/// Hypergraph from `{"n": .., "edges": [[..], ..]}`.
pub fn read_hypergraph(text: &str) -> Result<Hypergraph, IoError> {
    if text.trim().is_empty() {
        return Err(IoError::Empty);
    }
    let h: HypergraphIn = serde_json::from_str(text)?;
    Ok(Hypergraph::new(h.n, h.edges)?)
}

pub fn hypergraph_to_json(h: &Hypergraph) -> String {
    serde_json::to_string_pretty(h).expect("hypergraphs serialize")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpeciesIn {
    name: Option<String>,
    formula: Option<String>,
    composition: Option<Vec<u64>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpeciesFile {
    List(Vec<SpeciesIn>),
    WithUniverse { universe: Vec<String>, species: Vec<SpeciesIn> },
}

/// Species from plain text (one formula per line, `#` comments) or JSON:
/// a list of `{"name", "formula"}` / `{"name", "composition"}` objects,
/// optionally wrapped as `{"universe": [..], "species": [..]}`.
///
/// Without a universe, formulas define one in order of first appearance;
/// composition-only input then gets placeholder symbols `X0, X1, ..`.
pub fn read_species(text: &str, universe: Option<AtomUniverse>) -> Result<(AtomUniverse, Vec<Species>), IoError> {
    if !looks_like_json(text) {
        let formulas: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .collect();
        let universe = match universe {
            Some(u) => u,
            None => AtomUniverse::infer(&formulas)?,
        };
        let species = formulas
            .iter()
            .map(|f| parse_formula(f, &universe))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok((universe, species));
    }
    let (file_universe, entries) = match serde_json::from_str::<SpeciesFile>(text)? {
        SpeciesFile::List(l) => (None, l),
        SpeciesFile::WithUniverse { universe, species } => (Some(AtomUniverse::new(universe)?), species),
    };
    let universe = match universe.or(file_universe) {
        Some(u) => u,
        None => {
            let formulas: Vec<&str> = entries.iter().filter_map(|e| e.formula.as_deref()).collect();
            if formulas.is_empty() {
                let d = entries.iter().filter_map(|e| e.composition.as_ref().map(Vec::len)).max().unwrap_or(0);
                AtomUniverse::new((0..d).map(|i| format!("X{i}")))?
            } else {
                AtomUniverse::infer(&formulas)?
            }
        }
    };
    let mut species = Vec::with_capacity(entries.len());
    for (i, e) in entries.into_iter().enumerate() {
        let s = match (e.formula, e.composition) {
            (Some(f), None) => {
                let mut s = parse_formula(&f, &universe)?;
                if let Some(name) = e.name {
                    s.name = name;
                }
                s
            }
            (None, Some(c)) => {
                if c.len() != universe.len() {
                    return Err(StoichiometryError::WrongLength {
                        name: e.name.unwrap_or_else(|| format!("species {i}")),
                        found: c.len(),
                        expected: universe.len(),
                    }
                    .into());
                }
                Species::new(e.name.unwrap_or_else(|| format!("S{i}")), c)?
            }
            _ => return Err(entry_error(format!("species {i}"), "give exactly one of formula or composition")),
        };
        species.push(s);
    }
    Ok((universe, species))
}
