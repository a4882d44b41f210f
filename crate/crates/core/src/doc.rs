//! The structured problem document (JSON) and the record formats for series
//! and DT tables.
//!
//! A document carries a quiver, an optional potential with cut, a relation
//! class provider, a stability condition (explicit charges or King theta
//! sugar) and a truncation bound. Validation reports the offending field
//! path. Vertex and arrow ids may be JSON strings or numbers; rationals may
//! be integers or "p/q" strings.

use crate::dtpipe::{DtProblem, DtTable, RelationClassProvider};
use crate::motive::Motive;
use crate::qtorus::GradedSeries;
use crate::quiver::{Cut, DimVector, Potential, Quiver};
use crate::stability::CentralCharge;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct DocError {
    pub path: String,
    pub message: String,
}

impl DocError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> DocError {
        DocError {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// A vertex or arrow id; accepts strings and numbers on input.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Name {
    Text(String),
    Number(i64),
}

impl Name {
    fn into_string(self) -> String {
        match self {
            Name::Text(s) => s,
            Name::Number(n) => n.to_string(),
        }
    }
}

/// A rational; accepts integers and "p/q" or "p" strings.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RationalValue {
    Int(i64),
    Text(String),
}

impl RationalValue {
    fn parse(&self, path: &str) -> Result<BigRational, DocError> {
        match self {
            RationalValue::Int(n) => Ok(BigRational::from_integer((*n).into())),
            RationalValue::Text(s) => {
                let mut parts = s.splitn(2, '/');
                let p: BigInt = parts
                    .next()
                    .unwrap()
                    .trim()
                    .parse()
                    .map_err(|_| DocError::new(path, format!("bad rational '{}'", s)))?;
                let q: BigInt = match parts.next() {
                    Some(q) => q
                        .trim()
                        .parse()
                        .map_err(|_| DocError::new(path, format!("bad rational '{}'", s)))?,
                    None => BigInt::one(),
                };
                if q == BigInt::from(0) {
                    return Err(DocError::new(path, "zero denominator"));
                }
                Ok(BigRational::new(p, q))
            }
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawArrow {
    id: Name,
    from: Name,
    to: Name,
}

#[derive(Debug, Deserialize)]
struct RawTerm {
    coeff: i64,
    cycle: Vec<Name>,
}

#[derive(Debug, Deserialize)]
struct RawClass {
    d: Vec<u32>,
    class: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default)]
    name: Option<String>,
    vertices: Vec<Name>,
    #[serde(default)]
    arrows: Vec<RawArrow>,
    #[serde(default)]
    potential: Vec<RawTerm>,
    #[serde(default)]
    cut: Vec<Name>,
    #[serde(default)]
    provider: Option<String>,
    #[serde(default)]
    classes: Vec<RawClass>,
    #[serde(default)]
    stability: Option<Vec<[RationalValue; 2]>>,
    #[serde(default)]
    theta: Option<Vec<RationalValue>>,
    #[serde(default)]
    truncation: Option<u32>,
}

/// A parsed and validated problem document.
#[derive(Clone, Debug)]
pub struct ProblemDocument {
    pub name: Option<String>,
    pub problem: DtProblem,
    pub charge: CentralCharge,
    pub truncation: Option<u32>,
}

pub fn parse_document(text: &str) -> Result<ProblemDocument, DocError> {
    let raw: RawDocument =
        serde_json::from_str(text).map_err(|e| DocError::new("document", e.to_string()))?;

    let vertices: Vec<String> = raw.vertices.into_iter().map(Name::into_string).collect();
    let arrows: Vec<(String, String, String)> = raw
        .arrows
        .into_iter()
        .map(|a| (a.id.into_string(), a.from.into_string(), a.to.into_string()))
        .collect();
    let quiver =
        Quiver::new(vertices, arrows).map_err(|e| DocError::new("arrows", e.to_string()))?;

    let potential = if raw.potential.is_empty() {
        None
    } else {
        let terms: Vec<(i64, Vec<String>)> = raw
            .potential
            .into_iter()
            .map(|t| {
                (
                    t.coeff,
                    t.cycle.into_iter().map(Name::into_string).collect(),
                )
            })
            .collect();
        Some(
            Potential::new(&quiver, terms)
                .map_err(|e| DocError::new("potential", e.to_string()))?,
        )
    };

    let cut_ids: Vec<String> = raw.cut.into_iter().map(Name::into_string).collect();
    let cut = Cut::from_ids(&quiver, &cut_ids).map_err(|e| DocError::new("cut", e.to_string()))?;

    let provider_name = raw.provider.as_deref().unwrap_or("none");
    let provider = match provider_name {
        "none" => {
            if !raw.classes.is_empty() {
                return Err(DocError::new(
                    "classes",
                    "only allowed with provider 'user-table'",
                ));
            }
            RelationClassProvider::None
        }
        "feit-fine" => {
            if !raw.classes.is_empty() {
                return Err(DocError::new(
                    "classes",
                    "only allowed with provider 'user-table'",
                ));
            }
            RelationClassProvider::FeitFine
        }
        "user-table" => {
            let mut table = BTreeMap::new();
            for (i, c) in raw.classes.into_iter().enumerate() {
                if c.d.len() != quiver.vertex_count() {
                    return Err(DocError::new(
                        format!("classes[{}].d", i),
                        format!(
                            "length {} does not match the {} vertices",
                            c.d.len(),
                            quiver.vertex_count()
                        ),
                    ));
                }
                let motive: Motive = c.class.parse().map_err(|e| {
                    DocError::new(format!("classes[{}].class", i), format!("{}", e))
                })?;
                if table.insert(DimVector(c.d.clone()), motive).is_some() {
                    return Err(DocError::new(
                        format!("classes[{}].d", i),
                        "duplicate dimension vector",
                    ));
                }
            }
            RelationClassProvider::UserTable(table)
        }
        other => {
            return Err(DocError::new(
                "provider",
                format!("unknown provider '{}'", other),
            ))
        }
    };

    if raw.stability.is_some() && raw.theta.is_some() {
        return Err(DocError::new(
            "stability",
            "give either 'stability' or 'theta', not both",
        ));
    }
    let charge = if let Some(pairs) = raw.stability {
        if pairs.len() != quiver.vertex_count() {
            return Err(DocError::new(
                "stability",
                format!(
                    "{} charges for {} vertices",
                    pairs.len(),
                    quiver.vertex_count()
                ),
            ));
        }
        let mut parts = Vec::with_capacity(pairs.len());
        for (i, [re, im]) in pairs.iter().enumerate() {
            parts.push((
                re.parse(&format!("stability[{}][0]", i))?,
                im.parse(&format!("stability[{}][1]", i))?,
            ));
        }
        CentralCharge::new(parts).map_err(|e| DocError::new("stability", e.to_string()))?
    } else if let Some(theta) = raw.theta {
        if theta.len() != quiver.vertex_count() {
            return Err(DocError::new(
                "theta",
                format!(
                    "{} entries for {} vertices",
                    theta.len(),
                    quiver.vertex_count()
                ),
            ));
        }
        let mut values = Vec::with_capacity(theta.len());
        for (i, t) in theta.iter().enumerate() {
            values.push(t.parse(&format!("theta[{}]", i))?);
        }
        CentralCharge::from_theta(&values)
    } else {
        // King theta = 0 by default
        CentralCharge::from_theta(&vec![
            BigRational::from_integer(0.into());
            quiver.vertex_count()
        ])
    };

    let problem = DtProblem {
        quiver: Arc::new(quiver),
        potential,
        cut,
        provider,
    };

    Ok(ProblemDocument {
        name: raw.name,
        problem,
        charge,
        truncation: raw.truncation,
    })
}

/// One series coefficient: `{"d": [...], "coeff": "<motive>"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub d: Vec<u32>,
    pub coeff: Motive,
}

/// One DT entry: `{"d": [...], "dt": "<motive>", "euler": "<rational|pole>"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtRecord {
    pub d: Vec<u32>,
    pub dt: Motive,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler: Option<String>,
}

/// Records sorted by total degree, then lexicographically.
pub fn series_records(series: &GradedSeries) -> Vec<SeriesRecord> {
    series
        .support()
        .map(|(d, m)| SeriesRecord {
            d: d.entries().to_vec(),
            coeff: m.clone(),
        })
        .collect()
}

pub fn dt_records(table: &DtTable, with_euler: bool) -> Vec<DtRecord> {
    table
        .entries
        .iter()
        .map(|(d, m)| DtRecord {
            d: d.entries().to_vec(),
            dt: m.clone(),
            euler: with_euler.then(|| match m.euler_specialize() {
                Ok(value) => value.to_string(),
                Err(_) => "pole".to_string(),
            }),
        })
        .collect()
}

/// Rebuild the entry map of a table from its records (round-trip support).
pub fn entries_from_records(records: &[DtRecord]) -> BTreeMap<DimVector, Motive> {
    records
        .iter()
        .map(|r| (DimVector(r.d.clone()), r.dt.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_LOOP_DOC: &str = r#"{
        "name": "commuting matrices",
        "vertices": ["1"],
        "arrows": [
            {"id": "x", "from": "1", "to": "1"},
            {"id": "y", "from": "1", "to": "1"},
            {"id": "z", "from": "1", "to": "1"}
        ],
        "potential": [
            {"coeff": 1, "cycle": ["x", "y", "z"]},
            {"coeff": -1, "cycle": ["y", "x", "z"]}
        ],
        "cut": ["z"],
        "provider": "feit-fine",
        "theta": [0],
        "truncation": 4
    }"#;

    #[test]
    fn parses_the_three_loop_document() {
        let doc = parse_document(THREE_LOOP_DOC).unwrap();
        assert_eq!(doc.name.as_deref(), Some("commuting matrices"));
        assert_eq!(doc.truncation, Some(4));
        assert_eq!(doc.problem.quiver.vertex_count(), 1);
        assert_eq!(doc.problem.provider, RelationClassProvider::FeitFine);
        assert!(doc.problem.potential.is_some());
        // behaves like the built-in problem
        let built_in = DtProblem::three_loop_commuting();
        assert_eq!(
            doc.problem
                .stacky_series(3)
                .unwrap()
                .coeff(&DimVector(vec![2])),
            built_in
                .stacky_series(3)
                .unwrap()
                .coeff(&DimVector(vec![2]))
        );
    }

    #[test]
    fn numeric_names_and_rational_strings() {
        let doc = parse_document(
            r#"{
                "vertices": [1, 2],
                "arrows": [{"id": "a", "from": 1, "to": 2}],
                "stability": [["3/2", 1], [0, "1/2"]],
                "truncation": 3
            }"#,
        )
        .unwrap();
        assert_eq!(doc.problem.quiver.vertices(), &["1", "2"]);
        let (re, im) = &doc.charge.parts()[0];
        assert_eq!(re, &BigRational::new(3.into(), 2.into()));
        assert_eq!(im, &BigRational::one());
    }

    #[test]
    fn validation_paths() {
        let err = parse_document(
            r#"{"vertices": ["1"], "arrows": [{"id": "a", "from": "1", "to": "2"}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.path, "arrows");
        let err = parse_document(r#"{"vertices": ["1"], "stability": [[1, 1]], "theta": [0]}"#)
            .unwrap_err();
        assert_eq!(err.path, "stability");
        let err = parse_document(
            r#"{"vertices": ["1"], "provider": "user-table",
                "classes": [{"d": [1, 2], "class": "v"}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.path, "classes[0].d");
        let err = parse_document(r#"{"vertices": ["1"], "provider": "wat"}"#).unwrap_err();
        assert_eq!(err.path, "provider");
        let err = parse_document(
            r#"{"vertices": ["1"], "provider": "user-table",
                "classes": [{"d": [1], "class": "v"}, {"d": [1], "class": "L"}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.path, "classes[1].d");
        let err = parse_document(r#"{"vertices": ["1"], "bogus": 1}"#).unwrap_err();
        assert_eq!(err.path, "document");
        // positive real charge is outside H+
        let err = parse_document(r#"{"vertices": ["1"], "stability": [[1, 0]]}"#).unwrap_err();
        assert_eq!(err.path, "stability");
    }

    #[test]
    fn default_charge_is_king_theta_zero() {
        let doc = parse_document(r#"{"vertices": ["1", "2"]}"#).unwrap();
        assert_eq!(doc.charge, CentralCharge::from_theta_ints(&[0, 0]));
    }

    #[test]
    fn record_round_trip() {
        let problem = DtProblem::plain(Quiver::loop_quiver(2));
        let table = problem
            .dt_invariants(&CentralCharge::from_theta_ints(&[0]), 3)
            .unwrap();
        let records = dt_records(&table, true);
        let json = serde_json::to_string(&records).unwrap();
        let back: Vec<DtRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, records);
        assert_eq!(entries_from_records(&back), table.entries);
        // euler column present and exact
        assert_eq!(back[0].euler.as_deref(), Some("1"));
    }

    #[test]
    fn series_records_are_sorted() {
        let problem = DtProblem::plain(Quiver::a2());
        let series = problem.stacky_series(2).unwrap();
        let records = series_records(&series);
        let mut sorted = records.clone();
        sorted.sort_by_key(|r| (r.d.iter().sum::<u32>(), r.d.clone()));
        assert_eq!(records, sorted);
    }
}
