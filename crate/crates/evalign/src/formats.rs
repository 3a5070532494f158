//! JSON documents read and written by the CLI.
//!
//! Reals are written with exactly six decimals. Subset keys of mass tables
//! join frame labels with `|`; `*` stands for the whole frame and `{}` for
//! the empty set.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use evalign_core::decision::DecisionOutcome;
use evalign_core::pipeline::{AlignmentDocument, EntityCatalog, PipelineConfig, SimilarityRecord};
use evalign_core::similarity::{MatcherKind, SimilarityScore};
use evalign_core::{Frame, MassFunction};

use crate::error::CliError;

/// A real serialized with six fixed decimals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixed6(pub f64);

impl Serialize for Fixed6 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite number"));
        }
        // avoid "-0.000000"
        let v = if self.0 == 0.0 { 0.0 } else { self.0 };
        let text = format!("{v:.6}");
        let text = if text == "-0.000000" { "0.000000".to_owned() } else { text };
        RawValue::from_string(text)
            .map_err(serde::ser::Error::custom)?
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Fixed6 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Fixed6)
    }
}

/// Subset string → mass, keeping insertion order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MassTable(pub Vec<(String, f64)>);

impl MassTable {
    pub fn from_mass(m: &MassFunction) -> Self {
        let f = m.frame();
        MassTable(
            m.focal_elements()
                .iter()
                .map(|&(k, v)| (f.render_compact(k), v))
                .collect(),
        )
    }

    pub fn to_mass(&self, frame: &Frame) -> Result<MassFunction, evalign_core::Error> {
        let entries = self
            .0
            .iter()
            .map(|(k, v)| Ok((frame.parse_subset(k)?, *v)))
            .collect::<Result<Vec<_>, evalign_core::Error>>()?;
        MassFunction::new(frame, entries)
    }
}

impl Serialize for MassTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &Fixed6(*v))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for MassTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct TableVisitor;

        impl<'de> Visitor<'de> for TableVisitor {
            type Value = MassTable;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from subset strings to masses")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<MassTable, A::Error> {
                let mut entries = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, f64>()? {
                    entries.push((k, v));
                }
                Ok(MassTable(entries))
            }
        }

        deserializer.deserialize_map(TableVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedBba {
    pub name: String,
    pub masses: MassTable,
}

/// `{"frame": [...], "bbas": [{"name": ..., "masses": {...}}]}`.
///
/// Combination output uses the same layout plus `rule` and `conflict`, so it
/// can be fed back to `decide`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BbaFile {
    pub frame: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conflict: Option<Fixed6>,
    pub bbas: Vec<NamedBba>,
}

impl BbaFile {
    pub fn frame(&self) -> Result<Frame, evalign_core::Error> {
        Frame::new(self.frame.iter().cloned())
    }

    /// The frame and every mass function, validated.
    pub fn masses(&self) -> Result<(Frame, Vec<MassFunction>), evalign_core::Error> {
        let frame = self.frame()?;
        let masses = self
            .bbas
            .iter()
            .map(|b| b.masses.to_mass(&frame))
            .collect::<Result<_, _>>()?;
        Ok((frame, masses))
    }
}

/// One line of an injected-scores file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreEntry {
    pub matcher: String,
    pub source: String,
    pub target: String,
    pub score: f64,
}

impl ScoreEntry {
    pub fn to_record(&self) -> Result<SimilarityRecord, evalign_core::Error> {
        Ok(SimilarityRecord {
            matcher: self.matcher.parse()?,
            source: self.source.clone(),
            target: self.target.clone(),
            score: SimilarityScore::new(self.score)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetScore {
    pub subset: String,
    pub value: Fixed6,
}

/// Output of `decide`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionJson {
    pub rule: String,
    pub chosen: String,
    pub score: Fixed6,
    pub tie: bool,
    pub scores: Vec<SubsetScore>,
}

impl DecisionJson {
    pub fn new(frame: &Frame, outcome: &DecisionOutcome) -> Self {
        DecisionJson {
            rule: outcome.rule_name().into(),
            chosen: frame.render(outcome.chosen),
            score: Fixed6(outcome.chosen_score()),
            tie: outcome.tie,
            scores: outcome
                .scores
                .iter()
                .map(|&(k, v)| SubsetScore {
                    subset: frame.render(k),
                    value: Fixed6(v),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub matchers: Vec<String>,
    pub threshold: Fixed6,
    pub combination: String,
    pub min_cardinality: usize,
    pub max_cardinality: usize,
    pub include_full_frame: bool,
    pub require_all_matchers: bool,
}

impl From<&PipelineConfig> for ConfigJson {
    fn from(c: &PipelineConfig) -> Self {
        ConfigJson {
            matchers: c.matchers.iter().map(|m| m.name().to_owned()).collect(),
            threshold: Fixed6(c.threshold),
            combination: c.combination.name().into(),
            min_cardinality: c.decision.min_cardinality,
            max_cardinality: c.decision.max_cardinality,
            include_full_frame: c.decision.include_full_frame,
            require_all_matchers: c.require_all_matchers,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProposalJson {
    pub matcher: String,
    pub target: String,
    pub score: Fixed6,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellJson {
    pub source: String,
    pub decided: Vec<String>,
    pub distance: Fixed6,
    pub tie: bool,
    pub fused: MassTable,
    pub per_matcher: Vec<ProposalJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticJson {
    pub source: String,
    pub error: String,
}

/// Output of `match`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentJson {
    pub source_ontology: String,
    pub target_ontology: String,
    pub config: ConfigJson,
    /// Frame labels; `*` in `fused` tables refers to all of them.
    pub frame: Vec<String>,
    pub cells: Vec<CellJson>,
    pub diagnostics: Vec<DiagnosticJson>,
}

impl From<&AlignmentDocument> for AlignmentJson {
    fn from(doc: &AlignmentDocument) -> Self {
        AlignmentJson {
            source_ontology: doc.source_ontology.clone(),
            target_ontology: doc.target_ontology.clone(),
            config: (&doc.config).into(),
            frame: doc
                .frame
                .as_ref()
                .map(|f| f.labels().to_vec())
                .unwrap_or_default(),
            cells: doc
                .cells
                .iter()
                .map(|c| CellJson {
                    source: c.source.clone(),
                    decided: c.decided.clone(),
                    distance: Fixed6(c.distance),
                    tie: c.tie,
                    fused: MassTable::from_mass(&c.fused),
                    per_matcher: c
                        .per_matcher
                        .iter()
                        .map(|r| ProposalJson {
                            matcher: r.matcher.name().into(),
                            target: r.target.clone(),
                            score: Fixed6(r.score.value()),
                        })
                        .collect(),
                })
                .collect(),
            diagnostics: doc
                .diagnostics
                .iter()
                .map(|d| DiagnosticJson {
                    source: d.source.clone(),
                    error: d.error.to_string(),
                })
                .collect(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })
}

pub fn read_bba_file(path: &Path) -> Result<BbaFile, CliError> {
    read_json(path)
}

/// Reads injected scores and checks every entry against the catalogs.
pub fn read_scores(
    path: &Path,
    sources: &EntityCatalog,
    targets: &EntityCatalog,
) -> Result<Vec<SimilarityRecord>, CliError> {
    let entries: Vec<ScoreEntry> = read_json(path)?;
    let input_error = |source| CliError::Input {
        path: path.into(),
        source,
    };
    entries
        .iter()
        .map(|e| {
            let r = e.to_record().map_err(input_error)?;
            if !sources.contains(&r.source) {
                return Err(input_error(evalign_core::Error::UnknownEntity(r.source)));
            }
            if !targets.contains(&r.target) {
                return Err(input_error(evalign_core::Error::UnknownEntity(r.target)));
            }
            Ok(r)
        })
        .collect()
}

/// Parses a comma-separated matcher list.
pub fn parse_matchers(list: &str) -> Result<Vec<MatcherKind>, evalign_core::Error> {
    list.split(',').map(|s| s.trim().parse()).collect()
}
