//! Credibilistic entity matching.
//!
//! 1. Each matcher proposes, for every source entity, its best-scoring
//!    target (kept when the score exceeds the threshold).
//! 2. Source entities proposed by every matcher are retained. The frame is
//!    the set of targets they were matched to; each proposal becomes a
//!    simple mass function `m({t}) = s`, `m(Θ) = 1 − s`.
//! 3. The proposals of an entity are fused and the minimum-distance rule
//!    picks a target subset, giving a 1:1 or 1:n correspondence.
//!
//! Per-entity work is independent: [`MatchPlan::match_entity`] can run on
//! any thread, and [`MatchPlan::assemble`] restores source catalog order.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::combination::{combine_all, CombinationRule};
use crate::decision::{decide_min_distance, DecisionConfig};
use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetMask};
use crate::mass::MassFunction;
use crate::similarity::{MatcherKind, SimilarityScore};

/// The entity labels of one ontology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityCatalog {
    ontology_id: String,
    entities: Vec<String>,
}

impl EntityCatalog {
    pub fn new<I>(ontology_id: impl Into<String>, entities: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let ontology_id = ontology_id.into();
        let entities: Vec<String> = entities.into_iter().map(Into::into).collect();
        if entities.is_empty() {
            return Err(Error::EmptyCatalog(ontology_id));
        }
        let mut seen = BTreeMap::new();
        for (i, e) in entities.iter().enumerate() {
            if e.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if seen.insert(e.as_str(), i).is_some() {
                return Err(Error::DuplicateEntity(e.clone()));
            }
        }
        Ok(EntityCatalog {
            ontology_id,
            entities,
        })
    }

    pub fn ontology_id(&self) -> &str {
        &self.ontology_id
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    /// Always false; catalogs are non-empty.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.entities.iter().position(|e| e == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.position(label).is_some()
    }
}

/// One matcher's proposal for a source entity.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityRecord {
    pub matcher: MatcherKind,
    pub source: String,
    pub target: String,
    pub score: SimilarityScore,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub matchers: Vec<MatcherKind>,
    /// Proposals must score strictly above this.
    pub threshold: f64,
    pub combination: CombinationRule,
    pub decision: DecisionConfig,
    /// Keep only source entities with a proposal from every matcher.
    pub require_all_matchers: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            matchers: MatcherKind::ALL.to_vec(),
            threshold: 0.0,
            combination: CombinationRule::Dempster,
            decision: DecisionConfig::default(),
            require_all_matchers: true,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.matchers.is_empty() {
            return Err(Error::InvalidParameter("at least one matcher is required"));
        }
        if self
            .matchers
            .iter()
            .enumerate()
            .any(|(i, m)| self.matchers[..i].contains(m))
        {
            return Err(Error::InvalidParameter("matchers must be distinct"));
        }
        if !(0.0..1.0).contains(&self.threshold) {
            return Err(Error::InvalidParameter("threshold must lie in [0, 1)"));
        }
        self.decision.validate()
    }

    fn matcher_rank(&self, kind: MatcherKind) -> Option<usize> {
        self.matchers.iter().position(|&m| m == kind)
    }
}

/// The decided correspondence for one source entity.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceDecision {
    pub source: String,
    /// Target labels in frame order.
    pub decided: Vec<String>,
    pub decided_mask: SubsetMask,
    /// Jousselme distance between the fused evidence and the decision.
    pub distance: f64,
    /// Another candidate was within the tie tolerance.
    pub tie: bool,
    pub fused: MassFunction,
    pub per_matcher: Vec<SimilarityRecord>,
}

/// A source entity that could not be matched.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub source: String,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentDocument {
    pub source_ontology: String,
    pub target_ontology: String,
    pub config: PipelineConfig,
    /// `None` when no source entity was retained.
    pub frame: Option<Frame>,
    pub cells: Vec<CorrespondenceDecision>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Best target of each configured matcher for `source`, in matcher order.
/// Ties keep the earliest target in catalog order.
pub fn best_matches(source: &str, targets: &EntityCatalog, config: &PipelineConfig) -> Vec<SimilarityRecord> {
    config
        .matchers
        .iter()
        .filter_map(|&kind| {
            let (target, score) = targets
                .entities()
                .iter()
                .map(|t| (t, kind.score(source, t)))
                .fold(None, |best: Option<(&String, SimilarityScore)>, (t, s)| match best {
                    Some((_, b)) if b.value() >= s.value() => best,
                    _ => Some((t, s)),
                })?;
            (score.value() > config.threshold).then(|| SimilarityRecord {
                matcher: kind,
                source: source.into(),
                target: target.clone(),
                score,
            })
        })
        .collect()
}

/// Runs every matcher over `sources × targets`, ordered by source then
/// matcher.
pub fn compute_similarities(
    sources: &EntityCatalog,
    targets: &EntityCatalog,
    config: &PipelineConfig,
) -> Vec<SimilarityRecord> {
    sources
        .entities()
        .iter()
        .flat_map(|s| best_matches(s, targets, config))
        .collect()
}

/// Brings externally supplied scores into the shape [`compute_similarities`]
/// produces: unknown matchers and scores at or below the threshold are
/// dropped, only the best target per (source, matcher) survives (earliest
/// in target catalog order on ties), and records are ordered by source then
/// matcher.
pub fn normalize_records<I>(
    sources: &EntityCatalog,
    targets: &EntityCatalog,
    records: I,
    config: &PipelineConfig,
) -> Result<Vec<SimilarityRecord>>
where
    I: IntoIterator<Item = SimilarityRecord>,
{
    let mut best: BTreeMap<(usize, usize), (usize, SimilarityRecord)> = BTreeMap::new();
    for record in records {
        let src = sources
            .position(&record.source)
            .ok_or_else(|| Error::UnknownEntity(record.source.clone()))?;
        let tgt = targets
            .position(&record.target)
            .ok_or_else(|| Error::UnknownEntity(record.target.clone()))?;
        let Some(rank) = config.matcher_rank(record.matcher) else {
            continue;
        };
        if record.score.value() <= config.threshold {
            continue;
        }
        let slot = best.entry((src, rank)).or_insert((tgt, record.clone()));
        let (held_tgt, held) = &*slot;
        let better = record.score.value() > held.score.value()
            || (record.score.value() == held.score.value() && tgt < *held_tgt);
        if better {
            *slot = (tgt, record);
        }
    }
    Ok(best.into_values().map(|(_, r)| r).collect())
}

/// Source entities to match, in order of first appearance in `records`.
pub fn select_entities(records: &[SimilarityRecord], config: &PipelineConfig) -> Vec<String> {
    let mut order: Vec<&str> = Vec::new();
    let mut seen: BTreeMap<&str, Vec<MatcherKind>> = BTreeMap::new();
    for r in records {
        let kinds = seen.entry(&r.source).or_insert_with(|| {
            order.push(&r.source);
            Vec::new()
        });
        if !kinds.contains(&r.matcher) {
            kinds.push(r.matcher);
        }
    }
    order
        .into_iter()
        .filter(|s| {
            let kinds = &seen[s];
            if config.require_all_matchers {
                config.matchers.iter().all(|m| kinds.contains(m))
            } else {
                !kinds.is_empty()
            }
        })
        .map(String::from)
        .collect()
}

/// One frame for the whole run: every distinct target in `records`, in
/// first-appearance order.
pub fn build_frame(records: &[SimilarityRecord]) -> Result<Frame> {
    let mut labels: Vec<&str> = Vec::new();
    for r in records {
        if !labels.contains(&r.target.as_str()) {
            labels.push(&r.target);
        }
    }
    Frame::new(labels)
}

/// One simple mass function per proposal for `source`:
/// `m({target}) = score`, `m(Θ) = 1 − score`.
pub fn build_bbas(source: &str, records: &[SimilarityRecord], frame: &Frame) -> Result<Vec<MassFunction>> {
    records
        .iter()
        .filter(|r| r.source == source)
        .map(|r| {
            let s = r.score.value();
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::ScoreOutOfRange(s));
            }
            let target = frame.singleton(&r.target)?;
            MassFunction::new(frame, [(target, s), (frame.full(), 1.0 - s)])
        })
        .collect()
}

/// Fuses the proposals for `source` and decides on a target subset.
pub fn match_entity(
    source: &str,
    records: &[SimilarityRecord],
    frame: &Frame,
    config: &PipelineConfig,
) -> Result<CorrespondenceDecision> {
    let bbas = build_bbas(source, records, frame)?;
    if bbas.is_empty() {
        return Err(Error::NoEvidence(source.into()));
    }
    let fused = combine_all(config.combination, &bbas)?;
    let outcome = decide_min_distance(&fused, &config.decision)?;
    Ok(CorrespondenceDecision {
        source: source.into(),
        decided: frame
            .labels_of(outcome.chosen)
            .into_iter()
            .map(String::from)
            .collect(),
        decided_mask: outcome.chosen,
        distance: outcome.chosen_score(),
        tie: outcome.tie,
        fused,
        per_matcher: records.iter().filter(|r| r.source == source).cloned().collect(),
    })
}

/// Retained entities, their proposals and the shared frame.
#[derive(Debug, Clone)]
pub struct MatchPlan {
    frame: Option<Frame>,
    entities: Vec<(String, Vec<SimilarityRecord>)>,
}

impl MatchPlan {
    /// Selects entities and builds the frame from their proposals.
    pub fn new(records: &[SimilarityRecord], config: &PipelineConfig) -> Result<Self> {
        config.validate()?;
        let selected = select_entities(records, config);
        let mut grouped: BTreeMap<&str, Vec<SimilarityRecord>> =
            selected.iter().map(|s| (s.as_str(), Vec::new())).collect();
        let mut retained = Vec::new();
        for r in records {
            if let Some(group) = grouped.get_mut(r.source.as_str()) {
                group.push(r.clone());
                retained.push(r.clone());
            }
        }
        let frame = if retained.is_empty() {
            None
        } else {
            Some(build_frame(&retained)?)
        };
        let entities = selected
            .iter()
            .map(|s| (s.clone(), grouped.remove(s.as_str()).unwrap_or_default()))
            .collect();
        Ok(MatchPlan { frame, entities })
    }

    pub fn frame(&self) -> Option<&Frame> {
        self.frame.as_ref()
    }

    /// Retained source entities with their proposals.
    pub fn entities(&self) -> &[(String, Vec<SimilarityRecord>)] {
        &self.entities
    }

    /// Matches the `index`-th retained entity.
    pub fn match_entity(&self, index: usize, config: &PipelineConfig) -> Result<CorrespondenceDecision> {
        let (source, records) = &self.entities[index];
        let frame = self.frame.as_ref().ok_or_else(|| Error::NoEvidence(source.clone()))?;
        match_entity(source, records, frame, config)
    }

    /// Builds the alignment from per-entity results given in
    /// [`MatchPlan::entities`] order. Failures become diagnostics.
    pub fn assemble(
        self,
        sources: &EntityCatalog,
        targets: &EntityCatalog,
        config: &PipelineConfig,
        results: Vec<Result<CorrespondenceDecision>>,
    ) -> AlignmentDocument {
        debug_assert_eq!(results.len(), self.entities.len());
        let mut cells = Vec::new();
        let mut diagnostics = Vec::new();
        for ((source, _), result) in self.entities.into_iter().zip(results) {
            match result {
                Ok(cell) => cells.push(cell),
                Err(error) => diagnostics.push(Diagnostic { source, error }),
            }
        }
        AlignmentDocument {
            source_ontology: sources.ontology_id().into(),
            target_ontology: targets.ontology_id().into(),
            config: config.clone(),
            frame: self.frame,
            cells,
            diagnostics,
        }
    }
}

/// Matches with precomputed or injected proposals.
pub fn run_with_records(
    sources: &EntityCatalog,
    targets: &EntityCatalog,
    records: &[SimilarityRecord],
    config: &PipelineConfig,
) -> Result<AlignmentDocument> {
    let plan = MatchPlan::new(records, config)?;
    let results = (0..plan.entities().len())
        .map(|i| plan.match_entity(i, config))
        .collect();
    Ok(plan.assemble(sources, targets, config, results))
}

/// The full pipeline on two catalogs.
pub fn run_pipeline(
    sources: &EntityCatalog,
    targets: &EntityCatalog,
    config: &PipelineConfig,
) -> Result<AlignmentDocument> {
    config.validate()?;
    let records = compute_similarities(sources, targets, config);
    run_with_records(sources, targets, &records, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    fn rec(matcher: MatcherKind, source: &str, target: &str, score: f64) -> SimilarityRecord {
        SimilarityRecord {
            matcher,
            source: source.into(),
            target: target.into(),
            score: SimilarityScore::new(score).unwrap(),
        }
    }

    fn member_records() -> Vec<SimilarityRecord> {
        vec![
            rec(MatcherKind::Levenshtein, "ConferenceMember", "Conference_fees", 0.687),
            rec(MatcherKind::Jaro, "ConferenceMember", "Conference", 0.516),
            rec(MatcherKind::Hamming, "ConferenceMember", "Conference", 0.625),
        ]
    }

    #[test]
    fn catalog_validation() {
        assert_eq!(
            EntityCatalog::new("o", Vec::<String>::new()),
            Err(Error::EmptyCatalog("o".into()))
        );
        assert_eq!(
            EntityCatalog::new("o", ["a", "a"]),
            Err(Error::DuplicateEntity("a".into()))
        );
        assert_eq!(EntityCatalog::new("o", ["a", ""]), Err(Error::EmptyLabel));
        let c = EntityCatalog::new("o", ["a", "b"]).unwrap();
        assert_eq!(c.position("b"), Some(1));
        assert!(!c.contains("z"));
    }

    #[test]
    fn config_validation() {
        let mut c = PipelineConfig::default();
        assert!(c.validate().is_ok());
        c.threshold = 1.0;
        assert!(c.validate().is_err());
        c.threshold = 0.5;
        c.matchers.clear();
        assert!(c.validate().is_err());
        c.matchers = vec![MatcherKind::Jaro, MatcherKind::Jaro];
        assert!(c.validate().is_err());
    }

    #[test]
    fn best_matches_on_conference_labels() {
        let targets = EntityCatalog::new("conference", ["Conference", "Conference_fees", "Committee"]).unwrap();
        let got = best_matches("ConferenceMember", &targets, &PipelineConfig::default());
        assert_eq!(got.len(), 3);
        assert_eq!(got[0].target, "Conference_fees");
        assert_eq!(got[0].score.value(), 0.6875);
        // Conference and Conference_fees both score 10/16: catalog order wins
        assert_eq!(got[2].matcher, MatcherKind::Hamming);
        assert_eq!(got[2].target, "Conference");
        assert_eq!(got[2].score.value(), 0.625);
    }

    #[test]
    fn threshold_filters_proposals() {
        let targets = EntityCatalog::new("t", ["xyz"]).unwrap();
        let sources = EntityCatalog::new("s", ["abc"]).unwrap();
        let mut config = PipelineConfig::default();
        assert!(compute_similarities(&sources, &targets, &config).is_empty());
        let targets = EntityCatalog::new("t", ["abd"]).unwrap();
        config.threshold = 0.9;
        assert!(compute_similarities(&sources, &targets, &config).is_empty());
        config.threshold = 0.5;
        assert_eq!(compute_similarities(&sources, &targets, &config).len(), 3);
    }

    #[test]
    fn entity_selection() {
        let mut records = member_records();
        records.push(rec(MatcherKind::Levenshtein, "Track", "Topic", 0.4));
        records.push(rec(MatcherKind::Jaro, "Track", "Topic", 0.5));
        let mut config = PipelineConfig::default();
        assert_eq!(select_entities(&records, &config), vec!["ConferenceMember"]);
        config.require_all_matchers = false;
        assert_eq!(select_entities(&records, &config), vec!["ConferenceMember", "Track"]);
        let single = [rec(MatcherKind::Jaro, "Track", "Topic", 0.5)];
        assert_eq!(select_entities(&single, &config), vec!["Track"]);
    }

    #[test]
    fn frame_from_targets() {
        let f = build_frame(&member_records()).unwrap();
        assert_eq!(f.labels(), &["Conference_fees", "Conference"]);
        let one = build_frame(&member_records()[..1]).unwrap();
        assert_eq!(one.len(), 1);
        let wide: Vec<_> = (0..70)
            .map(|i| rec(MatcherKind::Jaro, "s", &format!("t{i}"), 0.5))
            .collect();
        assert_eq!(build_frame(&wide), Err(Error::FrameTooLarge(70)));
    }

    #[test]
    fn simple_bbas() {
        let records = member_records();
        let f = build_frame(&records).unwrap();
        let bbas = build_bbas("ConferenceMember", &records, &f).unwrap();
        assert_eq!(bbas.len(), 3);
        let fees = f.singleton("Conference_fees").unwrap();
        assert_eq!(bbas[0].mass(fees), 0.687);
        assert!((bbas[0].mass(f.full()) - 0.313).abs() < 1e-12);
        let conf = f.singleton("Conference").unwrap();
        assert_eq!(bbas[1].mass(conf), 0.516);
        assert!((bbas[1].mass(f.full()) - 0.484).abs() < 1e-12);

        let certain = [rec(MatcherKind::Jaro, "x", "Conference", 1.0)];
        let b = build_bbas("x", &certain, &f).unwrap();
        assert_eq!(b[0].focal_elements(), &[(conf, 1.0)]);

        let zero = [rec(MatcherKind::Jaro, "x", "Conference", 0.0)];
        assert_eq!(build_bbas("x", &zero, &f), Err(Error::ScoreOutOfRange(0.0)));
    }

    #[test]
    fn certain_single_proposal() {
        let records = [rec(MatcherKind::Levenshtein, "Paper", "Paper", 1.0)];
        let f = build_frame(&records).unwrap();
        let config = PipelineConfig {
            matchers: vec![MatcherKind::Levenshtein],
            ..PipelineConfig::default()
        };
        let cell = match_entity("Paper", &records, &f, &config).unwrap();
        assert_eq!(cell.decided, vec!["Paper"]);
        assert_eq!(cell.distance, 0.0);
        assert_eq!(
            match_entity("Other", &records, &f, &config),
            Err(Error::NoEvidence("Other".into()))
        );
    }

    #[test]
    fn conflicting_certain_proposals_become_diagnostics() {
        let sources = EntityCatalog::new("s", ["a", "b"]).unwrap();
        let targets = EntityCatalog::new("t", ["x", "y"]).unwrap();
        let records = vec![
            rec(MatcherKind::Levenshtein, "a", "x", 1.0),
            rec(MatcherKind::Jaro, "a", "y", 1.0),
            rec(MatcherKind::Levenshtein, "b", "x", 0.8),
            rec(MatcherKind::Jaro, "b", "x", 0.7),
        ];
        let config = PipelineConfig {
            matchers: vec![MatcherKind::Levenshtein, MatcherKind::Jaro],
            ..PipelineConfig::default()
        };
        let doc = run_with_records(&sources, &targets, &records, &config).unwrap();
        assert_eq!(doc.cells.len(), 1);
        assert_eq!(doc.cells[0].source, "b");
        assert_eq!(
            doc.diagnostics,
            vec![Diagnostic {
                source: "a".into(),
                error: Error::TotalConflict
            }]
        );
    }

    #[test]
    fn injected_records_are_normalized() {
        let sources = EntityCatalog::new("s", ["a", "b"]).unwrap();
        let targets = EntityCatalog::new("t", ["x", "y", "z"]).unwrap();
        let config = PipelineConfig::default();
        let input = vec![
            rec(MatcherKind::Jaro, "b", "z", 0.4),
            rec(MatcherKind::Jaro, "b", "y", 0.4),
            rec(MatcherKind::Levenshtein, "b", "x", 0.3),
            rec(MatcherKind::Jaro, "a", "x", 0.2),
            rec(MatcherKind::Jaro, "a", "z", 0.9),
        ];
        let out = normalize_records(&sources, &targets, input, &config).unwrap();
        let view: Vec<_> = out.iter().map(|r| (r.source.as_str(), r.matcher, r.target.as_str())).collect();
        assert_eq!(
            view,
            vec![
                ("a", MatcherKind::Jaro, "z"),
                ("b", MatcherKind::Levenshtein, "x"),
                ("b", MatcherKind::Jaro, "y"),
            ]
        );
        let unknown = vec![rec(MatcherKind::Jaro, "a", "nope", 0.5)];
        assert_eq!(
            normalize_records(&sources, &targets, unknown, &config),
            Err(Error::UnknownEntity("nope".into()))
        );
    }

    #[test]
    fn identical_catalogs_self_match() {
        let c = EntityCatalog::new("o", ["Paper", "Review", "Committee", "Person"]).unwrap();
        let doc = run_pipeline(&c, &c, &PipelineConfig::default()).unwrap();
        assert_eq!(doc.cells.len(), 4);
        for (cell, e) in doc.cells.iter().zip(c.entities()) {
            assert_eq!(cell.decided, vec![e.clone()]);
            assert_eq!(cell.distance, 0.0);
            assert_eq!(cell.per_matcher.len(), 3);
        }
        assert!(doc.diagnostics.is_empty());
    }

    #[test]
    fn nothing_retained() {
        let s = EntityCatalog::new("s", ["abc"]).unwrap();
        let t = EntityCatalog::new("t", ["xyz"]).unwrap();
        let config = PipelineConfig {
            threshold: 0.5,
            ..PipelineConfig::default()
        };
        let doc = run_pipeline(&s, &t, &config).unwrap();
        assert!(doc.cells.is_empty());
        assert!(doc.frame.is_none());
        assert_eq!(doc.source_ontology, "s");
    }
}
