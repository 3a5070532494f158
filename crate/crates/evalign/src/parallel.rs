//! Pipeline runs that spread per-entity work over the rayon pool.
//!
//! Results are collected in source catalog order before assembly, so the
//! output does not depend on the number of threads.

use rayon::prelude::*;

use evalign_core::pipeline::{
    best_matches, normalize_records, AlignmentDocument, EntityCatalog, MatchPlan, PipelineConfig,
    SimilarityRecord,
};
use evalign_core::Result;

pub fn compute_similarities(
    sources: &EntityCatalog,
    targets: &EntityCatalog,
    config: &PipelineConfig,
) -> Vec<SimilarityRecord> {
    sources
        .entities()
        .par_iter()
        .map(|s| best_matches(s, targets, config))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn run_with_records(
    sources: &EntityCatalog,
    targets: &EntityCatalog,
    records: &[SimilarityRecord],
    config: &PipelineConfig,
) -> Result<AlignmentDocument> {
    let plan = MatchPlan::new(records, config)?;
    let results = (0..plan.entities().len())
        .into_par_iter()
        .map(|i| plan.match_entity(i, config))
        .collect();
    Ok(plan.assemble(sources, targets, config, results))
}

/// Runs the pipeline, using `injected` scores instead of the matchers when
/// given.
pub fn align(
    sources: &EntityCatalog,
    targets: &EntityCatalog,
    injected: Option<Vec<SimilarityRecord>>,
    config: &PipelineConfig,
) -> Result<AlignmentDocument> {
    config.validate()?;
    let records = match injected {
        Some(records) => normalize_records(sources, targets, records, config)?,
        None => compute_similarities(sources, targets, config),
    };
    run_with_records(sources, targets, &records, config)
}
