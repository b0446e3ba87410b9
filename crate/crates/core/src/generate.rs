//! End-to-end generation: lexical selection, solutions, realization, ranking.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::config::Config;
use crate::knowledge::KnowledgeBase;
use crate::pipeline::{run_lexical_selection, DiscourseContext, PipelineError, Trace};
use crate::realizer::realize;
use crate::selector::{rank, Candidate, FrequencyTable, ScoredSentence, SelectError};
use crate::solution::build_solutions;
use crate::tmr::Tmr;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("no candidate set could be realized: {}", failures.join("; "))]
    NothingRealized { failures: Vec<String>, trace: Box<Trace> },
    #[error(transparent)]
    Select(#[from] SelectError),
}

impl GenerateError {
    /// The selection trace, when the run got far enough to have one.
    pub fn trace(&self) -> Option<&Trace> {
        match self {
            GenerateError::Pipeline(PipelineError::AllSetsPruned { trace, .. }) => Some(trace),
            GenerateError::NothingRealized { trace, .. } => Some(trace),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GenerateOptions {
    pub timing: bool,
}

/// Sizes of the intermediate artifacts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StageCounts {
    pub candidates_extracted: usize,
    pub candidates_after_reference: usize,
    pub sets_aggregated: usize,
    pub sets_after_semantic: usize,
    pub sets_after_syntactic: usize,
    pub sets_after_synonyms: usize,
    pub solutions: usize,
    pub sentences: usize,
    /// Distinct sentence strings after merging duplicates.
    pub unique_sentences: usize,
}

/// Wall-clock microseconds per phase.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub lexical_selection_us: u128,
    pub solutions_us: u128,
    pub realization_us: u128,
    pub ranking_us: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionDump {
    pub set: String,
    pub score: i64,
    pub text: String,
    pub tree: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    /// Best first; each sentence appears once.
    pub ranked: Vec<ScoredSentence>,
    pub counts: StageCounts,
    pub trace: Trace,
    pub solutions: Vec<SolutionDump>,
    /// Sets that could not be turned into a sentence, with the reason.
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl RunReport {
    pub fn top(&self, n: usize) -> impl Iterator<Item = &ScoredSentence> {
        self.ranked.iter().take(n)
    }

    pub fn best(&self) -> &ScoredSentence {
        &self.ranked[0]
    }

    pub fn texts(&self) -> Vec<&str> {
        self.ranked.iter().map(|s| s.text.as_str()).collect()
    }
}

pub fn generate(
    tmr: &Tmr,
    kb: &KnowledgeBase,
    config: &Config,
    freq: &FrequencyTable,
    options: GenerateOptions,
) -> Result<RunReport, GenerateError> {
    let t0 = Instant::now();
    let ctx = DiscourseContext::from_tmr(tmr);
    let selection = run_lexical_selection(tmr, kb, &ctx, &config.scoring)?;
    let t1 = Instant::now();

    let mut failures = Vec::new();
    let mut solutions = Vec::new();
    for set in &selection.sets {
        match build_solutions(set, &selection.tmr, kb, &config.scoring) {
            Ok(s) => solutions.extend(s),
            Err(e) => failures.push(format!("{}: {e}", set.label())),
        }
    }
    let t2 = Instant::now();

    let mut candidates = Vec::with_capacity(solutions.len());
    let mut dumps = Vec::with_capacity(solutions.len());
    for sol in solutions {
        match realize(&sol) {
            Ok(r) => {
                dumps.push(SolutionDump {
                    set: sol.source.label(),
                    score: sol.source.score,
                    text: r.text.clone(),
                    tree: sol.debug_tree(),
                });
                candidates.push(Candidate::new(r, sol));
            }
            Err(e) => failures.push(format!("{}: {e}", sol.source.label())),
        }
    }
    let t3 = Instant::now();

    if candidates.is_empty() {
        return Err(GenerateError::NothingRealized {
            failures,
            trace: Box::new(selection.trace),
        });
    }
    let n_solutions = dumps.len() + failures.len();
    let sentences = candidates.len();
    let ranked = rank(&candidates, &tmr.discourse.history, &config.weights, freq)?;
    let mut seen = std::collections::BTreeSet::new();
    let ranked: Vec<ScoredSentence> = ranked.into_iter().filter(|s| seen.insert(s.text.clone())).collect();
    let t4 = Instant::now();

    let tr = &selection.trace;
    let counts = StageCounts {
        candidates_extracted: tr.candidates_extracted,
        candidates_after_reference: tr.candidates_after_reference,
        sets_aggregated: tr.sets_aggregated,
        sets_after_semantic: tr.sets_after_semantic,
        sets_after_syntactic: tr.sets_after_syntactic,
        sets_after_synonyms: tr.sets_after_synonyms,
        solutions: n_solutions,
        sentences,
        unique_sentences: ranked.len(),
    };
    let timing = options.timing.then(|| Timing {
        lexical_selection_us: (t1 - t0).as_micros(),
        solutions_us: (t2 - t1).as_micros(),
        realization_us: (t3 - t2).as_micros(),
        ranking_us: (t4 - t3).as_micros(),
    });
    Ok(RunReport {
        ranked,
        counts,
        trace: selection.trace,
        solutions: dumps,
        failures,
        timing,
    })
}
