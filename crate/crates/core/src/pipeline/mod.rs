//! Lexical selection: from a content TMR to scored candidate sets.
//!
//! The stages run in order: extract candidate senses, manage referring
//! expressions, aggregate into sets, prune semantically, prune
//! syntactically, expand synonyms. Every score change is a ledger entry,
//! so a set's score is always the sum of its ledger.

mod aggregate;
mod extract;
mod reference;
mod semantic;
mod synonyms;
mod syntactic;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::config::ScoringConfig;
use crate::knowledge::{KbError, KnowledgeBase, LexSense};
use crate::tmr::{is_inverse_property, Filler, Tmr, TmrError, TmrFrame, TIME_SLOTS};

pub use aggregate::{aggregate_sets, Aggregated};
pub use extract::extract_candidates;
pub use reference::{manage_reference, ReferenceOutcome};
pub use semantic::{prune_semantic, verify_semantic};
pub use synonyms::expand_synonyms;
pub use syntactic::prune_syntactic;

/// Slots that steer referring-expression choice rather than carry content.
pub const REFERENCE_SLOTS: [&str; 3] = ["HAS-NAME", "GENDER", "CARDINALITY"];

/// Case roles a sense must be able to host when the TMR fills them.
pub const CORE_ROLES: [&str; 2] = ["AGENT", "THEME"];

pub const EVENT: &str = "EVENT";
pub const OBJECT: &str = "OBJECT";
pub const HUMAN: &str = "HUMAN";

pub fn is_content_slot(property: &str) -> bool {
    !is_inverse_property(property) && !TIME_SLOTS.contains(&property) && !REFERENCE_SLOTS.contains(&property)
}

/// Content slots of a frame, in property order.
pub fn content_slots(frame: &TmrFrame) -> impl Iterator<Item = (&String, &Vec<Filler>)> {
    frame.slots.iter().filter(|(k, _)| is_content_slot(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Extract,
    Reference,
    Aggregate,
    Semantic,
    Syntactic,
    Synonyms,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Extract => "extract",
            Stage::Reference => "reference",
            Stage::Aggregate => "aggregate",
            Stage::Semantic => "semantic",
            Stage::Syntactic => "syntactic",
            Stage::Synonyms => "synonyms",
        };
        f.pad(s)
    }
}

/// One explained score change (or zero-delta note).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub stage: Stage,
    pub rule: String,
    pub sense: String,
    pub frame: String,
    pub delta: i64,
    pub note: String,
}

impl LedgerEntry {
    pub fn new(stage: Stage, rule: &str, sense: &str, frame: &str, delta: i64, note: impl Into<String>) -> Self {
        LedgerEntry {
            stage,
            rule: rule.to_string(),
            sense: sense.to_string(),
            frame: frame.to_string(),
            delta,
            note: note.into(),
        }
    }
}

impl fmt::Display for LedgerEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<9} {:<40} {:>+4}  {} @ {}: {}",
            self.stage, self.rule, self.delta, self.sense, self.frame, self.note
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Determiner {
    Indefinite,
    Definite,
    Some,
    Bare,
    None,
}

/// How a nominal candidate should surface.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReferenceDecoration {
    pub determiner: Determiner,
    /// Set for pronoun realizations; then `determiner` is `None`.
    pub pronoun_form: Option<String>,
    /// Properties expressed by modifier choices on this frame.
    pub modifiers: Vec<String>,
}

/// Which TMR meaning a choice renders: a frame head, or one property value on a frame.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChoiceKey {
    Head(String),
    Modifier(String, String),
}

impl ChoiceKey {
    pub fn frame(&self) -> &str {
        match self {
            ChoiceKey::Head(f) | ChoiceKey::Modifier(f, _) => f,
        }
    }
}

impl fmt::Display for ChoiceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChoiceKey::Head(id) => f.write_str(id),
            ChoiceKey::Modifier(id, p) => write!(f, "{id}/{p}"),
        }
    }
}

impl Serialize for ChoiceKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn ser_sense_id<S: Serializer>(sense: &Arc<LexSense>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&sense.id)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateSense {
    #[serde(serialize_with = "ser_sense_id")]
    pub sense: Arc<LexSense>,
    /// The word that will surface as head: the headword or one of its synonyms.
    pub lemma: String,
    pub frame: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoration: Option<ReferenceDecoration>,
    pub ledger: Vec<LedgerEntry>,
}

impl CandidateSense {
    pub fn new(sense: Arc<LexSense>, frame: &str) -> Self {
        CandidateSense {
            lemma: sense.headword.clone(),
            sense,
            frame: frame.to_string(),
            decoration: None,
            ledger: Vec::new(),
        }
    }

    pub fn is_pronoun(&self) -> bool {
        self.sense.pronoun.is_some()
    }

    fn sort_key(&self) -> (String, Option<Determiner>) {
        (self.sense.id.clone(), self.decoration.as_ref().map(|d| d.determiner))
    }
}

/// One sense per TMR meaning, with the merged rule ledger.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateSet {
    pub choices: BTreeMap<ChoiceKey, CandidateSense>,
    pub score: i64,
    pub ledger: Vec<LedgerEntry>,
}

impl CandidateSet {
    pub fn push(&mut self, entry: LedgerEntry) {
        self.score += entry.delta;
        self.ledger.push(entry);
    }

    pub fn ledger_sum(&self) -> i64 {
        self.ledger.iter().map(|e| e.delta).sum()
    }

    pub fn head(&self, frame: &str) -> Option<&CandidateSense> {
        self.choices.get(&ChoiceKey::Head(frame.to_string()))
    }

    pub fn modifiers_of<'a>(&'a self, frame: &'a str) -> impl Iterator<Item = (&'a str, &'a CandidateSense)> + 'a {
        self.choices.iter().filter_map(move |(k, c)| match k {
            ChoiceKey::Modifier(f, p) if f == frame => Some((p.as_str(), c)),
            _ => None,
        })
    }

    pub fn sense_ids(&self) -> Vec<&str> {
        self.choices.values().map(|c| c.sense.id.as_str()).collect()
    }

    /// Compact label, e.g. `FASTEN-18=fix-v2(secure) HUMAN-104=Tom-n1`.
    pub fn label(&self) -> String {
        self.choices
            .iter()
            .map(|(k, c)| {
                if c.lemma == c.sense.headword {
                    format!("{k}={}", c.sense.id)
                } else {
                    format!("{k}={}({})", c.sense.id, c.lemma)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A candidate set removed by a pruning rule.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Exclusion {
    pub stage: Stage,
    pub rule: String,
    pub sense: String,
    pub frame: String,
    pub note: String,
    /// How many sets this rule removed for this sense.
    pub sets: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StageCount {
    pub stage: Option<Stage>,
    pub count: usize,
}

/// Everything the selection stages did, for explanation and debugging.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Trace {
    /// Candidate senses after extraction and after reference management.
    pub candidates_extracted: usize,
    pub candidates_after_reference: usize,
    pub sets_aggregated: usize,
    pub sets_after_semantic: usize,
    pub sets_after_syntactic: usize,
    pub sets_after_synonyms: usize,
    pub truncated: bool,
    pub notes: Vec<LedgerEntry>,
    pub exclusions: Vec<Exclusion>,
}

impl Trace {
    pub(crate) fn record_exclusions(&mut self, found: Vec<(Stage, String, String, String, String)>) {
        let mut grouped: BTreeMap<(Stage, String, String, String), (String, usize)> = BTreeMap::new();
        for (stage, rule, sense, frame, note) in found {
            let e = grouped.entry((stage, rule, sense, frame)).or_insert((note, 0));
            e.1 += 1;
        }
        for ((stage, rule, sense, frame), (note, sets)) in grouped {
            self.exclusions.push(Exclusion {
                stage,
                rule,
                sense,
                frame,
                note,
                sets,
            });
        }
    }

    pub fn excluded(&self, sense: &str) -> Vec<&Exclusion> {
        self.exclusions.iter().filter(|e| e.sense == sense).collect()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "candidates: {} extracted, {} after reference",
            self.candidates_extracted, self.candidates_after_reference
        )?;
        writeln!(
            f,
            "sets: {} aggregated{}, {} after semantic, {} after syntactic, {} after synonyms",
            self.sets_aggregated,
            if self.truncated { " (truncated at cap)" } else { "" },
            self.sets_after_semantic,
            self.sets_after_syntactic,
            self.sets_after_synonyms
        )?;
        for n in &self.notes {
            writeln!(f, "note     {n}")?;
        }
        for e in &self.exclusions {
            writeln!(
                f,
                "excluded {:<9} {:<40} {} @ {} ({} sets): {}",
                e.stage, e.rule, e.sense, e.frame, e.sets, e.note
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("no lexical sense can realize {frame} ({concept} and all its ancestors are unlexicalized)")]
    NoRealizableSense { frame: String, concept: String },
    #[error("all candidate sets were pruned at the {stage} stage; the TMR is inexpressible with this lexicon")]
    AllSetsPruned { stage: Stage, trace: Box<Trace> },
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Tmr(#[from] TmrError),
}

/// Referents currently in focus, which may be pronominalized.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiscourseContext {
    pub salient: BTreeSet<String>,
}

impl DiscourseContext {
    pub fn from_tmr(tmr: &Tmr) -> Self {
        DiscourseContext {
            salient: tmr.discourse.salient.iter().cloned().collect(),
        }
    }
}

pub type Candidates = BTreeMap<ChoiceKey, Vec<CandidateSense>>;

pub fn count_candidates(c: &Candidates) -> usize {
    c.values().map(Vec::len).sum()
}

/// The result of lexical selection.
#[derive(Clone, Debug)]
pub struct LexicalSelection {
    pub sets: Vec<CandidateSet>,
    pub trace: Trace,
    /// The input TMR with facts added from episodic memory (e.g. names).
    pub tmr: Tmr,
}

pub fn run_lexical_selection(
    tmr: &Tmr,
    kb: &KnowledgeBase,
    context: &DiscourseContext,
    config: &ScoringConfig,
) -> Result<LexicalSelection, PipelineError> {
    let mut trace = Trace::default();
    if tmr.frames.is_empty() {
        trace.notes.push(LedgerEntry::new(
            Stage::Extract,
            "extract/empty-tmr",
            "-",
            "-",
            0,
            "the TMR has no frames, so there is nothing to express",
        ));
        return Err(PipelineError::AllSetsPruned {
            stage: Stage::Extract,
            trace: Box::new(trace),
        });
    }

    let candidates = extract_candidates(tmr, kb)?;
    trace.candidates_extracted = count_candidates(&candidates);

    let ReferenceOutcome {
        candidates,
        tmr: enriched,
        notes,
    } = manage_reference(candidates, tmr, kb, context)?;
    trace.candidates_after_reference = count_candidates(&candidates);
    trace.notes.extend(notes);

    let Aggregated { sets, truncated } = aggregate_sets(&candidates, config.cap);
    trace.sets_aggregated = sets.len();
    trace.truncated = truncated;
    if truncated {
        trace.notes.push(LedgerEntry::new(
            Stage::Aggregate,
            "aggregate/cap-exceeded",
            "-",
            "-",
            0,
            format!("cartesian product truncated at {} sets", config.cap),
        ));
    }
    let fail = |stage, trace: &Trace| PipelineError::AllSetsPruned {
        stage,
        trace: Box::new(trace.clone()),
    };
    if sets.is_empty() {
        return Err(fail(Stage::Aggregate, &trace));
    }

    let (sets, excl) = prune_semantic(sets, &enriched, kb, config)?;
    trace.sets_after_semantic = sets.len();
    trace.record_exclusions(excl);
    if sets.is_empty() {
        return Err(fail(Stage::Semantic, &trace));
    }

    let (sets, excl) = prune_syntactic(sets, &enriched, kb)?;
    trace.sets_after_syntactic = sets.len();
    trace.record_exclusions(excl);
    if sets.is_empty() {
        return Err(fail(Stage::Syntactic, &trace));
    }

    let sets = expand_synonyms(sets);
    trace.sets_after_synonyms = sets.len();

    Ok(LexicalSelection {
        sets,
        trace,
        tmr: enriched,
    })
}

pub(crate) fn frame_concept(frame: &TmrFrame) -> Result<&str, PipelineError> {
    Ok(frame.concept()?)
}

/// The constraint-checkable value of a TMR filler, if it has one.
pub fn filler_value(filler: &Filler) -> Option<crate::knowledge::PropertyValue> {
    use crate::knowledge::PropertyValue;
    match filler {
        Filler::Instance(id) => crate::tmr::concept_of_instance(id)
            .ok()
            .map(|c| PropertyValue::Concept(c.to_string())),
        Filler::Concept(c) => Some(PropertyValue::Concept(c.clone())),
        Filler::Scalar(x) => Some(PropertyValue::Scalar(*x)),
        Filler::Literal(l) => Some(PropertyValue::Literal(l.clone())),
        _ => None,
    }
}

/// Content slots whose value is an attribute (not another frame), which a modifier may express.
pub fn attribute_slots(frame: &TmrFrame) -> impl Iterator<Item = (&String, &Filler)> {
    content_slots(frame).filter_map(|(p, v)| {
        let f = v.first()?;
        matches!(f, Filler::Scalar(_) | Filler::Literal(_) | Filler::Concept(_)).then_some((p, f))
    })
}
