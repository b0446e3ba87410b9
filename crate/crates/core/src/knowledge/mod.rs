//! Static knowledge: the ontology, the lexicon and episodic memory.
//!
//! All three are loaded from `ontogen-kb/1` JSON documents, validated once,
//! and immutable afterwards. See `docs/schemas.md` for the file layout.

mod lexicon;
mod memory;
mod ontology;

use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use thiserror::Error;

pub use lexicon::{
    Gender, LexSense, Lexicon, Mood, Number, Pos, PronounFeatures, SemFrame, SlotValue, SynCategory, SynNode, VarId,
};
pub use memory::{EpisodicMemory, InstanceFrame, MemoryValue};
pub use ontology::{Concept, Constraint, FacetedConstraint, MatchDegree, Ontology, PropertyValue};

pub const KB_SCHEMA: &str = "ontogen-kb/1";

#[derive(Debug, Error)]
pub enum KbError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: expected schema \"{expected}\", found \"{found}\"")]
    Schema {
        path: String,
        expected: &'static str,
        found: String,
    },
    #[error("ontology has no concepts")]
    NoConcepts,
    #[error("unknown concept {0}")]
    UnknownConcept(String),
    #[error("{owner} refers to unknown concept {concept}")]
    DanglingConcept { owner: String, concept: String },
    #[error("{owner}: {reason}")]
    InvalidConstraint { owner: String, reason: String },
    #[error("IS-A cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("invalid sense {sense}: {reason}")]
    InvalidSense { sense: String, reason: String },
    #[error("duplicate {kind} {id}")]
    Duplicate { kind: &'static str, id: String },
    #[error("malformed instance id {0:?} (expected CONCEPT-n)")]
    MalformedInstanceId(String),
}

#[derive(Deserialize)]
struct OntologyDoc {
    schema: String,
    concepts: Vec<Concept>,
}

#[derive(Deserialize)]
struct LexiconDoc {
    schema: String,
    senses: Vec<LexSense>,
}

#[derive(Deserialize)]
struct MemoryDoc {
    schema: String,
    #[serde(default)]
    instances: Vec<InstanceFrame>,
}

/// The three knowledge bases, validated and cross-checked.
#[derive(Clone, Debug)]
pub struct KnowledgeBase {
    pub ontology: Ontology,
    pub lexicon: Lexicon,
    pub memory: EpisodicMemory,
    /// Non-fatal findings from validation.
    pub warnings: Vec<String>,
}

impl KnowledgeBase {
    pub fn load(
        ontology_path: impl AsRef<Path>,
        lexicon_path: impl AsRef<Path>,
        memory_path: impl AsRef<Path>,
    ) -> Result<Self, KbError> {
        let read = |p: &Path| {
            std::fs::read_to_string(p).map_err(|source| KbError::Io {
                path: p.display().to_string(),
                source,
            })
        };
        let (o, l, m) = (ontology_path.as_ref(), lexicon_path.as_ref(), memory_path.as_ref());
        Self::from_json_named(
            (&o.display().to_string(), &read(o)?),
            (&l.display().to_string(), &read(l)?),
            (&m.display().to_string(), &read(m)?),
        )
    }

    pub fn from_json(ontology: &str, lexicon: &str, memory: &str) -> Result<Self, KbError> {
        Self::from_json_named(("ontology", ontology), ("lexicon", lexicon), ("memory", memory))
    }

    fn from_json_named(ontology: (&str, &str), lexicon: (&str, &str), memory: (&str, &str)) -> Result<Self, KbError> {
        let o: OntologyDoc = parse_doc(ontology.0, ontology.1)?;
        check_schema(ontology.0, &o.schema)?;
        let l: LexiconDoc = parse_doc(lexicon.0, lexicon.1)?;
        check_schema(lexicon.0, &l.schema)?;
        let m: MemoryDoc = parse_doc(memory.0, memory.1)?;
        check_schema(memory.0, &m.schema)?;
        Self::from_parts(o.concepts, l.senses, m.instances)
    }

    pub fn from_parts(
        concepts: Vec<Concept>,
        senses: Vec<LexSense>,
        instances: Vec<InstanceFrame>,
    ) -> Result<Self, KbError> {
        let (ontology, warnings) = Ontology::new(concepts)?;
        let lexicon = Lexicon::new(senses, &ontology)?;
        let memory = EpisodicMemory::new(instances, &ontology)?;
        Ok(KnowledgeBase {
            ontology,
            lexicon,
            memory,
            warnings,
        })
    }

    pub fn is_a(&self, child: &str, ancestor: &str) -> Result<bool, KbError> {
        self.ontology.is_a(child, ancestor)
    }

    pub fn constraint_on(&self, concept: &str, property: &str) -> Result<FacetedConstraint, KbError> {
        self.ontology.constraint_on(concept, property)
    }

    pub fn match_degree(
        &self,
        filler: &str,
        needed: &FacetedConstraint,
        lexical_override: Option<&Constraint>,
    ) -> Result<MatchDegree, KbError> {
        self.ontology.match_degree(filler, needed, lexical_override)
    }

    /// Every sense whose sem-struc is headed by `concept`, in sense-id order.
    pub fn senses_by_head_concept(&self, concept: &str) -> Vec<Arc<LexSense>> {
        self.lexicon.by_head(concept).to_vec()
    }

    /// Modifier senses that express `property` with a range or value set covering `value`.
    pub fn senses_for_property(&self, property: &str, value: &PropertyValue) -> Vec<Arc<LexSense>> {
        self.lexicon
            .by_head(property)
            .iter()
            .filter(|s| s.is_modifier())
            .filter(|s| {
                s.sem_struc.slots.values().any(|v| match v {
                    SlotValue::Constraint(c) => !matches!(c, Constraint::Anything) && self.ontology.admits(c, value),
                    SlotValue::Scalar(x) => matches!(value, PropertyValue::Scalar(y) if x == y),
                    SlotValue::Literal(l) => {
                        matches!(value, PropertyValue::Literal(y) if l.eq_ignore_ascii_case(y))
                    }
                    SlotValue::Bind { .. } => false,
                })
            })
            .cloned()
            .collect()
    }
}

fn parse_doc<T: DeserializeOwned>(path: &str, text: &str) -> Result<T, KbError> {
    serde_json::from_str(text).map_err(|e| KbError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn check_schema(path: &str, found: &str) -> Result<(), KbError> {
    if found != KB_SCHEMA {
        return Err(KbError::Schema {
            path: path.to_string(),
            expected: KB_SCHEMA,
            found: found.to_string(),
        });
    }
    Ok(())
}
