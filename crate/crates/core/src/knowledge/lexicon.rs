use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ontology::{check_constraint, Constraint, Ontology};
use super::KbError;

/// A syn-struc variable, `$var0` .. `$varN`. `$var0` is the head word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub u8);

impl VarId {
    pub const HEAD: VarId = VarId(0);
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "$var{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pos {
    #[serde(rename = "v")]
    Verb,
    #[serde(rename = "n")]
    Noun,
    #[serde(rename = "propn")]
    ProperNoun,
    #[serde(rename = "pron")]
    Pronoun,
    #[serde(rename = "adj")]
    Adjective,
    #[serde(rename = "adv")]
    Adverb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynCategory {
    Subj,
    V,
    #[serde(rename = "directobject")]
    DirectObject,
    N,
    Pp,
    Prep,
    Aux,
    Adv,
    Adj,
    Det,
    Punct,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynNode {
    pub cat: SynCategory,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<VarId>,
    /// Required word forms, e.g. `(root (will would))`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub root: Vec<String>,
    /// The `(opt +)` flag.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub opt: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotValue {
    /// `^$varN`, optionally with a lexical constraint overriding the ontology.
    Bind {
        var: VarId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sem: Option<Constraint>,
    },
    /// Content the sense asserts without a syntactic realization.
    Constraint(Constraint),
    Scalar(f64),
    Literal(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemFrame {
    pub head: String,
    #[serde(default)]
    pub slots: BTreeMap<String, SlotValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub null_sem: Vec<VarId>,
}

impl SemFrame {
    pub fn binding_of(&self, var: VarId) -> Option<(&str, Option<&Constraint>)> {
        self.slots.iter().find_map(|(p, v)| match v {
            SlotValue::Bind { var: b, sem } if *b == var => Some((p.as_str(), sem.as_ref())),
            _ => None,
        })
    }

    pub fn var_for(&self, property: &str) -> Option<VarId> {
        match self.slots.get(property) {
            Some(SlotValue::Bind { var, .. }) => Some(*var),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mood {
    #[default]
    Declarative,
    YesNo,
    Imperative,
    Exclamative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    Singular,
    Plural,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
    Neuter,
}

/// Agreement features of a pronoun sense. `None` matches anything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PronounFeatures {
    pub person: u8,
    #[serde(default)]
    pub number: Option<Number>,
    #[serde(default)]
    pub gender: Option<Gender>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LexSense {
    pub id: String,
    pub headword: String,
    pub pos: Pos,
    #[serde(default)]
    pub definition: String,
    #[serde(default)]
    pub example: String,
    #[serde(default)]
    pub synonyms: Vec<String>,
    pub syn_struc: Vec<SynNode>,
    pub sem_struc: SemFrame,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example_bindings: Option<Vec<(String, VarId)>>,
    /// Mass nouns take no indefinite article.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub mass: bool,
    #[serde(default)]
    pub mood: Mood,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pronoun: Option<PronounFeatures>,
}

impl LexSense {
    pub fn syn_vars(&self) -> BTreeSet<VarId> {
        self.syn_struc.iter().filter_map(|n| n.var).collect()
    }

    pub fn node(&self, var: VarId) -> Option<&SynNode> {
        self.syn_struc.iter().find(|n| n.var == Some(var))
    }

    /// Senses whose syn-struc has dependents besides the head word.
    pub fn is_argument_taking(&self) -> bool {
        self.syn_struc.iter().any(|n| n.var.is_some_and(|v| v != VarId::HEAD))
    }

    pub fn is_modifier(&self) -> bool {
        matches!(self.pos, Pos::Adjective | Pos::Adverb) && !self.is_argument_taking_clause()
    }

    fn is_argument_taking_clause(&self) -> bool {
        self.syn_struc
            .iter()
            .any(|n| n.var != Some(VarId::HEAD) && matches!(n.cat, SynCategory::V | SynCategory::Subj))
    }

    /// Direct object bound to a case role: the sense can passivize.
    pub fn is_transitive(&self) -> bool {
        self.syn_struc.iter().any(|n| {
            n.cat == SynCategory::DirectObject && n.var.is_some_and(|v| self.sem_struc.binding_of(v).is_some())
        })
    }

    pub fn example_word(&self, var: VarId) -> Option<&str> {
        self.example_bindings
            .as_ref()?
            .iter()
            .find(|(_, v)| *v == var)
            .map(|(w, _)| w.as_str())
    }

    pub fn validate(&self, ontology: &Ontology) -> Result<(), KbError> {
        let bad = |reason: String| KbError::InvalidSense {
            sense: self.id.clone(),
            reason,
        };
        let heads = self.syn_struc.iter().filter(|n| n.var == Some(VarId::HEAD)).count();
        if heads != 1 {
            return Err(bad(format!("expected exactly one {} node, found {heads}", VarId::HEAD)));
        }
        let mut seen = BTreeSet::new();
        for n in &self.syn_struc {
            if let Some(v) = n.var {
                if !seen.insert(v) {
                    return Err(bad(format!("{v} appears on more than one syn-struc node")));
                }
            }
            if matches!(n.cat, SynCategory::Prep | SynCategory::Aux | SynCategory::Punct) && n.root.is_empty() {
                return Err(bad(format!(
                    "{:?} node {} has no root constraint",
                    n.cat,
                    fmt_var(n.var)
                )));
            }
        }
        let vars = self.syn_vars();
        let mut bound = BTreeSet::new();
        for (prop, v) in &self.sem_struc.slots {
            match v {
                SlotValue::Bind { var, sem } => {
                    if !vars.contains(var) {
                        return Err(bad(format!(
                            "{}/{var}: ^{var} in {prop} has no syn-struc node",
                            self.id
                        )));
                    }
                    bound.insert(*var);
                    if let Some(c) = sem {
                        check_constraint_on(ontology, c, &self.id)?;
                    }
                }
                SlotValue::Constraint(c) => check_constraint_on(ontology, c, &self.id)?,
                SlotValue::Scalar(x) if !(0.0..=1.0).contains(x) => {
                    return Err(bad(format!("{prop} value {x} outside [0, 1]")));
                }
                _ => {}
            }
        }
        for v in &self.sem_struc.null_sem {
            if !vars.contains(v) {
                return Err(bad(format!("{}/{v}: null-sem {v} has no syn-struc node", self.id)));
            }
            if bound.contains(v) {
                return Err(bad(format!("null-sem {v} also fills a case-role slot")));
            }
        }
        if !ontology.contains(&self.sem_struc.head) {
            return Err(KbError::DanglingConcept {
                owner: self.id.clone(),
                concept: self.sem_struc.head.clone(),
            });
        }
        if let Some(bindings) = &self.example_bindings {
            for (w, v) in bindings {
                if !vars.contains(v) && v.0 != 0 {
                    return Err(bad(format!("example binding {w}-{} names no syn-struc node", v.0)));
                }
            }
        }
        Ok(())
    }
}

fn fmt_var(v: Option<VarId>) -> String {
    v.map(|v| v.to_string()).unwrap_or_else(|| "(unnumbered)".into())
}

fn check_constraint_on(ontology: &Ontology, c: &Constraint, owner: &str) -> Result<(), KbError> {
    check_constraint(|n| ontology.contains(n), c, owner)
}

/// Validated senses indexed by id, head concept and headword.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    senses: BTreeMap<String, Arc<LexSense>>,
    by_head: BTreeMap<String, Vec<Arc<LexSense>>>,
    by_headword: BTreeMap<String, Vec<Arc<LexSense>>>,
}

impl Lexicon {
    pub fn new(senses: Vec<LexSense>, ontology: &Ontology) -> Result<Self, KbError> {
        let mut lex = Lexicon::default();
        for s in senses {
            s.validate(ontology)?;
            if lex.senses.contains_key(&s.id) {
                return Err(KbError::Duplicate {
                    kind: "sense",
                    id: s.id,
                });
            }
            let s = Arc::new(s);
            lex.senses.insert(s.id.clone(), s);
        }
        // BTreeMap iteration keeps each index list in sense-id order
        for s in lex.senses.values() {
            lex.by_head
                .entry(s.sem_struc.head.clone())
                .or_default()
                .push(Arc::clone(s));
            lex.by_headword
                .entry(s.headword.to_lowercase())
                .or_default()
                .push(Arc::clone(s));
        }
        Ok(lex)
    }

    pub fn len(&self) -> usize {
        self.senses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.senses.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Arc<LexSense>> {
        self.senses.get(id)
    }

    pub fn senses(&self) -> impl Iterator<Item = &Arc<LexSense>> {
        self.senses.values()
    }

    pub fn by_head(&self, concept: &str) -> &[Arc<LexSense>] {
        self.by_head.get(concept).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn by_headword(&self, word: &str) -> &[Arc<LexSense>] {
        self.by_headword
            .get(&word.to_lowercase())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}
