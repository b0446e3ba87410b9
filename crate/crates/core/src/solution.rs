//! Turning a candidate set into an ordered, feature-decorated plan of
//! constituents that the realizer can linearize.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::config::ScoringConfig;
use crate::knowledge::{Gender, KnowledgeBase, LexSense, Mood, Number, Pos, SynCategory, SynNode, VarId};
use crate::pipeline::{CandidateSense, CandidateSet, Determiner, EVENT};
use crate::tmr::{is_inverse_property, normalized_time, RelativeTime, Tmr, TmrFrame};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Function {
    Subject,
    MainVerb,
    Auxiliary,
    DirectObject,
    /// A nominal argument outside subject and direct-object position.
    Object,
    PrepositionalPhrase,
    Preposition,
    NounHead,
    Determiner,
    Modifier,
    Adverb,
    FixedWord,
    /// An event realized inside another sense's syn-struc.
    Clause,
    Punctuation,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tense {
    Past,
    Present,
    Future,
    #[default]
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerbForm {
    Finite,
    Infinitive,
    Imperative,
    Participle,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Voice {
    #[default]
    Active,
    Passive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interrogative {
    #[default]
    None,
    YesNo,
    Wh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Nominative,
    Accusative,
    /// Determiner use: my, your, his.
    Possessive,
    /// Standalone use: mine, yours, his.
    Independent,
    Reflexive,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FeatureBundle {
    pub tense: Tense,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verb_form: Option<VerbForm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub number: Option<Number>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub person: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gender: Option<Gender>,
    pub voice: Voice,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub definiteness: Option<Determiner>,
    pub possessive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<Case>,
    pub interrogative: Interrogative,
    pub exclamative: bool,
    pub pronoun: bool,
    pub proper: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constituent {
    pub function: Function,
    /// Empty for phrasal constituents.
    pub lemma: String,
    pub features: FeatureBundle,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Constituent>,
    /// The TMR frame this constituent expresses, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
}

impl Constituent {
    pub fn leaf(function: Function, lemma: impl Into<String>) -> Self {
        Constituent {
            function,
            lemma: lemma.into(),
            features: FeatureBundle::default(),
            children: Vec::new(),
            frame: None,
        }
    }

    pub fn phrase(function: Function, children: Vec<Constituent>) -> Self {
        Constituent {
            function,
            lemma: String::new(),
            features: FeatureBundle::default(),
            children,
            frame: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty() && !self.lemma.is_empty()
    }

    /// Leaves in depth-first order.
    pub fn leaves(&self) -> Vec<&Constituent> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Constituent>) {
        if self.is_leaf() {
            out.push(self);
        }
        for c in &self.children {
            c.collect_leaves(out);
        }
    }

    pub fn find(&self, function: Function) -> Option<&Constituent> {
        self.children.iter().find(|c| c.function == function)
    }
}

/// A fully bound plan for one sentence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateSolution {
    pub clauses: Vec<Constituent>,
    pub voice: Voice,
    /// Whether optional words were left out.
    pub optional_omitted: bool,
    #[serde(skip)]
    pub source: CandidateSet,
}

impl CandidateSolution {
    pub fn leaves(&self) -> Vec<&Constituent> {
        self.clauses.iter().flat_map(|c| c.leaves()).collect()
    }

    /// Proper-noun lemmas used, for repetition checks.
    pub fn proper_names(&self) -> Vec<&str> {
        self.leaves()
            .into_iter()
            .filter(|c| c.features.proper)
            .map(|c| c.lemma.as_str())
            .collect()
    }

    /// Renders the plan as an indented tree.
    pub fn debug_tree(&self) -> String {
        fn walk(c: &Constituent, depth: usize, out: &mut String) {
            let f = serde_json::to_value(c.function).ok();
            let name = f.as_ref().and_then(|v| v.as_str()).unwrap_or("?");
            out.push_str(&"  ".repeat(depth));
            out.push_str(name);
            if !c.lemma.is_empty() {
                out.push_str(&format!(" \"{}\"", c.lemma));
            }
            let mut feats = Vec::new();
            if c.features.tense != Tense::None {
                feats.push(format!("{:?}", c.features.tense).to_lowercase());
            }
            if let Some(v) = c.features.verb_form {
                feats.push(format!("{v:?}").to_lowercase());
            }
            if let Some(d) = c.features.definiteness {
                feats.push(format!("{d:?}").to_lowercase());
            }
            if c.features.number == Some(Number::Plural) {
                feats.push("plural".into());
            }
            if c.features.voice == Voice::Passive {
                feats.push("passive".into());
            }
            if !feats.is_empty() {
                out.push_str(&format!(" [{}]", feats.join(" ")));
            }
            out.push('\n');
            for ch in &c.children {
                walk(ch, depth + 1, out);
            }
        }
        let mut out = String::new();
        for c in &self.clauses {
            walk(c, 0, &mut out);
        }
        out
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SolutionError {
    #[error("{sense}: {var} is obligatory but {frame} has no filler for it")]
    UnboundVariable { sense: String, var: VarId, frame: String },
    #[error("no choice for frame {0} in the candidate set")]
    MissingChoice(String),
    #[error("the TMR has no root frame")]
    NoRoot,
    #[error("the TMR has {0:?} as unconnected roots; one sentence per TMR is supported")]
    MultipleRoots(Vec<String>),
}

/// Frames that fill no other frame's (non-inverse) slot, in TMR order.
pub fn root_frames(tmr: &Tmr) -> Vec<&TmrFrame> {
    let filled: BTreeSet<&str> = tmr
        .frames
        .iter()
        .flat_map(|f| {
            f.slots
                .iter()
                .filter(|(k, _)| !is_inverse_property(k))
                .flat_map(|(_, v)| v.iter().filter_map(|x| x.as_instance()))
        })
        .collect();
    tmr.frames.iter().filter(|f| !filled.contains(f.id.as_str())).collect()
}

pub fn derive_tense(frame: &TmrFrame, tmr: &Tmr) -> Tense {
    match normalized_time(frame, tmr) {
        Some(RelativeTime::BeforeReference) => Tense::Past,
        Some(RelativeTime::AfterReference) => Tense::Future,
        Some(RelativeTime::AtReference) | None => Tense::Present,
    }
}

/// Passive iff the frame has no AGENT and the sense can passivize.
pub fn choose_voice(sense: &LexSense, frame: &TmrFrame) -> Voice {
    if !frame.slots.contains_key("AGENT") && sense.is_transitive() {
        Voice::Passive
    } else {
        Voice::Active
    }
}

struct Builder<'a> {
    set: &'a CandidateSet,
    tmr: &'a Tmr,
    kb: &'a KnowledgeBase,
    include_optional: bool,
}

/// Builds every solution for a set: the default one, plus voice and
/// optional-word variants when the config asks for them.
pub fn build_solutions(
    set: &CandidateSet,
    tmr: &Tmr,
    kb: &KnowledgeBase,
    config: &ScoringConfig,
) -> Result<Vec<CandidateSolution>, SolutionError> {
    let root = single_root(tmr)?;
    let mut variants = vec![(true, None)];
    if config.emit_optional_variants && has_optional_words(set) {
        variants.push((false, None));
    }
    if config.emit_voice_variants {
        if let Some(c) = set.head(&root.id) {
            if root.slots.contains_key("AGENT") && c.sense.is_transitive() {
                variants.push((true, Some(Voice::Passive)));
            }
        }
    }
    variants
        .into_iter()
        .map(|(opt, voice)| build_with(set, tmr, kb, root, opt, voice))
        .collect()
}

/// The default solution for a set.
pub fn build_solution(set: &CandidateSet, tmr: &Tmr, kb: &KnowledgeBase) -> Result<CandidateSolution, SolutionError> {
    let root = single_root(tmr)?;
    build_with(set, tmr, kb, root, true, None)
}

fn single_root(tmr: &Tmr) -> Result<&TmrFrame, SolutionError> {
    let roots = root_frames(tmr);
    match roots.len() {
        0 => Err(SolutionError::NoRoot),
        1 => Ok(roots[0]),
        _ => Err(SolutionError::MultipleRoots(
            roots.iter().map(|f| f.id.clone()).collect(),
        )),
    }
}

fn has_optional_words(set: &CandidateSet) -> bool {
    set.choices.values().any(|c| {
        c.sense
            .syn_struc
            .iter()
            .any(|n| n.opt && !n.root.is_empty() && n.var.is_none_or(|v| c.sense.sem_struc.binding_of(v).is_none()))
    })
}

fn build_with(
    set: &CandidateSet,
    tmr: &Tmr,
    kb: &KnowledgeBase,
    root: &TmrFrame,
    include_optional: bool,
    force_voice: Option<Voice>,
) -> Result<CandidateSolution, SolutionError> {
    let b = Builder {
        set,
        tmr,
        kb,
        include_optional,
    };
    let clause = if b.is_event(root) {
        b.clause(root, false, force_voice)?
    } else {
        let np = b.nominal(&root.id, Function::Subject)?;
        Constituent::phrase(Function::Clause, vec![np])
    };
    Ok(CandidateSolution {
        voice: clause.features.voice,
        clauses: vec![clause],
        optional_omitted: !include_optional,
        source: set.clone(),
    })
}

/// The surface word for a fixed syn-struc node: the example binding if it is
/// one of the allowed roots, else the first root.
pub fn fixed_word<'s>(sense: &'s LexSense, node: &'s SynNode) -> &'s str {
    if let Some(w) = node.var.and_then(|v| sense.example_word(v)) {
        if node.root.iter().any(|r| r.eq_ignore_ascii_case(w)) {
            return w;
        }
    }
    &node.root[0]
}

impl Builder<'_> {
    fn is_event(&self, frame: &TmrFrame) -> bool {
        frame.concept().is_ok_and(|c| self.kb.ontology.is_a_lenient(c, EVENT))
    }

    fn choice(&self, frame: &str) -> Result<&CandidateSense, SolutionError> {
        self.set
            .head(frame)
            .ok_or_else(|| SolutionError::MissingChoice(frame.to_string()))
    }

    fn clause(
        &self,
        frame: &TmrFrame,
        embedded: bool,
        force_voice: Option<Voice>,
    ) -> Result<Constituent, SolutionError> {
        let cand = self.choice(&frame.id)?;
        let s = &cand.sense;
        let voice = force_voice.unwrap_or_else(|| choose_voice(s, frame));
        let mut children = Vec::new();
        let mut pending_pp: Option<Vec<Constituent>> = None;
        let has_subject = s.syn_struc.iter().any(|n| self.is_subject_node(s, n));

        for node in &s.syn_struc {
            if node.cat == SynCategory::Pp {
                if let Some(pp) = pending_pp.take() {
                    children.extend(pp);
                }
                pending_pp = Some(Vec::new());
                continue;
            }
            let bound = node.var.and_then(|v| {
                if s.sem_struc.null_sem.contains(&v) {
                    None
                } else {
                    s.sem_struc.binding_of(v).map(|(p, _)| (v, p))
                }
            });
            let item = if node.var == Some(VarId::HEAD) {
                let function = match node.cat {
                    SynCategory::V => Function::MainVerb,
                    SynCategory::Adv => Function::Adverb,
                    SynCategory::Adj => Function::Modifier,
                    _ => Function::NounHead,
                };
                let mut c = Constituent::leaf(function, cand.lemma.clone());
                c.frame = Some(frame.id.clone());
                Some(c)
            } else if let Some((var, prop)) = bound {
                match frame.instance(prop) {
                    None if node.opt || (prop == "AGENT" && voice == Voice::Passive) => None,
                    None => {
                        return Err(SolutionError::UnboundVariable {
                            sense: s.id.clone(),
                            var,
                            frame: frame.id.clone(),
                        })
                    }
                    Some(_) if embedded && self.is_subject_node(s, node) => None,
                    Some(id) => {
                        let filler = self
                            .tmr
                            .frame(id)
                            .ok_or_else(|| SolutionError::MissingChoice(id.to_string()))?;
                        if self.is_event(filler) {
                            let mut c = self.clause(filler, true, None)?;
                            if !has_subject && children.iter().all(|c: &Constituent| c.function != Function::Auxiliary)
                            {
                                set_head_form(&mut c, VerbForm::Imperative);
                            }
                            Some(c)
                        } else {
                            let function = if self.is_subject_node(s, node) {
                                Function::Subject
                            } else if node.cat == SynCategory::DirectObject {
                                Function::DirectObject
                            } else {
                                Function::Object
                            };
                            Some(self.nominal(id, function)?)
                        }
                    }
                }
            } else if !node.root.is_empty() {
                if node.opt && !self.include_optional {
                    None
                } else {
                    let function = match node.cat {
                        SynCategory::Aux => Function::Auxiliary,
                        SynCategory::Prep => Function::Preposition,
                        SynCategory::Punct => Function::Punctuation,
                        SynCategory::Adv => Function::Adverb,
                        SynCategory::Det => Function::Determiner,
                        _ => Function::FixedWord,
                    };
                    Some(Constituent::leaf(function, fixed_word(s, node)))
                }
            } else {
                None
            };

            match pending_pp.as_mut() {
                Some(pp) => {
                    let is_prep = item.as_ref().is_some_and(|c| c.function == Function::Preposition);
                    match item {
                        Some(c) if is_prep => pp.push(c),
                        Some(c) => {
                            if pp.is_empty() {
                                children.push(c);
                                continue;
                            }
                            pp.push(c);
                            let parts = std::mem::take(pp);
                            pending_pp = None;
                            children.push(Constituent::phrase(Function::PrepositionalPhrase, parts));
                        }
                        None if bound.is_some() || node.var.is_some() && node.root.is_empty() => {
                            // the nominal is missing, so the whole phrase goes
                            pending_pp = None;
                        }
                        None => {}
                    }
                }
                None => children.extend(item),
            }
        }

        let mut clause = Constituent::phrase(Function::Clause, children);
        clause.frame = Some(frame.id.clone());
        clause.features.voice = voice;
        if embedded {
            clause.features.tense = Tense::None;
            clause.features.verb_form = Some(VerbForm::Infinitive);
            set_head_form(&mut clause, VerbForm::Infinitive);
        } else {
            clause.features.tense = derive_tense(frame, self.tmr);
            clause.features.verb_form = Some(VerbForm::Finite);
        }
        match s.mood {
            Mood::YesNo => clause.features.interrogative = Interrogative::YesNo,
            Mood::Exclamative => clause.features.exclamative = true,
            Mood::Imperative | Mood::Declarative => {}
        }
        Ok(clause)
    }

    fn is_subject_node(&self, s: &LexSense, node: &SynNode) -> bool {
        node.cat == SynCategory::Subj
            || node
                .var
                .filter(|v| !s.sem_struc.null_sem.contains(v))
                .and_then(|v| s.sem_struc.binding_of(v))
                .is_some_and(|(p, _)| p == "AGENT")
    }

    fn nominal(&self, id: &str, function: Function) -> Result<Constituent, SolutionError> {
        let cand = self.choice(id)?;
        let frame = self
            .tmr
            .frame(id)
            .ok_or_else(|| SolutionError::MissingChoice(id.to_string()))?;
        let number = if frame.is_plural() {
            Number::Plural
        } else {
            Number::Singular
        };
        let deco = cand.decoration.clone();
        let mut children = Vec::new();

        if let Some(p) = cand.sense.pronoun {
            let form = deco
                .as_ref()
                .and_then(|d| d.pronoun_form.clone())
                .unwrap_or_else(|| cand.lemma.clone());
            let mut head = Constituent::leaf(Function::NounHead, form);
            head.features.pronoun = true;
            head.features.person = Some(p.person);
            head.features.number = Some(p.number.unwrap_or(if p.person == 2 { Number::Plural } else { number }));
            head.features.gender = p.gender;
            head.frame = Some(id.to_string());
            children.push(head);
        } else {
            let det = deco.as_ref().map(|d| d.determiner).unwrap_or(Determiner::None);
            if matches!(det, Determiner::Indefinite | Determiner::Definite | Determiner::Some) {
                let lemma = match det {
                    Determiner::Definite => "the",
                    Determiner::Some => "some",
                    _ => "a",
                };
                let mut d = Constituent::leaf(Function::Determiner, lemma);
                d.features.definiteness = Some(det);
                children.push(d);
            }
            let mut mods: Vec<(&str, &CandidateSense)> = self.set.modifiers_of(id).collect();
            mods.sort_by_key(|(p, _)| *p);
            for (_, m) in mods {
                let mut c = Constituent::leaf(Function::Modifier, m.lemma.clone());
                c.frame = Some(id.to_string());
                children.push(c);
            }
            let mut head = Constituent::leaf(Function::NounHead, cand.lemma.clone());
            head.features.number = Some(number);
            head.features.person = Some(3);
            head.features.proper = cand.sense.pos == Pos::ProperNoun;
            head.features.definiteness = Some(det);
            head.frame = Some(id.to_string());
            children.push(head);
        }
        let mut np = Constituent::phrase(function, children);
        np.frame = Some(id.to_string());
        let head = np.children.last().expect("head pushed");
        np.features.number = head.features.number;
        np.features.person = head.features.person;
        np.features.gender = head.features.gender;
        Ok(np)
    }
}

fn set_head_form(clause: &mut Constituent, form: VerbForm) {
    if let Some(v) = clause.children.iter_mut().find(|c| c.function == Function::MainVerb) {
        v.features.verb_form = Some(form);
    }
    clause.features.verb_form = Some(form);
}
