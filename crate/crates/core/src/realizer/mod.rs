//! Surface realization: linearizes a solution into an English sentence with
//! inflection, agreement, articles, capitalization and punctuation.

mod morph;

use serde::Serialize;
use thiserror::Error;

pub use morph::{MorphTables, PronounParadigm, MORPH_SCHEMA};

use crate::knowledge::{Number, Pos};
use crate::solution::{
    CandidateSolution, Case, Constituent, FeatureBundle, Function, Interrogative, Tense, VerbForm, Voice,
};

#[derive(Debug, Error, PartialEq)]
pub enum RealizeError {
    #[error("the solution has no words to realize")]
    EmptySolution,
    #[error("invalid morphology tables: {0}")]
    Tables(String),
}

/// One output word and where it came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealizedToken {
    pub text: String,
    /// The solution lemma this word inflects; `None` for words the realizer
    /// inserts (passive "be", "by", future "will") and terminal punctuation.
    pub lemma: Option<String>,
    /// Person and number a finite verb was inflected for.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<(u8, Number)>,
    pub punctuation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Realization {
    pub text: String,
    pub tokens: Vec<RealizedToken>,
}

impl Realization {
    /// Word tokens (no punctuation), as written in the sentence.
    pub fn words(&self) -> Vec<&str> {
        self.tokens
            .iter()
            .filter(|t| !t.punctuation)
            .map(|t| t.text.as_str())
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum AuxState {
    None,
    Modal,
    Be,
    Have,
    Do,
}

struct Agreement {
    person: u8,
    number: Number,
}

struct Linearizer<'a> {
    morph: &'a MorphTables,
    tokens: Vec<RealizedToken>,
}

pub fn realize(solution: &CandidateSolution) -> Result<Realization, RealizeError> {
    realize_with(solution, MorphTables::bundled())
}

pub fn realize_with(solution: &CandidateSolution, morph: &MorphTables) -> Result<Realization, RealizeError> {
    if solution.leaves().is_empty() {
        return Err(RealizeError::EmptySolution);
    }
    let mut lin = Linearizer {
        morph,
        tokens: Vec::new(),
    };
    let mut terminal = ".";
    for (i, clause) in solution.clauses.iter().enumerate() {
        if i == 0 {
            if clause.features.interrogative != Interrogative::None {
                terminal = "?";
            } else if clause.features.exclamative {
                terminal = "!";
            }
        }
        lin.clause(clause);
    }
    lin.tokens.push(RealizedToken {
        text: terminal.into(),
        lemma: None,
        agreement: None,
        punctuation: true,
    });
    if let Some(first) = lin.tokens.iter_mut().find(|t| !t.punctuation) {
        first.text = capitalize(&first.text);
    }
    let mut text = String::new();
    for t in &lin.tokens {
        if !text.is_empty() && !t.punctuation {
            text.push(' ');
        }
        text.push_str(&t.text);
    }
    Ok(Realization {
        text,
        tokens: lin.tokens,
    })
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Moves the direct object into subject position, adds "be" before the
/// main verb and turns an expressed agent into a by-phrase. Inserted words
/// carry the passive voice feature.
fn passivize(clause: &Constituent) -> Vec<Constituent> {
    let mut children = clause.children.clone();
    let agent = children
        .iter()
        .position(|c| c.function == Function::Subject)
        .map(|i| children.remove(i));
    let inserted = |function, lemma| {
        let mut c = Constituent::leaf(function, lemma);
        c.features.voice = Voice::Passive;
        c
    };
    if let Some(i) = children.iter().position(|c| c.function == Function::DirectObject) {
        let mut patient = children.remove(i);
        patient.function = Function::Subject;
        let at = children
            .iter()
            .position(|c| matches!(c.function, Function::MainVerb | Function::Auxiliary))
            .unwrap_or(0);
        children.insert(at, patient);
    }
    if let Some(v) = children.iter().position(|c| c.function == Function::MainVerb) {
        let aux_at = children[..v]
            .iter()
            .rposition(|c| c.function == Function::Auxiliary)
            .map(|a| a + 1)
            .unwrap_or(v);
        children.insert(aux_at, inserted(Function::Auxiliary, "be"));
    }
    if let Some(mut agent) = agent {
        agent.function = Function::Object;
        let by = inserted(Function::Preposition, "by");
        children.push(Constituent::phrase(Function::PrepositionalPhrase, vec![by, agent]));
    }
    children
}

impl Linearizer<'_> {
    fn push(&mut self, text: String, lemma: Option<&str>) {
        self.tokens.push(RealizedToken {
            text,
            lemma: lemma.map(str::to_string),
            agreement: None,
            punctuation: false,
        });
    }

    fn clause(&mut self, clause: &Constituent) {
        let children = if clause.features.voice == Voice::Passive {
            passivize(clause)
        } else {
            clause.children.clone()
        };
        let subject = children.iter().find(|c| c.function == Function::Subject);
        let agr = Agreement {
            person: subject.and_then(|s| s.features.person).unwrap_or(3),
            number: subject.and_then(|s| s.features.number).unwrap_or(Number::Singular),
        };
        let form = clause.features.verb_form.unwrap_or(VerbForm::Finite);
        let finite_clause = form == VerbForm::Finite;
        let mut tense = clause.features.tense;
        let has_modal = children
            .iter()
            .any(|c| c.function == Function::Auxiliary && self.morph.is_modal(&c.lemma));
        let mut state = AuxState::None;
        let mut finite_done = !finite_clause;

        for c in &children {
            match c.function {
                Function::Subject => self.nominal(c, Case::Nominative),
                Function::DirectObject | Function::Object => self.nominal(c, Case::Accusative),
                Function::PrepositionalPhrase => {
                    for part in &c.children {
                        match part.function {
                            Function::Preposition => {
                                let lemma = (part.features.voice != Voice::Passive).then_some(part.lemma.as_str());
                                self.push(part.lemma.clone(), lemma);
                            }
                            _ => self.nominal(part, Case::Accusative),
                        }
                    }
                }
                Function::Clause => self.clause(c),
                Function::Auxiliary => {
                    let lemma = c.lemma.as_str();
                    let realizer_added = c.features.voice == Voice::Passive;
                    let mut agreement = None;
                    let text = if self.morph.is_modal(lemma) {
                        finite_done = true;
                        state = AuxState::Modal;
                        lemma.to_string()
                    } else {
                        let t = if state == AuxState::Modal {
                            lemma.to_string()
                        } else if matches!(state, AuxState::Be | AuxState::Have) {
                            self.morph.participle(lemma)
                        } else if !finite_done {
                            finite_done = true;
                            agreement = Some((agr.person, agr.number));
                            self.finite_token(lemma, tense, &agr)
                        } else {
                            lemma.to_string()
                        };
                        state = match lemma {
                            "be" => AuxState::Be,
                            "have" => AuxState::Have,
                            "do" => AuxState::Do,
                            _ => AuxState::None,
                        };
                        t
                    };
                    self.tokens.push(RealizedToken {
                        text,
                        lemma: (!realizer_added).then(|| lemma.to_string()),
                        agreement,
                        punctuation: false,
                    });
                }
                Function::MainVerb => {
                    if finite_clause && tense == Tense::Future && !has_modal && state == AuxState::None && !finite_done
                    {
                        self.push("will".into(), None);
                        state = AuxState::Modal;
                        finite_done = true;
                        tense = Tense::Present;
                    }
                    let lemma = c.lemma.as_str();
                    let mut agreement = None;
                    let text = match state {
                        AuxState::Modal | AuxState::Do => lemma.to_string(),
                        AuxState::Be | AuxState::Have => self.morph.participle(lemma),
                        AuxState::None if !finite_done => {
                            finite_done = true;
                            agreement = Some((agr.person, agr.number));
                            self.morph.finite(lemma, tense, agr.person, agr.number)
                        }
                        AuxState::None => match c.features.verb_form {
                            Some(VerbForm::Participle) => self.morph.participle(lemma),
                            _ => lemma.to_string(),
                        },
                    };
                    state = AuxState::None;
                    self.tokens.push(RealizedToken {
                        text,
                        lemma: Some(lemma.to_string()),
                        agreement,
                        punctuation: false,
                    });
                }
                Function::Punctuation => self.tokens.push(RealizedToken {
                    text: c.lemma.clone(),
                    lemma: Some(c.lemma.clone()),
                    agreement: None,
                    punctuation: true,
                }),
                Function::NounHead | Function::Determiner | Function::Modifier if !c.children.is_empty() => {
                    self.nominal(c, Case::Accusative)
                }
                _ => {
                    if c.children.is_empty() {
                        self.push(c.lemma.clone(), Some(&c.lemma));
                    } else {
                        self.nominal(c, Case::Accusative);
                    }
                }
            }
        }
    }

    fn finite_token(&mut self, lemma: &str, tense: Tense, agr: &Agreement) -> String {
        let t = if tense == Tense::Past {
            Tense::Past
        } else {
            Tense::Present
        };
        self.morph.finite(lemma, t, agr.person, agr.number)
    }

    fn nominal(&mut self, np: &Constituent, case: Case) {
        if np.is_leaf() {
            let pos = if np.features.pronoun { Pos::Pronoun } else { Pos::Noun };
            let f = FeatureBundle {
                case: Some(case),
                ..np.features.clone()
            };
            let text = self.morph.inflect(&np.lemma, pos, &f);
            self.push(text, Some(&np.lemma));
            return;
        }
        let mut pending_article: Option<usize> = None;
        for part in &np.children {
            match part.function {
                Function::Determiner => {
                    if part.lemma == "a" || part.lemma == "an" {
                        pending_article = Some(self.tokens.len());
                    }
                    self.push(part.lemma.clone(), Some(&part.lemma));
                    continue;
                }
                Function::NounHead => {
                    let pos = if part.features.pronoun {
                        Pos::Pronoun
                    } else if part.features.proper {
                        Pos::ProperNoun
                    } else {
                        Pos::Noun
                    };
                    let f = FeatureBundle {
                        case: Some(case),
                        possessive: part.features.possessive || np.features.possessive,
                        ..part.features.clone()
                    };
                    let text = self.morph.inflect(&part.lemma, pos, &f);
                    self.push(text, Some(&part.lemma));
                }
                _ if !part.children.is_empty() => self.nominal(part, case),
                _ => self.push(part.lemma.clone(), Some(&part.lemma)),
            }
            if let Some(at) = pending_article.take() {
                let next = self.tokens.last().map(|t| t.text.clone()).unwrap_or_default();
                self.tokens[at].text = self.morph.indefinite_article(&next).to_string();
            }
        }
    }
}
