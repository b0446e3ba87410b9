//! English inflection and article choice driven by `ontogen-morph/1` tables.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::Deserialize;

use super::RealizeError;
use crate::knowledge::{Number, Pos};
use crate::solution::{Case, FeatureBundle, Tense, VerbForm};

pub const MORPH_SCHEMA: &str = "ontogen-morph/1";

const BUNDLED: &str = include_str!("../../data/morph.json");

#[derive(Clone, Debug, Deserialize)]
pub struct PronounParadigm {
    pub nominative: String,
    pub accusative: String,
    pub possessive: String,
    pub independent: String,
    pub reflexive: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct MorphTables {
    schema: String,
    /// lemma -> [past, past participle]
    pub irregular_verbs: BTreeMap<String, (String, String)>,
    pub irregular_plurals: BTreeMap<String, String>,
    pub pronouns: BTreeMap<String, PronounParadigm>,
    pub modals: BTreeSet<String>,
    /// Polysyllabic verbs stressed on the last syllable (prefer -> preferred).
    pub double_final_consonant: BTreeSet<String>,
    /// Words spelled with a consonant but taking "an".
    pub an_exceptions: BTreeSet<String>,
    /// Words spelled with a vowel but taking "a".
    pub a_exceptions: BTreeSet<String>,
}

impl MorphTables {
    pub fn from_json(text: &str) -> Result<Self, RealizeError> {
        let t: MorphTables = serde_json::from_str(text).map_err(|e| RealizeError::Tables(e.to_string()))?;
        if t.schema != MORPH_SCHEMA {
            return Err(RealizeError::Tables(format!(
                "expected schema \"{MORPH_SCHEMA}\", found \"{}\"",
                t.schema
            )));
        }
        for (lemma, p) in &t.pronouns {
            let forms = [
                &p.nominative,
                &p.accusative,
                &p.possessive,
                &p.independent,
                &p.reflexive,
            ];
            if forms.iter().any(|f| f.is_empty()) {
                return Err(RealizeError::Tables(format!(
                    "pronoun {lemma} has an incomplete paradigm"
                )));
            }
        }
        Ok(t)
    }

    /// The tables shipped with the crate.
    pub fn bundled() -> &'static MorphTables {
        static TABLES: OnceLock<MorphTables> = OnceLock::new();
        TABLES.get_or_init(|| MorphTables::from_json(BUNDLED).expect("bundled morphology tables are valid"))
    }

    pub fn is_modal(&self, lemma: &str) -> bool {
        self.modals.contains(&lemma.to_ascii_lowercase())
    }

    pub fn pronoun(&self, lemma: &str) -> Option<&PronounParadigm> {
        self.pronouns
            .get(lemma)
            .or_else(|| self.pronouns.get(&lemma.to_ascii_lowercase()))
    }

    pub fn past(&self, lemma: &str) -> String {
        match self.irregular_verbs.get(lemma) {
            Some((p, _)) => p.clone(),
            None => regular_ed(lemma, self),
        }
    }

    pub fn participle(&self, lemma: &str) -> String {
        match self.irregular_verbs.get(lemma) {
            Some((_, p)) => p.clone(),
            None => regular_ed(lemma, self),
        }
    }

    pub fn third_singular(&self, lemma: &str) -> String {
        match lemma {
            "be" => "is".into(),
            "have" => "has".into(),
            _ => sibilant_suffix(lemma),
        }
    }

    /// Present or past finite form agreeing with a subject.
    pub fn finite(&self, lemma: &str, tense: Tense, person: u8, number: Number) -> String {
        if self.is_modal(lemma) {
            return lemma.to_string();
        }
        let plural = number == Number::Plural;
        if lemma == "be" {
            let form = match (tense, person, plural) {
                (Tense::Past, 1 | 3, false) => "was",
                (Tense::Past, _, _) => "were",
                (_, 1, false) => "am",
                (_, 3, false) => "is",
                _ => "are",
            };
            return form.into();
        }
        match tense {
            Tense::Past => self.past(lemma),
            _ if person == 3 && !plural => self.third_singular(lemma),
            _ => lemma.to_string(),
        }
    }

    pub fn plural(&self, noun: &str) -> String {
        if let Some(p) = self.irregular_plurals.get(noun) {
            return p.clone();
        }
        sibilant_suffix(noun)
    }

    /// Attaches the possessive clitic; plurals ending in s take a bare apostrophe.
    pub fn possessive(&self, word: &str, plural: bool) -> String {
        if plural && word.ends_with('s') {
            format!("{word}'")
        } else {
            format!("{word}'s")
        }
    }

    pub fn pronoun_form(&self, lemma: &str, case: Case) -> String {
        match self.pronoun(lemma) {
            Some(p) => match case {
                Case::Nominative => p.nominative.clone(),
                Case::Accusative => p.accusative.clone(),
                Case::Possessive => p.possessive.clone(),
                Case::Independent => p.independent.clone(),
                Case::Reflexive => p.reflexive.clone(),
            },
            None => lemma.to_string(),
        }
    }

    /// "a" or "an" for the word that follows the article.
    pub fn indefinite_article(&self, next_word: &str) -> &'static str {
        let w = next_word
            .trim_matches(|c: char| !c.is_alphanumeric())
            .to_ascii_lowercase();
        if w.is_empty() {
            return "a";
        }
        let listed = |set: &BTreeSet<String>| {
            set.iter()
                .any(|e| w == *e || (e.len() >= 4 && w.starts_with(e.as_str())))
        };
        if listed(&self.an_exceptions) {
            return "an";
        }
        if listed(&self.a_exceptions) || w.starts_with("eu") {
            return "a";
        }
        match w.chars().next() {
            Some('a' | 'e' | 'i' | 'o' | 'u') => "an",
            _ => "a",
        }
    }

    /// Inflects `lemma` as `pos` according to the features.
    pub fn inflect(&self, lemma: &str, pos: Pos, f: &FeatureBundle) -> String {
        match pos {
            Pos::Verb => match f.verb_form {
                Some(VerbForm::Participle) => self.participle(lemma),
                Some(VerbForm::Finite) => {
                    let tense = if f.tense == Tense::Past {
                        Tense::Past
                    } else {
                        Tense::Present
                    };
                    self.finite(
                        lemma,
                        tense,
                        f.person.unwrap_or(3),
                        f.number.unwrap_or(Number::Singular),
                    )
                }
                _ => lemma.to_string(),
            },
            Pos::Noun => {
                let base = if f.number == Some(Number::Plural) {
                    self.plural(lemma)
                } else {
                    lemma.to_string()
                };
                if f.possessive {
                    self.possessive(&base, f.number == Some(Number::Plural))
                } else {
                    base
                }
            }
            Pos::ProperNoun => {
                if f.possessive {
                    self.possessive(lemma, false)
                } else {
                    lemma.to_string()
                }
            }
            Pos::Pronoun => {
                let case = if f.possessive {
                    Case::Possessive
                } else {
                    f.case.unwrap_or(Case::Nominative)
                };
                self.pronoun_form(lemma, case)
            }
            Pos::Adjective | Pos::Adverb => lemma.to_string(),
        }
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn sibilant_suffix(w: &str) -> String {
    let chars: Vec<char> = w.chars().collect();
    let n = chars.len();
    if w.ends_with('s') || w.ends_with('x') || w.ends_with('z') || w.ends_with("ch") || w.ends_with("sh") {
        return format!("{w}es");
    }
    if n >= 2 && chars[n - 1] == 'y' && !is_vowel(chars[n - 2]) {
        return format!("{}ies", &w[..w.len() - 1]);
    }
    if n >= 2
        && chars[n - 1] == 'o'
        && !is_vowel(chars[n - 2])
        && matches!(w, "go" | "do" | "echo" | "veto" | "torpedo")
    {
        return format!("{w}es");
    }
    format!("{w}s")
}

fn syllables(w: &str) -> usize {
    let mut count = 0;
    let mut prev = false;
    for c in w.chars() {
        let v = is_vowel(c) || c == 'y';
        if v && !prev {
            count += 1;
        }
        prev = v;
    }
    count.max(1)
}

fn doubles_final(w: &str, tables: &MorphTables) -> bool {
    if tables.double_final_consonant.contains(w) {
        return true;
    }
    let c: Vec<char> = w.chars().collect();
    let n = c.len();
    n >= 3
        && syllables(w) == 1
        && !is_vowel(c[n - 1])
        && !matches!(c[n - 1], 'w' | 'x' | 'y')
        && is_vowel(c[n - 2])
        && !is_vowel(c[n - 3])
        && !(c[n - 3] == 'u' && n >= 4 && c[n - 4] == 'q')
}

fn regular_ed(w: &str, tables: &MorphTables) -> String {
    let c: Vec<char> = w.chars().collect();
    let n = c.len();
    if w.ends_with('e') {
        return format!("{w}d");
    }
    if n >= 2 && c[n - 1] == 'y' && !is_vowel(c[n - 2]) {
        return format!("{}ied", &w[..w.len() - 1]);
    }
    if doubles_final(w, tables) {
        return format!("{w}{}ed", c[n - 1]);
    }
    format!("{w}ed")
}
