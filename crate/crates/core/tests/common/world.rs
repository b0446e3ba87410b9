//! Small random knowledge bases and TMRs for property checks.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ontogen::config::{Config, WeightConfig};
use ontogen::generate::{generate, GenerateOptions};
use ontogen::knowledge::KnowledgeBase;
use ontogen::pipeline::{
    aggregate_sets, extract_candidates, manage_reference, run_lexical_selection, DiscourseContext, PipelineError,
};
use ontogen::realizer::realize;
use ontogen::selector::{rank, Candidate, FrequencyTable};
use ontogen::solution::build_solution;
use ontogen::tmr::{parse_tmr, Tmr};

const NOUNS: [&str; 12] = [
    "box", "cat", "lamp", "rock", "tree", "apple", "hour", "umbrella", "cup", "owl", "engine", "kite",
];
const VERBS: [&str; 10] = [
    "push", "pull", "lift", "drop", "kick", "grab", "carry", "hold", "move", "stop",
];
const SYNONYMS: [&str; 6] = ["shove", "tug", "raise", "toss", "nudge", "seize"];

pub struct World {
    pub seed: u64,
    pub kb: KnowledgeBase,
    pub tmr: Tmr,
    pub concepts: usize,
    pub senses: usize,
}

fn concept(name: &str, parent: &str, slots: Value) -> Value {
    json!({"name": name, "parents": [parent], "slots": slots})
}

impl World {
    /// At most 10 concepts and 15 senses.
    pub fn generate(seed: u64) -> World {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut concepts = vec![
            json!({"name": "ALL", "parents": []}),
            concept(
                "EVENT",
                "ALL",
                json!({"AGENT": {"sem": {"concept": "OBJECT"}}, "THEME": {"sem": {"concept": "OBJECT"}}}),
            ),
            concept("OBJECT", "ALL", json!({})),
        ];
        let n_obj = rng.gen_range(1..=4);
        let objects: Vec<String> = ["OA", "OB", "OC", "OD"][..n_obj]
            .iter()
            .map(|s| s.to_string())
            .collect();
        for (i, o) in objects.iter().enumerate() {
            let parent = if i == 0 || rng.gen_bool(0.5) {
                "OBJECT".to_string()
            } else {
                objects[rng.gen_range(0..i)].clone()
            };
            concepts.push(concept(o, &parent, json!({})));
        }
        let n_evt = rng.gen_range(1..=3);
        let events: Vec<String> = ["EA", "EB", "EC"][..n_evt].iter().map(|s| s.to_string()).collect();
        for e in &events {
            let slots = if rng.gen_bool(0.4) {
                json!({"AGENT": {"sem": {"concept": objects.choose(&mut rng).unwrap()}}})
            } else {
                json!({})
            };
            concepts.push(concept(e, "EVENT", slots));
        }

        let mut nouns: Vec<&str> = NOUNS.to_vec();
        nouns.shuffle(&mut rng);
        let mut verbs: Vec<&str> = VERBS.to_vec();
        verbs.shuffle(&mut rng);
        let mut senses = Vec::new();
        for o in &objects {
            for k in 0..rng.gen_range(1..=2) {
                let w = nouns.pop().unwrap();
                let mut slots = json!({});
                if k > 0 && rng.gen_bool(0.5) {
                    slots = json!({"COLOR": {"literal": "red"}});
                }
                senses.push(json!({
                    "id": format!("{w}-n1"), "headword": w, "pos": "n",
                    "syn_struc": [{"cat": "n", "var": 0}],
                    "sem_struc": {"head": o, "slots": slots}
                }));
            }
        }
        for e in &events {
            for _ in 0..rng.gen_range(1..=2) {
                let w = verbs.pop().unwrap();
                let transitive = rng.gen_bool(0.7);
                let mut syn = vec![json!({"cat": "subj", "var": 1}), json!({"cat": "v", "var": 0})];
                let mut slots = serde_json::Map::new();
                slots.insert("AGENT".into(), json!({"bind": {"var": 1}}));
                if transitive {
                    syn.push(json!({"cat": "directobject", "var": 2}));
                    let theme = if rng.gen_bool(0.4) {
                        json!({"bind": {"var": 2, "sem": {"concept": objects.choose(&mut rng).unwrap()}}})
                    } else {
                        json!({"bind": {"var": 2}})
                    };
                    slots.insert("THEME".into(), theme);
                }
                let n_syn = rng.gen_range(0..=2);
                let synonyms: Vec<&str> = SYNONYMS.choose_multiple(&mut rng, n_syn).copied().collect();
                senses.push(json!({
                    "id": format!("{w}-v1"), "headword": w, "pos": "v", "synonyms": synonyms,
                    "syn_struc": syn,
                    "sem_struc": {"head": e, "slots": slots}
                }));
            }
        }
        let n_senses = senses.len();
        let n_concepts = concepts.len();
        let ontology = json!({"schema": "ontogen-kb/1", "concepts": concepts}).to_string();
        let lexicon = json!({"schema": "ontogen-kb/1", "senses": senses}).to_string();
        let memory = json!({"schema": "ontogen-kb/1", "instances": []}).to_string();
        let kb = KnowledgeBase::from_json(&ontology, &lexicon, &memory).expect("random KB is valid");

        let event = format!("{}-1", events.choose(&mut rng).unwrap());
        let agent = format!("{}-1", objects.choose(&mut rng).unwrap());
        let mut ev_slots = serde_json::Map::new();
        ev_slots.insert("AGENT".into(), json!({"instance": agent}));
        let mut frames = vec![];
        let mut agent_slots = json!({"AGENT-OF": {"instance": event}});
        if rng.gen_bool(0.3) {
            agent_slots["CARDINALITY"] = json!({"count": 2});
        }
        frames.push(json!({"id": agent, "slots": agent_slots}));
        if rng.gen_bool(0.8) {
            let theme = format!("{}-2", objects.choose(&mut rng).unwrap());
            ev_slots.insert("THEME".into(), json!({"instance": theme}));
            frames.push(json!({"id": theme, "slots": {"THEME-OF": {"instance": event}}}));
        }
        match rng.gen_range(0..4) {
            0 => {}
            1 => {
                ev_slots.insert("TIME".into(), json!({"relative": "before-reference"}));
            }
            2 => {
                ev_slots.insert("TIME".into(), json!({"relative": "after-reference"}));
            }
            _ => {
                ev_slots.insert("TIME".into(), json!({"relative": "at-reference"}));
            }
        }
        frames.insert(0, json!({"id": event, "slots": ev_slots}));
        let tmr =
            parse_tmr(&json!({"schema": "ontogen-tmr/1", "frames": frames}).to_string()).expect("random TMR is valid");
        World {
            seed,
            kb,
            tmr,
            concepts: n_concepts,
            senses: n_senses,
        }
    }

    pub fn candidates(&self) -> Vec<Candidate> {
        let Ok(sel) = run_lexical_selection(
            &self.tmr,
            &self.kb,
            &DiscourseContext::from_tmr(&self.tmr),
            &Config::default().scoring,
        ) else {
            return Vec::new();
        };
        sel.sets
            .iter()
            .filter_map(|s| build_solution(s, &sel.tmr, &self.kb).ok())
            .filter_map(|sol| realize(&sol).ok().map(|r| Candidate::new(r, sol)))
            .collect()
    }

    pub fn random_weights(&self) -> (WeightConfig, FrequencyTable) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed);
        let w = WeightConfig {
            pipeline_score_weight: rng.gen_range(0..=8) as f64 * 0.5,
            frequency_weight: rng.gen_range(0..=40) as f64 * 0.5,
            repetition_penalty: rng.gen_range(0..=30) as f64,
            length_tie_break: rng.gen_range(0..=4) as f64 * 0.25,
            lemma_frequency: rng.gen_bool(0.5),
        };
        let mut f = FrequencyTable::uniform(0.5);
        for v in VERBS.iter().chain(SYNONYMS.iter()) {
            if rng.gen_bool(0.5) {
                f.entries.insert(v.to_string(), rng.gen_range(0..=20) as f64 / 20.0);
            }
        }
        (w, f)
    }
}

fn fail(world: &World, msg: String) -> Result<(), String> {
    Err(format!("seed {}: {msg}", world.seed))
}

/// The aggregated set count is the product of per-choice candidate counts.
pub fn check_cardinality(w: &World) -> Result<(), String> {
    let Ok(c) = extract_candidates(&w.tmr, &w.kb) else {
        return Ok(());
    };
    let Ok(r) = manage_reference(c, &w.tmr, &w.kb, &DiscourseContext::from_tmr(&w.tmr)) else {
        return Ok(());
    };
    let expected: usize = r.candidates.values().map(Vec::len).product();
    let got = aggregate_sets(&r.candidates, usize::MAX).sets.len();
    if got != expected {
        return fail(w, format!("{got} sets, expected {expected}"));
    }
    let capped = aggregate_sets(&r.candidates, 1);
    if expected > 1 && (!capped.truncated || capped.sets.len() != 1) {
        return fail(w, "cap not honoured".into());
    }
    Ok(())
}

/// Every surviving set's score equals the sum of its ledger.
pub fn check_ledger(w: &World) -> Result<(), String> {
    match run_lexical_selection(
        &w.tmr,
        &w.kb,
        &DiscourseContext::from_tmr(&w.tmr),
        &Config::default().scoring,
    ) {
        Ok(sel) => {
            for s in &sel.sets {
                if s.score != s.ledger_sum() {
                    return fail(
                        w,
                        format!("{}: score {} but ledger sums to {}", s.label(), s.score, s.ledger_sum()),
                    );
                }
            }
            Ok(())
        }
        Err(PipelineError::AllSetsPruned { .. }) | Err(PipelineError::NoRealizableSense { .. }) => Ok(()),
        Err(e) => fail(w, format!("unexpected error {e}")),
    }
}

fn identity(c: &Candidate) -> (String, String) {
    (c.realization.text.clone(), c.solution.source.label())
}

/// `rank` returns a permutation of its input, whatever the input order.
pub fn check_rank_permutation(w: &World) -> Result<(), String> {
    let mut cands = w.candidates();
    if cands.is_empty() {
        return Ok(());
    }
    let (weights, freq) = w.random_weights();
    let history: Vec<String> = Vec::new();
    let first = rank(&cands, &history, &weights, &freq).map_err(|e| e.to_string())?;
    let mut input: Vec<_> = cands.iter().map(identity).collect();
    let mut output: Vec<_> = first.iter().map(|s| identity(&s.candidate)).collect();
    input.sort();
    output.sort();
    if input != output {
        return fail(w, "rank output is not a permutation of its input".into());
    }
    for pair in first.windows(2) {
        if pair[0].score < pair[1].score {
            return fail(w, "scores not descending".into());
        }
    }
    for s in &first {
        if s.explained_total() != s.score {
            return fail(
                w,
                format!(
                    "{}: explanation sums to {} not {}",
                    s.text,
                    s.explained_total(),
                    s.score
                ),
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(w.seed);
    cands.shuffle(&mut rng);
    let again = rank(&cands, &history, &weights, &freq).map_err(|e| e.to_string())?;
    let a: Vec<_> = first.iter().map(|s| identity(&s.candidate)).collect();
    let b: Vec<_> = again.iter().map(|s| identity(&s.candidate)).collect();
    if a != b {
        return fail(w, "order depends on input order".into());
    }
    Ok(())
}

/// Scaling all weights by a power of two leaves the order unchanged.
pub fn check_scaling(w: &World, exponent: i32) -> Result<(), String> {
    let cands = w.candidates();
    if cands.is_empty() {
        return Ok(());
    }
    let (weights, freq) = w.random_weights();
    let k = 2f64.powi(exponent);
    let history: Vec<String> = Vec::new();
    let a = rank(&cands, &history, &weights, &freq).map_err(|e| e.to_string())?;
    let b = rank(&cands, &history, &weights.scaled(k), &freq).map_err(|e| e.to_string())?;
    let ia: Vec<_> = a.iter().map(|s| identity(&s.candidate)).collect();
    let ib: Vec<_> = b.iter().map(|s| identity(&s.candidate)).collect();
    if ia != ib {
        return fail(w, format!("order changed under scaling by {k}"));
    }
    Ok(())
}

/// Two runs on the same inputs give byte-identical reports.
pub fn check_determinism(w: &World) -> Result<(), String> {
    let render = || {
        let again = World::generate(w.seed);
        match generate(
            &again.tmr,
            &again.kb,
            &Config::default(),
            &FrequencyTable::uniform(0.5),
            GenerateOptions::default(),
        ) {
            Ok(r) => serde_json::to_string(&r).expect("report serializes"),
            Err(e) => format!("error: {e} {:?}", e.trace().map(|t| t.to_string())),
        }
    };
    if render() != render() {
        return fail(w, "two runs differ".into());
    }
    Ok(())
}

/// Realized words come from the solution's lemmas, one for one, and finite
/// verbs agree with their subjects.
pub fn check_token_conservation(w: &World) -> Result<(), String> {
    if let Ok(sel) = run_lexical_selection(
        &w.tmr,
        &w.kb,
        &DiscourseContext::from_tmr(&w.tmr),
        &Config::default().scoring,
    ) {
        for s in &sel.sets {
            if let Err(e) = build_solution(s, &sel.tmr, &w.kb) {
                return fail(w, format!("{}: survivor has no solution: {e}", s.label()));
            }
        }
    }
    for c in w.candidates() {
        let mut planned: BTreeMap<String, i32> = BTreeMap::new();
        for leaf in c.solution.leaves() {
            *planned.entry(leaf.lemma.clone()).or_default() += 1;
        }
        let mut realized: BTreeMap<String, i32> = BTreeMap::new();
        for t in &c.realization.tokens {
            if let Some(l) = &t.lemma {
                *realized.entry(l.clone()).or_default() += 1;
            }
        }
        if planned != realized {
            return fail(
                w,
                format!("{}: planned {planned:?}, realized {realized:?}", c.realization.text),
            );
        }
        let allowed = allowed_lemmas(&c);
        for l in planned.keys() {
            if !allowed.contains(l) {
                return fail(w, format!("{}: lemma {l} has no source", c.realization.text));
            }
        }
        let subject = c.solution.clauses[0]
            .find(ontogen::solution::Function::Subject)
            .map(|s| {
                (
                    s.features.person.unwrap_or(3),
                    s.features.number.unwrap_or(ontogen::knowledge::Number::Singular),
                )
            });
        for t in &c.realization.tokens {
            if let (Some(agr), Some(subj)) = (t.agreement, subject) {
                if agr != subj {
                    return fail(
                        w,
                        format!("{}: verb agrees with {agr:?}, subject is {subj:?}", c.realization.text),
                    );
                }
            }
        }
    }
    Ok(())
}

/// Headwords, synonyms, fixed roots and example words of the chosen senses, plus determiners.
fn allowed_lemmas(c: &Candidate) -> std::collections::BTreeSet<String> {
    let mut out: std::collections::BTreeSet<String> =
        ["a", "an", "the", "some"].iter().map(|s| s.to_string()).collect();
    for cand in c.solution.source.choices.values() {
        out.insert(cand.lemma.clone());
        out.insert(cand.sense.headword.clone());
        out.extend(cand.sense.synonyms.iter().cloned());
        for n in &cand.sense.syn_struc {
            out.extend(n.root.iter().cloned());
        }
        for (w, _) in cand.sense.example_bindings.iter().flatten() {
            out.insert(w.clone());
        }
    }
    out
}
