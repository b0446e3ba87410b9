mod common;

use std::collections::BTreeSet;

use common::{kb, run_with, tmr};
use ontogen::config::Config;
use ontogen::knowledge::{Number, Pos};
use ontogen::realizer::{realize, MorphTables, RealizeError};
use ontogen::selector::FrequencyTable;
use ontogen::solution::{
    build_solution, choose_voice, derive_tense, fixed_word, root_frames, CandidateSolution, FeatureBundle, Tense,
    VerbForm, Voice,
};
use ontogen::tmr::{parse_tmr, Filler, TmrFrame};

const REGULAR: [&str; 50] = [
    "walk",
    "jump",
    "play",
    "fix",
    "help",
    "paint",
    "attach",
    "fasten",
    "secure",
    "moor",
    "skewer",
    "affix",
    "call",
    "open",
    "answer",
    "cook",
    "clean",
    "wash",
    "watch",
    "listen",
    "visit",
    "start",
    "finish",
    "kiss",
    "push",
    "touch",
    "carry",
    "try",
    "study",
    "worry",
    "marry",
    "cry",
    "stop",
    "plan",
    "drop",
    "hop",
    "like",
    "love",
    "hope",
    "smile",
    "dance",
    "move",
    "agree",
    "appreciate",
    "request",
    "order",
    "hunt",
    "rain",
    "look",
    "want",
];

/// Every lemma a regular past form could have come from.
fn deinflect_past(form: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if let Some(stem) = form.strip_suffix("ied") {
        out.insert(format!("{stem}y"));
    }
    if let Some(stem) = form.strip_suffix("ed") {
        out.insert(stem.to_string());
        let b = stem.as_bytes();
        if b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2] {
            out.insert(stem[..stem.len() - 1].to_string());
        }
    }
    if let Some(stem) = form.strip_suffix('d') {
        out.insert(stem.to_string());
    }
    out
}

fn deinflect_third(form: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if let Some(stem) = form.strip_suffix("ies") {
        out.insert(format!("{stem}y"));
    }
    if let Some(stem) = form.strip_suffix("es") {
        out.insert(stem.to_string());
    }
    if let Some(stem) = form.strip_suffix('s') {
        out.insert(stem.to_string());
    }
    out
}

#[test]
fn regular_verbs_round_trip_through_the_deinflector() {
    let m = MorphTables::bundled();
    for lemma in REGULAR {
        let past = m.past(lemma);
        assert!(past.ends_with("ed"), "{lemma} -> {past}");
        assert!(deinflect_past(&past).contains(lemma), "{lemma} -> {past}");
        assert_eq!(m.participle(lemma), past);
        let third = m.third_singular(lemma);
        assert!(deinflect_third(&third).contains(lemma), "{lemma} -> {third}");
        assert_eq!(m.finite(lemma, Tense::Present, 1, Number::Singular), lemma);
        assert_eq!(m.finite(lemma, Tense::Present, 3, Number::Plural), lemma);
        assert_eq!(m.finite(lemma, Tense::Past, 3, Number::Singular), past);
    }
}

#[test]
fn spelling_rules() {
    let m = MorphTables::bundled();
    let cases = [
        ("stop", "stopped"),
        ("try", "tried"),
        ("like", "liked"),
        ("play", "played"),
        ("visit", "visited"),
        ("agree", "agreed"),
    ];
    for (lemma, past) in cases {
        assert_eq!(m.past(lemma), past);
    }
    assert_eq!(m.third_singular("watch"), "watches");
    assert_eq!(m.third_singular("carry"), "carries");
    assert_eq!(m.third_singular("go"), "goes");
    assert_eq!(m.past("hear"), "heard");
    assert_eq!(m.plural("child"), "children");
    assert_eq!(m.plural("box"), "boxes");
    assert_eq!(m.possessive("dogs", true), "dogs'");
    assert_eq!(m.possessive("Johnny", false), "Johnny's");
    let f = FeatureBundle {
        verb_form: Some(VerbForm::Finite),
        tense: Tense::Past,
        ..FeatureBundle::default()
    };
    assert_eq!(m.inflect("be", Pos::Verb, &f), "was");
}

#[test]
fn articles() {
    let m = MorphTables::bundled();
    for (w, a) in [
        ("apple", "an"),
        ("hour", "an"),
        ("unicorn", "a"),
        ("painting", "a"),
        ("European", "a"),
        ("honest", "an"),
        ("umbrella", "an"),
    ] {
        assert_eq!(m.indefinite_article(w), a, "{w}");
    }
}

#[test]
fn tense_follows_normalized_time() {
    let t = tmr("tom_picture");
    assert_eq!(derive_tense(t.frame("FASTEN-18").unwrap(), &t), Tense::Past);
    let w = tmr("waiter");
    assert_eq!(derive_tense(w.frame("WALK-1").unwrap(), &w), Tense::Present);
    let future = TmrFrame::new("WALK-1").with("TIME", Filler::Relative(ontogen::tmr::RelativeTime::AfterReference));
    assert_eq!(derive_tense(&future, &w), Tense::Future);
    let untimed = TmrFrame::new("WALK-1");
    assert_eq!(derive_tense(&untimed, &w), Tense::Present);
}

#[test]
fn voice_follows_agent_presence() {
    let k = kb();
    let fix = k.lexicon.get("fix-v2").unwrap();
    let walk = k.lexicon.get("walk-v1").unwrap();
    let passive = tmr("passive");
    let with_agent = tmr("tom_picture");
    assert_eq!(choose_voice(fix, passive.frame("FASTEN-2").unwrap()), Voice::Passive);
    assert_eq!(choose_voice(fix, with_agent.frame("FASTEN-18").unwrap()), Voice::Active);
    assert_eq!(choose_voice(walk, &TmrFrame::new("WALK-1")), Voice::Active);
}

#[test]
fn agentless_fastening_is_passive() {
    let report = run_with("passive", &Config::default(), FrequencyTable::bundled());
    let texts = common::texts(&report);
    assert!(
        texts.contains(&"A painting was secured to the wall.".to_string()),
        "{texts:?}"
    );
    assert!(texts.iter().all(|t| t.contains(" was ")));
}

fn solution_for(name: &str, sense: &str) -> CandidateSolution {
    let report = run_with(name, &Config::default(), &FrequencyTable::uniform(0.5));
    report
        .ranked
        .iter()
        .find(|s| s.candidate.solution.source.sense_ids().contains(&sense))
        .map(|s| s.candidate.solution.clone())
        .unwrap_or_else(|| panic!("no sentence uses {sense}"))
}

#[test]
fn synonym_sentences_differ_in_one_word() {
    let report = run_with("tom_picture", &Config::default(), &FrequencyTable::uniform(0.5));
    let family: Vec<Vec<String>> = report
        .ranked
        .iter()
        .filter(|s| {
            let ids = s.candidate.solution.source.sense_ids();
            ids.contains(&"fix-v2") && ids.contains(&"painting-n1")
        })
        .map(|s| s.candidate.realization.words().iter().map(|w| w.to_string()).collect())
        .collect();
    assert_eq!(family.len(), 4);
    for a in &family {
        for b in &family {
            if a == b {
                continue;
            }
            assert_eq!(a.len(), b.len());
            let diff = a.iter().zip(b).filter(|(x, y)| x != y).count();
            assert_eq!(diff, 1, "{a:?} vs {b:?}");
        }
    }
}

#[test]
fn fixed_words_come_from_the_example() {
    let k = kb();
    let sense = k.lexicon.get("appreciate-v8").unwrap();
    let words: Vec<&str> = sense
        .syn_struc
        .iter()
        .filter(|n| !n.root.is_empty())
        .map(|n| fixed_word(sense, n))
        .collect();
    assert_eq!(words, vec!["would", "really", "it", "if", "you", "would"]);
    let s = solution_for("request_polite", "appreciate-v8");
    let r = realize(&s).unwrap();
    assert_eq!(r.text, "I would really appreciate it if you would make dinner.");
}

#[test]
fn realization_is_a_function_of_the_solution() {
    let s = solution_for("tom_picture", "fix-v2");
    assert_eq!(realize(&s).unwrap(), realize(&s).unwrap());
    let again = build_solution(&s.source, &tmr("tom_picture"), &kb()).unwrap();
    assert_eq!(again.clauses, s.clauses);
}

#[test]
fn empty_solution_is_an_error() {
    let s = solution_for("tom_picture", "fix-v2");
    let empty = CandidateSolution { clauses: vec![], ..s };
    assert_eq!(realize(&empty), Err(RealizeError::EmptySolution));
}

#[test]
fn sentences_are_capitalized_and_terminated() {
    for name in [
        "tom_picture",
        "moor",
        "waiter",
        "deixis",
        "johnny",
        "plural",
        "request_polite",
        "request_rude",
    ] {
        let report = common::run(name);
        for s in &report.ranked {
            let first = s.text.chars().next().unwrap();
            assert!(first.is_uppercase(), "{}", s.text);
            assert!(s.text.ends_with(['.', '?', '!']), "{}", s.text);
            assert!(!s.text.contains("  "), "{}", s.text);
        }
    }
}

#[test]
fn single_root_required() {
    let t = parse_tmr(r#"{"schema":"ontogen-tmr/1","frames":[{"id":"DOG-1"},{"id":"WALL-2"}]}"#).unwrap();
    assert_eq!(root_frames(&t).len(), 2);
    let one = tmr("tom_picture");
    assert_eq!(
        root_frames(&one).iter().map(|f| f.id.as_str()).collect::<Vec<_>>(),
        vec!["FASTEN-18"]
    );
}
