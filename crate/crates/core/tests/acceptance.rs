//! Acceptance checks, one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use common::world::*;
use common::{kb, run, run_with, texts, tmr};
use ontogen::config::Config;
use ontogen::knowledge::{KnowledgeBase, Number};
use ontogen::pipeline::{
    aggregate_sets, extract_candidates, manage_reference, prune_semantic, ChoiceKey, DiscourseContext, Stage,
};
use ontogen::realizer::{realize, MorphTables};
use ontogen::selector::FrequencyTable;
use ontogen::solution::{FeatureBundle, Tense, VerbForm};
use ontogen::tmr::{strip_metadata, tmr_isomorphic, to_json};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// The fix-v2 family over painting-n1 gives exactly the four synonym sentences.
fn running_example() -> Check {
    let report = run_with("tom_picture", &Config::default(), &FrequencyTable::uniform(0.5));
    let family: BTreeSet<&str> = report
        .ranked
        .iter()
        .filter(|s| {
            let c = &s.candidate.solution.source.choices;
            c.get(&ChoiceKey::Head("FASTEN-18".into()))
                .is_some_and(|x| x.sense.id == "fix-v2")
                && c.get(&ChoiceKey::Head("PICTURE-7".into()))
                    .is_some_and(|x| x.sense.id == "painting-n1")
        })
        .map(|s| s.text.as_str())
        .collect();
    let expected: BTreeSet<&str> = [
        "Tom fixed a painting to the wall.",
        "Tom attached a painting to the wall.",
        "Tom fastened a painting to the wall.",
        "Tom secured a painting to the wall.",
    ]
    .into_iter()
    .collect();
    ensure(family == expected, format!("fix-v2/painting family was {family:?}"))?;
    ensure(
        report.texts().contains(&"Tom secured a painting to the wall."),
        "target sentence missing",
    )?;
    for s in report.texts() {
        let ok = s.starts_with("Tom ")
            && s.ends_with(" to the wall.")
            && (s.contains(" a painting ") || s.contains(" a picture "))
            && ["fixed", "attached", "fastened", "secured", "affixed"]
                .iter()
                .any(|v| s.contains(v));
        ensure(ok, format!("unexpected sentence {s:?}"))?;
    }
    Ok(())
}

fn excluded_at(report: &ontogen::generate::RunReport, sense: &str, stage: Stage, rule: &str) -> bool {
    report
        .trace
        .exclusions
        .iter()
        .any(|e| e.sense == sense && e.stage == stage && e.rule == rule)
}

fn pruning_soundness() -> Check {
    let report = run("tom_picture");
    for s in ["moor-v1", "skewer-v1"] {
        ensure(
            excluded_at(&report, s, Stage::Semantic, "semantic/argument-taking/exclude"),
            format!("{s} not excluded as an argument-taking sense"),
        )?;
    }
    for s in ["cityscape-n1", "graffiti-n1", "landscape-n1"] {
        ensure(
            excluded_at(&report, s, Stage::Semantic, "semantic/non-argument-taking/exclude"),
            format!("{s} not excluded as a non-argument-taking sense"),
        )?;
    }
    let banned = ["moor", "skewer", "cityscape", "graffiti", "landscape"];
    for s in &report.ranked {
        let words = s.text.to_lowercase();
        ensure(
            !banned.iter().any(|b| words.contains(b)),
            format!("excluded word in {:?}", s.text),
        )?;
        let ids = s.candidate.solution.source.sense_ids().join(" ");
        ensure(
            !banned.iter().any(|b| ids.contains(b)),
            format!("excluded sense in {ids}"),
        )?;
    }
    Ok(())
}

/// Best semantic-stage score among sets whose FASTEN choice is `sense`.
fn semantic_best(kb: &KnowledgeBase, sense: &str) -> Option<i64> {
    let t = tmr("moor");
    let cands = extract_candidates(&t, kb).ok()?;
    let r = manage_reference(cands, &t, kb, &DiscourseContext::from_tmr(&t)).ok()?;
    let sets = aggregate_sets(&r.candidates, usize::MAX).sets;
    let (kept, _) = prune_semantic(sets, &r.tmr, kb, &Config::default().scoring).ok()?;
    kept.iter()
        .filter(|s| s.head("FASTEN-3").is_some_and(|c| c.sense.id == sense))
        .map(|s| s.score)
        .max()
}

fn narrow_constraint() -> Check {
    let report = run("moor");
    let texts = report.texts();
    let they = texts
        .iter()
        .position(|t| *t == "They moored the ship.")
        .ok_or("\"They moored the ship.\" not generated")?;
    for (i, t) in texts.iter().enumerate() {
        if t.contains("fixed")
            || t.contains("affixed")
            || t.contains("attached")
            || t.contains("secured")
            || t.contains("fastened")
        {
            ensure(they < i, format!("{t:?} ranks above the moor sentence"))?;
        }
    }
    let k = kb();
    let moor = semantic_best(&k, "moor-v1").ok_or("moor-v1 pruned semantically")?;
    for other in ["fix-v2", "affix-v1"] {
        if let Some(s) = semantic_best(&k, other) {
            ensure(
                moor > s,
                format!("moor-v1 {moor} not above {other} {s} at the semantic stage"),
            )?;
        }
    }
    Ok(())
}

fn feature_matching() -> Check {
    let polite = run("request_polite");
    let best = polite.best();
    ensure(
        best.text == "I would really appreciate it if you would make dinner.",
        format!("polite best was {:?}", best.text),
    )?;
    let head = best
        .candidate
        .solution
        .source
        .head("REQUEST-ACTION-1")
        .map(|c| c.sense.id.clone())
        .unwrap_or_default();
    ensure(head == "appreciate-v8", format!("polite head was {head}"))?;

    let rude = run("request_rude");
    ensure(
        rude.best().text == "Make dinner, dammit!",
        format!("rude best was {:?}", rude.best().text),
    )?;
    for s in &rude.ranked {
        let ids = s.candidate.solution.source.sense_ids().join(" ");
        ensure(
            !ids.contains("appreciate"),
            format!("appreciate family used for rude request: {}", s.text),
        )?;
    }
    Ok(())
}

fn strip_equivalence() -> Check {
    let nlu = tmr("tom_picture_nlu");
    let nlg = tmr("tom_picture");
    let once = strip_metadata(&nlu);
    ensure(
        tmr_isomorphic(&once, &nlg).is_some(),
        "stripped understanding TMR is not isomorphic to the content TMR",
    )?;
    let twice = strip_metadata(&once);
    ensure(to_json(&once) == to_json(&twice), "stripping is not idempotent")
}

fn reference_rules() -> Check {
    let content = run("tom_picture");
    ensure(
        content.texts()
            .iter()
            .all(|t| t.contains("the wall") && (t.contains("a painting") || t.contains("a picture"))),
        "coreferred wall must be definite, new painting indefinite",
    )?;
    let plural: BTreeSet<String> = texts(&run("plural")).into_iter().collect();
    ensure(
        plural.contains("The person read some books.") && plural.contains("The person read books."),
        format!("plural sentences were {plural:?}"),
    )?;
    let deixis = texts(&run("deixis"));
    ensure(
        deixis == vec!["I walked a dog.".to_string()],
        format!("speaker sentences were {deixis:?}"),
    )?;
    let polite = run("request_polite");
    for s in &polite.ranked {
        let words: Vec<&str> = s.text.split(|c: char| !c.is_alphabetic()).collect();
        ensure(
            !words
                .iter()
                .any(|w| ["he", "she", "He", "She", "person", "people"].contains(w)),
            format!("speaker or hearer realized in third person: {}", s.text),
        )?;
    }
    let blue = run("blue_painting");
    for s in blue.texts() {
        let lower = s.to_lowercase();
        ensure(
            !lower.contains("blue it") && !lower.contains(" it "),
            format!("modified object pronominalized: {s}"),
        )?;
    }
    ensure(
        excluded_at(&blue, "it-pron1", Stage::Syntactic, "syntactic/pronoun-modified"),
        "it-pron1 not excluded for the modified painting",
    )
}

fn morphology() -> Check {
    let m = MorphTables::bundled();
    let verb = |lemma: &str, tense: Tense, person: u8, number: Number| m.finite(lemma, tense, person, number);
    let s = Number::Singular;
    let p = Number::Plural;
    let cases: Vec<(String, &str)> = vec![
        (verb("secure", Tense::Past, 3, s), "secured"),
        (verb("hear", Tense::Past, 3, s), "heard"),
        (verb("walk", Tense::Present, 3, s), "walks"),
        (verb("walk", Tense::Present, 3, p), "walk"),
        (verb("fix", Tense::Present, 3, s), "fixes"),
        (verb("fix", Tense::Past, 1, s), "fixed"),
        (verb("stop", Tense::Past, 3, s), "stopped"),
        (verb("prefer", Tense::Past, 3, s), "preferred"),
        (verb("visit", Tense::Past, 3, s), "visited"),
        (verb("carry", Tense::Past, 3, s), "carried"),
        (verb("carry", Tense::Present, 3, s), "carries"),
        (verb("play", Tense::Past, 3, s), "played"),
        (verb("play", Tense::Present, 3, s), "plays"),
        (verb("be", Tense::Present, 1, s), "am"),
        (verb("be", Tense::Present, 3, s), "is"),
        (verb("be", Tense::Present, 2, p), "are"),
        (verb("be", Tense::Past, 3, s), "was"),
        (verb("be", Tense::Past, 3, p), "were"),
        (verb("have", Tense::Present, 3, s), "has"),
        (verb("do", Tense::Present, 3, s), "does"),
        (verb("go", Tense::Present, 3, s), "goes"),
        (verb("go", Tense::Past, 3, s), "went"),
        (verb("make", Tense::Past, 3, s), "made"),
        (verb("take", Tense::Past, 3, s), "took"),
        (verb("read", Tense::Past, 3, s), "read"),
        (verb("moor", Tense::Past, 3, p), "moored"),
        (verb("attach", Tense::Past, 3, s), "attached"),
        (verb("attach", Tense::Present, 3, s), "attaches"),
        (verb("fasten", Tense::Past, 3, s), "fastened"),
        (verb("affix", Tense::Past, 3, s), "affixed"),
        (verb("jump", Tense::Past, 3, s), "jumped"),
        (verb("buzz", Tense::Present, 3, s), "buzzes"),
        (verb("wish", Tense::Present, 3, s), "wishes"),
        (m.participle("see"), "seen"),
        (m.participle("write"), "written"),
        (m.participle("secure"), "secured"),
        (m.participle("take"), "taken"),
        (m.participle("break"), "broken"),
        (m.plural("painting"), "paintings"),
        (m.plural("box"), "boxes"),
        (m.plural("city"), "cities"),
        (m.plural("day"), "days"),
        (m.plural("church"), "churches"),
        (m.plural("person"), "people"),
        (m.plural("child"), "children"),
        (m.plural("mouse"), "mice"),
        (m.plural("knife"), "knives"),
        (m.plural("sheep"), "sheep"),
        (m.plural("crisis"), "crises"),
        (m.plural("potato"), "potatoes"),
        (m.possessive("Johnny", false), "Johnny's"),
        (m.possessive("grandmothers", true), "grandmothers'"),
        (
            m.inflect(
                "he",
                ontogen::knowledge::Pos::Pronoun,
                &FeatureBundle {
                    case: Some(ontogen::solution::Case::Accusative),
                    ..Default::default()
                },
            ),
            "him",
        ),
        (
            m.inflect(
                "they",
                ontogen::knowledge::Pos::Pronoun,
                &FeatureBundle {
                    possessive: true,
                    ..Default::default()
                },
            ),
            "their",
        ),
        (
            m.inflect(
                "write",
                ontogen::knowledge::Pos::Verb,
                &FeatureBundle {
                    verb_form: Some(VerbForm::Participle),
                    ..Default::default()
                },
            ),
            "written",
        ),
    ];
    ensure(cases.len() >= 50, "fewer than 50 inflection cases")?;
    for (got, want) in &cases {
        ensure(got == want, format!("inflection gave {got:?}, expected {want:?}"))?;
    }
    let articles = [
        ("painting", "a"),
        ("apple", "an"),
        ("hour", "an"),
        ("honest", "an"),
        ("heir", "an"),
        ("honor", "an"),
        ("university", "a"),
        ("unicorn", "a"),
        ("European", "a"),
        ("one", "a"),
        ("useful", "a"),
        ("umbrella", "an"),
        ("egg", "an"),
        ("igloo", "an"),
        ("owl", "an"),
        ("house", "a"),
        ("wall", "a"),
        ("FBI", "an"),
        ("ukulele", "a"),
        ("hourglass", "an"),
    ];
    for (w, a) in articles {
        let got = m.indefinite_article(w);
        ensure(got == a, format!("{got} {w}, expected {a} {w}"))?;
    }
    Ok(())
}

fn repetition_penalty() -> Check {
    let t = tmr("johnny");
    ensure(
        t.discourse.history == vec!["Johnny jumped off the stairs onto his grandmother's couch.".to_string()],
        "fixture history changed",
    )?;
    let report = run("johnny");
    let texts = report.texts();
    let he = texts
        .iter()
        .position(|t| *t == "He heard a noise.")
        .ok_or("pronoun variant missing")?;
    let johnny = texts
        .iter()
        .position(|t| *t == "Johnny heard a noise.")
        .ok_or("name variant missing")?;
    ensure(he < johnny, format!("ranking was {texts:?}"))?;
    ensure(
        report.ranked[he].score > report.ranked[johnny].score,
        "not strictly below",
    )
}

fn property_suites() -> Check {
    let seeds: Vec<u64> = (0..96).map(|i| 0x9e37_79b9_u64.wrapping_mul(i + 1)).collect();
    for &seed in &seeds {
        let w = World::generate(seed);
        ensure(w.concepts <= 10 && w.senses <= 15, "world too large")?;
        check_cardinality(&w)?;
        check_ledger(&w)?;
        check_rank_permutation(&w)?;
        for e in [-3, -1, 1, 2, 5] {
            check_scaling(&w, e)?;
        }
        check_determinism(&w)?;
        check_token_conservation(&w)?;
    }
    for name in [
        "tom_picture",
        "moor",
        "request_polite",
        "request_rude",
        "plural",
        "deixis",
        "blue_painting",
        "johnny",
    ] {
        let a = serde_json::to_string(&run(name)).map_err(|e| e.to_string())?;
        let b = serde_json::to_string(&run(name)).map_err(|e| e.to_string())?;
        ensure(a == b, format!("{name}: report differs between runs"))?;
        for s in &run(name).ranked {
            let r = realize(&s.candidate.solution).map_err(|e| e.to_string())?;
            ensure(r.text == s.text, "re-realization differs")?;
        }
    }
    Ok(())
}

fn main() {
    let start = Instant::now();
    let criteria: [Criterion; 9] = [
        ("running-example generation", running_example),
        ("pruning soundness", pruning_soundness),
        ("narrow-constraint ranking", narrow_constraint),
        ("feature matching", feature_matching),
        ("strip equivalence", strip_equivalence),
        ("reference rules", reference_rules),
        ("morphology suite (>= 50 inflections, 20 articles)", morphology),
        ("repetition penalty", repetition_penalty),
        (
            "property suites (96 random worlds, <= 10 concepts, <= 15 senses)",
            property_suites,
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {}: {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {}: {name}: {e}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.2?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
