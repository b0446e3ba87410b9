#![allow(dead_code)]

pub mod world;

use std::path::PathBuf;

use ontogen::config::Config;
use ontogen::generate::{generate, GenerateOptions, RunReport};
use ontogen::knowledge::KnowledgeBase;
use ontogen::selector::FrequencyTable;
use ontogen::tmr::{parse_tmr, Tmr};

pub fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

pub fn kb() -> KnowledgeBase {
    KnowledgeBase::load(data("ontology.json"), data("lexicon.json"), data("memory.json")).expect("bundled KB loads")
}

pub fn tmr(name: &str) -> Tmr {
    let text = std::fs::read_to_string(data(&format!("tmr/{name}.json"))).expect("fixture exists");
    parse_tmr(&text).expect("fixture parses")
}

pub fn run(name: &str) -> RunReport {
    run_with(name, &Config::default(), FrequencyTable::bundled())
}

pub fn run_with(name: &str, config: &Config, freq: &FrequencyTable) -> RunReport {
    generate(&tmr(name), &kb(), config, freq, GenerateOptions::default()).expect("fixture generates")
}

pub fn texts(report: &RunReport) -> Vec<String> {
    report.ranked.iter().map(|s| s.text.clone()).collect()
}
