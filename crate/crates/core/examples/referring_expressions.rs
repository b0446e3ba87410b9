//! Determiners, pronouns and names chosen from discourse state.
//!
//!     cargo run --example referring_expressions

use std::path::PathBuf;

use ontogen::config::Config;
use ontogen::generate::{generate, GenerateOptions};
use ontogen::knowledge::KnowledgeBase;
use ontogen::selector::{FrequencyTable, TermKind};
use ontogen::tmr::parse_tmr;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::load(data("ontology.json"), data("lexicon.json"), data("memory.json"))?;
    for name in ["deixis", "plural", "waiter", "blue_painting", "johnny"] {
        let tmr = parse_tmr(&std::fs::read_to_string(data(&format!("tmr/{name}.json")))?)?;
        if !tmr.discourse.history.is_empty() {
            println!("{name} (after: {:?}):", tmr.discourse.history);
        } else {
            println!("{name}:");
        }
        let report = generate(
            &tmr,
            &kb,
            &Config::default(),
            FrequencyTable::bundled(),
            GenerateOptions::default(),
        )?;
        for s in report.top(3) {
            let rep = s.term(TermKind::Repetition).map_or(0.0, |t| t.contribution);
            println!("  {:<45} {:>8.3}  repetition {rep:+.1}", s.text, s.score);
        }
    }
    Ok(())
}
