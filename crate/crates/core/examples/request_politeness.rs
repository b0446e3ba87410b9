//! The same request at three politeness levels.
//!
//!     cargo run --example request_politeness

use std::path::PathBuf;

use ontogen::config::Config;
use ontogen::generate::{generate, GenerateOptions};
use ontogen::knowledge::KnowledgeBase;
use ontogen::selector::FrequencyTable;
use ontogen::tmr::parse_tmr;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::load(data("ontology.json"), data("lexicon.json"), data("memory.json"))?;
    for name in ["request_polite", "request_neutral", "request_rude"] {
        let tmr = parse_tmr(&std::fs::read_to_string(data(&format!("tmr/{name}.json")))?)?;
        let report = generate(
            &tmr,
            &kb,
            &Config::default(),
            FrequencyTable::bundled(),
            GenerateOptions::default(),
        )?;
        println!("{name}:");
        for s in report.top(3) {
            println!("  {:<60} {:>8.3}", s.text, s.score);
        }
    }
    Ok(())
}
