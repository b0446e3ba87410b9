//! Ranking with different weights and frequency tables, with the score of
//! the winner broken down term by term.
//!
//!     cargo run --example select_best

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
    let tmr = parse_tmr(&std::fs::read_to_string(data("tmr/tom_picture.json"))?)?;

    let uniform = FrequencyTable::uniform(0.5);
    let mut no_freq = Config::default();
    no_freq.weights.frequency_weight = 0.0;
    let runs = [
        ("bundled frequencies", Config::default(), FrequencyTable::bundled()),
        ("uniform frequencies", Config::default(), &uniform),
        ("frequency weight 0", no_freq, FrequencyTable::bundled()),
    ];
    for (label, config, freq) in runs {
        let report = generate(&tmr, &kb, &config, freq, GenerateOptions::default())?;
        let best = report.best();
        println!("{label}: {}", best.text);
        for t in &best.terms {
            println!("    {t}");
        }
    }
    Ok(())
}
