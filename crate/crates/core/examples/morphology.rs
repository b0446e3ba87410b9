//! The inflection tables on their own.
//!
//!     cargo run --example morphology

use ontogen::knowledge::Number;
use ontogen::realizer::MorphTables;
use ontogen::solution::{Case, Tense};

fn main() {
    let m = MorphTables::bundled();
    println!("{:<10} {:<10} {:<10} {:<10}", "lemma", "past", "3sg", "participle");
    for v in ["walk", "stop", "try", "moor", "hear", "make", "be", "skewer"] {
        println!(
            "{:<10} {:<10} {:<10} {:<10}",
            v,
            m.finite(v, Tense::Past, 3, Number::Singular),
            m.finite(v, Tense::Present, 3, Number::Singular),
            m.participle(v)
        );
    }
    println!();
    for n in ["painting", "ship", "box", "child", "person"] {
        println!("{n} -> {}", m.plural(n));
    }
    println!();
    for w in ["apple", "hour", "unicorn", "European", "painting", "honest"] {
        println!("{} {w}", m.indefinite_article(w));
    }
    println!();
    for p in ["I", "you", "he", "she", "they"] {
        println!(
            "{p}: {} {} {}",
            m.pronoun_form(p, Case::Accusative),
            m.pronoun_form(p, Case::Possessive),
            m.pronoun_form(p, Case::Reflexive)
        );
    }
}
