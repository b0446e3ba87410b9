//! Knowledge-based generation of English sentences from text meaning
//! representations (TMRs).

pub mod cli;
pub mod config;
pub mod generate;
pub mod knowledge;
pub mod pipeline;
pub mod realizer;
pub mod selector;
pub mod solution;
pub mod tmr;
