//! File formats, instance generation, and the scripting surface around
//! [`spround_core`]: the edge-list graph format, DIMACS CNF input, JSON
//! documents for roundings and verification reports, and a seeded random
//! tree generator.

pub mod dimacs;
pub mod gen;
pub mod io;
pub mod json;

pub use spround_core as core;
