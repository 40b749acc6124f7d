//! Flows on open graph states and the patterns they compile to.
//!
//! The crate covers the pipeline end to end:
//!
//! * [`graph`]: open graph states, odd neighborhoods, and the JSON
//!   interchange format;
//! * [`pauli`]: phase-exact Pauli strings and graph stabilizers;
//! * [`flow`]: correction structures and the flow / gflow / Pauli-flow
//!   condition checkers;
//! * [`find`]: desk-scale searches for all three structure kinds, plus the
//!   3n-vertex depth family;
//! * [`pattern`]: the measurement-calculus command language, parser,
//!   runnability check, standardizer and Pauli absorption;
//! * [`synth`]: compiling verified structures into deterministic patterns
//!   and the unitary embedding they realize;
//! * [`sim`]: dense branch simulation, Kraus completeness, determinism
//!   classification;
//! * [`extract`]: direct circuit substitution for flow geometries with
//!   acausality reporting.

pub mod extract;
pub mod find;
pub mod flow;
pub mod gf2;
pub mod graph;
pub mod linalg;
pub mod order;
pub mod pattern;
pub mod pauli;
pub mod sim;
pub mod synth;
