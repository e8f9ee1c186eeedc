//! A desk-scale workbench for partial combinatory algebras.
//!
//! The crate provides several concrete models of partial application —
//! number-indexed programs, function streams with and without binary
//! restriction, total continuous maps, and a graph-coded set model — plus the
//! machinery they share: a small register machine with oracle queries, a
//! combinatory term calculus with bracket abstraction, embedding candidates
//! between models, and counterexample probes that hunt for structure a
//! claimed embedding would have to preserve.
//!
//! Everything is budgeted: runs carry step fuel, equality is checked on a
//! finite window, enumerations stop at a stage bound. Outcomes are reported
//! honestly — "agrees up to this budget" is a different verdict from a
//! certified difference, and the API keeps them apart.

pub mod bmodel;
pub mod k1;
pub mod k2;
pub mod k201;
pub mod machine;
pub mod nat;
pub mod term;

pub use machine::{Budget, EvalOutcome, Oracle};
pub use nat::Nat;
pub use term::Term;
