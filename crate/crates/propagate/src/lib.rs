//! Domain store, propagators and the propagation engine.

mod alldiff;
mod arith;
mod automaton;
mod build;
mod counting;
mod element;
mod engine;
mod intension;
mod order;
mod scheduling;
mod store;
mod table;

pub use build::{make_propagator, propagator_strength_report};
pub use engine::{fixpoint, propagate_one, Engine, PropagationResult, Propagator};
pub use intension::{eval_interval, Interval};
pub use store::{DomainStore, PResult, Wipeout};
