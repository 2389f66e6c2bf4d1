//! Instance builders for twenty competition problem models, plus the
//! parameter manifest of the published series.

mod data;
mod manifest;
mod optim;
mod puzzles;
mod shape;
mod tables;

use std::sync::{Arc, OnceLock};

use thiserror::Error;
use xcore::{Expr, Instance, InstanceBuilder, ModelError, Value, VarId};

pub use data::{
    parse_slant_text, ColoringData, CoveringParams, DiceParams, GmkpData, Grid, Job, Jugs, KMedianData, KidneyData,
    Order, ProblemData, ProblemId, RipData, SchedulingData, SonetData, TsptwData, Variant,
};
pub use manifest::{manifest, ManifestEntry};
pub use optim::{JUG_STEPS, OBJECTIVE_GROUP};
pub use puzzles::{square_reductions, SQUARE_CONTAINERS};
pub use shape::{expected_shape, Shape};
pub use tables::{
    beer_jugs_transitions, binary_puzzle_automaton, binomial, calvin_table, covering_table, jug_step,
    pythagorean_conflicts, word_design_words,
};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("{model}: assertion `{assertion}` failed")]
    Guard { model: ProblemId, assertion: String },
    #[error("{model}: {message}")]
    Data { model: ProblemId, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl BuildError {
    pub(crate) fn guard(model: ProblemId, assertion: &str) -> BuildError {
        BuildError::Guard { model, assertion: assertion.to_string() }
    }

    pub(crate) fn data(model: ProblemId, message: String) -> BuildError {
        BuildError::Data { model, message }
    }
}

pub(crate) fn e(v: VarId) -> Expr {
    Expr::Var(v)
}

pub(crate) fn k(v: Value) -> Expr {
    Expr::Const(v)
}

fn words_table() -> Arc<Vec<Vec<Value>>> {
    static WORDS: OnceLock<Arc<Vec<Vec<Value>>>> = OnceLock::new();
    WORDS.get_or_init(|| Arc::new(word_design_words().into_iter().map(|w| w.to_vec()).collect())).clone()
}

/// Builds the model for `data`. Metadata records the problem name and parameters.
pub fn build_instance(data: &ProblemData) -> Result<Instance, BuildError> {
    let mut b = InstanceBuilder::new();
    match data {
        ProblemData::AnotherMagicSquare(d) => puzzles::another_magic_square(&mut b, d.n)?,
        ProblemData::AntimagicSquare(d) => puzzles::antimagic_square(&mut b, d.n)?,
        ProblemData::BinaryPuzzle(d) => puzzles::binary_puzzle(&mut b, d.n, &d.variant)?,
        ProblemData::CalvinPuzzle(d) => puzzles::calvin_puzzle(&mut b, d.n, &d.variant)?,
        ProblemData::Coloring(d) => puzzles::coloring(&mut b, d)?,
        ProblemData::CoveringArray(d) => puzzles::covering_array(&mut b, d)?,
        ProblemData::Dominoes(d) => puzzles::dominoes(&mut b, d)?,
        ProblemData::NonTransitiveDice(d) => puzzles::non_transitive_dice(&mut b, d)?,
        ProblemData::PythagoreanTriples(d) => puzzles::pythagorean_triples(&mut b, d.n)?,
        ProblemData::Slant(d) => puzzles::slant(&mut b, d)?,
        ProblemData::SquarePacking(d) => puzzles::square_packing(&mut b, d.n)?,
        ProblemData::WordDesign(d) => puzzles::word_design(&mut b, d.n, words_table())?,
        ProblemData::BeerJugs(d) => optim::beer_jugs(&mut b, d.a, d.b)?,
        ProblemData::Sonet(d) => optim::sonet(&mut b, d)?,
        ProblemData::KMedian(d) => optim::k_median(&mut b, d)?,
        ProblemData::GeneralizedMkp(d) => optim::generalized_mkp(&mut b, d)?,
        ProblemData::Tsptw(d) => optim::tsptw(&mut b, d)?,
        ProblemData::Rip(d) => optim::rip(&mut b, d)?,
        ProblemData::LargeScaleScheduling(d) => optim::large_scale_scheduling(&mut b, d)?,
        ProblemData::KidneyExchange(d) => optim::kidney_exchange(&mut b, d)?,
    }
    b.meta("problem", data.id().name().into());
    b.meta("parameters", data.to_json());
    Ok(b.build()?)
}
