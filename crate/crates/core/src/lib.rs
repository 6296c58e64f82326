//! Synthesis of generalized-coherent-state preparation circuits from
//! expectation values of a Lie algebra's generators.
//!
//! The workflow: build or load an [`algebra::Algebra`], obtain moments
//! (exactly or by simulated measurement), then [`pipeline::synthesize`] a
//! circuit of group operations that prepares the state from the
//! highest-weight state.

pub mod algebra;
pub mod catalog;
pub mod diagonalizer;
pub mod error;
pub mod io;
pub mod linalg;
pub mod lqc;
pub mod moments;
pub mod pipeline;
pub mod state;
pub mod weyl;

pub use algebra::Algebra;
pub use error::{Error, Result};
pub use moments::{CwDecomposition, MomentVector};
pub use pipeline::{
    make_budget, synthesize, BudgetConstants, Source, SynthesisReport, ToleranceBudget,
};
pub use state::{GroupOp, StateVector};
