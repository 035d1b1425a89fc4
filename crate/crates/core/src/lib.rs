//! Semi-overlap functions and quintuple-implication fuzzy reasoning.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: the aggregator catalog (semi-overlap, overlap and t-norm
//!   style functions on `[0,1]²`) and grid predicates for their axioms.
//! - [`residuation`]: residual implications, both as a brute-force grid
//!   supremum and as closed forms, plus the implication property suite.
//! - [`fuzzyset`]: finite fuzzy sets, membership curves and similarity.
//! - [`inference`]: quintuple-implication solutions of fuzzy modus ponens.
//! - [`classify`]: the FARC-HD and SO5I-FRC rule-based classifiers.
//! - [`dataio`]: KEEL datasets, rule-base files, experiment configs and reports.

pub mod algebra;
pub mod classify;
pub mod dataio;
pub mod fuzzyset;
pub mod inference;
pub mod residuation;

pub use algebra::{Aggregator, Axiom, GridSpec, UnitValue};
pub use residuation::{ImplProperty, ResidualImplication};
