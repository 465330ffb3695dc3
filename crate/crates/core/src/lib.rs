//! Exact-solving toolkit for the connected domination game.
//!
//! - [`graph`] and [`bitset`]: labeled graphs and dense vertex sets.
//! - [`game`]: the rules engine.
//! - [`solver`]: game values, connected domination numbers and a brute-force oracle.
//! - [`gadgets`] and [`reduction`]: the building-block graphs and the
//!   constructions from positive CNF formulas.
//! - [`poscnf`]: the POS-CNF formula game.
//! - [`strategies`]: scripted strategies and exhaustive verifiers.

pub mod bitset;
pub mod corpus;
pub mod error;
pub mod formula;
pub mod gadgets;
pub mod game;
pub mod graph;
pub mod poscnf;
pub mod reduction;
pub mod solver;
pub mod strategies;

pub use bitset::VertexSet;
pub use error::{FormulaError, GameError, GraphError, IllegalCause, SolveError, StrategyError};
pub use formula::Formula;
pub use game::{GameState, Player};
pub use graph::{Graph, GraphBuilder, VertexId};
