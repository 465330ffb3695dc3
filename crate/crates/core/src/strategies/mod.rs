//! Scripted strategies and one-sided exhaustive verifiers.
//!
//! A strategy picks moves for one player. It is called on every turn of that
//! player, in order, and reads the opponent's reply from the state. Strategy
//! objects carry their own context (an imagined POS-CNF game, a phase, ...),
//! so one object serves one playout; verifiers clone them at branch points.

mod dominator;
mod hn;
mod index;
mod solver;
mod staller;
mod verify;

use std::hash::{Hash, Hasher};

use rustc_hash::FxHasher;
use serde::{Deserialize, Serialize};

use crate::error::StrategyError;
use crate::game::GameState;
use crate::graph::VertexId;
use crate::poscnf::Assignment;

pub use dominator::{DominatorReduction, SGameDominator};
pub use hn::{Fast, Slow};
pub use index::Part;
pub use solver::SolverStrategy;
pub use staller::{SGameStaller, StallerReduction};
pub use verify::{verify_lower, verify_upper, VerificationReport, Verifier};

pub trait Strategy: Send {
    fn name(&self) -> &'static str;

    /// The move for the player to move in `state`.
    fn next_move(&mut self, state: &GameState) -> Result<VertexId, StrategyError>;

    /// A hash of everything besides the played set that future moves depend
    /// on, or `None` when no such summary exists. Verifiers use it to merge
    /// transpositions.
    fn fingerprint(&self) -> Option<u64> {
        None
    }

    fn clone_box(&self) -> Box<dyn Strategy>;
}

impl Clone for Box<dyn Strategy> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    #[default]
    Phase1,
    Phase2,
}

/// Bookkeeping shared by the reduction strategies.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrategyContext {
    /// The POS-CNF game played in the strategist's head.
    pub imagined_assignment: Assignment,
    pub phase: Phase,
    /// Prescribed moves that were no longer legal when their turn came. Their
    /// side effects (imagined assignments) were carried out anyway.
    pub owed_actions: Vec<VertexId>,
    /// Vertices played for real that the strategy treats as not yet played.
    pub pretended_moves: Vec<VertexId>,
    /// `(j, i)`: clause gadget `C_j` was entered through variable gadget `B_i`.
    pub role_bindings: Vec<(usize, usize)>,
}

impl StrategyContext {
    /// Monotone: once in Phase 2 the context stays there.
    pub fn enter_phase2(&mut self) {
        self.phase = Phase::Phase2;
    }

    pub fn bind(&mut self, j: usize, i: usize) {
        if !self.role_bindings.contains(&(j, i)) {
            self.role_bindings.push((j, i));
        }
    }
}

pub(crate) fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = FxHasher::default();
    value.hash(&mut h);
    h.finish()
}
