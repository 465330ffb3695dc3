use std::sync::{Arc, Mutex};

use super::Strategy;
use crate::error::StrategyError;
use crate::game::GameState;
use crate::graph::VertexId;
use crate::solver::{Budget, GameSolver};

/// Plays the solver's best move (smallest id among optimal moves). Clones
/// share one transposition table.
#[derive(Clone)]
pub struct SolverStrategy {
    solver: Arc<Mutex<Option<GameSolver>>>,
    budget: Budget,
}

impl SolverStrategy {
    pub fn new(budget: Budget) -> Self {
        SolverStrategy { solver: Arc::new(Mutex::new(None)), budget }
    }
}

impl Default for SolverStrategy {
    fn default() -> Self {
        SolverStrategy::new(Budget::unlimited())
    }
}

impl Strategy for SolverStrategy {
    fn name(&self) -> &'static str {
        "solver"
    }

    fn next_move(&mut self, state: &GameState) -> Result<VertexId, StrategyError> {
        let mut guard = self.solver.lock().expect("solver lock");
        let stale = guard.as_ref().is_none_or(|s| !Arc::ptr_eq(s.graph(), state.graph_arc()));
        if stale {
            *guard = Some(GameSolver::new(state.graph_arc().clone()).map_err(|e| StrategyError::NotApplicable {
                strategy: "solver",
                reason: e.to_string(),
            })?);
        }
        let solver = guard.as_mut().expect("initialized");
        match solver.best_move(state, self.budget) {
            Ok((v, _)) => Ok(v),
            Err(_) => Err(StrategyError::NoMove("solver")),
        }
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(0)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
