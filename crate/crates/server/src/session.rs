use std::sync::Arc;

use cdgame_core::reduction::{Reduction, Variant};
use cdgame_core::solver::{Budget, GameSolver};
use cdgame_core::strategies::{DominatorReduction, SGameDominator, SGameStaller, StallerReduction, Strategy};
use cdgame_core::{GameState, Graph, Player, VertexId};
use cdgame_proto::{GameView, Hint, Side};

use crate::error::AppError;

/// A registered graph, plus its construction when it came from a formula.
#[derive(Clone)]
pub struct StoredGraph {
    pub graph: Arc<Graph>,
    pub reduction: Option<Arc<Reduction>>,
}

/// Where engine moves come from.
enum Engine {
    Solver,
    /// Switched to for good once the solver ran out of budget on a reduction graph.
    Scripted(Box<dyn Strategy>),
}

pub struct Session {
    pub id: String,
    pub graph_id: String,
    stored: StoredGraph,
    state: GameState,
    engine_side: Option<Player>,
    engine_nodes: u64,
    engine: Engine,
    solver: GameSolver,
}

pub fn side(p: Player) -> Side {
    match p {
        Player::Dominator => Side::Dominator,
        Player::Staller => Side::Staller,
    }
}

pub fn player(s: Side) -> Player {
    match s {
        Side::Dominator => Player::Dominator,
        Side::Staller => Player::Staller,
    }
}

impl Session {
    pub fn new(
        id: String,
        graph_id: String,
        stored: StoredGraph,
        starter: Player,
        engine_side: Option<Player>,
        engine_nodes: u64,
    ) -> Result<Session, AppError> {
        let state = GameState::new(stored.graph.clone(), starter)?;
        let solver = GameSolver::new(stored.graph.clone()).map_err(|e| AppError::bad_request(e.to_string()))?;
        Ok(Session { id, graph_id, stored, state, engine_side, engine_nodes, engine: Engine::Solver, solver })
    }

    /// Applies a client move, then lets the engine answer.
    pub fn play(&mut self, label: &str) -> Result<Vec<VertexId>, AppError> {
        if self.state.is_over() {
            return Err(AppError::conflict("game-over", "the game is already over"));
        }
        if Some(self.state.to_move()) == self.engine_side {
            return Err(AppError::conflict("not-your-turn", "the engine is to move"));
        }
        self.state.apply_label(label)?;
        self.run_engine()
    }

    /// Plays engine moves while it is the engine's turn.
    pub fn run_engine(&mut self) -> Result<Vec<VertexId>, AppError> {
        let mut made = Vec::new();
        while !self.state.is_over() && Some(self.state.to_move()) == self.engine_side {
            let v = self.engine_move()?;
            self.state.apply_move(v)?;
            made.push(v);
        }
        Ok(made)
    }

    fn engine_move(&mut self) -> Result<VertexId, AppError> {
        if let Engine::Scripted(strategy) = &mut self.engine {
            match strategy.next_move(&self.state) {
                Ok(v) if self.state.is_legal(v) => return Ok(v),
                Ok(v) => tracing::warn!(session = %self.id, vertex = v, "scripted engine chose an illegal move"),
                Err(e) => tracing::warn!(session = %self.id, error = %e, "scripted engine failed"),
            }
        }
        let (v, result) = self
            .solver
            .best_move(&self.state, Budget::nodes(self.engine_nodes))
            .map_err(|e| AppError::internal(e.to_string()))?;
        if !result.exact && matches!(self.engine, Engine::Solver) {
            if let Some(mut strategy) = self.scripted() {
                if let Ok(w) = strategy.next_move(&self.state) {
                    if self.state.is_legal(w) {
                        self.engine = Engine::Scripted(strategy);
                        return Ok(w);
                    }
                }
            }
        }
        Ok(v)
    }

    /// The strategy for the engine's side on the stored reduction, if any.
    fn scripted(&self) -> Option<Box<dyn Strategy>> {
        let red = self.stored.reduction.as_ref()?;
        let s: Result<Box<dyn Strategy>, _> = match (self.engine_side?, red.variant) {
            (Player::Dominator, Variant::DGame) => DominatorReduction::new(red).map(|s| Box::new(s) as Box<dyn Strategy>),
            (Player::Dominator, Variant::SGame) => SGameDominator::new(red).map(|s| Box::new(s) as Box<dyn Strategy>),
            (Player::Staller, Variant::DGame) => StallerReduction::new(red).map(|s| Box::new(s) as Box<dyn Strategy>),
            (Player::Staller, Variant::SGame) => SGameStaller::new(red).map(|s| Box::new(s) as Box<dyn Strategy>),
        };
        s.ok()
    }

    pub fn hint(&mut self, nodes: u64) -> Result<Hint, AppError> {
        if self.state.is_over() {
            return Err(AppError::conflict("game-over", "no moves are left"));
        }
        let (v, result) =
            self.solver.best_move(&self.state, Budget::nodes(nodes)).map_err(|e| AppError::internal(e.to_string()))?;
        Ok(Hint { vertex: self.state.graph().label(v).to_string(), value: result.value, exact: result.exact })
    }

    pub fn view(&self, engine_moves: &[VertexId]) -> GameView {
        let s = &self.state;
        let g = s.graph();
        let over = s.is_over();
        GameView {
            id: self.id.clone(),
            graph_id: self.graph_id.clone(),
            starter: side(s.starter()),
            to_move: (!over).then(|| side(s.to_move())),
            played: s.played_labels(),
            dominated: g.labels_of(s.dominated().iter()),
            legal: g.labels_of(s.legal_moves().iter()),
            over,
            moves: s.move_count(),
            engine: self.engine_side.map(side),
            engine_moves: g.labels_of(engine_moves.iter().copied()),
        }
    }
}
