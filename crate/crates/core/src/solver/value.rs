use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use super::{Budget, Exhausted, Meter, SolveResult};
use crate::bitset::VertexSet;
use crate::error::{GameError, SolveError};
use crate::game::{GameState, Player};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Alpha-beta cutoffs and heuristic bounds. When off, the solver runs a
    /// plain memoized minimax over every child.
    pub pruning: bool,
    /// Shuffle child exploration order with this seed. Values do not depend
    /// on it; the principal variation is always extracted in id order.
    pub shuffle_seed: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { pruning: true, shuffle_seed: None }
    }
}

#[derive(Clone, Copy, Debug)]
struct Bounds {
    lo: u16,
    hi: u16,
}

/// Search position: the played set determines everything else. The number
/// of moves gives the player to move, and the dominated set is `N[played]`.
#[derive(Clone)]
struct Pos {
    played: VertexSet,
    dominated: VertexSet,
    count: usize,
}

impl Pos {
    fn from_state(state: &GameState) -> Pos {
        Pos {
            played: state.played_set().clone(),
            dominated: state.dominated().clone(),
            count: state.move_count(),
        }
    }

    fn child(&self, g: &Graph, v: VertexId) -> Pos {
        let mut next = self.clone();
        next.played.insert(v);
        next.dominated.union_with(g.closed(v));
        next.count += 1;
        next
    }

    fn legal(&self, g: &Graph) -> Vec<VertexId> {
        if self.count == 0 {
            return (0..g.n()).collect();
        }
        self.dominated
            .iter()
            .filter(|&v| !self.played.contains(v) && !g.closed(v).is_subset(&self.dominated))
            .collect()
    }
}

/// Transposition table key. The table is keyed on the starter and the set of
/// played vertices only: whose turn it is follows from the parity of the set
/// size, and the dominated set is the closed neighborhood of the set, so two
/// move orders reaching the same set are the same position. Keying on move
/// sequences instead would multiply the state space by up to `|S|!`.
type Key = (Player, VertexSet);

/// Game-value solver for one graph. The transposition table persists across
/// calls, so repeated queries on related positions get cheaper.
pub struct GameSolver {
    graph: Arc<Graph>,
    config: SolverConfig,
    table: FxHashMap<Key, Bounds>,
    exact: FxHashMap<Key, u16>,
    meter: Meter,
    rng: Option<ChaCha8Rng>,
}

impl GameSolver {
    pub fn new(graph: Arc<Graph>) -> Result<GameSolver, SolveError> {
        if graph.n() == 0 || !graph.is_connected() {
            return Err(GameError::NotConnected.into());
        }
        Ok(GameSolver {
            graph,
            config: SolverConfig::default(),
            table: FxHashMap::default(),
            exact: FxHashMap::default(),
            meter: Meter::new(Budget::unlimited()),
            rng: None,
        })
    }

    pub fn with_config(mut self, config: SolverConfig) -> Self {
        self.rng = config.shuffle_seed.map(ChaCha8Rng::seed_from_u64);
        self.config = config;
        self
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn table_len(&self) -> usize {
        self.table.len() + self.exact.len()
    }

    /// Total game length under optimal play from `state` (moves already made
    /// included), with a principal variation from the empty position.
    pub fn solve(&mut self, state: &GameState, budget: Budget) -> SolveResult {
        let starter = state.starter();
        let pos = Pos::from_state(state);
        let done = state.move_count();
        let start_nodes = self.meter.nodes;
        self.meter.rearm(budget);
        let trivial = done + (self.graph.n() - pos.dominated.len());
        let outcome = self.remaining_bounds(starter, &pos);
        let (lo, hi, finished) = outcome;
        let result = if finished || lo == hi {
            let mut pv = state.played().to_vec();
            pv.extend(self.principal_variation(starter, &pos, lo));
            let labels = self.graph.labels_of(pv);
            SolveResult::exact(done + lo as usize, labels, self.meter.nodes - start_nodes)
        } else {
            SolveResult::partial(
                done + lo as usize,
                done + hi as usize,
                trivial,
                state.played_labels(),
                self.meter.nodes - start_nodes,
            )
        };
        self.meter.unlimited();
        result
    }

    /// An optimal move for the player to move, smallest id among ties.
    ///
    /// If the budget runs out the move is the first one in search order and
    /// the returned result is inexact.
    pub fn best_move(&mut self, state: &GameState, budget: Budget) -> Result<(VertexId, SolveResult), SolveError> {
        if state.is_over() {
            return Err(GameError::GameOver.into());
        }
        let result = self.solve(state, budget);
        let pos = Pos::from_state(state);
        let mv = if result.exact {
            let path = self.principal_variation(state.starter(), &pos, (result.value - state.move_count()) as i32);
            path[0]
        } else {
            self.ordered_moves(&pos, state.to_move())[0]
        };
        Ok((mv, result))
    }

    fn to_move(starter: Player, pos: &Pos) -> Player {
        if pos.count.is_multiple_of(2) {
            starter
        } else {
            starter.other()
        }
    }

    /// Proven bounds on the remaining number of moves, and whether the
    /// search completed.
    fn remaining_bounds(&mut self, starter: Player, pos: &Pos) -> (i32, i32, bool) {
        if !self.config.pruning {
            return match self.plain(starter, pos) {
                Ok(v) => (v, v, true),
                Err(Exhausted) => {
                    let lo = self.lower_estimate(pos) as i32;
                    (lo, self.upper_estimate(pos) as i32, false)
                }
            };
        }
        let key = (starter, pos.played.clone());
        let (mut lo, mut hi) = match self.table.get(&key) {
            Some(b) => (b.lo as i32, b.hi as i32),
            None => (self.lower_estimate(pos) as i32, self.upper_estimate(pos) as i32),
        };
        while lo < hi {
            let gamma = lo + (hi - lo) / 2;
            match self.search(starter, pos, gamma, gamma + 1) {
                Ok(v) if v <= gamma => hi = v,
                Ok(v) => lo = v,
                Err(Exhausted) => return (lo, hi, false),
            }
        }
        (lo, hi, true)
    }

    fn exact_remaining(&mut self, starter: Player, pos: &Pos) -> i32 {
        let saved = std::mem::replace(&mut self.meter, Meter::new(Budget::unlimited()));
        let (lo, _, finished) = self.remaining_bounds(starter, pos);
        debug_assert!(finished);
        let nodes = self.meter.nodes;
        self.meter = saved;
        self.meter.nodes += nodes;
        lo
    }

    /// Walks an optimal line, taking the smallest-id optimal child each step.
    fn principal_variation(&mut self, starter: Player, pos: &Pos, mut value: i32) -> Vec<VertexId> {
        let g = self.graph.clone();
        let mut pos = pos.clone();
        let mut line = Vec::new();
        while value > 0 {
            let mut chosen = None;
            for v in pos.legal(&g) {
                let child = pos.child(&g, v);
                let cv = self.exact_remaining(starter, &child);
                if cv + 1 == value {
                    chosen = Some((v, child, cv));
                    break;
                }
            }
            let (v, child, cv) = chosen.expect("some child attains the minimax value");
            line.push(v);
            pos = child;
            value = cv;
        }
        line
    }

    fn lower_estimate(&self, pos: &Pos) -> usize {
        let g = &*self.graph;
        let undominated = pos.dominated.complement();
        let left = undominated.len();
        if left == 0 {
            return 0;
        }
        // Each move dominates at most `gain` new vertices, and gains only
        // shrink as the game goes on.
        let gain = (0..g.n())
            .map(|v| g.closed(v).intersection_len(&undominated))
            .max()
            .unwrap_or(1)
            .max(1);
        let by_gain = left.div_ceil(gain);
        // Undominated vertices with disjoint closed neighborhoods each need
        // their own move.
        let mut covered = g.empty_set();
        let mut packing = 0;
        for u in undominated.iter() {
            if !g.closed(u).intersects(&covered) {
                covered.union_with(g.closed(u));
                packing += 1;
            }
        }
        by_gain.max(packing).max(1)
    }

    fn upper_estimate(&self, pos: &Pos) -> usize {
        self.graph.n() - pos.dominated.len()
    }

    fn ordered_moves(&mut self, pos: &Pos, to_move: Player) -> Vec<VertexId> {
        let g = &*self.graph;
        let mut moves = pos.legal(g);
        if let Some(rng) = self.rng.as_mut() {
            moves.shuffle(rng);
            return moves;
        }
        let gain = |v: VertexId| g.closed(v).difference_len(&pos.dominated);
        match to_move {
            Player::Dominator => moves.sort_by_key(|&v| (std::cmp::Reverse(gain(v)), v)),
            Player::Staller => moves.sort_by_key(|&v| (gain(v), v)),
        }
        moves
    }

    /// Fail-soft alpha-beta on the remaining number of moves. A result
    /// `<= alpha` is an upper bound, `>= beta` a lower bound, anything in
    /// between is exact.
    fn search(&mut self, starter: Player, pos: &Pos, alpha: i32, beta: i32) -> Result<i32, Exhausted> {
        self.meter.tick()?;
        let g = self.graph.clone();
        if pos.dominated.len() == g.n() {
            return Ok(0);
        }
        let key = (starter, pos.played.clone());
        let (mut lo, mut hi) = match self.table.get(&key) {
            Some(b) => (b.lo as i32, b.hi as i32),
            None => (self.lower_estimate(pos) as i32, self.upper_estimate(pos) as i32),
        };
        if lo >= beta {
            return Ok(lo);
        }
        if hi <= alpha || lo == hi {
            return Ok(hi);
        }
        let a = alpha.max(lo);
        let b = beta.min(hi);
        let to_move = Self::to_move(starter, pos);
        let moves = self.ordered_moves(pos, to_move);
        let best = match to_move {
            Player::Dominator => {
                let mut best = i32::MAX;
                let mut bb = b;
                for v in moves {
                    let child = pos.child(&g, v);
                    let val = 1 + self.search(starter, &child, a - 1, bb - 1)?;
                    best = best.min(val);
                    bb = bb.min(best);
                    if best <= a {
                        break;
                    }
                }
                best
            }
            Player::Staller => {
                let mut best = i32::MIN;
                let mut aa = a;
                for v in moves {
                    let child = pos.child(&g, v);
                    let val = 1 + self.search(starter, &child, aa - 1, b - 1)?;
                    best = best.max(val);
                    aa = aa.max(best);
                    if best >= b {
                        break;
                    }
                }
                best
            }
        };
        if best <= a {
            hi = hi.min(best);
        } else if best >= b {
            lo = lo.max(best);
        } else {
            lo = best;
            hi = best;
        }
        self.table.insert(key, Bounds { lo: lo as u16, hi: hi as u16 });
        Ok(best)
    }

    /// Memoized minimax without cutoffs or heuristic bounds.
    fn plain(&mut self, starter: Player, pos: &Pos) -> Result<i32, Exhausted> {
        self.meter.tick()?;
        let g = self.graph.clone();
        if pos.dominated.len() == g.n() {
            return Ok(0);
        }
        let key = (starter, pos.played.clone());
        if let Some(&v) = self.exact.get(&key) {
            return Ok(v as i32);
        }
        let to_move = Self::to_move(starter, pos);
        let mut best: Option<i32> = None;
        for v in self.ordered_moves(pos, to_move) {
            let val = 1 + self.plain(starter, &pos.child(&g, v))?;
            best = Some(match (best, to_move) {
                (None, _) => val,
                (Some(b), Player::Dominator) => b.min(val),
                (Some(b), Player::Staller) => b.max(val),
            });
        }
        let best = best.expect("a position that is not over has a legal move");
        self.exact.insert(key, best as u16);
        Ok(best)
    }
}

/// `γ_cg(G)` for a Dominator start, `γ'_cg(G)` for a Staller start.
pub fn game_value(g: &Arc<Graph>, starter: Player, budget: Budget) -> Result<SolveResult, SolveError> {
    let state = GameState::new(g.clone(), starter)?;
    Ok(GameSolver::new(g.clone())?.solve(&state, budget))
}

/// Total game length when the game opens with the forced `prefix` and then
/// continues optimally.
pub fn game_value_with_prefix<S: AsRef<str>>(
    g: &Arc<Graph>,
    starter: Player,
    prefix: &[S],
    budget: Budget,
) -> Result<SolveResult, SolveError> {
    let state = GameState::replay(g.clone(), starter, prefix)?;
    Ok(GameSolver::new(g.clone())?.solve(&state, budget))
}

pub fn best_move(state: &GameState, budget: Budget) -> Result<(VertexId, SolveResult), SolveError> {
    GameSolver::new(state.graph_arc().clone())?.best_move(state, budget)
}
