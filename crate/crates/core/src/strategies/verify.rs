use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::Strategy;
use crate::bitset::VertexSet;
use crate::error::{GameError, StrategyError};
use crate::game::{GameState, Player};
use crate::graph::{Graph, VertexId};
use crate::solver::{completion_lower_bound, Budget, Exhausted, Meter};

/// Outcome of pitting a strategy against every opposing line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Longest (upper check) or shortest (lower check) game found. Exact when
    /// `exact` is set, otherwise the extreme among the games seen so far.
    pub worst_length: usize,
    pub bound: usize,
    /// False when the budget ran out before the whole tree was covered.
    pub exact: bool,
    /// A complete game violating the bound, as vertex labels.
    pub counterexample: Option<Vec<String>>,
    pub nodes: u64,
}

impl VerificationReport {
    /// No counterexample (within budget, when not exact).
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    /// The strategy keeps the game short; the adversary maximizes.
    Upper,
    /// The strategy keeps the game long; the adversary minimizes.
    Lower,
}

enum Stop {
    Budget,
    Strategy(StrategyError),
}

impl From<Exhausted> for Stop {
    fn from(_: Exhausted) -> Self {
        Stop::Budget
    }
}

impl From<StrategyError> for Stop {
    fn from(e: StrategyError) -> Self {
        Stop::Strategy(e)
    }
}

/// Exhaustive one-sided verification of a strategy.
///
/// The strategy's turns call [`Strategy::next_move`] (the move must be
/// legal); every legal reply is tried at the adversary's turns. Adversary
/// nodes are memoized on the played set and the strategy fingerprint when
/// the strategy provides one.
#[derive(Clone, Debug)]
pub struct Verifier {
    graph: Arc<Graph>,
    starter: Player,
    prefix: Vec<VertexId>,
    budget: Budget,
}

impl Verifier {
    pub fn new(graph: Arc<Graph>, starter: Player) -> Self {
        Verifier { graph, starter, prefix: Vec::new(), budget: Budget::unlimited() }
    }

    /// Moves forced on both players before the strategy takes over.
    pub fn prefix<S: AsRef<str>>(mut self, labels: &[S]) -> Result<Self, GameError> {
        GameState::replay(self.graph.clone(), self.starter, labels)?;
        self.prefix = labels.iter().map(|l| self.graph.id(l.as_ref()).expect("replayed")).collect();
        Ok(self)
    }

    pub fn budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Largest game length `strat` (playing `mover`) allows.
    pub fn upper(&self, strat: &dyn Strategy, mover: Player, bound: usize) -> Result<VerificationReport, StrategyError> {
        self.run(strat, mover, bound, Side::Upper)
    }

    /// Smallest game length `strat` (playing `mover`) allows.
    pub fn lower(&self, strat: &dyn Strategy, mover: Player, bound: usize) -> Result<VerificationReport, StrategyError> {
        self.run(strat, mover, bound, Side::Lower)
    }

    fn run(&self, strat: &dyn Strategy, mover: Player, bound: usize, side: Side) -> Result<VerificationReport, StrategyError> {
        let root = GameState::replay_ids(self.graph.clone(), self.starter, &self.prefix)?;
        let mut search = Search {
            mover,
            side,
            meter: Meter::new(self.budget),
            memo: FxHashMap::default(),
            seen: None,
        };
        let start = match side {
            Side::Upper => 0,
            Side::Lower => usize::MAX,
        };
        let outcome = search.node(&root, strat.clone_box(), start);
        let violates = |len: usize| match side {
            Side::Upper => len > bound,
            Side::Lower => len < bound,
        };
        let nodes = search.meter.nodes;
        match outcome {
            Ok(value) => {
                let counterexample = if violates(value) {
                    search.meter.unlimited();
                    Some(search.line(&root, strat.clone_box(), value)?)
                } else {
                    None
                };
                Ok(VerificationReport { worst_length: value, bound, exact: true, counterexample, nodes })
            }
            Err(Stop::Budget) => {
                let (worst_length, line) = search.seen.take().unwrap_or((0, Vec::new()));
                let counterexample = (!line.is_empty() && violates(worst_length)).then(|| self.graph.labels_of(line));
                Ok(VerificationReport { worst_length, bound, exact: false, counterexample, nodes })
            }
            Err(Stop::Strategy(e)) => Err(e),
        }
    }
}

/// [`Verifier::upper`] from the empty position.
pub fn verify_upper(
    graph: &Arc<Graph>,
    strat: &dyn Strategy,
    mover: Player,
    starter: Player,
    bound: usize,
    budget: Budget,
) -> Result<VerificationReport, StrategyError> {
    Verifier::new(graph.clone(), starter).budget(budget).upper(strat, mover, bound)
}

/// [`Verifier::lower`] from the empty position.
pub fn verify_lower(
    graph: &Arc<Graph>,
    strat: &dyn Strategy,
    mover: Player,
    starter: Player,
    bound: usize,
    budget: Budget,
) -> Result<VerificationReport, StrategyError> {
    Verifier::new(graph.clone(), starter).budget(budget).lower(strat, mover, bound)
}

struct Search {
    mover: Player,
    side: Side,
    meter: Meter,
    /// Value and whether it is exact (otherwise a fail-soft bound).
    memo: FxHashMap<(VertexSet, u64), (usize, bool)>,
    /// Most extreme finished game so far, for budget-limited reports.
    seen: Option<(usize, Vec<VertexId>)>,
}

impl Search {
    fn better(&self, a: usize, b: usize) -> bool {
        match self.side {
            Side::Upper => a > b,
            Side::Lower => a < b,
        }
    }

    fn extreme(&self, a: usize, b: usize) -> usize {
        if self.better(b, a) {
            b
        } else {
            a
        }
    }

    /// Best length the adversary can still hope for below `state`.
    fn optimistic(&self, state: &GameState) -> usize {
        let played = state.move_count();
        match self.side {
            Side::Upper => played + state.undominated().len(),
            Side::Lower => played.saturating_add(completion_lower_bound(state.graph(), state.played_set())),
        }
    }

    fn strategy_move(&self, state: &GameState, strat: &mut dyn Strategy) -> Result<VertexId, StrategyError> {
        let v = strat.next_move(state)?;
        if v >= state.graph().n() {
            return Err(StrategyError::NotApplicable { strategy: strat.name(), reason: format!("returned unknown vertex id {v}") });
        }
        state.check_move(v).map_err(|cause| StrategyError::IllegalChoice {
            strategy: strat.name(),
            label: state.graph().label(v).to_string(),
            cause,
        })?;
        Ok(v)
    }

    /// Game length below `state` with the adversary to optimize, searched with
    /// a one-sided window: a result `better` than `limit` is exact, any other
    /// result is a bound that is no better than `limit`.
    fn node(&mut self, state: &GameState, mut strat: Box<dyn Strategy>, limit: usize) -> Result<usize, Stop> {
        self.meter.tick()?;
        if state.is_over() {
            let len = state.move_count();
            if self.seen.as_ref().is_none_or(|(best, _)| self.better(len, *best)) {
                self.seen = Some((len, state.played().to_vec()));
            }
            return Ok(len);
        }
        if state.to_move() == self.mover {
            let v = self.strategy_move(state, strat.as_mut())?;
            return self.node(&state.with_move(v).expect("checked legal"), strat, limit);
        }
        let key = strat.fingerprint().map(|f| (state.played_set().clone(), f));
        if let Some(&(value, exact)) = key.as_ref().and_then(|k| self.memo.get(k)) {
            if exact || !self.better(value, limit) {
                return Ok(value);
            }
        }
        let mut children: Vec<(usize, GameState)> = state
            .legal_moves()
            .iter()
            .map(|v| {
                let child = state.with_move(v).expect("legal");
                (self.optimistic(&child), child)
            })
            .collect();
        // Most promising replies first.
        match self.side {
            Side::Upper => children.sort_by_key(|(o, _)| std::cmp::Reverse(*o)),
            Side::Lower => children.sort_by_key(|(o, _)| *o),
        }
        let mut cutoff = limit;
        let mut exact = false;
        // The best bound among replies that did not beat the window.
        let mut soft: Option<usize> = None;
        for (opt, child) in children {
            if !self.better(opt, cutoff) {
                // Sorted, so no later reply can do better either.
                soft = Some(soft.map_or(opt, |s| self.extreme(s, opt)));
                break;
            }
            let value = self.node(&child, strat.clone_box(), cutoff)?;
            if self.better(value, cutoff) {
                cutoff = value;
                exact = true;
            } else {
                soft = Some(soft.map_or(value, |s| self.extreme(s, value)));
            }
        }
        let value = if exact { cutoff } else { soft.expect("an unfinished game has a legal move") };
        if let Some(k) = key {
            self.memo.insert(k, (value, exact));
        }
        Ok(value)
    }

    /// The window just short of `target`, so that a search reports `target`
    /// exactly when it is reached.
    fn window_for(&self, target: usize) -> usize {
        match self.side {
            Side::Upper => target.saturating_sub(1),
            Side::Lower => target.saturating_add(1),
        }
    }

    /// A complete game reaching `target` from `state`, found by following the
    /// memo (and re-searching where nothing was memoized).
    fn line(&mut self, state: &GameState, mut strat: Box<dyn Strategy>, target: usize) -> Result<Vec<String>, StrategyError> {
        let mut state = state.clone();
        let window = self.window_for(target);
        while !state.is_over() {
            let v = if state.to_move() == self.mover {
                self.strategy_move(&state, strat.as_mut())?
            } else {
                let mut pick = None;
                for v in state.legal_moves().iter() {
                    let child = state.with_move(v).expect("legal");
                    if self.better(target, self.optimistic(&child)) {
                        continue;
                    }
                    let value = match self.node(&child, strat.clone_box(), window) {
                        Ok(value) => value,
                        Err(Stop::Strategy(e)) => return Err(e),
                        Err(Stop::Budget) => unreachable!("the meter is unlimited"),
                    };
                    if value == target {
                        pick = Some(v);
                        break;
                    }
                }
                pick.expect("some reply realizes the value")
            };
            state.apply_move(v)?;
        }
        Ok(state.played_labels())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{build_a, build_hn};
    use crate::graph::path;
    use crate::strategies::{Fast, Slow, SolverStrategy};

    #[test]
    fn fast_on_h6() {
        let g = Arc::new(build_hn(6).unwrap());
        let r = verify_upper(&g, &Fast::new(), Player::Dominator, Player::Dominator, 6, Budget::unlimited()).unwrap();
        assert_eq!((r.worst_length, r.exact, r.holds()), (6, true, true));
    }

    #[test]
    fn slow_on_small_h() {
        for n in 2..=3 {
            let g = Arc::new(build_hn(n).unwrap());
            let r = verify_lower(&g, &Slow::new(), Player::Staller, Player::Staller, 2 * n, Budget::unlimited()).unwrap();
            assert_eq!((r.worst_length, r.holds()), (2 * n, true));
        }
    }

    #[test]
    fn solver_on_p4_and_a() {
        let p4 = Arc::new(path(&["a", "b", "c", "d"]));
        let r = verify_upper(&p4, &SolverStrategy::default(), Player::Dominator, Player::Dominator, 2, Budget::unlimited())
            .unwrap();
        assert_eq!(r.worst_length, 2);
        let a = Arc::new(build_a());
        let r = Verifier::new(a, Player::Dominator)
            .prefix(&["p1"])
            .unwrap()
            .upper(&SolverStrategy::default(), Player::Dominator, 4)
            .unwrap();
        assert_eq!((r.worst_length, r.holds()), (4, true));
    }

    #[test]
    fn counterexample_is_a_full_game() {
        let g = Arc::new(build_hn(4).unwrap());
        let r = verify_upper(&g, &Fast::new(), Player::Dominator, Player::Dominator, 3, Budget::unlimited()).unwrap();
        let line = r.counterexample.unwrap();
        assert_eq!(line.len(), 4);
        assert!(GameState::replay(g, Player::Dominator, &line).unwrap().is_over());
    }

    #[test]
    fn illegal_choice_is_reported() {
        #[derive(Clone)]
        struct Stubborn;
        impl Strategy for Stubborn {
            fn name(&self) -> &'static str {
                "stubborn"
            }
            fn next_move(&mut self, _: &GameState) -> Result<VertexId, StrategyError> {
                Ok(0)
            }
            fn clone_box(&self) -> Box<dyn Strategy> {
                Box::new(self.clone())
            }
        }
        let g = Arc::new(path(&["a", "b", "c", "d"]));
        let e = verify_upper(&g, &Stubborn, Player::Dominator, Player::Staller, 3, Budget::unlimited()).unwrap_err();
        assert!(matches!(e, StrategyError::IllegalChoice { strategy: "stubborn", .. }));
    }

    #[test]
    fn budget_gives_partial_report() {
        let g = Arc::new(build_hn(5).unwrap());
        let r = verify_lower(&g, &Slow::new(), Player::Staller, Player::Staller, 10, Budget::nodes(5)).unwrap();
        assert!(!r.exact);
    }
}
