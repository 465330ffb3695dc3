//! The rules of the connected domination game.
//!
//! A move `v` is legal when `N[v]` contains a vertex not yet dominated and the
//! played vertices together with `v` induce a connected subgraph. The game ends
//! when no legal move remains, which happens exactly when the played set is a
//! connected dominating set.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{GameError, IllegalCause};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Dominator,
    Staller,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Dominator => Player::Staller,
            Player::Staller => Player::Dominator,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Player::Dominator => "dominator",
            Player::Staller => "staller",
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Player {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "d" | "dominator" => Ok(Player::Dominator),
            "s" | "staller" => Ok(Player::Staller),
            other => Err(format!("unknown player `{other}` (expected d|s)")),
        }
    }
}

/// A position: the ordered moves so far plus the derived dominated set.
///
/// The dominated set is maintained incrementally; [`GameState::check_invariants`]
/// recomputes everything from the move list.
#[derive(Clone)]
pub struct GameState {
    graph: Arc<Graph>,
    starter: Player,
    played: Vec<VertexId>,
    played_set: VertexSet,
    dominated: VertexSet,
}

impl GameState {
    pub fn new(graph: Arc<Graph>, starter: Player) -> Result<GameState, GameError> {
        if graph.n() == 0 || !graph.is_connected() {
            return Err(GameError::NotConnected);
        }
        let n = graph.n();
        Ok(GameState {
            graph,
            starter,
            played: Vec::new(),
            played_set: VertexSet::new(n),
            dominated: VertexSet::new(n),
        })
    }

    /// Builds the state reached by playing `labels` in order.
    pub fn replay<S: AsRef<str>>(
        graph: Arc<Graph>,
        starter: Player,
        labels: &[S],
    ) -> Result<GameState, GameError> {
        let mut state = GameState::new(graph, starter)?;
        for (index, label) in labels.iter().enumerate() {
            let v = state.graph.require(label.as_ref())?;
            state.check_move(v).map_err(|cause| GameError::IllegalAt {
                index,
                label: label.as_ref().to_string(),
                cause,
            })?;
            state.push_unchecked(v);
        }
        Ok(state)
    }

    pub fn replay_ids(graph: Arc<Graph>, starter: Player, ids: &[VertexId]) -> Result<GameState, GameError> {
        let mut state = GameState::new(graph, starter)?;
        for &v in ids {
            state.apply_move(v)?;
        }
        Ok(state)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn starter(&self) -> Player {
        self.starter
    }

    pub fn played(&self) -> &[VertexId] {
        &self.played
    }

    pub fn played_labels(&self) -> Vec<String> {
        self.graph.labels_of(self.played.iter().copied())
    }

    pub fn played_set(&self) -> &VertexSet {
        &self.played_set
    }

    pub fn dominated(&self) -> &VertexSet {
        &self.dominated
    }

    pub fn undominated(&self) -> VertexSet {
        self.dominated.complement()
    }

    pub fn move_count(&self) -> usize {
        self.played.len()
    }

    pub fn last_move(&self) -> Option<VertexId> {
        self.played.last().copied()
    }

    /// Who made (or makes) the move with 0-based index `index`.
    pub fn mover_at(&self, index: usize) -> Player {
        if index.is_multiple_of(2) {
            self.starter
        } else {
            self.starter.other()
        }
    }

    pub fn to_move(&self) -> Player {
        self.mover_at(self.played.len())
    }

    pub fn is_over(&self) -> bool {
        self.dominated.len() == self.graph.n()
    }

    /// Number of vertices `v` would newly dominate.
    #[inline]
    pub fn gain(&self, v: VertexId) -> usize {
        self.graph.closed(v).difference_len(&self.dominated)
    }

    /// Checks both legality conditions for `v`. New domination is checked
    /// first, so a vertex failing both reports `NoNewDomination`.
    ///
    /// Once at least one vertex is played, adding `v` keeps the played set
    /// connected iff `v` has a neighbor in it, i.e. iff `v` is dominated.
    pub fn check_move(&self, v: VertexId) -> Result<(), IllegalCause> {
        if self.graph.closed(v).is_subset(&self.dominated) {
            return Err(IllegalCause::NoNewDomination);
        }
        if !self.played.is_empty() && !self.graph.neighbors(v).intersects(&self.played_set) {
            return Err(IllegalCause::Disconnected);
        }
        Ok(())
    }

    pub fn is_legal(&self, v: VertexId) -> bool {
        v < self.graph.n() && self.check_move(v).is_ok()
    }

    pub fn legal_moves(&self) -> VertexSet {
        if self.played.is_empty() {
            return self.graph.all_vertices();
        }
        let mut out = self.graph.empty_set();
        for v in self.dominated.iter() {
            if !self.played_set.contains(v) && !self.graph.closed(v).is_subset(&self.dominated) {
                out.insert(v);
            }
        }
        out
    }

    pub fn apply_move(&mut self, v: VertexId) -> Result<(), GameError> {
        if v >= self.graph.n() {
            return Err(crate::error::GraphError::VertexOutOfRange { vertex: v, n: self.graph.n() }.into());
        }
        if self.is_over() {
            return Err(GameError::GameOver);
        }
        self.check_move(v).map_err(|cause| GameError::IllegalMove {
            label: self.graph.label(v).to_string(),
            cause,
        })?;
        self.push_unchecked(v);
        Ok(())
    }

    pub fn with_move(&self, v: VertexId) -> Result<GameState, GameError> {
        let mut next = self.clone();
        next.apply_move(v)?;
        Ok(next)
    }

    pub fn apply_label(&mut self, label: &str) -> Result<(), GameError> {
        let v = self.graph.require(label)?;
        self.apply_move(v)
    }

    fn push_unchecked(&mut self, v: VertexId) {
        self.played.push(v);
        self.played_set.insert(v);
        self.dominated.union_with(self.graph.closed(v));
        #[cfg(feature = "paranoid")]
        self.check_invariants().expect("game state drifted");
    }

    /// Recomputes the derived data from the move list and checks every
    /// invariant of a legal play.
    pub fn check_invariants(&self) -> Result<(), String> {
        let g = &*self.graph;
        let mut dominated = g.empty_set();
        let mut prefix = g.empty_set();
        for (i, &v) in self.played.iter().enumerate() {
            if prefix.contains(v) {
                return Err(format!("move {i} repeats `{}`", g.label(v)));
            }
            if g.closed(v).is_subset(&dominated) {
                return Err(format!("move {i} `{}` dominated nothing new", g.label(v)));
            }
            prefix.insert(v);
            dominated.union_with(g.closed(v));
            if !g.is_connected_induced(&prefix).map_err(|e| e.to_string())? {
                return Err(format!("prefix of length {} is disconnected", i + 1));
            }
        }
        if dominated != self.dominated {
            return Err("cached dominated set differs from recomputation".into());
        }
        if prefix != self.played_set {
            return Err("cached played set differs from the move list".into());
        }
        if self.legal_moves().is_empty() != self.is_over() {
            return Err("termination test disagrees with the legal move set".into());
        }
        Ok(())
    }
}

impl fmt::Debug for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameState")
            .field("starter", &self.starter)
            .field("played", &self.played_labels())
            .field("dominated", &self.dominated.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets;
    use crate::graph::{graph_from_edges, path};
    use proptest::prelude::*;
    use rand::seq::IndexedRandom;
    use rand::SeedableRng;

    fn p4() -> Arc<Graph> {
        Arc::new(path(&["a", "b", "c", "d"]))
    }

    fn labels(g: &Graph, s: &VertexSet) -> Vec<String> {
        g.labels_of(s.iter())
    }

    #[test]
    fn k1_has_one_legal_move_and_ends_after_it() {
        let g = Arc::new(graph_from_edges(&["x"], &[]).unwrap());
        let mut s = GameState::new(g, Player::Dominator).unwrap();
        assert_eq!(s.legal_moves().len(), 1);
        s.apply_move(0).unwrap();
        assert!(s.is_over());
        assert!(s.legal_moves().is_empty());
    }

    #[test]
    fn starter_moves_first() {
        let s = GameState::new(p4(), Player::Staller).unwrap();
        assert_eq!(s.to_move(), Player::Staller);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = Arc::new(graph_from_edges(&["x", "y"], &[]).unwrap());
        assert_eq!(GameState::new(g, Player::Dominator).unwrap_err(), GameError::NotConnected);
    }

    #[test]
    fn legal_moves_on_p4_after_center() {
        let g = p4();
        let s = GameState::replay(g.clone(), Player::Dominator, &["b"]).unwrap();
        assert_eq!(labels(&g, &s.legal_moves()), vec!["c"]);
    }

    #[test]
    fn every_vertex_is_legal_at_the_start() {
        let g = Arc::new(gadgets::build_b());
        let s = GameState::new(g.clone(), Player::Dominator).unwrap();
        assert_eq!(s.legal_moves().len(), g.n());
    }

    #[test]
    fn hn_responses_are_unique_after_top_spine_vertex() {
        for n in 2..=7 {
            let g = Arc::new(gadgets::build_hn(n).unwrap());
            let mut s = GameState::new(g.clone(), Player::Dominator).unwrap();
            s.apply_label(&format!("u{n}")).unwrap();
            for i in (1..n).rev() {
                let legal = s.legal_moves();
                assert_eq!(labels(&g, &legal), vec![format!("u{i}")], "H_{n}");
                s.apply_move(legal.first().unwrap()).unwrap();
            }
            assert!(s.is_over(), "H_{n} should be finished after u_n..u_1");
        }
    }

    #[test]
    fn apply_move_finishes_p4() {
        let mut s = GameState::replay(p4(), Player::Dominator, &["b"]).unwrap();
        s.apply_label("c").unwrap();
        assert!(s.is_over());
        assert_eq!(s.apply_label("a").unwrap_err(), GameError::GameOver);
    }

    #[test]
    fn illegal_causes_are_distinguished() {
        let mut s = GameState::replay(p4(), Player::Dominator, &["b"]).unwrap();
        assert_eq!(
            s.apply_label("a").unwrap_err(),
            GameError::IllegalMove { label: "a".into(), cause: IllegalCause::NoNewDomination }
        );

        let b = Arc::new(gadgets::build_b());
        let mut s = GameState::replay(b, Player::Dominator, &["b'"]).unwrap();
        assert_eq!(
            s.apply_label("k").unwrap_err(),
            GameError::IllegalMove { label: "k".into(), cause: IllegalCause::Disconnected }
        );
    }

    #[test]
    fn is_over_cases() {
        let h2 = Arc::new(gadgets::build_hn(2).unwrap());
        assert!(GameState::replay(h2, Player::Dominator, &["u2", "u1"]).unwrap().is_over());
        assert!(!GameState::replay(p4(), Player::Dominator, &["b"]).unwrap().is_over());
    }

    #[test]
    fn replay_reports_first_illegal_index() {
        let s = GameState::replay(p4(), Player::Dominator, &["b", "c"]).unwrap();
        assert!(s.is_over());
        assert_eq!(s.move_count(), 2);
        match GameState::replay(p4(), Player::Dominator, &["b", "a"]) {
            Err(GameError::IllegalAt { index, cause, .. }) => {
                assert_eq!(index, 1);
                assert_eq!(cause, IllegalCause::NoNewDomination);
            }
            other => panic!("unexpected {other:?}"),
        }
        let h6 = Arc::new(gadgets::build_hn(6).unwrap());
        let s = GameState::replay(h6, Player::Dominator, &["u6", "u5", "u4", "u3", "u2", "u1"]).unwrap();
        assert!(s.is_over());
        assert_eq!(s.move_count(), 6);
    }

    #[test]
    fn neighbor_rule_matches_full_connectivity_check() {
        // The O(deg) connectivity shortcut must agree with an induced-subgraph
        // search on every reachable position of a few small graphs.
        let graphs = [gadgets::build_b(), gadgets::build_a(), gadgets::build_cm(2).unwrap()];
        for g in graphs {
            let g = Arc::new(g);
            let mut stack = vec![GameState::new(g.clone(), Player::Dominator).unwrap()];
            let mut seen = std::collections::HashSet::new();
            while let Some(s) = stack.pop() {
                if !seen.insert(s.played_set().clone()) {
                    continue;
                }
                for v in 0..g.n() {
                    let mut with = s.played_set().clone();
                    with.insert(v);
                    let connected = g.is_connected_induced(&with).unwrap();
                    let new_dom = !g.closed(v).is_subset(s.dominated());
                    assert_eq!(s.is_legal(v), connected && new_dom && !s.played_set().contains(v));
                    if s.is_legal(v) {
                        stack.push(s.with_move(v).unwrap());
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn random_playouts_keep_invariants(seed in any::<u64>(), which in 0usize..4) {
            let g = Arc::new(match which {
                0 => gadgets::build_b(),
                1 => gadgets::build_a(),
                2 => gadgets::build_hn(4).unwrap(),
                _ => gadgets::build_cm(3).unwrap(),
            });
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut s = GameState::new(g.clone(), Player::Staller).unwrap();
            let mut prev = 0;
            while !s.is_over() {
                let legal = s.legal_moves().to_vec();
                prop_assert!(!legal.is_empty());
                let v = *legal.choose(&mut rng).unwrap();
                s.apply_move(v).unwrap();
                prop_assert!(s.dominated().len() > prev);
                prev = s.dominated().len();
                prop_assert!(s.check_invariants().is_ok());
            }
            prop_assert!(s.move_count() <= g.n());
            let replayed = GameState::replay(g.clone(), Player::Staller, &s.played_labels()).unwrap();
            prop_assert_eq!(replayed.played(), s.played());
        }
    }
}
