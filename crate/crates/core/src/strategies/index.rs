use std::sync::{Arc, Mutex};

use crate::bitset::VertexSet;
use crate::error::StrategyError;
use crate::game::GameState;
use crate::graph::VertexId;
use crate::poscnf::{Assignment, PosCnf, PosCnfPlayer};
use crate::reduction::{Reduction, Variant};

/// Which gadget of a reduction graph a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    H,
    A,
    B(usize),
    C(usize),
}

/// Per-vertex gadget lookup plus the formula solver, shared between clones
/// of a reduction strategy.
#[derive(Debug)]
pub(crate) struct Index {
    pub red: Reduction,
    pub part: Vec<Part>,
    pub h_set: VertexSet,
    pub a_set: VertexSet,
    pub b_sets: Vec<VertexSet>,
    pub c_sets: Vec<VertexSet>,
    /// `c_1..c_n`
    pub centers: VertexSet,
    /// `a_1..a_k`
    pub a_vertices: VertexSet,
    poscnf: Mutex<PosCnf>,
}

impl Index {
    pub fn new(red: &Reduction, variant: Variant, strategy: &'static str) -> Result<Arc<Index>, StrategyError> {
        if red.variant != variant {
            return Err(StrategyError::NotApplicable {
                strategy,
                reason: format!("built for the `{variant}` variant, got `{}`", red.variant),
            });
        }
        let g = &red.graph;
        let l = &red.layout;
        let n = g.n();
        let mut part = vec![Part::H; n];
        let mut a_set = g.empty_set();
        if let Some(a) = &l.a {
            for v in a.all() {
                part[v] = Part::A;
                a_set.insert(v);
            }
        }
        let mut b_sets = vec![g.empty_set()];
        let mut a_vertices = g.empty_set();
        for i in 1..=l.k() {
            let set = VertexSet::from_iter_with_capacity(n, l.b[i].all());
            for v in set.iter() {
                part[v] = Part::B(i);
            }
            a_vertices.insert(l.b[i].a);
            b_sets.push(set);
        }
        let mut c_sets = vec![g.empty_set()];
        let mut centers = g.empty_set();
        for j in 1..=l.n() {
            let set = VertexSet::from_iter_with_capacity(n, l.c[j].all());
            for v in set.iter() {
                part[v] = Part::C(j);
            }
            centers.insert(l.c[j].c);
            c_sets.push(set);
        }
        let h_set = VertexSet::from_iter_with_capacity(n, l.h.all());
        let poscnf = PosCnf::new(&red.formula)?;
        Ok(Arc::new(Index {
            red: red.clone(),
            part,
            h_set,
            a_set,
            b_sets,
            c_sets,
            centers,
            a_vertices,
            poscnf: Mutex::new(poscnf),
        }))
    }

    pub fn k(&self) -> usize {
        self.red.layout.k()
    }

    pub fn n(&self) -> usize {
        self.red.layout.n()
    }

    pub fn check_graph(&self, state: &GameState, strategy: &'static str) -> Result<(), StrategyError> {
        let g = state.graph();
        if g.n() != self.red.graph.n() || g.labels() != self.red.graph.labels() {
            return Err(StrategyError::NotApplicable { strategy, reason: "the game is not on this reduction graph".into() });
        }
        Ok(())
    }

    pub fn decided(&self, a: &Assignment) -> Option<PosCnfPlayer> {
        self.poscnf.lock().expect("poscnf lock").decided(a)
    }

    pub fn best(&self, a: &Assignment, mover: PosCnfPlayer) -> Result<usize, StrategyError> {
        Ok(self.poscnf.lock().expect("poscnf lock").best_move(a, mover)?)
    }

    /// Dominated set just before the last move.
    pub fn dominated_before_last(state: &GameState) -> VertexSet {
        let g = state.graph();
        let played = state.played();
        let mut d = g.empty_set();
        for &v in &played[..played.len().saturating_sub(1)] {
            d.union_with(g.closed(v));
        }
        d
    }

    /// Clause centers newly dominated by the last move, ascending.
    pub fn new_centers(&self, state: &GameState) -> Vec<usize> {
        let before = Self::dominated_before_last(state);
        (1..=self.n()).filter(|&j| {
            let c = self.red.layout.c[j].c;
            state.dominated().contains(c) && !before.contains(c)
        })
        .collect()
    }

    pub fn first_legal<I: IntoIterator<Item = VertexId>>(state: &GameState, it: I) -> Option<VertexId> {
        it.into_iter().find(|&v| state.is_legal(v))
    }

    /// Dominator's fallback: a legal `c_j`, else `a_i`, else `e_i`, else the
    /// smallest legal vertex.
    pub fn dominator_any(&self, state: &GameState) -> Option<VertexId> {
        let l = &self.red.layout;
        Self::first_legal(state, (1..=l.n()).map(|j| l.c[j].c))
            .or_else(|| Self::first_legal(state, (1..=l.k()).map(|i| l.b[i].a)))
            .or_else(|| Self::first_legal(state, (1..=l.k()).map(|i| l.b[i].e)))
            .or_else(|| state.legal_moves().first())
    }

    /// Staller's fallback: a legal vertex that is neither some `c_j` nor some
    /// `a_i` and dominates as few new vertices as possible (smallest id on
    /// ties); failing that an `a_i`, then a `c_j`.
    pub fn staller_any_within(&self, state: &GameState, within: Option<&VertexSet>) -> Option<VertexId> {
        let mut legal = state.legal_moves();
        if let Some(w) = within {
            legal.intersect_with(w);
        }
        let plain = legal.difference(&self.centers).difference(&self.a_vertices);
        plain
            .iter()
            .min_by_key(|&v| (state.gain(v), v))
            .or_else(|| legal.intersection(&self.a_vertices).first())
            .or_else(|| legal.first())
    }

    /// Slow on the `H` copy: a legal `x_i`, else `y_i`, else any legal `H`
    /// vertex.
    pub fn slow_on_h(&self, state: &GameState) -> Option<VertexId> {
        let h = &self.red.layout.h;
        Self::first_legal(state, h.x.iter().skip(1).copied())
            .or_else(|| Self::first_legal(state, h.y.iter().skip(1).copied()))
            .or_else(|| state.legal_moves().intersection(&self.h_set).first())
    }

    pub fn staller_any(&self, state: &GameState) -> Option<VertexId> {
        self.staller_any_within(state, None)
    }
}
