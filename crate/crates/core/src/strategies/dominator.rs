use std::sync::Arc;

use super::index::{Index, Part};
use super::{hash_of, Strategy, StrategyContext};
use crate::error::StrategyError;
use crate::game::{GameState, Player};
use crate::graph::VertexId;
use crate::poscnf::PosCnfPlayer;
use crate::reduction::{Reduction, Variant};

/// Dominator's play on the formula side of a reduction graph, once the `H`
/// copy has been dealt with: rules (1)-(6) around an imagined POS-CNF game in
/// which Dominator is Player 1.
#[derive(Clone, Debug, Default, Hash)]
struct Core {
    ctx: StrategyContext,
    started: bool,
}

impl Core {
    fn decide(&mut self, ix: &Index, state: &GameState) -> Result<VertexId, StrategyError> {
        let l = &ix.red.layout;
        if !self.started {
            // First move on the formula side: `a_i` for Player 1's best opening.
            self.started = true;
            let assignment = &mut self.ctx.imagined_assignment;
            if ix.decided(assignment).is_none() {
                let i = ix.best(assignment, PosCnfPlayer::Player1)?;
                assignment.play(PosCnfPlayer::Player1, i)?;
                return Ok(self.prescribed(ix, state, l.b[i].a));
            }
            return self.any(ix, state);
        }
        let Some(s) = state.last_move() else {
            return self.any(ix, state);
        };
        let dominated = state.dominated();
        // (1) p1 -> p2
        if let Some(a) = &l.a {
            if s == a.p1 {
                return Ok(self.prescribed(ix, state, a.p2));
            }
            // (2) p3 or q2 -> any legal move
            if s == a.p3 || s == a.q2 {
                return self.any(ix, state);
            }
        }
        match ix.part[s] {
            // (3) a move on C_j is answered by c_j
            Part::C(j) => Ok(self.prescribed(ix, state, l.c[j].c)),
            Part::B(i) => {
                let b = &l.b[i];
                let before = Index::dominated_before_last(state);
                if !ix.b_sets[i].is_subset(dominated) {
                    // (4) reply on B_i
                    let earlier = ix.b_sets[i].intersection(state.played_set());
                    let first = earlier.len() == 1;
                    let reply = if first {
                        b.e
                    } else if s == b.e {
                        b.b
                    } else if s == b.b {
                        b.e
                    } else {
                        return Index::first_legal(state, ix.b_sets[i].iter())
                            .map_or_else(|| self.any(ix, state), Ok);
                    };
                    Ok(self.prescribed(ix, state, reply))
                } else if s == b.a && ix.b_sets[i].is_subset(&before) {
                    // (5) a_i on a dominated B_i opened some C_j: take c_j
                    for j in ix.new_centers(state) {
                        self.ctx.bind(j, i);
                        if state.is_legal(l.c[j].c) {
                            return Ok(l.c[j].c);
                        }
                    }
                    self.any(ix, state)
                } else {
                    // (6) Staller finished B_i: Player 2 sets X_i FALSE and
                    // Player 1 answers on some X_j.
                    let assignment = &mut self.ctx.imagined_assignment;
                    if !assignment.is_unset(i) || ix.decided(assignment).is_some() {
                        return self.any(ix, state);
                    }
                    assignment.play(PosCnfPlayer::Player2, i)?;
                    if ix.decided(assignment).is_some() {
                        return self.any(ix, state);
                    }
                    let j = ix.best(assignment, PosCnfPlayer::Player1)?;
                    assignment.play(PosCnfPlayer::Player1, j)?;
                    let bj = &l.b[j];
                    if state.is_legal(bj.a) {
                        return Ok(bj.a);
                    }
                    let finishes = ix.b_sets[j].difference(dominated).is_subset(state.graph().closed(bj.b));
                    if state.is_legal(bj.b) && finishes {
                        return Ok(bj.b);
                    }
                    self.ctx.owed_actions.push(bj.a);
                    self.any(ix, state)
                }
            }
            _ => self.any(ix, state),
        }
    }

    fn prescribed(&mut self, ix: &Index, state: &GameState, v: VertexId) -> VertexId {
        if state.is_legal(v) {
            return v;
        }
        self.ctx.owed_actions.push(v);
        ix.dominator_any(state).expect("an unfinished game has a legal move")
    }

    fn any(&self, ix: &Index, state: &GameState) -> Result<VertexId, StrategyError> {
        ix.dominator_any(state).ok_or(StrategyError::NoMove("dominator-reduction"))
    }
}

fn check_turn(state: &GameState, name: &'static str) -> Result<(), StrategyError> {
    if state.is_over() {
        return Err(StrategyError::NoMove(name));
    }
    if state.to_move() != Player::Dominator {
        return Err(StrategyError::NotApplicable { strategy: name, reason: "it is Staller's turn".into() });
    }
    Ok(())
}

/// Dominator on `G_F` in the D-game: open with the top of the `H` spine,
/// follow the forced spine down to `u_0`, then play the formula-side rules.
#[derive(Clone)]
pub struct DominatorReduction {
    ix: Arc<Index>,
    core: Core,
}

impl DominatorReduction {
    pub fn new(red: &Reduction) -> Result<Self, StrategyError> {
        Ok(DominatorReduction { ix: Index::new(red, Variant::DGame, "dominator-reduction")?, core: Core::default() })
    }

    pub fn context(&self) -> &StrategyContext {
        &self.core.ctx
    }
}

impl Strategy for DominatorReduction {
    fn name(&self) -> &'static str {
        "dominator-reduction"
    }

    fn next_move(&mut self, state: &GameState) -> Result<VertexId, StrategyError> {
        const NAME: &str = "dominator-reduction";
        self.ix.check_graph(state, NAME)?;
        check_turn(state, NAME)?;
        let h = &self.ix.red.layout.h;
        if state.played().is_empty() {
            return Ok(h.u[h.n]);
        }
        if !state.played_set().contains(self.ix.red.layout.attach) {
            // The spine: extend it downwards.
            if let Some(v) = Index::first_legal(state, h.u.iter().copied()) {
                return Ok(v);
            }
            return self.core.any(&self.ix, state);
        }
        self.core.decide(&self.ix, state)
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(hash_of(&self.core))
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Dominator on `G'_F` in the S-game. Until `u_7` is played he heads for it:
/// along the spine if Staller opened on `H_6`, along a shortest path if she
/// opened elsewhere. Afterwards he answers Staller's `H_6` moves on `H_6`
/// (pairing `u_6/u_5`, `u_4/u_3`, `u_2/u_1`) and otherwise plays the D-game
/// formula-side rules.
#[derive(Clone)]
pub struct SGameDominator {
    ix: Arc<Index>,
    dist_to_attach: Arc<Vec<usize>>,
    /// Whether Staller opened on the `H_6` copy, once known.
    opened_on_h: Option<bool>,
    core: Core,
}

impl SGameDominator {
    pub fn new(red: &Reduction) -> Result<Self, StrategyError> {
        let ix = Index::new(red, Variant::SGame, "sgame-dominator")?;
        let g = &red.graph;
        let attach = crate::bitset::VertexSet::from_iter_with_capacity(g.n(), [red.layout.attach]);
        let dist = g.distances_within(&attach, &g.all_vertices());
        Ok(SGameDominator { ix, dist_to_attach: Arc::new(dist), opened_on_h: None, core: Core::default() })
    }

    pub fn context(&self) -> &StrategyContext {
        &self.core.ctx
    }
}

impl Strategy for SGameDominator {
    fn name(&self) -> &'static str {
        "sgame-dominator"
    }

    fn next_move(&mut self, state: &GameState) -> Result<VertexId, StrategyError> {
        const NAME: &str = "sgame-dominator";
        self.ix.check_graph(state, NAME)?;
        check_turn(state, NAME)?;
        let l = &self.ix.red.layout;
        let h = &l.h;
        let legal = state.legal_moves();
        if !state.played_set().contains(l.attach) {
            let ix = &self.ix;
            let opened_on_h =
                *self.opened_on_h.get_or_insert_with(|| state.played().first().is_some_and(|&v| ix.h_set.contains(v)));
            let pick = if opened_on_h {
                (1..=7).rev().map(|i| h.u[i]).find(|&v| legal.contains(v))
            } else {
                legal.iter().min_by_key(|&v| (self.dist_to_attach[v], v))
            };
            return pick.map_or_else(|| self.core.any(&self.ix, state), Ok);
        }
        if let Some(s) = state.last_move() {
            if self.ix.h_set.contains(s) {
                let h_legal = legal.intersection(&self.ix.h_set);
                if !h_legal.is_empty() {
                    let partner = (1..=6).find(|&i| h.u[i] == s).map(|i| if i % 2 == 0 { h.u[i - 1] } else { h.u[i + 1] });
                    let reply = partner
                        .filter(|&p| h_legal.contains(p))
                        .or_else(|| (1..=6).rev().map(|i| h.u[i]).find(|&v| h_legal.contains(v)))
                        .or_else(|| h_legal.first())
                        .expect("nonempty");
                    return Ok(reply);
                }
            }
        }
        self.core.decide(&self.ix, state)
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(hash_of(&(&self.core, self.opened_on_h)))
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
