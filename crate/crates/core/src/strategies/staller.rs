use std::sync::Arc;

use super::index::{Index, Part};
use super::{hash_of, Phase, Strategy, StrategyContext};
use crate::bitset::VertexSet;
use crate::error::StrategyError;
use crate::game::{GameState, Player};
use crate::graph::VertexId;
use crate::poscnf::PosCnfPlayer;
use crate::reduction::{Reduction, Variant};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
enum Mode {
    #[default]
    Opening,
    /// Dominator opened on the top of the spine.
    Spine,
    /// Dominator opened elsewhere on the `H` copy.
    HFirst,
    /// Dominator opened outside the `H` copy: answer on the same side.
    Partition,
    Main,
}

/// Staller walking through the clause gadgets opened by an `a_i`: she plays
/// `c^1_j` and expects `c_j` back before moving to the next one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
struct CSeq {
    i: usize,
    js: Vec<usize>,
    pos: usize,
    awaiting: Option<usize>,
}

#[derive(Clone, Debug, Default, Hash)]
struct Core {
    ctx: StrategyContext,
    mode: Mode,
    /// Moves on the `H` copy when the formula side was entered.
    baseline: usize,
    cseq: Option<CSeq>,
}

impl Core {
    fn moves_on(&self, state: &GameState, set: &VertexSet) -> usize {
        set.intersection(state.played_set()).iter().filter(|v| !self.ctx.pretended_moves.contains(v)).count()
    }

    fn enter_main(&mut self, ix: &Index, state: &GameState, phase: Phase) {
        self.mode = Mode::Main;
        self.ctx.phase = phase;
        self.baseline = ix.h_set.intersection(state.played_set()).len();
    }

    fn any(&self, ix: &Index, state: &GameState) -> Result<VertexId, StrategyError> {
        ix.staller_any(state).ok_or(StrategyError::NoMove("staller-reduction"))
    }

    fn prescribed(&mut self, ix: &Index, state: &GameState, v: VertexId) -> Result<VertexId, StrategyError> {
        if state.is_legal(v) {
            return Ok(v);
        }
        self.ctx.pretended_moves.retain(|&w| w != v);
        self.ctx.owed_actions.push(v);
        self.any(ix, state)
    }

    /// Counting rules that end Phase 1 once Dominator spends extra moves
    /// somewhere.
    fn phase2_triggered(&self, ix: &Index, state: &GameState) -> bool {
        if ix.h_set.intersection(state.played_set()).len() > self.baseline {
            return true;
        }
        if self.moves_on(state, &ix.a_set) >= 4 {
            return true;
        }
        (1..=ix.k()).any(|i| self.moves_on(state, &ix.b_sets[i]) >= 4)
            || (1..=ix.n()).any(|j| self.moves_on(state, &ix.c_sets[j]) >= 3)
    }

    fn decide(&mut self, ix: &Index, state: &GameState) -> Result<VertexId, StrategyError> {
        let l = &ix.red.layout;
        let Some(d) = state.last_move() else {
            return self.any(ix, state);
        };
        if self.ctx.phase == Phase::Phase1 && self.phase2_triggered(ix, state) {
            self.ctx.enter_phase2();
        }
        if let Some(a) = &l.a {
            if d == a.p1 {
                return self.prescribed(ix, state, a.q1);
            }
            if d == a.p2 {
                return self.prescribed(ix, state, a.q2);
            }
            if d == a.q1 {
                self.ctx.enter_phase2();
                return self.any(ix, state);
            }
        }
        if let Some(seq) = &mut self.cseq {
            if let Some(j) = seq.awaiting {
                if d == l.c[j].c {
                    seq.awaiting = None;
                    seq.pos += 1;
                    return self.seq_next(ix, state);
                }
                if ix.a_vertices.contains(d) {
                    // Another a_i: start over with its clause gadgets below.
                    self.cseq = None;
                } else {
                    // Dominator left C_j: stay inside it.
                    self.cseq = None;
                    self.ctx.enter_phase2();
                    let cj = &l.c[j];
                    return match Index::first_legal(state, cj.c_sup.iter().skip(2).copied()) {
                        Some(v) => Ok(v),
                        None => self.any(ix, state),
                    };
                }
            }
        }
        if ix.h_set.contains(d) {
            // Only reachable when the `H` copy was not finished first.
            if let Some(v) = ix.slow_on_h(state) {
                return Ok(v);
            }
        }
        if let Part::B(i) = ix.part[d] {
            if d == l.b[i].a {
                self.cseq = Some(CSeq { i, js: ix.new_centers(state), pos: 0, awaiting: None });
                return self.seq_next(ix, state);
            }
            if self.ctx.phase == Phase::Phase1 {
                return self.on_b(ix, state, i, d);
            }
        }
        self.any(ix, state)
    }

    fn seq_next(&mut self, ix: &Index, state: &GameState) -> Result<VertexId, StrategyError> {
        let l = &ix.red.layout;
        let seq = self.cseq.as_mut().expect("sequence in progress");
        while seq.pos < seq.js.len() {
            let j = seq.js[seq.pos];
            let v = l.c[j].c_sup[1];
            if state.is_legal(v) {
                seq.awaiting = Some(j);
                return Ok(v);
            }
            seq.pos += 1;
        }
        let i = seq.i;
        self.cseq = None;
        if self.ctx.phase == Phase::Phase2 {
            return self.any(ix, state);
        }
        let b = &l.b[i];
        if !ix.b_sets[i].is_subset(state.dominated()) {
            if !state.played_set().contains(b.b) || self.ctx.pretended_moves.contains(&b.b) {
                return self.prescribed(ix, state, b.b);
            }
            self.ctx.enter_phase2();
            return self.prescribed(ix, state, b.f1);
        }
        self.rule2(ix, state, i)
    }

    /// Phase 1, Dominator played `d` on `B_i` (not `a_i`).
    fn on_b(&mut self, ix: &Index, state: &GameState, i: usize, d: VertexId) -> Result<VertexId, StrategyError> {
        let b = &ix.red.layout.b[i];
        if ix.b_sets[i].is_subset(state.dominated()) {
            return self.rule2(ix, state, i);
        }
        let first = self.moves_on(state, &ix.b_sets[i]) == 1;
        if first && d == b.b {
            self.ctx.enter_phase2();
            return self.prescribed(ix, state, b.f1);
        }
        if d == b.e {
            return self.prescribed(ix, state, b.h);
        }
        if d == b.f1 || d == b.f2 {
            self.ctx.enter_phase2();
            let other = if d == b.f1 { b.f2 } else { b.f1 };
            return self.prescribed(ix, state, other);
        }
        self.any(ix, state)
    }

    /// `B_i` became dominated: Player 1 set `X_i` TRUE in the imagined game,
    /// Player 2 answers with some `X_j` FALSE and Staller starts on `B_j`.
    fn rule2(&mut self, ix: &Index, state: &GameState, i: usize) -> Result<VertexId, StrategyError> {
        let assignment = &mut self.ctx.imagined_assignment;
        if !assignment.is_unset(i) {
            return self.any(ix, state);
        }
        assignment.play(PosCnfPlayer::Player1, i)?;
        if ix.decided(assignment).is_some() {
            return self.rule3(ix, state);
        }
        let j = ix.best(assignment, PosCnfPlayer::Player2)?;
        assignment.play(PosCnfPlayer::Player2, j)?;
        let bj = ix.red.layout.b[j];
        match self.moves_on(state, &ix.b_sets[j]) {
            0 => self.prescribed(ix, state, bj.b),
            1 | 2 => {
                self.ctx.enter_phase2();
                self.prescribed(ix, state, bj.f1)
            }
            _ => self.any(ix, state),
        }
    }

    /// The imagined game is over: keep dragging out the variable gadgets, then
    /// open the `A` gadget.
    fn rule3(&mut self, ix: &Index, state: &GameState) -> Result<VertexId, StrategyError> {
        let l = &ix.red.layout;
        let open = (1..=ix.k()).find(|&i| !ix.b_sets[i].is_subset(state.dominated()));
        if let Some(i) = open {
            if self.moves_on(state, &ix.b_sets[i]) == 0 {
                return self.prescribed(ix, state, l.b[i].b);
            }
            let b = &l.b[i];
            if let Some(v) = Index::first_legal(state, b.all().into_iter().filter(|&v| v != b.a)) {
                return Ok(v);
            }
        } else if let Some(a) = &l.a {
            if state.is_legal(a.p1) {
                return Ok(a.p1);
            }
        }
        self.any(ix, state)
    }
}

fn check_turn(state: &GameState, name: &'static str) -> Result<(), StrategyError> {
    if state.is_over() {
        return Err(StrategyError::NoMove(name));
    }
    if state.to_move() != Player::Staller {
        return Err(StrategyError::NotApplicable { strategy: name, reason: "it is Dominator's turn".into() });
    }
    Ok(())
}

/// Staller on `G_F` in the D-game. How she treats the `H` copy depends on
/// Dominator's opening; after `u_0` she plays the formula side in two phases
/// around an imagined POS-CNF game in which she is Player 2.
#[derive(Clone)]
pub struct StallerReduction {
    ix: Arc<Index>,
    parts: Arc<[VertexSet; 2]>,
    core: Core,
}

impl StallerReduction {
    pub fn new(red: &Reduction) -> Result<Self, StrategyError> {
        let ix = Index::new(red, Variant::DGame, "staller-reduction")?;
        let mut h_part = ix.h_set.clone();
        h_part.remove(red.layout.attach);
        let rest = h_part.complement();
        Ok(StallerReduction { ix, parts: Arc::new([h_part, rest]), core: Core::default() })
    }

    pub fn context(&self) -> &StrategyContext {
        &self.core.ctx
    }

    fn partition_reply(&self, state: &GameState, d: VertexId) -> Option<VertexId> {
        let h = &self.ix.red.layout.h;
        let slow = |state: &GameState| {
            (1..h.n).map(|i| h.x[i]).find(|&x| state.is_legal(x)).or_else(|| {
                let mut legal = state.legal_moves();
                legal.intersect_with(&self.parts[0]);
                legal.first()
            })
        };
        let rest = |state: &GameState| self.ix.staller_any_within(state, Some(&self.parts[1]));
        if self.parts[0].contains(d) {
            slow(state).or_else(|| rest(state))
        } else {
            rest(state).or_else(|| slow(state))
        }
    }
}

impl Strategy for StallerReduction {
    fn name(&self) -> &'static str {
        "staller-reduction"
    }

    fn next_move(&mut self, state: &GameState) -> Result<VertexId, StrategyError> {
        const NAME: &str = "staller-reduction";
        self.ix.check_graph(state, NAME)?;
        check_turn(state, NAME)?;
        let l = &self.ix.red.layout;
        let h = &l.h;
        let core = &mut self.core;
        if core.mode == Mode::Opening {
            let d1 = state.played()[0];
            core.mode = if d1 == h.u[h.n] {
                Mode::Spine
            } else if self.ix.h_set.contains(d1) {
                Mode::HFirst
            } else {
                Mode::Partition
            };
        }
        let u0_played = state.played_set().contains(l.attach);
        match core.mode {
            Mode::Spine if u0_played => core.enter_main(&self.ix, state, Phase::Phase1),
            Mode::HFirst if u0_played => {
                core.enter_main(&self.ix, state, Phase::Phase2);
                // The first Staller turn after u_0: it was Dominator's iff it
                // is the last move.
                if state.last_move() == Some(l.attach) {
                    // Take b_1 now, but count it only when it is really needed.
                    let b1 = l.b[1].b;
                    if state.is_legal(b1) {
                        core.ctx.pretended_moves.push(b1);
                        return Ok(b1);
                    }
                }
                return core.any(&self.ix, state);
            }
            _ => {}
        }
        match core.mode {
            Mode::Spine => Index::first_legal(state, h.u.iter().copied()).map_or_else(|| core.any(&self.ix, state), Ok),
            Mode::HFirst => (1..h.n)
                .map(|i| h.x[i])
                .find(|&x| state.is_legal(x))
                .or_else(|| state.is_legal(h.u[0]).then_some(h.u[0]))
                .or_else(|| state.legal_moves().intersection(&self.ix.h_set).first())
                .map_or_else(|| core.any(&self.ix, state), Ok),
            Mode::Partition => {
                let d = state.last_move().expect("Dominator has moved");
                self.partition_reply(state, d).ok_or(StrategyError::NoMove(NAME))
            }
            Mode::Main => core.decide(&self.ix, state),
            Mode::Opening => unreachable!("mode chosen above"),
        }
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(hash_of(&self.core))
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Staller on `G'_F` in the S-game: Slow on the `H_6` copy starting from
/// `u_0`, taking `u_7` herself when the copy runs out, then the D-game
/// formula-side play.
#[derive(Clone)]
pub struct SGameStaller {
    ix: Arc<Index>,
    core: Core,
}

impl SGameStaller {
    pub fn new(red: &Reduction) -> Result<Self, StrategyError> {
        Ok(SGameStaller { ix: Index::new(red, Variant::SGame, "sgame-staller")?, core: Core::default() })
    }

    pub fn context(&self) -> &StrategyContext {
        &self.core.ctx
    }
}

impl Strategy for SGameStaller {
    fn name(&self) -> &'static str {
        "sgame-staller"
    }

    fn next_move(&mut self, state: &GameState) -> Result<VertexId, StrategyError> {
        const NAME: &str = "sgame-staller";
        self.ix.check_graph(state, NAME)?;
        check_turn(state, NAME)?;
        let l = &self.ix.red.layout;
        let h = &l.h;
        let core = &mut self.core;
        if core.mode != Mode::Main && state.played_set().contains(l.attach) {
            let phase = if state.last_move() == Some(l.attach) { Phase::Phase2 } else { Phase::Phase1 };
            core.enter_main(&self.ix, state, phase);
        }
        if core.mode == Mode::Main {
            return core.decide(&self.ix, state);
        }
        if state.played().is_empty() {
            return Ok(h.u[0]);
        }
        (1..h.n)
            .map(|i| h.x[i])
            .find(|&x| state.is_legal(x))
            .or_else(|| state.is_legal(l.attach).then_some(l.attach))
            .or_else(|| state.legal_moves().intersection(&self.ix.h_set).first())
            .map_or_else(|| core.any(&self.ix, state), Ok)
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(hash_of(&self.core))
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
