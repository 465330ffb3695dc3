//! The POS-CNF game: Player 1 sets unset variables TRUE, Player 2 sets them
//! FALSE, alternately with Player 1 first. Player 1 wins iff the formula ends
//! TRUE.

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::FormulaError;
use crate::formula::Formula;

/// Largest variable count the exact solver accepts.
pub const POSCNF_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PosCnfPlayer {
    #[serde(rename = "player1")]
    Player1,
    #[serde(rename = "player2")]
    Player2,
}

impl PosCnfPlayer {
    pub fn other(self) -> Self {
        match self {
            PosCnfPlayer::Player1 => PosCnfPlayer::Player2,
            PosCnfPlayer::Player2 => PosCnfPlayer::Player1,
        }
    }
}

impl fmt::Display for PosCnfPlayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PosCnfPlayer::Player1 => "Player 1",
            PosCnfPlayer::Player2 => "Player 2",
        })
    }
}

impl FromStr for PosCnfPlayer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "p1" | "player1" => Ok(PosCnfPlayer::Player1),
            "2" | "p2" | "player2" => Ok(PosCnfPlayer::Player2),
            other => Err(format!("unknown POS-CNF player `{other}`")),
        }
    }
}

/// Variables set so far, as bitmasks (bit `i - 1` for variable `i`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "AssignmentJson", try_from = "AssignmentJson")]
pub struct Assignment {
    set_true: u64,
    set_false: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentJson {
    set_true: Vec<usize>,
    set_false: Vec<usize>,
}

impl From<Assignment> for AssignmentJson {
    fn from(a: Assignment) -> Self {
        AssignmentJson { set_true: a.true_vars(), set_false: a.false_vars() }
    }
}

impl TryFrom<AssignmentJson> for Assignment {
    type Error = FormulaError;

    fn try_from(j: AssignmentJson) -> Result<Self, Self::Error> {
        let mut a = Assignment::default();
        for i in j.set_true {
            a.set(i, true)?;
        }
        for i in j.set_false {
            a.set(i, false)?;
        }
        Ok(a)
    }
}

fn bit(i: usize) -> Result<u64, FormulaError> {
    if i == 0 || i > 64 {
        return Err(FormulaError::VariableOutOfRange(i));
    }
    Ok(1u64 << (i - 1))
}

fn vars(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    /// Sets variable `i`. Errors if it is out of range or already set.
    pub fn set(&mut self, i: usize, value: bool) -> Result<(), FormulaError> {
        let b = bit(i)?;
        if (self.set_true | self.set_false) & b != 0 {
            return Err(FormulaError::VariableOutOfRange(i));
        }
        if value {
            self.set_true |= b;
        } else {
            self.set_false |= b;
        }
        Ok(())
    }

    /// Sets variable `i` for `player`: TRUE for Player 1, FALSE for Player 2.
    pub fn play(&mut self, player: PosCnfPlayer, i: usize) -> Result<(), FormulaError> {
        self.set(i, player == PosCnfPlayer::Player1)
    }

    pub fn is_true(&self, i: usize) -> bool {
        bit(i).is_ok_and(|b| self.set_true & b != 0)
    }

    pub fn is_false(&self, i: usize) -> bool {
        bit(i).is_ok_and(|b| self.set_false & b != 0)
    }

    pub fn is_unset(&self, i: usize) -> bool {
        !self.is_true(i) && !self.is_false(i)
    }

    pub fn true_vars(&self) -> Vec<usize> {
        vars(self.set_true)
    }

    pub fn false_vars(&self) -> Vec<usize> {
        vars(self.set_false)
    }

    pub fn set_count(&self) -> usize {
        (self.set_true | self.set_false).count_ones() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosCnfOutcome {
    pub winner: PosCnfPlayer,
    /// Variables chosen alternately from the empty assignment, Player 1 first,
    /// until the game is decided.
    pub pv: Vec<usize>,
}

/// Exact POS-CNF game solver for one formula.
#[derive(Clone, Debug)]
pub struct PosCnf {
    formula: Formula,
    clause_masks: Vec<u64>,
    all: u64,
    memo: FxHashMap<(u64, u64, bool), bool>,
    scores: FxHashMap<(u64, u64, bool), i32>,
}

impl PosCnf {
    pub fn new(formula: &Formula) -> Result<Self, FormulaError> {
        if formula.k() > POSCNF_CAP {
            return Err(FormulaError::TooManyVariables { k: formula.k(), cap: POSCNF_CAP });
        }
        let clause_masks = formula.clauses().iter().map(|c| c.iter().fold(0u64, |m, &i| m | 1 << (i - 1))).collect();
        let all = if formula.k() == 0 { 0 } else { u64::MAX >> (64 - formula.k()) };
        Ok(PosCnf { formula: formula.clone(), clause_masks, all, memo: FxHashMap::default(), scores: FxHashMap::default() })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// The winner if the game is already decided: every clause has a TRUE
    /// variable, or some clause is entirely FALSE.
    pub fn decided(&self, a: &Assignment) -> Option<PosCnfPlayer> {
        if self.clause_masks.iter().any(|&c| c & !a.set_false == 0) {
            Some(PosCnfPlayer::Player2)
        } else if self.clause_masks.iter().all(|&c| c & a.set_true != 0) {
            Some(PosCnfPlayer::Player1)
        } else {
            None
        }
    }

    /// Winner under optimal play from `a` with `mover` to move.
    pub fn winner_from(&mut self, a: &Assignment, mover: PosCnfPlayer) -> PosCnfPlayer {
        if self.p1_wins(a.set_true, a.set_false, mover == PosCnfPlayer::Player1) {
            PosCnfPlayer::Player1
        } else {
            PosCnfPlayer::Player2
        }
    }

    fn p1_wins(&mut self, t: u64, f: u64, p1_to_move: bool) -> bool {
        if self.clause_masks.iter().any(|&c| c & !f == 0) {
            return false;
        }
        if self.clause_masks.iter().all(|&c| c & t != 0) {
            return true;
        }
        let key = (t, f, p1_to_move);
        if let Some(&w) = self.memo.get(&key) {
            return w;
        }
        let mut free = self.all & !(t | f);
        // Some clause is neither satisfied nor falsified, so it has an unset
        // variable and `free` is nonempty.
        let mut result = !p1_to_move;
        while free != 0 {
            let b = free & free.wrapping_neg();
            free &= free - 1;
            let w = if p1_to_move { self.p1_wins(t | b, f, false) } else { self.p1_wins(t, f | b, true) };
            if w == p1_to_move {
                result = w;
                break;
            }
        }
        self.memo.insert(key, result);
        result
    }

    /// Decision score from Player 1's view: `±(DECIDED - plies)` when the
    /// winner is Player 1 (`+`) or Player 2 (`-`) and both sides play
    /// optimally, winners hurrying and losers delaying.
    fn score(&mut self, t: u64, f: u64, p1_to_move: bool) -> i32 {
        const DECIDED: i32 = 1000;
        if self.clause_masks.iter().any(|&c| c & !f == 0) {
            return -DECIDED;
        }
        if self.clause_masks.iter().all(|&c| c & t != 0) {
            return DECIDED;
        }
        let key = (t, f, p1_to_move);
        if let Some(&s) = self.scores.get(&key) {
            return s;
        }
        let mut free = self.all & !(t | f);
        let mut best = if p1_to_move { i32::MIN } else { i32::MAX };
        while free != 0 {
            let b = free & free.wrapping_neg();
            free &= free - 1;
            let s = if p1_to_move { self.score(t | b, f, false) } else { self.score(t, f | b, true) };
            let s = s - s.signum();
            best = if p1_to_move { best.max(s) } else { best.min(s) };
        }
        self.scores.insert(key, best);
        best
    }

    /// A variable whose setting keeps `mover`'s optimal outcome, else the
    /// smallest unset one. Among outcome-keeping moves the one deciding the
    /// game soonest is preferred, then the smallest index.
    pub fn best_move(&mut self, a: &Assignment, mover: PosCnfPlayer) -> Result<usize, FormulaError> {
        let unset: Vec<usize> = (1..=self.formula.k()).filter(|&i| a.is_unset(i)).collect();
        let Some(&first) = unset.first() else {
            return Err(FormulaError::NoUnsetVariable);
        };
        let p1 = mover == PosCnfPlayer::Player1;
        let mut best: Option<(i32, usize)> = None;
        for &i in &unset {
            let mut next = *a;
            next.play(mover, i)?;
            let s = self.score(next.set_true, next.set_false, !p1);
            let own = if p1 { s } else { -s };
            if own > 0 && best.is_none_or(|(b, _)| own > b) {
                best = Some((own, i));
            }
        }
        Ok(best.map_or(first, |(_, i)| i))
    }

    /// Winner from the empty assignment with a principal variation.
    pub fn solve(&mut self) -> Result<PosCnfOutcome, FormulaError> {
        let mut a = Assignment::new();
        let winner = self.winner_from(&a, PosCnfPlayer::Player1);
        let mut mover = PosCnfPlayer::Player1;
        let mut pv = Vec::new();
        while self.decided(&a).is_none() {
            let i = self.best_move(&a, mover)?;
            a.play(mover, i)?;
            pv.push(i);
            mover = mover.other();
        }
        Ok(PosCnfOutcome { winner, pv })
    }
}

pub fn poscnf_winner(f: &Formula) -> Result<PosCnfOutcome, FormulaError> {
    PosCnf::new(f)?.solve()
}

pub fn poscnf_best_move(f: &Formula, a: &Assignment, mover: PosCnfPlayer) -> Result<usize, FormulaError> {
    PosCnf::new(f)?.best_move(a, mover)
}
