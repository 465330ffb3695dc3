//! Exact solvers.
//!
//! - [`GameSolver`]: minimax value of the game (Dominator minimizes, Staller
//!   maximizes the number of moves) with a transposition table.
//! - [`gamma_c`]: the connected domination number, optionally with
//!   predominated vertices, by branch and bound.
//! - [`brute_force_value`]: a memo-free, prune-free reference recursion used
//!   as a test oracle.

mod gamma_c;
mod oracle;
mod value;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use gamma_c::gamma_c;
pub(crate) use gamma_c::completion_lower_bound;
pub use oracle::{brute_force_value, ORACLE_LIMIT};
pub use value::{best_move, game_value, game_value_with_prefix, GameSolver, SolverConfig};

/// Search limits. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes: Some(max_nodes), max_time: None }
    }

    pub fn seconds(secs: f64) -> Self {
        Budget { max_nodes: None, max_time: Some(Duration::from_secs_f64(secs)) }
    }

    pub fn with_nodes(mut self, max_nodes: Option<u64>) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn with_time(mut self, max_time: Option<Duration>) -> Self {
        self.max_time = max_time;
        self
    }

    pub fn is_unlimited(&self) -> bool {
        self.max_nodes.is_none() && self.max_time.is_none()
    }
}

/// Raised inside a search when its [`Budget`] runs out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Exhausted;

/// Node counting plus deadline checks, shared by all searches.
#[derive(Debug)]
pub(crate) struct Meter {
    pub nodes: u64,
    start_nodes: u64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

impl Meter {
    pub fn new(budget: Budget) -> Self {
        Meter {
            nodes: 0,
            start_nodes: 0,
            max_nodes: budget.max_nodes,
            deadline: budget.max_time.map(|d| Instant::now() + d),
        }
    }

    /// Restarts the limits for another call while keeping the running total.
    pub fn rearm(&mut self, budget: Budget) {
        self.start_nodes = self.nodes;
        self.max_nodes = budget.max_nodes;
        self.deadline = budget.max_time.map(|d| Instant::now() + d);
    }

    pub fn unlimited(&mut self) {
        self.max_nodes = None;
        self.deadline = None;
    }

    #[inline]
    pub fn tick(&mut self) -> Result<(), Exhausted> {
        self.nodes += 1;
        if let Some(max) = self.max_nodes {
            if self.nodes - self.start_nodes > max {
                return Err(Exhausted);
            }
        }
        if self.nodes & 0xfff == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(Exhausted);
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSide {
    Exact,
    LowerBound,
    UpperBound,
}

/// Outcome of a solve.
///
/// For game values, `pv` is a principal variation from the empty position
/// (prefix moves included). For connected domination numbers it is one
/// optimal set, in ascending id order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub value: usize,
    pub exact: bool,
    pub bound_side: BoundSide,
    /// Proven interval `[lower, upper]` for the true value.
    pub lower: usize,
    pub upper: usize,
    pub pv: Vec<String>,
    pub nodes: u64,
}

impl SolveResult {
    pub(crate) fn exact(value: usize, pv: Vec<String>, nodes: u64) -> Self {
        SolveResult { value, exact: true, bound_side: BoundSide::Exact, lower: value, upper: value, pv, nodes }
    }

    /// A result from an interrupted search. The reported side is the upper
    /// bound when one better than the trivial bound `trivial_upper` was
    /// proven, otherwise the lower bound.
    pub(crate) fn partial(lower: usize, upper: usize, trivial_upper: usize, pv: Vec<String>, nodes: u64) -> Self {
        if lower >= upper {
            return SolveResult::exact(lower, pv, nodes);
        }
        let (value, bound_side) = if upper < trivial_upper {
            (upper, BoundSide::UpperBound)
        } else {
            (lower, BoundSide::LowerBound)
        };
        SolveResult { value, exact: false, bound_side, lower, upper, pv, nodes }
    }
}
