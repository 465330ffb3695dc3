use super::Strategy;
use crate::error::StrategyError;
use crate::gadgets::HnIds;
use crate::game::GameState;
use crate::graph::VertexId;

fn locate(state: &GameState, strategy: &'static str) -> Result<HnIds, StrategyError> {
    HnIds::locate(state.graph(), "")
        .or_else(|| HnIds::locate(state.graph(), "H:"))
        .ok_or_else(|| StrategyError::NotApplicable { strategy, reason: "no H_n found in the vertex labels".into() })
}

/// Dominator on `H_n`: open with `u_n`, then extend the spine downwards.
/// After the opening every move is forced.
#[derive(Clone, Debug, Default)]
pub struct Fast {
    ids: Option<HnIds>,
}

impl Fast {
    pub fn new() -> Self {
        Fast::default()
    }
}

impl Strategy for Fast {
    fn name(&self) -> &'static str {
        "fast"
    }

    fn next_move(&mut self, state: &GameState) -> Result<VertexId, StrategyError> {
        if self.ids.is_none() {
            self.ids = Some(locate(state, "fast")?);
        }
        let h = self.ids.as_ref().expect("located");
        if state.is_over() {
            return Err(StrategyError::NoMove("fast"));
        }
        if state.played().is_empty() {
            return Ok(h.u[h.n]);
        }
        let lowest = (1..=h.n + 1).find(|&i| state.played_set().contains(h.u[i]));
        if let Some(i) = lowest {
            if state.is_legal(h.u[i - 1]) && i > 1 {
                return Ok(h.u[i - 1]);
            }
        }
        state.legal_moves().first().ok_or(StrategyError::NoMove("fast"))
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(0)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Staller on `H_n`: open with `u_0`, then take `x_1, ..., x_{n-1}` whenever
/// one is legal.
#[derive(Clone, Debug, Default)]
pub struct Slow {
    ids: Option<HnIds>,
}

impl Slow {
    pub fn new() -> Self {
        Slow::default()
    }
}

impl Strategy for Slow {
    fn name(&self) -> &'static str {
        "slow"
    }

    fn next_move(&mut self, state: &GameState) -> Result<VertexId, StrategyError> {
        if self.ids.is_none() {
            self.ids = Some(locate(state, "slow")?);
        }
        let h = self.ids.as_ref().expect("located");
        if state.is_over() {
            return Err(StrategyError::NoMove("slow"));
        }
        if state.played().is_empty() {
            return Ok(h.u[0]);
        }
        (1..h.n)
            .map(|i| h.x[i])
            .find(|&x| state.is_legal(x))
            .or_else(|| state.legal_moves().first())
            .ok_or(StrategyError::NoMove("slow"))
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(0)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
