use std::sync::Arc;

use crate::error::SolveError;
use crate::game::{GameState, Player};
use crate::graph::Graph;

/// Largest graph the oracle accepts. Its running time is factorial.
pub const ORACLE_LIMIT: usize = 14;

/// Game value by plain minimax straight from the rules: no memo, no pruning,
/// no move ordering. It shares nothing with [`super::GameSolver`] beyond
/// [`GameState`].
pub fn brute_force_value(g: &Arc<Graph>, starter: Player) -> Result<usize, SolveError> {
    if g.n() > ORACLE_LIMIT {
        return Err(SolveError::OracleTooLarge { n: g.n(), limit: ORACLE_LIMIT });
    }
    let state = GameState::new(g.clone(), starter)?;
    Ok(minimax(&state))
}

fn minimax(state: &GameState) -> usize {
    if state.is_over() {
        return 0;
    }
    let values = (0..state.graph().n())
        .filter(|&v| state.is_legal(v))
        .map(|v| 1 + minimax(&state.with_move(v).expect("legal move")));
    match state.to_move() {
        Player::Dominator => values.min(),
        Player::Staller => values.max(),
    }
    .expect("an unfinished game has a legal move")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_edges;

    #[test]
    fn small_graphs() {
        let k2 = Arc::new(graph_from_edges(&["x", "y"], &[("x", "y")]).unwrap());
        assert_eq!(brute_force_value(&k2, Player::Dominator).unwrap(), 1);
        assert_eq!(brute_force_value(&k2, Player::Staller).unwrap(), 1);
        let c5 = Arc::new(
            graph_from_edges(&["a", "b", "c", "d", "e"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")])
                .unwrap(),
        );
        assert_eq!(brute_force_value(&c5, Player::Dominator).unwrap(), 3);
        assert_eq!(brute_force_value(&c5, Player::Staller).unwrap(), 3);
    }

    #[test]
    fn refuses_large_graphs() {
        let labels: Vec<String> = (0..15).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let g = Arc::new(crate::graph::path(&refs));
        assert!(matches!(brute_force_value(&g, Player::Dominator), Err(SolveError::OracleTooLarge { .. })));
    }
}
