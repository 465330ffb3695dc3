//! Request and response bodies of the game service. Field names are
//! camelCase on the wire; unknown request fields are rejected.

use serde::{Deserialize, Serialize};

/// A player. Accepts `"d"`/`"s"` as well as the full names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "dominator", alias = "d")]
    Dominator,
    #[serde(rename = "staller", alias = "s")]
    Staller,
}

/// Which reduction graph: `G_F` (D-game) or `G'_F` (S-game).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[default]
    #[serde(rename = "d")]
    D,
    #[serde(rename = "s")]
    S,
}

/// `{"labels":[...],"edges":[["a","b"],...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub labels: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

/// Starts a game. Exactly one graph source must be given: a gadget
/// (`gadget` plus `param` where needed), a formula, an inline graph, or the
/// id of a graph registered earlier.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct NewGame {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gadget: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_id: Option<String>,
    pub starter: Option<Side>,
    /// The side the server plays. Absent: both sides are played by the client.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<Side>,
    /// Node budget per engine move before falling back to a scripted strategy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine_nodes: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    pub vertex: String,
}

/// The full position after a request.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct GameView {
    pub id: String,
    pub graph_id: String,
    pub starter: Side,
    /// `None` once the game is over.
    pub to_move: Option<Side>,
    pub played: Vec<String>,
    pub dominated: Vec<String>,
    pub legal: Vec<String>,
    pub over: bool,
    pub moves: usize,
    pub engine: Option<Side>,
    /// Moves the engine made while handling this request.
    pub engine_moves: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HintQuery {
    pub nodes: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hint {
    #[serde(rename = "move")]
    pub vertex: String,
    /// Total game length under optimal play from here, including moves made.
    pub value: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ReductionRequest {
    pub formula: String,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default)]
    pub h_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct Targets {
    pub gamma_c_expected: Option<usize>,
    pub p1_bound: usize,
    pub p2_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ReductionView {
    pub graph_id: String,
    pub variant: Variant,
    pub h_size: usize,
    pub vertices: usize,
    pub edges: usize,
    pub targets: Targets,
    pub graph: GraphDoc,
}

/// Error body. `error` is a stable code: `illegal-move`, `not-found`,
/// `unknown-vertex`, `bad-request`, `game-over`, `not-your-turn` or `internal`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApiError {
    pub error: String,
    /// For `illegal-move`: `no-new-domination` or `disconnected`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cause: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl ApiError {
    pub fn new(error: &str, message: impl Into<String>) -> Self {
        ApiError { error: error.to_string(), cause: None, message: Some(message.into()) }
    }

    pub fn illegal(cause: &str) -> Self {
        ApiError { error: "illegal-move".into(), cause: Some(cause.to_string()), message: None }
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.error)?;
        if let Some(c) = &self.cause {
            write!(f, " ({c})")?;
        }
        if let Some(m) = &self.message {
            write!(f, ": {m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_game_accepts_the_short_forms() {
        let g: NewGame = serde_json::from_str(r#"{"gadget":"h","param":3,"starter":"d","engine":"staller"}"#).unwrap();
        assert_eq!(g.starter, Some(Side::Dominator));
        assert_eq!(g.engine, Some(Side::Staller));
        assert_eq!(g.param, Some(3));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<NewGame>(r#"{"gadget":"h","starter":"d","colour":1}"#).is_err());
        assert!(serde_json::from_str::<MoveRequest>(r#"{"vertex":"a","x":0}"#).is_err());
    }

    #[test]
    fn hint_uses_move_on_the_wire() {
        let h = Hint { vertex: "u2".into(), value: 3, exact: true };
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"move":"u2","value":3,"exact":true}"#);
    }

    #[test]
    fn game_view_is_camel_case() {
        let v = GameView {
            id: "x".into(),
            graph_id: "g".into(),
            starter: Side::Dominator,
            to_move: Some(Side::Dominator),
            played: vec![],
            dominated: vec![],
            legal: vec!["a".into()],
            over: false,
            moves: 0,
            engine: None,
            engine_moves: vec![],
        };
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains(r#""toMove":"dominator""#) && text.contains(r#""graphId":"g""#));
    }

    #[test]
    fn illegal_move_body() {
        let e = ApiError::illegal("disconnected");
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"{"error":"illegal-move","cause":"disconnected"}"#);
    }
}
