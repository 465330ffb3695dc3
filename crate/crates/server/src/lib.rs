//! HTTP/JSON service for interactive games. Every response body is JSON;
//! errors use [`cdgame_proto::ApiError`].
//!
//! | route | |
//! |---|---|
//! | `POST /api/game` | start a game ([`NewGame`]) |
//! | `GET /api/game/{id}` | current [`GameView`] |
//! | `POST /api/game/{id}/move` | play `{"vertex": ...}`; the engine answers |
//! | `GET /api/game/{id}/hint?nodes=N` | solver move for the side to move |
//! | `POST /api/reduction` | build `G_F` or `G'_F` from a formula |
//! | `GET /api/graph/{id}` | a registered graph |

mod error;
mod session;

use std::collections::HashMap;
use std::future::Future;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use cdgame_core::gadgets::{GadgetKind, GadgetSpec};
use cdgame_core::graph::GraphJson;
use cdgame_core::reduction::{Reduction, Variant};
use cdgame_core::{Formula, Graph};
use cdgame_proto::{
    GameView, GraphDoc, Hint, HintQuery, MoveRequest, NewGame, ReductionRequest, ReductionView, Targets,
};
use tokio::net::TcpListener;

pub use error::AppError;
use session::{player, Session, StoredGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ServerConfig {
    /// Solver node budget per engine move when the request names none.
    pub engine_nodes: u64,
    /// Solver node budget for hints without `?nodes=`.
    pub hint_nodes: u64,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { engine_nodes: 2_000_000, hint_nodes: 2_000_000 }
    }
}

type Shared<T> = Arc<RwLock<HashMap<String, T>>>;

#[derive(Clone, Default)]
pub struct AppState {
    config: ServerConfig,
    games: Shared<Arc<Mutex<Session>>>,
    graphs: Shared<StoredGraph>,
}

impl AppState {
    pub fn new(config: ServerConfig) -> Self {
        AppState { config, ..Default::default() }
    }

    fn register(&self, stored: StoredGraph) -> String {
        let id = token();
        self.graphs.write().expect("graph registry").insert(id.clone(), stored);
        id
    }

    fn graph(&self, id: &str) -> Result<StoredGraph, AppError> {
        self.graphs.read().expect("graph registry").get(id).cloned().ok_or_else(|| AppError::not_found("graph", id))
    }

    fn game(&self, id: &str) -> Result<Arc<Mutex<Session>>, AppError> {
        self.games.read().expect("game registry").get(id).cloned().ok_or_else(|| AppError::not_found("game", id))
    }
}

fn token() -> String {
    uuid::Uuid::new_v4().simple().to_string()
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/game", post(create_game))
        .route("/api/game/{id}", get(get_game))
        .route("/api/game/{id}/move", post(play_move))
        .route("/api/game/{id}/hint", get(hint))
        .route("/api/reduction", post(create_reduction))
        .route("/api/graph/{id}", get(get_graph))
        .fallback(|| async { AppError { status: StatusCode::NOT_FOUND, body: cdgame_proto::ApiError::new("not-found", "no such route") } })
        .with_state(state)
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    config: ServerConfig,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(AppState::new(config))).with_graceful_shutdown(shutdown).await
}

/// Runs `f` on the blocking pool; solver calls can take seconds.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, AppError> + Send + 'static) -> Result<T, AppError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| AppError::internal(e.to_string()))?
}

fn lock(session: &Mutex<Session>) -> std::sync::MutexGuard<'_, Session> {
    // A panic inside a request leaves the position itself consistent.
    session.lock().unwrap_or_else(|p| p.into_inner())
}

fn parse_formula(text: &str) -> Result<Formula, AppError> {
    // `/` and `;` also separate clauses, for single-line form input.
    text.replace(['/', ';'], "\n").parse().map_err(|e: cdgame_core::FormulaError| AppError::bad_request(e.to_string()))
}

fn build_reduction(formula: &str, variant: Variant, h_size: Option<usize>) -> Result<Reduction, AppError> {
    Ok(Reduction::build(&parse_formula(formula)?, variant, h_size)?)
}

fn variant(v: cdgame_proto::Variant) -> Variant {
    match v {
        cdgame_proto::Variant::D => Variant::DGame,
        cdgame_proto::Variant::S => Variant::SGame,
    }
}

fn doc(g: &Graph) -> GraphDoc {
    let GraphJson { labels, edges } = g.to_json();
    GraphDoc { labels, edges }
}

/// Resolves the graph source of a [`NewGame`] to `(graph id, graph)`.
fn resolve_graph(app: &AppState, req: &NewGame) -> Result<(String, StoredGraph), AppError> {
    let sources = [req.gadget.is_some(), req.formula.is_some(), req.graph.is_some(), req.graph_id.is_some()];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(AppError::bad_request("give exactly one of gadget, formula, graph, graphId"));
    }
    if req.gadget.is_none() && req.param.is_some() {
        return Err(AppError::bad_request("param only applies to gadget"));
    }
    if req.formula.is_none() && (req.variant.is_some() || req.h_size.is_some()) {
        return Err(AppError::bad_request("variant and hSize only apply to formula"));
    }
    if let Some(id) = &req.graph_id {
        return Ok((id.clone(), app.graph(id)?));
    }
    let stored = if let Some(kind) = &req.gadget {
        let kind: GadgetKind = kind.parse().map_err(AppError::bad_request)?;
        StoredGraph { graph: Arc::new(GadgetSpec::new(kind, req.param).build()?), reduction: None }
    } else if let Some(text) = &req.formula {
        let red = build_reduction(text, variant(req.variant.unwrap_or_default()), req.h_size)?;
        StoredGraph { graph: red.graph.clone(), reduction: Some(Arc::new(red)) }
    } else {
        let g = req.graph.as_ref().expect("one source is set");
        let json = GraphJson { labels: g.labels.clone(), edges: g.edges.clone() };
        StoredGraph { graph: Arc::new(Graph::from_json(&json)?), reduction: None }
    };
    Ok((app.register(stored.clone()), stored))
}

async fn create_game(
    State(app): State<AppState>,
    body: Result<Json<NewGame>, JsonRejection>,
) -> Result<(StatusCode, Json<GameView>), AppError> {
    let Json(req) = body?;
    let starter = req.starter.ok_or_else(|| AppError::bad_request("starter is required"))?;
    let nodes = req.engine_nodes.unwrap_or(app.config.engine_nodes);
    let app2 = app.clone();
    let session = blocking(move || {
        let (graph_id, stored) = resolve_graph(&app2, &req)?;
        let mut s = Session::new(token(), graph_id, stored, player(starter), req.engine.map(player), nodes)?;
        let opening = s.run_engine()?;
        let view = s.view(&opening);
        Ok((s, view))
    })
    .await;
    let (session, view) = session?;
    tracing::info!(game = %view.id, graph = %view.graph_id, "game created");
    app.games.write().expect("game registry").insert(session.id.clone(), Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<GameView>, AppError> {
    let session = app.game(&id)?;
    let view = lock(&session).view(&[]);
    Ok(Json(view))
}

async fn play_move(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> Result<Json<GameView>, AppError> {
    let Json(req) = body?;
    let session = app.game(&id)?;
    let view = blocking(move || {
        let mut s = lock(&session);
        let replies = s.play(&req.vertex)?;
        Ok(s.view(&replies))
    })
    .await?;
    Ok(Json(view))
}

async fn hint(
    State(app): State<AppState>,
    Path(id): Path<String>,
    query: Result<Query<HintQuery>, QueryRejection>,
) -> Result<Json<Hint>, AppError> {
    let Query(q) = query?;
    let nodes = q.nodes.unwrap_or(app.config.hint_nodes);
    let session = app.game(&id)?;
    let h = blocking(move || lock(&session).hint(nodes)).await?;
    Ok(Json(h))
}

async fn create_reduction(
    State(app): State<AppState>,
    body: Result<Json<ReductionRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<ReductionView>), AppError> {
    let Json(req) = body?;
    let red = blocking(move || build_reduction(&req.formula, variant(req.variant), req.h_size)).await?;
    let t = red.targets();
    let view_variant = match red.variant {
        Variant::DGame => cdgame_proto::Variant::D,
        Variant::SGame => cdgame_proto::Variant::S,
    };
    let graph = doc(&red.graph);
    let (vertices, edges, h_size) = (red.graph.n(), red.graph.edge_count(), red.h_size);
    let graph_id = app.register(StoredGraph { graph: red.graph.clone(), reduction: Some(Arc::new(red)) });
    Ok((
        StatusCode::CREATED,
        Json(ReductionView {
            graph_id,
            variant: view_variant,
            h_size,
            vertices,
            edges,
            targets: Targets { gamma_c_expected: t.gamma_c_expected, p1_bound: t.p1_bound, p2_bound: t.p2_bound },
            graph,
        }),
    ))
}

async fn get_graph(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<GraphDoc>, AppError> {
    Ok(Json(doc(&app.graph(&id)?.graph)))
}
