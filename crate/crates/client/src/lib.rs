//! Async client for the game service.

use cdgame_proto::{ApiError, GameView, GraphDoc, Hint, MoveRequest, NewGame, ReductionRequest, ReductionView};
use reqwest::{RequestBuilder, StatusCode};
use serde::de::DeserializeOwned;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("http: {0}")]
    Http(#[from] reqwest::Error),
    #[error("server answered {status}: {body}")]
    Api { status: StatusCode, body: ApiError },
}

impl ClientError {
    /// The error body, when the server sent one.
    pub fn api(&self) -> Option<&ApiError> {
        match self {
            ClientError::Api { body, .. } => Some(body),
            ClientError::Http(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base` is the server root, e.g. `http://127.0.0.1:8080`.
    pub fn new(base: impl Into<String>) -> Self {
        Client { base: base.into().trim_end_matches('/').to_string(), http: reqwest::Client::new() }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    async fn send<T: DeserializeOwned>(req: RequestBuilder) -> Result<T, ClientError> {
        let resp = req.send().await?;
        let status = resp.status();
        if status.is_success() {
            return Ok(resp.json().await?);
        }
        let body = match resp.json::<ApiError>().await {
            Ok(body) => body,
            Err(e) => ApiError::new("unreadable", e.to_string()),
        };
        Err(ClientError::Api { status, body })
    }

    pub async fn new_game(&self, req: &NewGame) -> Result<GameView, ClientError> {
        Self::send(self.http.post(self.url("/api/game")).json(req)).await
    }

    pub async fn game(&self, id: &str) -> Result<GameView, ClientError> {
        Self::send(self.http.get(self.url(&format!("/api/game/{id}")))).await
    }

    pub async fn play(&self, id: &str, vertex: &str) -> Result<GameView, ClientError> {
        let body = MoveRequest { vertex: vertex.to_string() };
        Self::send(self.http.post(self.url(&format!("/api/game/{id}/move"))).json(&body)).await
    }

    pub async fn hint(&self, id: &str, nodes: Option<u64>) -> Result<Hint, ClientError> {
        let mut path = format!("/api/game/{id}/hint");
        if let Some(n) = nodes {
            path.push_str(&format!("?nodes={n}"));
        }
        Self::send(self.http.get(self.url(&path))).await
    }

    pub async fn reduction(&self, req: &ReductionRequest) -> Result<ReductionView, ClientError> {
        Self::send(self.http.post(self.url("/api/reduction")).json(req)).await
    }

    pub async fn graph(&self, id: &str) -> Result<GraphDoc, ClientError> {
        Self::send(self.http.get(self.url(&format!("/api/graph/{id}")))).await
    }
}
