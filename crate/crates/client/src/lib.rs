//! Thin HTTP client for the corner-base service.

use cornerbase::harness::{PitReport, StatsRow};
use cornerbase::wire::{
    CreateSession, ErrorBody, MoveReply, PitRequest, RunReply, RunRequest, SessionCreated, StateView,
};
use cornerbase::Move;
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("cannot reach the service: {0}")]
    Transport(#[from] reqwest::Error),
    #[error("service answered {status}: {} ({})", body.message, body.error)]
    Api { status: u16, body: ErrorBody },
}

impl ClientError {
    /// Exit code for a command-line caller.
    pub fn exit_code(&self) -> i32 {
        match self {
            ClientError::Transport(_) => 4,
            ClientError::Api { body, .. } => body.exit_code.unwrap_or(2),
        }
    }
}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base` is the service root, e.g. `http://127.0.0.1:8377`.
    pub fn new(base: impl Into<String>) -> Client {
        Client { base: base.into().trim_end_matches('/').to_string(), http: reqwest::Client::new() }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    async fn decode<T: DeserializeOwned>(resp: reqwest::Response) -> Result<T> {
        let status = resp.status();
        if status.is_success() {
            return Ok(resp.json().await?);
        }
        let text = resp.text().await?;
        let body =
            serde_json::from_str(&text).unwrap_or(ErrorBody { error: "http".into(), message: text, exit_code: None });
        Err(ClientError::Api { status: status.as_u16(), body })
    }

    async fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T> {
        Self::decode(self.http.get(format!("{}{path}", self.base)).send().await?).await
    }

    async fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T> {
        Self::decode(self.http.post(format!("{}{path}", self.base)).json(body).send().await?).await
    }

    pub async fn health(&self) -> Result<()> {
        self.get::<serde_json::Value>("/health").await.map(|_| ())
    }

    pub async fn create_session(&self, req: &CreateSession) -> Result<String> {
        Ok(self.post::<_, SessionCreated>("/sessions", req).await?.session_id)
    }

    pub async fn state(&self, session: &str) -> Result<StateView> {
        self.get(&format!("/sessions/{session}/state")).await
    }

    pub async fn play(&self, session: &str, mv: Move) -> Result<MoveReply> {
        self.post(&format!("/sessions/{session}/moves"), &mv).await
    }

    pub async fn stats(&self, session: &str) -> Result<Vec<StatsRow>> {
        self.get(&format!("/sessions/{session}/stats")).await
    }

    pub async fn run(&self, req: &RunRequest) -> Result<RunReply> {
        self.post("/runs", req).await
    }

    pub async fn pit(&self, req: &PitRequest) -> Result<PitReport> {
        self.post("/pits", req).await
    }
}
