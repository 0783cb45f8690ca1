//! Typed async client for the modworld HTTP service.

use reqwest::{Method, StatusCode};
use serde::de::DeserializeOwned;
use serde::Serialize;

use modworld::api::{
    DatasetRequest, ErrorBody, EvalRequest, GameInfo, NewSession, SessionState, StatsRequest, StepReply,
    StepRequest, VariationSummary,
};
use modworld::dataset::{ActionStats, DatasetBundle};
use modworld::game::EpisodeVariation;
use modworld::harness::EvalSummary;
use modworld::{GameId, Split};

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error(transparent)]
    Http(#[from] reqwest::Error),
    #[error("{status}: {}", body.error)]
    Api { status: StatusCode, body: ErrorBody },
}

impl ClientError {
    /// The service's error kind, if the service answered at all.
    pub fn kind(&self) -> Option<&str> {
        match self {
            ClientError::Api { body, .. } => Some(&body.kind),
            ClientError::Http(_) => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Clone, Debug)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    pub fn new(base: impl Into<String>) -> Self {
        Client {
            base: base.into().trim_end_matches('/').to_string(),
            http: reqwest::Client::new(),
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    async fn send(&self, method: Method, path: &str, body: Option<&(impl Serialize + ?Sized)>) -> Result<reqwest::Response> {
        let mut request = self.http.request(method, format!("{}{path}", self.base));
        if let Some(body) = body {
            request = request.json(body);
        }
        let response = request.send().await?;
        let status = response.status();
        if status.is_success() {
            return Ok(response);
        }
        let text = response.text().await?;
        let body = serde_json::from_str(&text).unwrap_or(ErrorBody {
            kind: "http".into(),
            error: text,
        });
        Err(ClientError::Api { status, body })
    }

    async fn call<T: DeserializeOwned>(&self, method: Method, path: &str, body: Option<&(impl Serialize + ?Sized)>) -> Result<T> {
        Ok(self.send(method, path, body).await?.json().await?)
    }

    async fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T> {
        self.call(Method::GET, path, None::<&()>).await
    }

    pub async fn health(&self) -> Result<serde_json::Value> {
        self.get("/health").await
    }

    pub async fn games(&self) -> Result<Vec<GameInfo>> {
        self.get("/games").await
    }

    pub async fn variations(&self, game: GameId, split: Split) -> Result<Vec<VariationSummary>> {
        self.get(&format!("/games/{game}/variations?split={split}")).await
    }

    pub async fn variation(&self, game: GameId, split: Split, index: usize) -> Result<EpisodeVariation> {
        self.get(&format!("/games/{game}/variations/{split}/{index}")).await
    }

    pub async fn new_session(&self, request: &NewSession) -> Result<SessionState> {
        self.call(Method::POST, "/sessions", Some(request)).await
    }

    pub async fn session(&self, id: &str) -> Result<SessionState> {
        self.get(&format!("/sessions/{id}")).await
    }

    pub async fn step(&self, id: &str, action: &str, exact: bool) -> Result<StepReply> {
        let request = StepRequest {
            action: action.to_string(),
            exact,
        };
        self.call(Method::POST, &format!("/sessions/{id}/step"), Some(&request)).await
    }

    pub async fn reset(&self, id: &str) -> Result<SessionState> {
        self.call(Method::POST, &format!("/sessions/{id}/reset"), None::<&()>).await
    }

    pub async fn delete_session(&self, id: &str) -> Result<()> {
        self.send(Method::DELETE, &format!("/sessions/{id}"), None::<&()>).await?;
        Ok(())
    }

    pub async fn eval(&self, request: &EvalRequest) -> Result<EvalSummary> {
        self.call(Method::POST, "/eval", Some(request)).await
    }

    pub async fn stats(&self, request: &StatsRequest) -> Result<ActionStats> {
        self.call(Method::POST, "/stats", Some(request)).await
    }

    pub async fn dataset(&self, request: &DatasetRequest) -> Result<DatasetBundle> {
        self.call(Method::POST, "/datasets", Some(request)).await
    }

    pub async fn kb(&self) -> Result<String> {
        Ok(self.send(Method::GET, "/kb", None::<&()>).await?.text().await?)
    }
}
