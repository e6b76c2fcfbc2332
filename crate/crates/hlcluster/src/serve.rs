//! JSON endpoints over one in-memory session seed.

use std::sync::Arc;

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::Mutex;

use crate::error::Error;
use crate::gridseeds::{initial_seed, TrackedSeed};
use crate::heights::HeightFunction;
use crate::hl::q_xi_seed;
use crate::oracle::{init_oracle, LaurentSeed};
use crate::sequences::to_sm_prime;

pub enum Session {
    Tracked(TrackedSeed),
    /// Oracle seed with the vertices mutated so far.
    Oracle(LaurentSeed, Vec<String>),
}

pub type Shared = Arc<Mutex<Session>>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadRequest {
    pub xi: Option<Vec<i64>>,
    pub n: Option<usize>,
    pub ell: Option<i64>,
    pub r: Option<i64>,
    /// Load the Laurent-polynomial seed of `xi` instead of the tracked one.
    #[serde(default)]
    pub oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutateRequest {
    pub vertex: String,
}

pub struct ApiError(StatusCode, String);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoSuchVertex(_) => StatusCode::NOT_FOUND,
            Error::Incomparable { .. } | Error::NotDominant(_) | Error::InexactDivision(_) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError(code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult = std::result::Result<Json<Value>, ApiError>;

/// Builds the seed a load request names:
/// `{xi}` gives Q_xi with its labels at depth `r` (default 1), `{xi, r, ell}` the grid
/// seed after the grid sequences, and `{n, ell}` the initial grid seed.
pub fn load_session(req: &LoadRequest) -> crate::Result<Session> {
    match (&req.xi, req.n, req.ell) {
        (Some(xi), _, ell) => {
            let xi = HeightFunction::new(xi.clone())?;
            if req.oracle {
                return Ok(Session::Oracle(init_oracle(&xi), Vec::new()));
            }
            let r = req.r.unwrap_or(1);
            match ell {
                Some(ell) => Ok(Session::Tracked(to_sm_prime(&xi, r, ell)?.seed)),
                None => Ok(Session::Tracked(q_xi_seed(&xi, r)?)),
            }
        }
        (None, Some(n), Some(ell)) => {
            if let Some(r) = req.r {
                if r < 1 || r >= ell {
                    return Err(Error::InvalidSpec(format!("need 1 <= r < ell, got r={r}, ell={ell}")));
                }
            }
            Ok(Session::Tracked(initial_seed(n, ell)?))
        }
        _ => Err(Error::InvalidSpec("load needs xi, or n and ell".into())),
    }
}

pub fn seed_value(s: &Session) -> Value {
    match s {
        Session::Tracked(t) => serde_json::to_value(t.to_json_value()).unwrap_or(Value::Null),
        Session::Oracle(o, hist) => {
            let labels: serde_json::Map<String, Value> =
                o.labels().into_iter().map(|(k, v)| (k, Value::String(v.to_string()))).collect();
            json!({ "quiver": o.quiver.to_json_value(), "labels": labels, "log": log_value(s), "mutated": hist })
        }
    }
}

pub fn log_value(s: &Session) -> Value {
    match s {
        Session::Tracked(t) => serde_json::to_value(&t.log).unwrap_or(Value::Null),
        Session::Oracle(_, hist) => Value::Array(hist.iter().map(|v| json!({ "vertex": v })).collect()),
    }
}

async fn get_seed(State(st): State<Shared>) -> Json<Value> {
    Json(seed_value(&*st.lock().await))
}

async fn get_log(State(st): State<Shared>) -> Json<Value> {
    Json(log_value(&*st.lock().await))
}

/// Mutates the session seed at `vertex` and returns the exchange record.
pub fn mutate_session(s: &mut Session, vertex: &str) -> crate::Result<Value> {
    match s {
        Session::Tracked(t) => Ok(serde_json::to_value(t.mutate(vertex)?).unwrap_or(Value::Null)),
        Session::Oracle(o, hist) => {
            o.mutate(vertex)?;
            hist.push(vertex.to_string());
            Ok(json!({ "vertex": vertex, "new": o.label(vertex)?.to_string() }))
        }
    }
}

/// Reverts the last mutation; `null` when there was none.
pub fn undo_session(s: &mut Session) -> crate::Result<Value> {
    match s {
        Session::Tracked(t) => Ok(serde_json::to_value(t.undo()?).unwrap_or(Value::Null)),
        Session::Oracle(o, hist) => match hist.pop() {
            Some(v) => {
                o.mutate(&v)?;
                Ok(json!({ "vertex": v }))
            }
            None => Ok(Value::Null),
        },
    }
}

async fn post_mutate(State(st): State<Shared>, Json(req): Json<MutateRequest>) -> ApiResult {
    Ok(Json(mutate_session(&mut *st.lock().await, &req.vertex)?))
}

async fn post_undo(State(st): State<Shared>) -> ApiResult {
    Ok(Json(undo_session(&mut *st.lock().await)?))
}

async fn post_load(State(st): State<Shared>, Json(req): Json<LoadRequest>) -> ApiResult {
    let fresh = load_session(&req)?;
    let mut s = st.lock().await;
    *s = fresh;
    Ok(Json(seed_value(&s)))
}

pub fn router(initial: Session) -> Router {
    Router::new()
        .route("/seed", get(get_seed))
        .route("/log", get(get_log))
        .route("/mutate", post(post_mutate))
        .route("/undo", post(post_undo))
        .route("/load", post(post_load))
        .with_state(Arc::new(Mutex::new(initial)))
}

pub async fn serve(port: u16, initial: Session) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    axum::serve(listener, router(initial)).await
}
