//! In-memory sessions with immutable revision snapshots.
//!
//! Readers clone the current `Arc<Snapshot>` and never see a mix of two
//! revisions. Writers are serialized per session; a second concurrent
//! update of the same session is rejected rather than queued.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use litscope_core::{load_session, save_session, SessionState};
use litscope_gateway::METADATA_WINDOW;
use parking_lot::RwLock;
use tokio::sync::Mutex;

use crate::engine::{Derived, Engine};
use crate::error::ServiceError;

#[derive(Debug)]
pub struct Snapshot {
    pub revision: u64,
    /// Committed state plus staged marks.
    pub state: SessionState,
    /// Computed from the committed part of `state`.
    pub derived: Arc<Derived>,
    /// Requested metadata window; grows with "load more".
    pub window: usize,
}

pub struct SessionHandle {
    pub id: String,
    current: RwLock<Arc<Snapshot>>,
    writer: Mutex<()>,
    update_gate: Mutex<()>,
}

impl SessionHandle {
    fn new(id: String, snapshot: Snapshot) -> Self {
        SessionHandle {
            id,
            current: RwLock::new(Arc::new(snapshot)),
            writer: Mutex::new(()),
            update_gate: Mutex::new(()),
        }
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().clone()
    }
}

/// What a write needs afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effect {
    /// Staging or read marks: derived artifacts stay valid.
    StateOnly,
    Recompute,
}

/// Updates are exclusive: a concurrent one gets a conflict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WriteKind {
    Edit,
    Update,
}

pub struct SessionStore {
    engine: Engine,
    sessions: RwLock<HashMap<String, Arc<SessionHandle>>>,
    dir: Option<PathBuf>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-')
}

impl SessionStore {
    pub fn new(engine: Engine, dir: Option<PathBuf>) -> Self {
        SessionStore { engine, sessions: RwLock::new(HashMap::new()), dir }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    fn insert(&self, snapshot: Snapshot) -> Arc<SessionHandle> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let handle = Arc::new(SessionHandle::new(id.clone(), snapshot));
        self.sessions.write().insert(id, handle.clone());
        handle
    }

    /// A new empty session at revision 0.
    pub fn create(&self) -> Arc<SessionHandle> {
        self.insert(Snapshot {
            revision: 0,
            state: SessionState::default(),
            derived: Arc::new(Derived::default()),
            window: METADATA_WINDOW,
        })
    }

    /// A new session from a session file, computed and at revision 0.
    pub async fn import(&self, bytes: &[u8]) -> Result<Arc<SessionHandle>, ServiceError> {
        let state = load_session(bytes)?;
        let derived = self.engine.recompute(&state, METADATA_WINDOW).await?;
        let handle = self.insert(Snapshot { revision: 0, state, derived: Arc::new(derived), window: METADATA_WINDOW });
        self.persist(&handle);
        Ok(handle)
    }

    pub async fn get(&self, id: &str) -> Result<Arc<SessionHandle>, ServiceError> {
        if let Some(handle) = self.sessions.read().get(id).cloned() {
            return Ok(handle);
        }
        self.restore(id).await?.ok_or_else(|| ServiceError::NotFound(format!("no session {id:?}")))
    }

    async fn restore(&self, id: &str) -> Result<Option<Arc<SessionHandle>>, ServiceError> {
        let Some(dir) = &self.dir else { return Ok(None) };
        if !valid_id(id) {
            return Ok(None);
        }
        let Ok(bytes) = std::fs::read(dir.join(format!("{id}.json"))) else { return Ok(None) };
        let state = load_session(&bytes)?;
        let derived = self.engine.recompute(&state, METADATA_WINDOW).await?;
        let snapshot = Snapshot { revision: 0, state, derived: Arc::new(derived), window: METADATA_WINDOW };
        let handle = Arc::new(SessionHandle::new(id.to_string(), snapshot));
        let mut sessions = self.sessions.write();
        Ok(Some(sessions.entry(id.to_string()).or_insert(handle).clone()))
    }

    /// Applies `edit` to a copy of the current state and publishes the
    /// result as the next revision.
    pub async fn write<F>(&self, handle: &SessionHandle, kind: WriteKind, edit: F) -> Result<Arc<Snapshot>, ServiceError>
    where
        F: FnOnce(&mut SessionState, &mut usize) -> Result<Effect, ServiceError>,
    {
        let _gate = match kind {
            WriteKind::Update => Some(
                handle
                    .update_gate
                    .try_lock()
                    .map_err(|_| ServiceError::Conflict("another update of this session is in progress".into()))?,
            ),
            WriteKind::Edit => None,
        };
        let _writer = handle.writer.lock().await;
        let current = handle.snapshot();
        let mut state = current.state.clone();
        let mut window = current.window;
        let effect = edit(&mut state, &mut window)?;
        let derived = match effect {
            Effect::StateOnly => current.derived.clone(),
            Effect::Recompute => Arc::new(self.engine.recompute(&state, window).await?),
        };
        let next = Arc::new(Snapshot { revision: current.revision + 1, state, derived, window });
        *handle.current.write() = next.clone();
        self.persist(handle);
        Ok(next)
    }

    /// Saves the committed part of the session when a directory is set.
    fn persist(&self, handle: &SessionHandle) {
        let Some(dir) = &self.dir else { return };
        let mut committed = handle.snapshot().state.clone();
        committed.staged_inclusions.clear();
        committed.staged_exclusions.clear();
        let bytes = save_session(&committed).expect("staging was cleared");
        let path = dir.join(format!("{}.json", handle.id));
        if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, bytes)) {
            tracing::warn!(path = %path.display(), error = %e, "could not persist session");
        }
    }
}
