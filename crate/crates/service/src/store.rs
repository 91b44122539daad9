//! Live sessions, each behind its own lock, mirrored to one log file apiece.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use uuid::Uuid;

use crate::error::{Result, ServiceError};
use crate::events::{append_events, read_events, Event, SessionConfig};
use crate::session::Session;

pub type SessionHandle = Arc<Mutex<Session>>;

#[derive(Debug, Default)]
pub struct SessionStore {
    /// `None` keeps everything in memory.
    data_dir: Option<PathBuf>,
    sessions: RwLock<HashMap<Uuid, SessionHandle>>,
}

impl SessionStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens a data directory, replaying every `*.jsonl` log in it.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_none_or(|ext| ext != "jsonl") {
                continue;
            }
            let session = load_log(&path)?;
            sessions.insert(session.id(), Arc::new(Mutex::new(session)));
        }
        tracing::info!(dir = %dir.display(), sessions = sessions.len(), "opened session store");
        Ok(Self {
            data_dir: Some(dir),
            sessions: RwLock::new(sessions),
        })
    }

    pub fn log_path(&self, id: Uuid) -> Option<PathBuf> {
        self.data_dir
            .as_ref()
            .map(|d| d.join(format!("{id}.jsonl")))
    }

    pub fn create(&self, config: SessionConfig) -> Result<SessionHandle> {
        let id = config.session_id;
        let (session, event) = Session::create(config)?;
        let mut sessions = self.sessions.write();
        if sessions.contains_key(&id) {
            return Err(ServiceError::conflict("session id already exists"));
        }
        self.persist(id, &[event])?;
        let handle = Arc::new(Mutex::new(session));
        sessions.insert(id, handle.clone());
        Ok(handle)
    }

    pub fn get(&self, id: Uuid) -> Result<SessionHandle> {
        self.sessions
            .read()
            .get(&id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(id.to_string()))
    }

    pub fn ids(&self) -> Vec<Uuid> {
        let mut ids: Vec<Uuid> = self.sessions.read().keys().copied().collect();
        ids.sort();
        ids
    }

    /// Appends events for a session; call while holding that session's lock.
    pub fn persist(&self, id: Uuid, events: &[Event]) -> Result<()> {
        match self.log_path(id) {
            Some(path) => append_events(&path, events),
            None => Ok(()),
        }
    }
}

/// Replays one log file, writing back any events a crash left out.
pub fn load_log(path: &Path) -> Result<Session> {
    let events = read_events(path, true)?;
    let (session, repair) = Session::replay(&events)?;
    append_events(path, &repair)?;
    Ok(session)
}

/// Replays a log without touching the file.
pub fn read_log(path: &Path) -> Result<Session> {
    let events = read_events(path, false)?;
    Ok(Session::replay(&events)?.0)
}
