//! In-memory session store with idle expiry.
//!
//! Each session owns one [`SelectionState`] behind its own async mutex, so
//! mutations of one session run in arrival order while other sessions and
//! dataset reads proceed in parallel.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use nvh_core::linking::SelectionState;
use tokio::sync::Mutex as AsyncMutex;
use uuid::Uuid;

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(30 * 60);

pub type SessionHandle = Arc<AsyncMutex<SelectionState>>;

struct Entry {
    state: SessionHandle,
    last_seen: Instant,
}

#[derive(Clone)]
pub struct SessionStore {
    entries: Arc<Mutex<HashMap<String, Entry>>>,
    idle_timeout: Duration,
}

impl SessionStore {
    pub fn new(idle_timeout: Duration) -> Self {
        Self { entries: Arc::default(), idle_timeout }
    }

    pub fn idle_timeout(&self) -> Duration {
        self.idle_timeout
    }

    fn purge(&self, entries: &mut HashMap<String, Entry>, now: Instant) {
        let before = entries.len();
        entries.retain(|_, e| now.duration_since(e.last_seen) < self.idle_timeout);
        let dropped = before - entries.len();
        if dropped > 0 {
            log::info!("expired {dropped} idle session(s)");
        }
    }

    pub fn create(&self) -> String {
        let id = Uuid::new_v4().simple().to_string();
        let now = Instant::now();
        let mut entries = self.entries.lock().expect("session map poisoned");
        self.purge(&mut entries, now);
        entries.insert(id.clone(), Entry { state: SessionHandle::default(), last_seen: now });
        id
    }

    /// Looks a session up and marks it as used; expired sessions are gone.
    pub fn get(&self, id: &str) -> Option<SessionHandle> {
        let now = Instant::now();
        let mut entries = self.entries.lock().expect("session map poisoned");
        self.purge(&mut entries, now);
        let entry = entries.get_mut(id)?;
        entry.last_seen = now;
        Some(entry.state.clone())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for SessionStore {
    fn default() -> Self {
        Self::new(DEFAULT_IDLE_TIMEOUT)
    }
}
