//! In-memory game sessions with LRU eviction.

use std::collections::HashMap;
use std::time::{SystemTime, UNIX_EPOCH};

use chipfire::engine::single_move;
use chipfire::{Divisor, GraphError, Instance, LowerBound, Move};
use indexmap::IndexMap;
use serde::Serialize;
use uuid::Uuid;

pub const DEFAULT_SESSION_CAP: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Greedy,
    Optimal,
}

/// A hint, or `None` when no move is needed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hint {
    #[serde(flatten)]
    pub next: Move,
    pub rationale: String,
    pub remaining_estimate: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub instance: Instance,
    pub current: Divisor,
    /// Human moves since the start, oldest first.
    pub history: Vec<Move>,
    pub created_at: SystemTime,
    /// Greedy move count from the starting divisor, when greedy settles.
    pub m0: Option<u64>,
    pub bound: Option<LowerBound>,
    hints: HashMap<(Strategy, Divisor), Option<Hint>>,
}

impl Session {
    pub fn new(instance: Instance, m0: Option<u64>, bound: Option<LowerBound>) -> Self {
        Session {
            id: Uuid::new_v4().to_string(),
            current: instance.divisor.clone(),
            instance,
            history: Vec::new(),
            created_at: SystemTime::now(),
            m0,
            bound,
            hints: HashMap::new(),
        }
    }

    pub fn apply(&mut self, m: Move) -> Result<&Divisor, GraphError> {
        self.current = single_move(&self.instance.graph, &self.current, m)?;
        self.history.push(m);
        Ok(&self.current)
    }

    /// `None` when there is nothing to undo.
    pub fn undo(&mut self) -> Option<&Divisor> {
        let last = self.history.pop()?;
        self.current = single_move(&self.instance.graph, &self.current, last.inverse())
            .expect("inverse of an applied move is applicable");
        Some(&self.current)
    }

    /// The divisor reached by replaying `history` from the start.
    pub fn replay(&self) -> Result<Divisor, GraphError> {
        self.history
            .iter()
            .try_fold(self.instance.divisor.clone(), |c, m| {
                single_move(&self.instance.graph, &c, *m)
            })
    }

    pub fn is_done(&self) -> bool {
        self.instance
            .side
            .is_done(&self.instance.graph, self.current.values())
    }

    pub fn cached_hint(&self, strategy: Strategy, state: &Divisor) -> Option<&Option<Hint>> {
        self.hints.get(&(strategy, state.clone()))
    }

    pub fn cache_hint(&mut self, strategy: Strategy, state: Divisor, hint: Option<Hint>) {
        self.hints.insert((strategy, state), hint);
    }

    pub fn view(&self) -> SessionView {
        let g = &self.instance.graph;
        SessionView {
            id: self.id.clone(),
            side: self.instance.side.to_string(),
            state: self.current.clone(),
            history: self.history.clone(),
            move_count: self.history.len() as u64,
            is_effective: self.current.is_effective(),
            is_stable: g.is_stable(&self.current).unwrap_or(false),
            done: self.is_done(),
            m0: self.m0,
            bound: self.bound,
            created_at: self
                .created_at
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SessionView {
    pub id: String,
    pub side: String,
    pub state: Divisor,
    pub history: Vec<Move>,
    pub move_count: u64,
    pub is_effective: bool,
    pub is_stable: bool,
    /// Effective on the dollar side, stable on the chip side.
    pub done: bool,
    pub m0: Option<u64>,
    pub bound: Option<LowerBound>,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
}

/// Sessions in least-recently-used order (front is evicted first).
#[derive(Debug)]
pub struct SessionStore {
    cap: usize,
    sessions: IndexMap<String, Session>,
}

impl SessionStore {
    /// A zero cap is treated as one.
    pub fn new(cap: usize) -> Self {
        SessionStore {
            cap: cap.max(1),
            sessions: IndexMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    /// Returns the new session's id.
    pub fn insert(&mut self, session: Session) -> String {
        while self.sessions.len() >= self.cap {
            self.sessions.shift_remove_index(0);
        }
        let id = session.id.clone();
        self.sessions.insert(id.clone(), session);
        id
    }

    /// Looks up a session and marks it most recently used.
    pub fn get_mut(&mut self, id: &str) -> Option<&mut Session> {
        let index = self.sessions.get_index_of(id)?;
        let last = self.sessions.len() - 1;
        self.sessions.move_index(index, last);
        self.sessions.get_index_mut(last).map(|(_, s)| s)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.sessions.contains_key(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chipfire::families::intro_example;

    fn session() -> Session {
        Session::new(intro_example(), Some(4), None)
    }

    #[test]
    fn moves_and_undo_replay() {
        let mut s = session();
        s.apply(Move::lend(4)).unwrap();
        assert_eq!(s.current.values(), &[0, 0, 2, 0, 0, 4]);
        assert!(s.is_done());
        s.apply(Move::borrow(0)).unwrap();
        assert_eq!(s.replay().unwrap(), s.current);
        assert_eq!(s.undo().unwrap().values(), &[0, 0, 2, 0, 0, 4]);
        let start = s.instance.divisor.clone();
        assert_eq!(s.undo().unwrap(), &start);
        assert!(s.undo().is_none());
        assert!(s.apply(Move::lend(6)).is_err());
        assert!(s.history.is_empty());
    }

    #[test]
    fn lru_eviction() {
        let mut store = SessionStore::new(2);
        let a = store.insert(session());
        let b = store.insert(session());
        assert!(store.get_mut(&a).is_some());
        let c = store.insert(session());
        assert_eq!(store.len(), 2);
        assert!(store.contains(&a));
        assert!(!store.contains(&b));
        assert!(store.contains(&c));
    }

    #[test]
    fn view_json() {
        let s = session();
        let v = serde_json::to_value(s.view()).unwrap();
        assert_eq!(v["state"], serde_json::json!([-1, 0, 2, 0, 2, 3]));
        assert_eq!(v["side"], "dollar");
        assert_eq!(v["is_effective"], false);
        assert_eq!(v["move_count"], 0);
    }
}
