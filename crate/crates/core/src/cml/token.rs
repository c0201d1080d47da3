//! The single-use commit token shared by all enrollments of one blocked sync.

use std::any::Any;
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use super::activity::ActivityGroup;

pub(crate) type Payload = Box<dyn Any + Send>;

const WAITING: u8 = 0;
const SYNCHED: u8 = 1;
const CANCELLED: u8 = 2;

pub(crate) struct Token {
    state: AtomicU8,
    slot: Mutex<Option<(usize, Payload)>>,
    delivered: Condvar,
    group: Option<ActivityGroup>,
}

impl Token {
    pub(crate) fn new(group: Option<ActivityGroup>) -> Self {
        Token {
            state: AtomicU8::new(WAITING),
            slot: Mutex::new(None),
            delivered: Condvar::new(),
            group,
        }
    }

    pub(crate) fn is_waiting(&self) -> bool {
        self.state.load(Ordering::Acquire) == WAITING
    }

    /// Atomically takes the right to commit this sync. At most one caller
    /// ever succeeds; the winner must follow up with [`deliver`](Self::deliver).
    pub(crate) fn claim(&self) -> bool {
        let won = self
            .state
            .compare_exchange(WAITING, SYNCHED, Ordering::AcqRel, Ordering::Acquire)
            .is_ok();
        if won {
            if let Some(g) = &self.group {
                g.begin();
            }
        }
        won
    }

    pub(crate) fn deliver(&self, branch: usize, payload: Payload) {
        let mut slot = self.slot.lock().unwrap();
        debug_assert!(slot.is_none(), "token delivered twice");
        *slot = Some((branch, payload));
        self.delivered.notify_one();
    }

    fn release_count(&self) {
        if let Some(g) = &self.group {
            g.end();
        }
    }

    pub(crate) fn wait(&self) -> (usize, Payload) {
        self.release_count();
        let mut slot = self.slot.lock().unwrap();
        loop {
            if let Some(d) = slot.take() {
                return d;
            }
            slot = self.delivered.wait(slot).unwrap();
        }
    }

    /// Waits at most `limit`; on expiry the token is cancelled unless a
    /// partner claimed it first, in which case the delivery is awaited.
    pub(crate) fn wait_timeout(&self, limit: Duration) -> Option<(usize, Payload)> {
        self.release_count();
        let deadline = Instant::now() + limit;
        let mut slot = self.slot.lock().unwrap();
        loop {
            if let Some(d) = slot.take() {
                return Some(d);
            }
            let now = Instant::now();
            if now >= deadline {
                let cancelled = self
                    .state
                    .compare_exchange(WAITING, CANCELLED, Ordering::AcqRel, Ordering::Acquire)
                    .is_ok();
                if cancelled {
                    if let Some(g) = &self.group {
                        g.begin();
                    }
                    return None;
                }
                // claimed concurrently; the delivery is imminent
                while slot.is_none() {
                    slot = self.delivered.wait(slot).unwrap();
                }
                continue;
            }
            slot = self.delivered.wait_timeout(slot, deadline - now).unwrap().0;
        }
    }
}
