//! A manually advanced virtual clock and its timeout events.

use std::fmt;
use std::sync::Arc;

use parking_lot::{ArcMutexGuard, Mutex, RawMutex};

use super::channel::next_object_id;
use super::event::{BaseOp, Event, Guard};
use super::token::{Payload, Token};

struct Sleeper {
    deadline: u64,
    token: Arc<Token>,
    branch: usize,
}

struct ClockState {
    now: u64,
    sleepers: Vec<Sleeper>,
}

type ClockGuard = ArcMutexGuard<RawMutex, ClockState>;

/// Virtual time in milliseconds, starting at 0. Time moves only through
/// [`advance_to`](Self::advance_to) and never backwards.
#[derive(Clone)]
pub struct VirtualClock {
    id: u64,
    state: Arc<Mutex<ClockState>>,
}

impl fmt::Debug for VirtualClock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VirtualClock({} ms)", self.now())
    }
}

impl Default for VirtualClock {
    fn default() -> Self {
        Self::new()
    }
}

impl VirtualClock {
    pub fn new() -> Self {
        VirtualClock {
            id: next_object_id(),
            state: Arc::new(Mutex::new(ClockState {
                now: 0,
                sleepers: Vec::new(),
            })),
        }
    }

    pub fn now(&self) -> u64 {
        self.state.lock().now
    }

    /// Moves time forward to `t` (a no-op when `t` is not ahead) and commits
    /// every timeout whose deadline has been reached, earliest first.
    pub fn advance_to(&self, t: u64) {
        let mut st = self.state.lock();
        if t <= st.now {
            return;
        }
        st.now = t;
        st.sleepers.retain(|s| s.token.is_waiting());
        st.sleepers.sort_by_key(|s| s.deadline);
        let due = st.sleepers.partition_point(|s| s.deadline <= t);
        for s in st.sleepers.drain(..due) {
            if s.token.claim() {
                s.token.deliver(s.branch, Box::new(()));
            }
        }
    }

    /// An event that commits once the clock reads at least `deadline`.
    pub fn timeout_evt(&self, deadline: u64) -> Event<()> {
        Event::base(
            Arc::new(TimeoutOp {
                clock: self.clone(),
                deadline,
            }),
            Arc::new(|_| ()),
        )
    }

    /// A timeout `delta` milliseconds after the current reading.
    pub fn after_evt(&self, delta: u64) -> Event<()> {
        self.timeout_evt(self.now().saturating_add(delta))
    }
}

struct TimeoutOp {
    clock: VirtualClock,
    deadline: u64,
}

impl TimeoutOp {
    fn guard(guard: &mut Guard) -> &mut ClockGuard {
        guard.downcast_mut::<ClockGuard>().expect("clock guard type")
    }
}

impl BaseOp for TimeoutOp {
    fn lock_key(&self) -> Option<u64> {
        Some(self.clock.id)
    }

    fn lock(&self) -> Guard {
        Box::new(self.clock.state.lock_arc())
    }

    fn poll(&self, guard: &mut Guard) -> bool {
        Self::guard(guard).now >= self.deadline
    }

    fn complete(&self, guard: &mut Guard) -> Option<Payload> {
        (Self::guard(guard).now >= self.deadline).then(|| Box::new(()) as Payload)
    }

    fn enroll(&self, guard: &mut Guard, token: &Arc<Token>, branch: usize) {
        let st = Self::guard(guard);
        st.sleepers.retain(|s| s.token.is_waiting());
        st.sleepers.push(Sleeper {
            deadline: self.deadline,
            token: Arc::clone(token),
            branch,
        });
    }
}
