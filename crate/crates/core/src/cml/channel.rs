//! Unbuffered rendezvous channels.

use std::collections::VecDeque;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::{ArcMutexGuard, Mutex, RawMutex};

use super::event::{BaseOp, Event, Guard};
use super::token::{Payload, Token};

static NEXT_OBJECT: AtomicU64 = AtomicU64::new(1);

/// Creation index shared by every lockable synchronization object; locks are
/// always taken in ascending order of it.
pub(crate) fn next_object_id() -> u64 {
    NEXT_OBJECT.fetch_add(1, Ordering::Relaxed)
}

struct SendWaiter<T> {
    token: Arc<Token>,
    branch: usize,
    value: T,
}

struct RecvWaiter {
    token: Arc<Token>,
    branch: usize,
}

pub(crate) struct ChanState<T> {
    senders: VecDeque<SendWaiter<T>>,
    receivers: VecDeque<RecvWaiter>,
}

impl<T> ChanState<T> {
    fn purge(&mut self) {
        self.senders.retain(|w| w.token.is_waiting());
        self.receivers.retain(|w| w.token.is_waiting());
    }
}

type ChanGuard<T> = ArcMutexGuard<RawMutex, ChanState<T>>;

/// A zero-capacity channel carrying `T`. Any number of threads may send and
/// receive; a value moves only when a sender and a receiver commit together.
pub struct Channel<T> {
    id: u64,
    state: Arc<Mutex<ChanState<T>>>,
}

impl<T> Clone for Channel<T> {
    fn clone(&self) -> Self {
        Channel {
            id: self.id,
            state: Arc::clone(&self.state),
        }
    }
}

impl<T> PartialEq for Channel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl<T> Eq for Channel<T> {}

impl<T> fmt::Debug for Channel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Channel#{}", self.id)
    }
}

impl<T: Send + 'static> Default for Channel<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Send + 'static> Channel<T> {
    pub fn new() -> Self {
        Channel {
            id: next_object_id(),
            state: Arc::new(Mutex::new(ChanState {
                senders: VecDeque::new(),
                receivers: VecDeque::new(),
            })),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    /// An event receiving one value from exactly one sender.
    pub fn recv_evt(&self) -> Event<T> {
        Event::base(
            Arc::new(RecvOp {
                chan: self.clone(),
            }),
            Arc::new(|p: Payload| *p.downcast::<T>().expect("payload type")),
        )
    }

    pub fn recv(&self) -> T {
        self.recv_evt().sync()
    }

    /// Number of live blocked senders.
    pub fn waiting_senders(&self) -> usize {
        let mut st = self.state.lock();
        st.purge();
        st.senders.len()
    }

    /// Number of live blocked receivers.
    pub fn waiting_receivers(&self) -> usize {
        let mut st = self.state.lock();
        st.purge();
        st.receivers.len()
    }

    fn guard(guard: &mut Guard) -> &mut ChanGuard<T> {
        guard.downcast_mut::<ChanGuard<T>>().expect("channel guard type")
    }
}

impl<T: Clone + Send + Sync + 'static> Channel<T> {
    /// An event delivering a copy of `value` to exactly one receiver. The
    /// event performs no communication until synchronized.
    pub fn send_evt(&self, value: T) -> Event<()> {
        Event::base(
            Arc::new(SendOp {
                chan: self.clone(),
                value,
            }),
            Arc::new(|_| ()),
        )
    }

    pub fn send(&self, value: T) {
        self.send_evt(value).sync()
    }
}

/// Creates a fresh rendezvous channel.
pub fn channel<T: Send + 'static>() -> Channel<T> {
    Channel::new()
}

pub fn send_evt<T: Clone + Send + Sync + 'static>(c: &Channel<T>, value: T) -> Event<()> {
    c.send_evt(value)
}

pub fn recv_evt<T: Send + 'static>(c: &Channel<T>) -> Event<T> {
    c.recv_evt()
}

struct SendOp<T> {
    chan: Channel<T>,
    value: T,
}

impl<T: Clone + Send + Sync + 'static> BaseOp for SendOp<T> {
    fn lock_key(&self) -> Option<u64> {
        Some(self.chan.id)
    }

    fn lock(&self) -> Guard {
        Box::new(self.chan.state.lock_arc())
    }

    fn poll(&self, guard: &mut Guard) -> bool {
        let st = Channel::<T>::guard(guard);
        while let Some(w) = st.receivers.front() {
            if w.token.is_waiting() {
                return true;
            }
            st.receivers.pop_front();
        }
        false
    }

    fn complete(&self, guard: &mut Guard) -> Option<Payload> {
        let st = Channel::<T>::guard(guard);
        while let Some(w) = st.receivers.pop_front() {
            if w.token.claim() {
                w.token.deliver(w.branch, Box::new(self.value.clone()));
                return Some(Box::new(()));
            }
        }
        None
    }

    fn enroll(&self, guard: &mut Guard, token: &Arc<Token>, branch: usize) {
        let st = Channel::<T>::guard(guard);
        st.purge();
        st.senders.push_back(SendWaiter {
            token: Arc::clone(token),
            branch,
            value: self.value.clone(),
        });
    }
}

struct RecvOp<T> {
    chan: Channel<T>,
}

impl<T: Send + 'static> BaseOp for RecvOp<T> {
    fn lock_key(&self) -> Option<u64> {
        Some(self.chan.id)
    }

    fn lock(&self) -> Guard {
        Box::new(self.chan.state.lock_arc())
    }

    fn poll(&self, guard: &mut Guard) -> bool {
        let st = Channel::<T>::guard(guard);
        while let Some(w) = st.senders.front() {
            if w.token.is_waiting() {
                return true;
            }
            st.senders.pop_front();
        }
        false
    }

    fn complete(&self, guard: &mut Guard) -> Option<Payload> {
        let st = Channel::<T>::guard(guard);
        while let Some(w) = st.senders.pop_front() {
            if w.token.claim() {
                w.token.deliver(w.branch, Box::new(()));
                return Some(Box::new(w.value));
            }
        }
        None
    }

    fn enroll(&self, guard: &mut Guard, token: &Arc<Token>, branch: usize) {
        let st = Channel::<T>::guard(guard);
        st.purge();
        st.receivers.push_back(RecvWaiter {
            token: Arc::clone(token),
            branch,
        });
    }
}
