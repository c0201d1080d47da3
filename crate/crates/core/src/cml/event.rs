//! First-class synchronous events and the synchronization protocol.
//!
//! An [`Event`] is kept flattened: a list of base communications, each
//! paired with the post-commit transform accumulated from `wrap`. Nested
//! choices therefore collapse into one list and `choose([])` is `never()`.
//!
//! `sync` runs in two phases. With every touched synchronization object
//! locked in ascending creation order, it polls each base for a live
//! partner and commits one ready base chosen uniformly at random. When none
//! is ready it enrolls a single-use [`Token`] on every base and blocks; the
//! first partner to claim the token commits and the other enrollments turn
//! into dead entries that later traffic purges.

use std::any::Any;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::activity::{self, blocked_outside};
use super::token::{Payload, Token};

/// Locked state of one synchronization object, type-erased.
pub(crate) type Guard = Box<dyn Any>;

/// One base communication, independent of the value type the enclosing
/// event eventually produces.
pub(crate) trait BaseOp: Send + Sync {
    /// Ordering key of the object this base locks; `None` when it needs no
    /// lock at all.
    fn lock_key(&self) -> Option<u64>;
    fn lock(&self) -> Guard;
    /// Whether the base could commit right now. Dead enrollments found along
    /// the way are discarded.
    fn poll(&self, guard: &mut Guard) -> bool;
    /// Commits with a live partner. `None` means every candidate vanished
    /// since the poll.
    fn complete(&self, guard: &mut Guard) -> Option<Payload>;
    fn enroll(&self, guard: &mut Guard, token: &Arc<Token>, branch: usize);
}

type Finish<T> = Arc<dyn Fn(Payload) -> T + Send + Sync>;

struct Branch<T> {
    op: Arc<dyn BaseOp>,
    finish: Finish<T>,
}

impl<T> Clone for Branch<T> {
    fn clone(&self) -> Self {
        Branch {
            op: Arc::clone(&self.op),
            finish: Arc::clone(&self.finish),
        }
    }
}

/// A composable description of a potential communication yielding `T`.
///
/// Events are immutable; synchronizing one never changes it, so the same
/// value can be synchronized any number of times.
pub struct Event<T> {
    branches: Vec<Branch<T>>,
}

impl<T> Clone for Event<T> {
    fn clone(&self) -> Self {
        Event {
            branches: self.branches.clone(),
        }
    }
}

impl<T> fmt::Debug for Event<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Event")
            .field("bases", &self.branches.len())
            .finish()
    }
}

impl<T: 'static> Event<T> {
    pub(crate) fn base(op: Arc<dyn BaseOp>, finish: Finish<T>) -> Self {
        Event {
            branches: vec![Branch { op, finish }],
        }
    }

    /// The event that never commits.
    pub fn never() -> Self {
        Event {
            branches: Vec::new(),
        }
    }

    /// Number of base communications after flattening.
    pub fn base_count(&self) -> usize {
        self.branches.len()
    }

    /// Applies `f` to the commit result. Only the committed branch's
    /// transforms ever run, on the synchronizing thread, after the commit.
    pub fn wrap<U, F>(self, f: F) -> Event<U>
    where
        U: 'static,
        F: Fn(T) -> U + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        Event {
            branches: self
                .branches
                .into_iter()
                .map(|b| {
                    let inner = b.finish;
                    let f = Arc::clone(&f);
                    let finish: Finish<U> = Arc::new(move |p| f(inner(p)));
                    Branch { op: b.op, finish }
                })
                .collect(),
        }
    }

    /// Blocks until exactly one base communication commits and returns its
    /// transformed result.
    pub fn sync(&self) -> T {
        self.run(None).expect("unbounded sync returned without a commit")
    }

    /// `sync` with a wall-clock limit; `None` when nothing committed in time.
    /// A limit that expires never leaves a half-committed communication.
    pub fn sync_for(&self, limit: Duration) -> Option<T> {
        self.run(Some(limit))
    }

    /// Commits only if some base is ready right now.
    pub fn poll(&self) -> Option<T> {
        self.run(Some(Duration::ZERO))
    }

    fn run(&self, limit: Option<Duration>) -> Option<T> {
        if self.branches.is_empty() {
            return block_forever(limit);
        }
        loop {
            let mut locks = LockSet::acquire(&self.branches);
            let ready: Vec<usize> = self
                .branches
                .iter()
                .enumerate()
                .filter(|(_, b)| b.op.poll(locks.guard(&*b.op)))
                .map(|(i, _)| i)
                .collect();
            if !ready.is_empty() {
                let pick = if ready.len() == 1 {
                    ready[0]
                } else {
                    ready[choice_index(ready.len())]
                };
                let branch = &self.branches[pick];
                match branch.op.complete(locks.guard(&*branch.op)) {
                    Some(payload) => {
                        drop(locks);
                        return Some((branch.finish)(payload));
                    }
                    None => continue,
                }
            }
            if limit == Some(Duration::ZERO) {
                return None;
            }
            let token = Arc::new(Token::new(activity::tracked_group()));
            for (i, b) in self.branches.iter().enumerate() {
                b.op.enroll(locks.guard(&*b.op), &token, i);
            }
            drop(locks);
            let (i, payload) = match limit {
                None => token.wait(),
                Some(d) => token.wait_timeout(d)?,
            };
            return Some((self.branches[i].finish)(payload));
        }
    }
}

impl<T: Clone + Send + Sync + 'static> Event<T> {
    /// An event that commits immediately with `value`.
    pub fn always(value: T) -> Self {
        Event::base(Arc::new(AlwaysOp), Arc::new(move |_| value.clone()))
    }
}

fn block_forever<T>(limit: Option<Duration>) -> Option<T> {
    match limit {
        Some(d) => {
            if !d.is_zero() {
                blocked_outside(|| std::thread::sleep(d));
            }
            None
        }
        None => blocked_outside(|| loop {
            std::thread::park();
        }),
    }
}

/// Nondeterministic choice over `events`; the result commits exactly one
/// constituent base communication.
pub fn choose<T: 'static>(events: impl IntoIterator<Item = Event<T>>) -> Event<T> {
    Event {
        branches: events.into_iter().flat_map(|e| e.branches).collect(),
    }
}

/// Equivalent to `e.wrap(f)`.
pub fn wrap<T, U, F>(e: Event<T>, f: F) -> Event<U>
where
    T: 'static,
    U: 'static,
    F: Fn(T) -> U + Send + Sync + 'static,
{
    e.wrap(f)
}

/// Equivalent to `e.sync()`.
pub fn sync<T: 'static>(e: &Event<T>) -> T {
    e.sync()
}

pub fn always<T: Clone + Send + Sync + 'static>(value: T) -> Event<T> {
    Event::always(value)
}

pub fn never<T: 'static>() -> Event<T> {
    Event::never()
}

struct AlwaysOp;

impl BaseOp for AlwaysOp {
    fn lock_key(&self) -> Option<u64> {
        None
    }
    fn lock(&self) -> Guard {
        Box::new(())
    }
    fn poll(&self, _: &mut Guard) -> bool {
        true
    }
    fn complete(&self, _: &mut Guard) -> Option<Payload> {
        Some(Box::new(()))
    }
    fn enroll(&self, _: &mut Guard, _: &Arc<Token>, _: usize) {
        unreachable!("an always event is ready at poll time")
    }
}

/// Guards for every distinct object in an event, taken in key order.
struct LockSet {
    guards: Vec<(u64, Guard)>,
    unlocked: Guard,
}

impl LockSet {
    fn acquire<T>(branches: &[Branch<T>]) -> Self {
        let mut keyed: Vec<(u64, &Arc<dyn BaseOp>)> = branches
            .iter()
            .filter_map(|b| b.op.lock_key().map(|k| (k, &b.op)))
            .collect();
        keyed.sort_by_key(|(k, _)| *k);
        keyed.dedup_by_key(|(k, _)| *k);
        let guards = keyed.into_iter().map(|(k, op)| (k, op.lock())).collect();
        LockSet {
            guards,
            unlocked: Box::new(()),
        }
    }

    fn guard(&mut self, op: &dyn BaseOp) -> &mut Guard {
        match op.lock_key() {
            None => &mut self.unlocked,
            Some(key) => {
                let at = self
                    .guards
                    .binary_search_by_key(&key, |(k, _)| *k)
                    .expect("base locked during acquire");
                &mut self.guards[at].1
            }
        }
    }
}

fn choice_rng() -> &'static Mutex<ChaCha8Rng> {
    static RNG: OnceLock<Mutex<ChaCha8Rng>> = OnceLock::new();
    RNG.get_or_init(|| Mutex::new(ChaCha8Rng::seed_from_u64(0)))
}

/// Reseeds the process-wide generator that picks among simultaneously ready
/// branches.
pub fn set_choice_seed(seed: u64) {
    *choice_rng().lock().unwrap() = ChaCha8Rng::seed_from_u64(seed);
}

fn choice_index(n: usize) -> usize {
    choice_rng().lock().unwrap().random_range(0..n)
}
