//! Activity accounting for groups of threads.
//!
//! A group counts its members that are runnable. A member stops counting
//! while it is blocked inside `sync`, and whoever commits with it counts it
//! again before waking it, so the count only reaches zero when every member
//! is blocked on a communication that nobody inside the group can complete.
//! The display pump uses this to step deterministically between inputs.

use std::any::Any;
use std::cell::RefCell;
use std::fmt;
use std::sync::{Arc, Condvar, Mutex};
use std::time::{Duration, Instant};

type Context = Arc<dyn Any + Send + Sync>;

struct GroupInner {
    active: Mutex<usize>,
    idle: Condvar,
    context: Option<Context>,
}

/// A set of threads whose collective idleness can be awaited.
#[derive(Clone)]
pub struct ActivityGroup {
    inner: Arc<GroupInner>,
}

impl fmt::Debug for ActivityGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ActivityGroup")
            .field("active", &self.active())
            .finish()
    }
}

impl Default for ActivityGroup {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone)]
struct Membership {
    group: ActivityGroup,
    tracked: bool,
}

thread_local! {
    static MEMBERSHIP: RefCell<Option<Membership>> = const { RefCell::new(None) };
}

impl ActivityGroup {
    pub fn new() -> Self {
        Self::build(None)
    }

    /// A group carrying an ambient value that every member thread can reach
    /// through [`current_context`].
    pub fn with_context(context: Context) -> Self {
        Self::build(Some(context))
    }

    fn build(context: Option<Context>) -> Self {
        ActivityGroup {
            inner: Arc::new(GroupInner {
                active: Mutex::new(0),
                idle: Condvar::new(),
                context,
            }),
        }
    }

    pub fn context(&self) -> Option<&Context> {
        self.inner.context.as_ref()
    }

    /// Number of members currently counted as runnable.
    pub fn active(&self) -> usize {
        *self.inner.active.lock().unwrap()
    }

    pub(crate) fn begin(&self) {
        *self.inner.active.lock().unwrap() += 1;
    }

    pub(crate) fn end(&self) {
        let mut active = self.inner.active.lock().unwrap();
        debug_assert!(*active > 0, "activity count underflow");
        *active = active.saturating_sub(1);
        if *active == 0 {
            self.inner.idle.notify_all();
        }
    }

    /// Blocks until no member is runnable.
    pub fn wait_idle(&self) {
        let mut active = self.inner.active.lock().unwrap();
        while *active > 0 {
            active = self.inner.idle.wait(active).unwrap();
        }
    }

    /// Like [`wait_idle`](Self::wait_idle) with a wall-clock bound. Returns
    /// whether the group went idle.
    pub fn wait_idle_timeout(&self, limit: Duration) -> bool {
        let deadline = Instant::now() + limit;
        let mut active = self.inner.active.lock().unwrap();
        while *active > 0 {
            let now = Instant::now();
            if now >= deadline {
                return false;
            }
            active = self.inner.idle.wait_timeout(active, deadline - now).unwrap().0;
        }
        true
    }

    /// Makes the calling thread an untracked participant: threads it spawns
    /// join the group and it sees the group's context, but its own blocking
    /// never affects the count.
    pub fn enter(&self) -> EnterGuard {
        let previous = MEMBERSHIP.with(|m| {
            m.borrow_mut().replace(Membership {
                group: self.clone(),
                tracked: false,
            })
        });
        EnterGuard { previous }
    }
}

/// Restores the previous membership of the thread on drop.
pub struct EnterGuard {
    previous: Option<Membership>,
}

impl Drop for EnterGuard {
    fn drop(&mut self) {
        let previous = self.previous.take();
        MEMBERSHIP.with(|m| *m.borrow_mut() = previous);
    }
}

/// The group the calling thread belongs to, tracked or not.
pub fn current_group() -> Option<ActivityGroup> {
    MEMBERSHIP.with(|m| m.borrow().as_ref().map(|m| m.group.clone()))
}

/// The ambient context of the calling thread's group.
pub fn current_context() -> Option<Context> {
    MEMBERSHIP.with(|m| m.borrow().as_ref().and_then(|m| m.group.context().cloned()))
}

/// The group to charge when the calling thread blocks, if it is counted.
pub(crate) fn tracked_group() -> Option<ActivityGroup> {
    MEMBERSHIP.with(|m| {
        m.borrow()
            .as_ref()
            .filter(|m| m.tracked)
            .map(|m| m.group.clone())
    })
}

/// Installs tracked membership on a freshly spawned thread and releases its
/// count when the thread finishes, panicking or not.
pub(crate) struct MemberScope {
    group: ActivityGroup,
}

impl MemberScope {
    pub(crate) fn install(group: ActivityGroup) -> Self {
        MEMBERSHIP.with(|m| {
            *m.borrow_mut() = Some(Membership {
                group: group.clone(),
                tracked: true,
            })
        });
        MemberScope { group }
    }
}

impl Drop for MemberScope {
    fn drop(&mut self) {
        MEMBERSHIP.with(|m| *m.borrow_mut() = None);
        self.group.end();
    }
}

/// Temporarily marks a tracked thread as not runnable while it blocks on
/// something outside the event protocol.
pub(crate) fn blocked_outside<R>(f: impl FnOnce() -> R) -> R {
    let group = tracked_group();
    if let Some(g) = &group {
        g.end();
    }
    let r = f();
    if let Some(g) = &group {
        g.begin();
    }
    r
}
