//! Lightweight thread creation.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use super::activity::{self, ActivityGroup, MemberScope};
use crate::error::{Error, Result};

const STACK_SIZE: usize = 256 * 1024;

/// Identifier of a thread created by [`spawn`]; never reused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThreadId(u64);

impl ThreadId {
    pub fn as_u64(self) -> u64 {
        self.0
    }
}

impl fmt::Display for ThreadId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

static NEXT_THREAD: AtomicU64 = AtomicU64::new(1);

/// Starts `body` on a new thread and returns without waiting for it. A thread
/// spawned from inside an [`ActivityGroup`] joins that group.
pub fn spawn<F>(body: F) -> Result<ThreadId>
where
    F: FnOnce() + Send + 'static,
{
    spawn_in(activity::current_group(), body)
}

/// Starts `body` as a tracked member of `group`.
pub fn spawn_in_group<F>(group: &ActivityGroup, body: F) -> Result<ThreadId>
where
    F: FnOnce() + Send + 'static,
{
    spawn_in(Some(group.clone()), body)
}

fn spawn_in<F>(group: Option<ActivityGroup>, body: F) -> Result<ThreadId>
where
    F: FnOnce() + Send + 'static,
{
    let id = ThreadId(NEXT_THREAD.fetch_add(1, Ordering::Relaxed));
    if let Some(g) = &group {
        g.begin();
    }
    let member = group.clone();
    let spawned = std::thread::Builder::new()
        .name(format!("cml-{id}"))
        .stack_size(STACK_SIZE)
        .spawn(move || {
            let _scope = member.map(MemberScope::install);
            body();
        });
    match spawned {
        Ok(_) => Ok(id),
        Err(e) => {
            if let Some(g) = &group {
                g.end();
            }
            Err(Error::Spawn(e))
        }
    }
}
