//! The concurrency kernel: threads, rendezvous channels, and first-class
//! synchronous events.

pub mod activity;
mod channel;
mod clock;
mod event;
mod thread;
mod token;

pub use activity::{current_context, current_group, ActivityGroup, EnterGuard};
pub use channel::{channel, recv_evt, send_evt, Channel};
pub use clock::VirtualClock;
pub use event::{always, choose, never, set_choice_seed, sync, wrap, Event};
pub use thread::{spawn, spawn_in_group, ThreadId};
