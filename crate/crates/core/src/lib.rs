//! Concurrent ML style first-class synchronous events, and a windowing
//! framework built on them in which every window runs its own thread.
//!
//! The window system is simulated: input comes from scripts or a driver,
//! time is a virtual clock, and drawing is recorded as a text trace, so
//! every run is reproducible.
//!
//! ```no_run
//! use cmlui::cml::{channel, choose, spawn};
//!
//! let a = channel::<i32>();
//! let b = channel::<&'static str>();
//! let a2 = a.clone();
//! spawn(move || a2.send(7)).unwrap();
//! let got = choose([
//!     a.recv_evt().wrap(|n| n.to_string()),
//!     b.recv_evt().wrap(|s| s.to_string()),
//! ])
//! .sync();
//! assert_eq!(got, "7");
//! ```

pub mod cml;
pub mod controls;
pub mod display;
pub mod error;
pub mod harness;
pub mod msg;
pub mod resources;
pub mod run;
pub mod window;

pub use error::{Error, Result};
pub use msg::{Msg, Rect};
pub use run::{doit, doit_with, Instance};
