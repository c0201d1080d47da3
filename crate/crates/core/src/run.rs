//! Program entry point.

use std::panic::{self, AssertUnwindSafe};
use std::time::Duration;

use crate::display::Display;

/// How long `doit` waits for display threads to settle before shutdown.
const DRAIN_LIMIT: Duration = Duration::from_secs(2);

/// The application handle passed to the main function.
#[derive(Clone, Debug)]
pub struct Instance {
    display: Display,
}

impl Instance {
    pub fn display(&self) -> &Display {
        &self.display
    }
}

/// Runs `main` against a fresh display and returns its result once the
/// display's threads have drained.
pub fn doit<R>(main: impl FnOnce(Instance) -> R) -> R {
    doit_with(Display::default(), main)
}

/// Like [`doit`] with a caller-supplied display. A panic in `main`
/// propagates after the display is shut down.
pub fn doit_with<R>(display: Display, main: impl FnOnce(Instance) -> R) -> R {
    let outcome = {
        let _entered = display.enter();
        let instance = Instance {
            display: display.clone(),
        };
        panic::catch_unwind(AssertUnwindSafe(|| main(instance)))
    };
    display.group().wait_idle_timeout(DRAIN_LIMIT);
    display.shutdown();
    match outcome {
        Ok(r) => r,
        Err(cause) => panic::resume_unwind(cause),
    }
}
