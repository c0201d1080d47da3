#![allow(dead_code)]

pub mod scene;

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

use cmlui::cml::Channel;
use cmlui::display::{ClassStyle, Display, InputDriver, WindowId, WindowStyle};
use cmlui::resources::{Brush, Cursor, Icon};
use cmlui::window::{Window, WindowClass, WindowSpec};
use cmlui::{Instance, Msg, Result};

type Step = Box<dyn FnOnce(&Display) -> Result<()> + Send>;

/// A driver that runs one closure per idle point.
#[derive(Default)]
pub struct Steps(VecDeque<Step>);

impl Steps {
    pub fn new() -> Self {
        Steps::default()
    }

    pub fn then(mut self, f: impl FnOnce(&Display) -> Result<()> + Send + 'static) -> Self {
        self.0.push_back(Box::new(f));
        self
    }
}

impl InputDriver for Steps {
    fn feed(&mut self, display: &Display) -> Result<bool> {
        match self.0.pop_front() {
            Some(f) => f(display).map(|_| true),
            None => Ok(false),
        }
    }
}

/// Messages each window's handler received, in order.
#[derive(Clone, Default)]
pub struct Log(pub Arc<Mutex<Vec<(WindowId, Msg)>>>);

impl Log {
    pub fn of(&self, w: WindowId) -> Vec<Msg> {
        self.0
            .lock()
            .unwrap()
            .iter()
            .filter(|(id, _)| *id == w)
            .map(|(_, m)| *m)
            .collect()
    }

    pub fn all(&self) -> Vec<(WindowId, Msg)> {
        self.0.lock().unwrap().clone()
    }
}

/// A handler that logs every message, applies default processing and, if
/// `quit_on_destroy`, posts quit(0) on WM_DESTROY.
pub fn logging(
    log: &Log,
    quit_on_destroy: bool,
) -> impl FnOnce(Window, Channel<Msg>) + Send + 'static {
    let log = log.clone();
    move |w, ch| loop {
        let m = ch.recv();
        log.0.lock().unwrap().push((w.id(), m));
        match m {
            Msg::Destroy => {
                if quit_on_destroy {
                    let _ = cmlui::window::quit(0);
                }
                return;
            }
            m => {
                let _ = w.default(m);
            }
        }
    }
}

pub fn plain_class(inst: &Instance, name: &str) -> WindowClass {
    WindowClass::register(
        name,
        inst,
        &Cursor::arrow(),
        &Icon::application(),
        &Brush::white(),
        &[],
    )
    .unwrap()
}

pub fn redraw_class(inst: &Instance, name: &str) -> WindowClass {
    WindowClass::register(
        name,
        inst,
        &Cursor::arrow(),
        &Icon::application(),
        &Brush::white(),
        &[ClassStyle::HRedraw, ClassStyle::VRedraw],
    )
    .unwrap()
}

pub fn visible(title: &str) -> WindowSpec {
    WindowSpec::new(title, &[WindowStyle::OverlappedWindow, WindowStyle::Visible])
}
