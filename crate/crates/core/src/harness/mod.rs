//! Demo registry and the scripted runner behind the command line.

pub mod bounce;
mod driver;
pub mod panel;
pub mod quitcode;
pub mod script;

pub use driver::{EventSource, LineSource, ScriptDriver};

use std::path::PathBuf;

use crate::cml;
use crate::display::{Display, InputDriver};
use crate::error::{Error, Result};
use crate::resources::Manifest;
use crate::run::{self, Instance};

pub type DemoMain = fn(Instance) -> Result<i32>;

#[derive(Clone, Copy, Debug)]
pub struct Demo {
    pub name: &'static str,
    pub about: &'static str,
    pub main: DemoMain,
}

pub const DEMOS: &[Demo] = &[
    Demo {
        name: "bounce",
        about: "a bitmap bouncing around a resizable window on a timer",
        main: bounce::winmain,
    },
    Demo {
        name: "composite",
        about: "a custom control made of two push buttons",
        main: panel::winmain,
    },
    Demo {
        name: "quitcode",
        about: "a window that exits with the code of the first key pressed",
        main: quitcode::winmain,
    },
];

pub fn find_demo(name: &str) -> Result<&'static Demo> {
    DEMOS
        .iter()
        .find(|d| d.name == name)
        .ok_or_else(|| Error::UnknownDemo {
            name: name.to_string(),
            available: DEMOS.iter().map(|d| d.name).collect::<Vec<_>>().join(", "),
        })
}

/// Where input comes from.
pub enum Input {
    Script(String),
    Driver(Box<dyn InputDriver>),
}

pub struct RunOptions {
    pub input: Input,
    pub manifest: Option<PathBuf>,
    pub seed: u64,
    /// Virtual time to run to. Defaults to the last script time stamp.
    pub max_ms: Option<u64>,
}

impl RunOptions {
    pub fn script(text: impl Into<String>) -> Self {
        RunOptions {
            input: Input::Script(text.into()),
            manifest: None,
            seed: 0,
            max_ms: None,
        }
    }
}

/// What a finished run produced. The trace is kept even when the demo
/// failed.
#[derive(Debug)]
pub struct RunOutcome {
    pub result: Result<i32>,
    pub trace: String,
    pub live_windows: usize,
    pub classes: usize,
}

/// Runs a demo to completion under a stepped pump.
pub fn run_demo(demo: &Demo, opts: RunOptions) -> Result<RunOutcome> {
    let manifest = match &opts.manifest {
        Some(p) => Manifest::load(p)?,
        None => Manifest::builtin(),
    };
    let driver: Box<dyn InputDriver> = match opts.input {
        Input::Script(text) => {
            let events = script::parse(&text)?;
            let max_ms = opts.max_ms.or(Some(events.last().map_or(0, |e| e.at_ms)));
            Box::new(ScriptDriver::from_events(events, max_ms))
        }
        Input::Driver(d) => d,
    };
    cml::set_choice_seed(opts.seed);
    let display = Display::new(manifest);
    display.install_driver(driver);
    let main = demo.main;
    let probe = display.clone();
    // registry counts are taken before doit tears the display down
    let (result, live_windows, classes) = run::doit_with(display.clone(), move |inst| {
        let r = main(inst);
        (r, probe.window_count(), probe.class_count())
    });
    Ok(RunOutcome {
        result,
        trace: display.trace_text(),
        live_windows,
        classes,
    })
}

/// Process status for a harness failure.
pub fn exit_status(e: &Error) -> i32 {
    match e {
        Error::UnknownDemo { .. } => 64,
        Error::Script { .. } | Error::Manifest { .. } => 65,
        Error::Io(_) => 66,
        Error::InputExhausted => 67,
        _ => 70,
    }
}
