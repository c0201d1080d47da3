//! Input drivers that feed a stepped pump.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use super::script;
use crate::display::{Display, InputDriver, InputEvent};
use crate::error::{Error, Result};
use crate::msg::Msg;

/// Where the next events come from.
pub trait EventSource: Send {
    /// Blocks until the next event is available; `None` at end of input.
    fn next_event(&mut self) -> Result<Option<InputEvent>>;
}

impl EventSource for VecDeque<InputEvent> {
    fn next_event(&mut self) -> Result<Option<InputEvent>> {
        Ok(self.pop_front())
    }
}

/// Script lines read one at a time, e.g. from a terminal.
pub struct LineSource<R> {
    reader: R,
    line_no: usize,
    last_at: u64,
    prompt: Option<Box<dyn Write + Send>>,
}

impl<R: BufRead + Send> LineSource<R> {
    pub fn new(reader: R) -> Self {
        LineSource {
            reader,
            line_no: 0,
            last_at: 0,
            prompt: None,
        }
    }

    /// Writes a prompt before each line is read.
    pub fn with_prompt(mut self, out: Box<dyn Write + Send>) -> Self {
        self.prompt = Some(out);
        self
    }
}

impl<R: BufRead + Send> EventSource for LineSource<R> {
    fn next_event(&mut self) -> Result<Option<InputEvent>> {
        loop {
            if let Some(p) = &mut self.prompt {
                write!(p, "> ")?;
                p.flush()?;
            }
            let mut line = String::new();
            if self.reader.read_line(&mut line)? == 0 {
                return Ok(None);
            }
            self.line_no += 1;
            if let Some(ev) = script::parse_line(self.line_no, &line)? {
                if ev.at_ms < self.last_at {
                    return Err(Error::Script {
                        line: self.line_no,
                        msg: format!("time {} is before {}", ev.at_ms, self.last_at),
                    });
                }
                self.last_at = ev.at_ms;
                return Ok(Some(ev));
            }
        }
    }
}

/// Feeds events in time order, firing timers as the clock passes them.
///
/// Each call advances to the earliest of the next timer and the next event,
/// so handlers settle between every timer tick. A timer due at the same time
/// as an event fires first. Nothing past `max_ms` happens. When input runs
/// out, every top-level window is sent WM_CLOSE once.
pub struct ScriptDriver {
    source: Box<dyn EventSource>,
    peeked: Option<InputEvent>,
    ended: bool,
    max_ms: Option<u64>,
    closed: bool,
    echo: Option<(Box<dyn Write + Send>, usize)>,
}

impl ScriptDriver {
    pub fn new(source: Box<dyn EventSource>, max_ms: Option<u64>) -> Self {
        ScriptDriver {
            source,
            peeked: None,
            ended: false,
            max_ms,
            closed: false,
            echo: None,
        }
    }

    pub fn from_events(events: Vec<InputEvent>, max_ms: Option<u64>) -> Self {
        Self::new(Box::new(VecDeque::from(events)), max_ms)
    }

    /// Writes new trace lines to `out` at every idle point.
    pub fn echo_trace(mut self, out: Box<dyn Write + Send>) -> Self {
        self.echo = Some((out, 0));
        self
    }

    fn peek(&mut self) -> Result<Option<InputEvent>> {
        if self.peeked.is_none() && !self.ended {
            self.peeked = self.source.next_event()?;
            self.ended = self.peeked.is_none();
        }
        let within = |ev: &InputEvent| self.max_ms.is_none_or(|m| ev.at_ms <= m);
        match self.peeked {
            Some(ev) if within(&ev) => Ok(Some(ev)),
            Some(_) => {
                self.peeked = None;
                self.ended = true;
                Ok(None)
            }
            None => Ok(None),
        }
    }

    fn flush_echo(&mut self, display: &Display) -> Result<()> {
        if let Some((out, shown)) = &mut self.echo {
            let trace = display.trace();
            for r in &trace[*shown..] {
                writeln!(out, "{r}")?;
            }
            *shown = trace.len();
            out.flush()?;
        }
        Ok(())
    }

    fn step(&mut self, display: &Display) -> Result<bool> {
        let next = self.peek()?;
        let timer = display
            .next_timer_due()
            .filter(|t| self.max_ms.is_none_or(|m| *t <= m))
            .filter(|t| next.is_some() || self.max_ms.is_some_and(|m| *t <= m));
        match (timer, next) {
            (Some(t), Some(ev)) if t <= ev.at_ms => {
                display.advance_to(t);
                Ok(true)
            }
            (_, Some(ev)) => {
                self.peeked = None;
                display.inject(ev)?;
                Ok(true)
            }
            (Some(t), None) => {
                display.advance_to(t);
                Ok(true)
            }
            (None, None) => {
                if let Some(m) = self.max_ms {
                    if display.now() < m {
                        display.advance_to(m);
                        return Ok(true);
                    }
                }
                if std::mem::replace(&mut self.closed, true) {
                    return Ok(false);
                }
                let top = display.top_level_windows();
                for w in &top {
                    display.post(*w, Msg::Close)?;
                }
                Ok(!top.is_empty())
            }
        }
    }
}

impl InputDriver for ScriptDriver {
    fn feed(&mut self, display: &Display) -> Result<bool> {
        self.flush_echo(display)?;
        self.step(display)
    }
}
