//! Input scripts: one event per line, `<at_ms> <verb> <args…>`.
//!
//! ```text
//! # comment
//! 0 resize w1 316 262
//! 40 mouse_down 100 60
//! 45 mouse_up 100 60
//! 2000 tick
//! ```

use std::fmt;

use crate::display::{InputEvent, InputKind, WindowId};
use crate::error::{Error, Result};

/// Parses a whole script. Time stamps must not decrease.
pub fn parse(text: &str) -> Result<Vec<InputEvent>> {
    let mut out: Vec<InputEvent> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let Some(ev) = parse_line(i + 1, line)? else { continue };
        if let Some(prev) = out.last() {
            if ev.at_ms < prev.at_ms {
                return Err(script_err(
                    i + 1,
                    format!("time {} is before the previous event at {}", ev.at_ms, prev.at_ms),
                ));
            }
        }
        out.push(ev);
    }
    Ok(out)
}

/// Parses one line; blank lines and comments yield `None`.
pub fn parse_line(line_no: usize, line: &str) -> Result<Option<InputEvent>> {
    let body = line.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let words: Vec<&str> = body.split_whitespace().collect();
    let err = |msg: String| script_err(line_no, msg);
    let at_ms: u64 = words[0]
        .parse()
        .map_err(|_| err(format!("bad time stamp {:?}", words[0])))?;
    let verb = *words.get(1).ok_or_else(|| err("missing event name".into()))?;
    let args = &words[2..];
    let want = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(err(format!("{verb} takes {n} arguments, got {}", args.len())))
        }
    };
    let int = |s: &str| -> Result<i32> { s.parse().map_err(|_| err(format!("bad integer {s:?}"))) };
    let win = |s: &str| -> Result<WindowId> { s.parse().map_err(err) };
    let kind = match verb {
        "tick" => {
            want(0)?;
            InputKind::Tick
        }
        "resize" => {
            want(3)?;
            InputKind::Resize {
                window: win(args[0])?,
                width: int(args[1])?,
                height: int(args[2])?,
            }
        }
        "mouse_down" | "mouse_up" | "mouse_move" | "dbl_click" => {
            want(2)?;
            let (x, y) = (int(args[0])?, int(args[1])?);
            match verb {
                "mouse_down" => InputKind::MouseDown { x, y },
                "mouse_up" => InputKind::MouseUp { x, y },
                "mouse_move" => InputKind::MouseMove { x, y },
                _ => InputKind::DblClick { x, y },
            }
        }
        "key_down" => {
            want(1)?;
            InputKind::KeyDown(int(args[0])?)
        }
        "char" => {
            want(1)?;
            InputKind::Char(int(args[0])?)
        }
        "close" => {
            want(1)?;
            InputKind::Close(win(args[0])?)
        }
        other => return Err(err(format!("unknown event {other:?}"))),
    };
    Ok(Some(InputEvent::new(at_ms, kind)))
}

fn script_err(line: usize, msg: String) -> Error {
    Error::Script { line, msg }
}

/// The canonical script line for an event.
pub struct ScriptLine<'a>(pub &'a InputEvent);

impl fmt::Display for ScriptLine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = self.0.at_ms;
        match self.0.kind {
            InputKind::Tick => write!(f, "{at} tick"),
            InputKind::MouseMove { x, y } => write!(f, "{at} mouse_move {x} {y}"),
            InputKind::MouseDown { x, y } => write!(f, "{at} mouse_down {x} {y}"),
            InputKind::MouseUp { x, y } => write!(f, "{at} mouse_up {x} {y}"),
            InputKind::DblClick { x, y } => write!(f, "{at} dbl_click {x} {y}"),
            InputKind::KeyDown(c) => write!(f, "{at} key_down {c}"),
            InputKind::Char(c) => write!(f, "{at} char {c}"),
            InputKind::Close(w) => write!(f, "{at} close {w}"),
            InputKind::Resize {
                window,
                width,
                height,
            } => write!(f, "{at} resize {window} {width} {height}"),
        }
    }
}
