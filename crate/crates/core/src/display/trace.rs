//! The draw-command trace: the observable output of the simulated display.

use std::fmt;

use super::WindowId;
use crate::msg::Rect;

/// Raster operation names accepted by bit-block transfers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rop {
    SrcCopy,
    SrcPaint,
    SrcAnd,
    SrcInvert,
    Blackness,
    Whiteness,
}

impl fmt::Display for Rop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rop::SrcCopy => "SRCCOPY",
            Rop::SrcPaint => "SRCPAINT",
            Rop::SrcAnd => "SRCAND",
            Rop::SrcInvert => "SRCINVERT",
            Rop::Blackness => "BLACKNESS",
            Rop::Whiteness => "WHITENESS",
        })
    }
}

/// One trace line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceRecord {
    FillRect {
        window: WindowId,
        rect: Rect,
        brush: String,
    },
    BitBlt {
        window: WindowId,
        x: i32,
        y: i32,
        width: i32,
        height: i32,
        bitmap: String,
        src_x: i32,
        src_y: i32,
        rop: Rop,
    },
    DrawIcon {
        window: WindowId,
        x: i32,
        y: i32,
        icon: String,
    },
    ValidateRect {
        window: WindowId,
        rect: Rect,
    },
    /// Caption text drawn by a control.
    Label { window: WindowId, text: String },
    /// A notification observed by application code.
    Notify { window: WindowId, text: String },
    /// A handler thread terminated by a panic.
    Error { window: WindowId, text: String },
}

impl TraceRecord {
    pub fn window(&self) -> WindowId {
        match self {
            TraceRecord::FillRect { window, .. }
            | TraceRecord::BitBlt { window, .. }
            | TraceRecord::DrawIcon { window, .. }
            | TraceRecord::ValidateRect { window, .. }
            | TraceRecord::Label { window, .. }
            | TraceRecord::Notify { window, .. }
            | TraceRecord::Error { window, .. } => *window,
        }
    }
}

/// Escapes text so a record stays on one line.
fn one_line(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceRecord::FillRect {
                window,
                rect,
                brush,
            } => write!(f, "FILLRECT {window} {rect} {brush}"),
            TraceRecord::BitBlt {
                window,
                x,
                y,
                width,
                height,
                bitmap,
                src_x,
                src_y,
                rop,
            } => write!(
                f,
                "BITBLT {window} {x} {y} {width} {height} {bitmap} {src_x} {src_y} {rop}"
            ),
            TraceRecord::DrawIcon { window, x, y, icon } => {
                write!(f, "DRAWICON {window} {x} {y} {icon}")
            }
            TraceRecord::ValidateRect { window, rect } => write!(f, "VALIDATERECT {window} {rect}"),
            TraceRecord::Label { window, text } => write!(f, "LABEL {window} {}", one_line(text)),
            TraceRecord::Notify { window, text } => write!(f, "NOTIFY {window} {}", one_line(text)),
            TraceRecord::Error { window, text } => write!(f, "ERROR {window} {}", one_line(text)),
        }
    }
}

/// Renders records as newline-terminated lines.
pub fn render(records: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}
