//! Window messages and pixel geometry.

use std::fmt;
use std::str::FromStr;

/// An integer pixel rectangle, half-open on the right and bottom edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rect {
    pub left: i32,
    pub top: i32,
    pub right: i32,
    pub bottom: i32,
}

impl Rect {
    /// Builds a rect, reordering the edges if they are reversed.
    pub fn new(left: i32, top: i32, right: i32, bottom: i32) -> Self {
        Rect {
            left: left.min(right),
            top: top.min(bottom),
            right: left.max(right),
            bottom: top.max(bottom),
        }
    }

    pub fn from_origin_size(x: i32, y: i32, width: i32, height: i32) -> Self {
        Rect::new(x, y, x.saturating_add(width.max(0)), y.saturating_add(height.max(0)))
    }

    pub fn width(&self) -> i32 {
        self.right - self.left
    }

    pub fn height(&self) -> i32 {
        self.bottom - self.top
    }

    pub fn is_empty(&self) -> bool {
        self.width() == 0 || self.height() == 0
    }

    /// The same size placed at the origin.
    pub fn client(&self) -> Rect {
        Rect::new(0, 0, self.width(), self.height())
    }

    pub fn translate(&self, dx: i32, dy: i32) -> Rect {
        Rect {
            left: self.left + dx,
            top: self.top + dy,
            right: self.right + dx,
            bottom: self.bottom + dy,
        }
    }

    /// Largest rect inside both, or `None` when the overlap has no area.
    pub fn intersect(&self, other: &Rect) -> Option<Rect> {
        let r = Rect {
            left: self.left.max(other.left),
            top: self.top.max(other.top),
            right: self.right.min(other.right),
            bottom: self.bottom.min(other.bottom),
        };
        (r.left < r.right && r.top < r.bottom).then_some(r)
    }

    /// Smallest rect covering both.
    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            left: self.left.min(other.left),
            top: self.top.min(other.top),
            right: self.right.max(other.right),
            bottom: self.bottom.max(other.bottom),
        }
    }

    pub fn contains(&self, x: i32, y: i32) -> bool {
        self.left <= x && x < self.right && self.top <= y && y < self.bottom
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.left <= other.left
            && self.top <= other.top
            && other.right <= self.right
            && other.bottom <= self.bottom
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.left, self.top, self.right, self.bottom)
    }
}

/// Free-function form of [`Rect::intersect`].
pub fn rect_intersect(a: &Rect, b: &Rect) -> Option<Rect> {
    a.intersect(b)
}

/// Free-function form of [`Rect::contains`].
pub fn rect_contains(a: &Rect, x: i32, y: i32) -> bool {
    a.contains(x, y)
}

/// A window message.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Msg {
    Create,
    /// Client-area size after a resize.
    Size { width: i32, height: i32 },
    /// The client-area region needing repaint.
    Paint(Rect),
    Destroy,
    Timer(i32),
    MouseMove { x: i32, y: i32 },
    LButtonDown { x: i32, y: i32 },
    LButtonUp { x: i32, y: i32 },
    LButtonDblClk { x: i32, y: i32 },
    KeyDown(i32),
    Char(i32),
    Close,
    /// A notification from child control `id`.
    Command { id: i32, code: i32 },
    /// The system-queue sentinel; never delivered to a window.
    Quit(i32),
}

impl Msg {
    pub fn name(&self) -> &'static str {
        match self {
            Msg::Create => "WM_CREATE",
            Msg::Size { .. } => "WM_SIZE",
            Msg::Paint(_) => "WM_PAINT",
            Msg::Destroy => "WM_DESTROY",
            Msg::Timer(_) => "WM_TIMER",
            Msg::MouseMove { .. } => "WM_MOUSEMOVE",
            Msg::LButtonDown { .. } => "WM_LBUTTONDOWN",
            Msg::LButtonUp { .. } => "WM_LBUTTONUP",
            Msg::LButtonDblClk { .. } => "WM_LBUTTONDBLCLK",
            Msg::KeyDown(_) => "WM_KEYDOWN",
            Msg::Char(_) => "WM_CHAR",
            Msg::Close => "WM_CLOSE",
            Msg::Command { .. } => "WM_COMMAND",
            Msg::Quit(_) => "WM_QUIT",
        }
    }

    fn args(&self) -> Vec<i32> {
        match *self {
            Msg::Create | Msg::Destroy | Msg::Close => vec![],
            Msg::Size { width, height } => vec![width, height],
            Msg::Paint(r) => vec![r.left, r.top, r.right, r.bottom],
            Msg::Timer(n) | Msg::KeyDown(n) | Msg::Char(n) | Msg::Quit(n) => vec![n],
            Msg::MouseMove { x, y }
            | Msg::LButtonDown { x, y }
            | Msg::LButtonUp { x, y }
            | Msg::LButtonDblClk { x, y } => vec![x, y],
            Msg::Command { id, code } => vec![id, code],
        }
    }

    /// Whether the message carries a pointer position.
    pub fn is_mouse(&self) -> bool {
        matches!(
            self,
            Msg::MouseMove { .. }
                | Msg::LButtonDown { .. }
                | Msg::LButtonUp { .. }
                | Msg::LButtonDblClk { .. }
        )
    }
}

impl fmt::Display for Msg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        for a in self.args() {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed message text: {0:?}")]
pub struct ParseMsgError(pub String);

impl FromStr for Msg {
    type Err = ParseMsgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseMsgError(s.to_string());
        let mut words = s.split_whitespace();
        let name = words.next().ok_or_else(bad)?;
        let args = words
            .map(|w| w.parse::<i32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        let msg = match (name, args.as_slice()) {
            ("WM_CREATE", []) => Msg::Create,
            ("WM_DESTROY", []) => Msg::Destroy,
            ("WM_CLOSE", []) => Msg::Close,
            ("WM_SIZE", &[width, height]) => Msg::Size { width, height },
            ("WM_PAINT", &[l, t, r, b]) if l <= r && t <= b => Msg::Paint(Rect::new(l, t, r, b)),
            ("WM_TIMER", &[n]) => Msg::Timer(n),
            ("WM_KEYDOWN", &[n]) => Msg::KeyDown(n),
            ("WM_CHAR", &[n]) => Msg::Char(n),
            ("WM_QUIT", &[n]) => Msg::Quit(n),
            ("WM_MOUSEMOVE", &[x, y]) => Msg::MouseMove { x, y },
            ("WM_LBUTTONDOWN", &[x, y]) => Msg::LButtonDown { x, y },
            ("WM_LBUTTONUP", &[x, y]) => Msg::LButtonUp { x, y },
            ("WM_LBUTTONDBLCLK", &[x, y]) => Msg::LButtonDblClk { x, y },
            ("WM_COMMAND", &[id, code]) => Msg::Command { id, code },
            _ => return Err(bad()),
        };
        Ok(msg)
    }
}
