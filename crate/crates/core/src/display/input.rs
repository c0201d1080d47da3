//! Synthetic input events.

use super::WindowId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputKind {
    /// Advances the clock only.
    Tick,
    MouseMove { x: i32, y: i32 },
    MouseDown { x: i32, y: i32 },
    MouseUp { x: i32, y: i32 },
    DblClick { x: i32, y: i32 },
    KeyDown(i32),
    Char(i32),
    Close(WindowId),
    Resize {
        window: WindowId,
        width: i32,
        height: i32,
    },
}

/// An input event stamped with the virtual time it occurs at. Pointer
/// coordinates are screen coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InputEvent {
    pub at_ms: u64,
    pub kind: InputKind,
}

impl InputEvent {
    pub fn new(at_ms: u64, kind: InputKind) -> Self {
        InputEvent { at_ms, kind }
    }
}
