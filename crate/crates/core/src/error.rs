use std::io;

use crate::display::WindowId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to spawn thread: {0}")]
    Spawn(#[source] io::Error),
    #[error("window {0} has been destroyed")]
    WindowDestroyed(WindowId),
    #[error("WM_QUIT cannot be posted to a window")]
    QuitToWindow,
    #[error("timer period must be positive, got {0}")]
    InvalidPeriod(i64),
    #[error("input at {at} ms precedes the clock at {now} ms")]
    TimeRegression { at: u64, now: u64 },
    #[error("a message loop is already running")]
    LoopActive,
    #[error("window class name must not be empty")]
    EmptyClassName,
    #[error("window class {0:?} is already registered")]
    ClassExists(String),
    #[error("window class {0:?} is not registered")]
    ClassNotRegistered(String),
    #[error("window class {name:?} still has {live} live window(s)")]
    ClassInUse { name: String, live: usize },
    #[error("child id {id} already used under window {parent}")]
    DuplicateChildId { parent: WindowId, id: i32 },
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("no {kind} resource named {name:?}")]
    ResourceNotFound { kind: &'static str, name: String },
    #[error("bitmap {0:?} has been deleted")]
    BitmapDeleted(String),
    #[error("device context {0} is no longer valid")]
    DcInvalid(u64),
    #[error("device context {0} belongs to another thread")]
    DcWrongThread(u64),
    #[error("device context {0} is not a {1} context")]
    DcKind(u64, &'static str),
    #[error("memory device context {0} has no bitmap selected")]
    NoBitmapSelected(u64),
    #[error("menu has been destroyed")]
    MenuDestroyed,
    #[error("a menu cannot contain itself")]
    MenuCycle,
    #[error("command id {0} already present in menu")]
    DuplicateCommandId(i32),
    #[error("no display is attached to this thread")]
    NoDisplay,
    #[error("{0}")]
    NotAControl(String),
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
    #[error("script line {line}: {msg}")]
    Script { line: usize, msg: String },
    #[error("unknown demo {name:?}; available: {available}")]
    UnknownDemo { name: String, available: String },
    #[error("input exhausted before the application quit")]
    InputExhausted,
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}
