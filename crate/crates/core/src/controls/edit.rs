use std::sync::{Arc, Mutex};

use super::button::command;
use super::{create_wrapped, Control, NotifyCode};
use crate::cml::{Channel, Event};
use crate::error::Result;
use crate::msg::Msg;
use crate::resources::{Brush, Dc};
use crate::run::Instance;
use crate::window::{Window, WindowClass};

pub(crate) const EDIT_CLASS: &str = "#edit";

const BACKSPACE: i32 = 8;

/// Edit notifications. Only `Update` and `Change` are ever emitted; the
/// rest complete the vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EditNotify {
    Change,
    ErrSpace,
    HScroll,
    KillFocus,
    MaxText,
    SetFocus,
    Update,
    VScroll,
}

impl EditNotify {
    pub const ALL: [EditNotify; 8] = [
        EditNotify::Change,
        EditNotify::ErrSpace,
        EditNotify::HScroll,
        EditNotify::KillFocus,
        EditNotify::MaxText,
        EditNotify::SetFocus,
        EditNotify::Update,
        EditNotify::VScroll,
    ];
}

impl NotifyCode for EditNotify {
    fn code(self) -> i32 {
        match self {
            EditNotify::SetFocus => 0x100,
            EditNotify::KillFocus => 0x200,
            EditNotify::Change => 0x300,
            EditNotify::Update => 0x400,
            EditNotify::ErrSpace => 0x500,
            EditNotify::MaxText => 0x501,
            EditNotify::HScroll => 0x601,
            EditNotify::VScroll => 0x602,
        }
    }

    fn from_code(code: i32) -> Option<Self> {
        EditNotify::ALL.into_iter().find(|n| n.code() == code)
    }
}

/// Text, selection and a single undo slot. Positions count code points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EditBuffer {
    text: Vec<char>,
    sel: (usize, usize),
    undo: Option<(Vec<char>, (usize, usize))>,
}

impl EditBuffer {
    pub fn new(text: &str) -> Self {
        EditBuffer {
            text: text.chars().collect(),
            sel: (0, 0),
            undo: None,
        }
    }

    pub fn text(&self) -> String {
        self.text.iter().collect()
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn selection(&self) -> (usize, usize) {
        self.sel
    }

    /// Orders the bounds and clamps them into `0..=len`.
    pub fn set_selection(&mut self, start: i64, end: i64) {
        let len = self.text.len() as i64;
        let a = start.clamp(0, len) as usize;
        let b = end.clamp(0, len) as usize;
        self.sel = (a.min(b), a.max(b));
    }

    /// Replaces the selection with `s`, leaving a caret after the insertion.
    /// The previous state becomes undoable.
    pub fn replace_selection(&mut self, s: &str) {
        let (start, end) = self.sel;
        let inserted: Vec<char> = s.chars().collect();
        let caret = start + inserted.len();
        let old_text = self.text.clone();
        self.text.splice(start..end, inserted);
        self.undo = Some((old_text, self.sel));
        self.sel = (caret, caret);
    }

    /// Deletes the selection, or the code point before a collapsed caret.
    /// Returns false when there was nothing to delete.
    pub fn backspace(&mut self) -> bool {
        let before = self.sel;
        let (start, end) = before;
        if start == end {
            if start == 0 {
                return false;
            }
            self.sel = (start - 1, end);
        }
        self.replace_selection("");
        if let Some((_, sel)) = &mut self.undo {
            *sel = before;
        }
        true
    }

    pub fn can_undo(&self) -> bool {
        self.undo.is_some()
    }

    /// Swaps the current state with the undo slot. Returns false when the
    /// slot is empty.
    pub fn undo(&mut self) -> bool {
        match self.undo.take() {
            Some((text, sel)) => {
                let cur = (std::mem::replace(&mut self.text, text), self.sel);
                self.sel = sel;
                self.undo = Some(cur);
                true
            }
            None => false,
        }
    }

    pub fn empty_undo(&mut self) {
        self.undo = None;
    }
}

/// A single-line edit box.
#[derive(Clone)]
pub struct Edit {
    control: Window,
    wrapper: Window,
    buffer: Arc<Mutex<EditBuffer>>,
    notify: Channel<EditNotify>,
}

impl std::fmt::Debug for Edit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Edit")
            .field("control", &self.control.id())
            .field("buffer", &*self.buffer.lock().unwrap())
            .finish()
    }
}

impl Edit {
    pub fn create(
        text: &str,
        x: i32,
        y: i32,
        width: i32,
        height: i32,
        instance: &Instance,
        parent: &Window,
    ) -> Result<Edit> {
        let class = WindowClass::builtin(instance.display(), EDIT_CLASS, "white");
        let notify = Channel::new();
        let buffer = Arc::new(Mutex::new(EditBuffer::new(text)));
        let shared = Arc::clone(&buffer);
        let parts = create_wrapped(
            &class,
            "",
            (x, y, width, height),
            instance,
            parent,
            notify.clone(),
            move |w, ch| edit_loop(w, ch, shared),
        )?;
        Ok(Edit {
            control: parts.control,
            wrapper: parts.wrapper,
            buffer,
            notify,
        })
    }

    pub fn notify_evt(&self) -> Event<EditNotify> {
        self.notify.recv_evt()
    }

    pub fn window_of(&self) -> Window {
        self.control.clone()
    }

    pub fn wrapper(&self) -> Window {
        self.wrapper.clone()
    }

    pub fn text(&self) -> String {
        self.buffer.lock().unwrap().text()
    }

    pub fn get_sel(&self) -> (usize, usize) {
        self.buffer.lock().unwrap().selection()
    }

    pub fn set_sel(&self, start: i64, end: i64) {
        self.buffer.lock().unwrap().set_selection(start, end);
    }

    pub fn replace_sel(&self, s: &str) {
        self.buffer.lock().unwrap().replace_selection(s);
        changed(&self.control);
    }

    pub fn can_undo(&self) -> bool {
        self.buffer.lock().unwrap().can_undo()
    }

    pub fn undo(&self) {
        if self.buffer.lock().unwrap().undo() {
            changed(&self.control);
        }
    }

    pub fn empty_undo_buffer(&self) {
        self.buffer.lock().unwrap().empty_undo();
    }

    /// A copy of the current buffer state.
    pub fn snapshot(&self) -> EditBuffer {
        self.buffer.lock().unwrap().clone()
    }
}

impl Control for Edit {
    type Notify = EditNotify;

    fn notify_evt(&self) -> Event<EditNotify> {
        Edit::notify_evt(self)
    }

    fn window_of(&self) -> Window {
        Edit::window_of(self)
    }
}

fn changed(control: &Window) {
    command(control, EditNotify::Update);
    command(control, EditNotify::Change);
    let _ = control.invalidate(None);
}

fn edit_loop(window: Window, ch: Channel<Msg>, buffer: Arc<Mutex<EditBuffer>>) {
    loop {
        match ch.recv() {
            Msg::Char(BACKSPACE) => {
                if buffer.lock().unwrap().backspace() {
                    changed(&window);
                }
            }
            Msg::Char(code) => {
                let typed = u32::try_from(code).ok().and_then(char::from_u32);
                if let Some(c) = typed.filter(|c| !c.is_control()) {
                    buffer.lock().unwrap().replace_selection(c.encode_utf8(&mut [0; 4]));
                    changed(&window);
                }
            }
            m @ Msg::Paint(_) => {
                let text = buffer.lock().unwrap().text();
                if let Ok(dc) = Dc::get(&window) {
                    let _ = window
                        .client_rect()
                        .and_then(|r| dc.fill_rect(r, &Brush::white()))
                        .and_then(|_| dc.label(&text));
                    let _ = Dc::release(&window, &dc);
                }
                let _ = window.default(m);
            }
            Msg::Destroy => return,
            m => {
                let _ = window.default(m);
            }
        }
    }
}
