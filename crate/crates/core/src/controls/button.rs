use std::sync::{Arc, Mutex};

use super::{create_wrapped, Control, NotifyCode};
use crate::cml::{Channel, Event};
use crate::error::Result;
use crate::msg::Msg;
use crate::resources::{Brush, Dc};
use crate::run::Instance;
use crate::window::{Window, WindowClass};

pub(crate) const BUTTON_CLASS: &str = "#button";

const BN_CLICKED: i32 = 0;
const BN_DOUBLECLICKED: i32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ButtonNotify {
    Clicked,
    DoubleClicked,
}

impl NotifyCode for ButtonNotify {
    fn code(self) -> i32 {
        match self {
            ButtonNotify::Clicked => BN_CLICKED,
            ButtonNotify::DoubleClicked => BN_DOUBLECLICKED,
        }
    }

    fn from_code(code: i32) -> Option<Self> {
        match code {
            BN_CLICKED => Some(ButtonNotify::Clicked),
            BN_DOUBLECLICKED => Some(ButtonNotify::DoubleClicked),
            _ => None,
        }
    }
}

/// A push button. A click is a press and a release both inside the
/// button; leaving it while pressed cancels the click.
#[derive(Clone)]
pub struct PushButton {
    control: Window,
    wrapper: Window,
    label: String,
    notify: Channel<ButtonNotify>,
    last_click_at: Arc<Mutex<Option<u64>>>,
}

impl std::fmt::Debug for PushButton {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PushButton")
            .field("control", &self.control.id())
            .field("wrapper", &self.wrapper.id())
            .field("label", &self.label)
            .finish()
    }
}

impl PushButton {
    pub fn create(
        label: &str,
        x: i32,
        y: i32,
        width: i32,
        height: i32,
        instance: &Instance,
        parent: &Window,
    ) -> Result<PushButton> {
        let class = WindowClass::builtin(instance.display(), BUTTON_CLASS, "btnface");
        let notify = Channel::new();
        let last_click_at = Arc::new(Mutex::new(None));
        let caption = label.to_string();
        let clicks = Arc::clone(&last_click_at);
        let parts = create_wrapped(
            &class,
            label,
            (x, y, width, height),
            instance,
            parent,
            notify.clone(),
            move |w, ch| button_loop(w, ch, caption, clicks),
        )?;
        Ok(PushButton {
            control: parts.control,
            wrapper: parts.wrapper,
            label: label.to_string(),
            notify,
            last_click_at,
        })
    }

    pub fn notify_evt(&self) -> Event<ButtonNotify> {
        self.notify.recv_evt()
    }

    pub fn window_of(&self) -> Window {
        self.control.clone()
    }

    pub fn wrapper(&self) -> Window {
        self.wrapper.clone()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Virtual time of the most recent completed click.
    pub fn last_click_at(&self) -> Option<u64> {
        *self.last_click_at.lock().unwrap()
    }
}

impl Control for PushButton {
    type Notify = ButtonNotify;

    fn notify_evt(&self) -> Event<ButtonNotify> {
        PushButton::notify_evt(self)
    }

    fn window_of(&self) -> Window {
        PushButton::window_of(self)
    }
}

/// Reports `n` to the control's wrapper.
pub(crate) fn command<N: NotifyCode>(window: &Window, n: N) {
    let Some(wrapper) = window.parent() else { return };
    let id = window.display().child_id(window.id()).unwrap_or(0);
    let _ = wrapper.send(Msg::Command { id, code: n.code() });
}

/// Fills the control with the button face and draws its caption.
pub(crate) fn paint_face(window: &Window, caption: &str) -> Result<()> {
    let dc = Dc::get(window)?;
    dc.fill_rect(window.client_rect()?, &Brush::btnface())?;
    dc.label(caption)?;
    Dc::release(window, &dc)
}

fn button_loop(
    window: Window,
    ch: Channel<Msg>,
    caption: String,
    last_click_at: Arc<Mutex<Option<u64>>>,
) {
    let inside = |x, y| window.client_rect().is_ok_and(|r| r.contains(x, y));
    let mut armed = false;
    loop {
        match ch.recv() {
            Msg::LButtonDown { x, y } => armed = inside(x, y),
            Msg::MouseMove { x, y } => armed &= inside(x, y),
            Msg::LButtonUp { x, y } => {
                if std::mem::take(&mut armed) && inside(x, y) {
                    *last_click_at.lock().unwrap() = Some(window.display().now());
                    command(&window, ButtonNotify::Clicked);
                }
            }
            Msg::LButtonDblClk { x, y } => {
                if inside(x, y) {
                    command(&window, ButtonNotify::DoubleClicked);
                }
            }
            m @ Msg::Paint(_) => {
                let _ = paint_face(&window, &caption);
                let _ = window.default(m);
            }
            Msg::Destroy => return,
            m => {
                let _ = window.default(m);
            }
        }
    }
}
