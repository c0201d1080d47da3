//! Controls that report through notification channels.
//!
//! A predefined control lives inside a transparent wrapper window that is
//! its parent. The control reports to the wrapper with WM_COMMAND, and the
//! wrapper thread turns each command into a synchronous send on the
//! control's notification channel. Window operations applied to the control
//! are mirrored onto the wrapper so the two always coincide.
//!
//! The wrapper thread blocks until someone synchronizes on the control's
//! notification event, so applications should consume notifications.

mod button;
mod composite;
mod edit;

pub use button::{ButtonNotify, PushButton};
pub use composite::{PanelNotify, TwoButtonPanel};
pub use edit::{Edit, EditBuffer, EditNotify};

use crate::cml::{Channel, Event};
use crate::display::{Display, ShowStyle, WindowId, WindowStyle};
use crate::error::{Error, Result};
use crate::msg::Msg;
use crate::run::Instance;
use crate::window::{Window, WindowClass, WindowSpec};

/// The shape every control shares, predefined or composed.
pub trait Control {
    type Notify: Send + 'static;

    fn notify_evt(&self) -> Event<Self::Notify>;

    /// The control as an ordinary window.
    fn window_of(&self) -> Window;
}

/// Notification codes carried in WM_COMMAND.
pub(crate) trait NotifyCode: Sized + Copy + Clone + Send + Sync + 'static {
    fn code(self) -> i32;
    fn from_code(code: i32) -> Option<Self>;
}

/// Window operations mirrored from a control onto its wrapper.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowOp {
    Move { x: i32, y: i32 },
    Resize { width: i32, height: i32 },
    Show(ShowStyle),
    Destroy,
}

/// Applies `op` to a wrapped control and its wrapper. The control stays at
/// the wrapper's origin, so both rectangles coincide on screen.
pub fn wrapper_forward(control: &Window, op: WindowOp) -> Result<()> {
    let display = control.display();
    let wrapper = display
        .wrapper_of(control.id())
        .ok_or_else(|| Error::NotAControl(format!("{} is not a wrapped control", control.id())))?;
    match op {
        WindowOp::Move { x, y } => {
            display.rect(control.id())?;
            display.move_window(wrapper, x, y)
        }
        WindowOp::Resize { width, height } => {
            display.rect(control.id())?;
            display.resize_window(wrapper, width, height)?;
            display.resize_window(control.id(), width, height)
        }
        WindowOp::Show(style) => {
            display.show_window(wrapper, style)?;
            display.show_window(control.id(), style)
        }
        WindowOp::Destroy => {
            // the control is the wrapper's child and goes first
            display.destroy_window(wrapper);
            Ok(())
        }
    }
}

const WRAPPER_CLASS: &str = "#wrapper";
const FIRST_CONTROL_ID: i32 = 0x1000;

/// A fresh sibling-unique child id under `parent`.
pub(crate) fn next_child_id(display: &Display, parent: WindowId) -> i32 {
    display
        .children_of(parent)
        .into_iter()
        .filter_map(|c| display.child_id(c))
        .filter(|id| *id >= FIRST_CONTROL_ID)
        .max()
        .map_or(FIRST_CONTROL_ID, |m| m + 1)
}

pub(crate) struct Wrapped {
    pub(crate) wrapper: Window,
    pub(crate) control: Window,
}

/// Creates the wrapper under `parent` and the control inside it.
#[allow(clippy::too_many_arguments)]
pub(crate) fn create_wrapped<N, H>(
    class: &WindowClass,
    title: &str,
    (x, y, width, height): (i32, i32, i32, i32),
    instance: &Instance,
    parent: &Window,
    notify: Channel<N>,
    handler: H,
) -> Result<Wrapped>
where
    N: NotifyCode,
    H: FnOnce(Window, Channel<Msg>) + Send + 'static,
{
    if width <= 0 || height <= 0 {
        return Err(Error::Geometry(format!("control size {width}x{height}")));
    }
    let display = instance.display();
    let wrapper_class = WindowClass::builtin(display, WRAPPER_CLASS, "null");
    let styles = [WindowStyle::Child, WindowStyle::Visible];
    let wrapper = Window::build(
        &wrapper_class,
        WindowSpec::new("", &styles).at(x, y).size(width, height),
        Some(parent.id()),
        Some(next_child_id(display, parent.id())),
        None,
        None,
        instance,
        move |w, ch| wrapper_loop(w, ch, notify),
    )?;
    let control = Window::build(
        class,
        WindowSpec::new(title, &styles).at(0, 0).size(width, height),
        Some(wrapper.id()),
        Some(1),
        None,
        Some(wrapper.id()),
        instance,
        handler,
    );
    match control {
        Ok(control) => Ok(Wrapped { wrapper, control }),
        Err(e) => {
            wrapper.destroy();
            Err(e)
        }
    }
}

fn wrapper_loop<N: NotifyCode>(window: Window, ch: Channel<Msg>, notify: Channel<N>) {
    enum Step {
        Sent,
        Got(Msg),
    }
    let mut backlog = std::collections::VecDeque::new();
    loop {
        let m = match backlog.pop_front() {
            Some(m) => m,
            None => ch.recv(),
        };
        match m {
            Msg::Command { code, .. } => {
                let Some(n) = N::from_code(code) else { continue };
                // a destroy arriving while the send waits still ends the thread
                loop {
                    let step = crate::cml::choose([
                        notify.send_evt(n).wrap(|_| Step::Sent),
                        ch.recv_evt().wrap(Step::Got),
                    ])
                    .sync();
                    match step {
                        Step::Sent => break,
                        Step::Got(Msg::Destroy) => return,
                        Step::Got(m) => backlog.push_back(m),
                    }
                }
            }
            Msg::Destroy => return,
            m => {
                let _ = window.default(m);
            }
        }
    }
}
