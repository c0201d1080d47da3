use super::button::{ButtonNotify, PushButton};
use super::{next_child_id, Control};
use crate::cml::{self, Channel, Event};
use crate::display::WindowStyle;
use crate::error::{Error, Result};
use crate::msg::Msg;
use crate::resources::{Brush, Dc};
use crate::run::Instance;
use crate::window::{Window, WindowClass, WindowSpec};

pub(crate) const PANEL_CLASS: &str = "#panel";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PanelNotify {
    Clicked(i32),
}

/// A custom control built from two push buttons. Its controller thread
/// listens to its own window and to both buttons at once and reports which
/// button was clicked.
#[derive(Clone)]
pub struct TwoButtonPanel {
    window: Window,
    buttons: (PushButton, PushButton),
    notify: Channel<PanelNotify>,
}

impl std::fmt::Debug for TwoButtonPanel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TwoButtonPanel")
            .field("window", &self.window.id())
            .finish_non_exhaustive()
    }
}

impl TwoButtonPanel {
    pub fn create(
        labels: (&str, &str),
        x: i32,
        y: i32,
        width: i32,
        height: i32,
        instance: &Instance,
        parent: &Window,
    ) -> Result<TwoButtonPanel> {
        const MARGIN: i32 = 10;
        let button_w = (width - 3 * MARGIN) / 2;
        let button_h = height - 2 * MARGIN;
        if button_w <= 0 || button_h <= 0 {
            return Err(Error::Geometry(format!("panel size {width}x{height}")));
        }
        let display = instance.display();
        let class = WindowClass::builtin(display, PANEL_CLASS, "gray");
        let notify = Channel::new();
        let setup: Channel<(PushButton, PushButton)> = Channel::new();
        let (out, buttons_in) = (notify.clone(), setup.clone());
        let window = Window::create_child(
            &class,
            WindowSpec::new("", &[WindowStyle::Child, WindowStyle::Visible])
                .at(x, y)
                .size(width, height),
            parent,
            next_child_id(display, parent.id()),
            0,
            instance,
            move |w, ch| {
                let (b1, b2) = buttons_in.recv();
                controller(w, ch, b1, b2, out);
            },
        )?;
        let made = PushButton::create(labels.0, MARGIN, MARGIN, button_w, button_h, instance, &window)
            .and_then(|b1| {
                let b2 = PushButton::create(
                    labels.1,
                    2 * MARGIN + button_w,
                    MARGIN,
                    button_w,
                    button_h,
                    instance,
                    &window,
                )?;
                Ok((b1, b2))
            });
        let buttons = match made {
            Ok(b) => b,
            Err(e) => {
                window.destroy();
                return Err(e);
            }
        };
        setup.send(buttons.clone());
        Ok(TwoButtonPanel {
            window,
            buttons,
            notify,
        })
    }

    pub fn notify_evt(&self) -> Event<PanelNotify> {
        self.notify.recv_evt()
    }

    pub fn window_of(&self) -> Window {
        self.window.clone()
    }

    pub fn buttons(&self) -> (&PushButton, &PushButton) {
        (&self.buttons.0, &self.buttons.1)
    }
}

impl Control for TwoButtonPanel {
    type Notify = PanelNotify;

    fn notify_evt(&self) -> Event<PanelNotify> {
        TwoButtonPanel::notify_evt(self)
    }

    fn window_of(&self) -> Window {
        TwoButtonPanel::window_of(self)
    }
}

fn controller(
    window: Window,
    ch: Channel<Msg>,
    b1: PushButton,
    b2: PushButton,
    notify: Channel<PanelNotify>,
) {
    let handle_window = window.clone();
    let handle_message = move |m: Msg| match m {
        Msg::Destroy => false,
        m @ Msg::Paint(_) => {
            if let Ok(dc) = Dc::get(&handle_window) {
                let _ = handle_window
                    .client_rect()
                    .and_then(|r| dc.fill_rect(r, &Brush::gray()));
                let _ = Dc::release(&handle_window, &dc);
            }
            let _ = handle_window.default(m);
            true
        }
        m => {
            let _ = handle_window.default(m);
            true
        }
    };
    let report = |button: &PushButton, n: i32| {
        let out = notify.clone();
        button.notify_evt().wrap(move |b| {
            match b {
                ButtonNotify::Clicked => out.send(PanelNotify::Clicked(n)),
                ButtonNotify::DoubleClicked => {}
            }
            true
        })
    };
    let step = cml::choose([ch.recv_evt().wrap(handle_message), report(&b1, 1), report(&b2, 2)]);
    while step.sync() {}
}
