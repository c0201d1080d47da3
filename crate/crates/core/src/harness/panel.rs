//! The two-button composite demo. Each panel notification is recorded in
//! the trace as `NOTIFY <panel> CLICKED <n>`.

use crate::cml::{self, Channel};
use crate::controls::{PanelNotify, TwoButtonPanel};
use crate::display::WindowStyle;
use crate::error::Result;
use crate::msg::Msg;
use crate::resources::{Brush, Cursor, Icon};
use crate::run::Instance;
use crate::window::{quit, Window, WindowClass, WindowSpec};

pub const CLASS_NAME: &str = "CompositeDemo";

fn main_handler(window: Window, ch: Channel<Msg>) {
    loop {
        match ch.recv() {
            Msg::Destroy => {
                let _ = quit(0);
                return;
            }
            m => {
                let _ = window.default(m);
            }
        }
    }
}

pub fn winmain(instance: Instance) -> Result<i32> {
    let class = WindowClass::register(
        CLASS_NAME,
        &instance,
        &Cursor::arrow(),
        &Icon::application(),
        &Brush::white(),
        &[],
    )?;
    let w = Window::create(
        &class,
        WindowSpec::new(
            "Two buttons",
            &[WindowStyle::OverlappedWindow, WindowStyle::Visible],
        )
        .at(0, 0)
        .size(400, 200),
        None,
        None,
        &instance,
        main_handler,
    )?;
    let panel = TwoButtonPanel::create(("One", "Two"), 20, 20, 360, 80, &instance, &w)?;
    let display = instance.display().clone();
    let events = panel.notify_evt();
    let id = panel.window_of().id();
    cml::spawn(move || loop {
        match events.sync() {
            PanelNotify::Clicked(n) => display.record_notify(id, format!("CLICKED {n}")),
        }
    })?;
    let code = w.msg_loop();
    class.unregister()?;
    code
}
