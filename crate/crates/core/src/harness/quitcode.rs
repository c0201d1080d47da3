//! A window that quits with the code of the first key pressed in it.

use crate::cml::Channel;
use crate::display::WindowStyle;
use crate::error::Result;
use crate::msg::Msg;
use crate::resources::{Brush, Cursor, Icon};
use crate::run::Instance;
use crate::window::{quit, Window, WindowClass, WindowSpec};

pub const CLASS_NAME: &str = "QuitCode";

fn handler(window: Window, ch: Channel<Msg>) {
    let mut exit = 0;
    loop {
        match ch.recv() {
            Msg::KeyDown(code) => {
                exit = code;
                window.destroy();
            }
            Msg::Destroy => {
                let _ = quit(exit);
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
        WindowSpec::new("Quit code", &[WindowStyle::OverlappedWindow, WindowStyle::Visible])
            .at(0, 0)
            .size(200, 100),
        None,
        None,
        &instance,
        handler,
    )?;
    let code = w.msg_loop();
    class.unregister()?;
    code
}
