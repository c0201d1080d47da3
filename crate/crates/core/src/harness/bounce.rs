//! The bouncing-logo demo: a bitmap moved across the client area on every
//! timer tick, reflecting off the walls.

use crate::cml::Channel;
use crate::display::{ClassStyle, WindowStyle};
use crate::error::Result;
use crate::msg::Msg;
use crate::resources::{Bitmap, Brush, Cursor, Dc, Icon};
use crate::display::Rop;
use crate::run::Instance;
use crate::window::{quit, Timer, Window, WindowClass, WindowSpec};

pub const TIMER_ID: i32 = 1;
pub const RATE: i64 = 20;
pub const MOVE_R: i32 = 10;
pub const X_TOTAL: i32 = 158;
pub const Y_TOTAL: i32 = 131;
pub const X_RADIUS: i32 = 59;
pub const Y_RADIUS: i32 = 45;
pub const BITMAP: &str = "smlnj.bmp";
pub const CLASS_NAME: &str = "BouncingSMLNJ";

/// Client size, logo center and per-tick movement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BounceState {
    pub x_size: i32,
    pub y_size: i32,
    pub x_center: i32,
    pub y_center: i32,
    pub x_move: i32,
    pub y_move: i32,
}

impl BounceState {
    /// The state after a resize: centered, moving down and right.
    pub fn for_size(width: i32, height: i32) -> Self {
        BounceState {
            x_size: width,
            y_size: height,
            x_center: width.div_euclid(2),
            y_center: height.div_euclid(2),
            x_move: MOVE_R,
            y_move: MOVE_R,
        }
    }

    /// Where this tick draws the bitmap's top-left corner.
    pub fn origin(&self) -> (i32, i32) {
        (
            self.x_center - X_TOTAL.div_euclid(2),
            self.y_center - Y_TOTAL.div_euclid(2),
        )
    }

    /// Moves the center, reversing a component about to hit a wall.
    pub fn advanced(self) -> Self {
        let x_center = self.x_center + self.x_move;
        let y_center = self.y_center + self.y_move;
        let flip = |c: i32, r: i32, size: i32, m: i32| {
            if c + r >= size || c - r <= 0 {
                -m
            } else {
                m
            }
        };
        BounceState {
            x_center,
            y_center,
            x_move: flip(x_center, X_RADIUS, self.x_size, self.x_move),
            y_move: flip(y_center, Y_RADIUS, self.y_size, self.y_move),
            ..self
        }
    }
}

/// Draws at the current center, then moves.
pub fn on_timer(window: &Window, s: BounceState, bitmap: &Bitmap) -> Result<BounceState> {
    let dc = Dc::get(window)?;
    let mem = Dc::create_compatible(&dc)?;
    Bitmap::select(&mem, bitmap)?;
    let (x, y) = s.origin();
    dc.bitblt(x, y, X_TOTAL, Y_TOTAL, &mem, 0, 0, Rop::SrcCopy)?;
    Dc::release(window, &dc)?;
    Dc::delete(&mem)?;
    Ok(s.advanced())
}

pub fn handler(window: Window, ch: Channel<Msg>) {
    loop {
        if ch.recv() == Msg::Create {
            break;
        }
    }
    Timer::set(&window, TIMER_ID, RATE).expect("timer on a fresh window");
    let bitmap = Bitmap::load(BITMAP).expect("bitmap in manifest");
    let mut s = BounceState::default();
    loop {
        match ch.recv() {
            Msg::Size { width, height } => s = BounceState::for_size(width, height),
            Msg::Destroy => {
                Timer::kill(&window, TIMER_ID);
                let _ = bitmap.delete();
                let _ = quit(0);
                return;
            }
            Msg::Timer(TIMER_ID) => s = on_timer(&window, s, &bitmap).expect("draw"),
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
        &[ClassStyle::HRedraw, ClassStyle::VRedraw],
    )?;
    let w = Window::create(
        &class,
        WindowSpec::new("Bouncing SML/NJ", &[WindowStyle::OverlappedWindow]),
        None,
        None,
        &instance,
        handler,
    )?;
    let code = w.msg_loop();
    class.unregister()?;
    code
}
