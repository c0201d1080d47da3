//! Window classes, windows with per-window handler threads, and timers.
//!
//! Each window gets its own thread running the handler passed at creation,
//! together with a channel carrying the window's messages. WM_CREATE is the
//! first message on that channel and WM_DESTROY, if the window is
//! destroyed, the last.

use std::fmt;

use crate::cml::Channel;
use crate::controls::{self, WindowOp};
use crate::display::{
    ClassRecord, ClassStyle, CreateParams, Display, ShowStyle, WindowId, WindowStyle,
};
use crate::error::{Error, Result};
use crate::msg::{Msg, Rect};
use crate::resources::{Brush, Cursor, Icon, Menu};
use crate::run::Instance;

/// A registered window class.
#[derive(Clone)]
pub struct WindowClass {
    name: String,
    display: Display,
}

impl fmt::Debug for WindowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WindowClass({:?})", self.name)
    }
}

impl WindowClass {
    /// Registers a class under `name`.
    pub fn register(
        name: &str,
        instance: &Instance,
        cursor: &Cursor,
        icon: &Icon,
        brush: &Brush,
        styles: &[ClassStyle],
    ) -> Result<WindowClass> {
        let display = instance.display().clone();
        display.register_class(
            name,
            ClassRecord {
                cursor: cursor.name().to_string(),
                icon: icon.name().to_string(),
                brush: brush.name().to_string(),
                styles: styles.to_vec(),
                builtin: false,
            },
        )?;
        Ok(WindowClass {
            name: name.to_string(),
            display,
        })
    }

    pub(crate) fn builtin(display: &Display, name: &str, brush: &str) -> WindowClass {
        display.ensure_builtin_class(name, brush);
        WindowClass {
            name: name.to_string(),
            display: display.clone(),
        }
    }

    /// Frees the name. Fails while windows of the class exist.
    pub fn unregister(&self) -> Result<()> {
        self.display.unregister_class(&self.name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_registered(&self) -> bool {
        self.display.class_record(&self.name).is_some()
    }

    pub fn styles(&self) -> Result<Vec<ClassStyle>> {
        self.display
            .class_record(&self.name)
            .map(|c| c.styles)
            .ok_or_else(|| Error::ClassNotRegistered(self.name.clone()))
    }

    /// Cursor, icon and brush names the class was registered with.
    pub fn resources(&self) -> Result<(String, String, String)> {
        self.display
            .class_record(&self.name)
            .map(|c| (c.cursor, c.icon, c.brush))
            .ok_or_else(|| Error::ClassNotRegistered(self.name.clone()))
    }
}

/// Shorthand for [`WindowClass::register`].
pub fn class(
    name: &str,
    instance: &Instance,
    cursor: &Cursor,
    icon: &Icon,
    brush: &Brush,
    styles: &[ClassStyle],
) -> Result<WindowClass> {
    WindowClass::register(name, instance, cursor, icon, brush, styles)
}

/// Creation parameters shared by top-level and child windows. Absent
/// geometry takes defaults: cascading positions and a 640×480 size.
#[derive(Clone, Debug, Default)]
pub struct WindowSpec {
    pub title: String,
    pub styles: Vec<WindowStyle>,
    pub x: Option<i32>,
    pub y: Option<i32>,
    pub width: Option<i32>,
    pub height: Option<i32>,
}

impl WindowSpec {
    pub fn new(title: &str, styles: &[WindowStyle]) -> Self {
        WindowSpec {
            title: title.to_string(),
            styles: styles.to_vec(),
            ..Default::default()
        }
    }

    pub fn at(mut self, x: i32, y: i32) -> Self {
        self.x = Some(x);
        self.y = Some(y);
        self
    }

    pub fn size(mut self, width: i32, height: i32) -> Self {
        self.width = Some(width);
        self.height = Some(height);
        self
    }
}

/// Handle to a window. Operations on a destroyed window fail.
#[derive(Clone)]
pub struct Window {
    id: WindowId,
    display: Display,
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Window({})", self.id)
    }
}

impl PartialEq for Window {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.display.same(&other.display)
    }
}

impl Eq for Window {}

impl Window {
    pub(crate) fn from_parts(id: WindowId, display: Display) -> Window {
        Window { id, display }
    }

    /// A handle to an existing window of `display`.
    pub fn from_id(display: &Display, id: WindowId) -> Window {
        Window::from_parts(id, display.clone())
    }

    pub fn id(&self) -> WindowId {
        self.id
    }

    pub fn display(&self) -> &Display {
        &self.display
    }

    /// Creates a top-level window and spawns `handler` on its own thread.
    /// The owner is accepted for signature compatibility and not modeled.
    pub fn create<H>(
        class: &WindowClass,
        spec: WindowSpec,
        _owner: Option<&Window>,
        menu: Option<Menu>,
        instance: &Instance,
        handler: H,
    ) -> Result<Window>
    where
        H: FnOnce(Window, Channel<Msg>) + Send + 'static,
    {
        Self::build(class, spec, None, None, menu, None, instance, handler)
    }

    /// Creates a child of `parent` identified among its siblings by
    /// `child_id`. The trailing integer is reserved and ignored.
    pub fn create_child<H>(
        class: &WindowClass,
        spec: WindowSpec,
        parent: &Window,
        child_id: i32,
        _reserved: i32,
        instance: &Instance,
        handler: H,
    ) -> Result<Window>
    where
        H: FnOnce(Window, Channel<Msg>) + Send + 'static,
    {
        Self::build(
            class,
            spec,
            Some(parent.id),
            Some(child_id),
            None,
            None,
            instance,
            handler,
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn build<H>(
        class: &WindowClass,
        spec: WindowSpec,
        parent: Option<WindowId>,
        child_id: Option<i32>,
        menu: Option<Menu>,
        wrapper: Option<WindowId>,
        instance: &Instance,
        handler: H,
    ) -> Result<Window>
    where
        H: FnOnce(Window, Channel<Msg>) + Send + 'static,
    {
        let display = instance.display().clone();
        let for_handler = display.clone();
        let id = display.create_window(
            CreateParams {
                class: class.name.clone(),
                title: spec.title,
                styles: spec.styles,
                parent,
                child_id,
                x: spec.x,
                y: spec.y,
                width: spec.width,
                height: spec.height,
                menu,
                wrapper,
            },
            Box::new(move |id, ch| handler(Window::from_parts(id, for_handler), ch)),
        )?;
        Ok(Window { id, display })
    }

    pub fn is_live(&self) -> bool {
        self.display.is_live(self.id)
    }

    pub fn parent(&self) -> Option<Window> {
        self.display
            .parent_of(self.id)
            .map(|p| Window::from_parts(p, self.display.clone()))
    }

    pub fn title(&self) -> Result<String> {
        self.display.title(self.id)
    }

    pub fn show(&self, style: ShowStyle) -> Result<()> {
        match self.display.wrapper_of(self.id) {
            Some(_) => controls::wrapper_forward(self, WindowOp::Show(style)),
            None => self.display.show_window(self.id, style),
        }
    }

    /// Dispatches a pending WM_PAINT ahead of other queued messages.
    pub fn update(&self) -> Result<()> {
        self.display.update_window(self.id)
    }

    pub fn set_foreground(&self) -> Result<()> {
        self.display.set_foreground(self.id)
    }

    /// Moves the window's origin to `(x, y)` in its parent, keeping its size.
    pub fn move_to(&self, x: i32, y: i32) -> Result<()> {
        match self.display.wrapper_of(self.id) {
            Some(_) => controls::wrapper_forward(self, WindowOp::Move { x, y }),
            None => self.display.move_window(self.id, x, y),
        }
    }

    /// Changes the size and sends WM_SIZE.
    pub fn resize(&self, width: i32, height: i32) -> Result<()> {
        match self.display.wrapper_of(self.id) {
            Some(_) => controls::wrapper_forward(self, WindowOp::Resize { width, height }),
            None => self.display.resize_window(self.id, width, height),
        }
    }

    pub fn client_rect(&self) -> Result<Rect> {
        self.display.client_rect(self.id)
    }

    /// Rectangle relative to the parent (the screen for top-level windows).
    pub fn rect(&self) -> Result<Rect> {
        self.display.rect(self.id)
    }

    pub fn screen_rect(&self) -> Result<Rect> {
        self.display.screen_rect(self.id)
    }

    /// Destroys the window and its children. Idempotent.
    pub fn destroy(&self) {
        match self.display.wrapper_of(self.id) {
            Some(_) => {
                let _ = controls::wrapper_forward(self, WindowOp::Destroy);
            }
            None => self.display.destroy_window(self.id),
        }
    }

    /// Queues `m` for this window's handler.
    pub fn send(&self, m: Msg) -> Result<()> {
        self.display.post(self.id, m)
    }

    /// Runs the message pump until WM_QUIT and returns its exit code.
    pub fn msg_loop(&self) -> Result<i32> {
        self.display.pump_until_quit()
    }

    /// Default processing for a message the handler does not handle.
    pub fn default(&self, m: Msg) -> Result<()> {
        self.display.default_proc(self.id, m)
    }

    pub fn invalidate(&self, area: Option<Rect>) -> Result<()> {
        self.display.invalidate(self.id, area)
    }
}

/// Posts WM_QUIT with `code` to the calling thread's display.
pub fn quit(code: i32) -> Result<()> {
    Display::current_or_err()?.post_quit(code);
    Ok(())
}

/// Periodic WM_TIMER messages on the display's virtual clock.
pub struct Timer;

impl Timer {
    /// Starts (or restarts) timer `timer_id` on `window`, firing every
    /// `period_ms` virtual milliseconds.
    pub fn set(window: &Window, timer_id: i32, period_ms: i64) -> Result<()> {
        window.display.set_timer(window.id, timer_id, period_ms)
    }

    pub fn kill(window: &Window, timer_id: i32) {
        window.display.kill_timer(window.id, timer_id)
    }
}
