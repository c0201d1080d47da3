//! The simulated window system.
//!
//! A [`Display`] owns the window registry, z-order, virtual clock, timers,
//! the system message queue and the draw trace. Every mutation goes through
//! its single state lock, so the order of effects is the order in which
//! callers reach it. Messages reach handler threads through a per-window
//! mailbox thread that buffers without bound, which keeps the pump live no
//! matter how slowly a handler reads.
//!
//! The pump runs in one of two modes. Without an [`InputDriver`] it blocks
//! whenever the queue is empty and dispatches as fast as it can. With a
//! driver it waits for the display's [`ActivityGroup`] to go idle after each
//! dispatch and asks the driver for more input only at those idle points,
//! which makes the trace a pure function of the program and the input.

mod input;
mod trace;

pub use input::{InputEvent, InputKind};
pub use trace::{render as render_trace, Rop, TraceRecord};

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::panic::{self, AssertUnwindSafe};
use std::sync::{Arc, Condvar, Mutex, MutexGuard, Weak};

use crate::cml::{self, ActivityGroup, Channel, VirtualClock};
use crate::error::{Error, Result};
use crate::msg::{Msg, Rect};
use crate::resources::{Manifest, Menu, ResourceTable};

/// Registry key of a window; displayed as `w<n>` in creation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WindowId(pub u32);

impl fmt::Display for WindowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}", self.0)
    }
}

impl std::str::FromStr for WindowId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.strip_prefix('w')
            .and_then(|n| n.parse::<u32>().ok())
            .filter(|n| *n > 0)
            .map(WindowId)
            .ok_or_else(|| format!("bad window name {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassStyle {
    HRedraw,
    VRedraw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WindowStyle {
    OverlappedWindow,
    Child,
    Visible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShowStyle {
    Normal,
    Hide,
}

pub const DEFAULT_WIDTH: i32 = 640;
pub const DEFAULT_HEIGHT: i32 = 480;
const CASCADE_STEP: i32 = 64;

#[derive(Clone, Debug)]
pub(crate) struct ClassRecord {
    pub(crate) cursor: String,
    pub(crate) icon: String,
    pub(crate) brush: String,
    pub(crate) styles: Vec<ClassStyle>,
    pub(crate) builtin: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Life {
    Live,
    /// WM_DESTROY is queued; the record goes away when it is dispatched.
    Destroying,
}

pub(crate) struct WindowRecord {
    pub(crate) class: String,
    pub(crate) title: String,
    pub(crate) styles: Vec<WindowStyle>,
    pub(crate) parent: Option<WindowId>,
    pub(crate) child_id: Option<i32>,
    pub(crate) rect: Rect,
    pub(crate) shown: bool,
    pub(crate) menu: Option<Menu>,
    /// For a wrapped control, the transparent window that is its parent.
    pub(crate) wrapper: Option<WindowId>,
    children: Vec<WindowId>,
    life: Life,
    errored: Option<String>,
    pending_paint: Option<Rect>,
    mailbox: Channel<Mail>,
}

#[derive(Clone, Debug)]
enum Mail {
    Msg(Msg),
    Shutdown,
}

#[derive(Clone, Copy, Debug)]
enum Entry {
    Deliver(WindowId, Msg),
    Paint(WindowId),
    Quit(i32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimerRecord {
    pub window: WindowId,
    pub timer_id: i32,
    pub period_ms: u64,
    pub next_due_ms: u64,
}

pub(crate) struct DisplayState {
    pub(crate) classes: HashMap<String, ClassRecord>,
    pub(crate) windows: BTreeMap<WindowId, WindowRecord>,
    /// Shown top-level windows, topmost first.
    zorder: Vec<WindowId>,
    next_window: u32,
    defaulted: i32,
    timers: BTreeMap<(WindowId, i32), TimerRecord>,
    queue: VecDeque<Entry>,
    quit_code: Option<i32>,
    pumping: bool,
    capture: Option<WindowId>,
    focus: Option<WindowId>,
    pub(crate) trace: Vec<TraceRecord>,
    pub(crate) resources: ResourceTable,
}

impl DisplayState {
    pub(crate) fn live(&self, id: WindowId) -> Result<&WindowRecord> {
        match self.windows.get(&id) {
            Some(w) if w.life == Life::Live => Ok(w),
            _ => Err(Error::WindowDestroyed(id)),
        }
    }

    fn live_mut(&mut self, id: WindowId) -> Result<&mut WindowRecord> {
        match self.windows.get_mut(&id) {
            Some(w) if w.life == Life::Live => Ok(w),
            _ => Err(Error::WindowDestroyed(id)),
        }
    }

    fn is_live(&self, id: WindowId) -> bool {
        self.live(id).is_ok()
    }

    fn invalidate(&mut self, id: WindowId, area: Rect) {
        let Ok(w) = self.live_mut(id) else { return };
        let Some(area) = area.intersect(&w.rect.client()) else {
            return;
        };
        match &mut w.pending_paint {
            Some(r) => *r = r.union(&area),
            slot @ None => {
                *slot = Some(area);
                self.queue.push_back(Entry::Paint(id));
            }
        }
    }

    fn class_redraws(&self, id: WindowId) -> bool {
        self.windows
            .get(&id)
            .and_then(|w| self.classes.get(&w.class))
            .is_some_and(|c| {
                c.styles.contains(&ClassStyle::HRedraw) || c.styles.contains(&ClassStyle::VRedraw)
            })
    }

    fn screen_origin(&self, id: WindowId) -> (i32, i32) {
        let mut x = 0;
        let mut y = 0;
        let mut cur = Some(id);
        while let Some(c) = cur {
            let Some(w) = self.windows.get(&c) else { break };
            x += w.rect.left;
            y += w.rect.top;
            cur = w.parent;
        }
        (x, y)
    }

    /// Topmost shown top-level window containing the screen point, then the
    /// deepest shown child under it. Returns the target and the point in its
    /// client coordinates.
    fn hit_test(&self, x: i32, y: i32) -> Option<(WindowId, i32, i32)> {
        let top = *self
            .zorder
            .iter()
            .find(|id| self.windows[id].rect.contains(x, y))?;
        let r = self.windows[&top].rect;
        let (mut id, mut lx, mut ly) = (top, x - r.left, y - r.top);
        'descend: loop {
            // later siblings sit above earlier ones
            for child in self.windows[&id].children.iter().rev() {
                let Some(w) = self.windows.get(child) else { continue };
                if w.life == Life::Live && w.shown && w.rect.contains(lx, ly) {
                    lx -= w.rect.left;
                    ly -= w.rect.top;
                    id = *child;
                    continue 'descend;
                }
            }
            return Some((id, lx, ly));
        }
    }

    fn post(&mut self, id: WindowId, m: Msg) -> Result<()> {
        if matches!(m, Msg::Quit(_)) {
            return Err(Error::QuitToWindow);
        }
        self.live(id)?;
        self.queue.push_back(Entry::Deliver(id, m));
        Ok(())
    }

    fn enqueue_timer(&mut self, clock: &VirtualClock, target: u64) {
        loop {
            let next = self
                .timers
                .values()
                .filter(|t| t.next_due_ms <= target)
                .min_by_key(|t| (t.next_due_ms, t.timer_id, t.window))
                .copied();
            let Some(t) = next else { break };
            clock.advance_to(t.next_due_ms);
            self.queue.push_back(Entry::Deliver(t.window, Msg::Timer(t.timer_id)));
            if let Some(rec) = self.timers.get_mut(&(t.window, t.timer_id)) {
                rec.next_due_ms += rec.period_ms;
            }
        }
        clock.advance_to(target);
    }

    /// The subtree rooted at `id`, children before parents.
    fn post_order(&self, id: WindowId, out: &mut Vec<WindowId>) {
        if let Some(w) = self.windows.get(&id) {
            for c in &w.children {
                self.post_order(*c, out);
            }
            out.push(id);
        }
    }
}

/// Source of input for a stepped pump.
pub trait InputDriver: Send {
    /// Called whenever the queue is empty and every display thread is
    /// blocked. Returns `false` when no input remains.
    fn feed(&mut self, display: &Display) -> Result<bool>;
}

pub(crate) struct DisplayInner {
    state: Mutex<DisplayState>,
    posted: Condvar,
    pub(crate) clock: VirtualClock,
    group: ActivityGroup,
    pub(crate) manifest: Manifest,
    driver: Mutex<Option<Box<dyn InputDriver>>>,
}

/// Handle to a simulated display; cheap to clone.
#[derive(Clone)]
pub struct Display {
    pub(crate) inner: Arc<DisplayInner>,
}

impl fmt::Debug for Display {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Display")
            .field("clock_ms", &self.now())
            .finish_non_exhaustive()
    }
}

/// What the group context holds so display threads can find their display.
struct DisplayRef(Weak<DisplayInner>);

pub(crate) type Handler = Box<dyn FnOnce(WindowId, Channel<Msg>) + Send>;

pub(crate) struct CreateParams {
    pub(crate) class: String,
    pub(crate) title: String,
    pub(crate) styles: Vec<WindowStyle>,
    pub(crate) parent: Option<WindowId>,
    pub(crate) child_id: Option<i32>,
    pub(crate) x: Option<i32>,
    pub(crate) y: Option<i32>,
    pub(crate) width: Option<i32>,
    pub(crate) height: Option<i32>,
    pub(crate) menu: Option<Menu>,
    pub(crate) wrapper: Option<WindowId>,
}

impl Default for Display {
    fn default() -> Self {
        Self::new(Manifest::builtin())
    }
}

impl Display {
    pub fn new(manifest: Manifest) -> Self {
        let inner = Arc::new_cyclic(|weak: &Weak<DisplayInner>| DisplayInner {
            state: Mutex::new(DisplayState {
                classes: HashMap::new(),
                windows: BTreeMap::new(),
                zorder: Vec::new(),
                next_window: 1,
                defaulted: 0,
                timers: BTreeMap::new(),
                queue: VecDeque::new(),
                quit_code: None,
                pumping: false,
                capture: None,
                focus: None,
                trace: Vec::new(),
                resources: ResourceTable::default(),
            }),
            posted: Condvar::new(),
            clock: VirtualClock::new(),
            group: ActivityGroup::with_context(Arc::new(DisplayRef(weak.clone()))),
            manifest,
            driver: Mutex::new(None),
        });
        Display { inner }
    }

    /// The display whose threads include the calling thread, or that the
    /// calling thread has [`enter`](Self::enter)ed.
    pub fn current() -> Option<Display> {
        let ctx = cml::current_context()?;
        let r = ctx.downcast_ref::<DisplayRef>()?;
        r.0.upgrade().map(|inner| Display { inner })
    }

    pub(crate) fn current_or_err() -> Result<Display> {
        Self::current().ok_or(Error::NoDisplay)
    }

    /// Attaches the calling thread to this display without counting it as a
    /// display thread.
    pub fn enter(&self) -> cml::EnterGuard {
        self.inner.group.enter()
    }

    pub fn group(&self) -> &ActivityGroup {
        &self.inner.group
    }

    pub fn clock(&self) -> &VirtualClock {
        &self.inner.clock
    }

    pub fn manifest(&self) -> &Manifest {
        &self.inner.manifest
    }

    pub fn now(&self) -> u64 {
        self.inner.clock.now()
    }

    pub(crate) fn lock(&self) -> MutexGuard<'_, DisplayState> {
        self.inner.state.lock().unwrap()
    }

    fn notify(&self) {
        self.inner.posted.notify_all();
    }

    pub fn same(&self, other: &Display) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    // ---- classes -------------------------------------------------------

    pub(crate) fn register_class(&self, name: &str, rec: ClassRecord) -> Result<()> {
        if name.is_empty() {
            return Err(Error::EmptyClassName);
        }
        let mut st = self.lock();
        if st.classes.contains_key(name) {
            return Err(Error::ClassExists(name.to_string()));
        }
        st.classes.insert(name.to_string(), rec);
        Ok(())
    }

    pub(crate) fn ensure_builtin_class(&self, name: &str, brush: &str) {
        let mut st = self.lock();
        st.classes.entry(name.to_string()).or_insert_with(|| ClassRecord {
            cursor: "arrow".into(),
            icon: "application".into(),
            brush: brush.into(),
            styles: Vec::new(),
            builtin: true,
        });
    }

    pub(crate) fn unregister_class(&self, name: &str) -> Result<()> {
        let mut st = self.lock();
        if !st.classes.contains_key(name) {
            return Err(Error::ClassNotRegistered(name.to_string()));
        }
        let live = st.windows.values().filter(|w| w.class == name).count();
        if live > 0 {
            return Err(Error::ClassInUse {
                name: name.to_string(),
                live,
            });
        }
        st.classes.remove(name);
        Ok(())
    }

    pub(crate) fn class_record(&self, name: &str) -> Option<ClassRecord> {
        self.lock().classes.get(name).cloned()
    }

    /// Application-registered classes (the framework's own control classes
    /// are excluded).
    pub fn class_count(&self) -> usize {
        self.lock().classes.values().filter(|c| !c.builtin).count()
    }

    // ---- windows -------------------------------------------------------

    pub(crate) fn create_window(&self, p: CreateParams, handler: Handler) -> Result<WindowId> {
        let mailbox = Channel::<Mail>::new();
        let inbox = Channel::<Msg>::new();
        let id = {
            let mut st = self.lock();
            if !st.classes.contains_key(&p.class) {
                return Err(Error::ClassNotRegistered(p.class));
            }
            if let Some(parent) = p.parent {
                let par = st.live(parent)?;
                if let Some(cid) = p.child_id {
                    let taken = par
                        .children
                        .iter()
                        .any(|c| st.windows.get(c).and_then(|w| w.child_id) == Some(cid));
                    if taken {
                        return Err(Error::DuplicateChildId { parent, id: cid });
                    }
                }
            }
            let (x, y) = match (p.x, p.y) {
                (Some(x), Some(y)) => (x, y),
                (x, y) => {
                    st.defaulted += 1;
                    let d = CASCADE_STEP * st.defaulted;
                    (x.unwrap_or(d), y.unwrap_or(d))
                }
            };
            let width = p.width.unwrap_or(DEFAULT_WIDTH);
            let height = p.height.unwrap_or(DEFAULT_HEIGHT);
            if width < 0 || height < 0 {
                return Err(Error::Geometry(format!("negative size {width}x{height}")));
            }
            let id = WindowId(st.next_window);
            st.next_window += 1;
            let visible = p.styles.contains(&WindowStyle::Visible);
            st.windows.insert(
                id,
                WindowRecord {
                    class: p.class,
                    title: p.title,
                    styles: p.styles,
                    parent: p.parent,
                    child_id: p.child_id,
                    rect: Rect::from_origin_size(x, y, width, height),
                    shown: visible,
                    menu: p.menu,
                    wrapper: p.wrapper,
                    children: Vec::new(),
                    life: Life::Live,
                    errored: None,
                    pending_paint: None,
                    mailbox: mailbox.clone(),
                },
            );
            match p.parent {
                Some(parent) => st.windows.get_mut(&parent).unwrap().children.push(id),
                None if visible => st.zorder.insert(0, id),
                None => {}
            }
            st.queue.push_back(Entry::Deliver(id, Msg::Create));
            if visible {
                let full = Rect::new(0, 0, width, height);
                st.invalidate(id, full);
            }
            id
        };
        let spawned = self.spawn_window_threads(id, mailbox, inbox, handler);
        if let Err(e) = spawned {
            let mut st = self.lock();
            st.windows.remove(&id);
            st.zorder.retain(|w| *w != id);
            st.queue.retain(|e| !matches!(e, Entry::Deliver(w, _) | Entry::Paint(w) if *w == id));
            for w in st.windows.values_mut() {
                w.children.retain(|c| *c != id);
            }
            return Err(e);
        }
        self.notify();
        Ok(id)
    }

    fn spawn_window_threads(
        &self,
        id: WindowId,
        mailbox: Channel<Mail>,
        inbox: Channel<Msg>,
        handler: Handler,
    ) -> Result<()> {
        let group = &self.inner.group;
        let out = inbox.clone();
        cml::spawn_in_group(group, move || run_mailbox(mailbox, out))?;
        let display = self.clone();
        cml::spawn_in_group(group, move || {
            let outcome = panic::catch_unwind(AssertUnwindSafe(|| handler(id, inbox)));
            if let Err(cause) = outcome {
                let text = panic_text(&*cause);
                let mut st = display.lock();
                if let Some(w) = st.windows.get_mut(&id) {
                    w.errored = Some(text.clone());
                }
                st.trace.push(TraceRecord::Error { window: id, text });
            }
        })?;
        Ok(())
    }

    pub fn is_live(&self, id: WindowId) -> bool {
        self.lock().is_live(id)
    }

    /// Windows still in the registry, including those whose WM_DESTROY is
    /// queued but not yet dispatched.
    pub fn window_count(&self) -> usize {
        self.lock().windows.len()
    }

    pub fn live_windows(&self) -> Vec<WindowId> {
        let st = self.lock();
        st.windows
            .iter()
            .filter(|(_, w)| w.life == Life::Live)
            .map(|(id, _)| *id)
            .collect()
    }

    /// Live windows without a parent, in creation order.
    pub fn top_level_windows(&self) -> Vec<WindowId> {
        let st = self.lock();
        st.windows
            .iter()
            .filter(|(_, w)| w.life == Life::Live && w.parent.is_none())
            .map(|(id, _)| *id)
            .collect()
    }

    pub fn errored(&self, id: WindowId) -> Option<String> {
        self.lock().windows.get(&id).and_then(|w| w.errored.clone())
    }

    pub fn zorder(&self) -> Vec<WindowId> {
        self.lock().zorder.clone()
    }

    pub fn parent_of(&self, id: WindowId) -> Option<WindowId> {
        self.lock().windows.get(&id).and_then(|w| w.parent)
    }

    pub fn children_of(&self, id: WindowId) -> Vec<WindowId> {
        self.lock()
            .windows
            .get(&id)
            .map(|w| w.children.clone())
            .unwrap_or_default()
    }

    pub(crate) fn wrapper_of(&self, id: WindowId) -> Option<WindowId> {
        self.lock().windows.get(&id).and_then(|w| w.wrapper)
    }

    pub fn title(&self, id: WindowId) -> Result<String> {
        Ok(self.lock().live(id)?.title.clone())
    }

    pub fn child_id(&self, id: WindowId) -> Option<i32> {
        self.lock().windows.get(&id).and_then(|w| w.child_id)
    }

    /// Parent-relative rectangle.
    pub fn rect(&self, id: WindowId) -> Result<Rect> {
        Ok(self.lock().live(id)?.rect)
    }

    pub fn screen_rect(&self, id: WindowId) -> Result<Rect> {
        let st = self.lock();
        let r = st.live(id)?.rect;
        let (x, y) = st.screen_origin(id);
        Ok(Rect::from_origin_size(x, y, r.width(), r.height()))
    }

    pub fn client_rect(&self, id: WindowId) -> Result<Rect> {
        Ok(self.lock().live(id)?.rect.client())
    }

    pub fn styles(&self, id: WindowId) -> Result<Vec<WindowStyle>> {
        Ok(self.lock().live(id)?.styles.clone())
    }

    pub fn is_shown(&self, id: WindowId) -> Result<bool> {
        Ok(self.lock().live(id)?.shown)
    }

    pub(crate) fn menu_of(&self, id: WindowId) -> Result<Option<Menu>> {
        Ok(self.lock().live(id)?.menu.clone())
    }

    pub(crate) fn show_window(&self, id: WindowId, style: ShowStyle) -> Result<()> {
        let mut st = self.lock();
        let w = st.live_mut(id)?;
        let top_level = w.parent.is_none();
        match style {
            ShowStyle::Normal => {
                let was_shown = std::mem::replace(&mut w.shown, true);
                let full = w.rect.client();
                if top_level {
                    st.zorder.retain(|z| *z != id);
                    st.zorder.insert(0, id);
                }
                if !was_shown {
                    st.invalidate(id, full);
                }
            }
            ShowStyle::Hide => {
                w.shown = false;
                st.zorder.retain(|z| *z != id);
            }
        }
        drop(st);
        self.notify();
        Ok(())
    }

    /// Moves a pending WM_PAINT to the front of the queue.
    pub(crate) fn update_window(&self, id: WindowId) -> Result<()> {
        let mut st = self.lock();
        if st.live(id)?.pending_paint.is_none() {
            return Ok(());
        }
        st.queue.retain(|e| !matches!(e, Entry::Paint(w) if *w == id));
        st.queue.push_front(Entry::Paint(id));
        drop(st);
        self.notify();
        Ok(())
    }

    pub(crate) fn set_foreground(&self, id: WindowId) -> Result<()> {
        let mut st = self.lock();
        st.live(id)?;
        if st.zorder.contains(&id) {
            st.zorder.retain(|z| *z != id);
            st.zorder.insert(0, id);
        }
        Ok(())
    }

    pub(crate) fn move_window(&self, id: WindowId, x: i32, y: i32) -> Result<()> {
        let mut st = self.lock();
        let w = st.live_mut(id)?;
        w.rect = Rect::from_origin_size(x, y, w.rect.width(), w.rect.height());
        Ok(())
    }

    /// Changes the size, sends WM_SIZE and, for redrawing classes,
    /// invalidates the whole client area.
    pub(crate) fn resize_window(&self, id: WindowId, width: i32, height: i32) -> Result<()> {
        if width < 0 || height < 0 {
            return Err(Error::Geometry(format!("negative size {width}x{height}")));
        }
        let mut st = self.lock();
        let w = st.live_mut(id)?;
        w.rect = Rect::from_origin_size(w.rect.left, w.rect.top, width, height);
        st.queue.push_back(Entry::Deliver(id, Msg::Size { width, height }));
        if st.class_redraws(id) {
            st.invalidate(id, Rect::new(0, 0, width, height));
        }
        drop(st);
        self.notify();
        Ok(())
    }

    /// Destroys the window and its descendants, children first. Each gets
    /// WM_DESTROY as its final message; queued messages for them are
    /// dropped. Destroying a dead window does nothing.
    pub(crate) fn destroy_window(&self, id: WindowId) {
        let mut st = self.lock();
        if !st.is_live(id) {
            return;
        }
        let mut order = Vec::new();
        st.post_order(id, &mut order);
        for w in &order {
            let Some(rec) = st.windows.get_mut(w) else { continue };
            if rec.life != Life::Live {
                continue;
            }
            rec.life = Life::Destroying;
            rec.shown = false;
            rec.pending_paint = None;
            st.timers.retain(|(tw, _), _| tw != w);
            st.zorder.retain(|z| z != w);
            // a pending WM_CREATE still precedes WM_DESTROY
            st.queue.retain(|e| match e {
                Entry::Deliver(x, m) => x != w || *m == Msg::Create,
                Entry::Paint(x) => x != w,
                _ => true,
            });
            if st.capture == Some(*w) {
                st.capture = None;
            }
            if st.focus == Some(*w) {
                st.focus = None;
            }
            st.queue.push_back(Entry::Deliver(*w, Msg::Destroy));
        }
        if let Some(parent) = st.windows.get(&id).and_then(|w| w.parent) {
            if let Some(p) = st.windows.get_mut(&parent) {
                p.children.retain(|c| *c != id);
            }
        }
        drop(st);
        self.notify();
    }

    pub fn invalidate(&self, id: WindowId, area: Option<Rect>) -> Result<()> {
        let mut st = self.lock();
        let full = st.live(id)?.rect.client();
        st.invalidate(id, area.unwrap_or(full));
        drop(st);
        self.notify();
        Ok(())
    }

    // ---- queue ---------------------------------------------------------

    /// Appends `(window, m)` to the system queue.
    pub fn post(&self, id: WindowId, m: Msg) -> Result<()> {
        self.lock().post(id, m)?;
        self.notify();
        Ok(())
    }

    /// Records the quit sentinel. Only the first call has an effect.
    pub fn post_quit(&self, code: i32) {
        let mut st = self.lock();
        if st.quit_code.is_none() {
            st.quit_code = Some(code);
            st.queue.push_back(Entry::Quit(code));
        }
        drop(st);
        self.notify();
    }

    pub fn queue_len(&self) -> usize {
        self.lock().queue.len()
    }

    /// Default processing: WM_PAINT validates its rect, WM_CLOSE destroys
    /// the window, everything else is ignored.
    pub fn default_proc(&self, id: WindowId, m: Msg) -> Result<()> {
        match m {
            Msg::Paint(rect) => {
                let mut st = self.lock();
                if st.is_live(id) {
                    st.trace.push(TraceRecord::ValidateRect { window: id, rect });
                }
                Ok(())
            }
            Msg::Close => {
                crate::window::Window::from_parts(id, self.clone()).destroy();
                Ok(())
            }
            _ => Ok(()),
        }
    }

    // ---- time ----------------------------------------------------------

    pub fn set_timer(&self, id: WindowId, timer_id: i32, period_ms: i64) -> Result<()> {
        if period_ms <= 0 {
            return Err(Error::InvalidPeriod(period_ms));
        }
        let mut st = self.lock();
        st.live(id)?;
        let now = self.inner.clock.now();
        st.timers.insert(
            (id, timer_id),
            TimerRecord {
                window: id,
                timer_id,
                period_ms: period_ms as u64,
                next_due_ms: now + period_ms as u64,
            },
        );
        Ok(())
    }

    pub fn kill_timer(&self, id: WindowId, timer_id: i32) {
        self.lock().timers.remove(&(id, timer_id));
    }

    pub fn timers(&self) -> Vec<TimerRecord> {
        self.lock().timers.values().copied().collect()
    }

    /// Earliest pending timer due time.
    pub fn next_timer_due(&self) -> Option<u64> {
        self.lock().timers.values().map(|t| t.next_due_ms).min()
    }

    /// Moves the clock forward, queueing one WM_TIMER per elapsed period in
    /// (due time, timer id) order.
    pub fn advance_clock(&self, delta_ms: u64) {
        let mut st = self.lock();
        let target = self.inner.clock.now() + delta_ms;
        st.enqueue_timer(&self.inner.clock, target);
        drop(st);
        self.notify();
    }

    pub fn advance_to(&self, t: u64) {
        let now = self.now();
        if t > now {
            self.advance_clock(t - now);
        }
    }

    // ---- input ---------------------------------------------------------

    /// Delivers a synthetic input event after advancing the clock to its
    /// time stamp.
    pub fn inject(&self, ev: InputEvent) -> Result<()> {
        let now = self.now();
        if ev.at_ms < now {
            return Err(Error::TimeRegression { at: ev.at_ms, now });
        }
        self.advance_clock(ev.at_ms - now);
        match ev.kind {
            InputKind::Tick => {}
            InputKind::MouseMove { x, y } => self.pointer(x, y, |x, y| Msg::MouseMove { x, y }),
            InputKind::MouseDown { x, y } => {
                self.pointer(x, y, |x, y| Msg::LButtonDown { x, y })
            }
            InputKind::MouseUp { x, y } => self.pointer(x, y, |x, y| Msg::LButtonUp { x, y }),
            InputKind::DblClick { x, y } => {
                self.pointer(x, y, |x, y| Msg::LButtonDblClk { x, y })
            }
            InputKind::KeyDown(code) => self.keyboard(Msg::KeyDown(code)),
            InputKind::Char(code) => self.keyboard(Msg::Char(code)),
            InputKind::Close(w) => self.post(w, Msg::Close)?,
            InputKind::Resize {
                window,
                width,
                height,
            } => crate::window::Window::from_parts(window, self.clone()).resize(width, height)?,
        }
        self.notify();
        Ok(())
    }

    fn pointer(&self, x: i32, y: i32, make: impl Fn(i32, i32) -> Msg) {
        let mut st = self.lock();
        let probe = make(0, 0);
        let captured = st.capture.filter(|c| st.is_live(*c));
        let target = match (captured, probe) {
            (Some(c), Msg::MouseMove { .. } | Msg::LButtonUp { .. }) => {
                let (ox, oy) = st.screen_origin(c);
                Some((c, x - ox, y - oy))
            }
            _ => st.hit_test(x, y),
        };
        if let Some((id, lx, ly)) = target {
            st.queue.push_back(Entry::Deliver(id, make(lx, ly)));
            match probe {
                Msg::LButtonDown { .. } => {
                    st.capture = Some(id);
                    st.focus = Some(id);
                }
                Msg::LButtonDblClk { .. } => st.focus = Some(id),
                _ => {}
            }
        }
        if matches!(probe, Msg::LButtonUp { .. }) {
            st.capture = None;
        }
    }

    /// Keyboard input goes to the window that last took a button press,
    /// falling back to the topmost window.
    fn keyboard(&self, m: Msg) {
        let mut st = self.lock();
        let target = st
            .focus
            .filter(|f| st.is_live(*f))
            .or_else(|| st.zorder.first().copied());
        if let Some(id) = target {
            st.queue.push_back(Entry::Deliver(id, m));
        }
    }

    // ---- trace ---------------------------------------------------------

    pub fn trace(&self) -> Vec<TraceRecord> {
        self.lock().trace.clone()
    }

    pub fn trace_len(&self) -> usize {
        self.lock().trace.len()
    }

    pub fn trace_text(&self) -> String {
        render_trace(&self.lock().trace)
    }

    pub(crate) fn push_trace(&self, r: TraceRecord) {
        self.lock().trace.push(r);
    }

    /// Appends a NOTIFY record for application-level notifications.
    pub fn record_notify(&self, window: WindowId, text: impl Into<String>) {
        self.push_trace(TraceRecord::Notify {
            window,
            text: text.into(),
        });
    }

    // ---- pump ----------------------------------------------------------

    /// Installs the input source that makes subsequent pumping stepped.
    pub fn install_driver(&self, driver: Box<dyn InputDriver>) {
        *self.inner.driver.lock().unwrap() = Some(driver);
    }

    pub fn is_pumping(&self) -> bool {
        self.lock().pumping
    }

    /// Dispatches queued messages until the quit sentinel and returns its
    /// exit code. Only one pump may run at a time.
    pub fn pump_until_quit(&self) -> Result<i32> {
        {
            let mut st = self.lock();
            if st.pumping {
                return Err(Error::LoopActive);
            }
            st.pumping = true;
        }
        let driver = self.inner.driver.lock().unwrap().take();
        let result = match driver {
            None => self.pump_free(),
            Some(mut d) => {
                let r = self.pump_stepped(&mut *d);
                *self.inner.driver.lock().unwrap() = Some(d);
                r
            }
        };
        self.lock().pumping = false;
        result
    }

    fn pump_free(&self) -> Result<i32> {
        loop {
            let entry = {
                let mut st = self.lock();
                loop {
                    if let Some(e) = st.queue.pop_front() {
                        break e;
                    }
                    st = self.inner.posted.wait(st).unwrap();
                }
            };
            if let Some(code) = self.dispatch(entry) {
                return Ok(code);
            }
        }
    }

    fn pump_stepped(&self, driver: &mut dyn InputDriver) -> Result<i32> {
        let group = self.inner.group.clone();
        loop {
            group.wait_idle();
            let entry = self.lock().queue.pop_front();
            match entry {
                Some(e) => {
                    if let Some(code) = self.dispatch(e) {
                        return Ok(code);
                    }
                }
                None => {
                    if !driver.feed(self)? {
                        group.wait_idle();
                        if self.queue_len() == 0 {
                            return Err(Error::InputExhausted);
                        }
                    }
                }
            }
        }
    }

    /// Hands one entry to its window. Returns the exit code at the sentinel.
    fn dispatch(&self, entry: Entry) -> Option<i32> {
        let (mailbox, msg) = {
            let mut st = self.lock();
            match entry {
                Entry::Quit(code) => return Some(code),
                Entry::Paint(id) => {
                    let Some(w) = st.windows.get_mut(&id) else { return None };
                    let Some(r) = w.pending_paint.take() else { return None };
                    (w.mailbox.clone(), Msg::Paint(r))
                }
                Entry::Deliver(id, Msg::Destroy) => {
                    let Some(w) = st.windows.remove(&id) else { return None };
                    (w.mailbox, Msg::Destroy)
                }
                Entry::Deliver(id, m) => match st.windows.get(&id) {
                    Some(w) if w.life == Life::Live || m == Msg::Create => (w.mailbox.clone(), m),
                    _ => return None,
                },
            }
        };
        mailbox.send(Mail::Msg(msg));
        None
    }

    /// Stops every mailbox thread. Messages not yet read are discarded.
    pub fn shutdown(&self) {
        let boxes: Vec<Channel<Mail>> = {
            let mut st = self.lock();
            st.queue.clear();
            let all = st.windows.values().map(|w| w.mailbox.clone()).collect();
            st.windows.clear();
            st.zorder.clear();
            st.timers.clear();
            all
        };
        for b in boxes {
            // mailbox threads that already exited simply never match
            let _ = b.send_evt(Mail::Shutdown).sync_for(std::time::Duration::from_millis(200));
        }
    }
}

fn run_mailbox(mailbox: Channel<Mail>, out: Channel<Msg>) {
    enum Step {
        Got(Mail),
        Sent,
    }
    let mut pending: VecDeque<Msg> = VecDeque::new();
    loop {
        let incoming = mailbox.recv_evt().wrap(Step::Got);
        let step = match pending.front() {
            Some(front) => {
                cml::choose([incoming, out.send_evt(*front).wrap(|_| Step::Sent)]).sync()
            }
            None => incoming.sync(),
        };
        match step {
            Step::Got(Mail::Msg(m)) => pending.push_back(m),
            Step::Got(Mail::Shutdown) => return,
            Step::Sent => {
                if pending.pop_front() == Some(Msg::Destroy) {
                    return;
                }
            }
        }
    }
}

fn panic_text(cause: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = cause.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = cause.downcast_ref::<String>() {
        s.clone()
    } else {
        "handler panicked".to_string()
    }
}
