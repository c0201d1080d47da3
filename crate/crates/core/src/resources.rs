//! Named resources and device contexts.
//!
//! Bitmaps carry dimensions only; drawing through a device context appends
//! records to the display trace. Loadable resources come from a manifest of
//! `kind name width height` lines.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;

use crate::display::{Display, Rop, TraceRecord, WindowId};
use crate::error::{Error, Result};
use crate::msg::Rect;
use crate::run::Instance;
use crate::window::Window;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResourceKind {
    Bitmap,
    Icon,
    Cursor,
    Menu,
}

impl ResourceKind {
    fn as_str(self) -> &'static str {
        match self {
            ResourceKind::Bitmap => "bitmap",
            ResourceKind::Icon => "icon",
            ResourceKind::Cursor => "cursor",
            ResourceKind::Menu => "menu",
        }
    }
}

/// Declared resources and their dimensions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: HashMap<(ResourceKind, String), (i32, i32)>,
}

impl Manifest {
    /// The manifest used when none is supplied: the bounce logo only.
    pub fn builtin() -> Self {
        Manifest::parse("bitmap smlnj.bmp 158 131\n").expect("builtin manifest")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Manifest { line, msg };
            let fields: Vec<&str> = body.split_whitespace().collect();
            let [kind, name, w, h] = fields[..] else {
                return Err(err(format!("expected `kind name width height`, got {body:?}")));
            };
            let kind = match kind {
                "bitmap" => ResourceKind::Bitmap,
                "icon" => ResourceKind::Icon,
                "cursor" => ResourceKind::Cursor,
                "menu" => ResourceKind::Menu,
                other => return Err(err(format!("unknown resource kind {other:?}"))),
            };
            let dim = |s: &str| {
                s.parse::<i32>()
                    .map_err(|_| err(format!("bad dimension {s:?}")))
            };
            let (w, h) = (dim(w)?, dim(h)?);
            if w < 0 || h < 0 || (kind == ResourceKind::Bitmap && (w == 0 || h == 0)) {
                return Err(err(format!("invalid dimensions {w}x{h} for {name}")));
            }
            entries.insert((kind, name.to_string()), (w, h));
        }
        Ok(Manifest { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn lookup(&self, kind: ResourceKind, name: &str) -> Result<(i32, i32)> {
        self.entries
            .get(&(kind, name.to_string()))
            .copied()
            .ok_or_else(|| Error::ResourceNotFound {
                kind: kind.as_str(),
                name: name.to_string(),
            })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

macro_rules! named_resource {
    ($(#[$doc:meta])* $ty:ident, $kind:expr, [$($builtin:ident),*]) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq, Eq, Hash)]
        pub struct $ty {
            name: String,
            builtin: bool,
        }

        impl $ty {
            $(
                pub fn $builtin() -> Self {
                    $ty { name: stringify!($builtin).to_string(), builtin: true }
                }
            )*

            /// Loads a resource declared in the instance's manifest.
            pub fn load(instance: &Instance, name: &str) -> Result<Self> {
                instance.display().manifest().lookup($kind, name)?;
                Ok($ty { name: name.to_string(), builtin: false })
            }

            pub fn name(&self) -> &str {
                &self.name
            }

            pub fn is_builtin(&self) -> bool {
                self.builtin
            }
        }
    };
}

named_resource!(
    /// An icon; the five stock icons are always available.
    Icon,
    ResourceKind::Icon,
    [application, hand, question, exclamation, asterisk]
);

named_resource!(Cursor, ResourceKind::Cursor, [arrow, ibeam, wait]);

/// A solid brush identified by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Brush {
    name: String,
}

impl Brush {
    pub fn white() -> Self {
        Brush { name: "white".into() }
    }

    pub fn black() -> Self {
        Brush { name: "black".into() }
    }

    pub fn gray() -> Self {
        Brush { name: "gray".into() }
    }

    /// The face color of buttons and edit boxes.
    pub fn btnface() -> Self {
        Brush {
            name: "btnface".into(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl Icon {
    /// Draws the icon at `(x, y)` of the context's window.
    pub fn draw(dc: &Dc, x: i32, y: i32, icon: &Icon) -> Result<()> {
        let window = dc.check(None)?.window;
        dc.display.push_trace(TraceRecord::DrawIcon {
            window,
            x,
            y,
            icon: icon.name.clone(),
        });
        Ok(())
    }
}

// ---- registries held by the display -------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DcKind {
    Window,
    Memory,
}

#[derive(Clone, Debug)]
struct DcRecord {
    window: WindowId,
    kind: DcKind,
    selected: Option<u64>,
    owner: thread::ThreadId,
}

#[derive(Clone, Debug)]
struct BitmapRecord {
    name: String,
    deleted: bool,
}

#[derive(Default)]
pub(crate) struct ResourceTable {
    dcs: HashMap<u64, DcRecord>,
    bitmaps: HashMap<u64, BitmapRecord>,
    next_id: u64,
}

impl ResourceTable {
    fn fresh(&mut self) -> u64 {
        self.next_id += 1;
        self.next_id
    }

    fn live_dcs(&self, kind: DcKind) -> usize {
        self.dcs.values().filter(|d| d.kind == kind).count()
    }
}

impl Display {
    /// Window device contexts obtained and not yet released.
    pub fn live_window_dcs(&self) -> usize {
        self.lock().resources.live_dcs(DcKind::Window)
    }

    /// Memory device contexts created and not yet deleted.
    pub fn live_memory_dcs(&self) -> usize {
        self.lock().resources.live_dcs(DcKind::Memory)
    }

    /// Bitmaps loaded and not yet deleted.
    pub fn live_bitmaps(&self) -> usize {
        self.lock()
            .resources
            .bitmaps
            .values()
            .filter(|b| !b.deleted)
            .count()
    }
}

// ---- bitmaps --------------------------------------------------------------

/// A loaded bitmap: a name and pixel dimensions.
#[derive(Clone)]
pub struct Bitmap {
    id: u64,
    name: String,
    width: i32,
    height: i32,
    display: Display,
}

impl fmt::Debug for Bitmap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitmap({} {}x{})", self.name, self.width, self.height)
    }
}

impl PartialEq for Bitmap {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.display.same(&other.display)
    }
}

impl Bitmap {
    /// Loads `name` through the calling thread's display.
    pub fn load(name: &str) -> Result<Bitmap> {
        Self::load_in(&Display::current_or_err()?, name)
    }

    pub fn load_in(display: &Display, name: &str) -> Result<Bitmap> {
        let (width, height) = display.manifest().lookup(ResourceKind::Bitmap, name)?;
        let mut st = display.lock();
        let id = st.resources.fresh();
        st.resources.bitmaps.insert(
            id,
            BitmapRecord {
                name: name.to_string(),
                deleted: false,
            },
        );
        Ok(Bitmap {
            id,
            name: name.to_string(),
            width,
            height,
            display: display.clone(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    pub fn delete(&self) -> Result<()> {
        let mut st = self.display.lock();
        match st.resources.bitmaps.get_mut(&self.id) {
            Some(b) if !b.deleted => {
                b.deleted = true;
                Ok(())
            }
            _ => Err(Error::BitmapDeleted(self.name.clone())),
        }
    }

    /// Selects `bitmap` into a memory context.
    pub fn select(dc: &Dc, bitmap: &Bitmap) -> Result<()> {
        dc.check(Some(DcKind::Memory))?;
        let mut st = dc.display.lock();
        match st.resources.bitmaps.get(&bitmap.id) {
            Some(b) if !b.deleted => {}
            _ => return Err(Error::BitmapDeleted(bitmap.name.clone())),
        }
        if let Some(rec) = st.resources.dcs.get_mut(&dc.id) {
            rec.selected = Some(bitmap.id);
        }
        Ok(())
    }
}

// ---- device contexts ------------------------------------------------------

/// A device context handle. Window contexts must be released and memory
/// contexts deleted; a context may only be used by the thread that made it.
#[derive(Clone)]
pub struct Dc {
    id: u64,
    display: Display,
}

impl fmt::Debug for Dc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dc#{}", self.id)
    }
}

impl Dc {
    pub fn id(&self) -> u64 {
        self.id
    }

    fn check(&self, kind: Option<DcKind>) -> Result<DcRecord> {
        let st = self.display.lock();
        let rec = st
            .resources
            .dcs
            .get(&self.id)
            .ok_or(Error::DcInvalid(self.id))?;
        if rec.owner != thread::current().id() {
            return Err(Error::DcWrongThread(self.id));
        }
        match kind {
            Some(k) if k != rec.kind => Err(Error::DcKind(
                self.id,
                match k {
                    DcKind::Window => "window",
                    DcKind::Memory => "memory",
                },
            )),
            _ => Ok(rec.clone()),
        }
    }

    fn open(display: &Display, window: WindowId, kind: DcKind) -> Dc {
        let mut st = display.lock();
        let id = st.resources.fresh();
        st.resources.dcs.insert(
            id,
            DcRecord {
                window,
                kind,
                selected: None,
                owner: thread::current().id(),
            },
        );
        Dc {
            id,
            display: display.clone(),
        }
    }

    /// The drawing context of a window's client area.
    pub fn get(window: &Window) -> Result<Dc> {
        window.display().lock().live(window.id())?;
        Ok(Dc::open(window.display(), window.id(), DcKind::Window))
    }

    pub fn release(window: &Window, dc: &Dc) -> Result<()> {
        let rec = dc.check(Some(DcKind::Window))?;
        if rec.window != window.id() {
            return Err(Error::DcInvalid(dc.id));
        }
        dc.display.lock().resources.dcs.remove(&dc.id);
        Ok(())
    }

    /// A memory context compatible with `dc`.
    pub fn create_compatible(dc: &Dc) -> Result<Dc> {
        let rec = dc.check(None)?;
        Ok(Dc::open(&dc.display, rec.window, DcKind::Memory))
    }

    pub fn delete(dc: &Dc) -> Result<()> {
        dc.check(Some(DcKind::Memory))?;
        dc.display.lock().resources.dcs.remove(&dc.id);
        Ok(())
    }

    /// Copies a `width`×`height` block from `src` at `(src_x, src_y)` to
    /// `(x, y)` of this context.
    #[allow(clippy::too_many_arguments)]
    pub fn bitblt(
        &self,
        x: i32,
        y: i32,
        width: i32,
        height: i32,
        src: &Dc,
        src_x: i32,
        src_y: i32,
        rop: Rop,
    ) -> Result<()> {
        let dest = self.check(None)?;
        let source = src.check(None)?;
        let mut st = self.display.lock();
        let bitmap = match source.kind {
            DcKind::Memory => {
                let id = source.selected.ok_or(Error::NoBitmapSelected(src.id))?;
                match st.resources.bitmaps.get(&id) {
                    Some(b) if !b.deleted => b.name.clone(),
                    Some(b) => return Err(Error::BitmapDeleted(b.name.clone())),
                    None => return Err(Error::NoBitmapSelected(src.id)),
                }
            }
            DcKind::Window => source.window.to_string(),
        };
        st.trace.push(TraceRecord::BitBlt {
            window: dest.window,
            x,
            y,
            width,
            height,
            bitmap,
            src_x,
            src_y,
            rop,
        });
        Ok(())
    }

    pub fn fill_rect(&self, rect: Rect, brush: &Brush) -> Result<()> {
        let window = self.check(None)?.window;
        self.display.push_trace(TraceRecord::FillRect {
            window,
            rect,
            brush: brush.name.clone(),
        });
        Ok(())
    }

    /// Draws a caption in the context's window.
    pub fn label(&self, text: &str) -> Result<()> {
        let window = self.check(None)?.window;
        self.display.push_trace(TraceRecord::Label {
            window,
            text: text.to_string(),
        });
        Ok(())
    }
}

// ---- menus ----------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MenuKind {
    Bar,
    Popup,
}

#[derive(Clone, Debug)]
enum MenuItem {
    Command { id: i32, label: String },
    Popup { menu: Menu, label: String },
}

#[derive(Debug)]
struct MenuData {
    kind: MenuKind,
    items: Vec<MenuItem>,
    destroyed: bool,
}

static NEXT_MENU: AtomicU64 = AtomicU64::new(1);

/// A menu bar or popup. Menus are structural only: editing them draws
/// nothing and sends no messages.
#[derive(Clone)]
pub struct Menu {
    id: u64,
    data: Arc<Mutex<MenuData>>,
}

impl fmt::Debug for Menu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Menu#{}", self.id)
    }
}

impl PartialEq for Menu {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

/// A plain snapshot of a menu's structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MenuTree {
    pub kind: MenuKind,
    pub items: Vec<MenuTreeItem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MenuTreeItem {
    Command { id: i32, label: String },
    Popup { label: String, menu: MenuTree },
}

impl Menu {
    fn with_kind(kind: MenuKind) -> Menu {
        Menu {
            id: NEXT_MENU.fetch_add(1, Ordering::Relaxed),
            data: Arc::new(Mutex::new(MenuData {
                kind,
                items: Vec::new(),
                destroyed: false,
            })),
        }
    }

    pub fn create() -> Menu {
        Self::with_kind(MenuKind::Bar)
    }

    pub fn create_popup() -> Menu {
        Self::with_kind(MenuKind::Popup)
    }

    /// A menu declared in the manifest. Item contents are not modeled, so
    /// the result is an empty bar.
    pub fn load(instance: &Instance, name: &str) -> Result<Menu> {
        instance.display().manifest().lookup(ResourceKind::Menu, name)?;
        Ok(Self::create())
    }

    /// The menu the window was created with.
    pub fn get(window: &Window) -> Result<Option<Menu>> {
        window.display().menu_of(window.id())
    }

    pub fn kind(&self) -> Result<MenuKind> {
        let d = self.data.lock().unwrap();
        if d.destroyed {
            return Err(Error::MenuDestroyed);
        }
        Ok(d.kind)
    }

    pub fn append_item(&self, command_id: i32, label: &str) -> Result<()> {
        let mut d = self.data.lock().unwrap();
        if d.destroyed {
            return Err(Error::MenuDestroyed);
        }
        let dup = d
            .items
            .iter()
            .any(|i| matches!(i, MenuItem::Command { id, .. } if *id == command_id));
        if dup {
            return Err(Error::DuplicateCommandId(command_id));
        }
        d.items.push(MenuItem::Command {
            id: command_id,
            label: label.to_string(),
        });
        Ok(())
    }

    pub fn append_popup(&self, sub: &Menu, label: &str) -> Result<()> {
        if sub.contains(self) {
            return Err(Error::MenuCycle);
        }
        if sub.data.lock().unwrap().destroyed {
            return Err(Error::MenuDestroyed);
        }
        let mut d = self.data.lock().unwrap();
        if d.destroyed {
            return Err(Error::MenuDestroyed);
        }
        d.items.push(MenuItem::Popup {
            menu: sub.clone(),
            label: label.to_string(),
        });
        Ok(())
    }

    fn contains(&self, target: &Menu) -> bool {
        if self == target {
            return true;
        }
        let items = self.data.lock().unwrap().items.clone();
        items.iter().any(|i| match i {
            MenuItem::Popup { menu, .. } => menu.contains(target),
            MenuItem::Command { .. } => false,
        })
    }

    /// Destroys the menu and its submenus.
    pub fn destroy(&self) -> Result<()> {
        let items = {
            let mut d = self.data.lock().unwrap();
            if d.destroyed {
                return Err(Error::MenuDestroyed);
            }
            d.destroyed = true;
            std::mem::take(&mut d.items)
        };
        for i in items {
            if let MenuItem::Popup { menu, .. } = i {
                let _ = menu.destroy();
            }
        }
        Ok(())
    }

    pub fn item_count(&self) -> Result<usize> {
        let d = self.data.lock().unwrap();
        if d.destroyed {
            return Err(Error::MenuDestroyed);
        }
        Ok(d.items.len())
    }

    pub fn structure(&self) -> Result<MenuTree> {
        let (kind, items) = {
            let d = self.data.lock().unwrap();
            if d.destroyed {
                return Err(Error::MenuDestroyed);
            }
            (d.kind, d.items.clone())
        };
        let items = items
            .into_iter()
            .map(|i| {
                Ok(match i {
                    MenuItem::Command { id, label } => MenuTreeItem::Command { id, label },
                    MenuItem::Popup { menu, label } => MenuTreeItem::Popup {
                        label,
                        menu: menu.structure()?,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MenuTree { kind, items })
    }
}
