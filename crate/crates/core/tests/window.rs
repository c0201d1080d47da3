mod common;

use cmlui::display::{Display, Rop, WindowId, WindowStyle};
use cmlui::resources::{Bitmap, Brush, Cursor, Dc, Icon, Manifest, Menu, MenuKind};
use cmlui::window::{quit, Window, WindowClass, WindowSpec};
use cmlui::{doit, doit_with, Error, Msg};
use common::{logging, plain_class, Log, Steps};

#[test]
fn quit_code_is_the_loop_result() {
    let display = Display::default();
    display.install_driver(Box::new(Steps::new()));
    let code = doit_with(display, |inst| {
        let c = plain_class(&inst, "Q");
        let w = Window::create(&c, WindowSpec::new("", &[]), None, None, &inst, |w, ch| {
            if ch.recv() == Msg::Create {
                quit(7).unwrap();
            }
            let _ = w;
        })
        .unwrap();
        w.msg_loop()
    });
    assert_eq!(code.unwrap(), 7);
}

#[test]
fn winmain_pattern_leaves_no_registrations() {
    let display = Display::default();
    let steps = Steps::new().then(|d| d.post(WindowId(1), Msg::Close));
    display.install_driver(Box::new(steps));
    let probe = display.clone();
    let log = Log::default();
    let l = log.clone();
    let code = doit_with(display, move |inst| {
        let c = plain_class(&inst, "Main");
        let w = Window::create(&c, WindowSpec::new("main", &[]), None, None, &inst, logging(&l, true)).unwrap();
        assert!(matches!(c.unregister(), Err(Error::ClassInUse { live: 1, .. })));
        let code = w.msg_loop();
        c.unregister().unwrap();
        code
    });
    assert_eq!(code.unwrap(), 0);
    assert_eq!(probe.window_count(), 0);
    assert_eq!(probe.class_count(), 0);
}

#[test]
fn class_registration_rules() {
    doit(|inst| {
        let reg = |name: &str| {
            WindowClass::register(name, &inst, &Cursor::arrow(), &Icon::hand(), &Brush::gray(), &[])
        };
        assert!(matches!(reg(""), Err(Error::EmptyClassName)));
        let c = reg("K").unwrap();
        assert!(matches!(reg("K"), Err(Error::ClassExists(_))));
        assert_eq!(
            c.resources().unwrap(),
            ("arrow".to_string(), "hand".to_string(), "gray".to_string())
        );
        c.unregister().unwrap();
        assert!(!c.is_registered());
        assert!(matches!(c.unregister(), Err(Error::ClassNotRegistered(_))));
        let gone = Window::create(&c, WindowSpec::new("", &[]), None, None, &inst, |_, _| {});
        assert!(matches!(gone, Err(Error::ClassNotRegistered(_))));
    });
}

#[test]
fn windows_report_geometry_and_die_cleanly() {
    doit(|inst| {
        let c = plain_class(&inst, "G");
        let log = Log::default();
        let w = Window::create(&c, WindowSpec::new("t", &[]).at(3, 4).size(30, 40), None, None, &inst, logging(&log, false)).unwrap();
        assert_eq!(w.title().unwrap(), "t");
        assert_eq!(w.rect().unwrap(), cmlui::Rect::new(3, 4, 33, 44));
        assert_eq!(w.client_rect().unwrap(), cmlui::Rect::new(0, 0, 30, 40));
        w.move_to(10, 10).unwrap();
        assert_eq!(w.screen_rect().unwrap(), cmlui::Rect::new(10, 10, 40, 50));
        let kid = Window::create_child(
            &c,
            WindowSpec::new("", &[WindowStyle::Child]).at(1, 2).size(5, 5),
            &w,
            1,
            0,
            &inst,
            logging(&log, false),
        )
        .unwrap();
        assert_eq!(kid.parent(), Some(w.clone()));
        assert_eq!(kid.screen_rect().unwrap(), cmlui::Rect::new(11, 12, 16, 17));
        w.destroy();
        assert!(!w.is_live() && !kid.is_live());
        assert!(matches!(w.rect(), Err(Error::WindowDestroyed(_))));
        assert!(matches!(w.resize(1, 1), Err(Error::WindowDestroyed(_))));
        assert!(matches!(w.send(Msg::Close), Err(Error::WindowDestroyed(_))));
    });
}

#[test]
fn device_contexts_follow_the_protocol() {
    doit(|inst| {
        let c = plain_class(&inst, "D");
        let w = Window::create(&c, WindowSpec::new("", &[]), None, None, &inst, |_, _| {}).unwrap();
        let d = inst.display();
        let dc = Dc::get(&w).unwrap();
        let mem = Dc::create_compatible(&dc).unwrap();
        assert_eq!((d.live_window_dcs(), d.live_memory_dcs()), (1, 1));
        assert!(matches!(
            dc.bitblt(0, 0, 1, 1, &mem, 0, 0, Rop::SrcCopy),
            Err(Error::NoBitmapSelected(_))
        ));
        let b = Bitmap::load("smlnj.bmp").unwrap();
        assert_eq!((b.width(), b.height()), (158, 131));
        Bitmap::select(&mem, &b).unwrap();
        dc.bitblt(1, 2, 3, 4, &mem, 0, 0, Rop::SrcInvert).unwrap();
        assert!(matches!(Dc::delete(&dc), Err(Error::DcKind(..))));
        let other = mem.clone();
        let wrong = std::thread::spawn(move || Dc::delete(&other)).join().unwrap();
        assert!(matches!(wrong, Err(Error::DcWrongThread(_))));
        Dc::delete(&mem).unwrap();
        Dc::release(&w, &dc).unwrap();
        assert!(matches!(Dc::release(&w, &dc), Err(Error::DcInvalid(_))));
        assert_eq!((d.live_window_dcs(), d.live_memory_dcs()), (0, 0));
        b.delete().unwrap();
        assert_eq!(d.live_bitmaps(), 0);
        assert!(d.trace_text().contains("BITBLT w1 1 2 3 4 smlnj.bmp 0 0 SRCINVERT"));
        assert!(matches!(Bitmap::load("nope.bmp"), Err(Error::ResourceNotFound { .. })));
    });
}

#[test]
fn manifests_scope_resources() {
    let m = Manifest::parse("bitmap a.bmp 2 3\nicon x.ico 16 16\ncursor c.cur 8 8\nmenu main 0 0\n").unwrap();
    doit_with(Display::new(m), |inst| {
        assert_eq!(Bitmap::load("a.bmp").unwrap().width(), 2);
        assert!(Bitmap::load("smlnj.bmp").is_err());
        assert_eq!(Icon::load(&inst, "x.ico").unwrap().name(), "x.ico");
        assert!(Cursor::load(&inst, "c.cur").is_ok());
        assert!(Icon::load(&inst, "c.cur").is_err());
        let menu = Menu::load(&inst, "main").unwrap();
        assert_eq!(menu.kind().unwrap(), MenuKind::Bar);
    });
}

#[test]
fn menus_attach_to_windows() {
    doit(|inst| {
        let bar = Menu::create();
        let file = Menu::create_popup();
        file.append_item(1, "Open").unwrap();
        bar.append_popup(&file, "File").unwrap();
        let c = plain_class(&inst, "M");
        let w = Window::create(&c, WindowSpec::new("", &[]), None, Some(bar.clone()), &inst, |_, _| {}).unwrap();
        assert_eq!(Menu::get(&w).unwrap(), Some(bar.clone()));
        assert_eq!(bar.structure().unwrap().items.len(), 1);
        let plain = Window::create(&c, WindowSpec::new("", &[]), None, None, &inst, |_, _| {}).unwrap();
        assert_eq!(Menu::get(&plain).unwrap(), None);
    });
}

#[test]
fn icons_draw_into_the_trace() {
    doit(|inst| {
        let c = plain_class(&inst, "I");
        let w = Window::create(&c, WindowSpec::new("", &[]), None, None, &inst, |_, _| {}).unwrap();
        let dc = Dc::get(&w).unwrap();
        Icon::draw(&dc, 4, 5, &Icon::question()).unwrap();
        dc.fill_rect(cmlui::Rect::new(0, 0, 2, 2), &Brush::black()).unwrap();
        Dc::release(&w, &dc).unwrap();
        assert_eq!(
            inst.display().trace_text(),
            "DRAWICON w1 4 5 question\nFILLRECT w1 0 0 2 2 black\n"
        );
    });
}
