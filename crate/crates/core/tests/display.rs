mod common;

use std::time::Duration;

use cmlui::display::{Display, InputEvent, InputKind, TraceRecord, WindowId, WindowStyle};
use cmlui::window::{Timer, Window, WindowSpec};
use cmlui::{doit_with, Error, Msg, Rect};
use common::{logging, plain_class, redraw_class, visible, Log, Steps};

const W1: WindowId = WindowId(1);
const W2: WindowId = WindowId(2);
const W3: WindowId = WindowId(3);

fn at(t: u64, kind: InputKind) -> InputEvent {
    InputEvent::new(t, kind)
}

/// Runs `setup` inside doit with `steps` as the driver; the pump runs on
/// the first window `setup` returns.
fn scene(steps: Steps, setup: impl FnOnce(&cmlui::Instance, &Log) -> Window) -> (Display, Log, cmlui::Result<i32>) {
    let display = Display::default();
    display.install_driver(Box::new(steps));
    let log = Log::default();
    let l = log.clone();
    let code = doit_with(display.clone(), move |inst| {
        let w = setup(&inst, &l);
        w.msg_loop()
    });
    (display, log, code)
}

#[test]
fn create_comes_first_and_visible_windows_paint() {
    let (d, log, code) = scene(Steps::new().then(|d| d.post(W1, Msg::Close)), |inst, log| {
        let c = plain_class(inst, "C");
        Window::create(&c, visible("a").at(0, 0).size(100, 50), None, None, inst, logging(log, true)).unwrap()
    });
    assert_eq!(code.unwrap(), 0);
    assert_eq!(
        log.of(W1),
        vec![Msg::Create, Msg::Paint(Rect::new(0, 0, 100, 50)), Msg::Close, Msg::Destroy]
    );
    assert_eq!(
        d.trace(),
        vec![TraceRecord::ValidateRect {
            window: W1,
            rect: Rect::new(0, 0, 100, 50)
        }]
    );
}

#[test]
fn destroy_before_dispatch_still_delivers_create_first() {
    let (d, log, code) = scene(Steps::new().then(|d| d.post(W1, Msg::Close)), |inst, log| {
        let c = plain_class(inst, "C");
        let first = Window::create(&c, visible("a"), None, None, inst, logging(log, true)).unwrap();
        let short = Window::create(&c, visible("b"), None, None, inst, logging(log, false)).unwrap();
        short.send(Msg::KeyDown(1)).unwrap();
        short.destroy();
        first
    });
    assert_eq!(code.unwrap(), 0);
    assert_eq!(log.of(W2), vec![Msg::Create, Msg::Destroy]);
    assert!(!d.is_live(W2));
}

#[test]
fn invalidations_coalesce_into_one_paint() {
    let steps = Steps::new()
        .then(|d| {
            d.invalidate(W1, Some(Rect::new(0, 0, 10, 10)))?;
            d.invalidate(W1, Some(Rect::new(20, 20, 30, 40)))?;
            d.invalidate(W1, Some(Rect::new(500, 500, 600, 600)))
        })
        .then(|d| d.post(W1, Msg::Close));
    let (_, log, _) = scene(steps, |inst, log| {
        let c = plain_class(inst, "C");
        let spec = WindowSpec::new("a", &[WindowStyle::OverlappedWindow]).at(0, 0).size(100, 100);
        Window::create(&c, spec, None, None, inst, logging(log, true)).unwrap()
    });
    let paints: Vec<Msg> = log.of(W1).into_iter().filter(|m| matches!(m, Msg::Paint(_))).collect();
    assert_eq!(paints, vec![Msg::Paint(Rect::new(0, 0, 30, 40))]);
}

#[test]
fn update_moves_the_paint_ahead() {
    let steps = Steps::new()
        .then(|d| {
            d.invalidate(W1, None)?;
            d.post(W1, Msg::KeyDown(1))?;
            Window::from_id(d, W1).update()
        })
        .then(|d| d.post(W1, Msg::Close));
    let (_, log, _) = scene(steps, |inst, log| {
        let c = plain_class(inst, "C");
        let spec = WindowSpec::new("a", &[]).at(0, 0).size(10, 10);
        Window::create(&c, spec, None, None, inst, logging(log, true)).unwrap()
    });
    assert_eq!(log.of(W1)[1..3], [Msg::Paint(Rect::new(0, 0, 10, 10)), Msg::KeyDown(1)]);
}

#[test]
fn resize_sends_size_and_redraws_only_for_redraw_classes() {
    let steps = Steps::new()
        .then(|d| d.inject(at(0, InputKind::Resize { window: W1, width: 30, height: 20 })))
        .then(|d| d.inject(at(0, InputKind::Resize { window: W2, width: 30, height: 20 })))
        .then(|d| d.post(W1, Msg::Close));
    let (d, log, _) = scene(steps, |inst, log| {
        let r = redraw_class(inst, "R");
        let p = plain_class(inst, "P");
        let spec = WindowSpec::new("", &[]).at(0, 0).size(10, 10);
        let w1 = Window::create(&r, spec.clone(), None, None, inst, logging(log, true)).unwrap();
        Window::create(&p, spec, None, None, inst, logging(log, false)).unwrap();
        w1
    });
    assert_eq!(
        log.of(W1)[..3],
        [Msg::Create, Msg::Size { width: 30, height: 20 }, Msg::Paint(Rect::new(0, 0, 30, 20))]
    );
    assert_eq!(log.of(W2)[..2], [Msg::Create, Msg::Size { width: 30, height: 20 }]);
    assert!(!log.of(W2).iter().any(|m| matches!(m, Msg::Paint(_))));
    assert!(d.trace_len() >= 1);
}

#[test]
fn default_geometry_cascades() {
    let (_, _, _) = scene(Steps::new().then(|d| {
        assert_eq!(d.rect(W1)?, Rect::new(64, 64, 704, 544));
        assert_eq!(d.rect(W2)?, Rect::new(128, 128, 768, 608));
        assert_eq!(d.rect(W3)?, Rect::new(5, 6, 645, 486));
        assert_eq!(d.client_rect(W3)?, Rect::new(0, 0, 640, 480));
        d.post_quit(0);
        Ok(())
    }), |inst, log| {
        let c = plain_class(inst, "C");
        let w = Window::create(&c, WindowSpec::new("", &[]), None, None, inst, logging(log, false)).unwrap();
        Window::create(&c, WindowSpec::new("", &[]), None, None, inst, logging(log, false)).unwrap();
        Window::create(&c, WindowSpec::new("", &[]).at(5, 6), None, None, inst, logging(log, false)).unwrap();
        w
    });
}

#[test]
fn pointer_input_hits_topmost_then_deepest_child() {
    let steps = Steps::new()
        .then(|d| d.inject(at(1, InputKind::MouseDown { x: 50, y: 50 })))
        .then(|d| d.inject(at(2, InputKind::MouseMove { x: 500, y: 500 })))
        .then(|d| d.inject(at(3, InputKind::MouseUp { x: 501, y: 502 })))
        .then(|d| d.inject(at(4, InputKind::MouseDown { x: 15, y: 15 })))
        .then(|d| d.inject(at(5, InputKind::MouseUp { x: 15, y: 15 })))
        .then(|d| d.inject(at(6, InputKind::Char(97))))
        .then(|d| {
            Window::from_id(d, W1).set_foreground()?;
            d.inject(at(7, InputKind::DblClick { x: 15, y: 15 }))
        })
        .then(|d| d.inject(at(8, InputKind::MouseMove { x: 900, y: 900 })))
        .then(|d| {
            d.post_quit(3);
            Ok(())
        });
    let (_, log, code) = scene(steps, |inst, log| {
        let c = plain_class(inst, "C");
        let w1 = Window::create(&c, visible("low").at(0, 0).size(200, 200), None, None, inst, logging(log, false)).unwrap();
        // w2 is created later, so it is on top
        let w2 = Window::create(&c, visible("high").at(10, 10).size(100, 100), None, None, inst, logging(log, false)).unwrap();
        let child = WindowSpec::new("", &[WindowStyle::Child, WindowStyle::Visible]).at(20, 20).size(40, 40);
        Window::create_child(&c, child, &w2, 1, 0, inst, logging(log, false)).unwrap();
        w1
    });
    assert_eq!(code.unwrap(), 3);
    let input = |w| -> Vec<Msg> {
        log.of(w)
            .into_iter()
            .filter(|m| m.is_mouse() || matches!(m, Msg::Char(_)))
            .collect()
    };
    assert_eq!(
        input(W3),
        vec![
            Msg::LButtonDown { x: 20, y: 20 },
            Msg::MouseMove { x: 470, y: 470 },
            Msg::LButtonUp { x: 471, y: 472 },
        ]
    );
    assert_eq!(
        input(W2),
        vec![Msg::LButtonDown { x: 5, y: 5 }, Msg::LButtonUp { x: 5, y: 5 }, Msg::Char(97)]
    );
    assert_eq!(input(W1), vec![Msg::LButtonDblClk { x: 15, y: 15 }]);
}

#[test]
fn timers_fire_per_period_until_killed() {
    let steps = Steps::new()
        .then(|d| {
            d.set_timer(W1, 7, 25)?;
            d.set_timer(W1, 2, 50)?;
            d.advance_clock(100);
            Ok(())
        })
        .then(|d| {
            assert_eq!(d.now(), 100);
            Timer::kill(&Window::from_id(d, W1), 7);
            d.advance_clock(100);
            assert_eq!(d.timers().len(), 1);
            assert_eq!(d.next_timer_due(), Some(250));
            assert!(matches!(d.set_timer(W1, 3, 0), Err(Error::InvalidPeriod(0))));
            d.post(W1, Msg::Close)
        });
    let (_, log, _) = scene(steps, |inst, log| {
        let c = plain_class(inst, "C");
        Window::create(&c, WindowSpec::new("", &[]), None, None, inst, logging(log, true)).unwrap()
    });
    let ticks: Vec<i32> = log
        .of(W1)
        .into_iter()
        .filter_map(|m| match m {
            Msg::Timer(t) => Some(t),
            _ => None,
        })
        .collect();
    // by due time, then timer id
    assert_eq!(ticks, vec![7, 2, 7, 7, 2, 7, 2, 2]);
}

#[test]
fn destroy_goes_children_first_and_drops_pending_messages() {
    let steps = Steps::new()
        .then(|d| {
            d.post(W2, Msg::KeyDown(1))?;
            d.post(W3, Msg::KeyDown(1))?;
            Window::from_id(d, W1).destroy();
            Window::from_id(d, W1).destroy();
            assert!(!d.is_live(W3));
            assert!(matches!(d.post(W3, Msg::KeyDown(2)), Err(Error::WindowDestroyed(_))));
            Ok(())
        });
    let (d, log, code) = scene(steps, |inst, log| {
        let c = plain_class(inst, "C");
        let w1 = Window::create(&c, WindowSpec::new("", &[]).at(0, 0).size(100, 100), None, None, inst, logging(log, true)).unwrap();
        let child = || WindowSpec::new("", &[WindowStyle::Child]).at(0, 0).size(10, 10);
        let w2 = Window::create_child(&c, child(), &w1, 1, 0, inst, logging(log, false)).unwrap();
        Window::create_child(&c, child(), &w2, 1, 0, inst, logging(log, false)).unwrap();
        w1
    });
    assert_eq!(code.unwrap(), 0);
    let destroys: Vec<WindowId> = log
        .all()
        .into_iter()
        .filter(|(_, m)| *m == Msg::Destroy)
        .map(|(w, _)| w)
        .collect();
    assert_eq!(destroys, vec![W3, W2, W1]);
    for w in [W1, W2, W3] {
        assert_eq!(log.of(w), vec![Msg::Create, Msg::Destroy]);
    }
    assert_eq!(d.window_count(), 0);
}

#[test]
fn duplicate_child_ids_and_quit_messages_are_rejected() {
    let steps = Steps::new().then(|d| {
        assert!(matches!(d.post(W1, Msg::Quit(1)), Err(Error::QuitToWindow)));
        d.post_quit(4);
        d.post_quit(5);
        Ok(())
    });
    let (_, _, code) = scene(steps, |inst, log| {
        let c = plain_class(inst, "C");
        let w1 = Window::create(&c, WindowSpec::new("", &[]), None, None, inst, logging(log, false)).unwrap();
        let child = || WindowSpec::new("", &[WindowStyle::Child]);
        Window::create_child(&c, child(), &w1, 9, 0, inst, logging(log, false)).unwrap();
        let dup = Window::create_child(&c, child(), &w1, 9, 0, inst, logging(log, false));
        assert!(matches!(dup, Err(Error::DuplicateChildId { id: 9, .. })));
        w1
    });
    assert_eq!(code.unwrap(), 4);
}

#[test]
fn input_must_not_go_back_in_time() {
    let (_, _, code) = scene(
        Steps::new()
            .then(|d| d.inject(at(10, InputKind::Tick)))
            .then(|d| d.inject(at(5, InputKind::Tick))),
        |inst, log| {
            let c = plain_class(inst, "C");
            Window::create(&c, WindowSpec::new("", &[]), None, None, inst, logging(log, false)).unwrap()
        },
    );
    assert!(matches!(code, Err(Error::TimeRegression { at: 5, now: 10 })));
}

#[test]
fn a_pump_without_quit_reports_exhausted_input() {
    let (_, _, code) = scene(Steps::new(), |inst, log| {
        let c = plain_class(inst, "C");
        Window::create(&c, WindowSpec::new("", &[]), None, None, inst, logging(log, false)).unwrap()
    });
    assert!(matches!(code, Err(Error::InputExhausted)));
}

#[test]
fn handler_panics_are_recorded() {
    let steps = Steps::new().then(|d| d.post(W1, Msg::KeyDown(0))).then(|d| {
        assert_eq!(d.errored(W1).as_deref(), Some("bad key"));
        d.post_quit(0);
        Ok(())
    });
    let (d, _, _) = scene(steps, |inst, _| {
        let c = plain_class(inst, "C");
        Window::create(&c, WindowSpec::new("", &[]), None, None, inst, |_w, ch| loop {
            if let Msg::KeyDown(_) = ch.recv() {
                panic!("bad key");
            }
        })
        .unwrap()
    });
    assert!(d.trace_text().contains("ERROR w1 bad key"));
}

#[test]
fn free_pump_delivers_from_other_threads() {
    let log = Log::default();
    let l = log.clone();
    let code = cmlui::doit(move |inst| {
        let c = plain_class(&inst, "C");
        let w = Window::create(&c, WindowSpec::new("", &[]), None, None, &inst, logging(&l, true)).unwrap();
        let w2 = w.clone();
        std::thread::spawn(move || {
            std::thread::sleep(Duration::from_millis(20));
            w2.send(Msg::KeyDown(4)).unwrap();
            w2.send(Msg::Close).unwrap();
        });
        let again = {
            let w3 = w.clone();
            std::thread::spawn(move || {
                std::thread::sleep(Duration::from_millis(5));
                w3.msg_loop()
            })
        };
        let code = w.msg_loop();
        assert!(matches!(again.join().unwrap(), Err(Error::LoopActive)));
        code
    });
    assert_eq!(code.unwrap(), 0);
    assert_eq!(log.of(W1), vec![Msg::Create, Msg::KeyDown(4), Msg::Close, Msg::Destroy]);
}
