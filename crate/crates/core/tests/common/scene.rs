#![allow(dead_code)]

use std::fmt::Debug;
use std::sync::{Arc, Mutex};

use cmlui::cml::{channel, choose};
use cmlui::controls::Control;
use cmlui::display::{Display, InputEvent, InputKind, WindowId};
use cmlui::window::Window;
use cmlui::{doit_with, Instance, Result};

use super::{logging, plain_class, visible, Log, Steps};

pub const MAIN: WindowId = WindowId(1);

pub type Shared<T> = Arc<Mutex<Option<T>>>;

pub fn input(d: &Display, kinds: &[InputKind]) -> Result<()> {
    for k in kinds {
        d.inject(InputEvent::new(d.now(), *k))?;
    }
    Ok(())
}

pub fn click(x: i32, y: i32) -> [InputKind; 2] {
    [InputKind::MouseDown { x, y }, InputKind::MouseUp { x, y }]
}

/// Runs a stepped scene with a 400×200 main window at the screen origin.
/// `make` builds the control under it; each step sees the display and the
/// control.
pub fn with_control<C, M>(make: M, steps: Vec<Box<dyn FnOnce(&Display, &C) -> Result<()> + Send>>) -> Display
where
    C: Clone + Send + 'static,
    M: FnOnce(&Instance, &Window) -> C + Send + 'static,
{
    let slot: Shared<C> = Arc::new(Mutex::new(None));
    let mut driver = Steps::new();
    for f in steps {
        let slot = slot.clone();
        driver = driver.then(move |d| {
            let c = slot.lock().unwrap().clone().expect("control built");
            f(d, &c)
        });
    }
    driver = driver.then(|d| {
        d.post_quit(0);
        Ok(())
    });
    let display = Display::default();
    display.install_driver(Box::new(driver));
    let log = Log::default();
    let code = doit_with(display.clone(), move |inst| {
        let c = plain_class(&inst, "Main");
        let w = Window::create(&c, visible("main").at(0, 0).size(400, 200), None, None, &inst, logging(&log, false)).unwrap();
        *slot.lock().unwrap() = Some(make(&inst, &w));
        w.msg_loop()
    });
    assert_eq!(code.unwrap(), 0);
    display
}

pub type StepFn<C> = Box<dyn FnOnce(&Display, &C) -> Result<()> + Send>;

pub fn step<C>(f: impl FnOnce(&Display, &C) -> Result<()> + Send + 'static) -> StepFn<C> {
    Box::new(f)
}

/// The contract every control satisfies, predefined or composed.
pub fn conformance<C>(
    make: impl FnOnce(&Instance, &Window) -> C + Send + 'static,
    trigger: Vec<InputKind>,
    expect: C::Notify,
) where
    C: Control + Clone + Send + 'static,
    C::Notify: PartialEq + Debug + Clone,
{
    let seen: Arc<Mutex<Vec<C::Notify>>> = Arc::default();
    let (s1, s2) = (seen.clone(), seen.clone());
    let again = trigger.clone();
    let steps: Vec<StepFn<C>> = vec![
        step(|d, c: &C| {
            let w = c.window_of();
            assert!(w.is_live());
            assert_eq!(w.client_rect()?.left, 0);
            assert_eq!(w.client_rect()?.top, 0);
            // the control sits inside the main window
            let mut up = w.parent();
            while let Some(p) = up.clone().and_then(|p| p.parent()) {
                up = Some(p);
            }
            assert_eq!(up.map(|p| p.id()), Some(MAIN));
            assert!(c.notify_evt().poll().is_none());
            let _ = d;
            Ok(())
        }),
        step(move |d, _| input(d, &trigger)),
        step(move |_, c: &C| {
            let other = channel::<()>();
            let e = choose([c.notify_evt().wrap(Some), other.recv_evt().wrap(|_| None)]);
            if let Some(Some(n)) = e.poll() {
                s1.lock().unwrap().push(n);
            }
            Ok(())
        }),
        step(move |_, c: &C| {
            while let Some(n) = c.notify_evt().poll() {
                s2.lock().unwrap().push(n);
            }
            Ok(())
        }),
        step(|_, c: &C| {
            c.window_of().destroy();
            Ok(())
        }),
        step(move |d, c: &C| {
            assert!(!c.window_of().is_live());
            input(d, &again)
        }),
        step(|_, c: &C| {
            assert!(c.notify_evt().poll().is_none());
            Ok(())
        }),
    ];
    with_control(make, steps);
    let seen = seen.lock().unwrap();
    assert_eq!(seen.first(), Some(&expect), "{seen:?}");
}


/// Performs each action, then polls the control's notifications at three
/// idle points.
pub fn collect_notes<C, N>(
    make: impl FnOnce(&Instance, &Window) -> C + Send + 'static,
    actions: Vec<Vec<InputKind>>,
) -> Vec<N>
where
    C: Control<Notify = N> + Clone + Send + 'static,
    N: Send + 'static,
{
    let seen: Arc<Mutex<Vec<N>>> = Arc::new(Mutex::new(Vec::new()));
    let mut steps: Vec<StepFn<C>> = Vec::new();
    for a in actions {
        steps.push(step(move |d, _| input(d, &a)));
        for _ in 0..3 {
            let s = seen.clone();
            steps.push(step(move |_, c: &C| {
                if let Some(n) = c.notify_evt().poll() {
                    s.lock().unwrap().push(n);
                }
                Ok(())
            }));
        }
    }
    with_control(make, steps);
    Arc::try_unwrap(seen).ok().unwrap().into_inner().unwrap()
}

