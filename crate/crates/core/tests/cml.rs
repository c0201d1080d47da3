use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use cmlui::cml::{
    always, channel, choose, never, set_choice_seed, spawn, spawn_in_group, ActivityGroup,
    Channel, Event, VirtualClock,
};
use proptest::prelude::*;

/// Serializes tests that depend on the process-wide choice seed.
static SEEDED: Mutex<()> = Mutex::new(());

fn eventually(mut f: impl FnMut() -> bool) -> bool {
    let deadline = Instant::now() + Duration::from_secs(5);
    while Instant::now() < deadline {
        if f() {
            return true;
        }
        thread::sleep(Duration::from_millis(1));
    }
    false
}

#[test]
fn send_blocks_until_received() {
    let c = channel::<u32>();
    let done = Arc::new(AtomicUsize::new(0));
    let (c2, d2) = (c.clone(), done.clone());
    spawn(move || {
        c2.send(5);
        d2.store(1, Ordering::SeqCst);
    })
    .unwrap();
    assert!(eventually(|| c.waiting_senders() == 1));
    thread::sleep(Duration::from_millis(20));
    assert_eq!(done.load(Ordering::SeqCst), 0);
    assert_eq!(c.recv(), 5);
    assert!(eventually(|| done.load(Ordering::SeqCst) == 1));
    assert_eq!(c.waiting_senders(), 0);
}

#[test]
fn recv_blocks_until_sent() {
    let c = channel::<&'static str>();
    let got = Arc::new(Mutex::new(None));
    let (c2, g2) = (c.clone(), got.clone());
    spawn(move || *g2.lock().unwrap() = Some(c2.recv())).unwrap();
    assert!(eventually(|| c.waiting_receivers() == 1));
    assert!(got.lock().unwrap().is_none());
    c.send("hi");
    assert!(eventually(|| *got.lock().unwrap() == Some("hi")));
}

#[test]
fn poll_and_timeouts_do_not_leave_waiters() {
    let c = channel::<i32>();
    assert_eq!(c.recv_evt().poll(), None);
    assert_eq!(c.send_evt(1).sync_for(Duration::from_millis(10)), None);
    assert_eq!(c.recv_evt().sync_for(Duration::from_millis(10)), None);
    assert_eq!(c.waiting_senders(), 0);
    assert_eq!(c.waiting_receivers(), 0);
    assert_eq!(never::<i32>().sync_for(Duration::from_millis(5)), None);
    assert_eq!(always(3).sync(), 3);
}

#[test]
fn events_are_reusable_values() {
    let c = channel::<i32>();
    let c2 = c.clone();
    spawn(move || {
        for i in 0..3 {
            c2.send(i);
        }
    })
    .unwrap();
    let e = c.recv_evt().wrap(|n| n * 10);
    let got: Vec<i32> = (0..3).map(|_| e.sync()).collect();
    assert_eq!(got, vec![0, 10, 20]);
}

#[test]
fn choose_takes_the_ready_branch() {
    let a = channel::<i32>();
    let b = channel::<i32>();
    let b2 = b.clone();
    spawn(move || b2.send(9)).unwrap();
    assert!(eventually(|| b.waiting_senders() == 1));
    let e = choose([a.recv_evt().wrap(|n| ("a", n)), b.recv_evt().wrap(|n| ("b", n))]);
    assert_eq!(e.sync(), ("b", 9));
    assert_eq!(a.waiting_receivers(), 0);
}

#[test]
fn choose_flattens() {
    let c = channel::<i32>();
    let nested = choose([
        choose([c.recv_evt(), never()]),
        choose([choose([always(1)]), c.recv_evt()]),
    ]);
    assert_eq!(nested.base_count(), 3);
    assert_eq!(choose(Vec::<Event<i32>>::new()).base_count(), 0);
}

#[test]
fn nested_and_flat_choices_agree_under_a_seed() {
    let _g = SEEDED.lock().unwrap();
    let mk = |n: i32| always(n);
    let nested = choose([choose([mk(1), mk(2)]), choose([mk(3), choose([mk(4)])])]);
    let flat = choose([mk(1), mk(2), mk(3), mk(4)]);
    for seed in 0..20 {
        set_choice_seed(seed);
        let a: Vec<i32> = (0..50).map(|_| nested.sync()).collect();
        set_choice_seed(seed);
        let b: Vec<i32> = (0..50).map(|_| flat.sync()).collect();
        assert_eq!(a, b);
    }
}

#[test]
fn wrap_composes_inner_first() {
    let e = always(String::from("x"))
        .wrap(|s| s + "f")
        .wrap(|s| s + "g");
    assert_eq!(e.sync(), "xfg");
}

#[test]
fn losing_branch_wraps_never_run() {
    let runs = Arc::new([AtomicUsize::new(0), AtomicUsize::new(0)]);
    let quiet = channel::<i32>();
    for _ in 0..200 {
        let (r0, r1) = (runs.clone(), runs.clone());
        let e = choose([
            always(1).wrap(move |n| {
                r0[0].fetch_add(1, Ordering::SeqCst);
                n
            }),
            quiet.recv_evt().wrap(move |n| {
                r1[1].fetch_add(1, Ordering::SeqCst);
                n
            }),
        ]);
        assert_eq!(e.sync(), 1);
    }
    assert_eq!(runs[0].load(Ordering::SeqCst), 200);
    assert_eq!(runs[1].load(Ordering::SeqCst), 0);
    assert_eq!(quiet.waiting_receivers(), 0);
}

#[test]
fn crossed_choices_transfer_once() {
    for _ in 0..300 {
        let a = channel::<i32>();
        let b = channel::<i32>();
        let (a1, b1) = (a.clone(), b.clone());
        let t = thread::spawn(move || {
            choose([a1.send_evt(1).wrap(|_| "sent"), b1.recv_evt().wrap(|_| "recv")]).sync()
        });
        let mine = choose([b.send_evt(2).wrap(|_| "sent"), a.recv_evt().wrap(|_| "recv")]).sync();
        let theirs = t.join().unwrap();
        let mut both = [mine, theirs];
        both.sort();
        assert_eq!(both, ["recv", "sent"]);
    }
}

#[test]
fn same_channel_send_and_recv_in_one_choice_needs_a_partner() {
    let c = channel::<i32>();
    let c2 = c.clone();
    let t = thread::spawn(move || {
        choose([c2.send_evt(1).wrap(|_| -1), c2.recv_evt()]).sync_for(Duration::from_millis(30))
    });
    assert_eq!(t.join().unwrap(), None);
    let c3 = c.clone();
    spawn(move || c3.send(7)).unwrap();
    assert!(eventually(|| c.waiting_senders() == 1));
    assert_eq!(choose([c.send_evt(1).wrap(|_| -1), c.recv_evt()]).sync(), 7);
}

#[test]
fn two_ready_receivers_are_picked_fairly() {
    let _g = SEEDED.lock().unwrap();
    set_choice_seed(11);
    let e = choose([always(0usize), always(1usize)]);
    let mut hits = [0usize; 2];
    for _ in 0..2000 {
        hits[e.sync()] += 1;
    }
    let share = hits[0] as f64 / 2000.0;
    assert!((0.4..=0.6).contains(&share), "{hits:?}");
}

#[test]
fn virtual_timeouts_commit_on_advance() {
    let clock = VirtualClock::new();
    let c = channel::<i32>();
    let (k, c2) = (clock.clone(), c.clone());
    let t = thread::spawn(move || {
        choose([c2.recv_evt().wrap(Some), k.timeout_evt(50).wrap(|_| None)]).sync()
    });
    thread::sleep(Duration::from_millis(10));
    clock.advance_to(49);
    thread::sleep(Duration::from_millis(10));
    assert!(!t.is_finished());
    clock.advance_to(50);
    assert_eq!(t.join().unwrap(), None);
    assert_eq!(c.waiting_receivers(), 0);
    assert_eq!(clock.now(), 50);
    assert_eq!(clock.timeout_evt(10).poll(), Some(()));
    assert_eq!(clock.after_evt(0).poll(), Some(()));
}

#[test]
fn group_goes_idle_when_members_block() {
    let g = ActivityGroup::new();
    let c = channel::<i32>();
    let started = Arc::new(AtomicUsize::new(0));
    for _ in 0..4 {
        let (c, s) = (c.clone(), started.clone());
        spawn_in_group(&g, move || {
            s.fetch_add(1, Ordering::SeqCst);
            let _ = c.recv();
        })
        .unwrap();
    }
    assert!(g.wait_idle_timeout(Duration::from_secs(5)));
    assert_eq!(started.load(Ordering::SeqCst), 4);
    assert_eq!(c.waiting_receivers(), 4);
    for i in 0..4 {
        c.send(i);
    }
    assert!(g.wait_idle_timeout(Duration::from_secs(5)));
    assert_eq!(g.active(), 0);
}

#[test]
fn spawned_threads_inherit_the_group() {
    let g = ActivityGroup::new();
    let _in = g.enter();
    let c = channel::<i32>();
    let (c2, other) = (c.clone(), channel::<i32>());
    spawn(move || {
        spawn(move || c2.send(1)).unwrap();
        let _ = other.recv_evt().sync_for(Duration::from_secs(60));
    })
    .unwrap();
    assert!(g.wait_idle_timeout(Duration::from_secs(5)));
    assert_eq!(c.waiting_senders(), 1);
    assert_eq!(c.recv(), 1);
}

fn run_schedule(senders: Vec<Vec<u32>>, receivers: Vec<usize>) -> (Vec<u32>, Vec<u32>) {
    let c: Channel<u32> = channel();
    let sent = Arc::new(Mutex::new(Vec::new()));
    let got = Arc::new(Mutex::new(Vec::new()));
    let mut handles = Vec::new();
    for vals in senders {
        let (c, sent) = (c.clone(), sent.clone());
        handles.push(thread::spawn(move || {
            for v in vals {
                c.send(v);
                sent.lock().unwrap().push(v);
            }
        }));
    }
    for n in receivers {
        let (c, got) = (c.clone(), got.clone());
        handles.push(thread::spawn(move || {
            for _ in 0..n {
                let v = c.recv();
                got.lock().unwrap().push(v);
            }
        }));
    }
    for h in handles {
        h.join().unwrap();
    }
    let mut s = sent.lock().unwrap().clone();
    let mut g = got.lock().unwrap().clone();
    s.sort();
    g.sort();
    (s, g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transfers_are_conserved(split in prop::collection::vec(1usize..4, 1..4), recv_threads in 1usize..4) {
        let mut next = 0u32;
        let senders: Vec<Vec<u32>> = split
            .iter()
            .map(|n| (0..*n).map(|_| { next += 1; next }).collect())
            .collect();
        let total = next as usize;
        let mut receivers = vec![total / recv_threads; recv_threads];
        receivers[0] += total % recv_threads;
        let (sent, got) = run_schedule(senders, receivers);
        prop_assert_eq!(&sent, &got);
        let unique: HashSet<u32> = got.iter().copied().collect();
        prop_assert_eq!(unique.len(), total);
    }
}
