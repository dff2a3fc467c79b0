//! Scoped-thread helpers. Results never depend on the thread count.

use crate::error::Result;
use std::sync::atomic::{AtomicUsize, Ordering};

/// Worker count: `TSOU_THREADS` if set, else the available parallelism.
pub fn thread_count() -> usize {
    if let Ok(v) = std::env::var("TSOU_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// [f(0), …, f(n−1)] computed on up to `thread_count()` threads.
pub fn map_range<T: Send, F: Fn(usize) -> Result<T> + Sync>(n: usize, f: F) -> Result<Vec<T>> {
    let threads = thread_count().min(n);
    if threads <= 1 {
        return (0..n).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<T>>> = (0..n).map(|_| None).collect();
    let chunks: Vec<Vec<(usize, Result<T>)>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                s.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= n {
                            break;
                        }
                        out.push((i, f(i)));
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for chunk in chunks {
        for (i, r) in chunk {
            slots[i] = Some(r);
        }
    }
    slots.into_iter().map(|r| r.expect("every index visited")).collect()
}
