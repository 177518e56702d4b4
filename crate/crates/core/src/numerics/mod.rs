//! Shared numerical machinery: special functions, adaptive quadrature,
//! Monte Carlo ball sampling, and small grid utilities.

pub mod mc;
pub mod quad;
pub mod special;

/// Geometric grid of `n` points from `lo` to `hi` (inclusive), strictly
/// increasing. Requires `0 < lo < hi` and `n >= 2`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2, "bad geometric grid spec");
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| lo * (ratio * i as f64).exp()).collect()
}

/// Map `op` over `items` using up to `SBQ_THREADS` worker threads
/// (default: single-threaded). Results keep input order, so output is
/// deterministic regardless of scheduling.
pub fn parallel_map<T, U, F>(items: &[T], op: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let threads = configured_threads().min(items.len().max(1));
    if threads <= 1 {
        return items.iter().map(&op).collect();
    }
    let mut out: Vec<Option<U>> = Vec::with_capacity(items.len());
    out.resize_with(items.len(), || None);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<&mut Option<U>>> =
        out.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let value = op(&items[i]);
                **slots[i].lock().unwrap() = Some(value);
            });
        }
    });
    out.into_iter().map(|v| v.unwrap()).collect()
}

fn configured_threads() -> usize {
    std::env::var("SBQ_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}
