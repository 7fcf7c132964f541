//! Deterministic fork-join over an index range: results are merged in
//! index order, so the output is identical for any thread count.

/// Apply `f` to `0..n`, splitting the range into contiguous chunks across
/// `threads` workers.
pub fn par_map_indexed<T, E, F>(n: usize, threads: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync,
{
    let threads = threads.max(1).min(n.max(1));
    if threads == 1 {
        return (0..n).map(&f).collect();
    }
    let chunk = n.div_ceil(threads);
    let mut parts: Vec<Result<Vec<T>, E>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let f = &f;
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(n);
                scope.spawn(move || (lo..hi).map(f).collect::<Result<Vec<T>, E>>())
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut out = Vec::with_capacity(n);
    for part in parts.drain(..) {
        out.extend(part?);
    }
    Ok(out)
}
