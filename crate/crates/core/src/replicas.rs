//! Ordered map over replica indices, data-parallel with the `parallel`
//! feature and sequential otherwise. Results come back in index order, so
//! anything computed from them is independent of the thread count.

/// Effective worker count for a request; `None` means all available cores.
pub fn worker_count(threads: Option<usize>) -> usize {
    if cfg!(feature = "parallel") {
        match threads {
            Some(t) if t >= 1 => t,
            _ => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        }
    } else {
        1
    }
}

/// `(0..count).map(f)` evaluated on `threads` workers.
#[cfg_attr(not(feature = "parallel"), allow(unused_variables))]
pub fn map_replicas<T, F>(count: u64, threads: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if worker_count(threads) > 1 {
            return parallel_map(count, threads, f);
        }
    }
    sequential_map(count, f)
}

pub fn sequential_map<T, F: Fn(u64) -> T>(count: u64, f: F) -> Vec<T> {
    (0..count).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn parallel_map<T, F>(count: u64, threads: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let run = || (0..count).into_par_iter().map(&f).collect();
    match threads {
        Some(t) if t >= 1 => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        _ => run(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_for_any_thread_count() {
        let f = |i: u64| i * i + 1;
        let expected: Vec<u64> = (0..1000).map(f).collect();
        for threads in [None, Some(1), Some(3)] {
            assert_eq!(map_replicas(1000, threads, f), expected);
        }
        assert!(map_replicas(0, None, f).is_empty());
    }
}
