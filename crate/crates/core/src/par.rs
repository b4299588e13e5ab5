//! Order-preserving data-parallel helpers for oracles and parameter sweeps.
//!
//! With the `parallel` feature these fan out over rayon's pool; without it
//! they run sequentially and give identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `f(0), f(1), ..., f(n-1)` collected in index order.
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// `items.map(f)` in input order.
pub fn map_vec<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// `points` log-spaced space parameters from `ceil(lg n)` to `n * ceil(lg n)`,
/// ascending and without repeats.
pub fn space_grid(n: usize, points: usize) -> Vec<u64> {
    let lo = crate::budget::lg(n as u64);
    let hi = (n as u64).max(1) * lo;
    if points <= 1 || hi == lo {
        return vec![lo];
    }
    let ratio = (hi as f64 / lo as f64).ln();
    let mut v: Vec<u64> = (0..points)
        .map(|k| (lo as f64 * (ratio * k as f64 / (points - 1) as f64).exp()).round() as u64)
        .map(|s| s.clamp(lo, hi))
        .collect();
    v.dedup();
    v
}

/// Runs `f` once per space parameter of `grid`, results in grid order.
pub fn over_grid<U, F>(grid: &[u64], f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> U + Sync + Send,
{
    map_vec(grid.to_vec(), f)
}
