//! Batch-pair decomposition for running an in-core solver under a smaller budget.
//!
//! The input is split into `ceil(n/r)` contiguous batches and the solver runs
//! on each subproblem in lexicographic `(i, j)` order, one at a time.

use std::ops::Range;

use crate::error::{usage, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Overlapping subproblems `B_i ∪ B_j`, combined by minimum.
    MinCombine,
    /// Within-batch plus bichromatic cross-batch subproblems, disjoint results.
    DisjointCombine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchPlan {
    pub n: usize,
    pub r: usize,
    pub mode: Mode,
}

impl BatchPlan {
    pub fn new(n: usize, r: usize, mode: Mode) -> Result<Self> {
        if r < 1 || r > n {
            return usage(format!("batch size {r} outside [1, {n}]"));
        }
        Ok(BatchPlan { n, r, mode })
    }

    /// `r` clamped to `[1, n]`; for client formulas that may overshoot.
    pub fn clamped(n: usize, r: usize, mode: Mode) -> Result<Self> {
        Self::new(n, r.clamp(1, n.max(1)), mode)
    }

    pub fn batch_count(&self) -> usize {
        self.n.div_ceil(self.r)
    }

    pub fn batch(&self, i: usize) -> Range<usize> {
        let lo = i * self.r;
        lo..(lo + self.r).min(self.n)
    }

    pub fn batches(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.batch_count()).map(|i| self.batch(i))
    }

    /// Pairs `(i, j)`, `i < j`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let k = self.batch_count();
        (0..k).flat_map(move |i| (i + 1..k).map(move |j| (i, j)))
    }
}

/// Minimum of `solve(B_i, B_j)` over all pairs, or `solve(B_1, ∅)` for one batch.
///
/// `solve` receives the two ranges of the subproblem; the second is empty
/// only in the single-batch case.
pub fn run_min<T: Ord>(
    plan: &BatchPlan,
    mut solve: impl FnMut(Range<usize>, Range<usize>) -> Result<Option<T>>,
) -> Result<Option<T>> {
    if plan.batch_count() <= 1 {
        return solve(0..plan.n, 0..0);
    }
    let mut best: Option<T> = None;
    for (i, j) in plan.pairs() {
        if let Some(v) = solve(plan.batch(i), plan.batch(j))? {
            if best.as_ref().map_or(true, |b| v < *b) {
                best = Some(v);
            }
        }
    }
    Ok(best)
}

/// Sum of `within(B_i)` over all batches plus `cross(B_i, B_j)` over all pairs.
///
/// `cross` must only account for interactions between its two batches; each
/// result then comes from exactly one subproblem.
pub fn run_disjoint(
    plan: &BatchPlan,
    mut within: impl FnMut(Range<usize>) -> Result<u64>,
    mut cross: impl FnMut(Range<usize>, Range<usize>) -> Result<u64>,
) -> Result<u64> {
    let mut total = 0;
    for b in plan.batches() {
        total += within(b)?;
    }
    for (i, j) in plan.pairs() {
        total += cross(plan.batch(i), plan.batch(j))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::RefCell;
    use std::collections::HashMap;

    #[test]
    fn plans() {
        let p = BatchPlan::new(10, 4, Mode::MinCombine).unwrap();
        assert_eq!(p.batches().collect::<Vec<_>>(), vec![0..4, 4..8, 8..10]);
        assert_eq!(BatchPlan::new(4, 4, Mode::MinCombine).unwrap().batch_count(), 1);
        let p = BatchPlan::new(1000, 37, Mode::MinCombine).unwrap();
        let sizes: Vec<usize> = p.batches().map(|b| b.len()).collect();
        assert_eq!(sizes.len(), 1000usize.div_ceil(37));
        assert!(sizes[..sizes.len() - 1].iter().all(|&s| s == 37));
        assert_eq!(*sizes.last().unwrap(), 1000 - 37 * (1000 / 37));
        assert!(BatchPlan::new(10, 0, Mode::MinCombine).is_err());
        assert!(BatchPlan::new(10, 11, Mode::MinCombine).is_err());
    }

    #[test]
    fn min_covers_every_pair() {
        for (n, r) in [(7usize, 2usize), (12, 3), (5, 5), (9, 1)] {
            let plan = BatchPlan::new(n, r, Mode::MinCombine).unwrap();
            let mut seen = vec![vec![false; n]; n];
            run_min::<u8>(&plan, |a, b| {
                let idx: Vec<usize> = a.chain(b).collect();
                for &p in &idx {
                    for &q in &idx {
                        seen[p][q] = true;
                    }
                }
                Ok(None)
            })
            .unwrap();
            assert!((0..n).all(|p| (0..n).all(|q| seen[p][q])));
        }
    }

    #[test]
    fn disjoint_covers_every_pair_once() {
        for (n, r) in [(7usize, 2usize), (12, 5), (4, 4), (6, 1)] {
            let plan = BatchPlan::new(n, r, Mode::DisjointCombine).unwrap();
            let hits: RefCell<HashMap<(usize, usize), u32>> = RefCell::default();
            let total = run_disjoint(
                &plan,
                |b| {
                    let v: Vec<usize> = b.collect();
                    let mut c = 0;
                    for (x, &p) in v.iter().enumerate() {
                        for &q in &v[x + 1..] {
                            *hits.borrow_mut().entry((p, q)).or_default() += 1;
                            c += 1;
                        }
                    }
                    Ok(c)
                },
                |a, b| {
                    let mut c = 0;
                    for p in a {
                        for q in b.clone() {
                            *hits.borrow_mut().entry((p, q)).or_default() += 1;
                            c += 1;
                        }
                    }
                    Ok(c)
                },
            )
            .unwrap();
            assert_eq!(total as usize, n * (n - 1) / 2);
            let hits = hits.into_inner();
            assert_eq!(hits.len(), n * (n - 1) / 2);
            assert!(hits.values().all(|&h| h == 1));
        }
    }

    #[test]
    fn min_single_batch_is_direct() {
        let plan = BatchPlan::new(5, 8.min(5), Mode::MinCombine).unwrap();
        let got = run_min(&plan, |a, b| Ok(Some((a.len(), b.len())))).unwrap();
        assert_eq!(got, Some((5, 0)));
    }
}
