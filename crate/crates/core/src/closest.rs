//! Planar closest pair under a bit budget.
//!
//! Direct mode makes two pile passes. Pass 1 streams points by x, cuts
//! vertical strips of `ceil(s/lg n)` points and solves each strip in core,
//! giving `delta`. Pass 2 streams by y, keeps only candidates within
//! horizontal distance `delta` of a neighbouring separator, groups them
//! `8m` at a time and solves consecutive group pairs. Below
//! `s = sqrt(n) lg n` the direct algorithm runs on batch pairs.
//!
//! All distances are squared integers. Ties go to the smallest `(i, j)`.

use crate::budget::{constants, lg, BitBudget, WorkVec};
use crate::error::{usage, Result};
use crate::geom::Point;
use crate::grid::{StripCutter, StripGrid};
use crate::navpile::{Bound, NavPile, Order};
use crate::stretch::{run_min, BatchPlan, Mode};
use crate::tape::{Tape, View};
use crate::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairResult {
    pub i: usize,
    pub j: usize,
    pub dist2: u64,
}

/// `(dist2, i, j)` with global `i < j`; orders exactly as the tie-break.
type Best = Option<(u64, usize, usize)>;

fn consider(best: &mut Best, d: u64, a: usize, b: usize) {
    let c = (d, a.min(b), a.max(b));
    if best.map_or(true, |x| c < x) {
        *best = Some(c);
    }
}

fn merge(best: &mut Best, other: Best) {
    if let Some((d, a, b)) = other {
        consider(best, d, a, b);
    }
}

fn bound(best: &Best) -> u64 {
    best.map_or(u64::MAX, |b| b.0)
}

fn sq(d: i64) -> u64 {
    d.unsigned_abs() * d.unsigned_abs()
}

/// Closest pair among the view-local indices in `idx`, which is reordered.
///
/// Coincident points are settled by a sort; otherwise a classic divide and
/// conquer runs with `<=` strip tests, so equal-distance pairs are seen and
/// the tie-break stays exact. Packing bounds the strip work since all
/// points are distinct.
fn in_core(view: &View<Point>, idx: &mut [u32], budget: &BitBudget) -> Result<Best> {
    if idx.len() < 2 {
        return Ok(None);
    }
    let key = |i: u32| {
        let p = view.get(i as usize);
        (p.x, p.y, view.global(i as usize))
    };
    idx.sort_unstable_by_key(|&i| key(i));
    let mut best: Best = None;
    let mut prev = key(idx[0]);
    for w in 1..idx.len() {
        let cur = key(idx[w]);
        if (cur.0, cur.1) == (prev.0, prev.1) {
            // runs are index-sorted, so the run's first pair is its smallest
            if w == 1 || (key(idx[w - 2]).0, key(idx[w - 2]).1) != (cur.0, cur.1) {
                consider(&mut best, 0, prev.2, cur.2);
            }
        }
        prev = cur;
    }
    if best.is_some() {
        return Ok(best);
    }
    let mut tmp = WorkVec::filled(budget, lg(view.len() as u64), idx.len(), 0u32)?;
    recurse(view, idx, &mut tmp, &mut best);
    Ok(best)
}

/// `a` arrives sorted by x and leaves sorted by y.
fn recurse(view: &View<Point>, a: &mut [u32], tmp: &mut [u32], best: &mut Best) {
    let p = a.len();
    let y = |i: u32| view.get(i as usize).y;
    if p <= 3 {
        for u in 0..p {
            for w in u + 1..p {
                let (pu, pw) = (view.get(a[u] as usize), view.get(a[w] as usize));
                consider(best, pu.dist2(pw), view.global(a[u] as usize), view.global(a[w] as usize));
            }
        }
        a.sort_unstable_by_key(|&i| y(i));
        return;
    }
    let mid = p / 2;
    let midx = view.get(a[mid] as usize).x;
    {
        let (l, r) = a.split_at_mut(mid);
        let (tl, tr) = tmp[..p].split_at_mut(mid);
        recurse(view, l, tl, best);
        recurse(view, r, tr, best);
    }
    let (mut u, mut w, mut k) = (0, mid, 0);
    while u < mid || w < p {
        let take_left = w == p || (u < mid && y(a[u]) <= y(a[w]));
        tmp[k] = if take_left { a[u] } else { a[w] };
        if take_left {
            u += 1;
        } else {
            w += 1;
        }
        k += 1;
    }
    a.copy_from_slice(&tmp[..p]);
    let mut k = 0;
    for t in 0..p {
        if sq(view.get(a[t] as usize).x - midx) <= bound(best) {
            tmp[k] = a[t];
            k += 1;
        }
    }
    for u in 0..k {
        let pu = view.get(tmp[u] as usize);
        for w in u + 1..k {
            let pw = view.get(tmp[w] as usize);
            if sq(pw.y - pu.y) > bound(best) {
                break;
            }
            consider(best, pu.dist2(pw), view.global(tmp[u] as usize), view.global(tmp[w] as usize));
        }
    }
}

/// Points in vertical strips of `ceil(s/lg n)` (at least 2).
pub fn strip_capacity(n: usize, s: u64) -> usize {
    (s.div_ceil(lg(n as u64)) as usize).max(2)
}

/// Whether a point at `x` lies within horizontal distance `delta` (squared)
/// of a separator bounding its strip.
pub fn is_candidate(grid: &StripGrid, x: i64, delta: u64) -> bool {
    let (lo, hi) = grid.bounds(grid.locate(x));
    lo.is_some_and(|v| sq(x - v) <= delta) || hi.is_some_and(|v| sq(v - x) <= delta)
}

/// Pass 1: the vertical strips and the best pair inside any of them.
pub fn pass_one<'b>(view: &View<Point>, s: u64, budget: &'b BitBudget) -> Result<(Best, StripGrid<'b>)> {
    let n = view.len();
    let pile = NavPile::new(n, |i| view.get(i).x, Order::Asc, Bound::NegInf, s, budget)?;
    let mut grid = StripGrid::empty(budget)?;
    let mut cutter = StripCutter::new(strip_capacity(n, s));
    let mut group = WorkVec::new(budget, lg(n as u64))?;
    let mut best = None;
    for e in pile {
        if let Some(sep) = cutter.offer(e.key) {
            merge(&mut best, in_core(view, &mut group, budget)?);
            group.clear();
            grid.push(sep)?;
        }
        group.push(e.item as u32)?;
    }
    merge(&mut best, in_core(view, &mut group, budget)?);
    Ok((best, grid))
}

fn direct_on(view: &View<Point>, s: u64, budget: &BitBudget) -> Result<Best> {
    let n = view.len();
    let (mut best, grid) = pass_one(view, s, budget)?;
    let delta = match best {
        None => return Ok(None),
        Some((0, ..)) => return Ok(best),
        Some(b) if grid.m() == 1 => return Ok(Some(b)),
        Some(b) => b.0,
    };
    let cap = 8 * grid.m();
    let pile = NavPile::new(n, |i| view.get(i).y, Order::Asc, Bound::NegInf, s, budget)?;
    let width = lg(n as u64);
    let mut prev = WorkVec::new(budget, width)?;
    let mut cur = WorkVec::new(budget, width)?;
    let mut work = WorkVec::new(budget, width)?;
    let solve = |prev: &[u32], cur: &[u32], work: &mut WorkVec<u32>, best: &mut Best| -> Result<()> {
        work.clear();
        work.extend_from_slice(prev)?;
        work.extend_from_slice(cur)?;
        merge(best, in_core(view, work, budget)?);
        Ok(())
    };
    for e in pile {
        if is_candidate(&grid, view.get(e.item).x, delta) {
            cur.push(e.item as u32)?;
            if cur.len() == cap {
                solve(&prev, &cur, &mut work, &mut best)?;
                std::mem::swap(&mut prev, &mut cur);
                cur.clear();
            }
        }
    }
    if !cur.is_empty() {
        solve(&prev, &cur, &mut work, &mut best)?;
    }
    Ok(best)
}

fn check(tape: &Tape<Point>, s: u64) -> Result<()> {
    let n = tape.len();
    if n < 2 {
        return usage(format!("closest pair needs at least 2 points, got {n}"));
    }
    if s < lg(n as u64) {
        return usage(format!("space {s} bits is below lg n = {}", lg(n as u64)));
    }
    Ok(())
}

fn finish(best: Best) -> PairResult {
    let (dist2, i, j) = best.expect("n >= 2 always yields a pair");
    PairResult { i, j, dist2 }
}

fn run(tape: &Tape<Point>, s: u64, f: impl FnOnce(&BitBudget) -> Result<Best>) -> Result<Outcome<PairResult>> {
    check(tape, s)?;
    let budget = BitBudget::for_run(constants::C_CLOSEST, s, tape.len())?;
    let before = tape.read_count();
    let best = f(&budget)?;
    Ok(Outcome::measured(finish(best), &budget, tape, before))
}

/// Whether `s` is in the direct range `s >= sqrt(n) lg n`.
pub fn is_direct(n: usize, s: u64) -> bool {
    let l = lg(n as u64) as u128;
    (s as u128) * (s as u128) >= n as u128 * l * l
}

pub fn closest_pair(tape: &Tape<Point>, s: u64) -> Result<Outcome<PairResult>> {
    if is_direct(tape.len(), s) {
        direct(tape, s)
    } else {
        stretched(tape, s)
    }
}

pub fn direct(tape: &Tape<Point>, s: u64) -> Result<Outcome<PairResult>> {
    run(tape, s, |b| direct_on(&tape.view(), s, b))
}

/// Batch size `max(2, floor(s^2 / lg^2 s))`, clamped to `n`.
pub fn batch_size(n: usize, s: u64) -> usize {
    let l = lg(s) as u128;
    let r = ((s as u128 * s as u128) / (l * l)).max(2);
    r.min(n as u128) as usize
}

pub fn stretched(tape: &Tape<Point>, s: u64) -> Result<Outcome<PairResult>> {
    run(tape, s, |b| {
        let plan = BatchPlan::clamped(tape.len(), batch_size(tape.len(), s), Mode::MinCombine)?;
        run_min(&plan, |x, y| direct_on(&View::pair(tape, x, y), s, b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{points, GenConfig};
    use crate::oracle::bf_closest;

    fn tape(v: &[(i64, i64)]) -> Tape<Point> {
        Tape::points(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn all_modes(t: &Tape<Point>, s: u64) -> Vec<PairResult> {
        vec![
            closest_pair(t, s).unwrap().value,
            direct(t, s).unwrap().value,
            stretched(t, s).unwrap().value,
        ]
    }

    #[test]
    fn examples() {
        let t = tape(&[(0, 0), (3, 4), (10, 10)]);
        for r in all_modes(&t, 4) {
            assert_eq!(r, PairResult { i: 0, j: 1, dist2: 25 });
        }
        let t = tape(&[(5, 5), (5, 5), (9, 9)]);
        for r in all_modes(&t, 2) {
            assert_eq!(r, PairResult { i: 0, j: 1, dist2: 0 });
        }
        assert!(closest_pair(&tape(&[(1, 1)]), 8).is_err());
        assert!(closest_pair(&tape(&[(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)]), 2).is_err());
    }

    #[test]
    fn straddling_pair_found_in_pass_two() {
        // strips of 2 points: {0,1} {10,11} {20,21}; within-strip gaps are wide
        // in y, the pair (1,2) straddles the first separator at distance 1
        let t = tape(&[(0, 0), (1, 100), (2, 100), (3, 0), (4, 200), (5, 300)]);
        let b = BitBudget::unlimited();
        let (p1, grid) = pass_one(&t.view(), 2 * lg(6), &b).unwrap();
        assert!(grid.m() > 1);
        assert!(p1.unwrap().0 > 1);
        let r = direct(&t, 2 * lg(6)).unwrap().value;
        assert_eq!(r, PairResult { i: 1, j: 2, dist2: 1 });
    }

    #[test]
    fn collinear_vertical_line() {
        let ys = [0, 7, 3, 20, 12, 30, 25, 29];
        let t = Tape::points(ys.iter().map(|&y| Point::new(4, y)).collect()).unwrap();
        for s in [3, 8, 24, 100] {
            assert_eq!(closest_pair(&t, s).unwrap().value, PairResult { i: 5, j: 7, dist2: 1 });
        }
    }

    #[test]
    fn ties_are_lexicographic() {
        let t = tape(&[(0, 0), (10, 0), (11, 0), (0, 1), (50, 50), (51, 50)]);
        for s in [3, 6, 12, 40] {
            for r in all_modes(&t, s) {
                assert_eq!(r, PairResult { i: 0, j: 3, dist2: 1 });
            }
        }
    }

    #[test]
    fn random_against_oracle() {
        for (seed, n, range, dup) in [(1, 1000, 1 << 20, 0.0), (2, 300, 40, 0.1), (3, 512, 1 << 30, 0.0), (4, 200, 5, 0.5)] {
            let cfg = GenConfig::new(n, seed).range(range).dup_rate(dup).degenerate(seed % 2 == 0);
            let t = Tape::points(points(&cfg).unwrap()).unwrap();
            let want = bf_closest(&t).unwrap();
            let l = lg(n as u64);
            let root = (n as f64).sqrt() as u64 * l;
            for s in [l, 4 * l, root, n as u64, n as u64 * l] {
                let out = closest_pair(&t, s).unwrap();
                assert_eq!(out.value, want, "n={n} s={s}");
                assert!(out.peak_bits <= out.capacity_bits);
            }
        }
    }

    #[test]
    fn stretched_512() {
        let t = Tape::points(points(&GenConfig::new(512, 7)).unwrap()).unwrap();
        let want = bf_closest(&t).unwrap();
        for s in [lg(512), 64] {
            let out = stretched(&t, s).unwrap();
            assert_eq!(out.value, want);
            assert!(out.peak_bits <= constants::C_CLOSEST * s);
        }
    }

    #[test]
    fn candidate_filter_is_safe() {
        for seed in 0..20 {
            let cfg = GenConfig::new(400, seed).range(2000).degenerate(true);
            let t = Tape::points(points(&cfg).unwrap()).unwrap();
            let b = BitBudget::unlimited();
            let s = 60;
            let (best, grid) = pass_one(&t.view(), s, &b).unwrap();
            let delta = best.unwrap().0;
            let p = t.records();
            for (a, pa) in p.iter().enumerate() {
                if is_candidate(&grid, pa.x, delta) {
                    continue;
                }
                let nn = p.iter().enumerate().filter(|&(c, _)| c != a).map(|(_, q)| pa.dist2(*q)).min().unwrap();
                assert!(nn >= delta, "non-candidate {a} has a neighbour at {nn} < {delta}");
            }
        }
    }

    #[test]
    fn dispatch_threshold() {
        assert!(is_direct(100, 70));
        assert!(!is_direct(100, 69));
        assert_eq!(batch_size(1000, 16), 16);
        assert_eq!(batch_size(1000, 3), 2);
        assert_eq!(batch_size(10, 1000), 10);
    }
}
