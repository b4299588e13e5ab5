//! Brute-force references. These read records directly (no read metering,
//! no budget) and share only the exact predicates in [`crate::geom`].

use crate::closest::PairResult;
use crate::geom::{pair_intersects, Coord, Kind, Point, Rect, Segment};
use crate::par;
use crate::tape::Tape;

/// All-pairs closest pair with `(dist2, i, j)` tie-break. `None` for `n < 2`.
pub fn bf_closest(tape: &Tape<Point>) -> Option<PairResult> {
    let p = tape.records();
    let rows = par::map_range(p.len(), |i| {
        let mut best: Option<(u64, usize, usize)> = None;
        for j in i + 1..p.len() {
            let c = (p[i].dist2(p[j]), i, j);
            if best.map_or(true, |b| c < b) {
                best = Some(c);
            }
        }
        best
    });
    rows.into_iter().flatten().min().map(|(dist2, i, j)| PairResult { i, j, dist2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Every intersecting pair.
    General,
    /// Only horizontal–vertical pairs; zero-length segments act as horizontals.
    AxisParallel,
}

/// Whether `(s, t)` is an H–V pair under the axis policy.
pub fn is_hv(s: Segment, t: Segment) -> bool {
    let v = |q: Segment| q.is_vertical() && !q.is_point();
    s.is_horizontal() && v(t) || v(s) && t.is_horizontal()
}

/// All intersecting pairs `(i, j, kind)`, `i < j`, sorted.
pub fn bf_intersections(tape: &Tape<Segment>, policy: Policy) -> Vec<(usize, usize, Kind)> {
    let s = tape.records();
    let rows = par::map_range(s.len(), |i| {
        let mut out = Vec::new();
        for j in i + 1..s.len() {
            if policy == Policy::AxisParallel && !is_hv(s[i], s[j]) {
                continue;
            }
            if let Some(k) = pair_intersects(s[i], s[j]) {
                out.push((i, j, k));
            }
        }
        out
    });
    rows.into_iter().flatten().collect()
}

/// Union area by coordinate compression: each x-slab marks its covered
/// y-cells with a difference array.
pub fn bf_measure(tape: &Tape<Rect>) -> u64 {
    let r = tape.records();
    let mut xs: Vec<Coord> = r.iter().flat_map(|q| [q.xlo, q.xhi]).collect();
    let mut ys: Vec<Coord> = r.iter().flat_map(|q| [q.ylo, q.yhi]).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();
    if xs.len() < 2 {
        return 0;
    }
    let yi = |y: Coord| ys.binary_search(&y).unwrap();
    let slabs = par::map_range(xs.len() - 1, |k| {
        let (x0, x1) = (xs[k], xs[k + 1]);
        let mut diff = vec![0i32; ys.len()];
        for q in r.iter().filter(|q| q.xlo <= x0 && x1 <= q.xhi) {
            diff[yi(q.ylo)] += 1;
            diff[yi(q.yhi)] -= 1;
        }
        let mut cover = 0;
        let mut len: u64 = 0;
        for c in 0..ys.len() - 1 {
            cover += diff[c];
            if cover > 0 {
                len += (ys[c + 1] - ys[c]) as u64;
            }
        }
        len * (x1 - x0) as u64
    });
    slabs.into_iter().sum()
}
