//! Intersections among arbitrary segments under a bit budget.
//!
//! The input is cut into batches of `r = s / lg s` segments. Each batch is
//! swept on its own and then every batch pair is swept bichromatically,
//! reporting only pairs with one segment from each batch.
//!
//! The in-core sweep is Bentley–Ottmann with exact rational events. Only
//! crossings of currently adjacent status pairs are queued, so the queue
//! never holds more than one entry per segment. Events are ordered by
//! `(x, y)`; a vertical segment sits above every other segment through the
//! current event point.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::budget::{constants, lg, BitBudget, Charge, WorkVec};
use crate::error::{usage, Result};
use crate::exact::{cmp_slope, line_intersection, side_of, RatPoint, RAT_POINT_BITS};
use crate::geom::{pair_intersects, Kind, Point, Segment};
use crate::stretch::{run_disjoint, BatchPlan, Mode};
use crate::tape::{Tape, View};
use crate::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub i: usize,
    pub j: usize,
    pub kind: Kind,
}

struct Sweep<'v, 'b> {
    view: &'v View<'v, Segment>,
    budget: &'b BitBudget,
    bichromatic: bool,
    status: WorkVec<'b, u32>,
    queue: BTreeSet<(RatPoint, u32, u32)>,
    queue_charge: Charge<'b>,
    entry_bits: u64,
}

impl Sweep<'_, '_> {
    /// Segment `i` with `a` its lexicographically smaller endpoint.
    fn seg(&self, i: u32) -> Segment {
        let (a, b) = self.view.get(i as usize).ordered();
        Segment { a, b }
    }

    fn register(&mut self, a: u32, b: u32, q: &RatPoint) -> Result<()> {
        if let Some(p) = self.crossing(a, b).filter(|p| p > q) {
            if self.queue.insert((p, a.min(b), a.max(b))) {
                self.queue_charge.grow(self.entry_bits)?;
            }
        }
        Ok(())
    }

    fn unregister(&mut self, a: u32, b: u32, q: &RatPoint) {
        // the pair may be queued at the current point itself
        if let Some(p) = self.crossing(a, b).filter(|p| p >= q) {
            if self.queue.remove(&(p, a.min(b), a.max(b))) {
                self.queue_charge.shrink(self.entry_bits);
            }
        }
    }

    /// The single meeting point of `a` and `b`, if they meet in exactly one
    /// point off a common line.
    fn crossing(&self, a: u32, b: u32) -> Option<RatPoint> {
        let (s, t) = (self.seg(a), self.seg(b));
        match pair_intersects(s, t)? {
            Kind::Overlap => None,
            _ => line_intersection(s, t),
        }
    }

    /// Status pairs `(k, k+1)` that touch the block `lo..hi`, including the
    /// two pairs across its boundaries.
    fn adjacent_pairs(&self, lo: usize, hi: usize) -> Vec<(u32, u32)> {
        let len = self.status.len() as isize;
        (lo as isize - 1..=hi as isize - 1)
            .filter(|&k| k >= 0 && k + 1 < len)
            .map(|k| (self.status[k as usize], self.status[k as usize + 1]))
            .collect()
    }

    fn is_red_blue(&self, a: u32, b: u32) -> bool {
        !self.bichromatic || self.view.part(a as usize) != self.view.part(b as usize)
    }

    fn run(&mut self, sink: &mut dyn FnMut(Crossing)) -> Result<u64> {
        let p = self.view.len();
        let ebits = lg(2 * p as u64 + 1);
        let mut ends = WorkVec::new(self.budget, ebits)?;
        for e in 0..2 * p as u32 {
            ends.push(e)?;
        }
        let end_point = |sw: &Self, e: u32| {
            let s = sw.seg(e / 2);
            if e % 2 == 0 {
                s.a
            } else {
                s.b
            }
        };
        ends.sort_unstable_by_key(|&e| (end_point(self, e), e));

        let ibits = lg(p as u64 + 1);
        let mut upper = WorkVec::new(self.budget, ibits)?;
        let mut dots = WorkVec::new(self.budget, ibits)?;
        let mut all = WorkVec::new(self.budget, ibits)?;
        let mut reinsert = WorkVec::new(self.budget, ibits)?;
        let mut next_end = 0;
        let mut k = 0u64;
        loop {
            let e_pt = ends.get(next_end).map(|&e| RatPoint::from(end_point(self, e)));
            let c_pt = self.queue.first().map(|c| c.0);
            let q = match (e_pt, c_pt) {
                (None, None) => break,
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (Some(a), Some(b)) => a.min(b),
            };
            upper.clear();
            dots.clear();
            while next_end < ends.len() && RatPoint::from(end_point(self, ends[next_end])) == q {
                let e = ends[next_end];
                let s = self.seg(e / 2);
                if e % 2 == 0 {
                    if s.is_point() {
                        dots.push(e / 2)?;
                    } else {
                        upper.push(e / 2)?;
                    }
                }
                next_end += 1;
            }

            let lo = self.status.partition_point(|&s| self.classify(s, &q) == Ordering::Less);
            let mut hi = lo;
            while hi < self.status.len() && self.classify(self.status[hi], &q) == Ordering::Equal {
                hi += 1;
            }

            all.clear();
            all.extend_from_slice(&self.status[lo..hi])?;
            all.extend_from_slice(&upper)?;
            all.extend_from_slice(&dots)?;
            k += self.report(&mut all, &q, sink);

            for (a, b) in self.adjacent_pairs(lo, hi) {
                self.unregister(a, b, &q);
            }
            reinsert.clear();
            for t in lo..hi {
                let s = self.status[t];
                if RatPoint::from(self.seg(s).b) != q {
                    reinsert.push(s)?;
                }
            }
            reinsert.extend_from_slice(&upper)?;
            reinsert.sort_unstable_by(|&a, &b| cmp_slope(self.seg(a), self.seg(b)).then(a.cmp(&b)));
            self.status.splice(lo..hi, &reinsert)?;
            for (a, b) in self.adjacent_pairs(lo, lo + reinsert.len()) {
                self.register(a, b, &q)?;
            }
            debug_assert!(self.queue.first().map_or(true, |c| c.0 > q));
        }
        Ok(k)
    }

    /// `Less` if segment `s` passes strictly below `q`, `Equal` if through it.
    fn classify(&self, s: u32, q: &RatPoint) -> Ordering {
        let seg = self.seg(s);
        if seg.is_vertical() {
            // a vertical in the status always contains the event point
            return Ordering::Equal;
        }
        side_of(seg, q).reverse()
    }

    /// Reports every pair of segments through `q`. An overlapping pair is
    /// reported only at the start of its shared part.
    fn report(&self, all: &mut [u32], q: &RatPoint, sink: &mut dyn FnMut(Crossing)) -> u64 {
        all.sort_unstable_by_key(|&i| self.view.global(i as usize));
        let mut k = 0;
        for u in 0..all.len() {
            for w in u + 1..all.len() {
                let (a, b) = (all[u], all[w]);
                if !self.is_red_blue(a, b) {
                    continue;
                }
                let (s, t) = (self.seg(a), self.seg(b));
                let Some(kind) = pair_intersects(s, t) else {
                    debug_assert!(false, "segments {a} {b} both through the event point");
                    continue;
                };
                if kind == Kind::Overlap && RatPoint::from(s.a.max(t.a)) != *q {
                    continue;
                }
                sink(Crossing {
                    i: self.view.global(a as usize),
                    j: self.view.global(b as usize),
                    kind,
                });
                k += 1;
            }
        }
        k
    }
}

/// In-core sweep over a view. With `bichromatic`, only pairs drawn from the
/// view's two different ranges are reported.
pub fn sweep(view: &View<Segment>, bichromatic: bool, budget: &BitBudget, sink: &mut dyn FnMut(Crossing)) -> Result<u64> {
    let p = view.len();
    let ibits = lg(p as u64 + 1);
    let mut sw = Sweep {
        view,
        budget,
        bichromatic,
        status: WorkVec::new(budget, ibits)?,
        queue: BTreeSet::new(),
        queue_charge: budget.alloc(0)?,
        entry_bits: RAT_POINT_BITS + 2 * ibits,
    };
    sw.run(sink)
}

/// Batch size `clamp(floor(s / lg s), 1, n)`.
pub fn batch_size(n: usize, s: u64) -> usize {
    ((s / lg(s)) as usize).clamp(1, n.max(1))
}

fn check(tape: &Tape<Segment>, s: u64) -> Result<()> {
    let l = lg(tape.len() as u64);
    if s < l {
        return usage(format!("space {s} bits is below lg n = {l}"));
    }
    Ok(())
}

/// Reports every intersecting pair exactly once; returns their number.
pub fn enumerate(tape: &Tape<Segment>, s: u64, sink: &mut dyn FnMut(Crossing)) -> Result<Outcome<u64>> {
    check(tape, s)?;
    let n = tape.len();
    let budget = BitBudget::for_run(constants::C_SEGX, s, n)?;
    let before = tape.read_count();
    if n == 0 {
        return Ok(Outcome::measured(0, &budget, tape, before));
    }
    let plan = BatchPlan::clamped(n, batch_size(n, s), Mode::DisjointCombine)?;
    let sink = RefCell::new(sink);
    let k = run_disjoint(
        &plan,
        |b| sweep(&View::range(tape, b), false, &budget, &mut *sink.borrow_mut()),
        |a, b| sweep(&View::pair(tape, a, b), true, &budget, &mut *sink.borrow_mut()),
    )?;
    Ok(Outcome::measured(k, &budget, tape, before))
}

/// Number of intersecting pairs, by enumeration into a counting sink.
pub fn count(tape: &Tape<Segment>, s: u64) -> Result<Outcome<u64>> {
    enumerate(tape, s, &mut |_| {})
}

/// A point of the crossing of `i` and `j` for display: the single common
/// point, or the start of the shared part for overlaps.
pub fn witness(s: Segment, t: Segment) -> Option<RatPoint> {
    match pair_intersects(s, t)? {
        Kind::Overlap => Some(s.ordered().0.max(t.ordered().0).into()),
        _ if s.is_point() => Some(s.a.into()),
        _ if t.is_point() => Some(t.a.into()),
        _ => line_intersection(s, t).or_else(|| {
            // collinear touch: the shared endpoint
            let shared: Point = [s.a, s.b].into_iter().find(|p| *p == t.a || *p == t.b)?;
            Some(shared.into())
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{segments, GenConfig};
    use crate::oracle::{bf_intersections, Policy};

    fn tape(v: &[(i64, i64, i64, i64)]) -> Tape<Segment> {
        Tape::segments(v.iter().map(|&(a, b, c, d)| Segment::new(a, b, c, d)).collect()).unwrap()
    }

    fn collect(t: &Tape<Segment>, s: u64) -> Vec<(usize, usize, Kind)> {
        let mut out = Vec::new();
        let k = enumerate(t, s, &mut |c| out.push((c.i, c.j, c.kind))).unwrap().value;
        assert_eq!(k as usize, out.len());
        out.sort();
        out
    }

    fn in_core(t: &Tape<Segment>) -> Vec<(usize, usize, Kind)> {
        let mut out = Vec::new();
        sweep(&t.view(), false, &BitBudget::unlimited(), &mut |c| out.push((c.i, c.j, c.kind))).unwrap();
        out.sort();
        out
    }

    #[test]
    fn examples() {
        let t = tape(&[(0, 0, 4, 4), (0, 4, 4, 0)]);
        assert_eq!(collect(&t, 8), vec![(0, 1, Kind::Proper)]);
        let t = tape(&[(0, 0, 5, 0), (0, 1, 5, 1), (0, 2, 5, 2), (0, 3, 5, 3)]);
        assert!(collect(&t, 8).is_empty());
        let mut v = Vec::new();
        for i in 0..4 {
            v.push((0, i, 10, i));
        }
        for j in 0..3 {
            v.push((2 + j, -1, 2 + j, 5));
        }
        let t = tape(&v);
        for s in [3, 8, 40, 400] {
            assert_eq!(count(&t, s).unwrap().value, 12);
        }
    }

    #[test]
    fn degenerate_cases() {
        let cases: Vec<Vec<(i64, i64, i64, i64)>> = vec![
            // shared endpoint, T-junction, collinear overlap, containment
            vec![(0, 0, 2, 2), (2, 2, 3, 0), (1, 1, 5, 1), (0, 0, 4, 0), (1, 0, 2, 0), (2, 0, 9, 0)],
            // many segments through one point, including a vertical and a point
            vec![(-2, -2, 2, 2), (-2, 2, 2, -2), (0, -3, 0, 3), (-3, 0, 3, 0), (0, 0, 0, 0), (0, 0, 5, 1)],
            // vertical collinear overlaps and a vertical chain
            vec![(1, 0, 1, 5), (1, 3, 1, 8), (1, 8, 1, 9), (0, 4, 2, 4), (1, 4, 1, 4)],
            // duplicate segments and reversed duplicates
            vec![(0, 0, 3, 3), (3, 3, 0, 0), (0, 0, 3, 3), (0, 3, 3, 0)],
            // parallel non-collinear, and crossing at a rational point
            vec![(0, 0, 3, 1), (0, 1, 3, 0), (0, 2, 3, 3), (0, 0, 0, 0), (0, 0, 0, 0)],
        ];
        for v in cases {
            let t = tape(&v);
            let want = bf_intersections(&t, Policy::General);
            assert_eq!(in_core(&t), want, "{v:?}");
            for s in [3, 5, 16, 100] {
                assert_eq!(collect(&t, s), want, "{v:?} s={s}");
            }
        }
    }

    #[test]
    fn random_against_oracle() {
        for seed in 0..30 {
            let n = 40 + (seed as usize * 7) % 120;
            let range = [6, 30, 1000, 1 << 30][seed as usize % 4];
            let cfg = GenConfig::new(n, seed).range(range).max_len(range / 2 + 1).dup_rate(0.05).degenerate(seed % 3 != 0);
            let t = Tape::segments(segments(&cfg).unwrap()).unwrap();
            let want = bf_intersections(&t, Policy::General);
            assert_eq!(in_core(&t), want, "seed {seed}");
            let l = lg(n as u64);
            for s in [l, 4 * l, n as u64, n as u64 * l] {
                assert_eq!(collect(&t, s), want, "seed {seed} s {s}");
            }
        }
    }

    #[test]
    fn bichromatic_filters_to_cross_pairs() {
        let t = tape(&[(0, 0, 4, 4), (0, 4, 4, 0), (0, 1, 4, 1), (2, -1, 2, 6)]);
        let mut out = Vec::new();
        let v = View::pair(&t, 0..2, 2..4);
        sweep(&v, true, &BitBudget::unlimited(), &mut |c| out.push((c.i, c.j))).unwrap();
        out.sort();
        assert_eq!(out, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    }

    #[test]
    fn witnesses() {
        let w = witness(Segment::new(0, 0, 3, 1), Segment::new(0, 1, 3, 0)).unwrap();
        assert_eq!(format!("{} {}", w.x, w.y), "3/2 1/2");
        let w = witness(Segment::new(0, 0, 4, 0), Segment::new(6, 0, 2, 0)).unwrap();
        assert_eq!(w.as_point(), Some(Point::new(2, 0)));
        let w = witness(Segment::new(0, 0, 4, 0), Segment::new(4, 0, 6, 0)).unwrap();
        assert_eq!(w.as_point(), Some(Point::new(4, 0)));
    }
}
