//! Counting horizontal–vertical crossings under a bit budget.
//!
//! Endpoints streamed by x cut the plane into vertical strips, and streamed
//! by y into horizontal strips, each holding `ceil(s/lg n)` endpoints. A
//! crossing at `(v.x, h.y)` falls in exactly one class:
//!
//! 1. `h` has an endpoint in the vertical strip of the crossing;
//! 2. otherwise `v` has an endpoint in the horizontal strip of the crossing;
//! 3. otherwise both span the cell, and are counted by cell products.
//!
//! Zero-length segments act as horizontals. Parallel pairs never count.

use std::collections::BTreeSet;

use crate::budget::{constants, lg, BitBudget, WorkVec};
use crate::error::{usage, Result};
use crate::geom::{Coord, Segment, COORD_BITS};
use crate::grid::{StripCutter, StripGrid};
use crate::navpile::{Bound, NavPile, Order};
use crate::stretch::{run_disjoint, BatchPlan, Mode};
use crate::tape::{Tape, View};
use crate::Outcome;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseCounts {
    pub phase1: u64,
    pub phase2: u64,
    pub phase3: u64,
}

impl PhaseCounts {
    pub fn total(&self) -> u64 {
        self.phase1 + self.phase2 + self.phase3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

pub(crate) fn is_h(s: Segment) -> bool {
    s.is_horizontal()
}

/// Endpoints per strip: `ceil(s / lg n)`.
pub fn strip_capacity(n: usize, s: u64) -> usize {
    (s.div_ceil(lg(n as u64)) as usize).max(1)
}

pub(crate) fn endpoint_key(view: &View<Segment>, e: usize, axis: Axis) -> Coord {
    let p = view.get(e / 2).endpoint(e % 2);
    match axis {
        Axis::X => p.x,
        Axis::Y => p.y,
    }
}

/// Streams all endpoints along `axis`, cutting strips of `cap` endpoints.
/// `per_strip` receives each strip's index and its segments (sorted,
/// without repeats).
pub(crate) fn strip_pass<'b>(
    view: &View<Segment>,
    axis: Axis,
    s: u64,
    budget: &'b BitBudget,
    mut per_strip: impl FnMut(usize, &mut WorkVec<u32>) -> Result<()>,
) -> Result<StripGrid<'b>> {
    let n = view.len();
    let pile = NavPile::new(2 * n, |e| endpoint_key(view, e, axis), Order::Asc, Bound::NegInf, s, budget)?;
    let mut grid = StripGrid::empty(budget)?;
    let mut cutter = StripCutter::new(strip_capacity(n, s));
    let mut group = WorkVec::new(budget, lg(n as u64 + 1))?;
    let mut flush = |strip: usize, group: &mut WorkVec<u32>| -> Result<()> {
        group.sort_unstable();
        let mut w = 0;
        for r in 0..group.len() {
            if r == 0 || group[r] != group[r - 1] {
                group[w] = group[r];
                w += 1;
            }
        }
        group.truncate(w);
        per_strip(strip, group)?;
        group.clear();
        Ok(())
    };
    for e in pile {
        if let Some(sep) = cutter.offer(e.key) {
            flush(grid.m() - 1, &mut group)?;
            grid.push(sep)?;
        }
        group.push((e.item / 2) as u32)?;
    }
    flush(grid.m() - 1, &mut group)?;
    Ok(grid)
}

/// A horizontal's active x-range in a local sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Span {
    pub lo: Coord,
    pub hi: Coord,
    /// `[lo, hi)` instead of `[lo, hi]`.
    pub open: bool,
}

/// Truncation of `[x1, x2]` to the vertical strips it spans, as `[lo, hi)`.
pub fn truncate(grid: &StripGrid, x1: Coord, x2: Coord) -> Option<(Coord, Coord)> {
    let (c1, c2) = grid.span_range(x1, x2)?;
    Some((grid.bounds(c1).0?, grid.bounds(c2).1?))
}

pub(crate) enum Local<'s> {
    Count,
    Report(&'s mut dyn FnMut(u32, u32)),
}

const REMOVE_OPEN: u32 = 0;
const INSERT: u32 = 1;
const QUERY: u32 = 2;
const REMOVE_CLOSED: u32 = 3;

/// Sweeps one strip's segments by x. Horizontals are active over `span`
/// (`None` drops them); every vertical queries its closed y-range. With
/// `bichromatic`, only pairs from different view parts count.
pub(crate) fn local_sweep(
    view: &View<Segment>,
    ids: &[u32],
    span: &dyn Fn(Segment) -> Option<Span>,
    bichromatic: bool,
    budget: &BitBudget,
    mut mode: Local,
) -> Result<u64> {
    let n = view.len();
    let mut events = WorkVec::new(budget, lg(n as u64 + 1) + 2)?;
    let mut ys = WorkVec::new(budget, COORD_BITS)?;
    for &id in ids {
        let s = view.get(id as usize);
        if is_h(s) {
            if let Some(sp) = span(s) {
                events.push(id << 2 | INSERT)?;
                events.push(id << 2 | if sp.open { REMOVE_OPEN } else { REMOVE_CLOSED })?;
                ys.push(s.a.y)?;
            }
        } else {
            events.push(id << 2 | QUERY)?;
        }
    }
    let at = |ev: u32| -> Coord {
        let s = view.get((ev >> 2) as usize);
        match ev & 3 {
            QUERY => s.a.x,
            INSERT => span(s).unwrap().lo,
            _ => span(s).unwrap().hi,
        }
    };
    events.sort_unstable_by_key(|&ev| (at(ev), ev & 3, ev >> 2));
    ys.sort_unstable();
    let mut w = 0;
    for r in 0..ys.len() {
        if r == 0 || ys[r] != ys[r - 1] {
            ys[w] = ys[r];
            w += 1;
        }
    }
    ys.truncate(w);

    let parts = if bichromatic { 2 } else { 1 };
    let part = |id: u32| if bichromatic { view.part(id as usize) } else { 0 };
    let mut k = 0u64;
    match &mut mode {
        Local::Count => {
            let mut trees: Vec<Fenwick> = Vec::new();
            for _ in 0..parts {
                trees.push(Fenwick::new(ys.len(), lg(n as u64 + 1), budget)?);
            }
            for &ev in events.iter() {
                let id = ev >> 2;
                let s = view.get(id as usize);
                match ev & 3 {
                    QUERY => {
                        let lo = ys.partition_point(|&y| y < s.ymin());
                        let hi = ys.partition_point(|&y| y <= s.ymax());
                        for (p, t) in trees.iter().enumerate() {
                            if !bichromatic || p != part(id) {
                                k += t.range(lo, hi);
                            }
                        }
                    }
                    INSERT => trees[part(id)].add(ys.binary_search(&s.a.y).unwrap(), 1),
                    _ => trees[part(id)].add(ys.binary_search(&s.a.y).unwrap(), -1),
                }
            }
        }
        Local::Report(emit) => {
            let mut active: BTreeSet<(Coord, u32)> = BTreeSet::new();
            let mut charge = budget.alloc(0)?;
            let entry = COORD_BITS + lg(n as u64 + 1);
            for &ev in events.iter() {
                let id = ev >> 2;
                let s = view.get(id as usize);
                match ev & 3 {
                    QUERY => {
                        for &(_, h) in active.range((s.ymin(), 0)..=(s.ymax(), u32::MAX)) {
                            if !bichromatic || part(h) != part(id) {
                                emit(h, id);
                                k += 1;
                            }
                        }
                    }
                    INSERT => {
                        charge.grow(entry)?;
                        active.insert((s.a.y, id));
                    }
                    _ => {
                        charge.shrink(entry);
                        active.remove(&(s.a.y, id));
                    }
                }
            }
        }
    }
    Ok(k)
}

struct Fenwick<'b> {
    tree: WorkVec<'b, i64>,
}

impl<'b> Fenwick<'b> {
    fn new(len: usize, bits: u64, budget: &'b BitBudget) -> Result<Self> {
        Ok(Fenwick {
            tree: WorkVec::filled(budget, bits, len + 1, 0)?,
        })
    }

    fn add(&mut self, i: usize, d: i64) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] += d;
            i += i & i.wrapping_neg();
        }
    }

    fn prefix(&self, i: usize) -> i64 {
        let (mut i, mut acc) = (i, 0);
        while i > 0 {
            acc += self.tree[i];
            i &= i - 1;
        }
        acc
    }

    /// Sum over positions `lo..hi`.
    fn range(&self, lo: usize, hi: usize) -> u64 {
        if hi <= lo {
            return 0;
        }
        (self.prefix(hi) - self.prefix(lo)) as u64
    }
}

/// Begin/finish/interior counters of one segment orientation on a cell table.
///
/// For horizontals, `rows` are horizontal strips and `cols` vertical strips;
/// for verticals the roles swap.
pub struct CellCounters<'b> {
    pub rows: usize,
    pub cols: usize,
    pub b: WorkVec<'b, u32>,
    pub f: WorkVec<'b, u32>,
    pub t: WorkVec<'b, u32>,
}

impl<'b> CellCounters<'b> {
    pub fn new(rows: usize, cols: usize, n: usize, budget: &'b BitBudget) -> Result<Self> {
        let bits = lg(n as u64 + 1);
        Ok(CellCounters {
            rows,
            cols,
            b: WorkVec::filled(budget, bits, rows * cols, 0)?,
            f: WorkVec::filled(budget, bits, rows * cols, 0)?,
            t: WorkVec::filled(budget, bits, rows * cols, 0)?,
        })
    }

    /// A segment in `row` beginning in column `cb` and finishing in `cf`.
    pub fn add(&mut self, row: usize, cb: usize, cf: usize) {
        self.b[row * self.cols + cb] += 1;
        self.f[row * self.cols + cf] += 1;
        if cb == cf {
            self.t[row * self.cols + cb] += 1;
        }
    }

    /// Entering counts `e` of one row by the recurrence
    /// `e[0] = 0`, `e[j] = e[j-1] + b[j-1] - f[j-1]`.
    pub fn entering(&self, row: usize) -> Vec<i64> {
        let mut e = vec![0i64; self.cols];
        for j in 1..self.cols {
            let c = row * self.cols + j - 1;
            e[j] = e[j - 1] + self.b[c] as i64 - self.f[c] as i64;
        }
        e
    }

    /// Table of spanning counts `e - f + t`, row-major.
    pub fn spanning(&self, budget: &'b BitBudget, n: usize) -> Result<WorkVec<'b, u32>> {
        let mut out = WorkVec::filled(budget, lg(n as u64 + 1), self.rows * self.cols, 0u32)?;
        for r in 0..self.rows {
            let mut e = 0i64;
            for j in 0..self.cols {
                let c = r * self.cols + j;
                if j > 0 {
                    e += self.b[c - 1] as i64 - self.f[c - 1] as i64;
                }
                debug_assert!(self.t[c] <= self.b[c].min(self.f[c]));
                let span = e - self.f[c] as i64 + self.t[c] as i64;
                debug_assert!(e >= 0 && span >= 0, "negative counter at ({r},{j})");
                out[c] = span as u32;
            }
        }
        Ok(out)
    }
}

fn phase3(view: &View<Segment>, gx: &StripGrid, gy: &StripGrid, bichromatic: bool, budget: &BitBudget) -> Result<u64> {
    let n = view.len();
    let parts = if bichromatic { 2 } else { 1 };
    let part = |id: usize| if bichromatic { view.part(id) } else { 0 };
    let (mx, my) = (gx.m(), gy.m());
    let mut sh = Vec::new();
    for p in 0..parts {
        let mut c = CellCounters::new(my, mx, n, budget)?;
        for id in 0..n {
            let s = view.get(id);
            if is_h(s) && part(id) == p {
                c.add(gy.locate(s.a.y), gx.locate(s.xmin()), gx.locate(s.xmax()));
            }
        }
        sh.push(c.spanning(budget, n)?);
    }
    let mut sv = Vec::new();
    for p in 0..parts {
        let mut c = CellCounters::new(mx, my, n, budget)?;
        for id in 0..n {
            let s = view.get(id);
            if !is_h(s) && part(id) == p {
                c.add(gx.locate(s.a.x), gy.locate(s.ymin()), gy.locate(s.ymax()));
            }
        }
        sv.push(c.spanning(budget, n)?);
    }
    let mut k = 0u64;
    for r in 0..my {
        for c in 0..mx {
            for (ph, h) in sh.iter().enumerate() {
                for (pv, v) in sv.iter().enumerate() {
                    if !bichromatic || ph != pv {
                        k += h[r * mx + c] as u64 * v[c * my + r] as u64;
                    }
                }
            }
        }
    }
    Ok(k)
}

/// Runs the three phases on a view. With `bichromatic`, counts only pairs
/// drawn from the view's two different ranges.
pub fn phases_with(view: &View<Segment>, s: u64, bichromatic: bool, budget: &BitBudget) -> Result<PhaseCounts> {
    let mut pc = PhaseCounts::default();
    let closed = |s: Segment| Some(Span { lo: s.xmin(), hi: s.xmax(), open: false });
    let gx = strip_pass(view, Axis::X, s, budget, |_, ids| {
        pc.phase1 += local_sweep(view, ids, &closed, bichromatic, budget, Local::Count)?;
        Ok(())
    })?;
    let truncated = |s: Segment| truncate(&gx, s.xmin(), s.xmax()).map(|(lo, hi)| Span { lo, hi, open: true });
    let gy = strip_pass(view, Axis::Y, s, budget, |_, ids| {
        pc.phase2 += local_sweep(view, ids, &truncated, bichromatic, budget, Local::Count)?;
        Ok(())
    })?;
    pc.phase3 = phase3(view, &gx, &gy, bichromatic, budget)?;
    Ok(pc)
}

pub(crate) fn check_axis(tape: &Tape<Segment>, s: u64) -> Result<()> {
    let l = lg(tape.len() as u64);
    if s < l {
        return usage(format!("space {s} bits is below lg n = {l}"));
    }
    if let Some(i) = (0..tape.len()).find(|&i| !tape.at(i).is_axis_parallel()) {
        return usage(format!("segment {i} is not axis-parallel"));
    }
    Ok(())
}

/// Whether `s >= n^(2/3) lg n`.
pub fn is_direct(n: usize, s: u64) -> bool {
    let l = lg(n as u64) as u128;
    let s = s as u128;
    s * s * s >= (n as u128) * (n as u128) * l * l * l
}

/// Batch size `floor((s / lg s)^(3/2))`, clamped to `[1, n]`.
pub fn batch_size(n: usize, s: u64) -> usize {
    let r = (s as f64 / lg(s) as f64).powf(1.5).floor();
    (r as usize).clamp(1, n.max(1))
}

/// Direct three-phase count with the per-phase breakdown.
pub fn count_phases(tape: &Tape<Segment>, s: u64) -> Result<Outcome<PhaseCounts>> {
    check_axis(tape, s)?;
    let budget = BitBudget::for_run(constants::C_AXCOUNT, s, tape.len())?;
    let before = tape.read_count();
    let pc = phases_with(&tape.view(), s, false, &budget)?;
    Ok(Outcome::measured(pc, &budget, tape, before))
}

pub fn count_axis(tape: &Tape<Segment>, s: u64) -> Result<Outcome<u64>> {
    if is_direct(tape.len(), s) {
        return Ok(count_phases(tape, s)?.map(|p| p.total()));
    }
    stretched(tape, s)
}

pub fn stretched(tape: &Tape<Segment>, s: u64) -> Result<Outcome<u64>> {
    check_axis(tape, s)?;
    let n = tape.len();
    let budget = BitBudget::for_run(constants::C_AXCOUNT, s, n)?;
    let before = tape.read_count();
    if n == 0 {
        return Ok(Outcome::measured(0, &budget, tape, before));
    }
    let plan = BatchPlan::clamped(n, batch_size(n, s), Mode::DisjointCombine)?;
    let k = run_disjoint(
        &plan,
        |b| Ok(phases_with(&View::range(tape, b), s, false, &budget)?.total()),
        |a, b| Ok(phases_with(&View::pair(tape, a, b), s, true, &budget)?.total()),
    )?;
    Ok(Outcome::measured(k, &budget, tape, before))
}
