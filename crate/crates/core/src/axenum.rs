//! Enumerating horizontal–vertical crossings.
//!
//! Local crossings (classes 1 and 2 of [`crate::axcount`]) are reported by
//! per-strip sweeps. Crossings in cells spanned by both segments come from
//! a [`SweepStatus`] rebuilt once per vertical strip. Output order is phase,
//! then strip, then sweep order.

use std::cell::RefCell;

use crate::axcount::{check_axis, is_h, local_sweep, strip_pass, truncate, Axis, Local, Span};
use crate::budget::{constants, BitBudget};
use crate::error::Result;
use crate::geom::{Coord, Segment};
use crate::grid::StripGrid;
use crate::navpile::{Bound, NavPile, Order};
use crate::status::{locate_row, SweepStatus};
use crate::stretch::{run_disjoint, BatchPlan, Mode};
use crate::tape::{Tape, View};
use crate::Outcome;

/// Crossing of segments `i < j` at `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AxisCrossing {
    pub i: usize,
    pub j: usize,
    pub x: Coord,
    pub y: Coord,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    /// Crossings reported by each phase.
    pub phase: [u64; 3],
    /// Sweep statuses built in phase 3.
    pub statuses: usize,
    /// Vertical strips of the grid.
    pub strips: usize,
}

impl EnumStats {
    pub fn total(&self) -> u64 {
        self.phase.iter().sum()
    }
}

/// Clips an axis-parallel segment to the strips of `grid` it spans, along
/// its own axis. `None` if it spans none.
pub fn truncate_to_spanned(seg: Segment, grid: &StripGrid) -> Option<Segment> {
    if seg.is_horizontal() {
        let (lo, hi) = truncate(grid, seg.xmin(), seg.xmax())?;
        Some(Segment::new(lo, seg.a.y, hi, seg.a.y))
    } else {
        let (lo, hi) = truncate(grid, seg.ymin(), seg.ymax())?;
        Some(Segment::new(seg.a.x, lo, seg.a.x, hi))
    }
}

fn crossing(view: &View<Segment>, h: usize, v: usize) -> AxisCrossing {
    let (gh, gv) = (view.global(h), view.global(v));
    AxisCrossing {
        i: gh.min(gv),
        j: gh.max(gv),
        x: view.get(v).a.x,
        y: view.get(h).a.y,
    }
}

/// All three phases on a view; with `bichromatic`, only pairs from the two
/// different ranges.
pub fn enumerate_with(
    view: &View<Segment>,
    s: u64,
    bichromatic: bool,
    budget: &BitBudget,
    sink: &mut dyn FnMut(AxisCrossing),
) -> Result<EnumStats> {
    let mut st = EnumStats::default();
    let mut emit = |h: u32, v: u32| sink(crossing(view, h as usize, v as usize));
    let closed = |s: Segment| Some(Span { lo: s.xmin(), hi: s.xmax(), open: false });
    let gx = strip_pass(view, Axis::X, s, budget, |_, ids| {
        st.phase[0] += local_sweep(view, ids, &closed, bichromatic, budget, Local::Report(&mut emit))?;
        Ok(())
    })?;
    let truncated = |s: Segment| truncate(&gx, s.xmin(), s.xmax()).map(|(lo, hi)| Span { lo, hi, open: true });
    let gy = strip_pass(view, Axis::Y, s, budget, |_, ids| {
        st.phase[1] += local_sweep(view, ids, &truncated, bichromatic, budget, Local::Report(&mut emit))?;
        Ok(())
    })?;
    let n = view.len();
    let vkey = |i: usize| {
        let q = view.get(i);
        if is_h(q) {
            Coord::MAX
        } else {
            q.a.x
        }
    };
    let mut pile = NavPile::new(n, vkey, Order::Asc, Bound::NegInf, s, budget)?;
    st.strips = gx.m();
    for c in 0..gx.m() {
        let hi = gx.bounds(c).1.unwrap_or(Coord::MAX);
        let cand = std::iter::from_fn(|| match pile.peek() {
            Some(e) if e.key < hi || (c + 1 == gx.m() && e.key < Coord::MAX) => pile.next_entry().map(|e| e.item),
            _ => None,
        });
        let status = SweepStatus::build(view, &gx, &gy, c, cand, budget)?;
        st.statuses += 1;
        if status.spanning_ids().is_empty() {
            continue;
        }
        for h in 0..n {
            let q = view.get(h);
            if !is_h(q) || !gx.spans(q.xmin(), q.xmax(), c) {
                continue;
            }
            for v in status.query_cell(locate_row(&gy, q.a.y)) {
                if !bichromatic || view.part(h) != view.part(v) {
                    emit(h as u32, v as u32);
                    st.phase[2] += 1;
                }
            }
        }
    }
    Ok(st)
}

/// Whether the direct method applies: `s >= n`.
pub fn is_direct(n: usize, s: u64) -> bool {
    s >= n as u64
}

pub fn direct(tape: &Tape<Segment>, s: u64, sink: &mut dyn FnMut(AxisCrossing)) -> Result<Outcome<EnumStats>> {
    check_axis(tape, s)?;
    let budget = BitBudget::for_run(constants::C_AXENUM, s, tape.len())?;
    let before = tape.read_count();
    let st = enumerate_with(&tape.view(), s, false, &budget, sink)?;
    Ok(Outcome::measured(st, &budget, tape, before))
}

/// Batches of `r = s` segments; each batch alone, then each pair of
/// batches restricted to cross-batch crossings.
pub fn stretched(tape: &Tape<Segment>, s: u64, sink: &mut dyn FnMut(AxisCrossing)) -> Result<Outcome<u64>> {
    check_axis(tape, s)?;
    let n = tape.len();
    let budget = BitBudget::for_run(constants::C_AXENUM, s, n)?;
    let before = tape.read_count();
    if n == 0 {
        return Ok(Outcome::measured(0, &budget, tape, before));
    }
    let r = (s.min(n as u64) as usize).max(1);
    let plan = BatchPlan::clamped(n, r, Mode::DisjointCombine)?;
    let sink = RefCell::new(sink);
    let k = run_disjoint(
        &plan,
        |b| Ok(enumerate_with(&View::range(tape, b), s, false, &budget, &mut *sink.borrow_mut())?.total()),
        |a, b| Ok(enumerate_with(&View::pair(tape, a, b), s, true, &budget, &mut *sink.borrow_mut())?.total()),
    )?;
    Ok(Outcome::measured(k, &budget, tape, before))
}

pub fn enumerate_axis(tape: &Tape<Segment>, s: u64, sink: &mut dyn FnMut(AxisCrossing)) -> Result<Outcome<u64>> {
    if is_direct(tape.len(), s) {
        return Ok(direct(tape, s, sink)?.map(|st| st.total()));
    }
    stretched(tape, s, sink)
}
