//! Area of a union of axis-parallel rectangles under a bit budget.
//!
//! Both methods cut the plane into cells whose cornered rectangles fit the
//! workspace. Rectangles crossing a cell without a corner in it are folded
//! into spanning widths, and the cornered ones are simplified by collapsing
//! the spanned columns (and, for cells, rows) before a local Bentley sweep.
//! Outer strips and cells are bounded one unit beyond the input's bounding
//! box, so nothing spans them from outside.

use crate::budget::{constants, lg, BitBudget, WorkVec};
use crate::error::{usage, Result};
use crate::geom::{Coord, Rect, COORD_BITS};
use crate::grid::StripCutter;
use crate::navpile::{Bound, NavPile, Order};
use crate::tape::{Record, Tape};
use crate::Outcome;

/// One rectangle corner on a sorted corner tape: corner `corner` of
/// rectangle `rect`, at abscissa `x`. Corners are numbered as in
/// [`Rect::corner`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CornerRef {
    pub x: Coord,
    pub rect: usize,
    pub corner: usize,
}

impl Record for CornerRef {
    const FIELDS: usize = 3;
    fn from_fields(f: &[Coord]) -> Self {
        CornerRef {
            x: f[0],
            rect: f[1] as usize,
            corner: f[2] as usize,
        }
    }
    fn fields(&self) -> Vec<Coord> {
        vec![self.x, self.rect as Coord, self.corner as Coord]
    }
}

/// The x-sorted corner tape of a rectangle tape.
pub fn corner_tape(rects: &Tape<Rect>) -> Tape<CornerRef> {
    let mut v: Vec<CornerRef> = rects
        .records()
        .iter()
        .enumerate()
        .flat_map(|(rect, r)| (0..4).map(move |corner| CornerRef { x: r.corner(corner).x, rect, corner }))
        .collect();
    v.sort_unstable();
    Tape::from_vec_unchecked(v)
}

/// Running union of spanning intervals during a scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SimplifyState {
    /// Open spanning intervals.
    pub z: u32,
    /// Total width of the completed runs.
    pub w: u64,
    /// Where the current run opened.
    pub x1: Coord,
    /// Where the last run closed.
    pub x2: Coord,
}

impl SimplifyState {
    /// A scan starting at `at` with `z` intervals already open.
    pub fn open_at(at: Coord, z: u32) -> Self {
        SimplifyState { z, w: 0, x1: at, x2: at }
    }

    pub fn left(&mut self, x: Coord) {
        if self.z == 0 {
            self.x1 = x;
        }
        self.z += 1;
    }

    pub fn right(&mut self, x: Coord) {
        debug_assert!(self.z > 0, "right boundary without a left");
        self.z -= 1;
        if self.z == 0 {
            self.x2 = x;
            self.w += (x - self.x1) as u64;
        }
    }

    /// Width of the union up to `x`, for `x` at or after the last event.
    pub fn covered(&self, x: Coord) -> u64 {
        self.w + if self.z > 0 { (x - self.x1) as u64 } else { 0 }
    }

    /// Position of `x` once the covered columns are collapsed.
    pub fn relocate(&self, x: Coord) -> Coord {
        (if self.z > 0 { self.x1 } else { x }) - self.w as Coord
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanEvent {
    Left(Coord),
    Right(Coord),
    Corner(Coord),
}

/// Runs a scan over x-ordered events; returns the spanning width and the
/// relocated corners in input order.
pub fn simplify_scan(events: &[ScanEvent]) -> (u64, Vec<Coord>) {
    let mut st = SimplifyState::default();
    let mut out = Vec::new();
    for &e in events {
        match e {
            ScanEvent::Left(x) => st.left(x),
            ScanEvent::Right(x) => st.right(x),
            ScanEvent::Corner(x) => out.push(st.relocate(x)),
        }
    }
    assert_eq!(st.z, 0, "unbalanced spanning boundaries");
    (st.w, out)
}

/// Union area by an x-sweep over a coverage-count segment tree on the
/// compressed y-coordinates. Empty rectangles are ignored.
pub fn bentley_measure(rects: &[Rect], budget: &BitBudget) -> Result<u64> {
    let idx_bits = lg(rects.len() as u64 + 1);
    let mut ys = WorkVec::new(budget, COORD_BITS)?;
    let live = |r: &Rect| r.xlo < r.xhi && r.ylo < r.yhi;
    for r in rects.iter().filter(|r| live(r)) {
        ys.push(r.ylo)?;
        ys.push(r.yhi)?;
    }
    ys.sort_unstable();
    let mut w = 0;
    for r in 0..ys.len() {
        if r == 0 || ys[r] != ys[r - 1] {
            ys[w] = ys[r];
            w += 1;
        }
    }
    ys.truncate(w);
    if ys.len() < 2 {
        return Ok(0);
    }
    let mut events = WorkVec::new(budget, COORD_BITS + idx_bits + 1)?;
    for (i, r) in rects.iter().enumerate().filter(|(_, r)| live(r)) {
        events.push((r.xlo, i as u32, true))?;
        events.push((r.xhi, i as u32, false))?;
    }
    events.sort_unstable_by_key(|e| e.0);
    let mut tree = CoverTree::new(&ys, idx_bits, budget)?;
    let mut area = 0u64;
    let mut prev = events[0].0;
    for &(x, i, open) in events.iter() {
        area += tree.covered() * (x - prev) as u64;
        prev = x;
        let r = rects[i as usize];
        let (lo, hi) = (ys.binary_search(&r.ylo).unwrap(), ys.binary_search(&r.yhi).unwrap());
        tree.update(1, 0, ys.len() - 1, lo, hi, if open { 1 } else { -1 });
    }
    Ok(area)
}

struct CoverTree<'y, 'b> {
    ys: &'y [Coord],
    count: WorkVec<'b, i32>,
    len: WorkVec<'b, u64>,
}

impl<'y, 'b> CoverTree<'y, 'b> {
    fn new(ys: &'y [Coord], idx_bits: u64, budget: &'b BitBudget) -> Result<Self> {
        let nodes = 4 * ys.len();
        Ok(CoverTree {
            ys,
            count: WorkVec::filled(budget, idx_bits, nodes, 0)?,
            len: WorkVec::filled(budget, COORD_BITS + 1, nodes, 0)?,
        })
    }

    fn covered(&self) -> u64 {
        self.len[1]
    }

    /// Adds `d` to elementary intervals `lo..hi` under `node`, which covers
    /// `l..r`.
    fn update(&mut self, node: usize, l: usize, r: usize, lo: usize, hi: usize, d: i32) {
        if hi <= l || r <= lo {
            return;
        }
        if lo <= l && r <= hi {
            self.count[node] += d;
        } else {
            let mid = (l + r) / 2;
            self.update(2 * node, l, mid, lo, hi, d);
            self.update(2 * node + 1, mid, r, lo, hi, d);
        }
        self.len[node] = if self.count[node] > 0 {
            (self.ys[r] - self.ys[l]) as u64
        } else if r - l == 1 {
            0
        } else {
            self.len[2 * node] + self.len[2 * node + 1]
        };
    }
}

/// Bounding box, open one unit to the right and top.
#[derive(Clone, Copy, Debug)]
struct Frame {
    x0: Coord,
    x1: Coord,
    y0: Coord,
    y1: Coord,
}

fn frame(tape: &Tape<Rect>) -> Frame {
    let mut f = Frame {
        x0: Coord::MAX,
        x1: Coord::MIN,
        y0: Coord::MAX,
        y1: Coord::MIN,
    };
    for i in 0..tape.len() {
        let r = tape.at(i);
        f.x0 = f.x0.min(r.xlo);
        f.x1 = f.x1.max(r.xhi + 1);
        f.y0 = f.y0.min(r.ylo);
        f.y1 = f.y1.max(r.yhi + 1);
    }
    f
}

const UNSET: Coord = Coord::MIN;

/// A cornered rectangle of the current strip or cell, with relocated bounds.
#[derive(Clone, Copy, Debug)]
struct Local {
    id: u32,
    x: [Coord; 2],
    y: [Coord; 2],
}

struct LocalSet<'b> {
    v: WorkVec<'b, Local>,
}

impl<'b> LocalSet<'b> {
    fn new(n: usize, budget: &'b BitBudget) -> Result<Self> {
        Ok(LocalSet {
            v: WorkVec::new(budget, lg(n as u64 + 1) + 4 * COORD_BITS)?,
        })
    }

    /// The entry of `id`, created by `init` on first sight.
    fn entry(&mut self, id: usize, init: impl FnOnce() -> Local) -> Result<&mut Local> {
        let at = match self.v.binary_search_by_key(&(id as u32), |l| l.id) {
            Ok(at) => at,
            Err(at) => {
                self.v.insert(at, init())?;
                at
            }
        };
        Ok(&mut self.v[at])
    }

    fn find(&mut self, id: usize) -> Option<&mut Local> {
        let at = self.v.binary_search_by_key(&(id as u32), |l| l.id).ok()?;
        Some(&mut self.v[at])
    }

    /// Bentley measure of the relocated rectangles; empties the set.
    fn measure(&mut self, budget: &BitBudget) -> Result<u64> {
        let mut rects = WorkVec::new(budget, 4 * COORD_BITS)?;
        for l in self.v.iter() {
            debug_assert!(!l.x.contains(&UNSET) && !l.y.contains(&UNSET));
            rects.push(Rect::new(l.x[0], l.y[0], l.x[1], l.y[1]))?;
        }
        self.v.clear();
        bentley_measure(&rects, budget)
    }
}

fn corner_y(tape: &Tape<Rect>, e: usize) -> Coord {
    tape.at(e / 4).corner(e % 4).y
}

fn corner_x(tape: &Tape<Rect>, e: usize) -> Coord {
    tape.at(e / 4).corner(e % 4).x
}

/// Rectangle covers the closed band `[lo, hi]` along y.
fn spans_y(r: Rect, lo: Coord, hi: Coord) -> bool {
    r.ylo <= lo && r.yhi >= hi
}

fn check(tape: &Tape<Rect>, s: u64) -> Result<()> {
    let l = lg(tape.len() as u64);
    if s < l {
        return usage(format!("space {s} bits is below lg n = {l}"));
    }
    Ok(())
}

/// Corners per strip or cell: `ceil(s / lg n)`.
pub fn cell_capacity(n: usize, s: u64) -> usize {
    (s.div_ceil(lg(n as u64)) as usize).max(1)
}

/// Streams all corners by y and calls `strip(y0, y1)` for each horizontal
/// strip of `cap` corners; the last closes at `top`.
fn for_each_strip(
    tape: &Tape<Rect>,
    cap: usize,
    s: u64,
    bottom: Coord,
    top: Coord,
    budget: &BitBudget,
    mut strip: impl FnMut(Coord, Coord) -> Result<u64>,
) -> Result<u64> {
    let pile = NavPile::new(4 * tape.len(), |e| corner_y(tape, e), Order::Asc, Bound::NegInf, s, budget)?;
    let mut cutter = StripCutter::new(cap);
    let (mut y0, mut total) = (bottom, 0u64);
    for e in pile {
        if let Some(sep) = cutter.offer(e.key) {
            total += strip(y0, sep)?;
            y0 = sep;
        }
    }
    Ok(total + strip(y0, top)?)
}

/// Local measure and spanning width of the strip `[y0, y1)` from one scan
/// of the sorted corner tape.
pub fn strip_parts(
    rects: &Tape<Rect>,
    corners: &Tape<CornerRef>,
    y0: Coord,
    y1: Coord,
    check_order: bool,
    budget: &BitBudget,
) -> Result<(u64, u64)> {
    let n = rects.len();
    let mut st = SimplifyState::default();
    let mut loc = LocalSet::new(n, budget)?;
    let mut last = Coord::MIN;
    for k in 0..corners.len() {
        let c = corners.at(k);
        if c.rect >= n || c.corner >= 4 {
            return usage(format!("corner record {k} names no rectangle corner"));
        }
        let r = rects.at(c.rect);
        let p = r.corner(c.corner);
        if check_order {
            if c.x < last || c.x != p.x {
                return usage(format!("corner tape is not x-sorted at record {k}"));
            }
            last = c.x;
        }
        if spans_y(r, y0, y1) {
            match c.corner {
                0 => st.left(p.x),
                1 => st.right(p.x),
                _ => {}
            }
        } else if (y0..y1).contains(&p.y) {
            let f = st.relocate(p.x);
            let l = loc.entry(c.rect, || Local {
                id: c.rect as u32,
                x: [UNSET; 2],
                y: [r.ylo.max(y0), r.yhi.min(y1)],
            })?;
            l.x[c.corner & 1] = f;
        }
    }
    debug_assert_eq!(st.z, 0);
    Ok((loc.measure(budget)?, st.w))
}

/// Measure from rectangles plus their x-sorted corner tape.
pub fn measure_sorted(rects: &Tape<Rect>, corners: &Tape<CornerRef>, s: u64) -> Result<Outcome<u64>> {
    check(rects, s)?;
    let n = rects.len();
    if corners.len() != 4 * n {
        return usage(format!("corner tape holds {} records for {n} rectangles", corners.len()));
    }
    let budget = BitBudget::for_run(constants::C_KLEE, s, n)?;
    let before = rects.read_count() + corners.read_count();
    let mut area = 0;
    if n > 0 {
        let f = frame(rects);
        let mut first = true;
        area = for_each_strip(rects, cell_capacity(n, s), s, f.y0, f.y1, &budget, |y0, y1| {
            let (local, w) = strip_parts(rects, corners, y0, y1, first, &budget)?;
            first = false;
            Ok(local + w * (y1 - y0) as u64)
        })?;
    }
    Ok(Outcome {
        value: area,
        peak_bits: budget.peak_bits(),
        capacity_bits: budget.capacity_bits(),
        tape_reads: rects.read_count() + corners.read_count() - before,
    })
}

/// Number of horizontal strips: `ceil(sqrt((n/s) lg n))`.
pub fn strip_count(n: usize, s: u64) -> usize {
    ((n as f64 / s as f64 * lg(n as u64) as f64).sqrt().ceil() as usize).max(1)
}

/// Measure by multi-scanning: horizontal strips, cut into cells along an
/// x-sweep, each finished by a y-sweep inside the strip.
pub fn measure_unsorted(tape: &Tape<Rect>, s: u64) -> Result<Outcome<u64>> {
    check(tape, s)?;
    let n = tape.len();
    let budget = BitBudget::for_run(constants::C_KLEE, s, n)?;
    let before = tape.read_count();
    let mut area = 0;
    if n > 0 {
        let f = frame(tape);
        let cap = (4 * n).div_ceil(strip_count(n, s));
        area = for_each_strip(tape, cap, s, f.y0, f.y1, &budget, |y0, y1| scan_strip(tape, f, y0, y1, s, &budget))?;
    }
    Ok(Outcome::measured(area, &budget, tape, before))
}

/// One cell's bounds along x, with the covered width up to `x0`.
#[derive(Clone, Copy)]
struct CellStart {
    x0: Coord,
    g0: u64,
}

fn scan_strip(tape: &Tape<Rect>, f: Frame, y0: Coord, y1: Coord, s: u64, budget: &BitBudget) -> Result<u64> {
    let n = tape.len();
    let ell = cell_capacity(n, s);
    let xs = NavPile::new(4 * n, |e| corner_x(tape, e), Order::Asc, Bound::NegInf, s, budget)?;
    let mut st = SimplifyState::default();
    let mut loc = LocalSet::new(n, budget)?;
    let mut cell = CellStart { x0: f.x0, g0: 0 };
    let (mut count, mut last) = (0usize, None);
    let mut total = 0;
    for e in xs {
        let (id, c) = (e.item / 4, e.item % 4);
        let r = tape.at(id);
        let p = r.corner(c);
        if spans_y(r, y0, y1) {
            match c {
                0 => st.left(p.x),
                1 => st.right(p.x),
                _ => {}
            }
            continue;
        }
        if !(y0..y1).contains(&p.y) {
            continue;
        }
        if count >= ell && last != Some(p.x) {
            total += close_cell(tape, &mut loc, &st, cell, p.x, y0, y1, s, budget)?;
            cell = CellStart { x0: p.x, g0: st.covered(p.x) };
            count = 0;
        }
        count += 1;
        last = Some(p.x);
        let fx = st.relocate(p.x);
        let l = loc.entry(id, || Local {
            id: id as u32,
            x: [if r.xlo < cell.x0 { cell.x0 - cell.g0 as Coord } else { UNSET }, UNSET],
            y: [if r.ylo < y0 { y0 } else { UNSET }, UNSET],
        })?;
        l.x[c & 1] = fx;
    }
    debug_assert_eq!(st.z, 0);
    Ok(total + close_cell(tape, &mut loc, &st, cell, f.x1, y0, y1, s, budget)?)
}

/// Finishes the cell `[cell.x0, x1) x [y0, y1)`: the y-sweep over the
/// strip's corners gives the height covered by rectangles crossing the
/// cell horizontally and relocates the stored rows.
#[allow(clippy::too_many_arguments)]
fn close_cell(
    tape: &Tape<Rect>,
    loc: &mut LocalSet,
    st: &SimplifyState,
    cell: CellStart,
    x1: Coord,
    y0: Coord,
    y1: Coord,
    s: u64,
    budget: &BitBudget,
) -> Result<u64> {
    let x0 = cell.x0;
    let g1 = st.covered(x1);
    let wh = g1 - cell.g0;
    for l in loc.v.iter_mut() {
        if l.x[1] == UNSET {
            l.x[1] = x1 - g1 as Coord;
        }
    }
    let crosses = |r: Rect| r.xlo <= x0 && r.xhi >= x1;
    let ys = || NavPile::new(4 * tape.len(), |e| corner_y(tape, e), Order::Asc, Bound::Key(y0 - 1), s, budget);
    let mut z0 = 0;
    for e in ys()? {
        if e.key >= y1 {
            break;
        }
        let r = tape.at(e.item / 4);
        if e.item % 4 == 2 && r.ylo < y0 && crosses(r) {
            z0 += 1;
        }
    }
    let mut sv = SimplifyState::open_at(y0, z0);
    for e in ys()? {
        if e.key >= y1 {
            break;
        }
        let (id, c) = (e.item / 4, e.item % 4);
        let r = tape.at(id);
        if crosses(r) {
            match c {
                0 => sv.left(e.key),
                2 => sv.right(e.key),
                _ => {}
            }
        }
        if let Some(l) = loc.find(id) {
            l.y[c / 2] = sv.relocate(e.key);
        }
    }
    let wv = sv.covered(y1);
    for l in loc.v.iter_mut() {
        if l.y[1] == UNSET {
            l.y[1] = y1 - wv as Coord;
        }
    }
    let (w, h) = ((x1 - x0) as u64, (y1 - y0) as u64);
    let total = loc.measure(budget)? + wh * h + wv * w - wh * wv;
    debug_assert!(total <= w * h, "cell total {total} above cell area {}", w * h);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{rects, GenConfig};
    use crate::oracle::bf_measure;

    fn tape(v: &[(i64, i64, i64, i64)]) -> Tape<Rect> {
        Tape::rects(v.iter().map(|&(a, b, c, d)| Rect::new(a, b, c, d)).collect()).unwrap()
    }

    fn both(t: &Tape<Rect>, s: u64) -> (u64, u64) {
        let c = corner_tape(t);
        (measure_sorted(t, &c, s).unwrap().value, measure_unsorted(t, s).unwrap().value)
    }

    #[test]
    fn bentley_examples() {
        let b = BitBudget::unlimited();
        assert_eq!(bentley_measure(&[Rect::new(0, 0, 3, 4)], &b).unwrap(), 12);
        assert_eq!(bentley_measure(&[Rect::new(0, 0, 1, 1), Rect::new(2, 2, 3, 3)], &b).unwrap(), 2);
        assert_eq!(bentley_measure(&[Rect::new(0, 0, 1, 1), Rect::new(0, 0, 1, 1)], &b).unwrap(), 1);
        assert_eq!(bentley_measure(&[Rect::new(0, 0, 2, 2), Rect::new(1, 1, 3, 3)], &b).unwrap(), 7);
        for seed in 0..5 {
            let t = Tape::rects(rects(&GenConfig::new(200, seed).range(300).max_len(80)).unwrap()).unwrap();
            assert_eq!(bentley_measure(t.records(), &b).unwrap(), bf_measure(&t));
        }
    }

    #[test]
    fn simplify_examples() {
        use ScanEvent::*;
        assert_eq!(simplify_scan(&[Corner(1), Corner(4)]), (0, vec![1, 4]));
        assert_eq!(simplify_scan(&[Left(2), Right(5), Corner(7)]), (3, vec![4]));
        assert_eq!(simplify_scan(&[Left(2), Corner(3), Right(5)]), (3, vec![2]));
        // overlapping runs merge
        assert_eq!(simplify_scan(&[Left(0), Left(1), Right(2), Right(4), Corner(9)]), (4, vec![5]));
    }

    #[test]
    fn examples() {
        let t = tape(&[(0, 0, 3, 4)]);
        assert_eq!(both(&t, 1), (12, 12));
        let t = tape(&[(0, 0, 10, 10), (2, 2, 5, 5)]);
        assert_eq!(both(&t, 1), (100, 100));
        // a tall rectangle crossing many strips and a wide one crossing many cells
        let mut v = vec![(50, -100, 60, 300), (-100, 50, 300, 60)];
        for i in 0..20 {
            v.push((i * 10, i * 7, i * 10 + 5, i * 7 + 3));
        }
        let t = tape(&v);
        let want = bf_measure(&t);
        for s in [5, 8, 20, 100] {
            assert_eq!(both(&t, s), (want, want), "s={s}");
        }
    }

    #[test]
    fn unsorted_corner_tape_rejected() {
        let t = tape(&[(0, 0, 3, 4), (1, 1, 2, 2)]);
        let mut c: Vec<CornerRef> = corner_tape(&t).records().to_vec();
        c.swap(0, 7);
        let c = Tape::from_vec_unchecked(c);
        assert!(measure_sorted(&t, &c, 4).is_err());
    }

    #[test]
    fn conservation_per_strip() {
        let b = BitBudget::unlimited();
        for seed in 0..5 {
            let t = Tape::rects(rects(&GenConfig::new(60, seed).range(200).max_len(150)).unwrap()).unwrap();
            let c = corner_tape(&t);
            for (y0, y1) in [(-50, 0), (0, 30), (10, 11), (-200, 200)] {
                let (local, w) = strip_parts(&t, &c, y0, y1, true, &b).unwrap();
                let clipped: Vec<Rect> = t
                    .records()
                    .iter()
                    .filter(|r| r.ylo < y1 && r.yhi > y0)
                    .map(|r| Rect::new(r.xlo, r.ylo.max(y0), r.xhi, r.yhi.min(y1)))
                    .collect();
                assert_eq!(local + w * (y1 - y0) as u64, bentley_measure(&clipped, &b).unwrap());
            }
        }
    }

    #[test]
    fn random_against_oracle() {
        for seed in 0..30u64 {
            let n = 1 + (seed as usize * 23) % 150;
            let range = [6, 40, 1000, 1 << 20][seed as usize % 4];
            let cfg = GenConfig::new(n, seed).range(range).max_len(range / 2 + 1).dup_rate(0.1).degenerate(seed % 3 == 0);
            let t = Tape::rects(rects(&cfg).unwrap()).unwrap();
            let want = bf_measure(&t);
            let l = lg(n as u64);
            for s in [l, 3 * l, n as u64, n as u64 * l] {
                assert_eq!(both(&t, s), (want, want), "seed {seed} n {n} s {s}");
            }
        }
    }
}
