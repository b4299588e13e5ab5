//! Read-only, metered input.
//!
//! The tape's own storage models the input medium and is never charged to a
//! workspace budget. All reads by algorithms go through [`Tape::at`] or
//! [`View::get`], which bump an atomic read counter.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{usage, Error, Result};
use crate::geom::{Coord, Point, Rect, Segment, COORD_LIMIT};

/// A record type that can live on a tape.
pub trait Record: Copy + Send + Sync + std::fmt::Debug {
    /// Number of integers per text line.
    const FIELDS: usize;
    fn from_fields(f: &[Coord]) -> Self;
    fn fields(&self) -> Vec<Coord>;
}

impl Record for Point {
    const FIELDS: usize = 2;
    fn from_fields(f: &[Coord]) -> Self {
        Point::new(f[0], f[1])
    }
    fn fields(&self) -> Vec<Coord> {
        vec![self.x, self.y]
    }
}

impl Record for Segment {
    const FIELDS: usize = 4;
    fn from_fields(f: &[Coord]) -> Self {
        Segment::new(f[0], f[1], f[2], f[3])
    }
    fn fields(&self) -> Vec<Coord> {
        vec![self.a.x, self.a.y, self.b.x, self.b.y]
    }
}

impl Record for Rect {
    const FIELDS: usize = 4;
    fn from_fields(f: &[Coord]) -> Self {
        Rect::new(f[0], f[1], f[2], f[3])
    }
    fn fields(&self) -> Vec<Coord> {
        vec![self.xlo, self.ylo, self.xhi, self.yhi]
    }
}

#[derive(Debug)]
pub struct Tape<R> {
    records: Box<[R]>,
    reads: AtomicU64,
}

impl<R: Record> Clone for Tape<R> {
    /// A clone starts with a fresh read counter.
    fn clone(&self) -> Self {
        Tape {
            records: self.records.clone(),
            reads: AtomicU64::new(0),
        }
    }
}

fn check_coords(fields: &[Coord], i: usize) -> Result<()> {
    if let Some(c) = fields.iter().find(|c| c.abs() > COORD_LIMIT) {
        return usage(format!("record {i}: coordinate {c} outside [-2^30, 2^30]"));
    }
    Ok(())
}

impl<R: Record> Tape<R> {
    pub(crate) fn from_vec_unchecked(records: Vec<R>) -> Self {
        Tape {
            records: records.into_boxed_slice(),
            reads: AtomicU64::new(0),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Checked read.
    pub fn get(&self, i: usize) -> Result<R> {
        if i >= self.records.len() {
            return usage(format!("index {i} out of range for tape of {}", self.len()));
        }
        Ok(self.at(i))
    }

    /// Read for in-range indices produced by the algorithms themselves.
    #[inline]
    pub fn at(&self, i: usize) -> R {
        self.reads.fetch_add(1, Ordering::Relaxed);
        self.records[i]
    }

    pub fn read_count(&self) -> u64 {
        self.reads.load(Ordering::Relaxed)
    }

    /// Unmetered access for oracles, serialization and test setup.
    pub fn records(&self) -> &[R] {
        &self.records
    }

    pub fn view(&self) -> View<'_, R> {
        View::whole(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in self.records.iter() {
            let f: Vec<String> = r.fields().iter().map(|c| c.to_string()).collect();
            out.push_str(&f.join(" "));
            out.push('\n');
        }
        out
    }
}

impl Tape<Point> {
    pub fn points(records: Vec<Point>) -> Result<Self> {
        for (i, p) in records.iter().enumerate() {
            check_coords(&p.fields(), i)?;
        }
        Ok(Tape::from_vec_unchecked(records))
    }
}

impl Tape<Segment> {
    pub fn segments(records: Vec<Segment>) -> Result<Self> {
        for (i, s) in records.iter().enumerate() {
            check_coords(&s.fields(), i)?;
        }
        Ok(Tape::from_vec_unchecked(records))
    }

    /// Horizontal and vertical segments only, with no two parallel segments
    /// on a common line sharing more than an endpoint.
    pub fn axis_segments(records: Vec<Segment>) -> Result<Self> {
        for (i, s) in records.iter().enumerate() {
            check_coords(&s.fields(), i)?;
            if !s.is_axis_parallel() {
                return usage(format!("record {i}: segment {s:?} is not axis-parallel"));
            }
        }
        check_parallel_overlaps(&records)?;
        Ok(Tape::from_vec_unchecked(records))
    }

    pub fn is_axis_parallel(&self) -> bool {
        self.records.iter().all(|s| s.is_axis_parallel())
    }
}

/// Rejects collinear horizontal (or vertical) pairs sharing positive length,
/// and zero-length segments strictly inside a parallel segment.
fn check_parallel_overlaps(records: &[Segment]) -> Result<()> {
    // (line, lo, hi, index) per orientation
    let mut h: Vec<(Coord, Coord, Coord, usize)> = Vec::new();
    let mut v: Vec<(Coord, Coord, Coord, usize)> = Vec::new();
    for (i, s) in records.iter().enumerate() {
        if s.is_horizontal() {
            h.push((s.a.y, s.xmin(), s.xmax(), i));
        } else {
            v.push((s.a.x, s.ymin(), s.ymax(), i));
        }
    }
    for list in [&mut h, &mut v] {
        list.sort_unstable();
        let mut k = 0;
        while k < list.len() {
            let line = list[k].0;
            let (mut reach, mut owner) = (list[k].2, list[k].3);
            let mut j = k + 1;
            while j < list.len() && list[j].0 == line {
                let (_, lo, hi, idx) = list[j];
                // lo < reach means a shared stretch, or a point strictly inside.
                if lo < reach {
                    return usage(format!("segments {owner} and {idx} overlap on a common line"));
                }
                if hi > reach {
                    reach = hi;
                    owner = idx;
                }
                j += 1;
            }
            k = j;
        }
    }
    Ok(())
}

impl Tape<Rect> {
    pub fn rects(records: Vec<Rect>) -> Result<Self> {
        for (i, r) in records.iter().enumerate() {
            check_coords(&r.fields(), i)?;
            if r.xlo >= r.xhi || r.ylo >= r.yhi {
                return usage(format!("record {i}: rectangle {r:?} needs xlo < xhi and ylo < yhi"));
            }
        }
        Ok(Tape::from_vec_unchecked(records))
    }
}

/// Parses the line-oriented text format: one record per line, integers
/// separated by single spaces, `#` starts a comment line. Blank lines are skipped.
pub fn parse_records<R: Record>(text: &str) -> Result<Vec<R>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let mut fields = Vec::with_capacity(R::FIELDS);
        for tok in line.split(' ') {
            let v: Coord = tok.parse().map_err(|_| Error::Parse {
                line: ln + 1,
                msg: format!("bad integer {tok:?}"),
            })?;
            if v.abs() > COORD_LIMIT {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("coordinate {v} outside [-2^30, 2^30]"),
                });
            }
            fields.push(v);
        }
        if fields.len() != R::FIELDS {
            return Err(Error::Parse {
                line: ln + 1,
                msg: format!("expected {} fields, got {}", R::FIELDS, fields.len()),
            });
        }
        out.push(R::from_fields(&fields));
    }
    Ok(out)
}

/// A window onto a tape made of at most two contiguous index ranges.
///
/// Sub-instances formed by batch pairs are views, so nothing is copied.
/// Local index `i` maps to the first range, then the second.
#[derive(Clone, Debug)]
pub struct View<'a, R> {
    tape: &'a Tape<R>,
    first: Range<usize>,
    second: Range<usize>,
}

impl<'a, R: Record> View<'a, R> {
    pub fn whole(tape: &'a Tape<R>) -> Self {
        View {
            tape,
            first: 0..tape.len(),
            second: 0..0,
        }
    }

    pub fn range(tape: &'a Tape<R>, r: Range<usize>) -> Self {
        assert!(r.end <= tape.len());
        View {
            tape,
            first: r,
            second: 0..0,
        }
    }

    pub fn pair(tape: &'a Tape<R>, a: Range<usize>, b: Range<usize>) -> Self {
        assert!(a.end <= tape.len() && b.end <= tape.len());
        View {
            tape,
            first: a,
            second: b,
        }
    }

    pub fn len(&self) -> usize {
        self.first.len() + self.second.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tape(&self) -> &'a Tape<R> {
        self.tape
    }

    #[inline]
    pub fn global(&self, i: usize) -> usize {
        let n1 = self.first.len();
        if i < n1 {
            self.first.start + i
        } else {
            self.second.start + (i - n1)
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> R {
        self.tape.at(self.global(i))
    }

    /// Which of the two ranges local index `i` falls in.
    pub fn part(&self, i: usize) -> usize {
        usize::from(i >= self.first.len())
    }
}
