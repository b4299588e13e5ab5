//! Seeded instance generators.
//!
//! A seed fully determines the instance. `dup_rate` is the probability that a
//! record repeats an earlier one (for axis segments, which may not overlap,
//! it reuses an earlier line coordinate instead). `degenerate` mixes in
//! touching, collinear and shared-coordinate cases.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{usage, Result};
use crate::geom::{Coord, Point, Rect, Segment, COORD_LIMIT};

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub n: usize,
    pub seed: u64,
    /// Coordinates are drawn from `[-range, range]`.
    pub range: Coord,
    /// Cap on segment extent and rectangle side; `None` means `range`.
    pub max_len: Option<Coord>,
    pub dup_rate: f64,
    pub degenerate: bool,
}

impl GenConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        GenConfig {
            n,
            seed,
            range: 1 << 20,
            max_len: None,
            dup_rate: 0.0,
            degenerate: false,
        }
    }

    pub fn range(mut self, range: Coord) -> Self {
        self.range = range;
        self
    }

    pub fn max_len(mut self, len: Coord) -> Self {
        self.max_len = Some(len);
        self
    }

    pub fn dup_rate(mut self, p: f64) -> Self {
        self.dup_rate = p;
        self
    }

    pub fn degenerate(mut self, on: bool) -> Self {
        self.degenerate = on;
        self
    }

    fn check(&self) -> Result<()> {
        if !(1..=COORD_LIMIT).contains(&self.range) {
            return usage(format!("range {} outside [1, 2^30]", self.range));
        }
        if !(0.0..=1.0).contains(&self.dup_rate) {
            return usage(format!("dup rate {} outside [0, 1]", self.dup_rate));
        }
        if self.max_len.is_some_and(|l| l < 1) {
            return usage("max length must be positive");
        }
        Ok(())
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn len(&self) -> Coord {
        self.max_len.unwrap_or(self.range).min(2 * self.range)
    }
}

struct Draw<'a> {
    rng: ChaCha8Rng,
    cfg: &'a GenConfig,
}

impl Draw<'_> {
    fn coord(&mut self) -> Coord {
        self.rng.gen_range(-self.cfg.range..=self.cfg.range)
    }

    fn clamp(&self, c: Coord) -> Coord {
        c.clamp(-self.cfg.range, self.cfg.range)
    }

    fn near(&mut self, c: Coord) -> Coord {
        let l = self.cfg.len();
        let d = self.rng.gen_range(-l..=l);
        self.clamp(c + d)
    }

    fn chance(&mut self, p: f64) -> bool {
        p > 0.0 && self.rng.gen_bool(p)
    }

    fn pick<T: Copy>(&mut self, v: &[T]) -> Option<T> {
        (!v.is_empty()).then(|| v[self.rng.gen_range(0..v.len())])
    }
}

pub fn points(cfg: &GenConfig) -> Result<Vec<Point>> {
    cfg.check()?;
    let mut d = Draw { rng: cfg.rng(1), cfg };
    let mut out: Vec<Point> = Vec::with_capacity(cfg.n);
    while out.len() < cfg.n {
        if d.chance(cfg.dup_rate) {
            if let Some(p) = d.pick(&out) {
                out.push(p);
                continue;
            }
        }
        let mut p = Point::new(d.coord(), d.coord());
        if cfg.degenerate && d.chance(0.3) {
            if let Some(q) = d.pick(&out) {
                if d.rng.gen_bool(0.5) {
                    p.x = q.x;
                } else {
                    p.y = q.y;
                }
            }
        }
        out.push(p);
    }
    Ok(out)
}

fn gcd(a: Coord, b: Coord) -> Coord {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A lattice point on `s`, with parameter drawn from `lo..=hi` in units of
/// the primitive step (`0` is `s.a`, the step count `g` is `s.b`).
fn lattice_on(d: &mut Draw, s: Segment, lo_frac: f64, hi_frac: f64) -> Point {
    let (dx, dy) = (s.b.x - s.a.x, s.b.y - s.a.y);
    let g = gcd(dx, dy).max(1);
    let lo = (lo_frac * g as f64).floor() as Coord;
    let hi = (hi_frac * g as f64).ceil() as Coord;
    let t = d.rng.gen_range(lo..=hi.max(lo));
    Point::new(d.clamp(s.a.x + t * (dx / g)), d.clamp(s.a.y + t * (dy / g)))
}

pub fn segments(cfg: &GenConfig) -> Result<Vec<Segment>> {
    cfg.check()?;
    let mut d = Draw { rng: cfg.rng(2), cfg };
    let mut out: Vec<Segment> = Vec::with_capacity(cfg.n);
    while out.len() < cfg.n {
        if d.chance(cfg.dup_rate) {
            if let Some(s) = d.pick(&out) {
                out.push(if d.rng.gen_bool(0.5) { s } else { Segment { a: s.b, b: s.a } });
                continue;
            }
        }
        let a = Point::new(d.coord(), d.coord());
        let mut s = Segment { a, b: Point::new(d.near(a.x), d.near(a.y)) };
        if cfg.degenerate && d.chance(0.5) {
            if let Some(t) = d.pick(&out) {
                match d.rng.gen_range(0..6) {
                    0 => s.a = t.a,
                    1 => s.a = t.b,
                    2 => s.a = lattice_on(&mut d, t, 0.0, 1.0),
                    3 => {
                        s.a = lattice_on(&mut d, t, -0.5, 1.5);
                        s.b = lattice_on(&mut d, t, -0.5, 1.5);
                    }
                    4 => s.b = Point::new(s.a.x, s.b.y),
                    _ => s.b = s.a,
                }
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// Whether two closed intervals on a common line overlap in more than an
/// endpoint, or one is a point strictly inside the other.
fn line_conflict(a: (Coord, Coord), b: (Coord, Coord)) -> bool {
    a.0.max(b.0) < a.1.min(b.1) || (a.0 == a.1 && b.0 < a.0 && a.0 < b.1) || (b.0 == b.1 && a.0 < b.0 && b.0 < a.1)
}

/// Horizontal and vertical segments satisfying the axis-tape restriction.
pub fn axis(cfg: &GenConfig) -> Result<Vec<Segment>> {
    cfg.check()?;
    let mut d = Draw { rng: cfg.rng(3), cfg };
    let mut out: Vec<Segment> = Vec::with_capacity(cfg.n);
    // (is_vertical_line, line) -> occupied intervals; points live on horizontal lines
    let mut lines: HashMap<(bool, Coord), Vec<(Coord, Coord)>> = HashMap::new();
    let mut attempts = 0usize;
    while out.len() < cfg.n {
        attempts += 1;
        if attempts > 1000 * (cfg.n + 10) {
            return usage(format!("cannot place {} non-overlapping axis segments in range {}", cfg.n, cfg.range));
        }
        let vertical = d.rng.gen_bool(0.5);
        let mut line = d.coord();
        let mut lo = d.coord();
        let mut hi = d.near(lo);
        if d.chance(cfg.dup_rate) {
            if let Some(t) = d.pick(&out) {
                line = if vertical { t.a.x } else { t.a.y };
            }
        }
        if cfg.degenerate && d.chance(0.5) {
            if let Some(t) = d.pick(&out) {
                match d.rng.gen_range(0..4) {
                    // endpoint on a perpendicular segment, or a crossing through its end
                    0 if t.is_vertical() != vertical || t.is_point() => {
                        let (tl, th) = if vertical { (t.xmin(), t.xmax()) } else { (t.ymin(), t.ymax()) };
                        line = d.rng.gen_range(tl..=th);
                        lo = if vertical { t.a.y } else { t.a.x };
                    }
                    1 => {
                        line = if vertical { t.b.x } else { t.b.y };
                        lo = if vertical { t.b.y } else { t.b.x };
                    }
                    2 => hi = lo,
                    _ => {
                        line = if vertical { t.a.x } else { t.a.y };
                    }
                }
            }
        }
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let seg = if vertical {
            Segment::new(line, lo, line, hi)
        } else {
            Segment::new(lo, line, hi, line)
        };
        let (key, iv) = if seg.is_horizontal() {
            ((false, seg.a.y), (seg.xmin(), seg.xmax()))
        } else {
            ((true, seg.a.x), (seg.ymin(), seg.ymax()))
        };
        let taken = lines.entry(key).or_default();
        if taken.iter().any(|&t| line_conflict(t, iv)) {
            continue;
        }
        taken.push(iv);
        out.push(seg);
    }
    Ok(out)
}

pub fn rects(cfg: &GenConfig) -> Result<Vec<Rect>> {
    cfg.check()?;
    let mut d = Draw { rng: cfg.rng(4), cfg };
    let mut out: Vec<Rect> = Vec::with_capacity(cfg.n);
    let side = |d: &mut Draw, lo: Coord| -> (Coord, Coord) {
        let lo = lo.min(cfg.range - 1);
        let w = d.rng.gen_range(1..=cfg.len());
        (lo, (lo + w).min(cfg.range))
    };
    while out.len() < cfg.n {
        if d.chance(cfg.dup_rate) {
            if let Some(r) = d.pick(&out) {
                out.push(r);
                continue;
            }
        }
        let c = d.coord();
        let (mut xlo, mut xhi) = side(&mut d, c);
        let c = d.coord();
        let (mut ylo, mut yhi) = side(&mut d, c);
        if cfg.degenerate && d.chance(0.5) {
            if let Some(t) = d.pick(&out) {
                match d.rng.gen_range(0..4) {
                    // shared edge
                    0 => {
                        let w = d.rng.gen_range(1..=cfg.len());
                        (xlo, ylo, yhi) = (t.xhi, t.ylo, t.yhi);
                        xhi = (xlo + w).min(cfg.range);
                    }
                    // shared corner
                    1 => {
                        let (w, h) = (d.rng.gen_range(1..=cfg.len()), d.rng.gen_range(1..=cfg.len()));
                        (xlo, ylo) = (t.xhi, t.yhi);
                        (xhi, yhi) = ((xlo + w).min(cfg.range), (ylo + h).min(cfg.range));
                    }
                    // nested
                    2 if t.xhi - t.xlo >= 2 && t.yhi - t.ylo >= 2 => {
                        xlo = d.rng.gen_range(t.xlo..t.xhi - 1);
                        xhi = d.rng.gen_range(xlo + 1..=t.xhi);
                        ylo = d.rng.gen_range(t.ylo..t.yhi - 1);
                        yhi = d.rng.gen_range(ylo + 1..=t.yhi);
                    }
                    _ => (xlo, xhi) = (t.xlo, t.xhi),
                }
            }
        }
        if xlo < xhi && ylo < yhi {
            out.push(Rect::new(xlo, ylo, xhi, yhi));
        }
    }
    Ok(out)
}
