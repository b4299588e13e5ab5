//! Record types and the exact integer predicates shared by algorithms and oracles.

use std::cmp::Ordering;

/// Grid coordinate. Inputs are restricted to `[-COORD_LIMIT, COORD_LIMIT]`.
pub type Coord = i64;

pub const COORD_LIMIT: Coord = 1 << 30;

/// Bits charged for one stored coordinate value.
pub const COORD_BITS: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub const fn new(x: Coord, y: Coord) -> Self {
        Point { x, y }
    }

    /// Exact squared distance. Fits `u64` for in-range coordinates.
    pub fn dist2(self, o: Point) -> u64 {
        let dx = (self.x - o.x).unsigned_abs();
        let dy = (self.y - o.y).unsigned_abs();
        dx * dx + dy * dy
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(x1: Coord, y1: Coord, x2: Coord, y2: Coord) -> Self {
        Segment {
            a: Point::new(x1, y1),
            b: Point::new(x2, y2),
        }
    }

    /// Endpoints in lexicographic `(x, y)` order.
    pub fn ordered(self) -> (Point, Point) {
        if self.a <= self.b {
            (self.a, self.b)
        } else {
            (self.b, self.a)
        }
    }

    pub fn is_point(self) -> bool {
        self.a == self.b
    }

    /// Horizontal includes zero-length segments.
    pub fn is_horizontal(self) -> bool {
        self.a.y == self.b.y
    }

    pub fn is_vertical(self) -> bool {
        self.a.x == self.b.x && self.a.y != self.b.y
    }

    pub fn is_axis_parallel(self) -> bool {
        self.a.x == self.b.x || self.a.y == self.b.y
    }

    pub fn endpoint(self, e: usize) -> Point {
        if e == 0 {
            self.a
        } else {
            self.b
        }
    }

    pub fn xmin(self) -> Coord {
        self.a.x.min(self.b.x)
    }
    pub fn xmax(self) -> Coord {
        self.a.x.max(self.b.x)
    }
    pub fn ymin(self) -> Coord {
        self.a.y.min(self.b.y)
    }
    pub fn ymax(self) -> Coord {
        self.a.y.max(self.b.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub xlo: Coord,
    pub ylo: Coord,
    pub xhi: Coord,
    pub yhi: Coord,
}

impl Rect {
    pub const fn new(xlo: Coord, ylo: Coord, xhi: Coord, yhi: Coord) -> Self {
        Rect { xlo, ylo, xhi, yhi }
    }

    pub fn area(self) -> u64 {
        (self.xhi - self.xlo) as u64 * (self.yhi - self.ylo) as u64
    }

    /// Corner `c`: 0 = (xlo,ylo), 1 = (xhi,ylo), 2 = (xlo,yhi), 3 = (xhi,yhi).
    pub fn corner(self, c: usize) -> Point {
        let x = if c & 1 == 0 { self.xlo } else { self.xhi };
        let y = if c & 2 == 0 { self.ylo } else { self.yhi };
        Point::new(x, y)
    }
}

/// Sign of the cross product `(b - a) x (c - a)`.
pub fn orient(a: Point, b: Point, c: Point) -> Ordering {
    let v = (b.x - a.x) as i128 * (c.y - a.y) as i128 - (b.y - a.y) as i128 * (c.x - a.x) as i128;
    v.cmp(&0)
}

/// `p` lies on the closed segment, given that it is collinear with it.
fn within_box(s: Segment, p: Point) -> bool {
    s.xmin() <= p.x && p.x <= s.xmax() && s.ymin() <= p.y && p.y <= s.ymax()
}

pub fn on_segment(s: Segment, p: Point) -> bool {
    orient(s.a, s.b, p) == Ordering::Equal && within_box(s, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Interiors cross at a single point.
    Proper,
    /// A single shared point that is an endpoint of at least one segment.
    Touch,
    /// Collinear with a shared part of positive length.
    Overlap,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Proper => "proper",
            Kind::Touch => "touch",
            Kind::Overlap => "overlap",
        }
    }
}

/// Exact classification of how two closed segments meet. Symmetric.
pub fn pair_intersects(s: Segment, t: Segment) -> Option<Kind> {
    let d1 = orient(s.a, s.b, t.a);
    let d2 = orient(s.a, s.b, t.b);
    let d3 = orient(t.a, t.b, s.a);
    let d4 = orient(t.a, t.b, s.b);
    use Ordering::Equal;

    let collinear = d1 == Equal && d2 == Equal && d3 == Equal && d4 == Equal;
    if collinear {
        // Every point of both lies on one line (or one of them is a point).
        let (s0, s1) = s.ordered();
        let (t0, t1) = t.ordered();
        let lo = s0.max(t0);
        let hi = s1.min(t1);
        if s.is_point() || t.is_point() {
            let (p, other) = if s.is_point() { (s.a, t) } else { (t.a, s) };
            return on_segment(other, p).then_some(Kind::Touch);
        }
        return match lo.cmp(&hi) {
            Ordering::Less => Some(Kind::Overlap),
            Ordering::Equal => Some(Kind::Touch),
            Ordering::Greater => None,
        };
    }

    if d1 != Equal && d2 != Equal && d3 != Equal && d4 != Equal {
        return (d1 != d2 && d3 != d4).then_some(Kind::Proper);
    }

    let touches = (d1 == Equal && within_box(s, t.a))
        || (d2 == Equal && within_box(s, t.b))
        || (d3 == Equal && within_box(t, s.a))
        || (d4 == Equal && within_box(t, s.b));
    touches.then_some(Kind::Touch)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds() {
        let s = Segment::new(0, 0, 2, 2);
        assert_eq!(pair_intersects(s, Segment::new(1, 1, 3, 0)), Some(Kind::Touch));
        assert_eq!(pair_intersects(s, Segment::new(0, 2, 2, 0)), Some(Kind::Proper));
        assert_eq!(pair_intersects(s, Segment::new(2, 2, 3, 0)), Some(Kind::Touch));
        assert_eq!(
            pair_intersects(Segment::new(0, 0, 4, 0), Segment::new(1, 0, 2, 0)),
            Some(Kind::Overlap)
        );
        assert_eq!(
            pair_intersects(Segment::new(0, 0, 4, 0), Segment::new(4, 0, 5, 0)),
            Some(Kind::Touch)
        );
        assert_eq!(pair_intersects(Segment::new(0, 0, 4, 0), Segment::new(5, 0, 6, 0)), None);
        assert_eq!(pair_intersects(Segment::new(0, 0, 1, 1), Segment::new(0, 1, 1, 2)), None);
    }

    #[test]
    fn degenerate_points() {
        let p = Segment::new(1, 1, 1, 1);
        assert_eq!(pair_intersects(p, Segment::new(0, 0, 2, 2)), Some(Kind::Touch));
        assert_eq!(pair_intersects(p, p), Some(Kind::Touch));
        assert_eq!(pair_intersects(p, Segment::new(0, 0, 2, 3)), None);
        assert_eq!(pair_intersects(p, Segment::new(2, 2, 2, 2)), None);
    }

    #[test]
    fn extreme_coordinates_do_not_overflow() {
        let l = COORD_LIMIT;
        let s = Segment::new(-l, -l, l, l);
        let t = Segment::new(-l, l, l, -l);
        assert_eq!(pair_intersects(s, t), Some(Kind::Proper));
        assert_eq!(Point::new(-l, -l).dist2(Point::new(l, l)), 2 * (2u64 << 30).pow(2));
    }
}
