//! Exact rational points for sweep events.
//!
//! Intersection coordinates of integer segments are fractions with
//! numerators below 2^96 and denominators below 2^64, so they fit `i128`;
//! comparisons cross-multiply in 256 bits.

use std::cmp::Ordering;

use ethnum::I256;

use crate::geom::{Point, Segment};

/// Workspace charge for one stored rational point: two numerators of 96
/// bits and two denominators of 64.
pub const RAT_POINT_BITS: u64 = 2 * (96 + 64);

fn gcd(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced fraction with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rat {
    pub num: i128,
    pub den: i128,
}

impl Rat {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num.unsigned_abs(), den as u128).max(1) as i128;
        Rat { num: num / g, den: den / g }
    }

    pub fn int(v: i64) -> Self {
        Rat { num: v as i128, den: 1 }
    }

    pub fn as_int(self) -> Option<i64> {
        (self.den == 1).then_some(self.num as i64)
    }
}

impl Ord for Rat {
    fn cmp(&self, o: &Self) -> Ordering {
        (I256::from(self.num) * I256::from(o.den)).cmp(&(I256::from(o.num) * I256::from(self.den)))
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl std::fmt::Display for Rat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Point with rational coordinates, ordered lexicographically by (x, y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint {
    pub x: Rat,
    pub y: Rat,
}

impl From<Point> for RatPoint {
    fn from(p: Point) -> Self {
        RatPoint { x: Rat::int(p.x), y: Rat::int(p.y) }
    }
}

impl RatPoint {
    pub fn as_point(self) -> Option<Point> {
        Some(Point::new(self.x.as_int()?, self.y.as_int()?))
    }
}

fn cross(ax: i128, ay: i128, bx: i128, by: i128) -> i128 {
    ax * by - ay * bx
}

/// The common point of two non-parallel segments that meet at exactly one
/// point, as lines. The caller decides whether it lies on both segments.
pub fn line_intersection(s: Segment, t: Segment) -> Option<RatPoint> {
    let (rx, ry) = ((s.b.x - s.a.x) as i128, (s.b.y - s.a.y) as i128);
    let (sx, sy) = ((t.b.x - t.a.x) as i128, (t.b.y - t.a.y) as i128);
    let den = cross(rx, ry, sx, sy);
    if den == 0 {
        return None;
    }
    let (qx, qy) = ((t.a.x - s.a.x) as i128, (t.a.y - s.a.y) as i128);
    let tn = cross(qx, qy, sx, sy);
    let x = Rat::new(s.a.x as i128 * den + rx * tn, den);
    let y = Rat::new(s.a.y as i128 * den + ry * tn, den);
    Some(RatPoint { x, y })
}

/// Position of `q` relative to a non-vertical segment at abscissa `q.x`:
/// `Greater` if `q` is above the segment, `Equal` if on its line.
/// The segment must span `q.x`.
pub fn side_of(s: Segment, q: &RatPoint) -> Ordering {
    let (a, b) = s.ordered();
    debug_assert!(a.x < b.x);
    let dx = I256::from(b.x - a.x);
    let dy = I256::from(b.y - a.y);
    let (xn, xd) = (I256::from(q.x.num), I256::from(q.x.den));
    // y_s(x) = (a.y*dx*xd + dy*(xn - a.x*xd)) / (dx*xd)
    let ys_num = I256::from(a.y) * dx * xd + dy * (xn - I256::from(a.x) * xd);
    let ys_den = dx * xd;
    (I256::from(q.y.num) * ys_den).cmp(&(ys_num * I256::from(q.y.den)))
}

/// Compares the slopes of two segments oriented left to right; vertical is
/// the largest slope.
pub fn cmp_slope(s: Segment, t: Segment) -> Ordering {
    let (a, b) = s.ordered();
    let (c, d) = t.ordered();
    let (sdx, sdy) = ((b.x - a.x) as i128, (b.y - a.y) as i128);
    let (tdx, tdy) = ((d.x - c.x) as i128, (d.y - c.y) as i128);
    match (sdx == 0, tdx == 0) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        _ => (sdy * tdx).cmp(&(tdy * sdx)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_and_order() {
        assert_eq!(Rat::new(4, -6), Rat { num: -2, den: 3 });
        assert!(Rat::new(1, 3) < Rat::new(1, 2));
        assert!(Rat::new(-1, 2) < Rat::new(-1, 3));
        assert_eq!(Rat::new(0, 5), Rat::int(0));
        let big = (1i128 << 95) - 1;
        assert!(Rat::new(big, (1 << 63) - 1) > Rat::new(big - 1, (1 << 63) - 1));
    }

    #[test]
    fn intersections() {
        let p = line_intersection(Segment::new(0, 0, 4, 4), Segment::new(0, 4, 4, 0)).unwrap();
        assert_eq!(p.as_point(), Some(Point::new(2, 2)));
        let p = line_intersection(Segment::new(0, 0, 3, 1), Segment::new(0, 1, 3, 0)).unwrap();
        assert_eq!(p, RatPoint { x: Rat::new(3, 2), y: Rat::new(1, 2) });
        assert!(line_intersection(Segment::new(0, 0, 1, 1), Segment::new(1, 0, 2, 1)).is_none());
        // extreme coordinates
        let l = 1 << 30;
        let p = line_intersection(Segment::new(-l, -l, l, l - 1), Segment::new(-l, l, l, -l + 1)).unwrap();
        assert_eq!(side_of(Segment::new(-l, -l, l, l - 1), &p), Ordering::Equal);
        assert_eq!(side_of(Segment::new(-l, l, l, -l + 1), &p), Ordering::Equal);
    }

    #[test]
    fn sides_and_slopes() {
        let s = Segment::new(0, 0, 4, 2);
        assert_eq!(side_of(s, &Point::new(2, 1).into()), Ordering::Equal);
        assert_eq!(side_of(s, &Point::new(2, 2).into()), Ordering::Greater);
        assert_eq!(side_of(s, &RatPoint { x: Rat::new(1, 3), y: Rat::new(1, 7) }), Ordering::Less);
        assert_eq!(cmp_slope(s, Segment::new(0, 0, 0, 5)), Ordering::Less);
        assert_eq!(cmp_slope(Segment::new(4, 2, 0, 0), Segment::new(0, 0, 2, 1)), Ordering::Equal);
        assert_eq!(cmp_slope(Segment::new(0, 0, 1, -5), s), Ordering::Less);
    }
}
