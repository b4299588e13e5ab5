use proptest::prelude::*;

use spacesweep::axcount::count_axis;
use spacesweep::axenum::enumerate_axis;
use spacesweep::budget::BitBudget;
use spacesweep::closest::{closest_pair, is_candidate, pass_one};
use spacesweep::gen::{self, GenConfig};
use spacesweep::geom::{pair_intersects, Point, Rect, Segment};
use spacesweep::grid::StripGrid;
use spacesweep::klee::{corner_tape, measure_sorted, measure_unsorted};
use spacesweep::navpile::{Bound, NavPile, Order};
use spacesweep::oracle::{bf_intersections, bf_measure, Policy};
use spacesweep::{lg, segx, Tape};

fn pick_s(n: usize, t: f64) -> u64 {
    let lo = lg(n as u64) as f64;
    let hi = lo * n.max(1) as f64;
    (lo * (hi / lo).powf(t)).round() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pile_streams_threshold_suffix(
        keys in prop::collection::vec(-20i64..20, 1..120),
        desc in any::<bool>(),
        cut in prop::option::of(-25i64..25),
        t in 0.0f64..1.0,
    ) {
        let n = keys.len();
        let s = pick_s(n, t).max(64);
        let order = if desc { Order::Desc } else { Order::Asc };
        let eff = |k: i64| if desc { -k } else { k };
        let bound = cut.map_or(Bound::NegInf, Bound::Key);
        let mut want: Vec<usize> = (0..n).filter(|&i| cut.map_or(true, |c| eff(keys[i]) > c)).collect();
        want.sort_by_key(|&i| (eff(keys[i]), i));
        let b = BitBudget::unlimited();
        let got: Vec<usize> = NavPile::new(n, |i| keys[i], order, bound, s, &b).unwrap().map(|e| e.item).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn grid_trichotomy(
        mut seps in prop::collection::vec(-100i64..100, 0..12),
        lo in -120i64..120,
        len in 0i64..120,
    ) {
        seps.sort();
        seps.dedup();
        let b = BitBudget::unlimited();
        let g = StripGrid::from_separators(&seps, &b).unwrap();
        let hi = lo + len;
        for i in 0..g.m() {
            let inside = g.locate(lo) == i || g.locate(hi) == i;
            let spans = g.spans(lo, hi, i);
            let disjoint = i < g.locate(lo) || i > g.locate(hi);
            prop_assert_eq!(inside as u8 + spans as u8 + disjoint as u8, 1, "strip {}", i);
            let (l, r) = g.bounds(i);
            if spans {
                prop_assert!(l.is_some_and(|l| lo < l) && r.is_some_and(|r| r <= hi));
            }
        }
        match g.span_range(lo, hi) {
            Some((a, z)) => prop_assert!((0..g.m()).all(|i| g.spans(lo, hi, i) == (a <= i && i <= z))),
            None => prop_assert!((0..g.m()).all(|i| !g.spans(lo, hi, i))),
        }
    }

    #[test]
    fn closest_candidate_filter_is_safe(seed in any::<u64>(), n in 2usize..200, t in 0.0f64..1.0) {
        let pts = gen::points(&GenConfig::new(n, seed).range(300).dup_rate(0.05)).unwrap();
        let tape = Tape::points(pts.clone()).unwrap();
        let s = pick_s(n, t);
        let b = BitBudget::unlimited();
        let (best, grid) = pass_one(&tape.view(), s, &b).unwrap();
        let Some((delta, _, _)) = best else { return Ok(()) };
        for (i, p) in pts.iter().enumerate() {
            if is_candidate(&grid, p.x, delta) {
                continue;
            }
            let nn = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| p.dist2(*q)).min().unwrap();
            prop_assert!(nn >= delta, "point {} at nn {} below delta {}", i, nn, delta);
        }
    }

    #[test]
    fn answers_do_not_depend_on_s(seed in any::<u64>(), n in 2usize..90, t1 in 0.0f64..1.0, t2 in 0.0f64..1.0) {
        let (s1, s2) = (pick_s(n, t1), pick_s(n, t2));
        let pts = Tape::points(gen::points(&GenConfig::new(n, seed).range(500)).unwrap()).unwrap();
        prop_assert_eq!(closest_pair(&pts, s1).unwrap().value, closest_pair(&pts, s2).unwrap().value);

        let segs = Tape::segments(gen::segments(&GenConfig::new(n, seed).range(200).degenerate(true)).unwrap()).unwrap();
        let run = |s| {
            let mut v = Vec::new();
            segx::enumerate(&segs, s, &mut |c| v.push((c.i, c.j, c.kind))).unwrap();
            v.sort();
            v
        };
        let (a, b) = (run(s1), run(s2));
        let mut dedup = a.clone();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), a.len());
        prop_assert_eq!(a, b);

        let axis = Tape::axis_segments(gen::axis(&GenConfig::new(n, seed).range(200).degenerate(true)).unwrap()).unwrap();
        let (c1, c2) = (count_axis(&axis, s1).unwrap().value, count_axis(&axis, s2).unwrap().value);
        prop_assert_eq!(c1, c2);
        let mut k = 0;
        enumerate_axis(&axis, s1, &mut |_| k += 1).unwrap();
        prop_assert_eq!(k, c1);

        let rects = Tape::rects(gen::rects(&GenConfig::new(n, seed).range(300).degenerate(true)).unwrap()).unwrap();
        let m1 = measure_unsorted(&rects, s1).unwrap().value;
        prop_assert_eq!(m1, measure_unsorted(&rects, s2).unwrap().value);
        prop_assert_eq!(m1, measure_sorted(&rects, &corner_tape(&rects), s2).unwrap().value);
    }

    #[test]
    fn pair_predicate_is_symmetric(c in prop::array::uniform8(-6i64..6)) {
        let a = Segment::new(c[0], c[1], c[2], c[3]);
        let b = Segment::new(c[4], c[5], c[6], c[7]);
        prop_assert_eq!(pair_intersects(a, b), pair_intersects(b, a));
    }

    #[test]
    fn permutation_and_translation_invariance(seed in any::<u64>(), n in 1usize..60, dx in -1000i64..1000, dy in -1000i64..1000) {
        let rects = gen::rects(&GenConfig::new(n, seed).range(200)).unwrap();
        let mut shuffled = rects.clone();
        shuffled.reverse();
        shuffled.rotate_left(n / 3);
        let moved: Vec<Rect> = rects.iter().map(|r| Rect::new(r.xlo + dx, r.ylo + dy, r.xhi + dx, r.yhi + dy)).collect();
        let m = bf_measure(&Tape::rects(rects).unwrap());
        prop_assert_eq!(bf_measure(&Tape::rects(shuffled.clone()).unwrap()), m);
        let s = lg(n as u64) * 4;
        prop_assert_eq!(measure_unsorted(&Tape::rects(shuffled).unwrap(), s).unwrap().value, m);
        prop_assert_eq!(measure_unsorted(&Tape::rects(moved).unwrap(), s).unwrap().value, m);

        let segs = gen::segments(&GenConfig::new(n, seed).range(100).degenerate(true)).unwrap();
        let mut rev = segs.clone();
        rev.reverse();
        let count = |v: Vec<Segment>| bf_intersections(&Tape::segments(v).unwrap(), Policy::General).len();
        prop_assert_eq!(count(segs), count(rev));
    }

    #[test]
    fn tape_reads_are_pure(pts in prop::collection::vec((-50i64..50, -50i64..50), 1..40), idx in prop::collection::vec(0usize..1000, 1..50)) {
        let tape = Tape::points(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap();
        let once: Vec<Point> = idx.iter().map(|&i| tape.at(i % pts.len())).collect();
        let again: Vec<Point> = idx.iter().map(|&i| tape.at(i % pts.len())).collect();
        prop_assert_eq!(once, again);
        prop_assert_eq!(tape.read_count(), 2 * idx.len() as u64);
    }
}
