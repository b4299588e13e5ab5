//! Succinct sweep status for one vertical strip: the strip's vertically
//! spanning segments plus one rank-select bit vector per horizontal cell.

use crate::budget::{lg, BitBudget, BitVector, RankSelect, WorkVec};
use crate::error::Result;
use crate::geom::{Coord, Segment};
use crate::grid::StripGrid;
use crate::tape::View;

pub struct SweepStatus<'b> {
    pub strip: usize,
    spanning_ids: WorkVec<'b, u32>,
    cells: Vec<RankSelect<'b>>,
}

/// Whether a vertical segment spans row `i` of `grid_y`.
pub fn spans_cell(seg: Segment, grid_y: &StripGrid, i: usize) -> bool {
    grid_y.spans(seg.ymin(), seg.ymax(), i)
}

impl<'b> SweepStatus<'b> {
    /// Builds the status of `strip` from `candidates`, view indices of the
    /// vertical segments whose x lies in the strip. Those spanning no cell
    /// are skipped.
    pub fn build(
        view: &View<Segment>,
        grid_x: &StripGrid,
        grid_y: &StripGrid,
        strip: usize,
        candidates: impl Iterator<Item = usize>,
        budget: &'b BitBudget,
    ) -> Result<Self> {
        let mut spanning_ids = WorkVec::new(budget, lg(view.len() as u64 + 1))?;
        for id in candidates {
            let s = view.get(id);
            assert!(s.is_vertical() && !s.is_point(), "status holds verticals only");
            assert_eq!(grid_x.locate(s.a.x), strip, "vertical outside its strip");
            if grid_y.span_range(s.ymin(), s.ymax()).is_some() {
                spanning_ids.push(id as u32)?;
            }
        }
        let m = grid_y.m();
        let mut cells = Vec::with_capacity(m);
        for i in 0..m {
            let mut bits = BitVector::zeros(budget, spanning_ids.len())?;
            for (t, &id) in spanning_ids.iter().enumerate() {
                if spans_cell(view.get(id as usize), grid_y, i) {
                    bits.set(t);
                }
            }
            cells.push(RankSelect::new(bits)?);
        }
        Ok(SweepStatus {
            strip,
            spanning_ids,
            cells,
        })
    }

    pub fn m(&self) -> usize {
        self.cells.len()
    }

    pub fn spanning_ids(&self) -> &[u32] {
        &self.spanning_ids
    }

    /// View indices of the segments spanning cell row `i`, ascending by
    /// position in the status.
    pub fn query_cell(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let rs = &self.cells[i];
        let mut at = 0;
        std::iter::from_fn(move || {
            let t = rs.next_one(at)?;
            at = t + 1;
            Some(self.spanning_ids[t] as usize)
        })
    }
}

pub fn locate_row(grid_y: &StripGrid, y: Coord) -> usize {
    grid_y.locate(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tape::Tape;

    fn setup(segs: &[(i64, i64, i64, i64)]) -> Tape<Segment> {
        Tape::axis_segments(segs.iter().map(|&(a, b, c, d)| Segment::new(a, b, c, d)).collect()).unwrap()
    }

    #[test]
    fn spanning_all_and_none() {
        let b = BitBudget::unlimited();
        let gx = StripGrid::from_separators(&[100], &b).unwrap();
        let gy = StripGrid::from_separators(&[10, 20, 30], &b).unwrap();
        let t = setup(&[(5, -50, 5, 50), (7, 12, 7, 18)]);
        let st = SweepStatus::build(&t.view(), &gx, &gy, 0, 0..2, &b).unwrap();
        assert_eq!(st.spanning_ids(), &[0]);
        // the outer rows are unbounded and hold the endpoints
        for i in 0..4 {
            let want = if i == 0 || i == 3 { vec![] } else { vec![0] };
            assert_eq!(st.query_cell(i).collect::<Vec<_>>(), want);
        }
        let st = SweepStatus::build(&t.view(), &gx, &gy, 0, 1..2, &b).unwrap();
        assert!(st.spanning_ids().is_empty());
        assert!((0..4).all(|i| st.query_cell(i).next().is_none()));
    }

    #[test]
    fn query_selects_set_bits() {
        let b = BitBudget::unlimited();
        let gx = StripGrid::from_separators(&[], &b).unwrap();
        let gy = StripGrid::from_separators(&[10, 20], &b).unwrap();
        // row 1 is [10, 20): segments 0 and 2 span it, 1 does not
        let t = setup(&[(1, 0, 1, 25), (2, 15, 2, 40), (3, 5, 3, 20)]);
        let st = SweepStatus::build(&t.view(), &gx, &gy, 0, 0..3, &b).unwrap();
        assert_eq!(st.spanning_ids(), &[0, 2]);
        assert_eq!(st.query_cell(1).collect::<Vec<_>>(), vec![0, 2]);
        assert!(st.query_cell(0).next().is_none());
        assert_eq!(locate_row(&gy, 20), 2);
    }

    #[test]
    fn rebuild_releases_budget() {
        let b = BitBudget::unlimited();
        let gx = StripGrid::from_separators(&[50], &b).unwrap();
        let gy = StripGrid::from_separators(&[10, 20, 30], &b).unwrap();
        let t = setup(&[(5, 0, 5, 40), (60, 0, 60, 25), (70, 5, 70, 35)]);
        let base = b.live_bits();
        for (strip, ids) in [(0, 0..1), (1, 1..3)] {
            let st = SweepStatus::build(&t.view(), &gx, &gy, strip, ids, &b).unwrap();
            assert!(b.live_bits() > base);
            drop(st);
            assert_eq!(b.live_bits(), base);
        }
    }

    #[test]
    fn random_membership_matches_predicate() {
        use crate::gen::{axis, GenConfig};
        let b = BitBudget::unlimited();
        for seed in 0..10 {
            let t = Tape::axis_segments(axis(&GenConfig::new(120, seed).range(200).max_len(120)).unwrap()).unwrap();
            let gx = StripGrid::from_separators(&[-100, 0, 100], &b).unwrap();
            let gy = StripGrid::from_separators(&[-150, -40, 10, 60, 130], &b).unwrap();
            for strip in 0..gx.m() {
                let cand = (0..t.len()).filter(|&i| {
                    let s = t.records()[i];
                    s.is_vertical() && !s.is_point() && gx.locate(s.a.x) == strip
                });
                let st = SweepStatus::build(&t.view(), &gx, &gy, strip, cand, &b).unwrap();
                for row in 0..gy.m() {
                    let got: Vec<usize> = st.query_cell(row).collect();
                    let want: Vec<usize> = (0..t.len())
                        .filter(|&i| {
                            let s = t.records()[i];
                            s.is_vertical()
                                && !s.is_point()
                                && gx.locate(s.a.x) == strip
                                && gy.locate(s.ymin()) < row
                                && row < gy.locate(s.ymax())
                        })
                        .collect();
                    assert_eq!(got, want);
                }
            }
        }
    }
}
