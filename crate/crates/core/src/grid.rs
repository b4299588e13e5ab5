//! Strip separators along one axis.
//!
//! Strip `i` is the half-open interval `[sep[i-1], sep[i])` with
//! `sep[-1] = -inf` and `sep[m-1] = +inf`. Separators are only placed between
//! distinct keys, so a run of equal keys never straddles two strips.

use crate::budget::{BitBudget, WorkVec};
use crate::error::{usage, Result};
use crate::geom::{Coord, COORD_BITS};
use crate::navpile::Entry;

/// Separator strictly above `lo` and at most `hi`, for `lo < hi`.
pub fn separator_between(lo: Coord, hi: Coord) -> Coord {
    debug_assert!(lo < hi);
    if hi - lo >= 2 {
        lo + (hi - lo) / 2
    } else {
        hi
    }
}

/// Incremental cutter over keys arriving in nondecreasing order.
#[derive(Clone, Debug)]
pub struct StripCutter {
    capacity: usize,
    count: usize,
    last: Option<Coord>,
}

impl StripCutter {
    pub fn new(capacity: usize) -> Self {
        StripCutter {
            capacity: capacity.max(1),
            count: 0,
            last: None,
        }
    }

    /// Feeds the next key; returns the separator if the key opens a new strip.
    pub fn offer(&mut self, key: Coord) -> Option<Coord> {
        let cut = match self.last {
            Some(l) if self.count >= self.capacity && key != l => Some(separator_between(l, key)),
            _ => None,
        };
        if let Some(l) = self.last {
            debug_assert!(l <= key, "keys must arrive sorted");
        }
        if cut.is_some() {
            self.count = 0;
        }
        self.count += 1;
        self.last = Some(key);
        cut
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

#[derive(Debug)]
pub struct StripGrid<'b> {
    seps: WorkVec<'b, Coord>,
}

impl<'b> StripGrid<'b> {
    pub fn empty(budget: &'b BitBudget) -> Result<Self> {
        Ok(StripGrid {
            seps: WorkVec::new(budget, COORD_BITS)?,
        })
    }

    /// Streams sorted keys and cuts after every `capacity` of them.
    pub fn build(keys: impl Iterator<Item = Entry>, capacity: usize, budget: &'b BitBudget) -> Result<Self> {
        if capacity == 0 {
            return usage("strip capacity must be at least 1");
        }
        let mut grid = Self::empty(budget)?;
        let mut cutter = StripCutter::new(capacity);
        for e in keys {
            if let Some(sep) = cutter.offer(e.key) {
                grid.push(sep)?;
            }
        }
        Ok(grid)
    }

    pub fn from_separators(seps: &[Coord], budget: &'b BitBudget) -> Result<Self> {
        let mut g = Self::empty(budget)?;
        for &s in seps {
            g.push(s)?;
        }
        Ok(g)
    }

    pub fn push(&mut self, sep: Coord) -> Result<()> {
        if let Some(&l) = self.seps.last() {
            assert!(l < sep, "separators must ascend");
        }
        self.seps.push(sep)
    }

    pub fn separators(&self) -> &[Coord] {
        &self.seps
    }

    /// Number of strips.
    pub fn m(&self) -> usize {
        self.seps.len() + 1
    }

    /// Strip containing `key`.
    pub fn locate(&self, key: Coord) -> usize {
        self.seps.partition_point(|&s| s <= key)
    }

    /// `(lower, upper)` bounds of strip `i`; `None` for the infinite sides.
    pub fn bounds(&self, i: usize) -> (Option<Coord>, Option<Coord>) {
        let lo = if i == 0 { None } else { Some(self.seps[i - 1]) };
        let hi = self.seps.get(i).copied();
        (lo, hi)
    }

    /// Strips spanned by the closed interval `[lo, hi]`: those it covers
    /// without having `lo` or `hi` inside them. Returns the inclusive range.
    pub fn span_range(&self, lo: Coord, hi: Coord) -> Option<(usize, usize)> {
        debug_assert!(lo <= hi);
        let first = self.locate(lo) + 1;
        let last = self.locate(hi).checked_sub(1)?;
        (first <= last).then_some((first, last))
    }

    /// Whether `[lo, hi]` spans strip `i`.
    pub fn spans(&self, lo: Coord, hi: Coord, i: usize) -> bool {
        self.locate(lo) < i && i < self.locate(hi)
    }
}
