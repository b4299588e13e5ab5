//! Sorted streaming above a threshold from a read-only array.
//!
//! Bucket-tournament realization: the `n` items are cut into `b` buckets of
//! consecutive positions. Each leaf caches the smallest `(key, item)` of its
//! bucket above the last output; a tournament tree over the leaves names the
//! overall winner. Emitting rescans one bucket (`ceil(n/b)` reads) and replays
//! the `ceil(lg b)` matches on its root path, which use cached keys only.
//!
//! Keys are ordered by `(key, item)`, so equal keys stream in item order and
//! resuming after an emitted element is unambiguous.

use crate::budget::{lg, BitBudget, WorkVec};
use crate::error::Result;
use crate::geom::COORD_BITS;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Asc,
    Desc,
}

/// Exclusive lower bound on effective keys (negated keys for [`Order::Desc`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    /// Everything with key strictly greater.
    Key(i64),
    /// Everything ordered after `(key, item)`.
    After(i64, usize),
}

impl Bound {
    fn floor(self) -> Option<(i64, usize)> {
        match self {
            Bound::NegInf => None,
            Bound::Key(k) => Some((k, usize::MAX)),
            Bound::After(k, i) => Some((k, i)),
        }
    }
}

/// One emitted item. `key` is the raw key, before any negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub item: usize,
    pub key: i64,
}

/// Number of buckets used for `n` items under parameter `s`.
pub fn bucket_count(n: usize, s: u64) -> usize {
    let leaf_bits = 2 * (lg(n as u64 + 1) + COORD_BITS);
    ((s / leaf_bits).max(1) as usize).min(n.max(1))
}

pub struct NavPile<'b, F> {
    key: F,
    order: Order,
    n: usize,
    bucket_len: usize,
    width: usize,
    leaves: WorkVec<'b, (i64, u32)>,
    tree: WorkVec<'b, u32>,
}

impl<'b, F: Fn(usize) -> i64> NavPile<'b, F> {
    /// Builds the pile with one scan over the items.
    pub fn new(n: usize, key: F, order: Order, threshold: Bound, s: u64, budget: &'b BitBudget) -> Result<Self> {
        let b = bucket_count(n, s);
        let bucket_len = n.div_ceil(b).max(1);
        let b = n.div_ceil(bucket_len).max(1);
        let width = b.next_power_of_two();
        let leaves = WorkVec::filled(budget, lg(n as u64 + 1) + COORD_BITS, b, (0, NONE))?;
        let tree = WorkVec::filled(budget, lg(b as u64 + 1), width, NONE)?;
        let mut pile = NavPile {
            key,
            order,
            n,
            bucket_len,
            width,
            leaves,
            tree,
        };
        let floor = threshold.floor();
        for bk in 0..b {
            pile.leaves[bk] = pile.scan_bucket(bk, floor);
        }
        for node in (1..width).rev() {
            pile.tree[node] = pile.play(pile.child(2 * node), pile.child(2 * node + 1));
        }
        Ok(pile)
    }

    pub fn buckets(&self) -> usize {
        self.leaves.len()
    }

    fn eff(&self, item: usize) -> i64 {
        let k = (self.key)(item);
        match self.order {
            Order::Asc => k,
            Order::Desc => -k,
        }
    }

    fn scan_bucket(&self, bk: usize, floor: Option<(i64, usize)>) -> (i64, u32) {
        let lo = bk * self.bucket_len;
        let hi = (lo + self.bucket_len).min(self.n);
        let mut best: (i64, u32) = (0, NONE);
        for i in lo..hi {
            let k = self.eff(i);
            if let Some(f) = floor {
                if (k, i) <= f {
                    continue;
                }
            }
            if best.1 == NONE || (k, i as u32) < best {
                best = (k, i as u32);
            }
        }
        best
    }

    fn child(&self, pos: usize) -> u32 {
        if pos >= self.width {
            let bk = pos - self.width;
            if bk < self.leaves.len() {
                bk as u32
            } else {
                NONE
            }
        } else {
            self.tree[pos]
        }
    }

    fn leaf_key(&self, bk: u32) -> Option<(i64, u32)> {
        if bk == NONE {
            return None;
        }
        let l = self.leaves[bk as usize];
        (l.1 != NONE).then_some(l)
    }

    fn play(&self, a: u32, b: u32) -> u32 {
        match (self.leaf_key(a), self.leaf_key(b)) {
            (None, None) => NONE,
            (Some(_), None) => a,
            (None, Some(_)) => b,
            (Some(x), Some(y)) => {
                if x <= y {
                    a
                } else {
                    b
                }
            }
        }
    }

    /// Next item without consuming it.
    pub fn peek(&self) -> Option<Entry> {
        let w = if self.width == 1 { self.child(1) } else { self.tree[1] };
        let (k, i) = self.leaf_key(w)?;
        Some(Entry {
            item: i as usize,
            key: match self.order {
                Order::Asc => k,
                Order::Desc => -k,
            },
        })
    }

    pub fn next_entry(&mut self) -> Option<Entry> {
        let out = self.peek()?;
        let bk = out.item / self.bucket_len;
        let emitted = self.leaves[bk];
        self.leaves[bk] = self.scan_bucket(bk, Some((emitted.0, emitted.1 as usize)));
        let mut node = (self.width + bk) / 2;
        while node >= 1 {
            self.tree[node] = self.play(self.child(2 * node), self.child(2 * node + 1));
            node /= 2;
        }
        Some(out)
    }

    /// Up to `k` further entries.
    pub fn stream_k(&mut self, k: usize) -> Vec<Entry> {
        let mut out = Vec::new();
        while out.len() < k {
            match self.next_entry() {
                Some(e) => out.push(e),
                None => break,
            }
        }
        out
    }
}

impl<F: Fn(usize) -> i64> Iterator for NavPile<'_, F> {
    type Item = Entry;
    fn next(&mut self) -> Option<Entry> {
        self.next_entry()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::tape::Tape;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn oracle(keys: &[i64], order: Order, thr: Bound) -> Vec<usize> {
        let eff = |k: i64| if order == Order::Asc { k } else { -k };
        let mut v: Vec<(i64, usize)> = keys.iter().enumerate().map(|(i, &k)| (eff(k), i)).collect();
        v.sort();
        v.into_iter()
            .filter(|&(k, i)| match thr.floor() {
                None => true,
                Some(f) => (k, i) > f,
            })
            .map(|p| p.1)
            .collect()
    }

    fn stream(keys: &[i64], order: Order, thr: Bound, s: u64) -> Vec<usize> {
        let b = BitBudget::unlimited();
        let pile = NavPile::new(keys.len(), |i| keys[i], order, thr, s, &b).unwrap();
        pile.map(|e| e.item).collect()
    }

    #[test]
    fn small_examples() {
        let keys = [5, 1, 4, 2];
        let got: Vec<i64> = stream(&keys, Order::Asc, Bound::NegInf, 64).iter().map(|&i| keys[i]).collect();
        assert_eq!(got, vec![1, 2, 4, 5]);
        let first = stream(&keys, Order::Asc, Bound::Key(4), 64)[0];
        assert_eq!(keys[first], 5);
        assert_eq!(stream(&[3, 3, 3, 3], Order::Asc, Bound::NegInf, 1), vec![0, 1, 2, 3]);
        assert!(stream(&[], Order::Asc, Bound::NegInf, 8).is_empty());
    }

    #[test]
    fn stream_k() {
        let keys: Vec<i64> = (0..50).map(|i| (i * 37) % 11).collect();
        let b = BitBudget::unlimited();
        let mut p = NavPile::new(50, |i| keys[i], Order::Asc, Bound::Key(3), 16, &b).unwrap();
        assert!(p.stream_k(0).is_empty());
        let got: Vec<usize> = p.stream_k(3).iter().map(|e| e.item).collect();
        assert_eq!(got, oracle(&keys, Order::Asc, Bound::Key(3))[..3]);
        let mut q = NavPile::new(50, |i| keys[i], Order::Asc, Bound::NegInf, 16, &b).unwrap();
        assert_eq!(q.stream_k(50).iter().map(|e| e.item).collect::<Vec<_>>(), oracle(&keys, Order::Asc, Bound::NegInf));
    }

    #[test]
    fn random_with_duplicates_against_sort() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(1..1000);
            let keys: Vec<i64> = (0..n).map(|_| rng.gen_range(-30..30)).collect();
            let mut sorted = keys.clone();
            sorted.sort();
            let median = sorted[n / 2];
            for order in [Order::Asc, Order::Desc] {
                for s in [1u64, 10, 100, 5000] {
                    for thr in [Bound::NegInf, Bound::Key(median), Bound::After(median, n / 3)] {
                        assert_eq!(stream(&keys, order, thr, s), oracle(&keys, order, thr));
                    }
                }
            }
        }
    }

    #[test]
    fn read_count_and_workspace() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 10_000usize;
        let tape = Tape::points((0..n).map(|_| Point::new(rng.gen_range(0..1000), 0)).collect()).unwrap();
        for s in [14u64, 200, 3000, 14 * 10_000] {
            let b = BitBudget::scaled(crate::budget::constants::C_PILE, s);
            let before = tape.read_count();
            let pile = NavPile::new(n, |i| tape.at(i).x, Order::Asc, Bound::NegInf, s, &b).unwrap();
            let nb = pile.buckets();
            let out: Vec<usize> = pile.map(|e| e.item).collect();
            let reads = tape.read_count() - before;
            let keys: Vec<i64> = tape.records().iter().map(|p| p.x).collect();
            assert_eq!(out, oracle(&keys, Order::Asc, Bound::NegInf));
            let bound = n as u64 + n as u64 * n.div_ceil(nb) as u64 + n as u64;
            assert!(reads <= bound, "reads {reads} > {bound}");
            assert!(b.peak_bits() <= 4 * s, "peak {} > 4s", b.peak_bits());
            assert_eq!(b.live_bits(), 0);
        }
    }
}
