//! Workspace accounting and the succinct bit-vector / rank-select structure.
//!
//! Accounting model: every array whose length depends on `n` or `s` is
//! charged at its element width (indices at `lg` of the addressed range,
//! coordinates at [`COORD_BITS`](crate::geom::COORD_BITS), counters at `lg n`).
//! A run additionally charges a fixed register file of
//! [`constants::REGISTER_WORDS`] words of `lg n` bits for its scalars.

use std::cell::Cell;

use crate::error::{Error, Result};

/// `max(1, ceil(log2 x))`.
pub fn lg(x: u64) -> u64 {
    if x <= 2 {
        1
    } else {
        (64 - (x - 1).leading_zeros()) as u64
    }
}

/// Budget multipliers: a run with parameter `s` gets `C * s` bits.
pub mod constants {
    /// Scalar registers charged once per run, in words of `lg n` bits.
    pub const REGISTER_WORDS: u64 = 8;

    pub const C_PILE: u64 = 4;

    // Pinned above the worst peak/s seen over the acceptance corpus. The
    // large values come from s near lg n on small or heavily duplicated
    // inputs, where each 32-bit coordinate costs several multiples of s.
    pub const C_CLOSEST: u64 = 128;
    pub const C_SEGX: u64 = 256;
    pub const C_AXCOUNT: u64 = 1024;
    pub const C_AXENUM: u64 = 1024;
    pub const C_KLEE: u64 = 2048;
}

#[derive(Debug)]
pub struct BitBudget {
    capacity: u64,
    live: Cell<u64>,
    peak: Cell<u64>,
}

impl BitBudget {
    pub fn new(capacity_bits: u64) -> Self {
        BitBudget {
            capacity: capacity_bits,
            live: Cell::new(0),
            peak: Cell::new(0),
        }
    }

    /// Budget of `c * s` bits.
    pub fn scaled(c: u64, s: u64) -> Self {
        Self::new(c.saturating_mul(s))
    }

    /// No effective limit; for diagnostics and tests of individual structures.
    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    /// Budget of `c * s` bits for one run on `n` records, with the register
    /// file already taken. The register bits stay live for the whole run.
    pub fn for_run(c: u64, s: u64, n: usize) -> Result<Self> {
        let b = Self::scaled(c, s);
        b.take(constants::REGISTER_WORDS * lg(n as u64))?;
        Ok(b)
    }

    pub fn capacity_bits(&self) -> u64 {
        self.capacity
    }
    pub fn live_bits(&self) -> u64 {
        self.live.get()
    }
    pub fn peak_bits(&self) -> u64 {
        self.peak.get()
    }

    fn take(&self, bits: u64) -> Result<()> {
        let live = self.live.get();
        match live.checked_add(bits) {
            Some(next) if next <= self.capacity => {
                self.live.set(next);
                if next > self.peak.get() {
                    self.peak.set(next);
                }
                Ok(())
            }
            _ => Err(Error::BudgetExceeded {
                requested: bits,
                live,
                capacity: self.capacity,
            }),
        }
    }

    fn give(&self, bits: u64) {
        let live = self.live.get();
        debug_assert!(bits <= live);
        self.live.set(live - bits);
    }

    pub fn alloc(&self, bits: u64) -> Result<Charge<'_>> {
        self.take(bits)?;
        Ok(Charge { budget: self, bits })
    }
}

/// Live allocation handle; releases its bits on drop.
#[derive(Debug)]
pub struct Charge<'b> {
    budget: &'b BitBudget,
    bits: u64,
}

impl<'b> Charge<'b> {
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn grow(&mut self, bits: u64) -> Result<()> {
        self.budget.take(bits)?;
        self.bits += bits;
        Ok(())
    }

    pub fn shrink(&mut self, bits: u64) {
        let bits = bits.min(self.bits);
        self.budget.give(bits);
        self.bits -= bits;
    }

    pub fn budget(&self) -> &'b BitBudget {
        self.budget
    }
}

impl Drop for Charge<'_> {
    fn drop(&mut self) {
        self.budget.give(self.bits);
    }
}

/// A vector whose live length is charged at `elem_bits` per element.
#[derive(Debug)]
pub struct WorkVec<'b, T> {
    data: Vec<T>,
    elem_bits: u64,
    charge: Charge<'b>,
}

impl<'b, T> WorkVec<'b, T> {
    pub fn new(budget: &'b BitBudget, elem_bits: u64) -> Result<Self> {
        Ok(WorkVec {
            data: Vec::new(),
            elem_bits,
            charge: budget.alloc(0)?,
        })
    }

    pub fn filled(budget: &'b BitBudget, elem_bits: u64, len: usize, v: T) -> Result<Self>
    where
        T: Clone,
    {
        let charge = budget.alloc(elem_bits * len as u64)?;
        Ok(WorkVec {
            data: vec![v; len],
            elem_bits,
            charge,
        })
    }

    pub fn push(&mut self, v: T) -> Result<()> {
        self.charge.grow(self.elem_bits)?;
        self.data.push(v);
        Ok(())
    }

    pub fn pop(&mut self) -> Option<T> {
        let v = self.data.pop()?;
        self.charge.shrink(self.elem_bits);
        Some(v)
    }

    pub fn clear(&mut self) {
        self.charge.shrink(self.elem_bits * self.data.len() as u64);
        self.data.clear();
    }

    pub fn truncate(&mut self, len: usize) {
        if len < self.data.len() {
            self.charge.shrink(self.elem_bits * (self.data.len() - len) as u64);
            self.data.truncate(len);
        }
    }

    pub fn insert(&mut self, at: usize, v: T) -> Result<()> {
        self.charge.grow(self.elem_bits)?;
        self.data.insert(at, v);
        Ok(())
    }

    pub fn remove(&mut self, at: usize) -> T {
        self.charge.shrink(self.elem_bits);
        self.data.remove(at)
    }

    /// Replaces `range` with `items`, adjusting the charge.
    pub fn splice(&mut self, range: std::ops::Range<usize>, items: &[T]) -> Result<()>
    where
        T: Clone,
    {
        let (old, new) = (range.len() as u64, items.len() as u64);
        if new > old {
            self.charge.grow((new - old) * self.elem_bits)?;
        } else {
            self.charge.shrink((old - new) * self.elem_bits);
        }
        self.data.splice(range, items.iter().cloned());
        Ok(())
    }

    pub fn extend_from_slice(&mut self, items: &[T]) -> Result<()>
    where
        T: Clone,
    {
        self.charge.grow(self.elem_bits * items.len() as u64)?;
        self.data.extend_from_slice(items);
        Ok(())
    }
}

impl<T> std::ops::Deref for WorkVec<'_, T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.data
    }
}

impl<T> std::ops::DerefMut for WorkVec<'_, T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.data
    }
}

const WORD: usize = 64;

/// Packed bit vector charged at one bit per position, rounded up to words.
#[derive(Debug)]
pub struct BitVector<'b> {
    len: usize,
    words: Vec<u64>,
    _charge: Charge<'b>,
}

impl<'b> BitVector<'b> {
    pub fn zeros(budget: &'b BitBudget, len: usize) -> Result<Self> {
        let nw = len.div_ceil(WORD);
        let charge = budget.alloc((nw * WORD) as u64)?;
        Ok(BitVector {
            len,
            words: vec![0; nw],
            _charge: charge,
        })
    }

    pub fn from_bits(budget: &'b BitBudget, bits: &[bool]) -> Result<Self> {
        let mut v = Self::zeros(budget, bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i);
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

const SUPER_BITS: usize = 1 << 12;
const WORDS_PER_SUPER: usize = SUPER_BITS / WORD;
/// Width of a word's rank relative to its superblock; ranks stay below 4096.
const REL_BITS: usize = 12;

/// Two-level rank directory over a [`BitVector`]: absolute ranks per 4096-bit
/// superblock, 12-bit relative ranks per word packed into `u64`s.
#[derive(Debug)]
pub struct RankSelect<'b> {
    bits: BitVector<'b>,
    supers: Vec<u64>,
    rel: Vec<u64>,
    ones: usize,
    _charge: Charge<'b>,
}

impl<'b> RankSelect<'b> {
    pub fn new(bits: BitVector<'b>) -> Result<Self> {
        let budget = bits._charge.budget();
        let nw = bits.words.len();
        let nsup = nw.div_ceil(WORDS_PER_SUPER);
        let rel_words = (nw * REL_BITS).div_ceil(WORD);
        let charge = budget.alloc(((nsup + rel_words) * WORD) as u64)?;
        let mut supers = Vec::with_capacity(nsup);
        let mut rel = vec![0u64; rel_words];
        let mut total = 0usize;
        let mut in_super = 0usize;
        for (w, &word) in bits.words.iter().enumerate() {
            if w % WORDS_PER_SUPER == 0 {
                supers.push(total as u64);
                in_super = 0;
            }
            put_packed(&mut rel, w, in_super as u64);
            in_super += word.count_ones() as usize;
            total += word.count_ones() as usize;
        }
        Ok(RankSelect {
            bits,
            supers,
            rel,
            ones: total,
            _charge: charge,
        })
    }

    pub fn len(&self) -> usize {
        self.bits.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits.len == 0
    }

    pub fn ones(&self) -> usize {
        self.ones
    }

    pub fn bits(&self) -> &BitVector<'b> {
        &self.bits
    }

    /// Directory bits beyond the raw vector.
    pub fn overhead_bits(&self) -> u64 {
        ((self.supers.len() + self.rel.len()) * WORD) as u64
    }

    fn word_rank(&self, w: usize) -> usize {
        self.supers[w / WORDS_PER_SUPER] as usize + get_packed(&self.rel, w) as usize
    }

    /// Number of set bits in `[0, i)`.
    pub fn rank(&self, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(Error::Usage(format!("rank({i}) beyond length {}", self.len())));
        }
        let w = i / WORD;
        if w == self.bits.words.len() {
            return Ok(self.ones);
        }
        let mask = (1u64 << (i % WORD)) - 1;
        Ok(self.word_rank(w) + (self.bits.words[w] & mask).count_ones() as usize)
    }

    /// Position of the `j`-th set bit, `j` counted from 1.
    pub fn select(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.ones {
            return Err(Error::NotFound);
        }
        let target = j - 1;
        // last superblock whose absolute rank is <= target
        let sb = self.supers.partition_point(|&r| r as usize <= target) - 1;
        let mut w = sb * WORDS_PER_SUPER;
        let end = ((sb + 1) * WORDS_PER_SUPER).min(self.bits.words.len());
        while w + 1 < end && self.word_rank(w + 1) <= target {
            w += 1;
        }
        let within = (target - self.word_rank(w)) as u32;
        Ok(w * WORD + select_in_word(self.bits.words[w], within) as usize)
    }

    /// Smallest set position `>= i`, or `None` when exhausted.
    pub fn next_one(&self, i: usize) -> Option<usize> {
        if i >= self.len() {
            return None;
        }
        let mut w = i / WORD;
        let mut word = self.bits.words[w] & (!0u64 << (i % WORD));
        loop {
            if word != 0 {
                return Some(w * WORD + word.trailing_zeros() as usize);
            }
            w += 1;
            if w >= self.bits.words.len() {
                return None;
            }
            word = self.bits.words[w];
        }
    }

    /// Set positions in ascending order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut at = 0;
        std::iter::from_fn(move || {
            let p = self.next_one(at)?;
            at = p + 1;
            Some(p)
        })
    }
}

fn put_packed(v: &mut [u64], i: usize, x: u64) {
    let bit = i * REL_BITS;
    let (w, o) = (bit / WORD, bit % WORD);
    v[w] |= x << o;
    if o + REL_BITS > WORD {
        v[w + 1] |= x >> (WORD - o);
    }
}

fn get_packed(v: &[u64], i: usize) -> u64 {
    let bit = i * REL_BITS;
    let (w, o) = (bit / WORD, bit % WORD);
    let mut x = v[w] >> o;
    if o + REL_BITS > WORD {
        x |= v[w + 1] << (WORD - o);
    }
    x & ((1 << REL_BITS) - 1)
}

/// Position of the `k`-th (0-based) set bit of `w`.
fn select_in_word(mut w: u64, k: u32) -> u32 {
    for _ in 0..k {
        w &= w - 1;
    }
    w.trailing_zeros()
}
