//! Plane-sweep geometry in the read-only random-access model.
//!
//! Every algorithm reads its input through a metered [`tape::Tape`] and keeps
//! all of its working state in structures charged against a
//! [`budget::BitBudget`] of `C * s` bits, where `s` is the caller's workspace
//! parameter and `C` is the per-algorithm constant in [`budget::constants`].
//!
//! The algorithms:
//!
//! * [`closest`]: planar closest pair.
//! * [`segx`]: intersections among arbitrary segments (enumerate and count).
//! * [`axcount`] / [`axenum`]: horizontal/vertical segment crossings.
//! * [`klee`]: area of a union of axis-parallel rectangles.
//!
//! [`oracle`] holds the brute-force references every result is checked against.

pub mod axcount;
pub mod axenum;
pub mod budget;
pub mod closest;
pub mod error;
pub mod exact;
pub mod gen;
pub mod geom;
pub mod grid;
pub mod klee;
pub mod navpile;
pub mod oracle;
pub mod par;
pub mod segx;
pub mod status;
pub mod stretch;
pub mod tape;

pub use budget::{lg, BitBudget};
pub use error::{Error, Result};
pub use tape::{Tape, View};

/// Result of a budgeted run together with the model-level measurements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome<T> {
    pub value: T,
    pub peak_bits: u64,
    pub capacity_bits: u64,
    pub tape_reads: u64,
}

impl<T> Outcome<T> {
    pub(crate) fn measured<R: tape::Record>(value: T, budget: &BitBudget, tape: &Tape<R>, reads_before: u64) -> Self {
        Outcome {
            value,
            peak_bits: budget.peak_bits(),
            capacity_bits: budget.capacity_bits(),
            tape_reads: tape.read_count() - reads_before,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        Outcome {
            value: f(self.value),
            peak_bits: self.peak_bits,
            capacity_bits: self.capacity_bits,
            tape_reads: self.tape_reads,
        }
    }
}
