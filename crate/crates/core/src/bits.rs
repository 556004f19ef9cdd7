//! Fixed-width bit vectors over an enumerated ground set.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of `{0, .., width-1}`.
///
/// Ordering is canonical: by cardinality first, then lexicographically by the
/// ascending list of members. The empty set sorts first and the full set last.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits(FixedBitSet);

impl Bits {
    pub fn empty(width: usize) -> Self {
        Bits(FixedBitSet::with_capacity(width))
    }

    pub fn full(width: usize) -> Self {
        let mut set = FixedBitSet::with_capacity(width);
        set.insert_range(..);
        Bits(set)
    }

    /// Builds a set from member indices; `None` if any index is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, members: I) -> Option<Self> {
        let mut set = FixedBitSet::with_capacity(width);
        for i in members {
            if i >= width {
                return None;
            }
            set.insert(i);
        }
        Some(Bits(set))
    }

    pub fn from_predicate(width: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut set = FixedBitSet::with_capacity(width);
        for i in 0..width {
            if pred(i) {
                set.insert(i);
            }
        }
        Bits(set)
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.0.is_full()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.0.set(i, false);
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.0.is_subset(&other.0)
    }

    /// First index in `self & other` that is missing from `target`.
    pub fn first_outside(&self, other: &Bits, target: &Bits) -> Option<usize> {
        let blocks = self
            .0
            .as_slice()
            .iter()
            .zip(other.0.as_slice())
            .zip(target.0.as_slice());
        for (i, ((x, y), t)) in blocks.enumerate() {
            let stray = x & y & !t;
            if stray != 0 {
                return Some(i * usize::BITS as usize + stray.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn is_disjoint(&self, other: &Bits) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn complement(&self) -> Bits {
        let mut set = self.0.clone();
        set.toggle_range(..);
        Bits(set)
    }

    pub fn union(&self, other: &Bits) -> Bits {
        let mut set = self.0.clone();
        set.union_with(&other.0);
        Bits(set)
    }

    pub fn intersection(&self, other: &Bits) -> Bits {
        let mut set = self.0.clone();
        set.intersect_with(&other.0);
        Bits(set)
    }

    pub fn difference(&self, other: &Bits) -> Bits {
        let mut set = self.0.clone();
        set.difference_with(&other.0);
        Bits(set)
    }

    pub fn union_with(&mut self, other: &Bits) {
        self.0.union_with(&other.0);
    }

    /// Hex encoding of `sum(2^i for i in members)`, most significant digit
    /// first, zero-padded to `ceil(width / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.width().div_ceil(4).max(1);
        let mut out = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let mut nibble = 0u32;
            for b in 0..4 {
                let i = 4 * d + b;
                if i < self.width() && self.contains(i) {
                    nibble |= 1 << b;
                }
            }
            out.push(char::from_digit(nibble, 16).unwrap());
        }
        out
    }

    pub fn from_hex(width: usize, hex: &str) -> Option<Bits> {
        let mut set = FixedBitSet::with_capacity(width);
        for (d, c) in hex.chars().rev().enumerate() {
            let nibble = c.to_digit(16)?;
            for b in 0..4 {
                if nibble & (1 << b) != 0 {
                    let i = 4 * d + b;
                    if i >= width {
                        return None;
                    }
                    set.insert(i);
                }
            }
        }
        Some(Bits(set))
    }
}

impl Ord for Bits {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.ones().cmp(other.0.ones()))
            .then_with(|| self.width().cmp(&other.width()))
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ones()).finish()
    }
}
