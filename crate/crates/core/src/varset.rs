//! Subsets of a universe as 16-bit masks.

use std::cmp::Ordering;
use std::fmt;

/// Maximum number of variables any universe may hold.
pub const MAX_VARS: usize = 16;

/// A set of variable indices, bit `i` standing for variable `i`.
///
/// The ordering is lexicographic on the sorted index sequence, so
/// `{0} < {0,1} < {1}`. Appending variables to a universe never changes the
/// relative order of existing sets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VarSet(u16);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub const fn from_bits(bits: u16) -> Self {
        VarSet(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    /// Panics if an index is `>= MAX_VARS`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut bits = 0u16;
        for i in indices {
            assert!(i < MAX_VARS, "variable index {i} out of range");
            bits |= 1 << i;
        }
        VarSet(bits)
    }

    pub fn singleton(i: usize) -> Self {
        Self::from_indices([i])
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VARS);
        if n == MAX_VARS {
            VarSet(u16::MAX)
        } else {
            VarSet((1u16 << n) - 1)
        }
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn contains(self, i: usize) -> bool {
        i < MAX_VARS && self.0 & (1 << i) != 0
    }

    pub const fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: VarSet) -> VarSet {
        VarSet(self.0 & other.0)
    }

    pub const fn difference(self, other: VarSet) -> VarSet {
        VarSet(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: VarSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Largest index plus one, or 0 for the empty set.
    pub const fn span(self) -> usize {
        (16 - self.0.leading_zeros()) as usize
    }

    pub fn iter(self) -> Indices {
        Indices(self.0)
    }

    /// Every subset of `self`, the empty set and `self` included.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(self.0),
        }
    }

    /// Every nonempty subset of `self`.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = VarSet> {
        self.subsets().filter(|s| !s.is_empty())
    }
}

impl Ord for VarSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        // Both share every index below the first difference `d`. The set
        // holding `d` continues with `d`; the other continues with something
        // larger, or stops and is then a proper prefix.
        let d = (self.0 ^ other.0).trailing_zeros();
        let above = !((2u32 << d) - 1) as u16;
        if self.0 & (1 << d) != 0 {
            if other.0 & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for VarSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VarSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VarSet::from_indices(iter)
    }
}

#[derive(Clone, Debug)]
pub struct Indices(u16);

impl Iterator for Indices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Indices {}

/// Descending enumeration of the subsets of a mask.
#[derive(Clone, Debug)]
pub struct Subsets {
    mask: u16,
    next: Option<u16>,
}

impl Iterator for Subsets {
    type Item = VarSet;

    fn next(&mut self) -> Option<VarSet> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & self.mask)
        };
        Some(VarSet(cur))
    }
}
