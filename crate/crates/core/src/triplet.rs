//! CI-statements `⟨A,B|C⟩` and the dominance order.

use std::fmt;

use crate::error::{Error, Result};
use crate::universe::Universe;
use crate::varset::VarSet;

/// A canonical CI-statement: `first` independent of `second` given `cond`.
///
/// Components are pairwise disjoint, `first` and `second` are nonempty and
/// `first < second` in the [`VarSet`] order. Symmetry is therefore built into
/// the representation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Triplet {
    first: VarSet,
    second: VarSet,
    cond: VarSet,
}

/// Builds the canonical triplet `⟨first, second | cond⟩`, swapping the first
/// two components when needed.
pub fn make_triplet(first: VarSet, second: VarSet, cond: VarSet) -> Result<Triplet> {
    if first.is_empty() || second.is_empty() {
        return Err(Error::EmptyComponent);
    }
    if !first.is_disjoint(second) || !first.is_disjoint(cond) || !second.is_disjoint(cond) {
        return Err(Error::NotDisjoint);
    }
    Ok(Triplet::canonical(first, second, cond))
}

impl Triplet {
    pub fn new(first: VarSet, second: VarSet, cond: VarSet) -> Result<Self> {
        make_triplet(first, second, cond)
    }

    /// Caller guarantees the triplet invariants apart from the ordering.
    pub(crate) fn canonical(first: VarSet, second: VarSet, cond: VarSet) -> Self {
        debug_assert!(!first.is_empty() && !second.is_empty());
        debug_assert!(first.is_disjoint(second) && cond.is_disjoint(first.union(second)));
        if first <= second {
            Triplet {
                first,
                second,
                cond,
            }
        } else {
            Triplet {
                first: second,
                second: first,
                cond,
            }
        }
    }

    pub fn first(&self) -> VarSet {
        self.first
    }

    pub fn second(&self) -> VarSet {
        self.second
    }

    pub fn cond(&self) -> VarSet {
        self.cond
    }

    /// `A ∪ B ∪ C`.
    pub fn support(&self) -> VarSet {
        self.first.union(self.second).union(self.cond)
    }

    /// Both readings `(A, B)` and `(B, A)`, tagged with whether they are swapped.
    pub fn orientations(&self) -> [(bool, VarSet, VarSet); 2] {
        [
            (false, self.first, self.second),
            (true, self.second, self.first),
        ]
    }

    /// The components in the given orientation.
    pub fn oriented(&self, swapped: bool) -> (VarSet, VarSet, VarSet) {
        if swapped {
            (self.second, self.first, self.cond)
        } else {
            (self.first, self.second, self.cond)
        }
    }

    /// Whether `self` dominates `other` (reflexive).
    pub fn dominates(&self, other: &Triplet) -> bool {
        dominates(self, other)
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> DisplayTriplet<'a> {
        DisplayTriplet {
            triplet: self,
            universe,
        }
    }
}

/// `⟨X,Y|Z⟩ ≺ ⟨A,B|C⟩`: `X∪Y∪Z ⊆ A∪B∪C`, `C ⊆ Z`, and `X,Y` embed into
/// `A,B` in one of the two orders. Inclusions are non-strict, so every
/// triplet dominates itself.
pub fn dominates(big: &Triplet, small: &Triplet) -> bool {
    small.support().is_subset(big.support())
        && big.cond.is_subset(small.cond)
        && ((small.first.is_subset(big.first) && small.second.is_subset(big.second))
            || (small.first.is_subset(big.second) && small.second.is_subset(big.first)))
}

pub struct DisplayTriplet<'a> {
    triplet: &'a Triplet,
    universe: &'a Universe,
}

impl fmt::Display for DisplayTriplet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.universe;
        let t = self.triplet;
        write!(
            f,
            "{} ; {}",
            u.display_set(t.first),
            u.display_set(t.second)
        )?;
        if !t.cond.is_empty() {
            write!(f, " | {}", u.display_set(t.cond))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // variables are 1-based in these tests, matching the text examples
    fn s(xs: &[usize]) -> VarSet {
        VarSet::from_indices(xs.iter().map(|x| x - 1))
    }

    fn t(a: &[usize], b: &[usize], c: &[usize]) -> Triplet {
        make_triplet(s(a), s(b), s(c)).unwrap()
    }

    #[test]
    fn make_triplet_swaps_into_canonical_order() {
        let x = make_triplet(s(&[2]), s(&[1]), VarSet::EMPTY).unwrap();
        assert_eq!(x.first(), s(&[1]));
        assert_eq!(x.second(), s(&[2]));
    }

    #[test]
    fn make_triplet_errors() {
        assert_eq!(
            make_triplet(s(&[1]), s(&[2]), s(&[1])),
            Err(Error::NotDisjoint)
        );
        assert_eq!(
            make_triplet(s(&[1]), VarSet::EMPTY, s(&[3])),
            Err(Error::EmptyComponent)
        );
        assert_eq!(
            make_triplet(s(&[1, 2]), s(&[2]), VarSet::EMPTY),
            Err(Error::NotDisjoint)
        );
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let x = t(&[3, 4], &[1], &[2]);
        assert_eq!(make_triplet(x.first(), x.second(), x.cond()).unwrap(), x);
        assert_eq!(make_triplet(x.second(), x.first(), x.cond()).unwrap(), x);
    }

    #[test]
    fn dominance_examples() {
        let big = t(&[1, 2], &[3, 4], &[5]);
        let small = t(&[1], &[3, 4], &[2, 5]);
        assert!(dominates(&big, &small));
        assert!(!dominates(&small, &big));
        assert!(!dominates(&t(&[1], &[2], &[3]), &t(&[1], &[2], &[])));
        assert!(dominates(&big, &big));
        // swapped embedding
        assert!(dominates(&t(&[1], &[2, 3], &[]), &t(&[3], &[1], &[2])));
    }

    #[test]
    fn display_uses_names() {
        let u = Universe::numbered(5).unwrap();
        assert_eq!(
            t(&[1, 2], &[3], &[4, 5]).display(&u).to_string(),
            "1,2 ; 3 | 4,5"
        );
        assert_eq!(t(&[2], &[1], &[]).display(&u).to_string(), "1 ; 2");
    }
}
