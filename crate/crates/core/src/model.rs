//! Dependency models, antichains of dominant elements and enumeration of T(N).

use std::collections::btree_set;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::triplet::{dominates, Triplet};
use crate::universe::Universe;
use crate::varset::VarSet;

/// Cap on universe size for operations that materialize subsets of T(N).
pub const ENUMERATION_CAP: usize = 10;

/// A finite set of canonical triplets over one universe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DependencyModel {
    universe: Universe,
    elements: BTreeSet<Triplet>,
}

impl DependencyModel {
    pub fn new(universe: Universe) -> Self {
        DependencyModel {
            universe,
            elements: BTreeSet::new(),
        }
    }

    pub fn from_triplets<I>(universe: Universe, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = Triplet>,
    {
        let mut model = DependencyModel::new(universe);
        for t in triplets {
            if !model.universe.contains_set(t.support()) {
                return Err(Error::OutOfUniverse {
                    n: model.universe.n(),
                });
            }
            model.elements.insert(t);
        }
        Ok(model)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Panics if `t` mentions variables outside the universe.
    pub fn insert(&mut self, t: Triplet) -> bool {
        assert!(
            self.universe.contains_set(t.support()),
            "triplet outside the model's universe"
        );
        self.elements.insert(t)
    }

    pub fn remove(&mut self, t: &Triplet) -> bool {
        self.elements.remove(t)
    }

    pub fn contains(&self, t: &Triplet) -> bool {
        self.elements.contains(t)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in canonical order.
    pub fn iter(&self) -> btree_set::Iter<'_, Triplet> {
        self.elements.iter()
    }

    pub fn is_subset(&self, other: &DependencyModel) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub fn intersection(&self, other: &DependencyModel) -> Result<DependencyModel> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(DependencyModel {
            universe: self.universe.clone(),
            elements: self
                .elements
                .intersection(&other.elements)
                .copied()
                .collect(),
        })
    }

    pub fn union(&self, other: &DependencyModel) -> Result<DependencyModel> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(DependencyModel {
            universe: self.universe.clone(),
            elements: self.elements.union(&other.elements).copied().collect(),
        })
    }

    /// Whether `s ≺ t ∈ self` implies `s ∈ self`.
    pub fn is_downward_closed(&self) -> bool {
        self.elements
            .iter()
            .all(|t| dominated_triplets(t).all(|s| self.elements.contains(&s)))
    }
}

impl<'a> IntoIterator for &'a DependencyModel {
    type Item = &'a Triplet;
    type IntoIter = btree_set::Iter<'a, Triplet>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Pairwise ≺-incomparable triplets, standing for the downward closure they
/// generate. Kept sorted.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Antichain {
    elements: Vec<Triplet>,
}

impl Antichain {
    pub fn new() -> Self {
        Antichain::default()
    }

    /// The maximal elements among `triplets`.
    pub fn maximal_of<I: IntoIterator<Item = Triplet>>(triplets: I) -> Self {
        let mut candidates: Vec<Triplet> = triplets.into_iter().collect();
        candidates.sort_unstable();
        candidates.dedup();
        // a strictly dominated triplet always has a strictly smaller rank
        candidates.sort_by_key(|t| std::cmp::Reverse(rank(t)));
        let mut kept: Vec<Triplet> = Vec::new();
        for t in candidates {
            if !kept.iter().any(|k| dominates(k, &t)) {
                kept.push(t);
            }
        }
        kept.sort_unstable();
        Antichain { elements: kept }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Triplet> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[Triplet] {
        &self.elements
    }

    pub fn contains(&self, t: &Triplet) -> bool {
        self.elements.binary_search(t).is_ok()
    }

    /// Whether `t` lies in the downward closure of the antichain.
    pub fn covers(&self, t: &Triplet) -> bool {
        self.elements.iter().any(|d| dominates(d, t))
    }

    /// Adds `t` unless already covered, evicting the elements it dominates.
    /// Returns whether the antichain changed.
    pub fn insert(&mut self, t: Triplet) -> bool {
        if self.covers(&t) {
            return false;
        }
        self.elements.retain(|d| !dominates(&t, d));
        let pos = self.elements.binary_search(&t).unwrap_err();
        self.elements.insert(pos, t);
        true
    }

    /// The downward closure as an explicit model.
    pub fn expand(&self, universe: &Universe) -> Result<DependencyModel> {
        universe.check_cap(ENUMERATION_CAP)?;
        let mut model = DependencyModel::new(universe.clone());
        for d in &self.elements {
            if !universe.contains_set(d.support()) {
                return Err(Error::OutOfUniverse { n: universe.n() });
            }
            model.elements.extend(dominated_triplets(d));
        }
        Ok(model)
    }

    /// Whether no element dominates another.
    pub fn is_antichain(&self) -> bool {
        self.elements.iter().enumerate().all(|(i, a)| {
            self.elements
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !dominates(a, b))
        })
    }
}

impl<'a> IntoIterator for &'a Antichain {
    type Item = &'a Triplet;
    type IntoIter = std::slice::Iter<'a, Triplet>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

fn rank(t: &Triplet) -> (usize, usize) {
    (t.first().union(t.second()).len(), t.support().len())
}

/// The triplets of `m` dominated by no other element of `m`.
pub fn maximal_elements(m: &DependencyModel) -> Antichain {
    Antichain::maximal_of(m.iter().copied())
}

/// `{ s ∈ T(N) : t dominates s }`, which is also the semigraphoid closure of `{t}`.
pub fn dominated_set(universe: &Universe, t: &Triplet) -> Result<DependencyModel> {
    universe.check_cap(ENUMERATION_CAP)?;
    if !universe.contains_set(t.support()) {
        return Err(Error::OutOfUniverse { n: universe.n() });
    }
    Ok(DependencyModel {
        universe: universe.clone(),
        elements: dominated_triplets(t).collect(),
    })
}

/// Every triplet dominated by `t`, each exactly once, without a size cap.
pub fn dominated_triplets(t: &Triplet) -> impl Iterator<Item = Triplet> {
    let (a, b, c) = (t.first(), t.second(), t.cond());
    a.nonempty_subsets().flat_map(move |x| {
        b.nonempty_subsets().flat_map(move |y| {
            let free = a.difference(x).union(b.difference(y));
            free.subsets()
                .map(move |extra| Triplet::canonical(x, y, c.union(extra)))
        })
    })
}

/// `|T(N)|` for `|N| = n`: `(4^n − 2·3^n + 2^n) / 2`.
pub fn triplet_count(n: usize) -> u64 {
    let n = n as u32;
    (4u64.pow(n) + 2u64.pow(n) - 2 * 3u64.pow(n)) / 2
}

/// Streams every canonical triplet of the universe exactly once.
pub fn enumerate_triplets(universe: &Universe) -> Result<TripletEnumeration> {
    universe.check_cap(ENUMERATION_CAP)?;
    Ok(TripletEnumeration {
        n: universe.n(),
        code: 0,
        end: 4u32.pow(universe.n() as u32),
    })
}

/// Base-4 walk: digit `i` puts variable `i` in A, B, C or nowhere.
#[derive(Clone, Debug)]
pub struct TripletEnumeration {
    n: usize,
    code: u32,
    end: u32,
}

impl Iterator for TripletEnumeration {
    type Item = Triplet;

    fn next(&mut self) -> Option<Triplet> {
        while self.code < self.end {
            let mut code = self.code;
            self.code += 1;
            let mut sets = [VarSet::EMPTY; 3];
            for i in 0..self.n {
                let role = (code & 3) as usize;
                code >>= 2;
                if role < 3 {
                    sets[role] = sets[role].union(VarSet::singleton(i));
                }
            }
            let [a, b, c] = sets;
            if !a.is_empty() && !b.is_empty() && a < b {
                return Some(Triplet::canonical(a, b, c));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triplet::make_triplet;

    fn s(xs: &[usize]) -> VarSet {
        VarSet::from_indices(xs.iter().map(|x| x - 1))
    }

    fn t(a: &[usize], b: &[usize], c: &[usize]) -> Triplet {
        make_triplet(s(a), s(b), s(c)).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        for (n, expected) in [(1, 0), (2, 1), (3, 9), (4, 55), (5, 285)] {
            let u = Universe::numbered(n).unwrap();
            let all: BTreeSet<_> = enumerate_triplets(&u).unwrap().collect();
            assert_eq!(all.len() as u64, expected);
            assert_eq!(triplet_count(n), expected);
            assert_eq!(enumerate_triplets(&u).unwrap().count() as u64, expected);
        }
    }

    #[test]
    fn n3_listing() {
        // ⟨i,j|∅⟩ and ⟨i,j|k⟩ for the three pairs, plus ⟨i,{j,k}|∅⟩ for each i
        let u = Universe::numbered(3).unwrap();
        let listed: BTreeSet<_> = [
            t(&[1], &[2], &[]),
            t(&[1], &[3], &[]),
            t(&[2], &[3], &[]),
            t(&[1], &[2], &[3]),
            t(&[1], &[3], &[2]),
            t(&[2], &[3], &[1]),
            t(&[1], &[2, 3], &[]),
            t(&[2], &[1, 3], &[]),
            t(&[3], &[1, 2], &[]),
        ]
        .into();
        let all: BTreeSet<_> = enumerate_triplets(&u).unwrap().collect();
        assert_eq!(all, listed);
    }

    #[test]
    fn enumeration_cap() {
        let u = Universe::numbered(11).unwrap();
        assert!(matches!(
            enumerate_triplets(&u),
            Err(Error::UniverseTooLarge { n: 11, cap: 10 })
        ));
        assert!(dominated_set(&u, &t(&[1], &[2], &[])).is_err());
    }

    #[test]
    fn dominated_set_examples() {
        let u = Universe::numbered(3).unwrap();
        let single = dominated_set(&u, &t(&[1], &[2], &[3])).unwrap();
        assert_eq!(
            single.iter().copied().collect::<Vec<_>>(),
            vec![t(&[1], &[2], &[3])]
        );

        let five = dominated_set(&u, &t(&[1], &[2, 3], &[])).unwrap();
        let expected: BTreeSet<_> = [
            t(&[1], &[2, 3], &[]),
            t(&[1], &[2], &[]),
            t(&[1], &[2], &[3]),
            t(&[1], &[3], &[]),
            t(&[1], &[3], &[2]),
        ]
        .into();
        assert_eq!(five.iter().copied().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn maximal_elements_examples() {
        let u = Universe::numbered(4).unwrap();
        let top = t(&[1], &[2, 3], &[]);
        let down = dominated_set(&u, &top).unwrap();
        assert_eq!(maximal_elements(&down).as_slice(), &[top]);

        let pair =
            DependencyModel::from_triplets(u.clone(), [t(&[1], &[2], &[3]), t(&[1], &[3], &[4])])
                .unwrap();
        assert_eq!(maximal_elements(&pair).len(), 2);

        assert!(maximal_elements(&DependencyModel::new(u)).is_empty());
    }

    #[test]
    fn antichain_insert_evicts_dominated() {
        let mut a = Antichain::new();
        assert!(a.insert(t(&[1], &[2], &[])));
        assert!(a.insert(t(&[1], &[3], &[4])));
        assert!(!a.insert(t(&[1], &[2], &[])));
        assert!(a.insert(t(&[1], &[2, 3], &[])));
        assert_eq!(a.as_slice(), &[t(&[1], &[2, 3], &[]), t(&[1], &[3], &[4])]);
        assert!(a.is_antichain());
    }

    #[test]
    fn dominated_set_agrees_with_filter() {
        for n in 1..=5 {
            let u = Universe::numbered(n).unwrap();
            let all: Vec<_> = enumerate_triplets(&u).unwrap().collect();
            for x in &all {
                let filtered: BTreeSet<_> =
                    all.iter().filter(|y| dominates(x, y)).copied().collect();
                let direct = dominated_set(&u, x).unwrap();
                assert_eq!(direct.iter().copied().collect::<BTreeSet<_>>(), filtered);
                assert_eq!(dominated_triplets(x).count(), filtered.len());
            }
        }
    }

    #[test]
    fn dominance_is_a_partial_order() {
        for n in 1..=4 {
            let u = Universe::numbered(n).unwrap();
            let all: Vec<_> = enumerate_triplets(&u).unwrap().collect();
            for x in &all {
                assert!(dominates(x, x));
                for y in &all {
                    if dominates(x, y) && dominates(y, x) {
                        assert_eq!(x, y);
                    }
                    for z in &all {
                        if dominates(x, y) && dominates(y, z) {
                            assert!(dominates(x, z));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn maximal_then_expand_is_identity_on_antichains() {
        let u = Universe::numbered(4).unwrap();
        let all: Vec<_> = enumerate_triplets(&u).unwrap().collect();
        for (i, x) in all.iter().enumerate() {
            for y in &all[i..] {
                let chain = Antichain::maximal_of([*x, *y]);
                let expanded = chain.expand(&u).unwrap();
                assert!(expanded.is_downward_closed());
                assert_eq!(maximal_elements(&expanded), chain);
            }
        }
    }
}
