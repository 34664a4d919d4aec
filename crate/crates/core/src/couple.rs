//! Closure of a couple of CI-statements through its dominant elements.
//!
//! For `u = ⟨A,B|C⟩` and `v = ⟨I,J|K⟩` the closure is either the union of
//! the two dominated sets, or, when `C ⊆ I∪J∪K` and `K ⊆ A∪B∪C`, the
//! downward closure of at most 19 explicit candidates built from the six
//! sets.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Antichain;
use crate::triplet::{dominates, Triplet};
use crate::varset::VarSet;

/// The six component sets of a couple `⟨A,B|C⟩`, `⟨I,J|K⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SixSets {
    pub a: VarSet,
    pub b: VarSet,
    pub c: VarSet,
    pub i: VarSet,
    pub j: VarSet,
    pub k: VarSet,
}

impl SixSets {
    pub fn of(u: &Triplet, v: &Triplet) -> Self {
        SixSets {
            a: u.first(),
            b: u.second(),
            c: u.cond(),
            i: v.first(),
            j: v.second(),
            k: v.cond(),
        }
    }

    /// `C ∖ (I∪J∪K) = ∅ = K ∖ (A∪B∪C)`.
    pub fn overlapping(&self) -> bool {
        let uv = self.i.union(self.j).union(self.k);
        let ua = self.a.union(self.b).union(self.c);
        self.c.is_subset(uv) && self.k.is_subset(ua)
    }

    fn slots(&self) -> [VarSet; 6] {
        [self.a, self.b, self.c, self.i, self.j, self.k]
    }

    fn from_slots(s: [VarSet; 6]) -> Self {
        SixSets {
            a: s[0],
            b: s[1],
            c: s[2],
            i: s[3],
            j: s[4],
            k: s[5],
        }
    }

    /// Relabels the sets: slot `p` of the result is slot `perm[p]` of `self`.
    pub fn permuted(&self, perm: &Perm) -> Self {
        let s = self.slots();
        Self::from_slots(perm.map(|p| s[p]))
    }
}

/// A formula value before the nonemptiness filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawTriplet {
    pub first: VarSet,
    pub second: VarSet,
    pub cond: VarSet,
}

impl RawTriplet {
    /// Unordered reading of the first two components.
    pub fn normalized(&self) -> (VarSet, VarSet, VarSet) {
        if self.first <= self.second {
            (self.first, self.second, self.cond)
        } else {
            (self.second, self.first, self.cond)
        }
    }

    /// `None` when a leading component is empty.
    pub fn to_triplet(&self) -> Option<Triplet> {
        Triplet::new(self.first, self.second, self.cond).ok()
    }
}

fn raw(first: VarSet, second: VarSet, cond: VarSet) -> RawTriplet {
    RawTriplet {
        first,
        second,
        cond,
    }
}

pub type Formula = fn(&SixSets) -> RawTriplet;

/// The 19 candidate dominant elements, index `k` holding formula `k + 1`.
pub const FORMULAS: [Formula; 19] = [
    |s| raw(s.a, s.b, s.c),
    |s| raw(s.i, s.j, s.k),
    |s| {
        raw(
            s.a.intersection(s.i),
            s.j.difference(s.c).union(s.b.intersection(s.i.union(s.k))),
            s.c.union(s.a.intersection(s.k)),
        )
    },
    |s| {
        raw(
            s.a.intersection(s.j),
            s.i.difference(s.c).union(s.b.intersection(s.j.union(s.k))),
            s.c.union(s.a.intersection(s.k)),
        )
    },
    |s| {
        raw(
            s.b.intersection(s.i),
            s.j.difference(s.c).union(s.a.intersection(s.i.union(s.k))),
            s.c.union(s.b.intersection(s.k)),
        )
    },
    |s| {
        raw(
            s.b.intersection(s.j),
            s.i.difference(s.c).union(s.a.intersection(s.j.union(s.k))),
            s.c.union(s.b.intersection(s.k)),
        )
    },
    |s| {
        raw(
            s.a.intersection(s.i),
            s.b.difference(s.k).union(s.j.intersection(s.a.union(s.c))),
            s.k.union(s.c.intersection(s.i)),
        )
    },
    |s| {
        raw(
            s.b.intersection(s.i),
            s.a.difference(s.k).union(s.j.intersection(s.b.union(s.c))),
            s.k.union(s.c.intersection(s.i)),
        )
    },
    |s| {
        raw(
            s.a.intersection(s.j),
            s.b.difference(s.k).union(s.i.intersection(s.a.union(s.c))),
            s.k.union(s.c.intersection(s.j)),
        )
    },
    |s| {
        raw(
            s.b.intersection(s.j),
            s.a.difference(s.k).union(s.i.intersection(s.b.union(s.c))),
            s.k.union(s.c.intersection(s.j)),
        )
    },
    |s| {
        raw(
            s.a.intersection(s.i),
            s.b.union(s.a.intersection(s.j)),
            s.c.union(s.a.intersection(s.k)),
        )
    },
    |s| {
        raw(
            s.a.intersection(s.j),
            s.b.union(s.a.intersection(s.i)),
            s.c.union(s.a.intersection(s.k)),
        )
    },
    |s| {
        raw(
            s.b.intersection(s.i),
            s.a.union(s.b.intersection(s.j)),
            s.c.union(s.b.intersection(s.k)),
        )
    },
    |s| {
        raw(
            s.b.intersection(s.j),
            s.a.union(s.b.intersection(s.i)),
            s.c.union(s.b.intersection(s.k)),
        )
    },
    |s| {
        raw(
            s.a.intersection(s.j),
            s.i.union(s.b.intersection(s.j)),
            s.k.union(s.c.intersection(s.j)),
        )
    },
    |s| {
        raw(
            s.b.intersection(s.j),
            s.i.union(s.a.intersection(s.j)),
            s.k.union(s.c.intersection(s.j)),
        )
    },
    |s| {
        raw(
            s.a.intersection(s.i),
            s.j.union(s.b.intersection(s.i)),
            s.k.union(s.c.intersection(s.i)),
        )
    },
    |s| {
        raw(
            s.b.intersection(s.i),
            s.j.union(s.a.intersection(s.i)),
            s.k.union(s.c.intersection(s.i)),
        )
    },
    |s| {
        raw(
            s.a.intersection(s.i).union(s.b.intersection(s.j)),
            s.a.intersection(s.j).union(s.b.intersection(s.i)),
            s.c.union(s.k),
        )
    },
];

/// Formula `index` (1-based) evaluated on `sets`.
pub fn evaluate_formula(index: usize, sets: &SixSets) -> RawTriplet {
    FORMULAS[index - 1](sets)
}

/// A candidate triplet and every formula index producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub triplet: Triplet,
    pub formulas: Vec<u8>,
}

/// Evaluates the 19 formulas on the couple, dropping values with an empty
/// leading component and merging duplicates.
pub fn lemma3_candidates(u: &Triplet, v: &Triplet) -> Result<Vec<Candidate>> {
    let sets = SixSets::of(u, v);
    if !sets.overlapping() {
        return Err(Error::PreconditionViolated(
            "requires C ⊆ I∪J∪K and K ⊆ A∪B∪C".into(),
        ));
    }
    let mut out: Vec<Candidate> = Vec::new();
    for (k, formula) in FORMULAS.iter().enumerate() {
        let Some(t) = formula(&sets).to_triplet() else {
            continue;
        };
        let index = (k + 1) as u8;
        match out.iter_mut().find(|c| c.triplet == t) {
            Some(c) => c.formulas.push(index),
            None => out.push(Candidate {
                triplet: t,
                formulas: vec![index],
            }),
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoupleCase {
    /// `C ⊄ I∪J∪K` or `K ⊄ A∪B∪C`: only the antecedents dominate.
    Disjoint,
    /// Both conditioning sets are covered: the 19 formulas apply.
    Overlapping,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupleClosure {
    pub case: CoupleCase,
    pub dominants: Antichain,
    /// Formula indices behind each dominant, aligned with
    /// `dominants.as_slice()`. Indices 1 and 2 are the antecedents.
    pub provenance: Vec<Vec<u8>>,
}

impl CoupleClosure {
    /// Whether `t` belongs to the closure.
    pub fn contains(&self, t: &Triplet) -> bool {
        self.dominants.covers(t)
    }
}

/// The dominant elements of the semigraphoid closure of `{u, v}`.
pub fn closure_two_dominants(u: &Triplet, v: &Triplet) -> CoupleClosure {
    let sets = SixSets::of(u, v);
    let (case, candidates) = if sets.overlapping() {
        let cands = lemma3_candidates(u, v).expect("hypothesis checked");
        (CoupleCase::Overlapping, cands)
    } else {
        let mut cands = vec![Candidate {
            triplet: *u,
            formulas: vec![1],
        }];
        if u == v {
            cands[0].formulas.push(2);
        } else {
            cands.push(Candidate {
                triplet: *v,
                formulas: vec![2],
            });
        }
        (CoupleCase::Disjoint, cands)
    };
    let dominants = Antichain::maximal_of(candidates.iter().map(|c| c.triplet));
    let provenance = dominants
        .iter()
        .map(|d| {
            candidates
                .iter()
                .find(|c| c.triplet == *d)
                .map(|c| c.formulas.clone())
                .unwrap_or_default()
        })
        .collect();
    CoupleClosure {
        case,
        dominants,
        provenance,
    }
}

/// Whether `{u, v}` derives (equivalently, probabilistically implies) `t`.
pub fn membership_two(u: &Triplet, v: &Triplet, t: &Triplet) -> bool {
    closure_two_dominants(u, v)
        .dominants
        .iter()
        .any(|d| dominates(d, t))
}

/// A relabelling of the slots `[A, B, C, I, J, K]`.
pub type Perm = [usize; 6];

pub const SWAP_AB: Perm = [1, 0, 2, 3, 4, 5];
pub const SWAP_IJ: Perm = [0, 1, 2, 4, 3, 5];
pub const SWAP_ROLES: Perm = [3, 4, 5, 0, 1, 2];

/// Formulas whose orbits cover the table.
pub const BASE_FORMULAS: [usize; 4] = [1, 3, 11, 19];

/// The group generated by [`SWAP_AB`], [`SWAP_IJ`] and [`SWAP_ROLES`].
pub fn symmetry_group() -> Vec<Perm> {
    let identity: Perm = [0, 1, 2, 3, 4, 5];
    let mut group = vec![identity];
    let mut frontier = vec![identity];
    while let Some(p) = frontier.pop() {
        for g in [SWAP_AB, SWAP_IJ, SWAP_ROLES] {
            let q: Perm = g.map(|k| p[k]);
            if !group.contains(&q) {
                group.push(q);
                frontier.push(q);
            }
        }
    }
    group.sort_unstable();
    group
}

/// Random six-set systems over `n` variables satisfying the overlap
/// hypothesis, with `A, B, I, J` nonempty.
pub fn random_set_systems(n: usize, count: usize, seed: u64) -> Vec<SixSets> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut s = [VarSet::EMPTY; 6];
        for var in 0..n {
            // role in the first triplet (3 = absent), then in the second
            let r1 = rng.random_range(0..4usize);
            let r2 = loop {
                let r2 = rng.random_range(0..4usize);
                let c_uncovered = r1 == 2 && r2 == 3;
                let k_uncovered = r2 == 2 && r1 == 3;
                if !c_uncovered && !k_uncovered {
                    break r2;
                }
            };
            if r1 < 3 {
                s[r1] = s[r1].union(VarSet::singleton(var));
            }
            if r2 < 3 {
                s[3 + r2] = s[3 + r2].union(VarSet::singleton(var));
            }
        }
        let sets = SixSets::from_slots(s);
        if [sets.a, sets.b, sets.i, sets.j]
            .iter()
            .all(|x| !x.is_empty())
        {
            debug_assert!(sets.overlapping());
            out.push(sets);
        }
    }
    out
}

/// Orbit of each base formula under the symmetry group, as table indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub orbits: Vec<(usize, BTreeSet<usize>)>,
    /// `(base, perm)` pairs whose permuted formula matched no table row, or
    /// more than one.
    pub unmatched: Vec<(usize, Perm)>,
}

impl OrbitReport {
    pub fn covered(&self) -> BTreeSet<usize> {
        self.orbits
            .iter()
            .flat_map(|(_, o)| o.iter().copied())
            .collect()
    }

    /// Every permuted base formula is a table row, and the orbits partition
    /// `{1, .., 19}`.
    pub fn is_consistent(&self) -> bool {
        let total: usize = self.orbits.iter().map(|(_, o)| o.len()).sum();
        self.unmatched.is_empty() && total == 19 && self.covered() == (1..=19).collect()
    }
}

/// Regenerates the table from [`BASE_FORMULAS`], identifying formulas by
/// value on random set systems.
pub fn orbit_report() -> OrbitReport {
    let samples = random_set_systems(9, 256, 0x5eed_0019);
    let table: Vec<Vec<_>> = (1..=19)
        .map(|k| {
            samples
                .iter()
                .map(|s| evaluate_formula(k, s).normalized())
                .collect()
        })
        .collect();
    let group = symmetry_group();
    let mut orbits = Vec::new();
    let mut unmatched = Vec::new();
    for base in BASE_FORMULAS {
        let mut orbit = BTreeSet::new();
        for perm in &group {
            let values: Vec<_> = samples
                .iter()
                .map(|s| evaluate_formula(base, &s.permuted(perm)).normalized())
                .collect();
            let hits: Vec<usize> = (1..=19).filter(|&k| table[k - 1] == values).collect();
            match hits.as_slice() {
                [k] => {
                    orbit.insert(*k);
                }
                _ => unmatched.push((base, *perm)),
            }
        }
        orbits.push((base, orbit));
    }
    OrbitReport { orbits, unmatched }
}

/// Whether the symmetry orbits of formulas 1, 3, 11 and 19 reproduce the
/// 19-formula table exactly.
pub fn orbit_selfcheck() -> bool {
    orbit_report().is_consistent()
}
