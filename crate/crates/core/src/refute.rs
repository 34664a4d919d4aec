//! Randomized search for measures refuting a candidate implication.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{
    ci_holds, compose, markov_pair_measure, random_measure_with, DiscreteMeasure, WITNESS_CAP,
};
use crate::model::{dominated_triplets, enumerate_triplets, DependencyModel};
use crate::triplet::{dominates, Triplet};
use crate::universe::Universe;

/// A measure containing every antecedent in its CI-model but not the
/// consequent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicationWitness {
    pub measure: DiscreteMeasure,
    pub holds: Vec<Triplet>,
    pub fails: Triplet,
    /// Index of the trial that produced the measure.
    pub trial: usize,
}

impl ImplicationWitness {
    /// Re-checks the stored verdicts on the stored measure.
    pub fn verify(&self) -> bool {
        self.holds.iter().all(|t| ci_holds(&self.measure, t))
            && !ci_holds(&self.measure, &self.fails)
    }
}

/// Searches `trials` seeded measures for one whose CI-model contains `m`
/// but not `t`.
///
/// Trials cycle through four families: Markov-pair measures of triplets
/// whose dominated set contains `m` and misses `t`, sparse uniform
/// measures, small-weight random measures, and compositions. The witness
/// with the lowest trial index is returned regardless of scheduling.
/// `None` proves nothing.
pub fn refute_implication(
    m: &DependencyModel,
    t: &Triplet,
    trials: usize,
    seed: u64,
) -> Result<Option<ImplicationWitness>> {
    let universe = m.universe();
    universe.check_cap(WITNESS_CAP)?;
    if !universe.contains_set(t.support()) {
        return Err(Error::OutOfUniverse { n: universe.n() });
    }
    let antecedents: Vec<Triplet> = m.iter().copied().collect();
    let separating: Vec<Triplet> = enumerate_triplets(universe)?
        .filter(|w| !dominates(w, t) && antecedents.iter().all(|a| dominates(w, a)))
        .collect();
    let search = Search {
        universe,
        antecedents: &antecedents,
        target: t,
        separating: &separating,
        seed,
    };
    Ok((0..trials)
        .into_par_iter()
        .find_map_first(|trial| search.attempt(trial)))
}

struct Search<'a> {
    universe: &'a Universe,
    antecedents: &'a [Triplet],
    target: &'a Triplet,
    separating: &'a [Triplet],
    seed: u64,
}

impl Search<'_> {
    fn attempt(&self, trial: usize) -> Option<ImplicationWitness> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        let measure = match trial % 4 {
            0 => self.markov(&mut rng).or_else(|| self.sparse(&mut rng)),
            1 => self.sparse(&mut rng),
            2 => self.small_weights(&mut rng),
            _ => {
                let left = self.sparse(&mut rng)?;
                let right = if rng.random_bool(0.5) {
                    self.markov(&mut rng).or_else(|| self.sparse(&mut rng))?
                } else {
                    self.small_weights(&mut rng)?
                };
                compose(&left, &right).ok()
            }
        }?;
        let witness = ImplicationWitness {
            holds: self.antecedents.to_vec(),
            fails: *self.target,
            measure,
            trial,
        };
        witness.verify().then_some(witness)
    }

    fn cards(&self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        (0..self.universe.n())
            .map(|_| if rng.random_bool(0.75) { 2 } else { 3 })
            .collect()
    }

    fn markov(&self, rng: &mut ChaCha8Rng) -> Option<DiscreteMeasure> {
        if self.separating.is_empty() {
            return None;
        }
        let w = self.separating[rng.random_range(0..self.separating.len())];
        debug_assert!(dominated_triplets(&w).all(|s| s != *self.target));
        markov_pair_measure(&w, self.universe, rng.next_u64()).ok()
    }

    fn sparse(&self, rng: &mut ChaCha8Rng) -> Option<DiscreteMeasure> {
        let cards = self.cards(rng);
        let zero_fraction = rng.random_range(0.4..0.85);
        random_measure_with(self.universe, &cards, rng.next_u64(), zero_fraction, 1).ok()
    }

    fn small_weights(&self, rng: &mut ChaCha8Rng) -> Option<DiscreteMeasure> {
        let cards = self.cards(rng);
        let zero_fraction = [0.0, 0.25, 0.5][rng.random_range(0..3usize)];
        random_measure_with(self.universe, &cards, rng.next_u64(), zero_fraction, 3).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couple::membership_two;
    use crate::triplet::make_triplet;
    use crate::varset::VarSet;

    fn s(xs: &[usize]) -> VarSet {
        VarSet::from_indices(xs.iter().map(|x| x - 1))
    }

    fn t(a: &[usize], b: &[usize], c: &[usize]) -> Triplet {
        make_triplet(s(a), s(b), s(c)).unwrap()
    }

    fn model(n: usize, ts: &[Triplet]) -> DependencyModel {
        DependencyModel::from_triplets(Universe::numbered(n).unwrap(), ts.iter().copied()).unwrap()
    }

    #[test]
    fn finds_marginal_but_not_conditional_independence() {
        let m = model(3, &[t(&[1], &[2], &[])]);
        let w = refute_implication(&m, &t(&[1], &[2], &[3]), 50, 1)
            .unwrap()
            .unwrap();
        assert!(w.verify());
        assert!(ci_holds(&w.measure, &t(&[1], &[2], &[])));
    }

    #[test]
    fn empty_antecedents_are_refuted_at_once() {
        let m = model(3, &[]);
        let w = refute_implication(&m, &t(&[1], &[2, 3], &[]), 10, 2)
            .unwrap()
            .unwrap();
        assert_eq!(w.trial, 0);
    }

    #[test]
    fn sound_couples_have_no_witness() {
        let u = t(&[1], &[2], &[3]);
        let v = t(&[1], &[3], &[]);
        let target = t(&[1], &[3], &[2]);
        assert!(membership_two(&u, &v, &target));
        let m = model(3, &[u, v]);
        assert!(refute_implication(&m, &target, 200, 3).unwrap().is_none());
    }

    #[test]
    fn result_is_deterministic() {
        let m = model(4, &[t(&[1], &[2], &[3])]);
        let target = t(&[1], &[2], &[]);
        let a = refute_implication(&m, &target, 40, 5).unwrap();
        let b = refute_implication(&m, &target, 40, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.is_some());
    }

    #[test]
    fn universe_cap() {
        let m = model(7, &[]);
        assert!(matches!(
            refute_implication(&m, &t(&[1], &[2], &[]), 1, 0),
            Err(Error::UniverseTooLarge { cap: 6, .. })
        ));
    }
}
