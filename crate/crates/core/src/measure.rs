//! Exact integer-weighted discrete measures and their CI-models.
//!
//! `P(x) = w(x) / S` with `S = Σ w`. CI identities are homogeneous of degree
//! two, so they are checked on raw weight sums with `w^∅ := S`.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{dominated_set, enumerate_triplets, DependencyModel, ENUMERATION_CAP};
use crate::triplet::Triplet;
use crate::universe::Universe;
use crate::varset::VarSet;

/// Largest admissible total weight; keeps `w_abc · w_c` within `u128`.
pub const MAX_TOTAL_WEIGHT: u64 = 1 << 31;
/// Default ceiling on dense table sizes (composition, full enumeration).
pub const DEFAULT_CELL_BUDGET: u128 = 10_000_000;
/// Universe cap for witness construction and refutation search.
pub const WITNESS_CAP: usize = 6;
pub const DEFAULT_MAX_WEIGHT: u64 = 16;
pub const DEFAULT_WITNESS_RETRIES: usize = 5;

pub type State = Vec<u32>;

/// A sparse joint weight table over finite state spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure {
    universe: Universe,
    cards: Vec<u32>,
    weights: BTreeMap<State, u64>,
    total: u64,
}

impl DiscreteMeasure {
    /// Zero weights are dropped; duplicate states are an error.
    pub fn new<I>(universe: Universe, cards: Vec<u32>, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = (State, u64)>,
    {
        if cards.len() != universe.n() {
            return Err(Error::InvalidMeasure(format!(
                "{} cardinalities for {} variables",
                cards.len(),
                universe.n()
            )));
        }
        if let Some(i) = cards.iter().position(|&c| c == 0) {
            return Err(Error::InvalidMeasure(format!(
                "variable {} has an empty state space",
                universe.name(i)
            )));
        }
        let mut weights = BTreeMap::new();
        let mut total: u128 = 0;
        for (state, w) in cells {
            if state.len() != cards.len() || state.iter().zip(&cards).any(|(x, c)| x >= c) {
                return Err(Error::InvalidMeasure(format!(
                    "state {state:?} out of range"
                )));
            }
            if weights.contains_key(&state) {
                return Err(Error::InvalidMeasure(format!("duplicate state {state:?}")));
            }
            total += w as u128;
            if total > MAX_TOTAL_WEIGHT as u128 {
                return Err(Error::WeightOverflow { total });
            }
            if w > 0 {
                weights.insert(state, w);
            }
        }
        if total == 0 {
            return Err(Error::InvalidMeasure("total weight is zero".into()));
        }
        Ok(DiscreteMeasure {
            universe,
            cards,
            weights,
            total: total as u64,
        })
    }

    /// Builds a measure by evaluating `weight` on every state.
    pub fn from_fn<F>(universe: Universe, cards: Vec<u32>, mut weight: F) -> Result<Self>
    where
        F: FnMut(&[u32]) -> u64,
    {
        check_cells(&cards, DEFAULT_CELL_BUDGET)?;
        let cells: Vec<(State, u64)> = states(&cards)
            .map(|s| {
                let w = weight(&s);
                (s, w)
            })
            .collect();
        Self::new(universe, cards, cells)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn cards(&self) -> &[u32] {
        &self.cards
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn weight(&self, state: &[u32]) -> u64 {
        self.weights.get(state).copied().unwrap_or(0)
    }

    /// Nonzero cells in lexicographic state order.
    pub fn cells(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.weights.iter().map(|(s, w)| (s.as_slice(), *w))
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.weights.len() as u128 == cell_count(&self.cards)
    }

    /// All weights multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidMeasure("zero scale factor".into()));
        }
        let total = self.total as u128 * factor as u128;
        if total > MAX_TOTAL_WEIGHT as u128 {
            return Err(Error::WeightOverflow { total });
        }
        Ok(DiscreteMeasure {
            universe: self.universe.clone(),
            cards: self.cards.clone(),
            weights: self
                .weights
                .iter()
                .map(|(s, w)| (s.clone(), w * factor))
                .collect(),
            total: total as u64,
        })
    }

    /// Weight sums of the marginal on `set`, keyed by the states of its
    /// members in index order. The empty set maps `[]` to `S`.
    pub fn marginal_weights(&self, set: VarSet) -> HashMap<State, u128> {
        let idx: Vec<usize> = set.iter().collect();
        let mut out: HashMap<State, u128> = HashMap::new();
        for (state, &w) in &self.weights {
            let key: State = idx.iter().map(|&i| state[i]).collect();
            *out.entry(key).or_default() += w as u128;
        }
        out
    }
}

fn cell_count(cards: &[u32]) -> u128 {
    cards.iter().map(|&c| c as u128).product()
}

fn check_cells(cards: &[u32], budget: u128) -> Result<()> {
    let cells = cell_count(cards);
    if cells > budget {
        Err(Error::StateSpaceTooLarge { cells, budget })
    } else {
        Ok(())
    }
}

/// Every state of the product space, lexicographically.
pub fn states(cards: &[u32]) -> impl Iterator<Item = State> + '_ {
    let mut next = (!cards.contains(&0)).then(|| vec![0u32; cards.len()]);
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        for pos in (0..cards.len()).rev() {
            succ[pos] += 1;
            if succ[pos] < cards[pos] {
                next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(cur)
    })
}

/// The marginal measure on `set`, over the restricted universe.
pub fn marginal(p: &DiscreteMeasure, set: VarSet) -> Result<DiscreteMeasure> {
    if set.is_empty() {
        return Err(Error::EmptyMarginalSet);
    }
    if !p.universe.contains_set(set) {
        return Err(Error::OutOfUniverse { n: p.universe.n() });
    }
    let universe = p.universe.restrict(set)?;
    let cards = set.iter().map(|i| p.cards[i]).collect();
    let cells = p
        .marginal_weights(set)
        .into_iter()
        .map(|(s, w)| (s, w as u64));
    DiscreteMeasure::new(universe, cards, cells)
}

/// Whether `⟨A,B|C⟩` holds in `p`:
/// `w(a,b,c) · w(c) = w(a,c) · w(b,c)` for every configuration.
///
/// Only configurations with `w(a,b,c) > 0` are visited. If the identity holds
/// there, summing it over `a, b` gives `Σ w(a,c)·w(b,c) = w(c)²` on the
/// support, which already exhausts the full sum, so every off-support
/// product is zero as well.
///
/// Panics if `t` mentions variables outside the universe.
pub fn ci_holds(p: &DiscreteMeasure, t: &Triplet) -> bool {
    assert!(
        p.universe.contains_set(t.support()),
        "triplet outside the measure's universe"
    );
    let abc = t.support();
    let ac = t.first().union(t.cond());
    let bc = t.second().union(t.cond());
    let c = t.cond();
    let members: Vec<usize> = abc.iter().collect();
    let positions = |sub: VarSet| -> Vec<usize> {
        members
            .iter()
            .enumerate()
            .filter(|(_, i)| sub.contains(**i))
            .map(|(k, _)| k)
            .collect()
    };
    let (pos_ac, pos_bc, pos_c) = (positions(ac), positions(bc), positions(c));
    let w_ac = p.marginal_weights(ac);
    let w_bc = p.marginal_weights(bc);
    let w_c = p.marginal_weights(c);
    let project = |key: &State, pos: &[usize]| -> State { pos.iter().map(|&k| key[k]).collect() };
    p.marginal_weights(abc).iter().all(|(key, &w)| {
        let lhs = w * w_c[&project(key, &pos_c)];
        let rhs = w_ac[&project(key, &pos_ac)] * w_bc[&project(key, &pos_bc)];
        lhs == rhs
    })
}

/// `{ t ∈ T(N) : ci_holds(p, t) }`.
pub fn ci_model(p: &DiscreteMeasure) -> Result<DependencyModel> {
    p.universe.check_cap(ENUMERATION_CAP)?;
    let mut model = DependencyModel::new(p.universe.clone());
    for t in enumerate_triplets(&p.universe)? {
        if ci_holds(p, &t) {
            model.insert(t);
        }
    }
    Ok(model)
}

/// Product of two measures on paired state spaces, `w((x,y)) = w1(x)·w2(y)`.
/// Its CI-model is the intersection of the two CI-models.
pub fn compose(p1: &DiscreteMeasure, p2: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    compose_with(p1, p2, DEFAULT_CELL_BUDGET)
}

pub fn compose_with(
    p1: &DiscreteMeasure,
    p2: &DiscreteMeasure,
    cell_budget: u128,
) -> Result<DiscreteMeasure> {
    if p1.universe != p2.universe {
        return Err(Error::UniverseMismatch);
    }
    let cards: Vec<u32> = p1
        .cards
        .iter()
        .zip(&p2.cards)
        .map(|(a, b)| {
            a.checked_mul(*b).ok_or(Error::StateSpaceTooLarge {
                cells: *a as u128 * *b as u128,
                budget: cell_budget,
            })
        })
        .collect::<Result<_>>()?;
    check_cells(&cards, cell_budget)?;
    let total = p1.total as u128 * p2.total as u128;
    if total > MAX_TOTAL_WEIGHT as u128 {
        return Err(Error::WeightOverflow { total });
    }
    let mut cells = Vec::with_capacity(p1.weights.len() * p2.weights.len());
    for (x, w1) in &p1.weights {
        for (y, w2) in &p2.weights {
            let state: State = x
                .iter()
                .zip(y)
                .zip(&p2.cards)
                .map(|((xi, yi), c2)| xi * c2 + yi)
                .collect();
            cells.push((state, w1 * w2));
        }
    }
    DiscreteMeasure::new(p1.universe.clone(), cards, cells)
}

/// Deterministic random measure: weights uniform in `1..=16`, each cell
/// zeroed with probability `zero_fraction`.
pub fn random_measure(
    universe: &Universe,
    cards: &[u32],
    seed: u64,
    zero_fraction: f64,
) -> Result<DiscreteMeasure> {
    random_measure_with(universe, cards, seed, zero_fraction, DEFAULT_MAX_WEIGHT)
}

pub fn random_measure_with(
    universe: &Universe,
    cards: &[u32],
    seed: u64,
    zero_fraction: f64,
    max_weight: u64,
) -> Result<DiscreteMeasure> {
    if !(0.0..1.0).contains(&zero_fraction) {
        return Err(Error::PreconditionViolated(format!(
            "zero fraction {zero_fraction} outside [0, 1)"
        )));
    }
    if max_weight == 0 {
        return Err(Error::PreconditionViolated(
            "max weight must be positive".into(),
        ));
    }
    if cards.len() != universe.n() {
        return Err(Error::InvalidMeasure("cardinality count mismatch".into()));
    }
    check_cells(cards, DEFAULT_CELL_BUDGET)?;
    let cells = cell_count(cards);
    if cells * max_weight as u128 > MAX_TOTAL_WEIGHT as u128 {
        return Err(Error::WeightOverflow {
            total: cells * max_weight as u128,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let weights: Vec<(State, u64)> = states(cards)
            .map(|s| {
                let w = if rng.random_bool(zero_fraction) {
                    0
                } else {
                    rng.random_range(1..=max_weight)
                };
                (s, w)
            })
            .collect();
        if weights.iter().any(|(_, w)| *w > 0) {
            return DiscreteMeasure::new(universe.clone(), cards.to_vec(), weights);
        }
    }
}

/// A strictly positive binary measure whose CI-model is exactly the set of
/// triplets dominated by `t`.
pub fn markov_pair_measure(t: &Triplet, universe: &Universe, seed: u64) -> Result<DiscreteMeasure> {
    let cards = vec![2; universe.n()];
    markov_pair_measure_with(t, universe, &cards, seed, DEFAULT_WITNESS_RETRIES)
}

/// `w(x) = φ(x_{E∪G}) · ψ(x_{F∪G}) · h(x)` for `t = ⟨E,F|G⟩`, where `h`
/// extends to the remaining variables with rows summing to a common
/// constant, so the marginal on `E∪F∪G` keeps the two-clique factorization.
/// Each attempt is verified against the dominated set; failures resample.
pub fn markov_pair_measure_with(
    t: &Triplet,
    universe: &Universe,
    cards: &[u32],
    seed: u64,
    retries: usize,
) -> Result<DiscreteMeasure> {
    universe.check_cap(WITNESS_CAP)?;
    if !universe.contains_set(t.support()) {
        return Err(Error::OutOfUniverse { n: universe.n() });
    }
    if cards.len() != universe.n() || cards.contains(&0) {
        return Err(Error::InvalidMeasure("bad cardinalities".into()));
    }
    let target = dominated_set(universe, t)?;
    for attempt in 0..retries.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let p = markov_pair_attempt(t, universe, cards, &mut rng)?;
        if ci_model(&p)? == target {
            return Ok(p);
        }
    }
    Err(Error::WitnessNotFound { retries })
}

fn markov_pair_attempt(
    t: &Triplet,
    universe: &Universe,
    cards: &[u32],
    rng: &mut ChaCha8Rng,
) -> Result<DiscreteMeasure> {
    const POTENTIAL_MAX: u64 = 32;
    const EXTENSION_MAX: u64 = 8;
    let eg = t.first().union(t.cond());
    let fg = t.second().union(t.cond());
    let core = t.support();
    let rest = universe.full().difference(core);

    let table = |set: VarSet, rng: &mut ChaCha8Rng| -> HashMap<State, u64> {
        let sub: Vec<u32> = set.iter().map(|i| cards[i]).collect();
        states(&sub)
            .map(|s| (s, rng.random_range(1..=POTENTIAL_MAX)))
            .collect()
    };
    let phi = table(eg, rng);
    let psi = table(fg, rng);

    let rest_cards: Vec<u32> = rest.iter().map(|i| cards[i]).collect();
    let rest_cells = cell_count(&rest_cards) as u64;
    let row_sum = rest_cells * EXTENSION_MAX;
    let core_cards: Vec<u32> = core.iter().map(|i| cards[i]).collect();
    let mut extension: HashMap<(State, State), u64> = HashMap::new();
    for cs in states(&core_cards) {
        let mut used = 0;
        let rows: Vec<State> = states(&rest_cards).collect();
        for (k, rs) in rows.iter().enumerate() {
            let h = if k + 1 == rows.len() {
                row_sum - used
            } else {
                rng.random_range(1..=EXTENSION_MAX)
            };
            used += h;
            extension.insert((cs.clone(), rs.clone()), h);
        }
    }

    let pick = |x: &[u32], set: VarSet| -> State { set.iter().map(|i| x[i]).collect() };
    DiscreteMeasure::from_fn(universe.clone(), cards.to_vec(), |x| {
        phi[&pick(x, eg)] * psi[&pick(x, fg)] * extension[&(pick(x, core), pick(x, rest))]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::is_semigraphoid;
    use crate::triplet::make_triplet;

    fn s(xs: &[usize]) -> VarSet {
        VarSet::from_indices(xs.iter().map(|x| x - 1))
    }

    fn t(a: &[usize], b: &[usize], c: &[usize]) -> Triplet {
        make_triplet(s(a), s(b), s(c)).unwrap()
    }

    fn xor() -> DiscreteMeasure {
        let u = Universe::numbered(3).unwrap();
        DiscreteMeasure::from_fn(u, vec![2, 2, 2], |x| u64::from(x[2] == x[0] ^ x[1])).unwrap()
    }

    /// Direct evaluation of the identity at every configuration of the full
    /// product space, independent of the support shortcut.
    fn ci_brute(p: &DiscreteMeasure, t: &Triplet) -> bool {
        let n = p.universe().n();
        let sum = |fixed: VarSet, x: &[u32]| -> u128 {
            states(p.cards())
                .filter(|y| fixed.iter().all(|i| y[i] == x[i]))
                .map(|y| p.weight(&y) as u128)
                .sum()
        };
        let _ = n;
        states(p.cards()).all(|x| {
            sum(t.support(), &x) * sum(t.cond(), &x)
                == sum(t.first().union(t.cond()), &x) * sum(t.second().union(t.cond()), &x)
        })
    }

    #[test]
    fn marginal_examples() {
        let u = Universe::numbered(2).unwrap();
        let p = DiscreteMeasure::new(
            u.clone(),
            vec![2, 2],
            [
                (vec![0, 0], 1),
                (vec![0, 1], 2),
                (vec![1, 0], 3),
                (vec![1, 1], 4),
            ],
        )
        .unwrap();
        let m = marginal(&p, s(&[1])).unwrap();
        assert_eq!(m.weight(&[0]), 3);
        assert_eq!(m.weight(&[1]), 7);
        assert_eq!(m.total(), p.total());
        assert_eq!(marginal(&p, u.full()).unwrap(), p);
        assert_eq!(marginal(&p, VarSet::EMPTY), Err(Error::EmptyMarginalSet));
    }

    #[test]
    fn product_marginal_reproduces_factor() {
        let u = Universe::numbered(2).unwrap();
        let f = [2u64, 5, 1];
        let g = [3u64, 4];
        let p = DiscreteMeasure::from_fn(u, vec![3, 2], |x| f[x[0] as usize] * g[x[1] as usize])
            .unwrap();
        let m = marginal(&p, s(&[1])).unwrap();
        for (k, fk) in f.iter().enumerate() {
            assert_eq!(m.weight(&[k as u32]), fk * 7);
        }
    }

    #[test]
    fn ci_examples() {
        let u = Universe::numbered(2).unwrap();
        let uniform = DiscreteMeasure::from_fn(u.clone(), vec![2, 2], |_| 1).unwrap();
        assert!(ci_holds(&uniform, &t(&[1], &[2], &[])));

        let p = xor();
        assert!(ci_holds(&p, &t(&[1], &[2], &[])));
        assert!(!ci_holds(&p, &t(&[1], &[2], &[3])));

        let copy = DiscreteMeasure::from_fn(u, vec![2, 2], |x| u64::from(x[0] == x[1])).unwrap();
        assert!(!ci_holds(&copy, &t(&[1], &[2], &[])));
    }

    #[test]
    fn xor_ci_model() {
        let m = ci_model(&xor()).unwrap();
        let expected = vec![t(&[1], &[2], &[]), t(&[1], &[3], &[]), t(&[2], &[3], &[])];
        assert_eq!(m.iter().copied().collect::<Vec<_>>(), expected);
        assert!(is_semigraphoid(&m));
    }

    #[test]
    fn product_measure_has_full_model() {
        let u = Universe::numbered(3).unwrap();
        let p = DiscreteMeasure::from_fn(u, vec![2, 3, 2], |x| {
            [1, 2][x[0] as usize] * [3, 1, 2][x[1] as usize] * [5, 7][x[2] as usize]
        })
        .unwrap();
        assert_eq!(ci_model(&p).unwrap().len(), 9);
    }

    #[test]
    fn support_shortcut_matches_brute_force() {
        let u = Universe::numbered(3).unwrap();
        for seed in 0..40 {
            let zf = [0.0, 0.3, 0.6][seed as usize % 3];
            let p = random_measure_with(&u, &[2, 3, 2], seed, zf, 3).unwrap();
            for x in enumerate_triplets(&u).unwrap() {
                assert_eq!(ci_holds(&p, &x), ci_brute(&p, &x), "seed {seed} {x:?}");
            }
        }
        let p = xor();
        for x in enumerate_triplets(&u).unwrap() {
            assert_eq!(ci_holds(&p, &x), ci_brute(&p, &x));
        }
    }

    #[test]
    fn generic_measure_has_empty_model() {
        let u = Universe::numbered(3).unwrap();
        let empty = (0..20)
            .filter(|&seed| {
                ci_model(&random_measure(&u, &[2, 2, 2], seed, 0.0).unwrap())
                    .unwrap()
                    .is_empty()
            })
            .count();
        assert!(empty >= 15, "{empty}");
    }

    #[test]
    fn compose_examples() {
        let p = xor();
        let pp = compose(&p, &p).unwrap();
        assert_eq!(pp.total(), p.total() * p.total());
        assert_eq!(ci_model(&pp).unwrap(), ci_model(&p).unwrap());

        let u = p.universe().clone();
        let generic = (0..)
            .map(|seed| random_measure(&u, &[2, 2, 2], seed, 0.0).unwrap())
            .find(|q| ci_model(q).unwrap().is_empty())
            .unwrap();
        let c = compose(&p, &generic).unwrap();
        assert_eq!(c.total(), p.total() * generic.total());
        assert!(ci_model(&c).unwrap().is_empty());
        assert_eq!(c.cards(), &[4, 4, 4]);
    }

    #[test]
    fn compose_budget() {
        let p = xor();
        assert!(matches!(
            compose_with(&p, &p, 10),
            Err(Error::StateSpaceTooLarge {
                cells: 64,
                budget: 10
            })
        ));
    }

    #[test]
    fn random_measure_properties() {
        let u = Universe::numbered(3).unwrap();
        let a = random_measure(&u, &[2, 3, 2], 9, 0.4).unwrap();
        let b = random_measure(&u, &[2, 3, 2], 9, 0.4).unwrap();
        assert_eq!(a, b);
        let positive = random_measure(&u, &[2, 3, 2], 9, 0.0).unwrap();
        assert!(positive.is_strictly_positive());
        assert!(random_measure(&u, &[2, 2, 2], 1, 1.0).is_err());
        // nearly everything zeroed still yields a valid measure
        let sparse = random_measure(&u, &[2, 2, 2], 4, 0.99).unwrap();
        assert!(sparse.total() > 0);
    }

    #[test]
    fn measure_validation() {
        let u = Universe::numbered(2).unwrap();
        assert!(DiscreteMeasure::new(u.clone(), vec![2], []).is_err());
        assert!(DiscreteMeasure::new(u.clone(), vec![2, 2], [(vec![0, 2], 1)]).is_err());
        assert!(
            DiscreteMeasure::new(u.clone(), vec![2, 2], [(vec![0, 1], 1), (vec![0, 1], 1)])
                .is_err()
        );
        assert!(DiscreteMeasure::new(u.clone(), vec![2, 2], [(vec![0, 1], 0)]).is_err());
        assert!(matches!(
            DiscreteMeasure::new(u, vec![2, 2], [(vec![0, 1], MAX_TOTAL_WEIGHT + 1)]),
            Err(Error::WeightOverflow { .. })
        ));
    }

    #[test]
    fn markov_pair_examples() {
        let u = Universe::numbered(3).unwrap();
        let x = t(&[1], &[2], &[3]);
        let p = markov_pair_measure(&x, &u, 1).unwrap();
        assert!(p.is_strictly_positive());
        assert_eq!(
            ci_model(&p).unwrap().iter().copied().collect::<Vec<_>>(),
            vec![x]
        );

        let y = t(&[1], &[2, 3], &[]);
        let p = markov_pair_measure(&y, &u, 1).unwrap();
        assert_eq!(ci_model(&p).unwrap(), dominated_set(&u, &y).unwrap());
        assert!(ci_holds(&p, &y));
    }

    #[test]
    fn markov_pair_extends_to_extra_variables() {
        let u = Universe::numbered(5).unwrap();
        let x = t(&[1], &[2], &[3]);
        let p = markov_pair_measure(&x, &u, 7).unwrap();
        assert_eq!(ci_model(&p).unwrap(), dominated_set(&u, &x).unwrap());
        let big = Universe::numbered(7).unwrap();
        assert!(matches!(
            markov_pair_measure(&x, &big, 7),
            Err(Error::UniverseTooLarge { cap: 6, .. })
        ));
    }
}
