//! Verification sweeps over exhaustive or seeded input families.
//!
//! Items are checked in parallel and aggregated in input order, so outcomes
//! do not depend on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::couple::{closure_two_dominants, lemma3_candidates, orbit_report, CoupleCase, SixSets};
use crate::error::Result;
use crate::measure::{ci_model, compose, markov_pair_measure, random_measure_with};
use crate::model::{dominated_set, dominated_triplets, enumerate_triplets, DependencyModel};
use crate::rules::{replay_trace, ClosureConfig, Saturation};
use crate::triplet::Triplet;
use crate::universe::Universe;

/// Upper bound on dominant elements of a two-antecedent closure.
pub const MAX_COUPLE_DOMINANTS: usize = 19;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepOutcome {
    pub suite: String,
    pub checked: usize,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_dominants: Option<usize>,
    pub traces_replayed: usize,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Default)]
struct ItemResult {
    violations: Vec<String>,
    dominants: Option<usize>,
    traces: usize,
}

fn aggregate(suite: &str, items: Vec<ItemResult>) -> SweepOutcome {
    SweepOutcome {
        suite: suite.to_string(),
        checked: items.len(),
        max_dominants: items.iter().filter_map(|r| r.dominants).max(),
        traces_replayed: items.iter().map(|r| r.traces).sum(),
        violations: items.into_iter().flat_map(|r| r.violations).collect(),
    }
}

fn rng_for(seed: u64, item: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(item as u64);
    rng
}

fn show(u: &Universe, t: &Triplet) -> String {
    format!("<{}>", t.display(u))
}

/// Replays the trace of every member of `targets`; returns the number
/// replayed and pushes a violation for each missing or rejected trace.
fn replay_all<'a>(
    sat: &Saturation,
    m: &DependencyModel,
    targets: impl IntoIterator<Item = &'a Triplet>,
    violations: &mut Vec<String>,
) -> usize {
    let mut replayed = 0;
    for t in targets {
        match sat.trace(t) {
            Some(trace) if replay_trace(m, &trace) => replayed += 1,
            Some(_) => violations.push(format!("trace for {} fails replay", show(m.universe(), t))),
            None => violations.push(format!("no trace for {}", show(m.universe(), t))),
        }
    }
    replayed
}

/// Singleton closures equal dominated sets; all their traces replay.
pub fn singleton_suite(n: usize) -> Result<SweepOutcome> {
    let u = Universe::numbered(n)?;
    let all: Vec<Triplet> = enumerate_triplets(&u)?.collect();
    let items = all
        .par_iter()
        .map(|t| -> Result<ItemResult> {
            let mut r = ItemResult::default();
            let m = DependencyModel::from_triplets(u.clone(), [*t])?;
            let sat = Saturation::run(&m, &ClosureConfig::default())?;
            let closure = sat.to_model();
            if closure != dominated_set(&u, t)? {
                r.violations.push(format!(
                    "closure of {} differs from its dominated set",
                    show(&u, t)
                ));
            }
            r.traces = replay_all(&sat, &m, closure.iter(), &mut r.violations);
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("singleton", items))
}

/// Every unordered couple (with repetition) of canonical triplets.
pub fn all_couples(u: &Universe) -> Result<Vec<(Triplet, Triplet)>> {
    let all: Vec<Triplet> = enumerate_triplets(u)?.collect();
    let mut out = Vec::with_capacity(all.len() * (all.len() + 1) / 2);
    for (i, x) in all.iter().enumerate() {
        for y in &all[i..] {
            out.push((*x, *y));
        }
    }
    Ok(out)
}

/// `samples` couples drawn uniformly with replacement.
pub fn sampled_couples(u: &Universe, samples: usize, seed: u64) -> Result<Vec<(Triplet, Triplet)>> {
    let all: Vec<Triplet> = enumerate_triplets(u)?.collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..samples)
        .map(|_| {
            let x = all[rng.random_range(0..all.len())];
            let y = all[rng.random_range(0..all.len())];
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect())
}

fn check_couple(u: &Universe, x: &Triplet, y: &Triplet) -> Result<ItemResult> {
    let mut r = ItemResult::default();
    let cc = closure_two_dominants(x, y);
    let count = cc.dominants.len();
    r.dominants = Some(count);
    let bound = match cc.case {
        CoupleCase::Disjoint => 2,
        CoupleCase::Overlapping => MAX_COUPLE_DOMINANTS,
    };
    if count > bound {
        r.violations.push(format!(
            "{} & {}: {count} dominants exceed {bound}",
            show(u, x),
            show(u, y)
        ));
    }
    let m = DependencyModel::from_triplets(u.clone(), [*x, *y])?;
    let sat = Saturation::run(&m, &ClosureConfig::default())?;
    if cc.dominants.expand(u)? != sat.to_model() {
        r.violations.push(format!(
            "{} & {}: dominant expansion differs from the fixpoint closure",
            show(u, x),
            show(u, y)
        ));
    }
    r.traces = replay_all(
        &sat,
        &m,
        cc.dominants.iter().filter(|d| sat.contains(d)),
        &mut r.violations,
    );
    Ok(r)
}

/// Closed-form couple closures against the fixpoint oracle. Exhaustive when
/// `samples` is `None`.
pub fn couples_suite(n: usize, samples: Option<usize>, seed: u64) -> Result<SweepOutcome> {
    let u = Universe::numbered(n)?;
    let couples = match samples {
        None => all_couples(&u)?,
        Some(k) => sampled_couples(&u, k, seed)?,
    };
    let items = couples
        .par_iter()
        .map(|(x, y)| check_couple(&u, x, y))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("couples", items))
}

/// Every candidate of every overlapping couple is derivable, with a
/// replayable trace. Only overlapping couples count as checked.
pub fn lemma3_suite(n: usize) -> Result<SweepOutcome> {
    let u = Universe::numbered(n)?;
    let couples: Vec<_> = all_couples(&u)?
        .into_iter()
        .filter(|(x, y)| SixSets::of(x, y).overlapping())
        .collect();
    let items = couples
        .par_iter()
        .map(|(x, y)| -> Result<ItemResult> {
            let mut r = ItemResult::default();
            let m = DependencyModel::from_triplets(u.clone(), [*x, *y])?;
            let sat = Saturation::run(&m, &ClosureConfig::default())?;
            let candidates = lemma3_candidates(x, y)?;
            for c in &candidates {
                if !sat.contains(&c.triplet) {
                    r.violations.push(format!(
                        "{} & {}: formula {:?} gives underivable {}",
                        show(&u, x),
                        show(&u, y),
                        c.formulas,
                        show(&u, &c.triplet)
                    ));
                }
            }
            let derivable: Vec<Triplet> = candidates
                .iter()
                .map(|c| c.triplet)
                .filter(|t| sat.contains(t))
                .collect();
            r.traces = replay_all(&sat, &m, derivable.iter(), &mut r.violations);
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("lemma3", items))
}

/// Random measure parameters for the probabilistic sweeps.
#[derive(Clone, Copy, Debug)]
pub struct MeasureFamily {
    pub min_n: usize,
    pub max_n: usize,
    pub max_card: u32,
}

impl Default for MeasureFamily {
    fn default() -> Self {
        MeasureFamily {
            min_n: 2,
            max_n: 4,
            max_card: 3,
        }
    }
}

const ZERO_FRACTIONS: [f64; 5] = [0.0, 0.2, 0.4, 0.6, 0.8];
const MAX_WEIGHTS: [u64; 3] = [1, 3, 16];

fn sample_measure(family: &MeasureFamily, rng: &mut ChaCha8Rng) -> Result<crate::DiscreteMeasure> {
    let n = rng.random_range(family.min_n..=family.max_n);
    let u = Universe::numbered(n)?;
    let cards: Vec<u32> = (0..n)
        .map(|_| rng.random_range(2..=family.max_card.max(2)))
        .collect();
    let zero_fraction = ZERO_FRACTIONS[rng.random_range(0..ZERO_FRACTIONS.len())];
    let max_weight = MAX_WEIGHTS[rng.random_range(0..MAX_WEIGHTS.len())];
    random_measure_with(&u, &cards, rng.random(), zero_fraction, max_weight)
}

/// Extracted CI-models are semigraphoids, and contain the closure of every
/// couple they contain.
pub fn soundness_suite(trials: usize, seed: u64, family: &MeasureFamily) -> Result<SweepOutcome> {
    let items = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<ItemResult> {
            let mut r = ItemResult::default();
            let p = sample_measure(family, &mut rng_for(seed, i))?;
            let model = ci_model(&p)?;
            let u = model.universe();
            if let Some(v) = crate::rules::find_violation(&model) {
                r.violations.push(format!(
                    "measure {i}: CI-model not closed under {} ({} missing)",
                    v.rule,
                    show(u, &v.consequent)
                ));
            }
            let members: Vec<Triplet> = model.iter().copied().collect();
            for (k, x) in members.iter().enumerate() {
                for y in &members[k..] {
                    let cc = closure_two_dominants(x, y);
                    r.dominants = r.dominants.max(Some(cc.dominants.len()));
                    let escaped = cc
                        .dominants
                        .iter()
                        .flat_map(dominated_triplets)
                        .find(|s| !model.contains(s));
                    if let Some(s) = escaped {
                        r.violations.push(format!(
                            "measure {i}: {} & {} hold but implied {} fails",
                            show(u, x),
                            show(u, y),
                            show(u, &s)
                        ));
                    }
                }
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("soundness", items))
}

/// The CI-model of a composed measure is the intersection of the two.
pub fn lemma1_suite(trials: usize, seed: u64, family: &MeasureFamily) -> Result<SweepOutcome> {
    let items = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<ItemResult> {
            let mut r = ItemResult::default();
            let mut rng = rng_for(seed, i);
            let p1 = sample_measure(family, &mut rng)?;
            let n = p1.universe().n();
            let cards: Vec<u32> = (0..n)
                .map(|_| rng.random_range(2..=family.max_card.max(2)))
                .collect();
            let zero_fraction = ZERO_FRACTIONS[rng.random_range(0..ZERO_FRACTIONS.len())];
            let max_weight = MAX_WEIGHTS[rng.random_range(0..MAX_WEIGHTS.len())];
            let p2 = random_measure_with(
                p1.universe(),
                &cards,
                rng.random(),
                zero_fraction,
                max_weight,
            )?;
            let composed = ci_model(&compose(&p1, &p2)?)?;
            let expected = ci_model(&p1)?.intersection(&ci_model(&p2)?)?;
            if composed != expected {
                r.violations.push(format!(
                    "pair {i}: composed CI-model has {} elements, intersection {}",
                    composed.len(),
                    expected.len()
                ));
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("lemma1", items))
}

/// Binary Markov-pair witnesses realise exactly the dominated set.
pub fn markov_suite(n: usize, seed: u64) -> Result<SweepOutcome> {
    let u = Universe::numbered(n)?;
    let all: Vec<Triplet> = enumerate_triplets(&u)?.collect();
    let items = all
        .par_iter()
        .enumerate()
        .map(|(i, t)| -> Result<ItemResult> {
            let mut r = ItemResult::default();
            match markov_pair_measure(t, &u, seed.wrapping_add(i as u64)) {
                Ok(p) => {
                    if ci_model(&p)? != dominated_set(&u, t)? {
                        r.violations.push(format!(
                            "witness for {} has the wrong CI-model",
                            show(&u, t)
                        ));
                    }
                }
                Err(e) => r.violations.push(format!("{}: {e}", show(&u, t))),
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("markov", items))
}

/// The 19-formula table against its regeneration from four base formulas.
pub fn orbit_suite() -> SweepOutcome {
    let report = orbit_report();
    let mut violations: Vec<String> = report
        .unmatched
        .iter()
        .map(|(base, perm)| format!("formula {base} under {perm:?} matches no unique table row"))
        .collect();
    let covered = report.covered();
    for k in 1..=19 {
        if !covered.contains(&k) {
            violations.push(format!("formula {k} not generated"));
        }
    }
    if !report.is_consistent() && violations.is_empty() {
        violations.push("orbits overlap".into());
    }
    SweepOutcome {
        suite: "orbit".into(),
        checked: report.orbits.len(),
        violations,
        max_dominants: None,
        traces_replayed: 0,
    }
}
