//! The four semigraphoid inference rules, closure computation and
//! checkable derivations.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{dominated_triplets, Antichain, DependencyModel, ENUMERATION_CAP};
use crate::triplet::Triplet;
use crate::universe::Universe;
use crate::varset::VarSet;

/// Default ceiling on the number of triplets a closure may derive.
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum RuleId {
    Symmetry,
    Decomposition,
    WeakUnion,
    Contraction,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleId::Symmetry => "symmetry",
            RuleId::Decomposition => "decomposition",
            RuleId::WeakUnion => "weak-union",
            RuleId::Contraction => "contraction",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureConfig {
    pub max_steps: usize,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig {
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

/// How a derivation step was obtained.
///
/// `swapped` flags record which reading `⟨A,B|C⟩` or `⟨B,A|C⟩` of a
/// canonical premise was matched against the schema, so each step names one
/// literal rule instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Justification {
    /// The `index`-th element (in canonical order) of the antecedent model.
    Axiom(usize),
    Symmetry {
        premise: usize,
    },
    /// `⟨X, Y|Z⟩ → ⟨X, kept|Z⟩` with `kept ⊆ Y`.
    Decomposition {
        premise: usize,
        swapped: bool,
        kept: VarSet,
    },
    /// `⟨X, Y|Z⟩ → ⟨X, kept|Z ∪ (Y∖kept)⟩` with `kept ⊆ Y`.
    WeakUnion {
        premise: usize,
        swapped: bool,
        kept: VarSet,
    },
    /// `⟨A, B|C ∪ D⟩ & ⟨A, C|D⟩ → ⟨A, B ∪ C|D⟩`, premises in that order.
    Contraction {
        premises: [usize; 2],
        swapped: [bool; 2],
    },
}

impl Justification {
    pub fn rule(&self) -> Option<RuleId> {
        match self {
            Justification::Axiom(_) => None,
            Justification::Symmetry { .. } => Some(RuleId::Symmetry),
            Justification::Decomposition { .. } => Some(RuleId::Decomposition),
            Justification::WeakUnion { .. } => Some(RuleId::WeakUnion),
            Justification::Contraction { .. } => Some(RuleId::Contraction),
        }
    }

    pub fn premises(&self) -> Vec<usize> {
        match *self {
            Justification::Axiom(_) => Vec::new(),
            Justification::Symmetry { premise }
            | Justification::Decomposition { premise, .. }
            | Justification::WeakUnion { premise, .. } => vec![premise],
            Justification::Contraction { premises, .. } => premises.to_vec(),
        }
    }

    fn remap(self, map: &HashMap<usize, usize>) -> Self {
        match self {
            Justification::Axiom(i) => Justification::Axiom(i),
            Justification::Symmetry { premise } => Justification::Symmetry {
                premise: map[&premise],
            },
            Justification::Decomposition {
                premise,
                swapped,
                kept,
            } => Justification::Decomposition {
                premise: map[&premise],
                swapped,
                kept,
            },
            Justification::WeakUnion {
                premise,
                swapped,
                kept,
            } => Justification::WeakUnion {
                premise: map[&premise],
                swapped,
                kept,
            },
            Justification::Contraction { premises, swapped } => Justification::Contraction {
                premises: [map[&premises[0]], map[&premises[1]]],
                swapped,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub triplet: Triplet,
    pub justification: Justification,
}

/// A derivation sequence whose last step is the derived target.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DerivationTrace {
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn target(&self) -> Option<&Triplet> {
        self.steps.last().map(|s| &s.triplet)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> DisplayTrace<'a> {
        DisplayTrace {
            trace: self,
            universe,
        }
    }
}

pub struct DisplayTrace<'a> {
    trace: &'a DerivationTrace,
    universe: &'a Universe,
}

impl fmt::Display for DisplayTrace<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.universe;
        for (i, step) in self.trace.steps.iter().enumerate() {
            write!(
                f,
                "{:>3}. {:<24}",
                i + 1,
                step.triplet.display(u).to_string()
            )?;
            match step.justification {
                Justification::Axiom(k) => write!(f, "  given #{}", k + 1)?,
                Justification::Symmetry { premise } => write!(f, "  symmetry ({})", premise + 1)?,
                Justification::Decomposition {
                    premise,
                    swapped,
                    kept,
                } => write!(
                    f,
                    "  decomposition ({}{}) keep {}",
                    premise + 1,
                    if swapped { "'" } else { "" },
                    u.display_set(kept)
                )?,
                Justification::WeakUnion {
                    premise,
                    swapped,
                    kept,
                } => write!(
                    f,
                    "  weak-union ({}{}) keep {}",
                    premise + 1,
                    if swapped { "'" } else { "" },
                    u.display_set(kept)
                )?,
                Justification::Contraction { premises, swapped } => write!(
                    f,
                    "  contraction ({}{}, {}{})",
                    premises[0] + 1,
                    if swapped[0] { "'" } else { "" },
                    premises[1] + 1,
                    if swapped[1] { "'" } else { "" },
                )?,
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A concrete rule instance: premises and consequent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub premises: Vec<Triplet>,
    pub consequent: Triplet,
}

fn decompose(premise: &Triplet, swapped: bool, kept: VarSet) -> Option<Triplet> {
    let (x, y, z) = premise.oriented(swapped);
    (!kept.is_empty() && kept.is_subset(y)).then(|| Triplet::canonical(x, kept, z))
}

fn weak_union(premise: &Triplet, swapped: bool, kept: VarSet) -> Option<Triplet> {
    let (x, y, z) = premise.oriented(swapped);
    (!kept.is_empty() && kept.is_subset(y))
        .then(|| Triplet::canonical(x, kept, z.union(y.difference(kept))))
}

fn contract(p1: &Triplet, p2: &Triplet, swapped: [bool; 2]) -> Option<Triplet> {
    let (a, b, c1) = p1.oriented(swapped[0]);
    let (a2, cc, d) = p2.oriented(swapped[1]);
    (a == a2 && cc.is_subset(c1) && d == c1.difference(cc))
        .then(|| Triplet::canonical(a, b.union(cc), d))
}

/// One-step unary consequences with the parameters of each instance.
fn unary_instances(t: &Triplet) -> impl Iterator<Item = (Triplet, Justification)> + '_ {
    t.orientations()
        .into_iter()
        .flat_map(move |(swapped, _, y)| {
            y.nonempty_subsets().flat_map(move |kept| {
                let dec = decompose(t, swapped, kept).map(|c| {
                    (
                        c,
                        Justification::Decomposition {
                            premise: 0,
                            swapped,
                            kept,
                        },
                    )
                });
                let wu = weak_union(t, swapped, kept).map(|c| {
                    (
                        c,
                        Justification::WeakUnion {
                            premise: 0,
                            swapped,
                            kept,
                        },
                    )
                });
                dec.into_iter().chain(wu)
            })
        })
}

/// All canonical triplets reachable from `t` by one application of
/// symmetry, decomposition or weak union. Includes `t` itself.
pub fn rule_consequences(universe: &Universe, t: &Triplet) -> DependencyModel {
    let mut out = DependencyModel::new(universe.clone());
    out.insert(*t);
    for (c, _) in unary_instances(t) {
        out.insert(c);
    }
    out
}

/// Contraction consequents of `(p1, p2)` over the four orientation choices.
pub fn contraction(p1: &Triplet, p2: &Triplet) -> Vec<Triplet> {
    let mut out = Vec::new();
    for s1 in [false, true] {
        for s2 in [false, true] {
            if let Some(c) = contract(p1, p2, [s1, s2]) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Forward-chaining saturation that remembers the first justification of
/// every derived triplet.
///
/// The worklist is the `items` vector itself, processed in insertion order
/// and seeded with the antecedents in canonical order, so ids and traces
/// are reproducible.
/// Second component, item id, and whether the item was read swapped.
type Reading = (VarSet, usize, bool);

#[derive(Debug, Clone)]
pub struct Saturation {
    universe: Universe,
    axioms: Vec<Triplet>,
    items: Vec<TraceStep>,
    index: HashMap<Triplet, usize>,
}

impl Saturation {
    pub fn run(m: &DependencyModel, config: &ClosureConfig) -> Result<Saturation> {
        Self::run_until(m, config, None)
    }

    fn run_until(
        m: &DependencyModel,
        config: &ClosureConfig,
        stop: Option<&Triplet>,
    ) -> Result<Saturation> {
        let mut sat = Saturation {
            universe: m.universe().clone(),
            axioms: m.iter().copied().collect(),
            items: Vec::new(),
            index: HashMap::new(),
        };
        let budget = config.max_steps.max(m.len());
        for (i, t) in m.iter().enumerate() {
            sat.push(*t, Justification::Axiom(i));
        }
        if stop.is_some_and(|s| sat.index.contains_key(s)) {
            return Ok(sat);
        }
        // processed triplets keyed by (reading of first component, condition)
        let mut by_first_cond: HashMap<(VarSet, VarSet), Vec<Reading>> = HashMap::new();
        let mut head = 0;
        while head < sat.items.len() {
            let id = head;
            head += 1;
            let t = sat.items[id].triplet;
            for (swapped, a, b) in t.orientations() {
                by_first_cond
                    .entry((a, t.cond()))
                    .or_default()
                    .push((b, id, swapped));
            }

            let mut fresh: Vec<(Triplet, Justification)> = Vec::new();
            for (c, j) in unary_instances(&t) {
                let j = match j {
                    Justification::Decomposition { swapped, kept, .. } => {
                        Justification::Decomposition {
                            premise: id,
                            swapped,
                            kept,
                        }
                    }
                    Justification::WeakUnion { swapped, kept, .. } => Justification::WeakUnion {
                        premise: id,
                        swapped,
                        kept,
                    },
                    other => other,
                };
                fresh.push((c, j));
            }
            for (s1, a, b) in t.orientations() {
                // t as the first premise ⟨A, B|C ∪ D⟩
                let c1 = t.cond();
                for cc in c1.nonempty_subsets() {
                    let d = c1.difference(cc);
                    let p2 = Triplet::canonical(a, cc, d);
                    if let Some(&id2) = sat.index.get(&p2) {
                        if id2 < head {
                            let s2 = p2.first() != a;
                            fresh.push((
                                Triplet::canonical(a, b.union(cc), d),
                                Justification::Contraction {
                                    premises: [id, id2],
                                    swapped: [s1, s2],
                                },
                            ));
                        }
                    }
                }
                // t as the second premise ⟨A, C|D⟩
                let (cc, d) = (b, t.cond());
                if let Some(partners) = by_first_cond.get(&(a, cc.union(d))) {
                    for &(b1, id1, s0) in partners {
                        if b1.is_disjoint(cc) {
                            fresh.push((
                                Triplet::canonical(a, b1.union(cc), d),
                                Justification::Contraction {
                                    premises: [id1, id],
                                    swapped: [s0, s1],
                                },
                            ));
                        }
                    }
                }
            }
            for (c, j) in fresh {
                if sat.push(c, j) {
                    if sat.items.len() > budget {
                        return Err(Error::ResourceBudgetExceeded {
                            budget: config.max_steps,
                        });
                    }
                    if stop == Some(&c) {
                        return Ok(sat);
                    }
                }
            }
        }
        Ok(sat)
    }

    fn push(&mut self, t: Triplet, j: Justification) -> bool {
        if self.index.contains_key(&t) {
            return false;
        }
        self.index.insert(t, self.items.len());
        self.items.push(TraceStep {
            triplet: t,
            justification: j,
        });
        true
    }

    pub fn contains(&self, t: &Triplet) -> bool {
        self.index.contains_key(t)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn triplets(&self) -> impl Iterator<Item = &Triplet> {
        self.items.iter().map(|s| &s.triplet)
    }

    pub fn to_model(&self) -> DependencyModel {
        let mut m = DependencyModel::new(self.universe.clone());
        for t in self.triplets() {
            m.insert(*t);
        }
        m
    }

    /// The ancestry of `t`, renumbered into a self-contained trace.
    pub fn trace(&self, t: &Triplet) -> Option<DerivationTrace> {
        let root = *self.index.get(t)?;
        let mut needed = HashSet::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if needed.insert(id) {
                stack.extend(self.items[id].justification.premises());
            }
        }
        let mut ids: Vec<usize> = needed.into_iter().collect();
        ids.sort_unstable();
        let map: HashMap<usize, usize> = ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
        let steps = ids
            .iter()
            .map(|&id| TraceStep {
                triplet: self.items[id].triplet,
                justification: self.items[id].justification.remap(&map),
            })
            .collect();
        Some(DerivationTrace { steps })
    }

    pub fn axioms(&self) -> &[Triplet] {
        &self.axioms
    }
}

/// Reference closure: the least superset of `m` closed under the four rules.
pub fn closure_fixpoint(m: &DependencyModel) -> Result<DependencyModel> {
    closure_fixpoint_with(m, &ClosureConfig::default())
}

pub fn closure_fixpoint_with(
    m: &DependencyModel,
    config: &ClosureConfig,
) -> Result<DependencyModel> {
    m.universe().check_cap(ENUMERATION_CAP)?;
    Ok(Saturation::run(m, config)?.to_model())
}

/// The closure of `m` by its dominant elements.
///
/// Works on the antichain directly: every triplet below a current member is
/// tried as first contraction premise, its partner is looked up by
/// dominance, and new consequents are inserted until nothing changes. The
/// step counter covers visited triplets.
pub fn closure_antichain(m: &DependencyModel) -> Result<Antichain> {
    closure_antichain_with(m, &ClosureConfig::default())
}

pub fn closure_antichain_with(m: &DependencyModel, config: &ClosureConfig) -> Result<Antichain> {
    let mut chain = Antichain::maximal_of(m.iter().copied());
    let mut steps = 0usize;
    loop {
        let mut changed = false;
        let members: Vec<Triplet> = chain.iter().copied().collect();
        for d in members {
            if !chain.contains(&d) {
                continue;
            }
            for s in dominated_triplets(&d) {
                steps += 1;
                if steps > config.max_steps {
                    return Err(Error::ResourceBudgetExceeded {
                        budget: config.max_steps,
                    });
                }
                for (_, a, b) in s.orientations() {
                    let c1 = s.cond();
                    for cc in c1.nonempty_subsets() {
                        let dd = c1.difference(cc);
                        if chain.covers(&Triplet::canonical(a, cc, dd)) {
                            let consequent = Triplet::canonical(a, b.union(cc), dd);
                            if chain.insert(consequent) {
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        // a new member can serve as second premise for any earlier first
        // premise, so passes repeat until one changes nothing
        if !changed {
            return Ok(chain);
        }
    }
}

/// Result of a derivability query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivability {
    pub derivable: bool,
    pub trace: Option<DerivationTrace>,
}

/// Whether `t` lies in the semigraphoid closure of `m`, with a trace if so.
pub fn derives(m: &DependencyModel, t: &Triplet) -> Result<Derivability> {
    derives_with(m, t, &ClosureConfig::default())
}

pub fn derives_with(
    m: &DependencyModel,
    t: &Triplet,
    config: &ClosureConfig,
) -> Result<Derivability> {
    if !m.universe().contains_set(t.support()) {
        return Err(Error::OutOfUniverse {
            n: m.universe().n(),
        });
    }
    m.universe().check_cap(ENUMERATION_CAP)?;
    let sat = Saturation::run_until(m, config, Some(t))?;
    let trace = sat.trace(t);
    Ok(Derivability {
        derivable: trace.is_some(),
        trace,
    })
}

/// Independent proof checker. Never panics on malformed traces.
pub fn replay_trace(m: &DependencyModel, trace: &DerivationTrace) -> bool {
    if trace.steps.is_empty() {
        return false;
    }
    let axioms: Vec<&Triplet> = m.iter().collect();
    let steps = &trace.steps;
    let premise = |k: usize, i: usize| -> Option<&Triplet> { (k < i).then(|| &steps[k].triplet) };
    steps.iter().enumerate().all(|(i, step)| {
        let derived = match step.justification {
            Justification::Axiom(k) => axioms.get(k).map(|a| **a),
            Justification::Symmetry { premise: p } => premise(p, i).and_then(|p| {
                let (x, y, z) = p.oriented(true);
                Triplet::new(x, y, z).ok()
            }),
            Justification::Decomposition {
                premise: p,
                swapped,
                kept,
            } => premise(p, i).and_then(|p| decompose(p, swapped, kept)),
            Justification::WeakUnion {
                premise: p,
                swapped,
                kept,
            } => premise(p, i).and_then(|p| weak_union(p, swapped, kept)),
            Justification::Contraction { premises, swapped } => {
                match (premise(premises[0], i), premise(premises[1], i)) {
                    (Some(p1), Some(p2)) => contract(p1, p2, swapped),
                    _ => None,
                }
            }
        };
        derived == Some(step.triplet)
    })
}

/// Some rule instance with premises in `m` and consequent outside, if any.
pub fn find_violation(m: &DependencyModel) -> Option<RuleInstance> {
    for t in m {
        for (c, j) in unary_instances(t) {
            if !m.contains(&c) {
                return Some(RuleInstance {
                    rule: j.rule().expect("unary rule"),
                    premises: vec![*t],
                    consequent: c,
                });
            }
        }
    }
    for p1 in m {
        for (_, a, b) in p1.orientations() {
            let c1 = p1.cond();
            for cc in c1.nonempty_subsets() {
                let d = c1.difference(cc);
                let p2 = Triplet::canonical(a, cc, d);
                if m.contains(&p2) {
                    let c = Triplet::canonical(a, b.union(cc), d);
                    if !m.contains(&c) {
                        return Some(RuleInstance {
                            rule: RuleId::Contraction,
                            premises: vec![*p1, p2],
                            consequent: c,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Whether `m` is closed under symmetry, decomposition, weak union and
/// contraction.
pub fn is_semigraphoid(m: &DependencyModel) -> bool {
    find_violation(m).is_none()
}
