//! Semigraphoid calculus of conditional-independence statements.
//!
//! * [`triplet`], [`model`]: CI-statements `⟨A,B|C⟩`, the dominance order and
//!   enumeration of all triplets over a universe.
//! * [`rules`]: the symmetry, decomposition, weak union and contraction rules,
//!   closure computation and replayable derivations.
//! * [`couple`]: closed-form closure of two statements by its at most 19
//!   dominant elements.
//! * [`measure`], [`refute`]: exact integer-weighted discrete measures, their
//!   CI-models, composition and counterexample search.
//! * [`format`]: the `.cim` and `.cmw` text formats.
//! * [`sweep`]: exhaustive and seeded verification sweeps.

pub mod couple;
pub mod error;
pub mod format;
pub mod measure;
pub mod model;
pub mod refute;
pub mod rules;
pub mod sweep;
pub mod triplet;
pub mod universe;
pub mod varset;

pub use couple::{
    closure_two_dominants, lemma3_candidates, membership_two, orbit_selfcheck, Candidate,
    CoupleCase, CoupleClosure,
};
pub use error::{Error, Result};
pub use measure::{
    ci_holds, ci_model, compose, marginal, markov_pair_measure, random_measure, DiscreteMeasure,
};
pub use model::{
    dominated_set, enumerate_triplets, maximal_elements, triplet_count, Antichain, DependencyModel,
    ENUMERATION_CAP,
};
pub use refute::{refute_implication, ImplicationWitness};
pub use rules::{
    closure_antichain, closure_fixpoint, contraction, derives, find_violation, is_semigraphoid,
    replay_trace, rule_consequences, ClosureConfig, Derivability, DerivationTrace, Justification,
    RuleId, RuleInstance,
};
pub use triplet::{dominates, make_triplet, Triplet};
pub use universe::Universe;
pub use varset::VarSet;
