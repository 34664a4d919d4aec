use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "semigraphoid", version)]
#[command(about = "Semigraphoid closure, derivability and exact CI-model tools")]
pub struct Cli {
    /// Report format for `verify`
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for sampled sweeps and refutation search
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Number of trials or samples (command-specific default)
    #[arg(long, global = true)]
    pub trials: Option<usize>,

    /// Worker threads for batch work (default: available cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Ceiling on derived triplets per closure computation
    #[arg(long, global = true, default_value_t = semigraphoid::rules::DEFAULT_MAX_STEPS)]
    pub max_steps: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// Line-oriented `key=value`
    Kv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Fixpoint,
    Antichain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Singleton,
    Couples,
    Lemma3,
    Soundness,
    Lemma1,
    Markov,
    Orbit,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the semigraphoid closure of a model file
    Closure {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Fixpoint)]
        mode: Mode,
        /// Print only the dominant elements
        #[arg(long)]
        dominants_only: bool,
    },
    /// Decide whether a triplet is derivable from a model file
    Derive {
        model: PathBuf,
        target: String,
        /// Print the derivation sequence
        #[arg(long)]
        trace: bool,
    },
    /// Decide implication from at most two antecedents; the last triplet is the consequent
    Implies {
        #[arg(required = true, num_args = 1..)]
        triplets: Vec<String>,
        /// Universe, comma-separated (default: names in order of appearance)
        #[arg(long)]
        vars: Option<String>,
        /// With three or more antecedents, search for a counterexample measure instead
        #[arg(long)]
        refute: bool,
    },
    /// Print the CI-model of a measure file
    CiModel { measure: PathBuf },
    /// Search for a measure refuting the implication model => target
    Refute { model: PathBuf, target: String },
    /// Run a verification sweep
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        n: Option<usize>,
    },
    /// List every canonical triplet over a universe
    Enumerate {
        #[arg(long, conflicts_with = "vars")]
        n: Option<usize>,
        #[arg(long)]
        vars: Option<String>,
    },
}
