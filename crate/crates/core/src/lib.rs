//! Predictability analysis for categorical event sequences.
//!
//! This crate quantifies how predictable a symbol series is — typically the
//! sequence of partners, locations, and inter-event gaps extracted from a
//! social-interaction log — by estimating entropy rates from match-length
//! statistics, and it fits per-individual Markov chains to predict the next
//! symbol under a rolling train/evaluate protocol.
//!
//! - [`seq`]: alphabets, encoded sequences, empirical distributions.
//! - [`ingest`]: event-CSV parsing, time binning, per-individual sequences.
//! - [`entropy`]: plug-in entropy, iid/uniform baselines, and the
//!   match-length entropy-rate estimator with its joint and conditional
//!   variants.
//! - [`markov`]: transition-count models, top-k prediction, rolling
//!   evaluation.
//! - [`synth`]: seeded generators with analytically known rates, the
//!   validation oracles for everything above.

pub mod entropy;
pub mod ingest;
pub mod markov;
pub mod seq;
pub mod synth;

pub use entropy::{
    analyze_sequence, conditional_lz_rate, effective_choices, iid_rate, joint_lz_rate, lz_rate,
    match_lengths, match_lengths_naive, plugin_entropy, uniform_rate, EntropyError, EntropyReport,
    MatchLengths,
};
pub use ingest::{
    bin_events, gap_sequence, location_sequence, parse_event_log, partner_sequence,
    BinnedEventStream, EventLog, IngestError, InteractionEvent,
};
pub use markov::{
    rolling_evaluate, EvaluationResult, MarkovError, MarkovModel, RollingConfig, WindowScore,
};
pub use seq::{pair, Alphabet, CategoricalSequence, EmpiricalDistribution, SeqError, Symbol};
pub use synth::{
    analytic_markov_rate, gen_event_log, gen_iid, gen_markov, gen_periodic,
    stationary_distribution, SynthError, TransitionMatrix,
};
