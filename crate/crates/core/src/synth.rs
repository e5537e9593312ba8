//! Synthetic sequence and log generators with analytically known entropy
//! rates, used to validate every estimator in the crate.
//!
//! All generators are deterministic under a fixed seed, and logs derive one
//! sub-seed per individual so populations can be generated in parallel
//! without changing the output.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ingest::{EventLog, InteractionEvent};
use crate::seq::{Alphabet, CategoricalSequence, EmpiricalDistribution, Symbol};

/// Residual threshold for stationary-distribution convergence.
const STATIONARY_TOLERANCE: f64 = 1e-12;
const MAX_POWER_ITERATIONS: usize = 1_000_000;

/// Errors from generators and the analytic oracle.
#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("invalid transition matrix: {0}")]
    InvalidMatrix(String),

    #[error(
        "stationary distribution did not converge (residual {residual:.3e}); \
             the chain is likely reducible or periodic"
    )]
    NotErgodic { residual: f64 },

    #[error("pattern is empty")]
    EmptyPattern,

    #[error("bin width must be positive")]
    ZeroBinWidth,
}

/// A row-stochastic transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    rows: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    /// Validates squareness, non-negativity, and row sums within 1e-12.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, SynthError> {
        if rows.is_empty() {
            return Err(SynthError::InvalidMatrix("no states".to_string()));
        }
        let k = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(SynthError::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            if row.iter().any(|&p| !p.is_finite() || p < 0.0) {
                return Err(SynthError::InvalidMatrix(format!(
                    "row {i} has a negative or non-finite entry"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(SynthError::InvalidMatrix(format!("row {i} sums to {sum}")));
            }
        }
        Ok(TransitionMatrix { rows })
    }

    /// A symmetric chain that stays put with probability `stay` and
    /// otherwise moves uniformly to one of the other `k - 1` states.
    pub fn stay_chain(k: usize, stay: f64) -> Result<Self, SynthError> {
        if k == 0 {
            return Err(SynthError::InvalidMatrix("no states".to_string()));
        }
        if k == 1 {
            return TransitionMatrix::new(vec![vec![1.0]]);
        }
        if !(0.0..=1.0).contains(&stay) {
            return Err(SynthError::InvalidMatrix(format!(
                "stay probability {stay} outside [0, 1]"
            )));
        }
        let off = (1.0 - stay) / (k - 1) as f64;
        let rows = (0..k)
            .map(|s| (0..k).map(|t| if s == t { stay } else { off }).collect())
            .collect();
        TransitionMatrix::new(rows)
    }

    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.rows[s]
    }
}

fn usize_alphabet(k: usize) -> Alphabet<usize> {
    Alphabet::from_labels(0..k)
}

fn sample_from(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last_positive = i;
        cumulative += p;
        if u < cumulative {
            return i;
        }
    }
    // Floating-point tail: fall back to the last positive outcome.
    last_positive
}

/// Draws `n` independent symbols from `dist`.
pub fn gen_iid(dist: &EmpiricalDistribution, n: usize, seed: u64) -> CategoricalSequence<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codes = (0..n)
        .map(|_| sample_from(&mut rng, dist.probs()))
        .collect();
    CategoricalSequence::from_codes(usize_alphabet(dist.len()), codes)
        .expect("sampled codes are in range")
}

/// Samples a chain of length `n` from `matrix`. The start state defaults to
/// a uniform draw.
pub fn gen_markov(
    matrix: &TransitionMatrix,
    n: usize,
    seed: u64,
    start: Option<usize>,
) -> Result<CategoricalSequence<usize>, SynthError> {
    let k = matrix.num_states();
    if let Some(s) = start {
        if s >= k {
            return Err(SynthError::InvalidMatrix(format!(
                "start state {s} out of range for {k} states"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut codes = Vec::with_capacity(n);
    if n > 0 {
        let mut state = start.unwrap_or_else(|| rng.random_range(0..k));
        codes.push(state);
        for _ in 1..n {
            state = sample_from(&mut rng, matrix.row(state));
            codes.push(state);
        }
    }
    Ok(CategoricalSequence::from_codes(usize_alphabet(k), codes)
        .expect("chain states are in range"))
}

/// Repeats `pattern` cyclically out to length `n`.
pub fn gen_periodic<L: Symbol>(
    pattern: &CategoricalSequence<L>,
    n: usize,
) -> Result<CategoricalSequence<L>, SynthError> {
    if pattern.is_empty() {
        return Err(SynthError::EmptyPattern);
    }
    let codes = (0..n).map(|i| pattern.codes()[i % pattern.len()]).collect();
    Ok(
        CategoricalSequence::from_codes(pattern.alphabet().clone(), codes)
            .expect("pattern codes are in range"),
    )
}

/// The stationary distribution of `matrix` by power iteration, to residual
/// `1e-12`.
pub fn stationary_distribution(matrix: &TransitionMatrix) -> Result<Vec<f64>, SynthError> {
    let k = matrix.num_states();
    let mut pi = vec![1.0 / k as f64; k];
    let mut next = vec![0.0; k];
    for _ in 0..MAX_POWER_ITERATIONS {
        next.fill(0.0);
        for (s, &mass) in pi.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for (t, &p) in matrix.row(s).iter().enumerate() {
                next[t] += mass * p;
            }
        }
        let residual: f64 = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut pi, &mut next);
        if residual <= STATIONARY_TOLERANCE {
            return Ok(pi);
        }
    }
    let residual: f64 = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
    Err(SynthError::NotErgodic { residual })
}

/// The exact entropy rate of an ergodic chain: the stationary-weighted
/// average of the per-row entropies, in bits/symbol.
///
/// Chains whose power iteration happens to start at a fixed point (for
/// example any symmetric matrix, whose stationary distribution is uniform)
/// converge immediately even when reducible or periodic; for such degenerate
/// inputs this returns the rate of the chain restricted to its recurrent
/// behaviour rather than an error.
pub fn analytic_markov_rate(matrix: &TransitionMatrix) -> Result<f64, SynthError> {
    let pi = stationary_distribution(matrix)?;
    let rate = pi
        .iter()
        .zip(matrix.rows())
        .filter(|(&mass, _)| mass > 0.0)
        .map(|(&mass, row)| {
            let h: f64 = row
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| -p * p.log2())
                .sum();
            mass * h
        })
        .sum();
    Ok(rate)
}

/// Generates a synthetic interaction log: `egos` individuals, each binned
/// at `bin_width` seconds over `span_secs`, with one interaction event per
/// bin whose partner follows a chain sampled from `matrix`.
///
/// Ego `i` is named `ego{i:03}` and partner state `s` is `p{s:03}`, so the
/// log round-trips through parsing and binning back to the generated partner
/// sequences. Each individual uses a sub-seed derived from `seed` and their
/// index.
pub fn gen_event_log(
    egos: usize,
    matrix: &TransitionMatrix,
    span_secs: u64,
    bin_width: u64,
    seed: u64,
) -> Result<EventLog, SynthError> {
    if bin_width == 0 {
        return Err(SynthError::ZeroBinWidth);
    }
    let bins = span_secs / bin_width;
    let mut events = Vec::new();
    for ego_index in 0..egos {
        let chain = gen_markov(matrix, bins as usize, derive_seed(seed, ego_index), None)?;
        let ego = format!("ego{ego_index:03}");
        for (b, &state) in chain.codes().iter().enumerate() {
            events.push(InteractionEvent {
                time: b as u64 * bin_width,
                ego: ego.clone(),
                alter: format!("p{state:03}"),
                location: None,
            });
        }
    }
    Ok(EventLog::new(events, bin_width).expect("bin width checked above"))
}

/// Mixes a base seed with an individual's index.
pub fn derive_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}
