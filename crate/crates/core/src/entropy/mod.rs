//! Entropy-rate estimators for categorical sequences.
//!
//! Three reference points are computed per sequence, all in bits/symbol:
//!
//! - `h_unif = log2 K`: an iid process of uniformly likely outcomes over the
//!   observed support.
//! - `h_iid`: the plug-in entropy of the marginal distribution, i.e. the rate
//!   of a memoryless process with the same symbol frequencies.
//! - `h_lz = n * log2(n) / sum(lambda_i)`: a nonparametric estimate built
//!   from match lengths, which converges to the true entropy rate for
//!   stationary ergodic processes and captures temporal dependence the iid
//!   baseline misses.
//!
//! The match length `lambda_i` is the length of the shortest substring
//! starting at position `i` that never starts at any earlier position. An
//! earlier occurrence only has to *start* before `i`; it may overlap it.
//! When even the whole suffix at `i` occurs earlier, `lambda_i` is one beyond
//! the longest checkable substring, `n - i + 2` (1-indexed), which keeps the
//! sum finite and the estimator consistent.
//!
//! Joint rates pair two equal-length sequences symbol-by-symbol and estimate
//! on the pair sequence; conditional rates are the difference
//! `h(x|y) = h(x,y) - h(y)`. At finite length the conditional estimate can be
//! negative or exceed the unconditional one; values are reported as-is.

mod lpf;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seq::{pair, CategoricalSequence, EmpiricalDistribution, SeqError, Symbol};

/// Errors from entropy estimation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EntropyError {
    #[error("sequence is empty")]
    Empty,

    #[error("sequence too short: length {n}, need at least {min}")]
    TooShort { n: usize, min: usize },

    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("alphabet is empty")]
    EmptyAlphabet,
}

/// The per-position match lengths of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchLengths {
    lambdas: Vec<usize>,
}

impl MatchLengths {
    /// `lambdas[i]` for 0-indexed `i`; always `>= 1`.
    pub fn lambdas(&self) -> &[usize] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Sum of all match lengths.
    pub fn total(&self) -> u64 {
        self.lambdas.iter().map(|&l| l as u64).sum()
    }
}

/// Per-sequence bundle of entropy-rate estimates.
///
/// `h_cond` holds one conditional rate per named conditioner that could be
/// estimated; conditioners that failed (length mismatch, too short) are
/// simply absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// Sequence length.
    pub n: usize,
    /// Alphabet size.
    pub k: usize,
    /// Match-length entropy-rate estimate, bits/symbol.
    pub h_lz: f64,
    /// Entropy rate of an iid process with the same marginals.
    pub h_iid: f64,
    /// `log2 K`, the uniform baseline.
    pub h_unif: f64,
    /// `2^h_lz`: the equivalent number of equally likely outcomes.
    pub effective_choices: f64,
    /// Conditional rate per conditioner name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub h_cond: BTreeMap<String, f64>,
}

/// Shannon entropy of a distribution in bits, with `0 log 0 = 0`.
pub fn plugin_entropy(dist: &EmpiricalDistribution) -> f64 {
    let h: f64 = dist
        .probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h + 0.0 // degenerate distributions yield -0.0
}

/// `log2 K`: the rate of uniformly likely outcomes over `K` symbols.
pub fn uniform_rate(k: usize) -> Result<f64, EntropyError> {
    if k == 0 {
        return Err(EntropyError::EmptyAlphabet);
    }
    Ok((k as f64).log2())
}

/// Entropy rate of an iid process with the sequence's marginal distribution;
/// equals the single-symbol plug-in entropy.
pub fn iid_rate<L: Symbol>(seq: &CategoricalSequence<L>) -> Result<f64, EntropyError> {
    let dist = seq.marginal().map_err(|_| EntropyError::Empty)?;
    Ok(plugin_entropy(&dist))
}

/// Match lengths by suffix-array indexing; `O(n log n)`.
pub fn match_lengths<L: Symbol>(
    seq: &CategoricalSequence<L>,
) -> Result<MatchLengths, EntropyError> {
    if seq.is_empty() {
        return Err(EntropyError::Empty);
    }
    let lambdas = lpf::lpf(seq.codes()).into_iter().map(|l| l + 1).collect();
    Ok(MatchLengths { lambdas })
}

/// Match lengths by direct scanning; quadratic. Retained as the independent
/// oracle for [`match_lengths`].
pub fn match_lengths_naive<L: Symbol>(
    seq: &CategoricalSequence<L>,
) -> Result<MatchLengths, EntropyError> {
    if seq.is_empty() {
        return Err(EntropyError::Empty);
    }
    let lambdas = lpf::lpf_naive(seq.codes())
        .into_iter()
        .map(|l| l + 1)
        .collect();
    Ok(MatchLengths { lambdas })
}

/// The match-length entropy-rate estimate `n * log2(n) / sum(lambda_i)`.
pub fn lz_rate<L: Symbol>(seq: &CategoricalSequence<L>) -> Result<f64, EntropyError> {
    let n = seq.len();
    if n < 2 {
        return Err(EntropyError::TooShort { n, min: 2 });
    }
    let lambdas = match_lengths(seq)?;
    Ok((n as f64) * (n as f64).log2() / lambdas.total() as f64)
}

/// Joint entropy rate: the estimate on the sequence of ordered pairs.
pub fn joint_lz_rate<A: Symbol, B: Symbol>(
    x: &CategoricalSequence<A>,
    y: &CategoricalSequence<B>,
) -> Result<f64, EntropyError> {
    let paired = pair(x, y).map_err(|e| match e {
        SeqError::LengthMismatch { left, right } => EntropyError::LengthMismatch { left, right },
        _ => EntropyError::Empty,
    })?;
    lz_rate(&paired)
}

/// Conditional entropy rate `h(x|y) = h(x,y) - h(y)`.
///
/// Reported unclamped: finite-sample estimates may be negative or exceed the
/// unconditional rate.
pub fn conditional_lz_rate<A: Symbol, B: Symbol>(
    x: &CategoricalSequence<A>,
    y: &CategoricalSequence<B>,
) -> Result<f64, EntropyError> {
    let joint = joint_lz_rate(x, y)?;
    Ok(joint - lz_rate(y)?)
}

/// `2^h`: the equivalent number of equally likely outcomes.
pub fn effective_choices(h: f64) -> f64 {
    h.exp2()
}

/// Runs the full estimator bundle on one sequence, with optional named
/// conditioning sequences of equal length.
pub fn analyze_sequence<L: Symbol, C: Symbol>(
    seq: &CategoricalSequence<L>,
    conditioners: &[(&str, &CategoricalSequence<C>)],
) -> Result<EntropyReport, EntropyError> {
    let h_lz = lz_rate(seq)?;
    let h_iid = iid_rate(seq)?;
    let h_unif = uniform_rate(seq.alphabet_size())?;
    let mut h_cond = BTreeMap::new();
    for (name, y) in conditioners {
        // A failing conditioner is recorded as missing, not fatal.
        if let Ok(h) = conditional_lz_rate(seq, y) {
            h_cond.insert((*name).to_string(), h);
        }
    }
    debug_assert!(h_iid >= 0.0 && h_iid <= h_unif + 1e-12);
    Ok(EntropyReport {
        n: seq.len(),
        k: seq.alphabet_size(),
        h_lz,
        h_iid,
        h_unif,
        effective_choices: effective_choices(h_lz),
        h_cond,
    })
}
