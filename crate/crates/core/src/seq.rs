//! Alphabet management and categorical sequence representation.
//!
//! Every estimator in this crate operates on a [`CategoricalSequence`]: a run
//! of dense integer codes over a finite [`Alphabet`]. Codes are assigned in
//! first-appearance order, so the alphabet size is always the observed support
//! of the data, never a larger nominal universe.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

/// Sum tolerance for a valid probability vector.
pub const PROB_SUM_TOLERANCE: f64 = 1e-12;

/// Anything usable as an external symbol label.
pub trait Symbol: Clone + Eq + Hash + Ord + fmt::Debug {}

impl<T: Clone + Eq + Hash + Ord + fmt::Debug> Symbol for T {}

/// Errors from sequence construction and basic statistics.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeqError {
    #[error("sequence is empty")]
    Empty,

    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("code {code} out of range for alphabet of size {size}")]
    CodeOutOfRange { code: usize, size: usize },

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),
}

/// A finite, ordered set of distinct labels with dense integer codes.
///
/// Code `c` always decodes to the `c`-th distinct label in order of first
/// appearance, so encoding followed by decoding is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet<L: Symbol> {
    labels: Vec<L>,
    index: HashMap<L, usize>,
}

impl<L: Symbol> Alphabet<L> {
    /// Builds an alphabet from labels in first-appearance order. Duplicates
    /// are ignored after their first occurrence.
    pub fn from_labels<I: IntoIterator<Item = L>>(labels: I) -> Self {
        let mut alphabet = Alphabet {
            labels: Vec::new(),
            index: HashMap::new(),
        };
        for label in labels {
            alphabet.insert(label);
        }
        alphabet
    }

    /// Number of distinct labels.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The code assigned to `label`, if present.
    pub fn code_of(&self, label: &L) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// The label behind `code`, if in range.
    pub fn label(&self, code: usize) -> Option<&L> {
        self.labels.get(code)
    }

    /// All labels in code order.
    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    /// Inserts a label if new, returning its code either way. Kept
    /// crate-private so published alphabets stay frozen; growth is only
    /// needed internally (model updates that meet new symbols).
    pub(crate) fn insert(&mut self, label: L) -> usize {
        if let Some(&code) = self.index.get(&label) {
            return code;
        }
        let code = self.labels.len();
        self.labels.push(label.clone());
        self.index.insert(label, code);
        code
    }
}

/// An encoded symbol series over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoricalSequence<L: Symbol> {
    alphabet: Alphabet<L>,
    codes: Vec<usize>,
}

impl<L: Symbol> CategoricalSequence<L> {
    /// Encodes raw labels by first appearance. `["a","b","a"]` becomes codes
    /// `[0,1,0]` over an alphabet of size 2; an empty input yields an empty
    /// sequence over an empty alphabet.
    pub fn from_labels<I: IntoIterator<Item = L>>(labels: I) -> Self {
        let mut alphabet = Alphabet {
            labels: Vec::new(),
            index: HashMap::new(),
        };
        let codes = labels.into_iter().map(|l| alphabet.insert(l)).collect();
        CategoricalSequence { alphabet, codes }
    }

    /// Wraps pre-encoded codes over a given alphabet. Unlike
    /// [`from_labels`](Self::from_labels) the codes need not cover the whole
    /// alphabet, which is how synthetic generators express "drawn from K
    /// symbols" even when a draw never hits some of them.
    pub fn from_codes(alphabet: Alphabet<L>, codes: Vec<usize>) -> Result<Self, SeqError> {
        let size = alphabet.len();
        if let Some(&code) = codes.iter().find(|&&c| c >= size) {
            return Err(SeqError::CodeOutOfRange { code, size });
        }
        Ok(CategoricalSequence { alphabet, codes })
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[usize] {
        &self.codes
    }

    pub fn alphabet(&self) -> &Alphabet<L> {
        &self.alphabet
    }

    /// Alphabet size K.
    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    /// Decodes back to the original labels.
    pub fn decode(&self) -> Vec<L> {
        self.codes
            .iter()
            .map(|&c| self.alphabet.labels[c].clone())
            .collect()
    }

    /// The empirical marginal distribution: `probs[k] = count(k) / n`.
    pub fn marginal(&self) -> Result<EmpiricalDistribution, SeqError> {
        if self.codes.is_empty() {
            return Err(SeqError::Empty);
        }
        let mut counts = vec![0u64; self.alphabet.len()];
        for &c in &self.codes {
            counts[c] += 1;
        }
        let n = self.codes.len() as f64;
        Ok(EmpiricalDistribution {
            probs: counts.iter().map(|&c| c as f64 / n).collect(),
        })
    }
}

/// Zips two equal-length sequences into a sequence over ordered pairs.
///
/// The output alphabet is the set of observed pairs, coded by first
/// appearance. Projecting the pair labels back onto either coordinate
/// recovers the corresponding input's label series.
pub fn pair<A: Symbol, B: Symbol>(
    x: &CategoricalSequence<A>,
    y: &CategoricalSequence<B>,
) -> Result<CategoricalSequence<(A, B)>, SeqError> {
    if x.len() != y.len() {
        return Err(SeqError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let labels = x
        .codes
        .iter()
        .zip(&y.codes)
        .map(|(&a, &b)| (x.alphabet.labels[a].clone(), y.alphabet.labels[b].clone()));
    Ok(CategoricalSequence::from_labels(labels))
}

/// A probability vector over the codes of some alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    probs: Vec<f64>,
}

impl EmpiricalDistribution {
    /// Validates that `probs` is non-empty, non-negative, and sums to 1
    /// within [`PROB_SUM_TOLERANCE`].
    pub fn new(probs: Vec<f64>) -> Result<Self, SeqError> {
        if probs.is_empty() {
            return Err(SeqError::InvalidDistribution("no outcomes".to_string()));
        }
        if probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(SeqError::InvalidDistribution(
                "negative or non-finite entry".to_string(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(SeqError::InvalidDistribution(format!(
                "probabilities sum to {sum}"
            )));
        }
        Ok(EmpiricalDistribution { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}
