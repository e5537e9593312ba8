//! First-order Markov models over interaction partners, and the rolling
//! train/evaluate protocol.
//!
//! A model is fit by counting adjacent-pair transitions of one sequence; the
//! state is the last symbol observed. Its entropy rate is the
//! occupancy-weighted average of the per-row entropies, with relative
//! frequencies substituted for probabilities.
//!
//! Prediction ranks a row's targets by probability (ties broken by ascending
//! state code); rows with fewer than `k` positive targets are padded by
//! marginal target frequency, and a source state the model has never seen
//! falls back to the marginal target distribution outright.
//!
//! [`rolling_evaluate`] replays an individual's event stream in fixed
//! windows anchored at the first event: fit on window 0, then for each later
//! window score every event's predicted partner before folding that window's
//! transitions into the model. The model that scores window `w` therefore
//! only ever contains transitions from windows before `w`.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::plugin_entropy;
use crate::ingest::BinnedEventStream;
use crate::seq::{Alphabet, CategoricalSequence, EmpiricalDistribution, Symbol};

/// Errors from model fitting and evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MarkovError {
    #[error("sequence too short to fit: length {n}, need at least 2")]
    TooShort { n: usize },

    #[error("state {state} out of range for {k} states")]
    UnknownState { state: usize, k: usize },

    #[error("model has no transitions")]
    NoTransitions,

    #[error("top-k size must be at least 1")]
    ZeroK,

    #[error("ego {0:?} not present in the event stream")]
    UnknownEgo(String),

    #[error("ego {ego:?} spans {windows} window(s), need at least 2")]
    InsufficientSpan { ego: String, windows: usize },
}

/// Transition counts and state frequencies for one individual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovModel<L: Symbol> {
    alphabet: Alphabet<L>,
    counts: Vec<Vec<u64>>,
    state_counts: Vec<u64>,
}

impl<L: Symbol> MarkovModel<L> {
    /// Fits a model on one sequence by counting adjacent pairs.
    pub fn fit(seq: &CategoricalSequence<L>) -> Result<Self, MarkovError> {
        if seq.len() < 2 {
            return Err(MarkovError::TooShort { n: seq.len() });
        }
        let mut model = MarkovModel::empty(seq.alphabet().clone());
        model.accumulate(seq.codes());
        Ok(model)
    }

    /// An empty model over a fixed alphabet.
    pub fn empty(alphabet: Alphabet<L>) -> Self {
        let k = alphabet.len();
        MarkovModel {
            alphabet,
            counts: vec![vec![0; k]; k],
            state_counts: vec![0; k],
        }
    }

    /// Builds a model directly from a count matrix.
    pub fn from_counts(alphabet: Alphabet<L>, counts: Vec<Vec<u64>>) -> Result<Self, MarkovError> {
        let k = alphabet.len();
        if counts.len() != k || counts.iter().any(|row| row.len() != k) {
            return Err(MarkovError::UnknownState {
                state: counts.len(),
                k,
            });
        }
        let state_counts = counts.iter().map(|row| row.iter().sum()).collect();
        Ok(MarkovModel {
            alphabet,
            counts,
            state_counts,
        })
    }

    /// Folds another sequence's transitions into the model. Labels unseen so
    /// far grow the state space; existing counts are preserved. If `bridge`
    /// is given, one extra transition from it to the sequence's first symbol
    /// is counted.
    pub fn update(&mut self, seq: &CategoricalSequence<L>, bridge: Option<&L>) {
        if seq.is_empty() {
            return;
        }
        let codes: Vec<usize> = seq
            .codes()
            .iter()
            .map(|&c| {
                let label = seq.alphabet().label(c).expect("code within alphabet");
                self.intern(label.clone())
            })
            .collect();
        if let Some(label) = bridge {
            let from = self.intern(label.clone());
            self.count_transition(from, codes[0]);
        }
        self.accumulate(&codes);
    }

    fn intern(&mut self, label: L) -> usize {
        let state = self.alphabet.insert(label);
        if state == self.counts.len() {
            for row in &mut self.counts {
                row.push(0);
            }
            self.counts.push(vec![0; state + 1]);
            self.state_counts.push(0);
        }
        state
    }

    fn accumulate(&mut self, codes: &[usize]) {
        for w in codes.windows(2) {
            self.count_transition(w[0], w[1]);
        }
    }

    fn count_transition(&mut self, from: usize, to: usize) {
        self.counts[from][to] += 1;
        self.state_counts[from] += 1;
    }

    /// Number of states.
    pub fn num_states(&self) -> usize {
        self.state_counts.len()
    }

    pub fn alphabet(&self) -> &Alphabet<L> {
        &self.alphabet
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    /// Occurrences of each state as a transition source.
    pub fn state_counts(&self) -> &[u64] {
        &self.state_counts
    }

    /// Total number of counted transitions.
    pub fn total_transitions(&self) -> u64 {
        self.state_counts.iter().sum()
    }

    /// How often each state occurs as a transition target.
    fn target_counts(&self) -> Vec<u64> {
        let k = self.num_states();
        let mut totals = vec![0u64; k];
        for row in &self.counts {
            for (t, &c) in row.iter().enumerate() {
                totals[t] += c;
            }
        }
        totals
    }

    /// The transition distribution out of state `s`. A source with no
    /// observed transitions falls back to the marginal distribution of all
    /// transition targets.
    pub fn transition_probs(&self, s: usize) -> Result<EmpiricalDistribution, MarkovError> {
        let k = self.num_states();
        if s >= k {
            return Err(MarkovError::UnknownState { state: s, k });
        }
        let (row, total) = if self.state_counts[s] > 0 {
            (self.counts[s].clone(), self.state_counts[s])
        } else {
            let targets = self.target_counts();
            let total = targets.iter().sum();
            if total == 0 {
                return Err(MarkovError::NoTransitions);
            }
            (targets, total)
        };
        let probs = row.iter().map(|&c| c as f64 / total as f64).collect();
        Ok(EmpiricalDistribution::new(probs).expect("row counts normalise"))
    }

    /// Entropy rate of the fitted chain: the state-frequency-weighted average
    /// of the per-row entropies, in bits/symbol.
    pub fn entropy_rate(&self) -> Result<f64, MarkovError> {
        let total = self.total_transitions();
        if total == 0 {
            return Err(MarkovError::NoTransitions);
        }
        let mut rate = 0.0;
        for (s, &occupancy) in self.state_counts.iter().enumerate() {
            if occupancy == 0 {
                continue;
            }
            let row = self.transition_probs(s)?;
            rate += occupancy as f64 / total as f64 * plugin_entropy(&row);
        }
        Ok(rate)
    }

    /// The `k` most likely next states out of `s`, ranked by probability with
    /// ties broken by ascending state code. Rows supporting fewer than `k`
    /// targets are padded by marginal-frequency rank; the result always has
    /// `min(k, K)` distinct states.
    pub fn top_k(&self, s: usize, k: usize) -> Result<Vec<usize>, MarkovError> {
        if k == 0 {
            return Err(MarkovError::ZeroK);
        }
        let probs = self.transition_probs(s)?;
        Ok(self.rank_targets(probs.probs(), k))
    }

    /// Like [`top_k`](Self::top_k) keyed by label. A label the model has
    /// never seen predicts from the marginal target distribution.
    pub fn top_k_for_label(&self, state: &L, k: usize) -> Result<Vec<usize>, MarkovError> {
        if k == 0 {
            return Err(MarkovError::ZeroK);
        }
        match self.alphabet.code_of(state) {
            Some(s) => self.top_k(s, k),
            None => {
                let targets = self.target_counts();
                let total: u64 = targets.iter().sum();
                if total == 0 {
                    return Err(MarkovError::NoTransitions);
                }
                let probs: Vec<f64> = targets.iter().map(|&c| c as f64 / total as f64).collect();
                Ok(self.rank_targets(&probs, k))
            }
        }
    }

    fn rank_targets(&self, probs: &[f64], k: usize) -> Vec<usize> {
        let mut row_rank: Vec<usize> = (0..probs.len()).collect();
        row_rank.sort_by(|&a, &b| {
            probs[b]
                .partial_cmp(&probs[a])
                .expect("probabilities are finite")
                .then(a.cmp(&b))
        });
        let mut out: Vec<usize> = row_rank
            .iter()
            .copied()
            .filter(|&t| probs[t] > 0.0)
            .take(k)
            .collect();
        if out.len() < k {
            // Pad by marginal target frequency, then by code.
            let targets = self.target_counts();
            let mut pad_rank: Vec<usize> = (0..targets.len()).collect();
            pad_rank.sort_by(|&a, &b| targets[b].cmp(&targets[a]).then(a.cmp(&b)));
            for t in pad_rank {
                if out.len() == k {
                    break;
                }
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Writes the positive-probability edges as `source,target,probability`
    /// lines, sorted by source then target.
    pub fn dump_edges<W: Write>(&self, mut w: W) -> io::Result<()>
    where
        L: std::fmt::Display,
    {
        for s in 0..self.num_states() {
            if self.state_counts[s] == 0 {
                continue;
            }
            let total = self.state_counts[s] as f64;
            for (t, &c) in self.counts[s].iter().enumerate() {
                if c > 0 {
                    writeln!(
                        w,
                        "{},{},{:.6}",
                        self.alphabet.label(s).expect("state in alphabet"),
                        self.alphabet.label(t).expect("state in alphabet"),
                        c as f64 / total
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Settings for [`rolling_evaluate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RollingConfig {
    /// Window length in seconds.
    pub window_secs: u64,
    /// Prediction list sizes to score, ascending.
    pub ks: Vec<usize>,
    /// Whether the first transition of each window bridges from the last
    /// partner of the previous window when updating the model.
    pub bridge: bool,
}

impl Default for RollingConfig {
    fn default() -> Self {
        RollingConfig {
            window_secs: 7 * 86_400,
            ks: vec![1, 5],
            bridge: true,
        }
    }
}

/// Scores for one evaluation window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowScore {
    pub window: usize,
    pub evaluated: u64,
    /// Hits per entry of [`RollingConfig::ks`].
    pub hits: Vec<u64>,
}

/// Outcome of the rolling train/evaluate protocol for one individual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationResult {
    /// Prediction list sizes scored, ascending.
    pub ks: Vec<usize>,
    /// Counts for every post-training window that contained events, in
    /// window order.
    pub windows: Vec<WindowScore>,
    /// Total events scored.
    pub evaluated: u64,
    /// Overall hit fraction per entry of `ks`.
    pub overall: Vec<f64>,
}

impl EvaluationResult {
    /// The overall accuracy for a given `k`, if scored.
    pub fn overall_for(&self, k: usize) -> Option<f64> {
        self.ks
            .iter()
            .position(|&x| x == k)
            .map(|i| self.overall[i])
    }
}

/// Fits on the first window of an individual's events and evaluates top-k
/// next-partner predictions on every later window, updating the model after
/// each window is scored.
///
/// Windows are aligned to the first event's bin. Predictions count per
/// interaction event, and the model state carries across silent windows as
/// the last observed partner.
pub fn rolling_evaluate(
    stream: &BinnedEventStream,
    ego: &str,
    config: &RollingConfig,
) -> Result<EvaluationResult, MarkovError> {
    let entries = stream
        .entries(ego)
        .ok_or_else(|| MarkovError::UnknownEgo(ego.to_string()))?;
    let mut ks = config.ks.clone();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() || ks[0] == 0 {
        return Err(MarkovError::ZeroK);
    }

    let bin_width = stream.bin_width();
    let first_bin = entries[0].bin;
    // bin * bin_width <= the original event time, so this cannot overflow.
    let window_of = |bin: u64| ((bin - first_bin) * bin_width / config.window_secs) as usize;
    if window_of(entries[entries.len() - 1].bin) < 1 {
        return Err(MarkovError::InsufficientSpan {
            ego: ego.to_string(),
            windows: 1,
        });
    }

    // Group partner labels by window, sparsely: silent windows carry no
    // events and are not reported.
    let mut per_window: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for entry in entries {
        per_window
            .entry(window_of(entry.bin))
            .or_default()
            .push(entry.alter.clone());
    }

    let training_labels = per_window
        .remove(&0)
        .expect("the first event lands in window 0");
    let training = CategoricalSequence::from_labels(training_labels.iter().cloned());
    let mut model = if training.len() >= 2 {
        MarkovModel::fit(&training)?
    } else {
        MarkovModel::empty(training.alphabet().clone())
    };

    let k_max = *ks.last().expect("ks nonempty");
    let mut state = training_labels.last().cloned().expect("nonempty window");
    let mut last_of_prev_window = state.clone();

    let mut windows = Vec::with_capacity(per_window.len());
    let mut total_hits = vec![0u64; ks.len()];
    let mut total_evaluated = 0u64;

    for (&w, labels) in &per_window {
        let mut score = WindowScore {
            window: w,
            evaluated: 0,
            hits: vec![0; ks.len()],
        };
        for label in labels {
            let ranked = model
                .top_k_for_label(&state, k_max)
                .map(|states| {
                    states
                        .iter()
                        .map(|&s| model.alphabet().label(s).expect("ranked state").clone())
                        .collect::<Vec<_>>()
                })
                .unwrap_or_default();
            let hit_at = ranked.iter().position(|l| l == label);
            for (i, &k) in ks.iter().enumerate() {
                if hit_at.is_some_and(|pos| pos < k) {
                    score.hits[i] += 1;
                }
            }
            score.evaluated += 1;
            state = label.clone();
        }
        let window_seq = CategoricalSequence::from_labels(labels.iter().cloned());
        let bridge = config.bridge.then_some(&last_of_prev_window);
        model.update(&window_seq, bridge);
        last_of_prev_window = labels.last().expect("windows are nonempty").clone();
        total_evaluated += score.evaluated;
        for (t, h) in total_hits.iter_mut().zip(&score.hits) {
            *t += h;
        }
        windows.push(score);
    }

    let overall = total_hits
        .iter()
        .map(|&h| {
            if total_evaluated == 0 {
                0.0
            } else {
                h as f64 / total_evaluated as f64
            }
        })
        .collect();
    Ok(EvaluationResult {
        ks,
        windows,
        evaluated: total_evaluated,
        overall,
    })
}

/// Convenience map from window index to score, for tests and reports.
pub fn window_scores_by_index(result: &EvaluationResult) -> BTreeMap<usize, &WindowScore> {
    result.windows.iter().map(|w| (w.window, w)).collect()
}
