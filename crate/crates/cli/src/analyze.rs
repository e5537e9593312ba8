//! The analyze pipeline: per-individual entropy reports over partner,
//! location, and gap sequences, with conditional partner rates, assembled
//! into a population report.

use anyhow::{Context, Result};
use seqent::entropy::analyze_sequence;
use seqent::ingest::{
    bin_events, gap_sequence, location_sequence, partner_sequence, BinnedEntry, BinnedEventStream,
};
use seqent::seq::CategoricalSequence;

use crate::config::RunConfig;
use crate::report::{summarize, Exclusion, IndividualAnalysis, PopulationReport};
use crate::with_pool;

/// Conditioning series aligned with the partner sequence, one symbol per
/// binned entry.
///
/// - location: the entry's location, with `None` as an explicit
///   missing-location symbol so lengths stay aligned.
/// - gap: the capped number of bins since the previous entry (`Some(0)` for
///   entries sharing a bin), `None` for the first entry, which has no
///   predecessor.
fn conditioners(
    entries: &[BinnedEntry],
    gap_cap: u64,
) -> Vec<(&'static str, CategoricalSequence<Option<String>>)> {
    let mut out = Vec::new();
    if entries.iter().any(|e| e.location.is_some()) {
        out.push((
            "location",
            CategoricalSequence::from_labels(entries.iter().map(|e| e.location.clone())),
        ));
    }
    if entries.len() >= 2 {
        let labels = std::iter::once(None).chain(
            entries
                .windows(2)
                .map(|w| Some(((w[1].bin - w[0].bin).min(gap_cap)).to_string())),
        );
        out.push(("gap", CategoricalSequence::from_labels(labels)));
    }
    out
}

fn analyze_ego(
    stream: &BinnedEventStream,
    ego: &str,
    config: &RunConfig,
) -> Result<IndividualAnalysis, String> {
    let partner = partner_sequence(stream, ego).map_err(|e| e.to_string())?;
    if partner.len() < config.min_sequence_length {
        return Err(format!(
            "partner sequence length {} below minimum {}",
            partner.len(),
            config.min_sequence_length
        ));
    }
    let entries = stream.entries(ego).expect("ego present");
    let conds = conditioners(entries, config.gap_cap);
    let cond_refs: Vec<(&str, &CategoricalSequence<Option<String>>)> =
        conds.iter().map(|(name, seq)| (*name, seq)).collect();
    let partner_report = analyze_sequence(&partner, &cond_refs).map_err(|e| e.to_string())?;

    let location_report = location_sequence(stream, ego)
        .ok()
        .and_then(|seq| analyze_sequence::<String, String>(&seq, &[]).ok());
    let gap_report = gap_sequence(stream, ego, config.gap_cap)
        .ok()
        .and_then(|seq| analyze_sequence::<u64, u64>(&seq, &[]).ok());

    Ok(IndividualAnalysis {
        ego: ego.to_string(),
        partner: partner_report,
        location: location_report,
        gap: gap_report,
    })
}

/// Analyzes every individual in a binned stream.
pub fn analyze_stream(
    stream: &BinnedEventStream,
    config: &RunConfig,
    workers: usize,
) -> PopulationReport {
    let egos: Vec<&str> = stream.egos().collect();
    let outcomes: Vec<(String, Result<IndividualAnalysis, String>)> = with_pool(workers, || {
        use rayon::prelude::*;
        egos.par_iter()
            .map(|&ego| (ego.to_string(), analyze_ego(stream, ego, config)))
            .collect()
    });

    // Already in ego order because the stream iterates egos sorted.
    let mut individuals = Vec::new();
    let mut excluded = Vec::new();
    for (ego, outcome) in outcomes {
        match outcome {
            Ok(analysis) => individuals.push(analysis),
            Err(reason) => excluded.push(Exclusion { ego, reason }),
        }
    }
    let (summary, histograms) = summarize(&individuals);
    PopulationReport {
        config: config.clone(),
        individuals,
        excluded,
        summary,
        histograms,
    }
}

/// Reads, bins, and analyzes an event CSV.
pub fn analyze_path(
    path: &std::path::Path,
    config: &RunConfig,
    workers: usize,
) -> Result<PopulationReport> {
    let file =
        std::fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let log = seqent::ingest::parse_event_log(std::io::BufReader::new(file), config.bin_width)?;
    Ok(analyze_stream(&bin_events(&log), config, workers))
}
