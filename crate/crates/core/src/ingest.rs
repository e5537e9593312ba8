//! Interaction-log parsing, time binning, and per-individual sequence
//! extraction.
//!
//! The only ingestion format is a UTF-8 CSV with header
//! `time,ego,alter,location`: `time` is non-negative integer seconds, ids
//! are opaque, `location` may be empty, and rows need not be pre-sorted.
//!
//! Binning collapses each individual's events into fixed-width time bins:
//! repeated contact with the same partner inside one bin counts once, and
//! distinct partners in the same bin become separate consecutive entries in
//! partner-label order. From the binned stream three sequences are drawn per
//! individual: the partners they interact with, the locations of those
//! interactions (where recorded), and the capped gaps between interaction
//! bins.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use thiserror::Error;

use crate::seq::CategoricalSequence;

/// Errors from log parsing and sequence extraction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },

    #[error("line {line}: ego and alter are both {id:?}")]
    SelfInteraction { line: u64, id: String },

    #[error("bin width must be positive")]
    ZeroBinWidth,

    #[error("gap cap must be positive")]
    ZeroGapCap,

    #[error("ego {0:?} not present in the event stream")]
    UnknownEgo(String),

    #[error("ego {0:?} has no located interactions")]
    NoLocations(String),

    #[error("ego {ego:?} has {distinct_bins} distinct interaction bin(s), need at least 2")]
    TooFewBins { ego: String, distinct_bins: usize },
}

/// One timestamped interaction record.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InteractionEvent {
    pub time: u64,
    pub ego: String,
    pub alter: String,
    pub location: Option<String>,
}

/// A sorted interaction log with its binning width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventLog {
    events: Vec<InteractionEvent>,
    bin_width: u64,
}

impl EventLog {
    /// Sorts the events by `(time, ego, alter, location)` and wraps them.
    pub fn new(mut events: Vec<InteractionEvent>, bin_width: u64) -> Result<Self, IngestError> {
        if bin_width == 0 {
            return Err(IngestError::ZeroBinWidth);
        }
        events.sort_by(|a, b| {
            (a.time, &a.ego, &a.alter, &a.location).cmp(&(b.time, &b.ego, &b.alter, &b.location))
        });
        Ok(EventLog { events, bin_width })
    }

    pub fn events(&self) -> &[InteractionEvent] {
        &self.events
    }

    pub fn bin_width(&self) -> u64 {
        self.bin_width
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Writes the log back out in the ingestion CSV format.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["time", "ego", "alter", "location"])?;
        for event in &self.events {
            out.write_record([
                event.time.to_string().as_str(),
                &event.ego,
                &event.alter,
                event.location.as_deref().unwrap_or(""),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Parses the event CSV. Rows are validated field by field, so the first
/// violation on a row is the one reported.
pub fn parse_event_log<R: Read>(reader: R, bin_width: u64) -> Result<EventLog, IngestError> {
    if bin_width == 0 {
        return Err(IngestError::ZeroBinWidth);
    }
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);

    {
        let headers = csv_reader
            .headers()
            .map_err(|e| malformed(1, format!("unreadable header: {e}")))?;
        let expected = ["time", "ego", "alter", "location"];
        if headers.iter().map(str::trim).ne(expected) {
            return Err(malformed(
                1,
                format!("expected header time,ego,alter,location, got {headers:?}"),
            ));
        }
    }

    let mut events = Vec::new();
    for record in csv_reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let time: u64 = record[0]
            .trim()
            .parse()
            .map_err(|_| malformed(line, format!("bad time {:?}", &record[0])))?;
        let ego = record[1].trim();
        let alter = record[2].trim();
        if ego.is_empty() || alter.is_empty() {
            return Err(malformed(line, "empty ego or alter id".to_string()));
        }
        if ego == alter {
            return Err(IngestError::SelfInteraction {
                line,
                id: ego.to_string(),
            });
        }
        let location = record[3].trim();
        events.push(InteractionEvent {
            time,
            ego: ego.to_string(),
            alter: alter.to_string(),
            location: (!location.is_empty()).then(|| location.to_string()),
        });
    }
    EventLog::new(events, bin_width)
}

fn malformed(line: u64, message: String) -> IngestError {
    IngestError::Malformed { line, message }
}

/// One binned interaction: the bin index, the partner, and the location of
/// the interaction if any row in the bin recorded one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinnedEntry {
    pub bin: u64,
    pub alter: String,
    pub location: Option<String>,
}

/// Per-individual binned interaction entries, ordered by bin then partner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinnedEventStream {
    bin_width: u64,
    per_ego: BTreeMap<String, Vec<BinnedEntry>>,
}

impl BinnedEventStream {
    pub fn bin_width(&self) -> u64 {
        self.bin_width
    }

    /// Egos present, in id order.
    pub fn egos(&self) -> impl Iterator<Item = &str> {
        self.per_ego.keys().map(String::as_str)
    }

    pub fn num_egos(&self) -> usize {
        self.per_ego.len()
    }

    pub fn entries(&self, ego: &str) -> Option<&[BinnedEntry]> {
        self.per_ego.get(ego).map(Vec::as_slice)
    }
}

/// Bins an event log: `bin = time / bin_width`, duplicate
/// `(ego, bin, alter)` tuples collapse to one entry (the earliest row's
/// location wins), and distinct partners within a bin order by label.
pub fn bin_events(log: &EventLog) -> BinnedEventStream {
    let mut per_ego: BTreeMap<String, BTreeMap<(u64, String), Option<String>>> = BTreeMap::new();
    for event in log.events() {
        let bin = event.time / log.bin_width();
        per_ego
            .entry(event.ego.clone())
            .or_default()
            .entry((bin, event.alter.clone()))
            .or_insert_with(|| event.location.clone());
    }
    BinnedEventStream {
        bin_width: log.bin_width(),
        per_ego: per_ego
            .into_iter()
            .map(|(ego, entries)| {
                let entries = entries
                    .into_iter()
                    .map(|((bin, alter), location)| BinnedEntry {
                        bin,
                        alter,
                        location,
                    })
                    .collect();
                (ego, entries)
            })
            .collect(),
    }
}

/// The sequence of partners an individual interacts with, one symbol per
/// binned entry.
pub fn partner_sequence(
    stream: &BinnedEventStream,
    ego: &str,
) -> Result<CategoricalSequence<String>, IngestError> {
    let entries = stream
        .entries(ego)
        .ok_or_else(|| IngestError::UnknownEgo(ego.to_string()))?;
    Ok(CategoricalSequence::from_labels(
        entries.iter().map(|e| e.alter.clone()),
    ))
}

/// The sequence of locations of an individual's interactions; entries with
/// no recorded location are skipped.
pub fn location_sequence(
    stream: &BinnedEventStream,
    ego: &str,
) -> Result<CategoricalSequence<String>, IngestError> {
    let entries = stream
        .entries(ego)
        .ok_or_else(|| IngestError::UnknownEgo(ego.to_string()))?;
    let labels: Vec<String> = entries.iter().filter_map(|e| e.location.clone()).collect();
    if labels.is_empty() {
        return Err(IngestError::NoLocations(ego.to_string()));
    }
    Ok(CategoricalSequence::from_labels(labels))
}

/// The sequence of capped gaps between an individual's interaction bins:
/// one symbol `min(delta, cap)` per pair of successive distinct bins.
pub fn gap_sequence(
    stream: &BinnedEventStream,
    ego: &str,
    cap: u64,
) -> Result<CategoricalSequence<u64>, IngestError> {
    if cap == 0 {
        return Err(IngestError::ZeroGapCap);
    }
    let entries = stream
        .entries(ego)
        .ok_or_else(|| IngestError::UnknownEgo(ego.to_string()))?;
    let mut bins: Vec<u64> = entries.iter().map(|e| e.bin).collect();
    bins.dedup();
    if bins.len() < 2 {
        return Err(IngestError::TooFewBins {
            ego: ego.to_string(),
            distinct_bins: bins.len(),
        });
    }
    Ok(CategoricalSequence::from_labels(
        bins.windows(2).map(|w| (w[1] - w[0]).min(cap)),
    ))
}
