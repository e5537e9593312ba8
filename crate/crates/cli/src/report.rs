//! Population report types and their JSON/CSV renderings.
//!
//! Reports are deterministic: maps are ordered, floats are serialized
//! exactly, and no timestamps or other run metadata enter the payload, so
//! re-running a command on the same inputs produces byte-identical output.

use std::collections::BTreeMap;

use seqent::entropy::EntropyReport;
use seqent::markov::EvaluationResult;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Histogram bin width for all rate distributions, in bits.
pub const HISTOGRAM_BIN_WIDTH: f64 = 0.1;

/// Why an individual was left out of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub ego: String,
    pub reason: String,
}

/// Entropy reports for one individual's sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualAnalysis {
    pub ego: String,
    pub partner: EntropyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<EntropyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<EntropyReport>,
}

/// Mean and median of one rate across the included population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSummary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
}

/// One fixed-width histogram bin `[lo, lo + 0.1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub count: usize,
}

/// The full output of the analyze command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationReport {
    pub config: RunConfig,
    pub individuals: Vec<IndividualAnalysis>,
    pub excluded: Vec<Exclusion>,
    pub summary: BTreeMap<String, RateSummary>,
    pub histograms: BTreeMap<String, Vec<HistogramBin>>,
}

/// Rolling-evaluation outcome for one individual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualPrediction {
    pub ego: String,
    pub result: EvaluationResult,
}

/// The full output of the predict command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub config: RunConfig,
    /// Predictions are scored once per interaction event (not per bin).
    pub counting: String,
    pub individuals: Vec<IndividualPrediction>,
    pub excluded: Vec<Exclusion>,
    /// Pooled accuracy across all individuals, keyed `top{k}`.
    pub overall: BTreeMap<String, f64>,
}

/// Every named rate carried by one individual's analysis.
pub fn rates_of(individual: &IndividualAnalysis) -> Vec<(String, f64)> {
    let mut rates = Vec::new();
    let mut push_report = |prefix: &str, report: &EntropyReport| {
        rates.push((format!("{prefix}.h_lz"), report.h_lz));
        rates.push((format!("{prefix}.h_iid"), report.h_iid));
        rates.push((format!("{prefix}.h_unif"), report.h_unif));
        for (name, &value) in &report.h_cond {
            rates.push((format!("{prefix}.h_cond.{name}"), value));
        }
    };
    push_report("partner", &individual.partner);
    if let Some(report) = &individual.location {
        push_report("location", report);
    }
    if let Some(report) = &individual.gap {
        push_report("gap", report);
    }
    rates
}

/// Builds summaries and fixed-width histograms over the included
/// individuals. Histogram counts for a rate sum to the number of individuals
/// reporting that rate.
pub fn summarize(
    individuals: &[IndividualAnalysis],
) -> (
    BTreeMap<String, RateSummary>,
    BTreeMap<String, Vec<HistogramBin>>,
) {
    let mut values: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for individual in individuals {
        for (name, value) in rates_of(individual) {
            values.entry(name).or_default().push(value);
        }
    }

    let mut summary = BTreeMap::new();
    let mut histograms = BTreeMap::new();
    for (name, mut vals) in values {
        vals.sort_by(|a, b| a.partial_cmp(b).expect("rates are finite"));
        let count = vals.len();
        let mean = vals.iter().sum::<f64>() / count as f64;
        let median = if count % 2 == 1 {
            vals[count / 2]
        } else {
            (vals[count / 2 - 1] + vals[count / 2]) / 2.0
        };
        summary.insert(
            name.clone(),
            RateSummary {
                count,
                mean,
                median,
            },
        );

        let mut bins: BTreeMap<i64, usize> = BTreeMap::new();
        for &v in &vals {
            *bins
                .entry((v / HISTOGRAM_BIN_WIDTH).floor() as i64)
                .or_default() += 1;
        }
        histograms.insert(
            name,
            bins.into_iter()
                .map(|(idx, count)| HistogramBin {
                    lo: idx as f64 * HISTOGRAM_BIN_WIDTH,
                    count,
                })
                .collect(),
        );
    }
    (summary, histograms)
}

fn fmt_rate(value: f64) -> String {
    format!("{value:.6}")
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map(fmt_rate).unwrap_or_default()
}

/// Fixed column order for the analyze CSV, one row per included individual.
pub const ANALYZE_CSV_HEADER: &[&str] = &[
    "ego",
    "partner_n",
    "partner_k",
    "partner_h_lz",
    "partner_h_iid",
    "partner_h_unif",
    "partner_effective_choices",
    "partner_h_cond_location",
    "partner_h_cond_gap",
    "location_n",
    "location_k",
    "location_h_lz",
    "location_h_iid",
    "location_h_unif",
    "location_effective_choices",
    "gap_n",
    "gap_k",
    "gap_h_lz",
    "gap_h_iid",
    "gap_h_unif",
    "gap_effective_choices",
];

/// Renders the per-individual analyze table.
pub fn analyze_csv(report: &PopulationReport) -> String {
    let mut out = String::new();
    out.push_str(&ANALYZE_CSV_HEADER.join(","));
    out.push('\n');
    for ind in &report.individuals {
        let p = &ind.partner;
        let mut fields = vec![
            ind.ego.clone(),
            p.n.to_string(),
            p.k.to_string(),
            fmt_rate(p.h_lz),
            fmt_rate(p.h_iid),
            fmt_rate(p.h_unif),
            fmt_rate(p.effective_choices),
            fmt_opt(p.h_cond.get("location").copied()),
            fmt_opt(p.h_cond.get("gap").copied()),
        ];
        for report in [&ind.location, &ind.gap] {
            match report {
                Some(r) => fields.extend([
                    r.n.to_string(),
                    r.k.to_string(),
                    fmt_rate(r.h_lz),
                    fmt_rate(r.h_iid),
                    fmt_rate(r.h_unif),
                    fmt_rate(r.effective_choices),
                ]),
                None => fields.extend(std::iter::repeat_n(String::new(), 6)),
            }
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Renders the exclusion table: `ego,reason`.
pub fn exclusions_csv(excluded: &[Exclusion]) -> String {
    let mut out = String::from("ego,reason\n");
    for e in excluded {
        out.push_str(&format!("{},{}\n", e.ego, e.reason));
    }
    out
}

/// Renders the population summary table: `rate,count,mean,median`.
pub fn summary_csv(summary: &BTreeMap<String, RateSummary>) -> String {
    let mut out = String::from("rate,count,mean,median\n");
    for (name, s) in summary {
        out.push_str(&format!(
            "{},{},{},{}\n",
            name,
            s.count,
            fmt_rate(s.mean),
            fmt_rate(s.median)
        ));
    }
    out
}

/// Renders the histogram table: `rate,bin_lo,count`.
pub fn histograms_csv(histograms: &BTreeMap<String, Vec<HistogramBin>>) -> String {
    let mut out = String::from("rate,bin_lo,count\n");
    for (name, bins) in histograms {
        for bin in bins {
            out.push_str(&format!("{},{},{}\n", name, fmt_rate(bin.lo), bin.count));
        }
    }
    out
}

/// Renders the per-individual prediction table. Columns after `evaluated`
/// depend on the configured k list: `hits_top{k}` then `acc_top{k}`.
pub fn predict_csv(report: &PredictionReport) -> String {
    let mut header = vec![
        "ego".to_string(),
        "windows".to_string(),
        "evaluated".to_string(),
    ];
    for &k in &report.config.ks {
        header.push(format!("hits_top{k}"));
    }
    for &k in &report.config.ks {
        header.push(format!("acc_top{k}"));
    }
    let mut out = header.join(",");
    out.push('\n');
    for ind in &report.individuals {
        let mut fields = vec![
            ind.ego.clone(),
            ind.result.windows.len().to_string(),
            ind.result.evaluated.to_string(),
        ];
        for (i, _) in ind.result.ks.iter().enumerate() {
            let hits: u64 = ind.result.windows.iter().map(|w| w.hits[i]).sum();
            fields.push(hits.to_string());
        }
        for &acc in &ind.result.overall {
            fields.push(fmt_rate(acc));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(h_lz: f64) -> EntropyReport {
        EntropyReport {
            n: 100,
            k: 4,
            h_lz,
            h_iid: 1.5,
            h_unif: 2.0,
            effective_choices: h_lz.exp2(),
            h_cond: BTreeMap::new(),
        }
    }

    fn individual(ego: &str, h_lz: f64) -> IndividualAnalysis {
        IndividualAnalysis {
            ego: ego.to_string(),
            partner: report(h_lz),
            location: None,
            gap: None,
        }
    }

    #[test]
    fn summary_mean_and_median() {
        let individuals = vec![
            individual("a", 1.0),
            individual("b", 2.0),
            individual("c", 4.0),
        ];
        let (summary, _) = summarize(&individuals);
        let s = &summary["partner.h_lz"];
        assert_eq!(s.count, 3);
        assert!((s.mean - 7.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.median, 2.0);
    }

    #[test]
    fn histogram_counts_sum_to_population() {
        let individuals = vec![
            individual("a", 1.01),
            individual("b", 1.05),
            individual("c", 3.27),
        ];
        let (_, histograms) = summarize(&individuals);
        let bins = &histograms["partner.h_lz"];
        let total: usize = bins.iter().map(|b| b.count).sum();
        assert_eq!(total, 3);
        assert_eq!(bins[0].count, 2);
        assert!((bins[0].lo - 1.0).abs() < 1e-9);
        assert!((bins[1].lo - 3.2).abs() < 1e-9);
    }

    #[test]
    fn histogram_handles_negative_rates() {
        let mut ind = individual("a", 0.5);
        ind.partner.h_cond.insert("location".to_string(), -0.04);
        let (_, histograms) = summarize(&[ind]);
        let bins = &histograms["partner.h_cond.location"];
        assert_eq!(bins.len(), 1);
        assert!(bins[0].lo < -0.04 && bins[0].lo >= -0.1 - 1e-9);
    }

    #[test]
    fn analyze_csv_has_fixed_columns() {
        let report = PopulationReport {
            config: RunConfig::default(),
            individuals: vec![individual("a", 1.0)],
            excluded: vec![],
            summary: BTreeMap::new(),
            histograms: BTreeMap::new(),
        };
        let csv = analyze_csv(&report);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), ANALYZE_CSV_HEADER.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), ANALYZE_CSV_HEADER.len());
        assert_eq!(row[0], "a");
        assert_eq!(row[3], "1.000000");
        assert_eq!(row[9], ""); // absent location block
    }
}
