//! The predict pipeline: rolling train/evaluate per individual, with
//! optional model dumps.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use seqent::ingest::{partner_sequence, BinnedEventStream};
use seqent::markov::{rolling_evaluate, MarkovModel, RollingConfig};

use crate::config::RunConfig;
use crate::report::{Exclusion, IndividualPrediction, PredictionReport};
use crate::with_pool;

fn rolling_config(config: &RunConfig) -> RollingConfig {
    RollingConfig {
        window_secs: config.window,
        ks: config.ks.clone(),
        bridge: config.bridge,
    }
}

/// Evaluates every individual in a binned stream. Individuals whose events
/// span fewer than two windows are excluded with a reason, not fatal.
pub fn predict_stream(
    stream: &BinnedEventStream,
    config: &RunConfig,
    workers: usize,
) -> PredictionReport {
    let rolling = rolling_config(config);
    let egos: Vec<&str> = stream.egos().collect();
    let outcomes: Vec<_> = with_pool(workers, || {
        use rayon::prelude::*;
        egos.par_iter()
            .map(|&ego| (ego.to_string(), rolling_evaluate(stream, ego, &rolling)))
            .collect::<Vec<_>>()
    });

    let mut individuals = Vec::new();
    let mut excluded = Vec::new();
    let mut pooled_hits = vec![0u64; config.ks.len()];
    let mut pooled_evaluated = 0u64;
    for (ego, outcome) in outcomes {
        match outcome {
            Ok(result) => {
                for (i, _) in result.ks.iter().enumerate() {
                    let hits: u64 = result.windows.iter().map(|w| w.hits[i]).sum();
                    pooled_hits[i] += hits;
                }
                pooled_evaluated += result.evaluated;
                individuals.push(IndividualPrediction { ego, result });
            }
            Err(e) => excluded.push(Exclusion {
                ego,
                reason: e.to_string(),
            }),
        }
    }

    let mut overall = BTreeMap::new();
    for (i, &k) in config.ks.iter().enumerate() {
        let accuracy = if pooled_evaluated == 0 {
            0.0
        } else {
            pooled_hits[i] as f64 / pooled_evaluated as f64
        };
        overall.insert(format!("top{k}"), accuracy);
    }

    PredictionReport {
        config: config.clone(),
        counting: "per_event".to_string(),
        individuals,
        excluded,
        overall,
    }
}

/// Writes one `model_<ego>.csv` edge dump per individual, fit on their full
/// partner sequence.
pub fn dump_models(stream: &BinnedEventStream, dir: &Path) -> Result<usize> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut written = 0;
    for ego in stream.egos() {
        let seq = partner_sequence(stream, ego).expect("ego present");
        if seq.len() < 2 {
            continue;
        }
        let model = MarkovModel::fit(&seq).expect("length checked");
        let path = dir.join(format!("model_{ego}.csv"));
        let mut buf = Vec::from("source,target,probability\n");
        model.dump_edges(&mut buf)?;
        fs::write(&path, buf).with_context(|| format!("cannot write {}", path.display()))?;
        written += 1;
    }
    Ok(written)
}
