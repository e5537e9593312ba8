//! Behavioural tests for the rolling train/evaluate protocol.

use seqent::ingest::{bin_events, BinnedEventStream, EventLog, InteractionEvent};
use seqent::markov::{rolling_evaluate, window_scores_by_index, MarkovError, RollingConfig};

const WEEK: u64 = 7 * 86_400;

fn event(time: u64, alter: &str) -> InteractionEvent {
    InteractionEvent {
        time,
        ego: "A".to_string(),
        alter: alter.to_string(),
        location: None,
    }
}

fn stream(events: Vec<InteractionEvent>) -> BinnedEventStream {
    bin_events(&EventLog::new(events, 300).unwrap())
}

fn config(ks: &[usize], bridge: bool) -> RollingConfig {
    RollingConfig {
        window_secs: WEEK,
        ks: ks.to_vec(),
        bridge,
    }
}

#[test]
fn periodic_sequence_is_fully_predictable() {
    // Alternating partners across three windows: the one-hot rows learned in
    // window 0 predict every later event.
    let mut events = Vec::new();
    for i in 0..3 * WEEK / 600 {
        events.push(event(i * 600, if i % 2 == 0 { "B" } else { "C" }));
    }
    let result = rolling_evaluate(&stream(events), "A", &config(&[1], true)).unwrap();
    assert!(result.evaluated > 0);
    assert_eq!(result.overall_for(1), Some(1.0));
}

#[test]
fn two_window_log_with_one_evaluated_event() {
    let events = vec![event(0, "B"), event(300, "C"), event(WEEK + 300, "B")];
    let result = rolling_evaluate(&stream(events), "A", &config(&[1, 5], true)).unwrap();
    assert_eq!(result.evaluated, 1);
    assert_eq!(result.windows.len(), 1);
    assert_eq!(result.windows[0].evaluated, 1);
}

#[test]
fn insufficient_span_is_an_error() {
    let events = vec![event(0, "B"), event(300, "C")];
    assert_eq!(
        rolling_evaluate(&stream(events), "A", &config(&[1], true)).unwrap_err(),
        MarkovError::InsufficientSpan {
            ego: "A".to_string(),
            windows: 1
        }
    );
}

#[test]
fn unknown_ego_is_an_error() {
    let events = vec![event(0, "B"), event(WEEK, "C")];
    assert_eq!(
        rolling_evaluate(&stream(events), "Z", &config(&[1], true)).unwrap_err(),
        MarkovError::UnknownEgo("Z".to_string())
    );
}

#[test]
fn no_information_flows_backward() {
    // Window 0 teaches B->C->B. Window 1 is all D, a partner the model has
    // never seen: every window-1 prediction must miss, even though D->D is
    // the dominant pattern inside window 1 itself. Once window 1 has been
    // folded in, window 2's D events are predicted correctly.
    let mut events = vec![
        event(0, "B"),
        event(600, "C"),
        event(1200, "B"),
        event(1800, "C"),
    ];
    for i in 0..4u64 {
        events.push(event(WEEK + i * 600, "D"));
    }
    events.push(event(2 * WEEK, "D"));
    events.push(event(2 * WEEK + 600, "D"));

    let result = rolling_evaluate(&stream(events), "A", &config(&[1], true)).unwrap();
    let by_window = window_scores_by_index(&result);
    assert_eq!(by_window[&1].evaluated, 4);
    assert_eq!(by_window[&1].hits, vec![0]);
    assert_eq!(by_window[&2].evaluated, 2);
    assert_eq!(by_window[&2].hits, vec![2]);
}

#[test]
fn bridging_counts_the_cross_window_transition() {
    // Window 0: B then C (one B->C transition). Window 1: a lone B, which
    // only enters the model through the bridge C->B. Window 2 scores C (from
    // state B, learned either way) and then B (from state C, learned only
    // when bridging).
    let events = |_: ()| {
        vec![
            event(0, "B"),
            event(600, "C"),
            event(WEEK, "B"),
            event(2 * WEEK, "C"),
            event(2 * WEEK + 600, "B"),
        ]
    };

    let bridged = rolling_evaluate(&stream(events(())), "A", &config(&[1], true)).unwrap();
    let unbridged = rolling_evaluate(&stream(events(())), "A", &config(&[1], false)).unwrap();

    let bridged_windows = window_scores_by_index(&bridged);
    let unbridged_windows = window_scores_by_index(&unbridged);
    assert_eq!(bridged_windows[&2].hits, vec![2]);
    assert_eq!(unbridged_windows[&2].hits, vec![1]);
}

#[test]
fn silent_windows_are_skipped_and_state_persists() {
    // Nothing happens in window 1; the model state entering window 2 is
    // still the last partner of window 0.
    let events = vec![
        event(0, "B"),
        event(600, "C"),
        event(1200, "B"),
        event(1800, "C"),
        event(2 * WEEK, "B"),
    ];
    let result = rolling_evaluate(&stream(events), "A", &config(&[1], true)).unwrap();
    let by_window = window_scores_by_index(&result);
    assert!(!by_window.contains_key(&1));
    // State entering window 2 is C, so the B event is predicted correctly.
    assert_eq!(by_window[&2].hits, vec![1]);
    assert_eq!(result.evaluated, 1);
}

#[test]
fn extreme_time_ranges_stay_sparse() {
    // Two events a few million windows apart: grouping must not allocate
    // per silent window.
    let events = vec![
        event(0, "B"),
        event(300, "C"),
        event(3_000_000 * WEEK, "C"),
        event(3_000_000 * WEEK + 300, "B"),
    ];
    let result = rolling_evaluate(&stream(events), "A", &config(&[1], true)).unwrap();
    assert_eq!(result.windows.len(), 1);
    assert_eq!(result.evaluated, 2);
}

#[test]
fn overall_accuracies_are_monotone_in_k() {
    let mut events = Vec::new();
    let partners = ["B", "C", "D", "B", "E", "C"];
    for w in 0..4u64 {
        for (i, p) in partners.iter().enumerate() {
            events.push(event(w * WEEK + i as u64 * 600, p));
        }
    }
    let result = rolling_evaluate(&stream(events), "A", &config(&[1, 5], true)).unwrap();
    let top1 = result.overall_for(1).unwrap();
    let top5 = result.overall_for(5).unwrap();
    assert!((0.0..=1.0).contains(&top1));
    assert!(top1 <= top5 && top5 <= 1.0);
}

#[test]
fn hits_sum_across_windows() {
    let mut events = Vec::new();
    for i in 0..3 * WEEK / 900 {
        let p = match i % 3 {
            0 => "B",
            1 => "C",
            _ => "D",
        };
        events.push(event(i * 900, p));
    }
    let result = rolling_evaluate(&stream(events), "A", &config(&[1, 5], true)).unwrap();
    for (i, _) in result.ks.iter().enumerate() {
        let summed: u64 = result.windows.iter().map(|w| w.hits[i]).sum();
        let expected = (result.overall[i] * result.evaluated as f64).round() as u64;
        assert_eq!(summed, expected);
    }
    let evaluated: u64 = result.windows.iter().map(|w| w.evaluated).sum();
    assert_eq!(evaluated, result.evaluated);
}
