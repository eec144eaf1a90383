//! Data transformation: raw series -> symbolic series -> interval events
//! -> overlap-split sequence database.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::model::{
    Duration, EventInstance, Interval, SequenceDatabase, TemporalSequence, TimePoint, Vocab,
};
use crate::{Error, Result};

/// A raw numeric series on a strictly increasing, regularly spaced grid.
#[derive(Debug, Clone)]
pub struct RawSeries {
    pub id: String,
    pub timestamps: Vec<TimePoint>,
    pub values: Vec<f64>,
}

impl RawSeries {
    pub fn new(id: String, timestamps: Vec<TimePoint>, values: Vec<f64>) -> Result<Self> {
        if timestamps.is_empty() {
            return Err(Error::Domain(format!("series {id} is empty")));
        }
        if timestamps.len() != values.len() {
            return Err(Error::Domain(format!(
                "series {id}: {} timestamps vs {} values",
                timestamps.len(),
                values.len()
            )));
        }
        check_regular(&timestamps).map_err(|row| Error::Ingest {
            row,
            message: format!("series {id}: irregular or non-increasing timestamps"),
        })?;
        Ok(RawSeries {
            id,
            timestamps,
            values,
        })
    }
}

/// Returns Err(offending index) unless timestamps are strictly increasing
/// with one constant gap.
pub(crate) fn check_regular(ts: &[TimePoint]) -> std::result::Result<(), usize> {
    if ts.len() < 2 {
        return Ok(());
    }
    let step = ts[1] - ts[0];
    if step <= 0 {
        return Err(1);
    }
    for i in 1..ts.len() {
        if ts[i] - ts[i - 1] != step {
            return Err(i);
        }
    }
    Ok(())
}

/// How a raw series maps onto its symbol alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AlphabetSpec {
    /// n labels separated by n-1 ascending thresholds; value v gets label i
    /// where thresholds[i-1] <= v < thresholds[i] (open-ended outer bins).
    Explicit {
        labels: Vec<String>,
        thresholds: Vec<f64>,
    },
    /// Equal-frequency bins computed from the data, labeled q0..q{n-1}.
    Quantiles { count: usize },
}

impl AlphabetSpec {
    pub fn on_off(threshold: f64) -> Self {
        AlphabetSpec::Explicit {
            labels: vec!["Off".into(), "On".into()],
            thresholds: vec![threshold],
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            AlphabetSpec::Explicit { labels, thresholds } => {
                if labels.is_empty() {
                    return Err(Error::Config("alphabet must be non-empty".into()));
                }
                if thresholds.len() + 1 != labels.len() {
                    return Err(Error::Config(format!(
                        "{} labels need {} thresholds, got {}",
                        labels.len(),
                        labels.len() - 1,
                        thresholds.len()
                    )));
                }
                if thresholds.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Config("thresholds must be strictly ascending".into()));
                }
                let mut seen = labels.clone();
                seen.sort();
                seen.dedup();
                if seen.len() != labels.len() {
                    return Err(Error::Config("duplicate symbols in alphabet".into()));
                }
                Ok(())
            }
            AlphabetSpec::Quantiles { count } => {
                if *count == 0 {
                    return Err(Error::Config("quantile count must be positive".into()));
                }
                Ok(())
            }
        }
    }
}

/// One variable's time-aligned symbol sequence plus its alphabet.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolicSeries {
    pub id: String,
    pub alphabet: Vec<String>,
    /// Index into `alphabet` per timestamp.
    pub symbols: Vec<u16>,
}

impl SymbolicSeries {
    pub fn from_labels(id: &str, labels: &[&str]) -> Self {
        let mut alphabet: Vec<String> = Vec::new();
        let mut symbols = Vec::with_capacity(labels.len());
        for l in labels {
            let idx = match alphabet.iter().position(|a| a == l) {
                Some(i) => i,
                None => {
                    alphabet.push((*l).to_string());
                    alphabet.len() - 1
                }
            };
            symbols.push(idx as u16);
        }
        SymbolicSeries {
            id: id.to_string(),
            alphabet,
            symbols,
        }
    }
}

/// Aligned symbolic series sharing one timestamp grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolicDatabase {
    pub timestamps: Vec<TimePoint>,
    pub period: Duration,
    pub series: Vec<SymbolicSeries>,
}

impl SymbolicDatabase {
    pub fn new(
        timestamps: Vec<TimePoint>,
        period: Duration,
        series: Vec<SymbolicSeries>,
    ) -> Result<Self> {
        for s in &series {
            if s.symbols.len() != timestamps.len() {
                return Err(Error::Domain(format!(
                    "series {} has {} samples, grid has {}",
                    s.id,
                    s.symbols.len(),
                    timestamps.len()
                )));
            }
            if let Some(&bad) = s.symbols.iter().find(|&&i| i as usize >= s.alphabet.len()) {
                return Err(Error::Domain(format!(
                    "series {}: symbol index {bad} outside alphabet",
                    s.id
                )));
            }
        }
        Ok(SymbolicDatabase {
            timestamps,
            period,
            series,
        })
    }

    pub fn n_timestamps(&self) -> usize {
        self.timestamps.len()
    }

    /// End of the covered axis: last sample + one period.
    pub fn data_end(&self) -> TimePoint {
        *self.timestamps.last().expect("non-empty grid") + self.period
    }

    pub fn data_start(&self) -> TimePoint {
        self.timestamps[0]
    }
}

/// Element-wise mapping of a raw series onto its alphabet.
pub fn symbolize(raw: &RawSeries, spec: &AlphabetSpec) -> Result<SymbolicSeries> {
    spec.validate()?;
    match spec {
        AlphabetSpec::Explicit { labels, thresholds } => {
            let symbols = raw
                .values
                .iter()
                .map(|&v| {
                    let bin = thresholds.iter().take_while(|&&t| v >= t).count();
                    bin as u16
                })
                .collect();
            Ok(SymbolicSeries {
                id: raw.id.clone(),
                alphabet: labels.clone(),
                symbols,
            })
        }
        AlphabetSpec::Quantiles { count } => {
            let n = *count;
            let mut sorted = raw.values.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).expect("NaN in series"));
            // Bin edges at the i/n quantiles; ties collapse bins naturally.
            let edges: Vec<f64> = (1..n)
                .map(|i| sorted[(i * sorted.len()) / n])
                .collect();
            let symbols = raw
                .values
                .iter()
                .map(|&v| edges.iter().take_while(|&&t| v >= t).count() as u16)
                .collect();
            Ok(SymbolicSeries {
                id: raw.id.clone(),
                alphabet: (0..n).map(|i| format!("q{i}")).collect(),
                symbols,
            })
        }
    }
}

/// A symbol together with every interval during which it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalEvent {
    pub symbol: u16,
    pub intervals: Vec<Interval>,
}

/// Merges maximal runs of identical symbols into intervals.
///
/// A run over samples [t_i .. t_j] occupies [t_i, t_j + period), so the
/// extracted instances tile the covered axis and every sample is covered by
/// exactly one instance of its own symbol.
pub fn extract_events(xs: &SymbolicSeries, grid: &[TimePoint], period: Duration) -> Vec<TemporalEvent> {
    assert_eq!(xs.symbols.len(), grid.len(), "series must match the grid");
    let mut events: Vec<TemporalEvent> = (0..xs.alphabet.len())
        .map(|i| TemporalEvent {
            symbol: i as u16,
            intervals: Vec::new(),
        })
        .collect();
    if grid.is_empty() {
        return events;
    }
    let mut run_start = 0usize;
    for i in 1..=xs.symbols.len() {
        if i == xs.symbols.len() || xs.symbols[i] != xs.symbols[run_start] {
            let sym = xs.symbols[run_start] as usize;
            let interval = Interval::new(grid[run_start], grid[i - 1] + period)
                .expect("positive period yields positive runs");
            events[sym].intervals.push(interval);
            run_start = i;
        }
    }
    events
}

/// Splits a symbolic database into an overlap-split sequence database.
///
/// Consecutive windows of length `window` advance by `window - t_ov`; each
/// window yields one sequence holding every instance intersecting it,
/// clipped to the window bounds (clips of zero length are dropped).
pub fn build_sequence_db(
    db: &SymbolicDatabase,
    window: Duration,
    t_ov: Duration,
    t_max: Duration,
) -> Result<SequenceDatabase> {
    if window.0 < db.period.0 {
        return Err(Error::Config(format!(
            "window {} is smaller than one sample period {}",
            window.0, db.period.0
        )));
    }
    if t_ov.0 > t_max.0 || t_max.0 > window.0 {
        return Err(Error::Config(format!(
            "need 0 <= t_ov ({}) <= t_max ({}) <= window ({})",
            t_ov.0, t_max.0, window.0
        )));
    }
    if t_ov.0 >= window.0 {
        return Err(Error::Config(format!(
            "overlap {} must be strictly below the window length {}",
            t_ov.0, window.0
        )));
    }
    let stride = window.0 - t_ov.0;
    let start = db.data_start();
    let end = db.data_end();

    let mut vocab = Vocab::new();
    // (event id, whole-axis interval) for every extracted instance.
    let mut all_instances: Vec<EventInstance> = Vec::new();
    for s in &db.series {
        let sid = vocab.intern_series(&s.id);
        for ev in extract_events(s, &db.timestamps, db.period) {
            let event = vocab.intern_event(sid, &s.alphabet[ev.symbol as usize]);
            for iv in ev.intervals {
                all_instances.push(EventInstance::new(event, iv));
            }
        }
    }

    let mut sequences = Vec::new();
    let mut w_start = start;
    let mut seq_id = 0u32;
    while w_start < end {
        let w_end = w_start + window;
        let mut members: Vec<EventInstance> = Vec::new();
        for inst in &all_instances {
            if let Some(clipped) = inst.interval.clip(w_start, w_end) {
                members.push(EventInstance::new(inst.event, clipped));
            }
        }
        sequences.push(TemporalSequence::new(seq_id, members));
        seq_id += 1;
        w_start = w_start + Duration(stride);
    }

    Ok(SequenceDatabase {
        sequences,
        window,
        overlap: t_ov,
        vocab: Arc::new(vocab),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(t: i64) -> TimePoint {
        TimePoint(t)
    }

    #[test]
    fn symbolize_on_off_example() {
        let raw = RawSeries::new(
            "X".into(),
            vec![tp(0), tp(1), tp(2), tp(3)],
            vec![1.61, 1.21, 0.41, 0.0],
        )
        .unwrap();
        let sym = symbolize(&raw, &AlphabetSpec::on_off(0.5)).unwrap();
        let labels: Vec<&str> = sym
            .symbols
            .iter()
            .map(|&i| sym.alphabet[i as usize].as_str())
            .collect();
        assert_eq!(labels, ["On", "On", "Off", "Off"]);
    }

    #[test]
    fn symbolize_constant_series() {
        let raw = RawSeries::new("X".into(), vec![tp(0), tp(1), tp(2)], vec![7.0; 3]).unwrap();
        let sym = symbolize(&raw, &AlphabetSpec::on_off(0.5)).unwrap();
        assert!(sym.symbols.iter().all(|&s| s == sym.symbols[0]));
    }

    #[test]
    fn symbolize_quantiles_balances_bins() {
        let raw = RawSeries::new(
            "X".into(),
            (0..300).map(tp).collect(),
            (0..300).map(|i| i as f64).collect(),
        )
        .unwrap();
        let sym = symbolize(&raw, &AlphabetSpec::Quantiles { count: 3 }).unwrap();
        let mut counts = [0usize; 3];
        for &s in &sym.symbols {
            counts[s as usize] += 1;
        }
        for c in counts {
            assert!((90..=110).contains(&c), "unbalanced bin: {counts:?}");
        }
    }

    #[test]
    fn irregular_timestamps_rejected_with_row() {
        let err = RawSeries::new(
            "X".into(),
            vec![tp(0), tp(5), tp(11)],
            vec![0.0, 1.0, 2.0],
        )
        .unwrap_err();
        match err {
            Error::Ingest { row, .. } => assert_eq!(row, 2),
            other => panic!("expected ingest error, got {other}"),
        }
    }

    #[test]
    fn extract_events_tiles_runs() {
        // Runs of 3 samples at a 5-tick period, mirroring the stove row of
        // the bundled example: On 600..610, Off 615..630, On 635.
        let s = SymbolicSeries::from_labels(
            "S",
            &["On", "On", "On", "Off", "Off", "Off", "Off", "On"],
        );
        let grid: Vec<TimePoint> = (0..8).map(|i| tp(600 + 5 * i)).collect();
        let events = extract_events(&s, &grid, Duration(5));
        let on = &events[0];
        assert_eq!(
            on.intervals,
            vec![
                Interval::new(tp(600), tp(615)).unwrap(),
                Interval::new(tp(635), tp(640)).unwrap(),
            ]
        );
        let off = &events[1];
        assert_eq!(off.intervals, vec![Interval::new(tp(615), tp(635)).unwrap()]);
    }

    #[test]
    fn extract_events_single_run_and_alternating() {
        let grid: Vec<TimePoint> = (0..6).map(|i| tp(i * 2)).collect();
        let constant = SymbolicSeries::from_labels("C", &["a"; 6]);
        let evs = extract_events(&constant, &grid, Duration(2));
        assert_eq!(evs[0].intervals, vec![Interval::new(tp(0), tp(12)).unwrap()]);

        let alt = SymbolicSeries::from_labels("A", &["a", "b", "a", "b", "a", "b"]);
        let evs = extract_events(&alt, &grid, Duration(2));
        assert_eq!(evs[0].intervals.len(), 3);
        assert_eq!(evs[1].intervals.len(), 3);
        for iv in evs.iter().flat_map(|e| &e.intervals) {
            assert_eq!(iv.length(), 2);
        }
    }

    /// Concatenating a series' extracted instances reproduces the symbol at
    /// every timestamp.
    #[test]
    fn round_trip_coverage() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let n = 1 + (next() % 40) as usize;
            let labels: Vec<String> = (0..n).map(|_| format!("s{}", next() % 4)).collect();
            let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
            let series = SymbolicSeries::from_labels("X", &refs);
            let grid: Vec<TimePoint> = (0..n as i64).map(|i| tp(i * 3)).collect();
            let events = extract_events(&series, &grid, Duration(3));
            for (i, &t) in grid.iter().enumerate() {
                let covering: Vec<u16> = events
                    .iter()
                    .filter(|e| {
                        e.intervals
                            .iter()
                            .any(|iv| iv.start() <= t && t < iv.end())
                    })
                    .map(|e| e.symbol)
                    .collect();
                assert_eq!(covering, vec![series.symbols[i]]);
            }
        }
    }

    fn two_series_db(n: usize) -> SymbolicDatabase {
        let labels_a: Vec<&str> = (0..n).map(|i| if i % 3 == 0 { "x" } else { "y" }).collect();
        let labels_b: Vec<&str> = (0..n).map(|i| if i % 2 == 0 { "u" } else { "v" }).collect();
        SymbolicDatabase::new(
            (0..n as i64).map(tp).collect(),
            Duration(1),
            vec![
                SymbolicSeries::from_labels("A", &labels_a),
                SymbolicSeries::from_labels("B", &labels_b),
            ],
        )
        .unwrap()
    }

    #[test]
    fn split_produces_expected_window_count() {
        let db = two_series_db(36);
        let seq = build_sequence_db(&db, Duration(9), Duration(0), Duration(9)).unwrap();
        assert_eq!(seq.len(), 4);
        // Every instance is clipped within its window.
        for s in &seq.sequences {
            for inst in &s.instances {
                assert!(inst.interval.length() <= 9);
            }
        }
    }

    #[test]
    fn boundary_pattern_lost_without_overlap_found_with() {
        // Two events straddling the boundary at t = 10 (window 10).
        let a: Vec<&str> = (0..20).map(|i| if (8..10).contains(&i) { "p" } else { "z" }).collect();
        let b: Vec<&str> = (0..20).map(|i| if (10..12).contains(&i) { "q" } else { "z" }).collect();
        let db = SymbolicDatabase::new(
            (0..20).map(tp).collect(),
            Duration(1),
            vec![
                SymbolicSeries::from_labels("A", &a),
                SymbolicSeries::from_labels("B", &b),
            ],
        )
        .unwrap();

        let find_both = |seqdb: &SequenceDatabase| {
            let pa = seqdb.vocab.lookup_event("A", "p").unwrap();
            let qb = seqdb.vocab.lookup_event("B", "q").unwrap();
            seqdb.sequences.iter().any(|s| {
                let full = |ev, len| {
                    s.instances
                        .iter()
                        .any(|i| i.event == ev && i.interval.length() == len)
                };
                full(pa, 2) && full(qb, 2)
            })
        };

        let no_ov = build_sequence_db(&db, Duration(10), Duration(0), Duration(6)).unwrap();
        assert!(!find_both(&no_ov), "pattern should be split at the boundary");

        let ov = build_sequence_db(&db, Duration(10), Duration(6), Duration(6)).unwrap();
        assert!(find_both(&ov), "full overlap must keep the events together");
    }

    /// Nested strides (each dividing the previous) make the window-start
    /// grids supersets, so total clipped-instance count cannot drop.
    #[test]
    fn redundancy_nondecreasing_on_nested_strides() {
        let db = two_series_db(64);
        let window = 8i64;
        let mut last = 0usize;
        for stride in [8i64, 4, 2, 1] {
            let t_ov = Duration(window - stride);
            let seq = build_sequence_db(&db, Duration(window), t_ov, Duration(window - 1).max(t_ov)).unwrap();
            let total: usize = seq.sequences.iter().map(|s| s.instances.len()).sum();
            assert!(
                total >= last,
                "redundancy dropped from {last} to {total} at stride {stride}"
            );
            last = total;
        }
    }

    #[test]
    fn window_below_period_rejected() {
        let db = two_series_db(10);
        assert!(build_sequence_db(&db, Duration(0), Duration(0), Duration(0)).is_err());
    }
}
