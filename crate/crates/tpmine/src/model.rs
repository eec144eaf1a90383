//! Core domain model: tick-based time, intervals, events, sequences,
//! temporal patterns and the buffered relation classifier shared by the
//! whole engine.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point in time, as a tick count at the dataset's base resolution.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
pub struct TimePoint(pub i64);

/// A non-negative tick delta.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
pub struct Duration(pub i64);

impl Duration {
    pub fn new(ticks: i64) -> Result<Self> {
        if ticks < 0 {
            return Err(Error::Domain(format!("negative duration: {ticks}")));
        }
        Ok(Duration(ticks))
    }

    pub fn ticks(self) -> i64 {
        self.0
    }
}

impl TimePoint {
    pub fn ticks(self) -> i64 {
        self.0
    }
}

impl std::ops::Add<Duration> for TimePoint {
    type Output = TimePoint;
    fn add(self, rhs: Duration) -> TimePoint {
        TimePoint(self.0 + rhs.0)
    }
}

impl std::ops::Sub for TimePoint {
    type Output = i64;
    fn sub(self, rhs: TimePoint) -> i64 {
        self.0 - rhs.0
    }
}

/// A half-open time interval `[start, end)` with positive length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    start: TimePoint,
    end: TimePoint,
}

impl Interval {
    /// Zero-length (and reversed) intervals are rejected at construction.
    pub fn new(start: TimePoint, end: TimePoint) -> Result<Self> {
        if start >= end {
            return Err(Error::Domain(format!(
                "interval start {} must precede end {}",
                start.0, end.0
            )));
        }
        Ok(Interval { start, end })
    }

    pub fn start(&self) -> TimePoint {
        self.start
    }

    pub fn end(&self) -> TimePoint {
        self.end
    }

    pub fn length(&self) -> i64 {
        self.end.0 - self.start.0
    }

    /// Intersection clipped to `[lo, hi)`; `None` when empty.
    pub fn clip(&self, lo: TimePoint, hi: TimePoint) -> Option<Interval> {
        let s = self.start.max(lo);
        let e = self.end.min(hi);
        if s < e {
            Some(Interval { start: s, end: e })
        } else {
            None
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.start.0, self.end.0)
    }
}

/// Interned identifier for a (series, symbol) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EventId(pub u32);

/// Name registry mapping series/symbol strings to compact event ids.
///
/// Events are globally unique per (series, symbol) pair.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Vocab {
    series: Vec<String>,
    events: Vec<(u32, String)>,
    #[serde(skip)]
    series_lookup: std::collections::HashMap<String, u32>,
    #[serde(skip)]
    event_lookup: std::collections::HashMap<(u32, String), u32>,
}

impl Vocab {
    pub fn new() -> Self {
        Vocab::default()
    }

    pub fn intern_series(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.series_lookup.get(name) {
            return id;
        }
        let id = self.series.len() as u32;
        self.series.push(name.to_string());
        self.series_lookup.insert(name.to_string(), id);
        id
    }

    pub fn intern_event(&mut self, series: u32, symbol: &str) -> EventId {
        let key = (series, symbol.to_string());
        if let Some(&id) = self.event_lookup.get(&key) {
            return EventId(id);
        }
        let id = self.events.len() as u32;
        self.events.push((series, symbol.to_string()));
        self.event_lookup.insert(key, id);
        EventId(id)
    }

    pub fn lookup_event(&self, series: &str, symbol: &str) -> Option<EventId> {
        let sid = *self.series_lookup.get(series)?;
        self.event_lookup
            .get(&(sid, symbol.to_string()))
            .map(|&id| EventId(id))
    }

    pub fn series_of(&self, event: EventId) -> u32 {
        self.events[event.0 as usize].0
    }

    pub fn series_name(&self, series: u32) -> &str {
        &self.series[series as usize]
    }

    pub fn symbol_name(&self, event: EventId) -> &str {
        &self.events[event.0 as usize].1
    }

    pub fn event_name(&self, event: EventId) -> String {
        let (sid, sym) = &self.events[event.0 as usize];
        format!("{}:{}", self.series[*sid as usize], sym)
    }

    pub fn n_series(&self) -> usize {
        self.series.len()
    }

    pub fn n_events(&self) -> usize {
        self.events.len()
    }

    /// Rebuild the lookup maps after deserialization.
    pub fn rebuild_lookups(&mut self) {
        self.series_lookup = self
            .series
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        self.event_lookup = self
            .events
            .iter()
            .enumerate()
            .map(|(i, (s, sym))| ((*s, sym.clone()), i as u32))
            .collect();
    }
}

/// One occurrence of an event over an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventInstance {
    pub event: EventId,
    pub interval: Interval,
}

impl EventInstance {
    pub fn new(event: EventId, interval: Interval) -> Self {
        EventInstance { event, interval }
    }

    /// Ordering used inside sequences: (start, end, event id).
    pub fn sort_key(&self) -> (TimePoint, TimePoint, EventId) {
        (self.interval.start(), self.interval.end(), self.event)
    }
}

/// Instances of one window, chronologically ordered by (start, end, event id).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TemporalSequence {
    pub id: u32,
    pub instances: Vec<EventInstance>,
}

impl TemporalSequence {
    pub fn new(id: u32, mut instances: Vec<EventInstance>) -> Self {
        instances.sort_by_key(|e| e.sort_key());
        TemporalSequence { id, instances }
    }
}

/// The windowed view of a dataset: one `TemporalSequence` per window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceDatabase {
    pub sequences: Vec<TemporalSequence>,
    pub window: Duration,
    pub overlap: Duration,
    pub vocab: Arc<Vocab>,
}

impl SequenceDatabase {
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }
}

/// The three buffered interval relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    Follows,
    Contains,
    Overlaps,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationKind::Follows => write!(f, "Follows"),
            RelationKind::Contains => write!(f, "Contains"),
            RelationKind::Overlaps => write!(f, "Overlaps"),
        }
    }
}

/// A relation between two pattern slots, always expressed from the
/// chronologically earlier slot (`left < right`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationTriple {
    pub relation: RelationKind,
    pub left: usize,
    pub right: usize,
}

/// k chronologically ordered event slots plus all k(k-1)/2 pairwise
/// relations, stored flat in canonical order: for each right slot j,
/// triples (0,j), (1,j), ..., (j-1,j).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TemporalPattern {
    pub events: Vec<EventId>,
    pub relations: Vec<RelationKind>,
}

impl TemporalPattern {
    pub fn single(event: EventId) -> Self {
        TemporalPattern {
            events: vec![event],
            relations: vec![],
        }
    }

    pub fn pair(first: EventId, second: EventId, relation: RelationKind) -> Self {
        TemporalPattern {
            events: vec![first, second],
            relations: vec![relation],
        }
    }

    pub fn new(events: Vec<EventId>, relations: Vec<RelationKind>) -> Result<Self> {
        let k = events.len();
        if relations.len() != k * (k.saturating_sub(1)) / 2 {
            return Err(Error::Domain(format!(
                "pattern over {k} events needs {} relation triples, got {}",
                k * (k - 1) / 2,
                relations.len()
            )));
        }
        Ok(TemporalPattern { events, relations })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    fn triple_index(left: usize, right: usize) -> usize {
        debug_assert!(left < right);
        right * (right - 1) / 2 + left
    }

    pub fn relation_between(&self, left: usize, right: usize) -> RelationKind {
        self.relations[Self::triple_index(left, right)]
    }

    pub fn triples(&self) -> impl Iterator<Item = RelationTriple> + '_ {
        (1..self.events.len()).flat_map(move |right| {
            (0..right).map(move |left| RelationTriple {
                relation: self.relation_between(left, right),
                left,
                right,
            })
        })
    }

    /// Appends a new chronologically-last slot with its relations to every
    /// existing slot, given in ascending left-slot order.
    pub fn extend(&self, event: EventId, new_relations: &[RelationKind]) -> Self {
        debug_assert_eq!(new_relations.len(), self.events.len());
        let mut events = self.events.clone();
        events.push(event);
        let mut relations = self.relations.clone();
        relations.extend_from_slice(new_relations);
        TemporalPattern { events, relations }
    }

    /// Sorted event multiset, the group key this pattern belongs to.
    pub fn group_key(&self) -> Vec<EventId> {
        let mut g = self.events.clone();
        g.sort_unstable();
        g
    }

    pub fn display(&self, vocab: &Vocab) -> String {
        if self.events.len() == 1 {
            return vocab.event_name(self.events[0]);
        }
        self.triples()
            .map(|t| {
                format!(
                    "{}({},{})",
                    t.relation,
                    vocab.event_name(self.events[t.left]),
                    vocab.event_name(self.events[t.right])
                )
            })
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MiningMode {
    Frequent,
    Rare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PruningRegime {
    None,
    Apriori,
    Transitivity,
    All,
}

impl PruningRegime {
    pub fn apriori(self) -> bool {
        matches!(self, PruningRegime::Apriori | PruningRegime::All)
    }

    pub fn transitivity(self) -> bool {
        matches!(self, PruningRegime::Transitivity | PruningRegime::All)
    }
}

/// Thresholds and relation parameters for one mining run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MiningConfig {
    /// Minimum relative support in [0,1].
    pub sigma_min: f64,
    /// Maximum relative support; `None` means unbounded.
    pub sigma_max: Option<f64>,
    /// Minimum confidence in [0,1].
    pub delta: f64,
    /// Tolerance buffer for relation endpoints.
    pub epsilon: Duration,
    /// Minimal overlap duration for the Overlaps relation.
    pub d_o: Duration,
    /// Maximal duration of a pattern occurrence.
    pub t_max: Duration,
    pub mode: MiningMode,
    pub pruning: PruningRegime,
    pub max_pattern_len: usize,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            sigma_min: 0.5,
            sigma_max: None,
            delta: 0.5,
            epsilon: Duration(0),
            d_o: Duration(1),
            t_max: Duration(i64::MAX / 4),
            mode: MiningMode::Frequent,
            pruning: PruningRegime::All,
            max_pattern_len: 5,
        }
    }
}

/// Slack for float threshold comparisons on exact ratios of small integers.
pub(crate) const THRESHOLD_EPS: f64 = 1e-9;

impl MiningConfig {
    /// Validates ranges and normalizes sigma_max for frequent mode.
    /// Returns true when a configured sigma_max was dropped (frequent mode
    /// ignores it), so callers can warn.
    pub fn validate(&mut self) -> Result<bool> {
        if !(0.0..=1.0).contains(&self.sigma_min) {
            return Err(Error::Config(format!(
                "sigma_min {} outside [0,1]",
                self.sigma_min
            )));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::Config(format!("delta {} outside [0,1]", self.delta)));
        }
        if let Some(sm) = self.sigma_max {
            if !(0.0..=1.0).contains(&sm) {
                return Err(Error::Config(format!("sigma_max {sm} outside (0,1]")));
            }
            if self.sigma_min > sm {
                return Err(Error::Config(format!(
                    "sigma_min {} exceeds sigma_max {sm}",
                    self.sigma_min
                )));
            }
        }
        if self.epsilon.0 >= self.d_o.0 {
            return Err(Error::Config(format!(
                "epsilon {} must be strictly below d_o {}",
                self.epsilon.0, self.d_o.0
            )));
        }
        if self.max_pattern_len == 0 {
            return Err(Error::Config("max_pattern_len must be positive".into()));
        }
        let mut dropped = false;
        if self.mode == MiningMode::Frequent && self.sigma_max.is_some() {
            self.sigma_max = None;
            dropped = true;
        }
        if self.mode == MiningMode::Rare && self.sigma_max.is_none() {
            return Err(Error::Config("rare mode requires sigma_max".into()));
        }
        Ok(dropped)
    }

    /// Absolute count a support must reach: supp >= ceil(sigma_min * n).
    pub fn min_support_count(&self, n_sequences: usize) -> usize {
        let c = (self.sigma_min * n_sequences as f64 - THRESHOLD_EPS).ceil();
        (c.max(1.0)) as usize
    }

    /// Absolute count a support must not exceed in rare mode.
    pub fn max_support_count(&self, n_sequences: usize) -> Option<usize> {
        self.sigma_max
            .map(|sm| (sm * n_sequences as f64 + THRESHOLD_EPS).floor() as usize)
    }
}

/// Classifies the relation between two instances, the earlier one first.
///
/// Predicates are evaluated with fixed precedence Contains -> Overlaps ->
/// Follows, with one-sided epsilon tolerances:
///   Contains: t_si <= t_sj  and  t_ej <= t_ei + eps
///   Overlaps: t_si <  t_sj  and  t_ej >  t_ei + eps  and  t_ei - t_sj >= d_o - eps
///   Follows:  t_sj >= t_ei - eps
///
/// Requires start(e_i) <= start(e_j); returns None when no predicate holds
/// (total over valid inputs).
pub fn classify_relation(
    e_i: &EventInstance,
    e_j: &EventInstance,
    epsilon: Duration,
    d_o: Duration,
) -> Option<RelationKind> {
    classify_intervals(e_i.interval, e_j.interval, epsilon, d_o)
}

pub fn classify_intervals(
    a: Interval,
    b: Interval,
    epsilon: Duration,
    d_o: Duration,
) -> Option<RelationKind> {
    debug_assert!(epsilon.0 < d_o.0, "epsilon must stay below d_o");
    if a.start() > b.start() {
        return None;
    }
    let eps = epsilon.0;
    if b.end().0 <= a.end().0 + eps {
        return Some(RelationKind::Contains);
    }
    if a.start() < b.start() && b.end().0 > a.end().0 + eps && a.end() - b.start() >= d_o.0 - eps {
        return Some(RelationKind::Overlaps);
    }
    if b.start().0 >= a.end().0 - eps {
        return Some(RelationKind::Follows);
    }
    None
}

/// Checks whether `seq` supports `p` with one consistent witness
/// assignment: one distinct instance per slot, every triple holding via
/// `classify_relation`, and the span from the first slot's start to the
/// last slot's end within t_max. Returns the witness when supported.
pub fn sequence_supports(
    seq: &TemporalSequence,
    p: &TemporalPattern,
    cfg: &MiningConfig,
) -> Option<Vec<EventInstance>> {
    let k = p.events.len();
    if k < 2 {
        return None;
    }
    let mut witness: Vec<usize> = Vec::with_capacity(k);
    if assign_slot(seq, p, cfg, &mut witness) {
        Some(witness.iter().map(|&i| seq.instances[i]).collect())
    } else {
        None
    }
}

fn assign_slot(
    seq: &TemporalSequence,
    p: &TemporalPattern,
    cfg: &MiningConfig,
    witness: &mut Vec<usize>,
) -> bool {
    let slot = witness.len();
    if slot == p.events.len() {
        let first = seq.instances[witness[0]].interval.start();
        let last = seq.instances[*witness.last().unwrap()].interval.end();
        return last - first <= cfg.t_max.0;
    }
    'candidates: for (idx, inst) in seq.instances.iter().enumerate() {
        if inst.event != p.events[slot] || witness.contains(&idx) {
            continue;
        }
        for (prev_slot, &prev_idx) in witness.iter().enumerate() {
            let prev = &seq.instances[prev_idx];
            if classify_relation(prev, inst, cfg.epsilon, cfg.d_o)
                != Some(p.relation_between(prev_slot, slot))
            {
                continue 'candidates;
            }
        }
        witness.push(idx);
        if assign_slot(seq, p, cfg, witness) {
            return true;
        }
        witness.pop();
    }
    false
}

/// Replays a witness through the classifier; used by tests and audits.
pub fn witness_is_valid(
    witness: &[EventInstance],
    p: &TemporalPattern,
    cfg: &MiningConfig,
) -> bool {
    if witness.len() != p.events.len() || witness.len() < 2 {
        return false;
    }
    for (slot, w) in witness.iter().enumerate() {
        if w.event != p.events[slot] {
            return false;
        }
    }
    for t in p.triples() {
        if classify_relation(&witness[t.left], &witness[t.right], cfg.epsilon, cfg.d_o)
            != Some(t.relation)
        {
            return false;
        }
    }
    let span = witness.last().unwrap().interval.end() - witness[0].interval.start();
    span <= cfg.t_max.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(event: u32, s: i64, e: i64) -> EventInstance {
        EventInstance::new(EventId(event), Interval::new(TimePoint(s), TimePoint(e)).unwrap())
    }

    fn classify(a: (i64, i64), b: (i64, i64), eps: i64, d_o: i64) -> Option<RelationKind> {
        classify_intervals(
            Interval::new(TimePoint(a.0), TimePoint(a.1)).unwrap(),
            Interval::new(TimePoint(b.0), TimePoint(b.1)).unwrap(),
            Duration(eps),
            Duration(d_o),
        )
    }

    #[test]
    fn interval_rejects_zero_length() {
        assert!(Interval::new(TimePoint(5), TimePoint(5)).is_err());
        assert!(Interval::new(TimePoint(6), TimePoint(5)).is_err());
    }

    #[test]
    fn follows_on_disjoint_ordered_intervals() {
        assert_eq!(classify((0, 10), (20, 30), 0, 2), Some(RelationKind::Follows));
    }

    #[test]
    fn contains_fig1_co2_boiler() {
        // HighCO2 [6:00,10:00] vs BoilerOn [7:00,8:00], minutes since midnight.
        assert_eq!(
            classify((360, 600), (420, 480), 0, 2),
            Some(RelationKind::Contains)
        );
    }

    #[test]
    fn overlaps_with_sufficient_overlap() {
        assert_eq!(classify((0, 10), (5, 20), 0, 2), Some(RelationKind::Overlaps));
    }

    #[test]
    fn contains_equal_start_with_buffer() {
        // TOff [10:00,10:35] vs SOn [10:00,10:15] from the running example,
        // eps = 1 minute.
        assert_eq!(
            classify((600, 635), (600, 615), 1, 2),
            Some(RelationKind::Contains)
        );
        // Reversed roles yield nothing: the longer interval is not contained.
        assert_eq!(classify((600, 615), (600, 635), 1, 2), None);
    }

    #[test]
    fn short_overlap_below_d_o_yields_none() {
        // Overlap of 1 tick with d_o = 3, eps = 0: too short to overlap,
        // too entangled to follow.
        assert_eq!(classify((0, 10), (9, 20), 0, 3), None);
    }

    #[test]
    fn supports_fig1_three_event_pattern() {
        let seq = TemporalSequence::new(
            0,
            vec![inst(0, 360, 600), inst(1, 420, 480), inst(2, 780, 900)],
        );
        let p = TemporalPattern::new(
            vec![EventId(0), EventId(1), EventId(2)],
            vec![
                RelationKind::Contains, // (0,1)
                RelationKind::Follows,  // (0,2)
                RelationKind::Follows,  // (1,2)
            ],
        )
        .unwrap();
        let cfg = MiningConfig {
            t_max: Duration(600),
            ..MiningConfig::default()
        };
        let witness = sequence_supports(&seq, &p, &cfg).expect("pattern supported");
        assert!(witness_is_valid(&witness, &p, &cfg));
        // The same pattern fails once t_max is tightened below the span.
        let tight = MiningConfig {
            t_max: Duration(500),
            ..MiningConfig::default()
        };
        assert!(sequence_supports(&seq, &p, &tight).is_none());
    }

    #[test]
    fn supports_contains_with_equal_starts() {
        // Table 3 sequence 1 supports Contains(TOff, SOn) at eps = 1.
        let seq = TemporalSequence::new(0, vec![inst(0, 600, 615), inst(1, 600, 635)]);
        let p = TemporalPattern::pair(EventId(1), EventId(0), RelationKind::Contains);
        let cfg = MiningConfig {
            epsilon: Duration(1),
            d_o: Duration(2),
            t_max: Duration(40),
            ..MiningConfig::default()
        };
        let w = sequence_supports(&seq, &p, &cfg).expect("supported");
        assert_eq!(w[0].event, EventId(1));
        assert_eq!(w[1].event, EventId(0));
    }

    #[test]
    fn missing_event_is_unsupported() {
        let seq = TemporalSequence::new(0, vec![inst(0, 0, 5)]);
        let p = TemporalPattern::pair(EventId(0), EventId(9), RelationKind::Follows);
        assert!(sequence_supports(&seq, &p, &MiningConfig::default()).is_none());
    }

    #[test]
    fn same_instance_cannot_witness_two_slots() {
        let seq = TemporalSequence::new(0, vec![inst(0, 0, 5)]);
        let p = TemporalPattern::pair(EventId(0), EventId(0), RelationKind::Contains);
        assert!(sequence_supports(&seq, &p, &MiningConfig::default()).is_none());
    }

    #[test]
    fn config_rejects_epsilon_at_d_o() {
        let mut cfg = MiningConfig {
            epsilon: Duration(2),
            d_o: Duration(2),
            ..MiningConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn frequent_mode_drops_sigma_max() {
        let mut cfg = MiningConfig {
            sigma_max: Some(0.9),
            ..MiningConfig::default()
        };
        assert!(cfg.validate().unwrap());
        assert!(cfg.sigma_max.is_none());
    }

    #[test]
    fn support_count_ceiling_matches_running_example() {
        let cfg = MiningConfig {
            sigma_min: 0.7,
            ..MiningConfig::default()
        };
        // 0.7 of 4 sequences means at least 3.
        assert_eq!(cfg.min_support_count(4), 3);
        let cfg = MiningConfig {
            sigma_min: 0.1,
            ..MiningConfig::default()
        };
        assert_eq!(cfg.min_support_count(10), 1);
    }

    proptest! {
        // At most one relation for any ordered instance pair; with eps = 0
        // the raw predicates themselves are mutually exclusive.
        #[test]
        fn classifier_exclusive_and_deterministic(
            s1 in 0i64..60, l1 in 1i64..40, s2 in 0i64..60, l2 in 1i64..40,
            eps in 0i64..3, d_o_extra in 1i64..5,
        ) {
            let d_o = eps + d_o_extra;
            let (a, b) = if (s1, s1 + l1) <= (s2, s2 + l2) {
                ((s1, s1 + l1), (s2, s2 + l2))
            } else {
                ((s2, s2 + l2), (s1, s1 + l1))
            };
            let r1 = classify(a, b, eps, d_o);
            let r2 = classify(a, b, eps, d_o);
            prop_assert_eq!(r1, r2);

            if eps == 0 {
                let contains = a.0 <= b.0 && b.1 <= a.1;
                let overlaps = a.0 < b.0 && b.1 > a.1 && a.1 - b.0 >= d_o;
                let follows = b.0 >= a.1;
                let hits = [contains, overlaps, follows].iter().filter(|&&x| x).count();
                prop_assert!(hits <= 1);
                match r1 {
                    Some(RelationKind::Contains) => prop_assert!(contains),
                    Some(RelationKind::Overlaps) => prop_assert!(overlaps),
                    Some(RelationKind::Follows) => prop_assert!(follows),
                    None => prop_assert_eq!(hits, 0),
                }
            }
        }

        // Any witness returned by sequence_supports replays cleanly.
        #[test]
        fn witnesses_replay(
            starts in proptest::collection::vec((0i64..50, 1i64..20, 0u32..3), 2..8),
            eps in 0i64..2,
        ) {
            let instances: Vec<EventInstance> =
                starts.iter().map(|&(s, l, ev)| inst(ev, s, s + l)).collect();
            let seq = TemporalSequence::new(0, instances.clone());
            let cfg = MiningConfig {
                epsilon: Duration(eps),
                d_o: Duration(eps + 2),
                t_max: Duration(1000),
                ..MiningConfig::default()
            };
            // Probe a handful of 2-event patterns drawn from the instances.
            for a in 0..2u32.min(3) {
                for b in 0..3u32 {
                    for r in [RelationKind::Follows, RelationKind::Contains, RelationKind::Overlaps] {
                        let p = TemporalPattern::pair(EventId(a), EventId(b), r);
                        if let Some(w) = sequence_supports(&seq, &p, &cfg) {
                            prop_assert!(witness_is_valid(&w, &p, &cfg));
                        }
                    }
                }
            }
        }
    }
}
