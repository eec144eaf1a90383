//! Exact pattern mining over the hierarchical lookup tables — candidate
//! filtering (Apriori), relation-vector pruning (transitivity) and
//! full-witness verification — plus the approximate miner that screens
//! series pairs by normalized mutual information before mining.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{series_pair_mu, BoundProvenance};
use crate::index::{build_event_index, EventIndex, PatternIndex, SeqSet};
use crate::measures::{entropy, PairSummary};
use crate::model::{
    classify_relation, sequence_supports, EventId, EventInstance, MiningConfig, MiningMode,
    RelationKind, SequenceDatabase, TemporalPattern, THRESHOLD_EPS,
};
use crate::transform::SymbolicDatabase;
use crate::{Error, Result};

const RELATIONS: [RelationKind; 3] = [
    RelationKind::Follows,
    RelationKind::Contains,
    RelationKind::Overlaps,
];

/// Instrumentation counters; generated = surviving + pruned at each stage.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MineCounters {
    pub pair_candidates: u64,
    pub pair_pruned_support: u64,
    pub pair_pruned_confidence: u64,
    pub pair_surviving: u64,
    pub group_candidates: u64,
    pub group_pruned_support: u64,
    pub group_pruned_confidence: u64,
    pub group_surviving: u64,
    /// Full relation vectors that reached witness verification.
    pub vectors_enumerated: u64,
    /// Relation-vector prefixes cut by the transitivity lookup.
    pub vectors_pruned_transitivity: u64,
    /// Calls into the relation classifier.
    pub relation_checks: u64,
    /// Calls into sequence_supports.
    pub support_checks: u64,
}

impl MineCounters {
    pub fn candidates_total(&self) -> u64 {
        self.pair_candidates + self.group_candidates + self.vectors_enumerated
    }

    pub fn arithmetic_consistent(&self) -> bool {
        self.pair_candidates
            == self.pair_pruned_support + self.pair_pruned_confidence + self.pair_surviving
            && self.group_candidates
                == self.group_pruned_support + self.group_pruned_confidence + self.group_surviving
    }

    fn absorb(&mut self, other: &MineCounters) {
        self.pair_candidates += other.pair_candidates;
        self.pair_pruned_support += other.pair_pruned_support;
        self.pair_pruned_confidence += other.pair_pruned_confidence;
        self.pair_surviving += other.pair_surviving;
        self.group_candidates += other.group_candidates;
        self.group_pruned_support += other.group_pruned_support;
        self.group_pruned_confidence += other.group_pruned_confidence;
        self.group_surviving += other.group_surviving;
        self.vectors_enumerated += other.vectors_enumerated;
        self.vectors_pruned_transitivity += other.vectors_pruned_transitivity;
        self.relation_checks += other.relation_checks;
        self.support_checks += other.support_checks;
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EventResult {
    pub event: EventId,
    pub name: String,
    pub support: usize,
    pub rel_support: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternResult {
    pub pattern: TemporalPattern,
    pub display: String,
    pub support: usize,
    pub rel_support: f64,
    pub confidence: f64,
    pub sequences: Vec<u32>,
    pub witnesses: BTreeMap<u32, Vec<EventInstance>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelReport {
    pub k: usize,
    pub patterns: Vec<PatternResult>,
}

/// One screened series pair in the approximate miner's log.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairDecision {
    pub x: String,
    pub y: String,
    pub nmi_xy: f64,
    pub nmi_yx: f64,
    pub mu_min: f64,
    /// None encodes an unbounded mu_max.
    pub mu_max: Option<f64>,
    pub kept: bool,
    /// Thresholds fell back to "no pruning" for this pair.
    pub degenerate: bool,
    /// At least one side is a constant series (zero entropy, NMI forced 0).
    pub constant_series: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PruneLog {
    pub pairs: Vec<PairDecision>,
    pub total_pairs: usize,
    pub kept_pairs: usize,
    pub pruned_pair_pct: f64,
    pub pruned_series: Vec<String>,
    pub pruned_series_pct: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MiningReport {
    pub n_sequences: usize,
    pub singles: Vec<EventResult>,
    pub levels: Vec<LevelReport>,
    pub counters: MineCounters,
    pub prune_log: Option<PruneLog>,
    pub total_ms: u128,
    /// NMI screening time, approximate mode only.
    pub mi_ms: Option<u128>,
    /// Total patterns held across all sealed levels.
    pub stored_patterns: usize,
    /// Share of the exact output retained, when a comparison ran.
    pub accuracy_vs_exact: Option<f64>,
}

impl MiningReport {
    /// Patterns of length >= 2, the unit of output comparisons.
    pub fn pattern_set(&self) -> BTreeSet<TemporalPattern> {
        self.levels
            .iter()
            .flat_map(|l| l.patterns.iter().map(|p| p.pattern.clone()))
            .collect()
    }

    pub fn total_patterns(&self) -> usize {
        self.levels.iter().map(|l| l.patterns.len()).sum()
    }
}

/// Restriction the approximate miner imposes on the exact pipeline.
#[derive(Debug, Clone, Default)]
struct SeriesPairFilter {
    /// Surviving unordered series pairs (i <= j).
    kept_pairs: HashSet<(u32, u32)>,
    kept_series: HashSet<u32>,
}

impl SeriesPairFilter {
    fn allows_event(&self, db: &SequenceDatabase, e: EventId) -> bool {
        self.kept_series.contains(&db.vocab.series_of(e))
    }

    fn allows_pair(&self, db: &SequenceDatabase, a: EventId, b: EventId) -> bool {
        let (sa, sb) = (db.vocab.series_of(a), db.vocab.series_of(b));
        let key = (sa.min(sb), sa.max(sb));
        self.kept_pairs.contains(&key)
    }
}

/// Mines the database exactly under the configured pruning regime.
pub fn mine(db: &SequenceDatabase, cfg: &MiningConfig) -> Result<MiningReport> {
    let mut cfg = cfg.clone();
    cfg.validate()?;
    mine_filtered(db, &cfg, None)
}

fn mine_filtered(
    db: &SequenceDatabase,
    cfg: &MiningConfig,
    filter: Option<&SeriesPairFilter>,
) -> Result<MiningReport> {
    if db.is_empty() {
        return Err(Error::Domain("cannot mine an empty sequence database".into()));
    }
    let started = Instant::now();
    let min_count = cfg.min_support_count(db.len());
    let max_count = cfg.max_support_count(db.len());
    let mut counters = MineCounters::default();

    // Level 1: single events at or above sigma_min; sigma_max deliberately
    // not applied here.
    let mut index1 = build_event_index(db, min_count);
    if let Some(f) = filter {
        let drop: Vec<EventId> = index1
            .event_seqs
            .keys()
            .copied()
            .filter(|&e| !f.allows_event(db, e))
            .collect();
        for e in drop {
            index1.event_seqs.remove(&e);
            index1.event_sets.remove(&e);
        }
        index1.seq_instances.retain(|(e, _), _| index1.event_seqs.contains_key(e));
    }
    index1.audit()?;

    let singles: Vec<EventResult> = index1
        .events()
        .into_iter()
        .map(|e| EventResult {
            event: e,
            name: db.vocab.event_name(e),
            support: index1.support(e),
            rel_support: index1.support(e) as f64 / db.len() as f64,
        })
        .collect();

    let mut levels: Vec<PatternIndex> = Vec::new();
    if cfg.max_pattern_len >= 2 {
        let level2 = mine_level2(db, &index1, cfg, min_count, filter, &mut counters)?;
        level2.audit()?;
        if level2.n_patterns() > 0 {
            levels.push(level2);
            let mut k = 3;
            while k <= cfg.max_pattern_len {
                let prev = levels.last().unwrap();
                let level2_ref = &levels[0];
                let next = mine_level_k(db, &index1, level2_ref, prev, cfg, min_count, k, &mut counters)?;
                next.audit()?;
                if next.n_patterns() == 0 {
                    break;
                }
                levels.push(next);
                k += 1;
            }
        }
    }

    debug_assert!(counters.arithmetic_consistent());

    // Emission: rare mode applies sigma_max at the pattern level only.
    let stored_patterns = levels.iter().map(|l| l.n_patterns()).sum();
    let level_reports = levels
        .iter()
        .map(|level| assemble_level(level, &index1, db, max_count))
        .collect();

    Ok(MiningReport {
        n_sequences: db.len(),
        singles,
        levels: level_reports,
        counters,
        prune_log: None,
        total_ms: started.elapsed().as_millis(),
        mi_ms: None,
        stored_patterns,
        accuracy_vs_exact: None,
    })
}

fn assemble_level(
    level: &PatternIndex,
    index1: &EventIndex,
    db: &SequenceDatabase,
    max_count: Option<usize>,
) -> LevelReport {
    let mut patterns: Vec<PatternResult> = level
        .pattern_seqs
        .iter()
        .filter(|(_, seqs)| max_count.is_none_or(|m| seqs.len() <= m))
        .map(|(p, seqs)| {
            let denom = p.events.iter().map(|&e| index1.support(e)).max().unwrap_or(0);
            let witnesses = seqs
                .iter()
                .map(|&s| (s, level.witnesses[&(p.clone(), s)].clone()))
                .collect();
            PatternResult {
                display: p.display(&db.vocab),
                pattern: p.clone(),
                support: seqs.len(),
                rel_support: seqs.len() as f64 / db.len() as f64,
                confidence: seqs.len() as f64 / denom as f64,
                sequences: seqs.clone(),
                witnesses,
            }
        })
        .collect();
    patterns.sort_by(|a, b| a.pattern.cmp(&b.pattern));
    LevelReport {
        k: level.k,
        patterns,
    }
}

struct PairOutcome {
    first: EventId,
    second: EventId,
    counters: MineCounters,
    /// pattern -> (supporting seqs, one witness per seq).
    found: Vec<(TemporalPattern, Vec<u32>, Vec<(u32, Vec<EventInstance>)>)>,
    group_seqs: Vec<u32>,
}

fn mine_level2(
    db: &SequenceDatabase,
    index1: &EventIndex,
    cfg: &MiningConfig,
    min_count: usize,
    filter: Option<&SeriesPairFilter>,
    counters: &mut MineCounters,
) -> Result<PatternIndex> {
    let events = index1.events();
    let mut candidates: Vec<(EventId, EventId)> = Vec::new();
    for (i, &a) in events.iter().enumerate() {
        for &b in &events[i..] {
            if filter.map_or(true, |f| f.allows_pair(db, a, b)) {
                candidates.push((a, b));
            }
        }
    }

    let outcomes: Vec<PairOutcome> = candidates
        .par_iter()
        .map(|&(a, b)| mine_pair_candidate(db, index1, cfg, min_count, a, b))
        .collect();

    let mut level = PatternIndex::new(2);
    for outcome in &outcomes {
        counters.absorb(&outcome.counters);
        for (pattern, seqs, witnesses) in &outcome.found {
            level.insert_pattern(&outcome.group_seqs, pattern.clone(), seqs.clone(), witnesses.clone())?;
        }
    }
    Ok(level)
}

fn mine_pair_candidate(
    db: &SequenceDatabase,
    index1: &EventIndex,
    cfg: &MiningConfig,
    min_count: usize,
    first: EventId,
    second: EventId,
) -> PairOutcome {
    let mut counters = MineCounters {
        pair_candidates: 1,
        ..MineCounters::default()
    };
    let common = index1
        .intersect_sequences(&[first, second])
        .unwrap_or_default();

    if cfg.pruning.apriori() {
        if common.len() < min_count {
            counters.pair_pruned_support = 1;
            return PairOutcome {
                first,
                second,
                counters,
                found: vec![],
                group_seqs: common,
            };
        }
        let denom = index1.support(first).max(index1.support(second));
        if (common.len() as f64) < (cfg.delta - THRESHOLD_EPS) * denom as f64 {
            counters.pair_pruned_confidence = 1;
            return PairOutcome {
                first,
                second,
                counters,
                found: vec![],
                group_seqs: common,
            };
        }
    }
    counters.pair_surviving = 1;

    // pattern -> (seq list, witnesses); relations instantiated on
    // chronologically ordered instances, both orientations on ties.
    let mut acc: HashMap<TemporalPattern, (Vec<u32>, Vec<(u32, Vec<EventInstance>)>)> =
        HashMap::new();
    let mut record = |counters: &mut MineCounters,
                      acc: &mut HashMap<TemporalPattern, (Vec<u32>, Vec<(u32, Vec<EventInstance>)>)>,
                      seq_id: u32,
                      x: &EventInstance,
                      y: &EventInstance| {
        counters.relation_checks += 1;
        if let Some(r) = classify_relation(x, y, cfg.epsilon, cfg.d_o) {
            if y.interval.end() - x.interval.start() <= cfg.t_max.0 {
                let p = TemporalPattern::pair(x.event, y.event, r);
                let entry = acc.entry(p).or_default();
                if entry.0.last() != Some(&seq_id) {
                    entry.0.push(seq_id);
                    entry.1.push((seq_id, vec![*x, *y]));
                }
            }
        }
    };

    for &seq_id in &common {
        if first == second {
            let insts = &index1.seq_instances[&(first, seq_id)];
            for i in 0..insts.len() {
                for j in (i + 1)..insts.len() {
                    let (a, b) = (&insts[i], &insts[j]);
                    record(&mut counters, &mut acc, seq_id, a, b);
                    if b.interval.start() == a.interval.start() {
                        record(&mut counters, &mut acc, seq_id, b, a);
                    }
                }
            }
        } else {
            let insts_a = &index1.seq_instances[&(first, seq_id)];
            let insts_b = &index1.seq_instances[&(second, seq_id)];
            for a in insts_a {
                for b in insts_b {
                    if a.interval.start() <= b.interval.start() {
                        record(&mut counters, &mut acc, seq_id, a, b);
                    }
                    if b.interval.start() <= a.interval.start() {
                        record(&mut counters, &mut acc, seq_id, b, a);
                    }
                }
            }
        }
    }

    let denom = index1.support(first).max(index1.support(second));
    let mut found: Vec<(TemporalPattern, Vec<u32>, Vec<(u32, Vec<EventInstance>)>)> = acc
        .into_iter()
        .filter(|(_, (seqs, _))| {
            seqs.len() >= min_count
                && seqs.len() as f64 >= (cfg.delta - THRESHOLD_EPS) * denom as f64
        })
        .map(|(p, (seqs, w))| (p, seqs, w))
        .collect();
    found.sort_by(|a, b| a.0.cmp(&b.0));

    PairOutcome {
        first,
        second,
        counters,
        found,
        group_seqs: common,
    }
}

struct ExtensionUnit {
    parent: TemporalPattern,
    parent_seqs: Vec<u32>,
    event: EventId,
    group_seqs: Vec<u32>,
}

struct ExtensionOutcome {
    counters: MineCounters,
    found: Vec<(TemporalPattern, Vec<u32>, Vec<(u32, Vec<EventInstance>)>)>,
    group_seqs: Vec<u32>,
}

#[allow(clippy::too_many_arguments)]
fn mine_level_k(
    db: &SequenceDatabase,
    index1: &EventIndex,
    level2: &PatternIndex,
    prev: &PatternIndex,
    cfg: &MiningConfig,
    min_count: usize,
    k: usize,
    counters: &mut MineCounters,
) -> Result<PatternIndex> {
    // Transitivity filtering: extension events must already appear at the
    // previous level.
    let ext_events: Vec<EventId> = if cfg.pruning.transitivity() {
        let distinct: HashSet<EventId> = prev.distinct_events().into_iter().collect();
        index1
            .events()
            .into_iter()
            .filter(|e| distinct.contains(e))
            .collect()
    } else {
        index1.events()
    };

    let mut group_keys: Vec<&Vec<EventId>> = prev.groups.keys().collect();
    group_keys.sort();

    // Apriori filter memoized per distinct k-event multiset.
    let mut group_pass: HashMap<Vec<EventId>, (bool, Vec<u32>)> = HashMap::new();
    let mut units: Vec<ExtensionUnit> = Vec::new();
    for key in group_keys {
        let entry = &prev.groups[key];
        let parent_set = SeqSet::from_sorted(&entry.seqs, db.len());
        for &e in &ext_events {
            let mut merged = key.clone();
            let pos = merged.partition_point(|&x| x <= e);
            merged.insert(pos, e);
            let (pass, group_seqs) = match group_pass.get(&merged) {
                Some((p, s)) => (*p, s.clone()),
                None => {
                    counters.group_candidates += 1;
                    let seqs = match index1.event_seqs.get(&e) {
                        Some(list) => parent_set.intersect_sorted(list),
                        None => vec![],
                    };
                    let mut ok = true;
                    if cfg.pruning.apriori() {
                        if seqs.len() < min_count {
                            counters.group_pruned_support += 1;
                            ok = false;
                        } else {
                            let denom = merged.iter().map(|&ev| index1.support(ev)).max().unwrap();
                            if (seqs.len() as f64) < (cfg.delta - THRESHOLD_EPS) * denom as f64 {
                                counters.group_pruned_confidence += 1;
                                ok = false;
                            }
                        }
                    }
                    if ok {
                        counters.group_surviving += 1;
                    }
                    group_pass.insert(merged.clone(), (ok, seqs.clone()));
                    (ok, seqs)
                }
            };
            if !pass {
                continue;
            }
            for parent in &entry.patterns {
                units.push(ExtensionUnit {
                    parent: parent.clone(),
                    parent_seqs: prev.pattern_seqs[parent].clone(),
                    event: e,
                    group_seqs: group_seqs.clone(),
                });
            }
        }
    }

    let outcomes: Vec<ExtensionOutcome> = units
        .par_iter()
        .map(|unit| extend_pattern(db, index1, level2, cfg, min_count, unit))
        .collect();

    let mut level = PatternIndex::new(k);
    for outcome in &outcomes {
        counters.absorb(&outcome.counters);
        for (pattern, seqs, witnesses) in &outcome.found {
            level.insert_pattern(&outcome.group_seqs, pattern.clone(), seqs.clone(), witnesses.clone())?;
        }
    }
    Ok(level)
}

fn extend_pattern(
    db: &SequenceDatabase,
    index1: &EventIndex,
    level2: &PatternIndex,
    cfg: &MiningConfig,
    min_count: usize,
    unit: &ExtensionUnit,
) -> ExtensionOutcome {
    let mut counters = MineCounters::default();
    let parent_len = unit.parent.len();

    // Sequences able to support any extension: parent supporters that also
    // contain the new event.
    let candidates: Vec<u32> = match index1.event_seqs.get(&unit.event) {
        Some(list) => {
            let set = SeqSet::from_sorted(list, db.len());
            set.intersect_sorted(&unit.parent_seqs)
        }
        None => vec![],
    };

    let denom = unit
        .parent
        .events
        .iter()
        .chain(std::iter::once(&unit.event))
        .map(|&e| index1.support(e))
        .max()
        .unwrap_or(0);

    let mut found = Vec::new();
    // Iterative relation assignment, adjacent-last triple first, with
    // early exit via the level-2 table under the transitivity regime.
    let mut vector: Vec<RelationKind> = vec![RelationKind::Follows; parent_len];
    enumerate_vectors(
        &mut vector,
        parent_len,
        &mut |counters, vector| {
            counters.vectors_enumerated += 1;
            let pattern = unit.parent.extend(unit.event, vector);
            let mut seqs = Vec::new();
            let mut witnesses = Vec::new();
            let mut remaining = candidates.len();
            for &seq_id in &candidates {
                remaining -= 1;
                counters.support_checks += 1;
                let seq = &db.sequences[seq_id as usize];
                if let Some(w) = sequence_supports(seq, &pattern, cfg) {
                    seqs.push(seq_id);
                    witnesses.push((seq_id, w));
                } else if seqs.len() + remaining < min_count {
                    break;
                }
            }
            if seqs.len() >= min_count
                && seqs.len() as f64 >= (cfg.delta - THRESHOLD_EPS) * denom as f64
            {
                found.push((pattern, seqs, witnesses));
            }
        },
        &mut |counters, slot, relation| {
            if !cfg.pruning.transitivity() {
                return true;
            }
            let sub = TemporalPattern::pair(unit.parent.events[slot], unit.event, relation);
            if level2.contains(&sub) {
                true
            } else {
                counters.vectors_pruned_transitivity += 1;
                false
            }
        },
        &mut counters,
    );
    found.sort_by(|a, b| a.0.cmp(&b.0));

    ExtensionOutcome {
        counters,
        found,
        group_seqs: unit.group_seqs.clone(),
    }
}

/// Depth-first enumeration of relation vectors, assigning the triple for
/// the chronologically adjacent slot first and walking down to slot 0.
fn enumerate_vectors(
    vector: &mut Vec<RelationKind>,
    len: usize,
    emit: &mut impl FnMut(&mut MineCounters, &[RelationKind]),
    admit: &mut impl FnMut(&mut MineCounters, usize, RelationKind) -> bool,
    counters: &mut MineCounters,
) {
    fn rec(
        vector: &mut Vec<RelationKind>,
        pos: usize,
        emit: &mut impl FnMut(&mut MineCounters, &[RelationKind]),
        admit: &mut impl FnMut(&mut MineCounters, usize, RelationKind) -> bool,
        counters: &mut MineCounters,
    ) {
        let slot = pos - 1;
        for r in RELATIONS {
            if !admit(counters, slot, r) {
                continue;
            }
            vector[slot] = r;
            if slot == 0 {
                emit(counters, vector);
            } else {
                rec(vector, slot, emit, admit, counters);
            }
        }
    }
    if len == 0 {
        return;
    }
    rec(vector, len, emit, admit, counters);
}

/// Approximate mining: screen series pairs by NMI against the analytic
/// mu thresholds, then mine only surviving series (single events) and
/// surviving pairs (2-event patterns); longer patterns proceed exactly.
pub fn mine_approximate(
    syb: &SymbolicDatabase,
    db: &SequenceDatabase,
    cfg: &MiningConfig,
) -> Result<MiningReport> {
    let mut cfg = cfg.clone();
    cfg.validate()?;
    if syb.series.is_empty() {
        return Err(Error::Domain("empty symbolic database".into()));
    }

    let mi_started = Instant::now();
    let windows = window_index_ranges(syb, db);
    let n_series = syb.series.len();
    let pairs: Vec<(u32, u32)> = (0..n_series as u32)
        .flat_map(|i| (i..n_series as u32).map(move |j| (i, j)))
        .collect();

    let decisions: Vec<(u32, u32, PairDecision)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let x = &syb.series[i as usize];
            let y = &syb.series[j as usize];
            let summary = PairSummary::new(x, y, &windows).expect("aligned series");
            let nmi_xy = summary.nmi_xy();
            let nmi_yx = summary.nmi_yx();
            let thresholds = series_pair_mu(&cfg, &summary);
            let min_nmi = nmi_xy.min(nmi_yx);
            let mut kept = min_nmi >= thresholds.mu_min - THRESHOLD_EPS;
            if cfg.mode == MiningMode::Rare && kept {
                kept = min_nmi <= thresholds.mu_max + THRESHOLD_EPS;
            }
            let constant = entropy(&summary.joint.marginal_x()) == 0.0
                || entropy(&summary.joint.marginal_y()) == 0.0;
            let decision = PairDecision {
                x: x.id.clone(),
                y: y.id.clone(),
                nmi_xy,
                nmi_yx,
                mu_min: thresholds.mu_min,
                mu_max: thresholds.mu_max.is_finite().then_some(thresholds.mu_max),
                kept,
                degenerate: thresholds.min_source == BoundProvenance::Degenerate,
                constant_series: constant,
            };
            (i, j, decision)
        })
        .collect();
    let mi_ms = mi_started.elapsed().as_millis();

    let mut filter = SeriesPairFilter::default();
    for (i, j, d) in &decisions {
        if d.kept {
            filter.kept_pairs.insert((*i, *j));
            filter.kept_series.insert(*i);
            filter.kept_series.insert(*j);
        }
    }
    let kept_pairs = filter.kept_pairs.len();
    let pruned_series: Vec<String> = (0..n_series as u32)
        .filter(|s| !filter.kept_series.contains(s))
        .map(|s| syb.series[s as usize].id.clone())
        .collect();
    let log = PruneLog {
        total_pairs: decisions.len(),
        kept_pairs,
        pruned_pair_pct: 100.0 * (decisions.len() - kept_pairs) as f64 / decisions.len() as f64,
        pruned_series_pct: 100.0 * pruned_series.len() as f64 / n_series as f64,
        pruned_series,
        pairs: decisions.into_iter().map(|(_, _, d)| d).collect(),
    };

    let mut report = mine_filtered(db, &cfg, Some(&filter))?;
    report.prune_log = Some(log);
    report.mi_ms = Some(mi_ms);
    Ok(report)
}

/// Timestamp-index ranges of the sequence windows, for the symbolic-side
/// statistics.
fn window_index_ranges(syb: &SymbolicDatabase, db: &SequenceDatabase) -> Vec<std::ops::Range<usize>> {
    let stride = db.window.0 - db.overlap.0;
    let t0 = syb.data_start().0;
    let period = syb.period.0;
    let n = syb.n_timestamps() as i64;
    let mut out = Vec::with_capacity(db.len());
    for i in 0..db.len() as i64 {
        let ws = t0 + i * stride;
        let we = ws + db.window.0;
        let lo = ((ws - t0) + period - 1).div_euclid(period).clamp(0, n);
        let hi = ((we - t0) + period - 1).div_euclid(period).clamp(0, n);
        out.push(lo as usize..hi as usize);
    }
    out
}
