//! Hierarchical lookup tables indexing events, sequences, patterns and
//! witnesses for fast retrieval during mining.
//!
//! Level 1 maps each event to its (ascending) supporting sequence list and
//! per-sequence instances. Level k (k >= 2) keeps three mutually
//! consistent tables: event-group -> {sequences, patterns}, pattern ->
//! supporting sequences, and (pattern, sequence) -> one witness tuple.

use std::collections::HashMap;

use serde_json::json;

use crate::model::{EventId, EventInstance, SequenceDatabase, TemporalPattern, Vocab};
use crate::{Error, Result};

/// Compact sequence-id set for fast intersection counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqSet {
    words: Vec<u64>,
    len: usize,
}

impl SeqSet {
    pub fn from_sorted(ids: &[u32], universe: usize) -> Self {
        let mut words = vec![0u64; universe.div_ceil(64)];
        for &id in ids {
            words[id as usize / 64] |= 1 << (id % 64);
        }
        SeqSet {
            words,
            len: ids.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn intersection_count(&self, other: &SeqSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersect_sorted(&self, sorted: &[u32]) -> Vec<u32> {
        sorted
            .iter()
            .copied()
            .filter(|&id| self.words[id as usize / 64] & (1 << (id % 64)) != 0)
            .collect()
    }
}

/// Level-1 structure: single events, their sequences, their instances.
#[derive(Debug, Clone, Default)]
pub struct EventIndex {
    /// Event -> ascending supporting sequence ids.
    pub event_seqs: HashMap<EventId, Vec<u32>>,
    /// Same sets as bitsets, for cheap intersection counts.
    pub event_sets: HashMap<EventId, SeqSet>,
    /// (event, sequence) -> instances in sequence order.
    pub seq_instances: HashMap<(EventId, u32), Vec<EventInstance>>,
    pub n_sequences: usize,
}

/// Events with support at or above `min_count`; the maximum-support
/// constraint is deliberately not applied at this level.
pub fn build_event_index(db: &SequenceDatabase, min_count: usize) -> EventIndex {
    let mut seqs: HashMap<EventId, Vec<u32>> = HashMap::new();
    let mut instances: HashMap<(EventId, u32), Vec<EventInstance>> = HashMap::new();
    for seq in &db.sequences {
        for inst in &seq.instances {
            let entry = instances.entry((inst.event, seq.id)).or_default();
            entry.push(*inst);
            let list = seqs.entry(inst.event).or_default();
            if list.last() != Some(&seq.id) {
                list.push(seq.id);
            }
        }
    }
    let mut index = EventIndex {
        n_sequences: db.len(),
        ..EventIndex::default()
    };
    for (event, list) in seqs {
        if list.len() < min_count {
            continue;
        }
        index
            .event_sets
            .insert(event, SeqSet::from_sorted(&list, db.len()));
        index.event_seqs.insert(event, list);
    }
    index
        .seq_instances
        .extend(instances.into_iter().filter(|((e, _), _)| index.event_seqs.contains_key(e)));
    index
}

impl EventIndex {
    pub fn events(&self) -> Vec<EventId> {
        let mut evs: Vec<EventId> = self.event_seqs.keys().copied().collect();
        evs.sort_unstable();
        evs
    }

    pub fn support(&self, e: EventId) -> usize {
        self.event_seqs.get(&e).map_or(0, |l| l.len())
    }

    /// Sorted-list intersection over the index; `None` when any event is
    /// missing from the structure.
    pub fn intersect_sequences(&self, events: &[EventId]) -> Option<Vec<u32>> {
        let mut lists: Vec<&Vec<u32>> = Vec::with_capacity(events.len());
        for e in events {
            lists.push(self.event_seqs.get(e)?);
        }
        lists.sort_by_key(|l| l.len());
        let mut result: Vec<u32> = lists[0].clone();
        for l in &lists[1..] {
            let set = SeqSet::from_sorted(l, self.n_sequences);
            result.retain(|&id| set.words[id as usize / 64] & (1 << (id % 64)) != 0);
            if result.is_empty() {
                break;
            }
        }
        Some(result)
    }

    pub fn audit(&self) -> Result<()> {
        for (e, list) in &self.event_seqs {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Integrity(format!(
                    "sequence list for event {} not strictly ascending",
                    e.0
                )));
            }
            for &s in list {
                let insts = self.seq_instances.get(&(*e, s)).ok_or_else(|| {
                    Error::Integrity(format!("missing instances for event {} seq {s}", e.0))
                })?;
                if insts.is_empty() {
                    return Err(Error::Integrity(format!(
                        "empty instance list for event {} seq {s}",
                        e.0
                    )));
                }
            }
        }
        for (e, s) in self.seq_instances.keys() {
            let list = self
                .event_seqs
                .get(e)
                .ok_or_else(|| Error::Integrity(format!("instances for unindexed event {}", e.0)))?;
            if list.binary_search(s).is_err() {
                return Err(Error::Integrity(format!(
                    "instances stored for event {} seq {s} outside its sequence list",
                    e.0
                )));
            }
        }
        Ok(())
    }

    pub fn dump_json(&self, vocab: &Vocab) -> serde_json::Value {
        let mut events: Vec<_> = self
            .event_seqs
            .iter()
            .map(|(e, s)| (vocab.event_name(*e), s.clone()))
            .collect();
        events.sort();
        json!({
            "event_table": events.into_iter().map(|(name, seqs)| json!({
                "event": name,
                "sequences": seqs,
            })).collect::<Vec<_>>(),
        })
    }
}

/// One group row of a level-k table.
#[derive(Debug, Clone, Default)]
pub struct GroupEntry {
    /// Sequences where all events of the group occur, ascending.
    pub seqs: Vec<u32>,
    pub patterns: Vec<TemporalPattern>,
}

/// Level-k structure (k >= 2). Only patterns satisfying the minimum
/// support and confidence constraints are stored.
#[derive(Debug, Clone)]
pub struct PatternIndex {
    pub k: usize,
    /// Sorted event multiset -> group row.
    pub groups: HashMap<Vec<EventId>, GroupEntry>,
    /// Pattern -> ascending supporting sequence ids.
    pub pattern_seqs: HashMap<TemporalPattern, Vec<u32>>,
    /// One witness tuple per (pattern, sequence).
    pub witnesses: HashMap<(TemporalPattern, u32), Vec<EventInstance>>,
}

impl PatternIndex {
    pub fn new(k: usize) -> Self {
        PatternIndex {
            k,
            groups: HashMap::new(),
            pattern_seqs: HashMap::new(),
            witnesses: HashMap::new(),
        }
    }

    pub fn n_patterns(&self) -> usize {
        self.pattern_seqs.len()
    }

    pub fn contains(&self, p: &TemporalPattern) -> bool {
        self.pattern_seqs.contains_key(p)
    }

    pub fn support(&self, p: &TemporalPattern) -> Option<usize> {
        self.pattern_seqs.get(p).map(|s| s.len())
    }

    /// Inserts a pattern with its supporting sequences and one witness per
    /// sequence. Re-inserting the identical payload is a no-op; diverging
    /// payloads are an integrity error.
    pub fn insert_pattern(
        &mut self,
        group_seqs: &[u32],
        pattern: TemporalPattern,
        seqs: Vec<u32>,
        witnesses: Vec<(u32, Vec<EventInstance>)>,
    ) -> Result<()> {
        if pattern.len() != self.k {
            return Err(Error::Integrity(format!(
                "pattern of length {} inserted into level {}",
                pattern.len(),
                self.k
            )));
        }
        if let Some(existing) = self.pattern_seqs.get(&pattern) {
            if *existing == seqs {
                return Ok(());
            }
            return Err(Error::Integrity(
                "pattern re-inserted with a different payload".into(),
            ));
        }
        let group = pattern.group_key();
        let entry = self.groups.entry(group).or_insert_with(|| GroupEntry {
            seqs: group_seqs.to_vec(),
            patterns: Vec::new(),
        });
        entry.patterns.push(pattern.clone());
        for (seq, w) in witnesses {
            self.witnesses.insert((pattern.clone(), seq), w);
        }
        self.pattern_seqs.insert(pattern, seqs);
        Ok(())
    }

    /// Distinct events across all stored groups.
    pub fn distinct_events(&self) -> Vec<EventId> {
        let mut evs: Vec<EventId> = self.groups.keys().flatten().copied().collect();
        evs.sort_unstable();
        evs.dedup();
        evs
    }

    /// Checks the mutual-consistency invariants of the three tables.
    pub fn audit(&self) -> Result<()> {
        let mut from_groups = 0usize;
        for (key, entry) in &self.groups {
            let mut sorted = key.clone();
            sorted.sort_unstable();
            if sorted != *key {
                return Err(Error::Integrity("group key not sorted".into()));
            }
            if entry.patterns.is_empty() {
                return Err(Error::Integrity("group row without patterns".into()));
            }
            for p in &entry.patterns {
                from_groups += 1;
                if p.group_key() != *key {
                    return Err(Error::Integrity("pattern stored under foreign group".into()));
                }
                let seqs = self
                    .pattern_seqs
                    .get(p)
                    .ok_or_else(|| Error::Integrity("group pattern missing from pattern table".into()))?;
                if seqs.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Integrity("pattern sequence list not ascending".into()));
                }
                for s in seqs {
                    if !self.witnesses.contains_key(&(p.clone(), *s)) {
                        return Err(Error::Integrity(format!(
                            "missing witness for a stored pattern in sequence {s}"
                        )));
                    }
                }
            }
        }
        if from_groups != self.pattern_seqs.len() {
            return Err(Error::Integrity(format!(
                "pattern table holds {} patterns, group rows hold {from_groups}",
                self.pattern_seqs.len()
            )));
        }
        Ok(())
    }

    pub fn dump_json(&self, vocab: &Vocab) -> serde_json::Value {
        let mut groups: Vec<_> = self
            .groups
            .iter()
            .map(|(key, entry)| {
                let name: Vec<String> = key.iter().map(|&e| vocab.event_name(e)).collect();
                let patterns: Vec<_> = entry
                    .patterns
                    .iter()
                    .map(|p| {
                        json!({
                            "pattern": p.display(vocab),
                            "sequences": self.pattern_seqs[p],
                        })
                    })
                    .collect();
                json!({"group": name, "sequences": entry.seqs, "patterns": patterns})
            })
            .collect();
        groups.sort_by_key(|v| v["group"].to_string());
        json!({"k": self.k, "group_table": groups})
    }
}
