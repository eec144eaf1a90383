//! A deliberately naive reference miner: exhaustive enumeration of every
//! event tuple and relation assignment, no indexes, no pruning. Ground
//! truth for the correctness suites; guarded against large inputs.

use std::collections::BTreeMap;

use crate::mine::PatternResult;
use crate::model::{
    sequence_supports, EventId, MiningConfig, SequenceDatabase, TemporalPattern, THRESHOLD_EPS,
};
use crate::{Error, Result};

const MAX_EVENTS: usize = 12;
const MAX_SEQUENCES: usize = 50;
const MAX_LEN: usize = 4;

/// Enumerates every pattern up to `cfg.max_pattern_len` and checks the
/// support/confidence constraints exactly as defined.
pub fn brute_force_mine(db: &SequenceDatabase, cfg: &MiningConfig) -> Result<Vec<PatternResult>> {
    let mut cfg = cfg.clone();
    cfg.validate()?;
    if db.is_empty() {
        return Ok(vec![]);
    }
    let mut events: Vec<EventId> = db
        .sequences
        .iter()
        .flat_map(|s| s.instances.iter().map(|i| i.event))
        .collect();
    events.sort_unstable();
    events.dedup();

    if events.len() > MAX_EVENTS {
        return Err(Error::Infeasible(format!(
            "{} distinct events exceed the oracle guard of {MAX_EVENTS}",
            events.len()
        )));
    }
    if db.len() > MAX_SEQUENCES {
        return Err(Error::Infeasible(format!(
            "{} sequences exceed the oracle guard of {MAX_SEQUENCES}",
            db.len()
        )));
    }
    if cfg.max_pattern_len > MAX_LEN {
        return Err(Error::Infeasible(format!(
            "pattern length {} exceeds the oracle guard of {MAX_LEN}",
            cfg.max_pattern_len
        )));
    }

    let min_count = cfg.min_support_count(db.len());
    let max_count = cfg.max_support_count(db.len());
    let event_supp: BTreeMap<EventId, usize> = events
        .iter()
        .map(|&e| {
            let c = db
                .sequences
                .iter()
                .filter(|s| s.instances.iter().any(|i| i.event == e))
                .count();
            (e, c)
        })
        .collect();

    let mut results: Vec<PatternResult> = Vec::new();
    for k in 2..=cfg.max_pattern_len {
        let n_rel = k * (k - 1) / 2;
        let n_vectors = 3usize.pow(n_rel as u32);
        let mut tuple = vec![0usize; k];
        loop {
            let tuple_events: Vec<EventId> = tuple.iter().map(|&i| events[i]).collect();
            for vector_id in 0..n_vectors {
                let relations = relation_vector(vector_id, n_rel);
                let pattern = TemporalPattern::new(tuple_events.clone(), relations)
                    .expect("consistent arity");
                let mut seqs = Vec::new();
                let mut witnesses = BTreeMap::new();
                for seq in &db.sequences {
                    if let Some(w) = sequence_supports(seq, &pattern, &cfg) {
                        seqs.push(seq.id);
                        witnesses.insert(seq.id, w);
                    }
                }
                let supp = seqs.len();
                if supp < min_count {
                    continue;
                }
                if let Some(m) = max_count {
                    if supp > m {
                        continue;
                    }
                }
                let denom = *tuple_events
                    .iter()
                    .map(|e| &event_supp[e])
                    .max()
                    .expect("non-empty tuple");
                if (supp as f64) < (cfg.delta - THRESHOLD_EPS) * denom as f64 {
                    continue;
                }
                results.push(PatternResult {
                    display: pattern.display(&db.vocab),
                    pattern,
                    support: supp,
                    rel_support: supp as f64 / db.len() as f64,
                    confidence: supp as f64 / denom as f64,
                    sequences: seqs,
                    witnesses,
                });
            }
            if !advance(&mut tuple, events.len()) {
                break;
            }
        }
    }
    results.sort_by(|a, b| a.pattern.cmp(&b.pattern));
    Ok(results)
}

fn relation_vector(mut id: usize, len: usize) -> Vec<crate::model::RelationKind> {
    use crate::model::RelationKind::*;
    (0..len)
        .map(|_| {
            let r = match id % 3 {
                0 => Follows,
                1 => Contains,
                _ => Overlaps,
            };
            id /= 3;
            r
        })
        .collect()
}

fn advance(tuple: &mut [usize], base: usize) -> bool {
    for slot in (0..tuple.len()).rev() {
        tuple[slot] += 1;
        if tuple[slot] < base {
            return true;
        }
        tuple[slot] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Duration, EventInstance, Interval, TemporalSequence, TimePoint, Vocab};
    use std::sync::Arc;

    fn inst(event: u32, s: i64, e: i64) -> EventInstance {
        EventInstance::new(
            EventId(event),
            Interval::new(TimePoint(s), TimePoint(e)).unwrap(),
        )
    }

    fn tiny_db() -> SequenceDatabase {
        let mut vocab = Vocab::new();
        let a = vocab.intern_series("A");
        vocab.intern_event(a, "x");
        vocab.intern_event(a, "y");
        SequenceDatabase {
            sequences: vec![
                TemporalSequence::new(0, vec![inst(0, 0, 3), inst(1, 5, 8)]),
                TemporalSequence::new(1, vec![inst(0, 0, 3), inst(1, 4, 9)]),
            ],
            window: Duration(10),
            overlap: Duration(0),
            vocab: Arc::new(vocab),
        }
    }

    #[test]
    fn empty_db_yields_empty_set() {
        let db = SequenceDatabase {
            sequences: vec![],
            window: Duration(1),
            overlap: Duration(0),
            vocab: Arc::new(Vocab::new()),
        };
        assert!(brute_force_mine(&db, &MiningConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn single_sequence_patterns_have_full_support() {
        let mut db = tiny_db();
        db.sequences.truncate(1);
        let cfg = MiningConfig {
            sigma_min: 1.0,
            delta: 0.0,
            t_max: Duration(20),
            max_pattern_len: 2,
            ..MiningConfig::default()
        };
        let out = brute_force_mine(&db, &cfg).unwrap();
        assert!(!out.is_empty());
        assert!(out.iter().all(|p| p.support == 1 && p.rel_support == 1.0));
    }

    #[test]
    fn invariant_under_sequence_reordering() {
        let db = tiny_db();
        let mut shuffled = db.clone();
        shuffled.sequences.reverse();
        let cfg = MiningConfig {
            sigma_min: 0.5,
            delta: 0.0,
            t_max: Duration(20),
            max_pattern_len: 2,
            ..MiningConfig::default()
        };
        let a: Vec<_> = brute_force_mine(&db, &cfg)
            .unwrap()
            .into_iter()
            .map(|p| (p.pattern, p.support))
            .collect();
        let b: Vec<_> = brute_force_mine(&shuffled, &cfg)
            .unwrap()
            .into_iter()
            .map(|p| (p.pattern, p.support))
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn guard_rejects_oversized_requests() {
        let db = tiny_db();
        let cfg = MiningConfig {
            max_pattern_len: 5,
            ..MiningConfig::default()
        };
        assert!(matches!(
            brute_force_mine(&db, &cfg),
            Err(Error::Infeasible(_))
        ));
    }
}
