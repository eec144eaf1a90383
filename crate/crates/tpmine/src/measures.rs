//! Support and confidence measures over the sequence database, plus the
//! information-theoretic quantities (entropy, MI, NMI) and per-series-pair
//! statistics feeding the analytic bounds.
//!
//! Entropies and mutual information are in bits (base-2 logs); 0*log 0 = 0
//! throughout. Probabilities over the symbolic database are per-timestamp
//! relative frequencies; supports over the sequence database are
//! per-sequence counts — the two bases the support-connection identity
//! relates.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::model::{sequence_supports, EventId, MiningConfig, TemporalPattern};
use crate::transform::SymbolicSeries;
use crate::{Error, Result, SequenceDatabase};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportStats {
    pub count: usize,
    pub relative: f64,
}

impl SupportStats {
    fn of(count: usize, total: usize) -> Self {
        SupportStats {
            count,
            relative: if total == 0 {
                0.0
            } else {
                count as f64 / total as f64
            },
        }
    }
}

fn known_event(db: &SequenceDatabase, e: EventId) -> Result<()> {
    if (e.0 as usize) < db.vocab.n_events() {
        Ok(())
    } else {
        Err(Error::Domain(format!("unknown event id {}", e.0)))
    }
}

/// Number of sequences containing at least one instance of `e`.
pub fn supp_event(db: &SequenceDatabase, e: EventId) -> Result<SupportStats> {
    known_event(db, e)?;
    let count = db
        .sequences
        .iter()
        .filter(|s| s.instances.iter().any(|i| i.event == e))
        .count();
    Ok(SupportStats::of(count, db.len()))
}

/// Number of sequences containing at least one instance of every event.
pub fn supp_group(db: &SequenceDatabase, events: &[EventId]) -> Result<SupportStats> {
    if events.is_empty() {
        return Err(Error::Domain("empty event group".into()));
    }
    for &e in events {
        known_event(db, e)?;
    }
    let count = db
        .sequences
        .iter()
        .filter(|s| {
            events
                .iter()
                .all(|&e| s.instances.iter().any(|i| i.event == e))
        })
        .count();
    Ok(SupportStats::of(count, db.len()))
}

/// Number of sequences supporting the pattern (consistent witnesses).
pub fn supp_pattern(
    db: &SequenceDatabase,
    p: &TemporalPattern,
    cfg: &MiningConfig,
) -> Result<SupportStats> {
    if p.len() < 2 {
        return Err(Error::Domain("pattern needs at least two events".into()));
    }
    for &e in &p.events {
        known_event(db, e)?;
    }
    let count = db
        .sequences
        .iter()
        .filter(|s| sequence_supports(s, p, cfg).is_some())
        .count();
    Ok(SupportStats::of(count, db.len()))
}

/// supp(E_i, E_j) / max(supp(E_i), supp(E_j)).
pub fn conf_pair(db: &SequenceDatabase, e_i: EventId, e_j: EventId) -> Result<f64> {
    let si = supp_event(db, e_i)?.count;
    let sj = supp_event(db, e_j)?.count;
    let denom = si.max(sj);
    if denom == 0 {
        return Err(Error::Domain("both events absent from the database".into()));
    }
    let joint = supp_group(db, &[e_i, e_j])?.count;
    Ok(joint as f64 / denom as f64)
}

/// All-confidence: supp(P) divided by its most frequent event's support.
pub fn conf_pattern(db: &SequenceDatabase, p: &TemporalPattern, cfg: &MiningConfig) -> Result<f64> {
    if p.len() == 1 {
        // Single events always have confidence 1.
        return Ok(1.0);
    }
    let mut denom = 0usize;
    for &e in &p.events {
        denom = denom.max(supp_event(db, e)?.count);
    }
    if denom == 0 {
        return Err(Error::Domain("pattern events absent from the database".into()));
    }
    let supp = supp_pattern(db, p, cfg)?.count;
    Ok(supp as f64 / denom as f64)
}

fn xlog2x(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// Shannon entropy in bits of a normalized distribution.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().map(|&x| xlog2x(x)).sum::<f64>()
}

/// Which marginal normalizes the mutual information.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NmiDirection {
    /// I(X;Y) / H(X): uncertainty reduction of X given Y.
    XGivenY,
    /// I(X;Y) / H(Y).
    YGivenX,
}

/// Dense joint distribution over two alphabets; X indexes rows.
#[derive(Debug, Clone)]
pub struct Joint {
    pub nx: usize,
    pub ny: usize,
    /// Row-major probabilities, length nx * ny.
    pub p: Vec<f64>,
}

impl Joint {
    pub fn new(nx: usize, ny: usize, p: Vec<f64>) -> Result<Self> {
        if p.len() != nx * ny {
            return Err(Error::Domain("joint table size mismatch".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "joint probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Joint { nx, ny, p })
    }

    pub fn from_counts(nx: usize, ny: usize, counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::Domain("empty joint counts".into()));
        }
        Joint::new(
            nx,
            ny,
            counts.iter().map(|&c| c as f64 / total as f64).collect(),
        )
    }

    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.p[x * self.ny + y]
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        (0..self.nx)
            .map(|x| (0..self.ny).map(|y| self.at(x, y)).sum())
            .collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        (0..self.ny)
            .map(|y| (0..self.nx).map(|x| self.at(x, y)).sum())
            .collect()
    }

    /// H(X|Y) = -sum p(x,y) log2 p(x,y)/p(y).
    pub fn conditional_entropy_x_given_y(&self) -> f64 {
        let py = self.marginal_y();
        let mut h = 0.0;
        for x in 0..self.nx {
            for y in 0..self.ny {
                let pxy = self.at(x, y);
                if pxy > 0.0 && py[y] > 0.0 {
                    h -= pxy * (pxy / py[y]).log2();
                }
            }
        }
        h
    }

    /// I(X;Y) = sum p(x,y) log2 p(x,y)/(p(x) p(y)).
    pub fn mi(&self) -> f64 {
        let px = self.marginal_x();
        let py = self.marginal_y();
        let mut i = 0.0;
        for x in 0..self.nx {
            for y in 0..self.ny {
                let pxy = self.at(x, y);
                if pxy > 0.0 {
                    i += pxy * (pxy / (px[x] * py[y])).log2();
                }
            }
        }
        i
    }

    /// NMI = I/H(X) = 1 - H(X|Y)/H(X); defined as 0 for constant X.
    /// Asymmetric by construction.
    pub fn nmi(&self, direction: NmiDirection) -> f64 {
        let h = match direction {
            NmiDirection::XGivenY => entropy(&self.marginal_x()),
            NmiDirection::YGivenX => entropy(&self.marginal_y()),
        };
        if h <= 0.0 {
            return 0.0;
        }
        (self.mi() / h).max(0.0)
    }
}

/// Everything the bounds need about one series pair and one designated
/// event pair (X1, Y1).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairStats {
    pub nmi_xy: f64,
    pub nmi_yx: f64,
    /// min positive p(X_i).
    pub lambda1: f64,
    /// p(Y_1).
    pub lambda2: f64,
    /// Joint p(X_i, Y_j) of the cell minimizing p(X_i|Y_j), i != 1, j != 1,
    /// over nonzero cells; None when no such cell exists.
    pub lambda3: Option<f64>,
    /// That minimal conditional p(X_i|Y_j) itself.
    pub lambda4: Option<f64>,
    /// max p(X_i).
    pub lambda5: f64,
    /// Sequence-vs-timestamp support correction for the designated pair.
    pub theta: f64,
    /// Number of symbols of X with positive probability.
    pub n_x: usize,
    /// p(X_1, Y_1) — the designated pair's timestamp-base support.
    pub supp_syb: f64,
    /// Sequence-base support of the designated pair (simultaneous reading).
    pub supp_seq: f64,
    /// Integer counts behind the identity supp_seq = supp_syb + theta:
    /// joint timestamp count, sum of window lengths over co-occurring
    /// windows, and total timestamps.
    pub joint_count: u64,
    pub co_window_mass: u64,
    pub n_timestamps: u64,
}

/// Single-pass summary of one series pair over a window split; designated
/// event pairs are then resolved cheaply.
#[derive(Debug, Clone)]
pub struct PairSummary {
    pub nx: usize,
    pub ny: usize,
    pub joint: Joint,
    counts: Vec<u64>,
    /// Per window, per cell: number of timestamps where the joint holds.
    window_counts: Vec<Vec<u32>>,
    window_lens: Vec<u64>,
    n: u64,
}

impl PairSummary {
    /// `windows` are index ranges into the shared timestamp grid; they must
    /// be non-overlapping for the support identity to hold exactly.
    pub fn new(x: &SymbolicSeries, y: &SymbolicSeries, windows: &[Range<usize>]) -> Result<Self> {
        if x.symbols.len() != y.symbols.len() {
            return Err(Error::Domain(format!(
                "misaligned series: {} vs {} samples",
                x.symbols.len(),
                y.symbols.len()
            )));
        }
        let nx = x.alphabet.len();
        let ny = y.alphabet.len();
        let mut counts = vec![0u64; nx * ny];
        for (&sx, &sy) in x.symbols.iter().zip(&y.symbols) {
            counts[sx as usize * ny + sy as usize] += 1;
        }
        let mut window_counts = Vec::with_capacity(windows.len());
        let mut window_lens = Vec::with_capacity(windows.len());
        for w in windows {
            let mut wc = vec![0u32; nx * ny];
            for t in w.clone() {
                wc[x.symbols[t] as usize * ny + y.symbols[t] as usize] += 1;
            }
            window_lens.push(w.len() as u64);
            window_counts.push(wc);
        }
        Ok(PairSummary {
            nx,
            ny,
            joint: Joint::from_counts(nx, ny, &counts)?,
            counts,
            window_counts,
            window_lens,
            n: x.symbols.len() as u64,
        })
    }

    /// The same pair with series roles swapped.
    pub fn transposed(&self) -> PairSummary {
        let t = |m: &[u32]| -> Vec<u32> {
            let mut out = vec![0u32; m.len()];
            for x in 0..self.nx {
                for y in 0..self.ny {
                    out[y * self.nx + x] = m[x * self.ny + y];
                }
            }
            out
        };
        let mut counts = vec![0u64; self.counts.len()];
        let mut p = vec![0f64; self.joint.p.len()];
        for x in 0..self.nx {
            for y in 0..self.ny {
                counts[y * self.nx + x] = self.counts[x * self.ny + y];
                p[y * self.nx + x] = self.joint.p[x * self.ny + y];
            }
        }
        PairSummary {
            nx: self.ny,
            ny: self.nx,
            joint: Joint {
                nx: self.ny,
                ny: self.nx,
                p,
            },
            counts,
            window_counts: self.window_counts.iter().map(|w| t(w)).collect(),
            window_lens: self.window_lens.clone(),
            n: self.n,
        }
    }

    pub fn nmi_xy(&self) -> f64 {
        self.joint.nmi(NmiDirection::XGivenY)
    }

    pub fn nmi_yx(&self) -> f64 {
        self.joint.nmi(NmiDirection::YGivenX)
    }

    /// Resolves the lambda/theta family for a designated event pair.
    pub fn stats_for(&self, x1: usize, y1: usize) -> PairStats {
        let px = self.joint.marginal_x();
        let py = self.joint.marginal_y();
        let lambda1 = px
            .iter()
            .copied()
            .filter(|&p| p > 0.0)
            .fold(f64::INFINITY, f64::min);
        let lambda5 = px.iter().copied().fold(0.0f64, f64::max);

        // Cell minimizing p(X_i|Y_j) over nonzero cells outside the
        // designated row and column; ties toward the larger joint.
        let mut best: Option<(f64, f64)> = None; // (conditional, joint)
        for i in 0..self.nx {
            for j in 0..self.ny {
                if i == x1 || j == y1 {
                    continue;
                }
                let pxy = self.joint.at(i, j);
                if pxy <= 0.0 || py[j] <= 0.0 {
                    continue;
                }
                let cond = pxy / py[j];
                let better = match best {
                    None => true,
                    Some((c, p)) => cond < c - 1e-15 || ((cond - c).abs() <= 1e-15 && pxy > p),
                };
                if better {
                    best = Some((cond, pxy));
                }
            }
        }

        let cell = x1 * self.ny + y1;
        let joint_count = self.counts[cell];
        let mut theta_num = 0u64;
        let mut co_window_mass = 0u64;
        for (wc, &wlen) in self.window_counts.iter().zip(&self.window_lens) {
            let c = wc[cell] as u64;
            if c > 0 {
                theta_num += wlen - c;
                co_window_mass += wlen;
            }
        }

        PairStats {
            nmi_xy: self.nmi_xy(),
            nmi_yx: self.nmi_yx(),
            lambda1: if lambda1.is_finite() { lambda1 } else { 0.0 },
            lambda2: py[y1],
            lambda3: best.map(|(_, p)| p),
            lambda4: best.map(|(c, _)| c),
            lambda5,
            theta: theta_num as f64 / self.n as f64,
            n_x: px.iter().filter(|&&p| p > 0.0).count(),
            supp_syb: joint_count as f64 / self.n as f64,
            supp_seq: co_window_mass as f64 / self.n as f64,
            joint_count,
            co_window_mass,
            n_timestamps: self.n,
        }
    }
}

/// One-shot helper matching the per-operation contract.
pub fn pair_statistics(
    x: &SymbolicSeries,
    y: &SymbolicSeries,
    target: (usize, usize),
    windows: &[Range<usize>],
) -> Result<PairStats> {
    Ok(PairSummary::new(x, y, windows)?.stats_for(target.0, target.1))
}

/// Equal, non-overlapping index windows of length m covering n timestamps
/// (last window ragged when m does not divide n).
pub fn equal_windows(n: usize, m: usize) -> Vec<Range<usize>> {
    assert!(m > 0);
    (0..n.div_ceil(m))
        .map(|i| (i * m)..((i + 1) * m).min(n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Duration, RelationKind};
    use crate::transform::{build_sequence_db, SymbolicDatabase, SymbolicSeries};
    use crate::TimePoint;

    /// The bundled running-example symbol rows (four appliances, 36 samples).
    pub(crate) fn running_example() -> SymbolicDatabase {
        let s = "On On On On Off Off Off On On Off Off Off Off Off Off On On On Off Off Off Off Off Off Off Off Off On On On On On On On On On";
        let t = "Off Off Off Off Off Off Off On On Off Off On On Off Off On On On Off Off Off Off Off Off Off Off Off On On On On On On On On On";
        let w = "On On On On On On On On On Off Off Off Off On On On On On Off Off Off Off Off Off Off Off Off On On On On On On On On On";
        let i = "Off Off Off Off Off Off On On On Off Off Off On On Off Off On On Off Off Off Off Off Off Off Off Off On On Off Off Off Off Off On On";
        let mk = |id: &str, row: &str| {
            SymbolicSeries::from_labels(id, &row.split_whitespace().collect::<Vec<_>>())
        };
        SymbolicDatabase::new(
            (0..36).map(|k| TimePoint(600 + 5 * k)).collect(),
            Duration(5),
            vec![mk("S", s), mk("T", t), mk("W", w), mk("I", i)],
        )
        .unwrap()
    }

    pub(crate) fn running_example_seqdb() -> SequenceDatabase {
        build_sequence_db(&running_example(), Duration(45), Duration(0), Duration(45)).unwrap()
    }

    #[test]
    fn woff_support_is_half() {
        let db = running_example_seqdb();
        assert_eq!(db.len(), 4);
        let woff = db.vocab.lookup_event("W", "Off").unwrap();
        let s = supp_event(&db, woff).unwrap();
        assert_eq!(s.count, 2);
        assert!((s.relative - 0.5).abs() < 1e-12);
    }

    #[test]
    fn only_ioff_survives_full_support() {
        let db = running_example_seqdb();
        let survivors: Vec<String> = (0..db.vocab.n_events() as u32)
            .map(EventId)
            .filter(|&e| supp_event(&db, e).unwrap().count == 4)
            .map(|e| db.vocab.event_name(e))
            .collect();
        assert_eq!(survivors, vec!["I:Off".to_string()]);
    }

    #[test]
    fn empty_group_rejected() {
        let db = running_example_seqdb();
        assert!(supp_group(&db, &[]).is_err());
    }

    #[test]
    fn conf_pair_matches_brute_force() {
        let db = running_example_seqdb();
        let son = db.vocab.lookup_event("S", "On").unwrap();
        let ton = db.vocab.lookup_event("T", "On").unwrap();
        // Both events present in sequences 1, 2, 4 of the running example.
        let joint = supp_group(&db, &[son, ton]).unwrap().count;
        let denom = supp_event(&db, son)
            .unwrap()
            .count
            .max(supp_event(&db, ton).unwrap().count);
        assert_eq!(joint, 3);
        assert_eq!(denom, 3);
        assert!((conf_pair(&db, son, ton).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pattern_conf_one_when_support_matches_top_event() {
        let db = running_example_seqdb();
        let son = db.vocab.lookup_event("S", "On").unwrap();
        let ton = db.vocab.lookup_event("T", "On").unwrap();
        let cfg = MiningConfig {
            t_max: Duration(45),
            ..MiningConfig::default()
        };
        let p = TemporalPattern::pair(son, ton, RelationKind::Contains);
        let supp = supp_pattern(&db, &p, &cfg).unwrap();
        let conf = conf_pattern(&db, &p, &cfg).unwrap();
        assert_eq!(conf, supp.count as f64 / 3.0);
        // Single events always have confidence 1.
        assert_eq!(
            conf_pattern(&db, &TemporalPattern::single(son), &cfg).unwrap(),
            1.0
        );
    }

    #[test]
    fn entropy_basics() {
        assert!((entropy(&[0.5, 0.5]) - 1.0).abs() < 1e-12);
        assert_eq!(entropy(&[1.0, 0.0]), 0.0);
    }

    #[test]
    fn nmi_self_is_one_and_independence_zero() {
        // X with itself: diagonal joint.
        let j = Joint::new(2, 2, vec![0.3, 0.0, 0.0, 0.7]).unwrap();
        assert!((j.nmi(NmiDirection::XGivenY) - 1.0).abs() < 1e-12);
        // Product joint: MI = 0.
        let ind = Joint::new(2, 2, vec![0.18, 0.42, 0.12, 0.28]).unwrap();
        assert!(ind.mi().abs() < 1e-12);
        assert!(ind.nmi(NmiDirection::XGivenY).abs() < 1e-12);
    }

    #[test]
    fn mi_matches_direct_summation() {
        let j = Joint::new(2, 2, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        // Hand evaluation of the four terms.
        let direct = 0.4 * (0.4f64 / 0.25).log2() * 2.0 + 0.1 * (0.1f64 / 0.25).log2() * 2.0;
        assert!((j.mi() - direct).abs() < 1e-12);
        assert!((j.mi() - 0.2780719051126377).abs() < 1e-9);
    }

    #[test]
    fn constant_series_has_zero_nmi() {
        let j = Joint::new(1, 2, vec![0.5, 0.5]).unwrap();
        assert_eq!(j.nmi(NmiDirection::XGivenY), 0.0);
    }

    #[test]
    fn balanced_identical_pair_lambdas() {
        let x = SymbolicSeries::from_labels("X", &["a", "b", "a", "b", "a", "b", "a", "b"]);
        let stats = pair_statistics(&x, &x, (0, 0), &equal_windows(8, 2)).unwrap();
        assert!((stats.lambda1 - 0.5).abs() < 1e-12);
        assert!((stats.lambda5 - 0.5).abs() < 1e-12);
        assert!((stats.nmi_xy - 1.0).abs() < 1e-12);
        // Only cell (b,b) is outside row a / column a.
        assert!((stats.lambda4.unwrap() - 1.0).abs() < 1e-12);
        assert!((stats.lambda3.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn window_length_one_kills_theta() {
        let x = SymbolicSeries::from_labels("X", &["a", "b", "a", "b"]);
        let y = SymbolicSeries::from_labels("Y", &["u", "u", "v", "v"]);
        let stats = pair_statistics(&x, &y, (0, 0), &equal_windows(4, 1)).unwrap();
        assert_eq!(stats.theta, 0.0);
        assert_eq!(stats.supp_syb, stats.supp_seq);
    }

    #[test]
    fn support_identity_on_running_example_pair() {
        // Pair (S, W), target (On, On), recounted by brute force.
        let db = running_example();
        let s = &db.series[0];
        let w = &db.series[2];
        let windows = equal_windows(36, 9);
        let stats = pair_statistics(s, w, (1, 1), &windows).unwrap();

        // Independent recount of s_ij and g_i.
        let on_s = s.alphabet.iter().position(|a| a == "On").unwrap() as u16;
        let on_w = w.alphabet.iter().position(|a| a == "On").unwrap() as u16;
        let mut joint = 0u64;
        let mut mass = 0u64;
        for win in &windows {
            let c = win
                .clone()
                .filter(|&t| s.symbols[t] == on_s && w.symbols[t] == on_w)
                .count() as u64;
            joint += c;
            if c > 0 {
                mass += win.len() as u64;
            }
        }
        assert_eq!(stats.joint_count, joint);
        assert_eq!(stats.co_window_mass, mass);
        // supp_seq = supp_syb + theta, exactly in counts.
        assert_eq!(
            stats.co_window_mass,
            stats.joint_count + (stats.theta * stats.n_timestamps as f64).round() as u64
        );
        assert!(stats.supp_syb <= stats.supp_seq);
    }

    #[test]
    fn misaligned_series_rejected() {
        let x = SymbolicSeries::from_labels("X", &["a", "b"]);
        let y = SymbolicSeries::from_labels("Y", &["u"]);
        assert!(pair_statistics(&x, &y, (0, 0), &equal_windows(2, 1)).is_err());
    }
}
