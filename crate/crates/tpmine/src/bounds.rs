//! Analytic support/confidence bounds for mutually dependent series pairs:
//! Lambert-W evaluation, the three bound formulas, their threshold
//! inversions, and the per-pair mu_min/mu_max selection rule used by the
//! approximate miner.
//!
//! All logarithms here are natural; the bound formulas are stated with
//! base-2 entropies times ln 2, which collapses to natural logs.

use serde::{Deserialize, Serialize};

use crate::measures::{PairStats, PairSummary};
use crate::model::{MiningConfig, MiningMode};
use crate::{Error, Result};

const NEG_INV_E: f64 = -0.36787944117144233;

/// Principal branch of the Lambert W function: W(x) e^{W(x)} = x.
///
/// Asymptotic/series initial guess plus Halley iteration (at most 50
/// steps, 1e-14 absolute convergence on W).
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("lambert_w0 needs a finite input, got {x}")));
    }
    if x < NEG_INV_E {
        if x > NEG_INV_E - 1e-12 {
            return Ok(-1.0);
        }
        return Err(Error::Domain(format!(
            "lambert_w0 undefined below -1/e: {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let mut w = if x < -0.25 {
        // Series around the branch point, p = sqrt(2(e x + 1)).
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < std::f64::consts::E {
        (1.0 + x).ln()
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if !denom.is_finite() || denom == 0.0 {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-14 * w.abs().max(1.0) {
            break;
        }
    }
    Ok(w)
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Domain(format!("{name} = {v} outside (0,1)")));
    }
    Ok(())
}

/// Support lower bound for the designated event pair:
/// lambda2 * exp(W((1-mu) ln(lambda1) / lambda2)).
///
/// Returns 0 (vacuous) when the Lambert argument drops below -1/e.
pub fn support_lower_bound(lambda1: f64, lambda2: f64, mu_min: f64) -> Result<f64> {
    check_open_unit("lambda1", lambda1)?;
    check_open_unit("lambda2", lambda2)?;
    if !(0.0..=1.0).contains(&mu_min) {
        return Err(Error::Domain(format!("mu_min = {mu_min} outside [0,1]")));
    }
    let arg = (1.0 - mu_min) * lambda1.ln() / lambda2;
    if arg < NEG_INV_E {
        return Ok(0.0);
    }
    Ok(lambda2 * lambert_w0(arg)?.exp())
}

/// Minimum NMI guaranteeing pair support of at least sigma_min; piecewise
/// with a knee at sigma_min / lambda2 = 1/e.
pub fn mu_min_for_support(sigma_min: f64, lambda1: f64, lambda2: f64) -> Result<f64> {
    check_open_unit("lambda1", lambda1)?;
    check_open_unit("lambda2", lambda2)?;
    if sigma_min < 0.0 {
        return Err(Error::Domain(format!("sigma_min = {sigma_min} negative")));
    }
    let ratio = sigma_min / lambda2;
    if ratio <= (-1.0f64).exp() {
        // The branch where the bound sits exactly at the Lambert domain edge.
        Ok(1.0 - lambda2 / (std::f64::consts::E * (1.0 / lambda1).ln()))
    } else {
        Ok(1.0 - sigma_min * ratio.ln() / lambda1.ln())
    }
}

/// Confidence lower bound, assuming pair support of at least sigma_min:
/// sigma_min * lambda1^((1-mu)/sigma_min) * ((n_x-1)/(1-sigma_min))^(lambda3/sigma_min).
pub fn confidence_lower_bound(
    sigma_min: f64,
    mu_min: f64,
    lambda1: f64,
    lambda3: f64,
    n_x: usize,
) -> Result<f64> {
    check_open_unit("sigma_min", sigma_min)?;
    check_open_unit("lambda1", lambda1)?;
    if !(0.0..1.0).contains(&lambda3) {
        return Err(Error::Domain(format!("lambda3 = {lambda3} outside [0,1)")));
    }
    if n_x < 2 {
        return Err(Error::Domain(format!("n_x = {n_x} must be at least 2")));
    }
    let base = (n_x as f64 - 1.0) / (1.0 - sigma_min);
    Ok(sigma_min
        * lambda1.powf((1.0 - mu_min) / sigma_min)
        * base.powf(lambda3 / sigma_min))
}

/// Inversion of the confidence bound: the minimum NMI at which it reaches
/// delta.
pub fn mu_min_for_confidence(
    delta: f64,
    sigma_min: f64,
    lambda1: f64,
    lambda3: f64,
    n_x: usize,
) -> Result<f64> {
    check_open_unit("sigma_min", sigma_min)?;
    check_open_unit("lambda1", lambda1)?;
    if !(0.0..1.0).contains(&lambda3) {
        return Err(Error::Domain(format!("lambda3 = {lambda3} outside [0,1)")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("delta = {delta} outside (0,1]")));
    }
    if n_x < 2 {
        return Err(Error::Domain(format!("n_x = {n_x} must be at least 2")));
    }
    let z = (delta / sigma_min)
        * ((1.0 - sigma_min) / (n_x as f64 - 1.0)).powf(lambda3 / sigma_min);
    Ok(1.0 - sigma_min * z.ln() / lambda1.ln())
}

/// Support upper bound for the designated pair under NMI <= mu_max:
/// lambda2 * exp(W(((1-mu_max) ln lambda5 - (1-sigma_min) ln lambda4)/lambda2)) + theta.
///
/// A Lambert argument below -1/e yields an unbounded result (no pruning).
pub fn support_upper_bound(
    sigma_min: f64,
    mu_max: f64,
    lambda2: f64,
    lambda4: f64,
    lambda5: f64,
    theta: f64,
) -> Result<f64> {
    check_open_unit("lambda2", lambda2)?;
    check_open_unit("lambda4", lambda4)?;
    check_open_unit("lambda5", lambda5)?;
    if !(0.0..1.0).contains(&sigma_min) {
        return Err(Error::Domain(format!("sigma_min = {sigma_min} outside [0,1)")));
    }
    if theta < 0.0 {
        return Err(Error::Domain(format!("theta = {theta} negative")));
    }
    let arg = ((1.0 - mu_max) * lambda5.ln() - (1.0 - sigma_min) * lambda4.ln()) / lambda2;
    if arg < NEG_INV_E {
        return Ok(f64::INFINITY);
    }
    Ok(lambda2 * lambert_w0(arg)?.exp() + theta)
}

/// Inversion of the upper bound: the maximum NMI at which it stays within
/// sigma_max. Requires (sigma_max - theta)/lambda2 >= 1/e for the Lambert
/// form to invert.
pub fn mu_max_for_support(
    sigma_max: f64,
    sigma_min: f64,
    lambda2: f64,
    lambda4: f64,
    lambda5: f64,
    theta: f64,
) -> Result<f64> {
    check_open_unit("lambda2", lambda2)?;
    check_open_unit("lambda4", lambda4)?;
    check_open_unit("lambda5", lambda5)?;
    if sigma_max <= theta {
        return Err(Error::Infeasible(format!(
            "sigma_max {sigma_max} must exceed theta {theta}"
        )));
    }
    let q = (sigma_max - theta) / lambda2;
    if q < (-1.0f64).exp() {
        return Err(Error::Infeasible(format!(
            "(sigma_max - theta)/lambda2 = {q} below 1/e; no NMI threshold can cap the support"
        )));
    }
    let numerator = (sigma_max - theta) * q.ln() + (1.0 - sigma_min) * lambda4.ln();
    Ok(1.0 - numerator / lambda5.ln())
}

/// Which rule produced a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundProvenance {
    SupportBound,
    ConfidenceBound,
    UpperSupportBound,
    Degenerate,
    Unbounded,
}

/// NMI thresholds for one designated event pair (or one series pair after
/// aggregation over designations).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MuThresholds {
    pub mu_min: f64,
    /// `f64::INFINITY` means unbounded (no rare-mode cap).
    pub mu_max: f64,
    pub min_source: BoundProvenance,
    pub max_source: BoundProvenance,
}

impl MuThresholds {
    fn unprunable() -> Self {
        MuThresholds {
            mu_min: 0.0,
            mu_max: f64::INFINITY,
            min_source: BoundProvenance::Degenerate,
            max_source: BoundProvenance::Unbounded,
        }
    }
}

/// Thresholds for one designated event pair. Frequent mode: mu_min is the
/// larger of the support and confidence rules, mu_max unbounded. Rare mode
/// additionally caps via the upper-bound rule. Domain errors downgrade to
/// "no pruning" for the affected side.
pub fn select_mu(cfg: &MiningConfig, stats: &PairStats) -> MuThresholds {
    let c1 = mu_min_for_support(cfg.sigma_min, stats.lambda1, stats.lambda2);
    let c2 = match stats.lambda3 {
        Some(l3) => mu_min_for_confidence(cfg.delta, cfg.sigma_min, stats.lambda1, l3, stats.n_x),
        None => Err(Error::Domain("no eligible lambda3 cell".into())),
    };
    let (mu_min, min_source) = match (c1, c2) {
        (Ok(a), Ok(b)) => {
            if a >= b {
                (a, BoundProvenance::SupportBound)
            } else {
                (b, BoundProvenance::ConfidenceBound)
            }
        }
        // A missing rule means this designation cannot justify pruning.
        _ => (0.0, BoundProvenance::Degenerate),
    };

    let (mu_max, max_source) = if cfg.mode == MiningMode::Rare {
        let c3 = match (stats.lambda4, cfg.sigma_max) {
            (Some(l4), Some(sm)) => mu_max_for_support(
                sm,
                cfg.sigma_min,
                stats.lambda2,
                l4,
                stats.lambda5,
                stats.theta,
            ),
            _ => Err(Error::Domain("no eligible lambda4 cell".into())),
        };
        match c3 {
            Ok(m) => (m, BoundProvenance::UpperSupportBound),
            Err(_) => (f64::INFINITY, BoundProvenance::Unbounded),
        }
    } else {
        (f64::INFINITY, BoundProvenance::Unbounded)
    };

    MuThresholds {
        mu_min,
        mu_max,
        min_source,
        max_source,
    }
}

/// Series-pair thresholds: the designation (and orientation, honoring the
/// confidence rule's supp(Y1) >= supp(X1) assumption) that minimizes
/// mu_min and maximizes mu_max, so a pair is never pruned when some
/// designated event pair's bounds would keep it.
pub fn series_pair_mu(cfg: &MiningConfig, forward: &PairSummary) -> MuThresholds {
    let reverse = forward.transposed();
    let px = forward.joint.marginal_x();
    let py = forward.joint.marginal_y();
    let mut agg: Option<MuThresholds> = None;
    for (a, &pa) in px.iter().enumerate() {
        if pa <= 0.0 {
            continue;
        }
        for (b, &pb) in py.iter().enumerate() {
            if pb <= 0.0 {
                continue;
            }
            // Orient so the designated Y1 is the more frequent event.
            let stats = if pb >= pa {
                forward.stats_for(a, b)
            } else {
                reverse.stats_for(b, a)
            };
            let t = select_mu(cfg, &stats);
            agg = Some(match agg {
                None => t,
                Some(acc) => MuThresholds {
                    mu_min: acc.mu_min.min(t.mu_min),
                    mu_max: acc.mu_max.max(t.mu_max),
                    min_source: if t.mu_min < acc.mu_min {
                        t.min_source
                    } else {
                        acc.min_source
                    },
                    max_source: if t.mu_max > acc.mu_max {
                        t.max_source
                    } else {
                        acc.max_source
                    },
                },
            });
        }
    }
    agg.unwrap_or_else(MuThresholds::unprunable)
}
