//! Monte Carlo rate tables and the parameter sweeps built on them.
//!
//! Every trial draws its channel from its own seed,
//!
//! ```text
//! seed = base_seed XOR (size << 56 | snr_index << 48 | attempt << 40 | trial)
//! ```
//!
//! so results do not depend on how trials are scheduled across threads.
//! `attempt` counts redraws after an ill-conditioned channel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{draw_channel, zfbf_sum_rate};
use crate::error::{Error, Result};
use crate::knapsack::solve_overhead_constrained;
use crate::overhead::{frame_split, full_network_alpha, OverheadParams};
use crate::partition::{optimal_partition, PartitionScore, RateMap, DEFAULT_MAX_K};

/// Normalisation point of the frame-length sweep: `(K, SNR dB)`.
pub const CCT_REFERENCE: (usize, f64) = (9, 25.0);
/// Normalisation point of the network-size sweep: `(K, SNR dB)`.
pub const APS_REFERENCE: (usize, f64) = (9, 30.0);

const MAX_REDRAWS: u64 = 255;
const MAX_TRIALS: usize = 1 << 40;

/// Per-SISO transmit power for an SNR in dB, with unit noise power.
pub fn snr_db_to_power(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

fn stream_seed(base: u64, size: usize, snr_index: usize, attempt: u64, trial: usize) -> u64 {
    base ^ ((size as u64) << 56 | (snr_index as u64) << 48 | attempt << 40 | trial as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub k_max: usize,
    pub snr_db: Vec<f64>,
    pub t_values: Vec<u64>,
    pub r: f64,
    pub trials: usize,
    pub base_seed: u64,
    pub alpha_th_values: Vec<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            k_max: 9,
            snr_db: vec![25.0, 30.0],
            t_values: vec![20, 50, 100, 200, 500, 1000, 2000],
            r: 2.0,
            trials: 2000,
            base_seed: 1,
            alpha_th_values: (0..=20).map(|i| i as f64 * 0.05).collect(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.k_max == 0 || self.k_max > DEFAULT_MAX_K {
            return bad(format!("k_max must lie in 1..={DEFAULT_MAX_K}, got {}", self.k_max));
        }
        if self.trials == 0 || self.trials >= MAX_TRIALS {
            return bad(format!("trials must lie in 1..2^40, got {}", self.trials));
        }
        if self.snr_db.is_empty() || self.t_values.is_empty() || self.alpha_th_values.is_empty() {
            return bad("snr_db, t_values and alpha_th_values must all be non-empty".into());
        }
        if self.snr_db.len() > 256 {
            return bad("at most 256 SNR points are supported".into());
        }
        if let Some(s) = self.snr_db.iter().find(|s| !s.is_finite()) {
            return bad(format!("SNR values must be finite, got {s}"));
        }
        if self.t_values.contains(&0) {
            return bad("frame lengths must be at least 1".into());
        }
        if let Some(a) = self.alpha_th_values.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return bad(format!("alpha_th values must lie in [0, 1], got {a}"));
        }
        OverheadParams::new(self.r, 1).map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    fn overhead(&self, t: u64) -> OverheadParams {
        OverheadParams { r: self.r, t }
    }
}

/// Mean sum-rate of one group size at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEntry {
    pub size: usize,
    pub snr_db: f64,
    pub mean: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    pub trials: usize,
    /// Ill-conditioned draws that were discarded and redrawn.
    pub redraws: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    snr_db: Vec<f64>,
    k_max: usize,
    trials: usize,
    /// `entries[snr_index][size - 1]`.
    entries: Vec<Vec<RateEntry>>,
}

fn same_snr(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

impl RateTable {
    pub fn snr_points(&self) -> &[f64] {
        &self.snr_db
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    fn snr_index(&self, snr_db: f64) -> Option<usize> {
        self.snr_db.iter().position(|s| same_snr(*s, snr_db))
    }

    pub fn entry(&self, size: usize, snr_db: f64) -> Option<&RateEntry> {
        let i = self.snr_index(snr_db)?;
        self.entries[i].get(size.checked_sub(1)?)
    }

    /// All entries, SNR-major then size ascending.
    pub fn entries(&self) -> impl Iterator<Item = &RateEntry> {
        self.entries.iter().flatten()
    }

    /// Mean rates of sizes `1..=k_max` at one SNR point.
    pub fn rates(&self, snr_db: f64) -> Option<RateMap> {
        let i = self.snr_index(snr_db)?;
        Some(self.entries[i].iter().map(|e| (e.size, e.mean)).collect())
    }

    fn require(&self, size: usize, snr_db: f64) -> Result<&RateEntry> {
        self.entry(size, snr_db)
            .ok_or_else(|| Error::Config(format!("rate table has no entry for size {size} at {snr_db} dB")))
    }

    fn require_rates(&self, snr_db: f64) -> Result<RateMap> {
        self.rates(snr_db)
            .ok_or_else(|| Error::Config(format!("rate table has no SNR point {snr_db} dB")))
    }

    /// Standard error of a partition's effective rate, treating the per-size
    /// means as independent.
    pub fn score_stderr(&self, score: &PartitionScore, snr_db: f64, oh: &OverheadParams) -> Result<f64> {
        let p = &score.partition;
        let mut var = 0.0;
        for &(size, count) in p.groups() {
            let coeff = count as f64 * frame_split(oh, size, p.d_total())?.data_fraction;
            var += (coeff * self.require(size, snr_db)?.stderr).powi(2);
        }
        Ok(var.sqrt())
    }
}

fn trial_rate(size: usize, snr_index: usize, trial: usize, power: f64, base: u64) -> Result<(f64, u64)> {
    for attempt in 0..=MAX_REDRAWS {
        let h = draw_channel(size, stream_seed(base, size, snr_index, attempt, trial))?;
        match zfbf_sum_rate(&h, power) {
            Ok(sol) => return Ok((sol.sum_rate, attempt)),
            Err(Error::IllConditioned { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::IllConditioned { condition: f64::INFINITY, limit: crate::channel::DEFAULT_CONDITION_LIMIT })
}

/// Averages the ZFBF sum-rate of every group size `1..=k_max` at every SNR
/// point over `trials` independent channel draws.
pub fn build_rate_table(cfg: &SimConfig) -> Result<RateTable> {
    cfg.validate()?;
    let mut entries = Vec::with_capacity(cfg.snr_db.len());
    for (snr_index, &snr_db) in cfg.snr_db.iter().enumerate() {
        let power = snr_db_to_power(snr_db);
        let mut row = Vec::with_capacity(cfg.k_max);
        for size in 1..=cfg.k_max {
            let samples = (0..cfg.trials)
                .into_par_iter()
                .map(|trial| trial_rate(size, snr_index, trial, power, cfg.base_seed))
                .collect::<Result<Vec<_>>>()?;
            // Sequential reduction in trial order keeps the mean bitwise stable.
            let n = samples.len() as f64;
            let mean = samples.iter().map(|(r, _)| r).sum::<f64>() / n;
            let stderr = if samples.len() > 1 {
                let var = samples.iter().map(|(r, _)| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
                (var / n).sqrt()
            } else {
                0.0
            };
            let redraws = samples.iter().map(|(_, a)| a).sum();
            row.push(RateEntry { size, snr_db, mean, stderr, trials: cfg.trials, redraws });
        }
        entries.push(row);
    }
    Ok(RateTable { snr_db: cfg.snr_db.clone(), k_max: cfg.k_max, trials: cfg.trials, entries })
}

fn check_reference(cfg: &SimConfig, table: &RateTable, (k, snr): (usize, f64)) -> Result<()> {
    if cfg.k_max < k || !cfg.snr_db.iter().any(|s| same_snr(*s, snr)) {
        return Err(Error::Config(format!(
            "the sweep grid must contain the normalisation point K={k} at {snr} dB"
        )));
    }
    table.require(k, snr)?;
    Ok(())
}

/// One point of the frame-length sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CctRow {
    pub k: usize,
    pub t: u64,
    pub snr_db: f64,
    /// `(1 - alpha) R_K` of the unpartitioned network.
    pub full_rate: f64,
    /// Effective rate of the optimal partition.
    pub partitioned_rate: f64,
    pub full_nsr: f64,
    pub effective_nsr: f64,
    pub full_stderr: f64,
    pub partitioned_stderr: f64,
    pub best_partition: String,
}

/// Effective rate with and without optimal partitioning for every
/// `(K, T, SNR)` of the grid, normalised by the optimal-partition rate of the
/// 9x9 network at 25 dB and the largest frame length in the grid.
pub fn sweep_cct(cfg: &SimConfig, table: &RateTable) -> Result<Vec<CctRow>> {
    cfg.validate()?;
    check_reference(cfg, table, CCT_REFERENCE)?;
    let t_ref = *cfg.t_values.iter().max().expect("validated non-empty");
    let (ref_k, ref_snr) = CCT_REFERENCE;
    let (reference, _) = optimal_partition(ref_k, &table.require_rates(ref_snr)?, &cfg.overhead(t_ref))?;
    let norm = reference.effective_rate;
    if norm <= 0.0 || norm.is_nan() {
        return Err(Error::Config("normalisation reference has zero effective rate".into()));
    }

    let mut rows = Vec::new();
    for &snr_db in &cfg.snr_db {
        let rates = table.require_rates(snr_db)?;
        for k in 1..=cfg.k_max {
            let entry = table.require(k, snr_db)?;
            for &t in &cfg.t_values {
                let oh = cfg.overhead(t);
                let alpha = full_network_alpha(&oh, k)?;
                let full_rate = (1.0 - alpha) * entry.mean;
                let (best, _) = optimal_partition(k, &rates, &oh)?;
                let partitioned_stderr = table.score_stderr(&best, snr_db, &oh)?;
                rows.push(CctRow {
                    k,
                    t,
                    snr_db,
                    full_rate,
                    partitioned_rate: best.effective_rate,
                    full_nsr: full_rate / norm,
                    effective_nsr: best.effective_rate / norm,
                    full_stderr: (1.0 - alpha) * entry.stderr / norm,
                    partitioned_stderr: partitioned_stderr / norm,
                    best_partition: best.partition.label(),
                });
            }
        }
    }
    Ok(rows)
}

/// One point of the network-size sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApsRow {
    pub k: usize,
    pub snr_db: f64,
    pub t: u64,
    /// `R_K` with zero overhead.
    pub ideal_rate: f64,
    pub effective_rate: f64,
    pub ideal_nsr: f64,
    pub effective_nsr: f64,
    pub ideal_stderr: f64,
    pub effective_stderr: f64,
    pub best_partition: String,
}

/// Ideal (zero-overhead) and optimally partitioned effective rate against
/// network size, normalised by the zero-overhead 9x9 rate at 30 dB.
pub fn sweep_aps(cfg: &SimConfig, table: &RateTable) -> Result<Vec<ApsRow>> {
    cfg.validate()?;
    check_reference(cfg, table, APS_REFERENCE)?;
    let (ref_k, ref_snr) = APS_REFERENCE;
    let norm = table.require(ref_k, ref_snr)?.mean;
    if norm <= 0.0 || norm.is_nan() {
        return Err(Error::Config("normalisation reference has zero rate".into()));
    }

    let mut rows = Vec::new();
    for &snr_db in &cfg.snr_db {
        let rates = table.require_rates(snr_db)?;
        for &t in &cfg.t_values {
            let oh = cfg.overhead(t);
            for k in 1..=cfg.k_max {
                let entry = table.require(k, snr_db)?;
                let (best, _) = optimal_partition(k, &rates, &oh)?;
                let effective_stderr = table.score_stderr(&best, snr_db, &oh)?;
                rows.push(ApsRow {
                    k,
                    snr_db,
                    t,
                    ideal_rate: entry.mean,
                    effective_rate: best.effective_rate,
                    ideal_nsr: entry.mean / norm,
                    effective_nsr: best.effective_rate / norm,
                    ideal_stderr: entry.stderr / norm,
                    effective_stderr: effective_stderr / norm,
                    best_partition: best.partition.label(),
                });
            }
        }
    }
    Ok(rows)
}

/// One point of the maximum-allowed-overhead sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaoRow {
    pub k: usize,
    pub t: u64,
    pub snr_db: f64,
    pub alpha_th: f64,
    pub constrained_rate: f64,
    pub optimal_rate: f64,
    /// Constrained over unconstrained effective rate, in percent; 0 when
    /// infeasible.
    pub ratio_pct: f64,
    pub feasible: bool,
    /// Chosen constrained partition, empty when infeasible.
    pub best_partition: String,
}

/// Constrained optimum as a percentage of the unconstrained optimum for every
/// `(K, T, SNR, alpha_th)` of the grid. Thresholds are visited in ascending
/// order within each `(K, T, SNR)` group.
pub fn sweep_mao(cfg: &SimConfig, table: &RateTable) -> Result<Vec<MaoRow>> {
    cfg.validate()?;
    let mut alphas = cfg.alpha_th_values.clone();
    alphas.sort_by(f64::total_cmp);

    let mut rows = Vec::new();
    for &snr_db in &cfg.snr_db {
        let rates = table.require_rates(snr_db)?;
        for k in 1..=cfg.k_max {
            for &t in &cfg.t_values {
                let oh = cfg.overhead(t);
                let (best, _) = optimal_partition(k, &rates, &oh)?;
                for &alpha_th in &alphas {
                    let sol = solve_overhead_constrained(k, &rates, &oh, alpha_th)?;
                    let (constrained_rate, feasible, label) = match &sol.chosen {
                        Some(c) => (c.profit, true, c.composition.label()),
                        None => (0.0, false, String::new()),
                    };
                    let ratio_pct = match (feasible, best.effective_rate > 0.0) {
                        (false, _) => 0.0,
                        (true, true) => 100.0 * constrained_rate / best.effective_rate,
                        (true, false) => 100.0,
                    };
                    rows.push(MaoRow {
                        k,
                        t,
                        snr_db,
                        alpha_th,
                        constrained_rate,
                        optimal_rate: best.effective_rate,
                        ratio_pct,
                        feasible,
                        best_partition: label,
                    });
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> SimConfig {
        SimConfig {
            k_max: 3,
            snr_db: vec![10.0],
            t_values: vec![20, 200],
            r: 2.0,
            trials: 200,
            base_seed: 7,
            alpha_th_values: vec![0.0, 0.5, 1.0],
        }
    }

    #[test]
    fn seeds_are_distinct_per_stream() {
        let a = stream_seed(5, 2, 0, 0, 17);
        assert_ne!(a, stream_seed(5, 3, 0, 0, 17));
        assert_ne!(a, stream_seed(5, 2, 1, 0, 17));
        assert_ne!(a, stream_seed(5, 2, 0, 1, 17));
        assert_ne!(a, stream_seed(5, 2, 0, 0, 18));
        assert_ne!(a, stream_seed(6, 2, 0, 0, 17));
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::default().validate().is_ok());
        let broken = [
            SimConfig { trials: 0, ..small_cfg() },
            SimConfig { k_max: 0, ..small_cfg() },
            SimConfig { k_max: 31, ..small_cfg() },
            SimConfig { snr_db: vec![], ..small_cfg() },
            SimConfig { snr_db: vec![f64::INFINITY], ..small_cfg() },
            SimConfig { t_values: vec![0], ..small_cfg() },
            SimConfig { alpha_th_values: vec![1.5], ..small_cfg() },
            SimConfig { r: 0.0, ..small_cfg() },
        ];
        for cfg in broken {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
        }
    }

    #[test]
    fn table_is_deterministic() {
        let cfg = small_cfg();
        assert_eq!(build_rate_table(&cfg).unwrap(), build_rate_table(&cfg).unwrap());
        let single = SimConfig { trials: 1, ..small_cfg() };
        let t = build_rate_table(&single).unwrap();
        assert_eq!(t.entry(2, 10.0).unwrap().stderr, 0.0);
        assert_eq!(t, build_rate_table(&single).unwrap());
    }

    #[test]
    fn table_lookup() {
        let t = build_rate_table(&small_cfg()).unwrap();
        assert!(t.entry(0, 10.0).is_none());
        assert!(t.entry(4, 10.0).is_none());
        assert!(t.entry(1, 11.0).is_none());
        let rates = t.rates(10.0).unwrap();
        assert_eq!(rates.keys().copied().collect::<Vec<_>>(), [1, 2, 3]);
        assert!(rates.values().all(|r| *r > 0.0));
    }

    #[test]
    fn sweeps_need_their_reference_point() {
        let cfg = small_cfg();
        let t = build_rate_table(&cfg).unwrap();
        assert!(matches!(sweep_cct(&cfg, &t), Err(Error::Config(_))));
        assert!(matches!(sweep_aps(&cfg, &t), Err(Error::Config(_))));
        assert!(sweep_mao(&cfg, &t).is_ok());
    }

    #[test]
    fn mao_ratio_monotone_and_bounded() {
        let cfg = SimConfig { alpha_th_values: (0..=10).map(|i| i as f64 / 10.0).collect(), ..small_cfg() };
        let t = build_rate_table(&cfg).unwrap();
        let rows = sweep_mao(&cfg, &t).unwrap();
        assert_eq!(rows.len(), 3 * 2 * 11);
        for group in rows.chunks(11) {
            for w in group.windows(2) {
                assert!(w[1].ratio_pct >= w[0].ratio_pct);
            }
            assert!(!group[0].feasible);
            assert!(group.iter().all(|r| r.ratio_pct <= 100.0 + 1e-9));
        }
    }
}
