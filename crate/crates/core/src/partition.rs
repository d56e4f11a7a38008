//! Integer partitions of the network and exhaustive optimal partitioning.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overhead::{frame_split, OverheadParams};

/// Largest network size accepted by [`enumerate_partitions`].
pub const DEFAULT_MAX_K: usize = 30;

/// Mean sum-rate of one group, indexed by group size.
pub type RateMap = BTreeMap<usize, f64>;

/// A multiset of group sizes summing to `K`, stored as `(size, count)` pairs
/// with sizes strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    groups: Vec<(usize, usize)>,
    k_total: usize,
    d_total: usize,
}

impl Partition {
    /// Builds a partition from individual group sizes in any order.
    pub fn from_parts(parts: &[usize]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSize("a partition needs at least one group".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidSize("group sizes must be at least 1".into()));
        }
        let mut sorted = parts.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self::from_sorted(&sorted))
    }

    fn from_sorted(parts: &[usize]) -> Self {
        let mut groups: Vec<(usize, usize)> = Vec::new();
        for &s in parts {
            match groups.last_mut() {
                Some((size, count)) if *size == s => *count += 1,
                _ => groups.push((s, 1)),
            }
        }
        Self { groups, k_total: parts.iter().sum(), d_total: parts.len() }
    }

    /// Builds a partition from `(size, count)` pairs; equal sizes are merged.
    pub fn from_groups(groups: &[(usize, usize)]) -> Result<Self> {
        let mut parts = Vec::new();
        for &(size, count) in groups {
            if count == 0 {
                return Err(Error::InvalidSize("group counts must be at least 1".into()));
            }
            parts.extend(std::iter::repeat_n(size, count));
        }
        Self::from_parts(&parts)
    }

    /// `(size, count)` pairs, sizes strictly decreasing.
    pub fn groups(&self) -> &[(usize, usize)] {
        &self.groups
    }

    /// Network size `K = sum N_d K_d`.
    pub fn k_total(&self) -> usize {
        self.k_total
    }

    /// Number of groups `D = sum N_d`.
    pub fn d_total(&self) -> usize {
        self.d_total
    }

    /// Group sizes, non-increasing.
    pub fn parts(&self) -> Vec<usize> {
        self.groups.iter().flat_map(|&(s, n)| std::iter::repeat_n(s, n)).collect()
    }

    /// Plain sum notation, e.g. `3+1`.
    pub fn sum_label(&self) -> String {
        self.parts().iter().map(|s| s.to_string()).collect::<Vec<_>>().join("+")
    }

    /// Group notation, e.g. `3x3+2*(1x1)`.
    pub fn label(&self) -> String {
        self.groups
            .iter()
            .map(|&(s, n)| if n == 1 { format!("{s}x{s}") } else { format!("{n}*({s}x{s})") })
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Reverse-lexicographic order on the non-increasing part lists: `(4)`
    /// comes before `(3,1)`, which comes before `(2,2)`.
    pub fn cmp_reverse_lex(&self, other: &Self) -> Ordering {
        other.parts().cmp(&self.parts())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// All partitions of `k` in reverse-lexicographic order, from the single
/// group `{k}` down to `k` singletons.
pub fn enumerate_partitions(k: usize) -> Result<Vec<Partition>> {
    enumerate_partitions_with_limit(k, DEFAULT_MAX_K)
}

pub fn enumerate_partitions_with_limit(k: usize, max_k: usize) -> Result<Vec<Partition>> {
    if k == 0 {
        return Err(Error::InvalidSize("network size must be at least 1".into()));
    }
    if k > max_k {
        return Err(Error::SizeLimit { k, max: max_k });
    }
    let mut out = Vec::new();
    let mut parts = vec![k];
    loop {
        out.push(Partition::from_sorted(&parts));
        // Rightmost part that can still be split; everything after it is 1.
        let Some(i) = parts.iter().rposition(|&p| p > 1) else { break };
        let head = parts[i] - 1;
        let mut rest: usize = parts[i..].iter().sum();
        parts.truncate(i);
        while rest > 0 {
            let next = head.min(rest);
            parts.push(next);
            rest -= next;
        }
    }
    Ok(out)
}

/// Effective sum-rate of a partition under the overhead model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionScore {
    pub partition: Partition,
    /// `sum_d N_d * data_fraction_d * R_d`, bits/s/Hz.
    pub effective_rate: f64,
    /// `sum_d N_d * K_d^r / T`, unclipped.
    pub total_overhead: f64,
    pub per_group_rates: BTreeMap<usize, f64>,
}

pub(crate) fn rate_for(rates: &RateMap, size: usize) -> Result<f64> {
    let r = *rates.get(&size).ok_or(Error::IncompleteRates(size))?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidInput(format!("rate for size {size} must be finite and >= 0, got {r}")));
    }
    Ok(r)
}

/// Scores a partition given per-size group rates.
pub fn score_partition(p: &Partition, rates: &RateMap, oh: &OverheadParams) -> Result<PartitionScore> {
    let mut effective_rate = 0.0;
    let mut total_overhead = 0.0;
    let mut per_group_rates = BTreeMap::new();
    for &(size, count) in p.groups() {
        let rate = rate_for(rates, size)?;
        let split = frame_split(oh, size, p.d_total())?;
        // Same association as the knapsack element profit `count * rate`.
        effective_rate += split.data_fraction * (count as f64 * rate);
        total_overhead += count as f64 * oh.group_overhead(size);
        per_group_rates.insert(size, rate);
    }
    Ok(PartitionScore { partition: p.clone(), effective_rate, total_overhead, per_group_rates })
}

/// Exhaustive search for the partition of `k` with the largest effective
/// sum-rate.
///
/// Returns the winner and every partition ranked by effective rate
/// (descending). Ties go to fewer groups, then to reverse-lexicographic order.
pub fn optimal_partition(
    k: usize,
    rates: &RateMap,
    oh: &OverheadParams,
) -> Result<(PartitionScore, Vec<PartitionScore>)> {
    let partitions = enumerate_partitions(k)?;
    let mut ranked = partitions
        .par_iter()
        .map(|p| score_partition(p, rates, oh))
        .collect::<Result<Vec<_>>>()?;
    // Stable sort keeps enumeration (reverse-lex) order among full ties.
    ranked.sort_by(|a, b| {
        b.effective_rate
            .total_cmp(&a.effective_rate)
            .then(a.partition.d_total().cmp(&b.partition.d_total()))
    });
    let best = ranked[0].clone();
    Ok((best, ranked))
}
