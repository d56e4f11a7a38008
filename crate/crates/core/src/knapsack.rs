//! Overhead-constrained partitioning as a knapsack problem.
//!
//! The bounded problem (choose `N_d` groups of each size `d`, subject to
//! `sum N_d d = K` and total overhead `<= alpha_th`) is reduced in two steps:
//!
//! 1. [`transform_bkp`] expands every size `j` into basic elements "`c` copies
//!    of a `j x j` group" for `c = 1..=floor(K/j)`.
//! 2. [`enumerate_candidates`] combines basic elements of distinct sizes into
//!    every complete network partition, each with a profit (effective
//!    sum-rate) and a weight (overhead fraction).
//!
//! Because every candidate already covers all `K` access points, exactly one
//! candidate is selected, and [`solve_constrained`] takes the most profitable
//! candidate that fits under the threshold.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overhead::{frame_split, OverheadParams};
use crate::partition::{enumerate_partitions, rate_for, score_partition, Partition, RateMap};

/// Largest network size accepted by [`oracle_bruteforce`].
pub const ORACLE_MAX_K: usize = 12;

/// `count` copies of a `size x size` MIMO group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasicElement {
    pub size: usize,
    pub count: usize,
    /// Access points covered, `count * size`.
    pub aps: usize,
    /// `count * R_size`.
    pub profit: f64,
}

/// One complete network partition with its knapsack profit and weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnapsackCandidate {
    pub composition: Partition,
    /// Effective sum-rate, bits/s/Hz.
    pub profit: f64,
    /// Total overhead fraction `sum_d N_d K_d^r / T`.
    pub weight: f64,
    /// Position in enumeration order.
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedSolution {
    /// `None` when no candidate meets the threshold.
    pub chosen: Option<KnapsackCandidate>,
    pub alpha_threshold: f64,
    pub feasible_count: usize,
}

/// Expands the bounded problem into basic elements, `j` ascending and copy
/// count ascending within each `j`.
pub fn transform_bkp(k: usize, rates: &RateMap) -> Result<Vec<BasicElement>> {
    if k == 0 {
        return Err(Error::InvalidSize("network size must be at least 1".into()));
    }
    let mut elements = Vec::new();
    for size in 1..=k {
        let rate = rate_for(rates, size)?;
        for count in 1..=k / size {
            elements.push(BasicElement { size, count, aps: count * size, profit: count as f64 * rate });
        }
    }
    Ok(elements)
}

/// Combines basic elements into every partition of `k`.
///
/// A combination takes at most one element per group size (two elements of
/// the same size would describe the same multiset as a single larger-count
/// element), so each partition appears exactly once. Candidates come out in
/// reverse-lexicographic order, matching [`enumerate_partitions`].
pub fn enumerate_candidates(
    elements: &[BasicElement],
    k: usize,
    oh: &OverheadParams,
) -> Result<Vec<KnapsackCandidate>> {
    if k == 0 {
        return Err(Error::InvalidSize("network size must be at least 1".into()));
    }
    let mut by_size: BTreeMap<usize, Vec<&BasicElement>> = BTreeMap::new();
    for e in elements {
        if e.size == 0 || e.count == 0 || e.aps != e.size * e.count || e.aps > k {
            return Err(Error::InvalidInput(format!("basic element {e:?} does not fit a network of {k}")));
        }
        by_size.entry(e.size).or_default().push(e);
    }
    // Largest size first, most copies first.
    let mut levels: Vec<Vec<&BasicElement>> = by_size.into_values().rev().collect();
    for level in &mut levels {
        level.sort_by_key(|e| std::cmp::Reverse(e.count));
        level.dedup_by_key(|e| e.count);
    }

    let mut out = Vec::new();
    let mut chosen = Vec::new();
    collect(&levels, 0, k, &mut chosen, &mut out, oh)?;
    Ok(out)
}

fn collect<'a>(
    levels: &[Vec<&'a BasicElement>],
    level: usize,
    remaining: usize,
    chosen: &mut Vec<&'a BasicElement>,
    out: &mut Vec<KnapsackCandidate>,
    oh: &OverheadParams,
) -> Result<()> {
    if remaining == 0 {
        out.push(candidate(chosen, out.len(), oh)?);
        return Ok(());
    }
    let Some(options) = levels.get(level) else { return Ok(()) };
    for e in options.iter().filter(|e| e.aps <= remaining) {
        chosen.push(e);
        collect(levels, level + 1, remaining - e.aps, chosen, out, oh)?;
        chosen.pop();
    }
    collect(levels, level + 1, remaining, chosen, out, oh)
}

fn candidate(chosen: &[&BasicElement], index: usize, oh: &OverheadParams) -> Result<KnapsackCandidate> {
    let groups: Vec<(usize, usize)> = chosen.iter().map(|e| (e.size, e.count)).collect();
    let composition = Partition::from_groups(&groups)?;
    let d = composition.d_total();
    let mut profit = 0.0;
    let mut weight = 0.0;
    for e in chosen {
        profit += frame_split(oh, e.size, d)?.data_fraction * e.profit;
        weight += e.count as f64 * oh.group_overhead(e.size);
    }
    Ok(KnapsackCandidate { composition, profit, weight, index })
}

/// Profit descending, then weight, group count and enumeration order ascending.
fn greedy_order(a: &KnapsackCandidate, b: &KnapsackCandidate) -> Ordering {
    b.profit
        .total_cmp(&a.profit)
        .then(a.weight.total_cmp(&b.weight))
        .then(a.composition.d_total().cmp(&b.composition.d_total()))
        .then(a.index.cmp(&b.index))
}

fn check_threshold(alpha_th: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha_th) {
        return Err(Error::InvalidInput(format!("alpha_th must lie in [0, 1], got {alpha_th}")));
    }
    Ok(())
}

/// Greedy-split solve: sort by profit and take the first candidate whose
/// weight fits under `alpha_th`.
pub fn solve_constrained(candidates: &[KnapsackCandidate], alpha_th: f64) -> Result<ConstrainedSolution> {
    if candidates.is_empty() {
        return Err(Error::InvalidInput("candidate list is empty".into()));
    }
    check_threshold(alpha_th)?;
    let mut sorted: Vec<&KnapsackCandidate> = candidates.iter().collect();
    sorted.sort_by(|a, b| greedy_order(a, b));
    let chosen = sorted.iter().find(|c| c.weight <= alpha_th).map(|c| (*c).clone());
    let feasible_count = candidates.iter().filter(|c| c.weight <= alpha_th).count();
    Ok(ConstrainedSolution { chosen, alpha_threshold: alpha_th, feasible_count })
}

/// Transform, enumerate and solve in one call.
pub fn solve_overhead_constrained(
    k: usize,
    rates: &RateMap,
    oh: &OverheadParams,
    alpha_th: f64,
) -> Result<ConstrainedSolution> {
    let elements = transform_bkp(k, rates)?;
    let candidates = enumerate_candidates(&elements, k, oh)?;
    solve_constrained(&candidates, alpha_th)
}

/// Reference solver: scores every partition directly and keeps the best
/// feasible one by a linear scan.
pub fn oracle_bruteforce(
    k: usize,
    rates: &RateMap,
    oh: &OverheadParams,
    alpha_th: f64,
) -> Result<ConstrainedSolution> {
    if k > ORACLE_MAX_K {
        return Err(Error::SizeLimit { k, max: ORACLE_MAX_K });
    }
    check_threshold(alpha_th)?;
    let mut best: Option<KnapsackCandidate> = None;
    let mut feasible_count = 0;
    for (index, p) in enumerate_partitions(k)?.iter().enumerate() {
        let score = score_partition(p, rates, oh)?;
        if score.total_overhead > alpha_th {
            continue;
        }
        feasible_count += 1;
        let better = match &best {
            None => true,
            Some(b) => {
                score.effective_rate > b.profit
                    || (score.effective_rate == b.profit
                        && (score.total_overhead < b.weight
                            || (score.total_overhead == b.weight && p.d_total() < b.composition.d_total())))
            }
        };
        if better {
            best = Some(KnapsackCandidate {
                composition: score.partition,
                profit: score.effective_rate,
                weight: score.total_overhead,
                index,
            });
        }
    }
    Ok(ConstrainedSolution { chosen: best, alpha_threshold: alpha_th, feasible_count })
}
