//! Checks of the solvers against independent reference computations.

use dmimo_core::{
    build_rate_table, draw_channel, enumerate_candidates, enumerate_partitions, oracle_bruteforce,
    optimal_partition, score_partition, solve_constrained, transform_bkp, waterfill, zfbf_sum_rate,
    zfbf_weights, OverheadParams, RateMap, SimConfig,
};
use proptest::prelude::*;

/// p(n) by Euler's pentagonal-number recurrence.
fn partition_counts(max: usize) -> Vec<u64> {
    let mut p = vec![0i64; max + 1];
    p[0] = 1;
    for n in 1..=max {
        let mut total = 0i64;
        for j in 1.. {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > n {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            total += sign * p[n - g1];
            let g2 = j * (3 * j + 1) / 2;
            if g2 <= n {
                total += sign * p[n - g2];
            }
        }
        p[n] = total;
    }
    p.into_iter().map(|v| v as u64).collect()
}

/// Water level by bisection on `sum_i (mu - 1/g_i)^+ = K p`.
fn bisect_mu(gamma: &[f64], p: f64) -> f64 {
    let budget = gamma.len() as f64 * p;
    let fill = |mu: f64| gamma.iter().map(|g| (mu - 1.0 / g).max(0.0)).sum::<f64>();
    let mut lo = 0.0;
    let mut hi = gamma.iter().map(|g| 1.0 / g).fold(0.0, f64::max) + budget;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if fill(mid) < budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `E[log2(1 + P g)]` for `g ~ Exp(1)` by composite Simpson on `[0, 60]`.
fn siso_ergodic_rate(p: f64) -> f64 {
    let n = 600_000;
    let (a, b) = (0.0, 60.0);
    let h = (b - a) / n as f64;
    let f = |x: f64| (1.0 + p * x).log2() * (-x).exp();
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

fn synthetic_rates(k: usize, seed: u64) -> RateMap {
    // Roughly linear in size with a deterministic perturbation.
    (1..=k)
        .map(|s| {
            let wobble = ((seed.wrapping_mul(6364136223846793005).wrapping_add((s as u64).wrapping_mul(1442695040888963407))) >> 40) as f64
                / (1u64 << 24) as f64;
            (s, s as f64 * (3.0 + wobble))
        })
        .collect()
}

#[test]
fn partition_counts_match_pentagonal_recurrence() {
    let p = partition_counts(20);
    assert_eq!(p[4], 5);
    assert_eq!(p[10], 42);
    for (k, &expected) in p.iter().enumerate().skip(1) {
        let n = enumerate_partitions(k).unwrap().len() as u64;
        assert_eq!(n, expected, "k = {k}");
        let elements = transform_bkp(k, &synthetic_rates(k, 1)).unwrap();
        let candidates = enumerate_candidates(&elements, k, &OverheadParams::quadratic(100).unwrap()).unwrap();
        assert_eq!(candidates.len() as u64, expected, "candidates for k = {k}");
    }
}

#[test]
fn waterfill_two_user_example_matches_bisection() {
    let gamma = [10.0, 0.01];
    let wf = waterfill(&gamma, 1.0).unwrap();
    assert!((wf.mu - bisect_mu(&gamma, 1.0)).abs() <= 1e-10);
    assert_eq!(wf.tx_power[1] == 0.0, wf.mu <= 100.0);
}

#[test]
fn sum_rate_equals_log_water_level_on_active_set() {
    let h = draw_channel(4, 2024).unwrap();
    let sol = zfbf_sum_rate(&h, 10.0).unwrap();
    let direct: f64 = sol.gamma.iter().filter(|g| sol.mu * **g > 1.0).map(|g| (sol.mu * g).log2()).sum();
    assert!((sol.sum_rate - direct).abs() <= 1e-9);
}

#[test]
fn siso_mean_rate_matches_integral() {
    for snr_db in [0.0, 10.0, 20.0] {
        let p = 10f64.powf(snr_db / 10.0);
        let cfg = SimConfig { k_max: 1, snr_db: vec![snr_db], trials: 4000, base_seed: 99, ..SimConfig::default() };
        let table = build_rate_table(&cfg).unwrap();
        let e = table.entry(1, snr_db).unwrap();
        let exact = siso_ergodic_rate(p);
        assert!((e.mean - exact).abs() <= 3.0 * e.stderr, "P={p}: {} vs {exact} (se {})", e.mean, e.stderr);
    }
}

#[test]
fn solver_matches_bruteforce_on_synthetic_rates() {
    for k in 1..=10 {
        for seed in 0..3 {
            let rates = synthetic_rates(k, seed);
            for t in [5, 10, 30, 100, 1000] {
                let oh = OverheadParams::quadratic(t).unwrap();
                let candidates = enumerate_candidates(&transform_bkp(k, &rates).unwrap(), k, &oh).unwrap();
                for i in 0..=20 {
                    let alpha = i as f64 * 0.05;
                    let fast = solve_constrained(&candidates, alpha).unwrap();
                    assert_eq!(fast, oracle_bruteforce(k, &rates, &oh, alpha).unwrap(), "k={k} t={t} a={alpha}");
                }
            }
        }
    }
}

#[test]
fn candidate_profit_matches_partition_score() {
    let oh = OverheadParams::new(2.0, 37).unwrap();
    for k in 1..=12 {
        let rates = synthetic_rates(k, 5);
        let candidates = enumerate_candidates(&transform_bkp(k, &rates).unwrap(), k, &oh).unwrap();
        for (c, p) in candidates.iter().zip(enumerate_partitions(k).unwrap()) {
            assert_eq!(c.composition, p);
            let s = score_partition(&p, &rates, &oh).unwrap();
            assert!((c.profit - s.effective_rate).abs() <= 1e-12);
            assert!((c.weight - s.total_overhead).abs() <= 1e-12);
        }
    }
}

#[test]
fn inactive_constraint_recovers_exhaustive_optimum() {
    let oh = OverheadParams::quadratic(1_000_000).unwrap();
    for k in 1..=8 {
        let rates = synthetic_rates(k, 11);
        let constrained = oracle_bruteforce(k, &rates, &oh, 1.0).unwrap().chosen.unwrap();
        let (best, _) = optimal_partition(k, &rates, &oh).unwrap();
        assert_eq!(constrained.composition, best.partition);
        assert_eq!(constrained.profit, best.effective_rate);
    }
}

#[test]
fn best_rate_non_decreasing_in_frame_length() {
    for k in [3, 6, 9] {
        let rates = synthetic_rates(k, 3);
        let mut prev = 0.0;
        for t in [1, 2, 5, 10, 20, 50, 100, 500, 5000] {
            let (best, ranked) = optimal_partition(k, &rates, &OverheadParams::quadratic(t).unwrap()).unwrap();
            assert!(best.effective_rate >= prev);
            assert!(ranked.iter().all(|s| s.effective_rate <= best.effective_rate));
            prev = best.effective_rate;
        }
    }
}

#[test]
fn superadditive_rates_favour_full_network_for_long_frames() {
    let rates: RateMap = (1..=7).map(|s| (s, (s * s) as f64)).collect();
    let (best, _) = optimal_partition(7, &rates, &OverheadParams::quadratic(1_000_000).unwrap()).unwrap();
    assert_eq!(best.partition.parts(), vec![7]);
}

fn gains() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(1e-3f64..1e3, 1..10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn waterfill_agrees_with_bisection(gamma in gains(), p in 1e-2f64..1e3) {
        let wf = waterfill(&gamma, p).unwrap();
        let mu = bisect_mu(&gamma, p);
        prop_assert!((wf.mu - mu).abs() <= 1e-10 * mu.max(1.0));
        let total: f64 = wf.tx_power.iter().sum();
        let budget = gamma.len() as f64 * p;
        prop_assert!((total - budget).abs() <= 1e-9 * budget);
        for ((s, q), g) in wf.snr.iter().zip(&wf.tx_power).zip(&gamma) {
            prop_assert!(*s >= 0.0 && *q >= 0.0);
            prop_assert!((s - q * g).abs() <= 1e-9 * s.max(1.0));
        }
    }

    #[test]
    fn more_power_raises_water_level(gamma in gains(), p in 1e-2f64..1e2, boost in 1.01f64..10.0) {
        let lo = waterfill(&gamma, p).unwrap();
        let hi = waterfill(&gamma, p * boost).unwrap();
        let rate = |s: &[f64]| s.iter().map(|x| (1.0 + x).log2()).sum::<f64>();
        prop_assert!(hi.mu > lo.mu);
        prop_assert!(rate(&hi.snr) >= rate(&lo.snr));
    }

    #[test]
    fn better_channels_never_hurt(gamma in gains(), p in 1e-2f64..1e2, c in 1.0f64..10.0) {
        let base = waterfill(&gamma, p).unwrap();
        let scaled: Vec<f64> = gamma.iter().map(|g| g * c).collect();
        let better = waterfill(&scaled, p).unwrap();
        let rate = |s: &[f64]| s.iter().map(|x| (1.0 + x).log2()).sum::<f64>();
        prop_assert!(rate(&better.snr) >= rate(&base.snr) - 1e-12);
    }

    #[test]
    fn weights_null_the_interference(k in 1usize..10, seed in any::<u64>()) {
        let h = draw_channel(k, seed).unwrap();
        if let Ok(w) = zfbf_weights(&h) {
            let prod = h.matrix() * w;
            for r in 0..k {
                for c in 0..k {
                    let target = if r == c { 1.0 } else { 0.0 };
                    prop_assert!((prod[(r, c)].re - target).hypot(prod[(r, c)].im) <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn solutions_are_deterministic(k in 1usize..8, seed in any::<u64>(), p in 0.1f64..1e3) {
        let a = zfbf_sum_rate(&draw_channel(k, seed).unwrap(), p);
        let b = zfbf_sum_rate(&draw_channel(k, seed).unwrap(), p);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn relaxing_threshold_never_hurts(k in 1usize..9, seed in 0u64..50, t in 5u64..400) {
        let rates = synthetic_rates(k, seed);
        let oh = OverheadParams::quadratic(t).unwrap();
        let candidates = enumerate_candidates(&transform_bkp(k, &rates).unwrap(), k, &oh).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=20 {
            let sol = solve_constrained(&candidates, i as f64 * 0.05).unwrap();
            let profit = sol.chosen.map_or(f64::NEG_INFINITY, |c| c.profit);
            prop_assert!(profit >= prev);
            prev = profit;
        }
    }
}
