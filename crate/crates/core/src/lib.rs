//! Effective sum-rate of distributed MIMO (D-MIMO) networks under joint
//! zero-forcing beamforming, and overhead-aware orthogonal partitioning.
//!
//! The crate is organised bottom-up:
//!
//! * [`channel`]: Rayleigh channel draws, ZF weights, water-filling, sum-rate.
//! * [`overhead`]: the `K^r` overhead law and per-group frame fractions.
//! * [`partition`]: integer partitions of `K` and exhaustive optimal partitioning.
//! * [`knapsack`]: the overhead-constrained problem solved as a zero-one knapsack.
//! * [`simulation`]: Monte Carlo rate tables and the parameter sweeps.

pub mod channel;
pub mod error;
pub mod knapsack;
pub mod overhead;
pub mod partition;
pub mod simulation;

pub use channel::{
    draw_channel, waterfill, zfbf_sum_rate, zfbf_weights, BeamformingSolution, ChannelRealization,
    WaterFill, DEFAULT_CONDITION_LIMIT,
};
pub use error::{Error, Result};
pub use knapsack::{
    enumerate_candidates, oracle_bruteforce, solve_constrained, transform_bkp, BasicElement,
    ConstrainedSolution, KnapsackCandidate, solve_overhead_constrained, ORACLE_MAX_K,
};
pub use overhead::{frame_split, full_network_alpha, scaling, FrameSplit, OverheadParams};
pub use partition::{
    enumerate_partitions, enumerate_partitions_with_limit, optimal_partition, score_partition,
    Partition, PartitionScore, RateMap, DEFAULT_MAX_K,
};
pub use simulation::{
    build_rate_table, snr_db_to_power, sweep_aps, sweep_cct, sweep_mao, ApsRow, CctRow, MaoRow,
    APS_REFERENCE, CCT_REFERENCE,
    RateEntry, RateTable, SimConfig,
};
