//! Overhead scaling law and frame-fraction arithmetic.
//!
//! A frame of `T` symbols is shared by `D` orthogonal groups. A group of size
//! `k` spends `L(k) = k^r` symbols on overhead, i.e. a fraction `k^r / T` of
//! the whole frame, and keeps `1/D - k^r/T` of the frame for data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverheadParams {
    /// Overhead exponent `r > 0`.
    pub r: f64,
    /// Frame length in symbols, `T >= 1`.
    pub t: u64,
}

impl OverheadParams {
    pub fn new(r: f64, t: u64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidInput(format!("overhead exponent must be > 0, got {r}")));
        }
        if t == 0 {
            return Err(Error::InvalidInput("frame length must be at least 1 symbol".into()));
        }
        Ok(Self { r, t })
    }

    /// Quadratic overhead growth (`r = 2`).
    pub fn quadratic(t: u64) -> Result<Self> {
        Self::new(2.0, t)
    }

    /// Unclipped overhead fraction `k^r / T` of one group of size `k`.
    pub(crate) fn group_overhead(&self, k: usize) -> f64 {
        (k as f64).powf(self.r) / self.t as f64
    }
}

/// How a single group's share of the frame is split between data and overhead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameSplit {
    pub data_fraction: f64,
    pub overhead_fraction: f64,
    pub group_size: usize,
    pub num_groups: usize,
}

fn check_size(k: usize, what: &str) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidSize(format!("{what} must be at least 1")));
    }
    Ok(())
}

/// Overhead symbols `L(k) = k^r`.
pub fn scaling(params: &OverheadParams, k: usize) -> Result<f64> {
    check_size(k, "group size")?;
    Ok((k as f64).powf(params.r))
}

/// Overhead fraction of an unpartitioned network, `min(K^r / T, 1)`.
pub fn full_network_alpha(params: &OverheadParams, k: usize) -> Result<f64> {
    check_size(k, "network size")?;
    Ok(params.group_overhead(k).min(1.0))
}

/// Data and overhead fractions of one group of `group_size` among
/// `num_groups` groups. A group whose overhead exceeds its slot is starved:
/// its data fraction is clipped to zero.
pub fn frame_split(params: &OverheadParams, group_size: usize, num_groups: usize) -> Result<FrameSplit> {
    check_size(group_size, "group size")?;
    check_size(num_groups, "number of groups")?;
    let overhead = params.group_overhead(group_size);
    Ok(FrameSplit {
        data_fraction: (1.0 / num_groups as f64 - overhead).max(0.0),
        overhead_fraction: overhead.min(1.0),
        group_size,
        num_groups,
    })
}
