//! Single-group channel model and zero-forcing beamforming.
//!
//! A group of `K` single-antenna access points serves `K` single-antenna
//! clients. Row `k` of the channel matrix is the gain vector `h_k` seen by
//! client `k`; column `i` of the weight matrix is the precoder `w_i`.

use nalgebra::{Complex, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

/// Channels whose 1-norm condition number exceeds this are rejected.
pub const DEFAULT_CONDITION_LIMIT: f64 = 1e12;

/// One block-fading draw of a `K x K` group channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    k: usize,
    h: DMatrix<Complex64>,
    seed_tag: Option<u64>,
}

impl ChannelRealization {
    /// Wraps an explicit gain matrix. The matrix must be square, non-empty
    /// and finite.
    pub fn from_matrix(h: DMatrix<Complex64>) -> Result<Self> {
        if h.nrows() == 0 || h.nrows() != h.ncols() {
            return Err(Error::InvalidSize(format!(
                "channel matrix must be square and non-empty, got {}x{}",
                h.nrows(),
                h.ncols()
            )));
        }
        if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("channel matrix has non-finite entries".into()));
        }
        Ok(Self { k: h.nrows(), h, seed_tag: None })
    }

    /// Diagonal channel with real gains, mostly useful for hand-checked cases.
    pub fn from_diagonal(gains: &[f64]) -> Result<Self> {
        let n = gains.len();
        let h = DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(gains[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::from_matrix(h)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.h
    }

    /// Seed that produced this draw, `None` for hand-built channels.
    pub fn seed_tag(&self) -> Option<u64> {
        self.seed_tag
    }
}

/// Draws an i.i.d. Rayleigh channel: every entry is `CN(0, 1)`.
///
/// The generator is ChaCha8 seeded with [`SeedableRng::seed_from_u64`], so a
/// given `(k, seed)` always yields the same matrix on every platform.
pub fn draw_channel(k: usize, seed: u64) -> Result<ChannelRealization> {
    if k == 0 {
        return Err(Error::InvalidSize("group size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut entries = Vec::with_capacity(k * k);
    for _ in 0..k * k {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        entries.push(Complex64::new(re * scale, im * scale));
    }
    Ok(ChannelRealization { k, h: DMatrix::from_row_slice(k, k, &entries), seed_tag: Some(seed) })
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Zero-forcing weights `W = H^+`, which for a square invertible channel is
/// the inverse, so `h_k . w_j = 0` for `k != j` and `h_k . w_k = 1`.
pub fn zfbf_weights(h: &ChannelRealization) -> Result<DMatrix<Complex64>> {
    zfbf_weights_with_limit(h, DEFAULT_CONDITION_LIMIT)
}

pub fn zfbf_weights_with_limit(
    h: &ChannelRealization,
    condition_limit: f64,
) -> Result<DMatrix<Complex64>> {
    let w = h
        .h
        .clone()
        .try_inverse()
        .ok_or(Error::IllConditioned { condition: f64::INFINITY, limit: condition_limit })?;
    let condition = one_norm(&h.h) * one_norm(&w);
    if !condition.is_finite() || condition > condition_limit {
        return Err(Error::IllConditioned { condition, limit: condition_limit });
    }
    Ok(w)
}

/// Result of active-set water-filling over a set of effective gains.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterFill {
    pub mu: f64,
    /// Post-beamforming SNR of each user, `(mu * gamma_i - 1)^+`.
    pub snr: Vec<f64>,
    /// Transmit power of each user, `(mu - 1/gamma_i)^+`.
    pub tx_power: Vec<f64>,
}

/// Water-filling of a total budget `K * p` over `K` parallel channels with
/// gains `gamma`.
///
/// The water level is the exact closed form: inverse gains are sorted
/// ascending and the active set grows while the candidate level still
/// exceeds the next inverse gain.
pub fn waterfill(gamma: &[f64], p: f64) -> Result<WaterFill> {
    if gamma.is_empty() {
        return Err(Error::InvalidInput("gain vector is empty".into()));
    }
    if let Some(g) = gamma.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(Error::InvalidInput(format!("gains must be positive and finite, got {g}")));
    }
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidInput(format!("power must be positive and finite, got {p}")));
    }

    let k = gamma.len();
    let budget = k as f64 * p;
    let mut inverse: Vec<f64> = gamma.iter().map(|g| 1.0 / g).collect();
    inverse.sort_by(f64::total_cmp);

    let mut floor_sum = 0.0;
    let mut mu = 0.0;
    for active in 1..=k {
        floor_sum += inverse[active - 1];
        mu = (budget + floor_sum) / active as f64;
        if active == k || mu <= inverse[active] {
            break;
        }
    }

    let tx_power = gamma.iter().map(|g| (mu - 1.0 / g).max(0.0)).collect();
    let snr = gamma.iter().map(|g| (mu * g - 1.0).max(0.0)).collect();
    Ok(WaterFill { mu, snr, tx_power })
}

/// Full ZFBF solution for one group.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingSolution {
    /// Column `i` is the precoder `w_i`.
    pub w: DMatrix<Complex64>,
    /// Effective gains `1 / ||w_i||^2`.
    pub gamma: Vec<f64>,
    pub mu: f64,
    pub snr: Vec<f64>,
    pub tx_power: Vec<f64>,
    /// Bits/s/Hz.
    pub sum_rate: f64,
}

/// ZF weights, effective gains, water-filling and the resulting sum-rate
/// `sum_i log2(1 + snr_i)` for per-SISO power `p`.
pub fn zfbf_sum_rate(h: &ChannelRealization, p: f64) -> Result<BeamformingSolution> {
    let w = zfbf_weights(h)?;
    let gamma: Vec<f64> = w.column_iter().map(|col| 1.0 / col.norm_squared()).collect();
    let WaterFill { mu, snr, tx_power } = waterfill(&gamma, p)?;
    let sum_rate = snr.iter().map(|s| (1.0 + s).log2()).sum();
    Ok(BeamformingSolution { w, gamma, mu, snr, tx_power, sum_rate })
}
