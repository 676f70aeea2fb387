//! Bi-AWGN channel model, LLR computation, and Shannon limits.
//!
//! The channel is `Y = X + N` with `X` uniform on {−1, +1} and
//! `N ~ N(0, σ²)`; the operating point is `Es/N0 = 1/(2σ²)`. Soft-decision
//! capacity is the bi-AWGN mutual information computed by Gauss–Hermite
//! quadrature; hard-decision capacity is that of the induced BSC with
//! crossover `Q(1/σ)`.

use gauss_quad::GaussHermite;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::sync::OnceLock;
use thiserror::Error;

/// Errors from capacity inversion.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("rate {0} outside (0, 1)")]
    RateOutOfRange(f64),
    #[error("bisection failed to bracket rate {rate} in [{lo}, {hi}] dB")]
    BracketFailure { rate: f64, lo: f64, hi: f64 },
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x), evaluated through the
/// complementary error function (relative accuracy near machine precision,
/// no series approximations).
#[inline]
pub fn qfunc(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Inverse of [`qfunc`] by bisection (p in (0, 1)).
pub fn qfunc_inv(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "qfunc_inv requires p in (0,1)");
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if qfunc(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Binary entropy in bits; h2(0) = h2(1) = 0.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// A bi-AWGN operating point plus the seed used when sampling noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub esno_db: f64,
    pub seed: u64,
}

impl ChannelParams {
    pub fn new(esno_db: f64, seed: u64) -> Self {
        Self { esno_db, seed }
    }

    /// Linear Es/N0.
    #[inline]
    pub fn esno_linear(&self) -> f64 {
        10f64.powf(self.esno_db / 10.0)
    }

    /// Noise standard deviation σ with Es/N0 = 1/(2σ²).
    #[inline]
    pub fn sigma(&self) -> f64 {
        (1.0 / (2.0 * self.esno_linear())).sqrt()
    }

    /// Hard-decision crossover probability Q(1/σ).
    #[inline]
    pub fn crossover(&self) -> f64 {
        qfunc(1.0 / self.sigma())
    }

    /// The Es/N0 whose hard-decision crossover equals `p`.
    pub fn esno_db_for_crossover(p: f64) -> f64 {
        let x = qfunc_inv(p); // x = 1/σ
        10.0 * (x * x / 2.0).log10()
    }
}

/// Transmits a ±1 vector over the channel: `y = x + n`, noise seeded from
/// `params.seed`.
pub fn transmit(bits: &[i8], params: &ChannelParams) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    transmit_with_rng(bits, params.sigma(), &mut rng)
}

/// Transmit using a caller-managed RNG (one RNG per frame in the harness).
pub fn transmit_with_rng(bits: &[i8], sigma: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let normal = Normal::new(0.0, sigma).expect("sigma > 0");
    bits.iter()
        .map(|&x| f64::from(x) + normal.sample(rng))
        .collect()
}

/// Channel output for the all-zero codeword (all −1 transmitted), written
/// into `y` to avoid reallocation in the Monte Carlo loop.
pub fn transmit_all_zero_into(y: &mut [f64], sigma: f64, rng: &mut ChaCha8Rng) {
    let normal = Normal::new(0.0, sigma).expect("sigma > 0");
    for yi in y.iter_mut() {
        *yi = -1.0 + normal.sample(rng);
    }
}

/// Channel LLRs `L = 2y/σ²`; positive sign favors x = +1.
pub fn llr(y: &[f64], params: &ChannelParams) -> Vec<f64> {
    let scale = 2.0 / (params.sigma() * params.sigma());
    y.iter().map(|&yi| scale * yi).collect()
}

/// Exact uncoded hard-decision BER: `Q(√(2·Es/N0))`.
pub fn uncoded_ber(esno_db: f64) -> f64 {
    qfunc((2.0 * 10f64.powf(esno_db / 10.0)).sqrt())
}

/// Capacity flavor: unquantized soft decision or hard decision (BSC).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityMode {
    Sd,
    Hd,
}

impl std::str::FromStr for CapacityMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sd" => Ok(Self::Sd),
            "hd" => Ok(Self::Hd),
            other => Err(format!("unknown capacity mode {other:?} (sd|hd)")),
        }
    }
}

const GH_NODES: usize = 64;

fn gauss_hermite() -> &'static GaussHermite {
    static GH: OnceLock<GaussHermite> = OnceLock::new();
    GH.get_or_init(|| {
        GaussHermite::new(std::num::NonZeroUsize::new(GH_NODES).expect("nonzero node count"))
    })
}

/// log2(1 + e^u) without overflow.
fn log2_1p_exp(u: f64) -> f64 {
    if u > 35.0 {
        u / std::f64::consts::LN_2
    } else {
        u.exp().ln_1p() / std::f64::consts::LN_2
    }
}

/// Channel capacity in bits per channel use at the given Es/N0.
///
/// `Sd`: bi-AWGN mutual information `1 − E[log2(1 + e^(−L))]` under
/// `L | x=+1 ~ N(2/σ², 4/σ²)`, by 64-node Gauss–Hermite quadrature.
/// `Hd`: `1 − h2(Q(1/σ))`.
pub fn capacity(esno_db: f64, mode: CapacityMode) -> f64 {
    let sigma = ChannelParams::new(esno_db, 0).sigma();
    match mode {
        CapacityMode::Sd => {
            let mu = 2.0 / (sigma * sigma);
            let std = 2.0 / sigma;
            let expect = gauss_hermite()
                .integrate(|t| log2_1p_exp(-(mu + std * std::f64::consts::SQRT_2 * t)))
                / std::f64::consts::PI.sqrt();
            (1.0 - expect).clamp(0.0, 1.0)
        }
        CapacityMode::Hd => 1.0 - binary_entropy(qfunc(1.0 / sigma)),
    }
}

/// Shannon limit: the Es/N0 (dB) at which `capacity` equals `rate`, by
/// bisection to `|capacity − rate| ≤ tol`.
pub fn inverse_capacity(rate: f64, mode: CapacityMode, tol: f64) -> Result<f64, ChannelError> {
    if !(0.0 < rate && rate < 1.0) {
        return Err(ChannelError::RateOutOfRange(rate));
    }
    let (mut lo, mut hi) = (-25.0f64, 25.0f64);
    if capacity(lo, mode) > rate || capacity(hi, mode) < rate {
        return Err(ChannelError::BracketFailure { rate, lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if capacity(mid, mode) < rate {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    let result = 0.5 * (lo + hi);
    debug_assert!((capacity(result, mode) - rate).abs() <= tol.max(1e-9));
    Ok(result)
}
