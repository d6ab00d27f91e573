//! Rayleigh-fading channel model and received-signal synthesis.
//!
//! The receiver sees, at antenna `m` and RF-source instant `n`,
//!
//! ```text
//! y = f_t·√α_tr·s_t + f_j·√α_jr·s_j + f_b·e·(g_t·√α_tb·s_t + g_j·√α_jb·s_j) + σ
//! ```
//!
//! where the transmitter and jammer symbols `s_t`, `s_j`, the noise `σ` and
//! every fading coefficient are standard circularly-symmetric complex
//! Gaussians, and `e ∈ {0, 1}` is the tag state held for `N` instants.
//! All SNRs are linear and referred to unit noise power; the backscatter
//! SNRs are `α_tb = α̃_t·α_tr` and `α_jb = α̃_j·α_jr`.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::CMatrix;
use crate::math;
use crate::{Error, Result};

/// Converts decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    math::powf(10.0, db / 10.0)
}

/// Scenario parameters. SNRs and gains are linear.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Receive antennas `M`.
    pub antennas: usize,
    /// RF-source symbols per backscatter symbol `N`.
    pub spreading: usize,
    /// Bits per backscatter frame `I`.
    pub frame_bits: usize,
    /// Pilot bits at the head of each frame `P`.
    pub pilot_bits: usize,
    /// Transmitter → receiver direct-link SNR.
    pub alpha_tr: f64,
    /// Jammer → receiver direct-link SNR.
    pub alpha_jr: f64,
    /// Relative gain of the transmitter → tag → receiver path.
    pub alpha_t_rel: f64,
    /// Relative gain of the jammer → tag → receiver path.
    pub alpha_j_rel: f64,
    /// Prior probability of bit 0.
    pub theta0: f64,
    pub seed: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            antennas: 10,
            spreading: 50,
            frame_bits: 100,
            pilot_bits: 20,
            alpha_tr: db_to_linear(5.0),
            alpha_jr: db_to_linear(7.0),
            alpha_t_rel: db_to_linear(-15.0),
            alpha_j_rel: db_to_linear(-15.0),
            theta0: 0.5,
            seed: 1,
        }
    }
}

impl SystemConfig {
    pub fn alpha_tb(&self) -> f64 {
        self.alpha_t_rel * self.alpha_tr
    }

    pub fn alpha_jb(&self) -> f64 {
        self.alpha_j_rel * self.alpha_jr
    }

    /// Data bits per frame, `I − P`.
    pub fn data_bits(&self) -> usize {
        self.frame_bits.saturating_sub(self.pilot_bits)
    }

    pub fn validate(&self) -> Result<()> {
        if self.antennas == 0 {
            return Err(Error::Domain("antennas must be at least 1"));
        }
        if self.spreading == 0 {
            return Err(Error::Domain("spreading factor must be at least 1"));
        }
        if self.frame_bits == 0 {
            return Err(Error::Domain("frame must hold at least one bit"));
        }
        if self.pilot_bits % 2 != 0 || self.pilot_bits >= self.frame_bits {
            return Err(Error::Domain("pilot count must be even and below the frame length"));
        }
        let gains = [self.alpha_tr, self.alpha_jr, self.alpha_t_rel, self.alpha_j_rel];
        if gains.iter().any(|g| !(*g >= 0.0) || !g.is_finite()) {
            return Err(Error::Domain("SNRs and gains must be finite and non-negative"));
        }
        if !(0.0..=1.0).contains(&self.theta0) {
            return Err(Error::Domain("theta0 must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// One draw of every fading coefficient; constant over a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub f_t: Vec<Complex64>,
    pub f_j: Vec<Complex64>,
    pub f_b: Vec<Complex64>,
    pub g_t: Complex64,
    pub g_j: Complex64,
}

impl ChannelRealization {
    pub fn antennas(&self) -> usize {
        self.f_t.len()
    }
}

/// Composite per-antenna channel vectors seen by the receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannels {
    /// Transmitter direct link, `f_t·√α_tr`.
    pub h1: Vec<Complex64>,
    /// Transmitter backscatter link, `g_t·f_b·√α_tb`.
    pub h2: Vec<Complex64>,
    /// Jammer direct link, `f_j·√α_jr`.
    pub h3: Vec<Complex64>,
    /// Jammer backscatter link, `g_j·f_b·√α_jb`.
    pub h4: Vec<Complex64>,
}

impl EffectiveChannels {
    pub fn new(cfg: &SystemConfig, ch: &ChannelRealization) -> Self {
        let (str_, sjr) = (math::sqrt(cfg.alpha_tr), math::sqrt(cfg.alpha_jr));
        let bt = ch.g_t * math::sqrt(cfg.alpha_tb());
        let bj = ch.g_j * math::sqrt(cfg.alpha_jb());
        EffectiveChannels {
            h1: ch.f_t.iter().map(|f| f * str_).collect(),
            h2: ch.f_b.iter().map(|f| f * bt).collect(),
            h3: ch.f_j.iter().map(|f| f * sjr).collect(),
            h4: ch.f_b.iter().map(|f| f * bj).collect(),
        }
    }
}

/// Received samples for a whole frame.
#[derive(Debug, Clone)]
pub struct ReceivedBlock {
    /// One `N × M` matrix per backscatter symbol; row `n` is `yₙ`.
    pub symbols: Vec<CMatrix>,
    pub config: SystemConfig,
    pub channel: ChannelRealization,
    /// Tag states used to generate the samples.
    pub encoded: Vec<u8>,
}

impl ReceivedBlock {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// One standard CSCG draw: real and imaginary parts `N(0, 1/2)`, real first.
#[inline]
pub fn cscg<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    const HALF_SQRT: f64 = core::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * HALF_SQRT, im * HALF_SQRT)
}

/// `count` i.i.d. standard CSCG samples.
pub fn sample_cscg<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<Complex64> {
    (0..count).map(|_| cscg(rng)).collect()
}

/// Friis-style average received power `(λ/4π)²·P·G_tx·G_rx / L^υ`.
pub fn link_budget(
    p_tx: f64,
    g_tx: f64,
    g_rx: f64,
    distance: f64,
    exponent: f64,
    wavelength: f64,
) -> Result<f64> {
    if [p_tx, g_tx, g_rx, distance, exponent, wavelength]
        .iter()
        .any(|x| !(*x > 0.0))
    {
        return Err(Error::Domain("link budget inputs must be positive"));
    }
    let kappa = (wavelength / (4.0 * math::PI)) * (wavelength / (4.0 * math::PI));
    Ok(kappa * p_tx * g_tx * g_rx / math::powf(distance, exponent))
}

/// Draws `f_t`, `f_j`, `f_b` (each length `M`) then `g_t`, `g_j`, in that order.
pub fn draw_channel<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ChannelRealization {
    let m = cfg.antennas;
    let f_t = sample_cscg(m, rng);
    let f_j = sample_cscg(m, rng);
    let f_b = sample_cscg(m, rng);
    let g_t = cscg(rng);
    let g_j = cscg(rng);
    ChannelRealization {
        f_t,
        f_j,
        f_b,
        g_t,
        g_j,
    }
}

/// Samples for one backscatter symbol as an `N × M` matrix.
///
/// Per instant the draws are `s_t`, `s_j`, then one noise sample per antenna.
pub fn received_symbol<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    ch: &ChannelRealization,
    e_bit: u8,
    rng: &mut R,
) -> Result<CMatrix> {
    if e_bit > 1 {
        return Err(Error::NonBinary { index: 0, value: e_bit });
    }
    if ch.antennas() != cfg.antennas {
        return Err(Error::Dimension("channel antenna count differs from config"));
    }
    let eff = EffectiveChannels::new(cfg, ch);
    Ok(symbol_from_effective(&eff, cfg.spreading, e_bit, rng))
}

fn symbol_from_effective<R: Rng + ?Sized>(
    eff: &EffectiveChannels,
    spreading: usize,
    e_bit: u8,
    rng: &mut R,
) -> CMatrix {
    let m = eff.h1.len();
    let reflect = e_bit == 1;
    let mut out = CMatrix::zeros(spreading, m);
    for n in 0..spreading {
        let s_t = cscg(rng);
        let s_j = cscg(rng);
        let row = out.row_mut(n);
        for (k, y) in row.iter_mut().enumerate() {
            let mut v = eff.h1[k] * s_t + eff.h3[k] * s_j;
            if reflect {
                v += eff.h2[k] * s_t + eff.h4[k] * s_j;
            }
            *y = v + cscg(rng);
        }
    }
    out
}

/// Received samples for a frame of tag states under one channel realization.
pub fn synthesize_frame<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    ch: &ChannelRealization,
    encoded_symbols: &[u8],
    rng: &mut R,
) -> Result<ReceivedBlock> {
    if encoded_symbols.len() != cfg.frame_bits {
        return Err(Error::Dimension("encoded symbol count differs from frame length"));
    }
    if let Some((index, &value)) = encoded_symbols.iter().enumerate().find(|(_, v)| **v > 1) {
        return Err(Error::NonBinary { index, value });
    }
    if ch.antennas() != cfg.antennas {
        return Err(Error::Dimension("channel antenna count differs from config"));
    }
    let eff = EffectiveChannels::new(cfg, ch);
    let symbols = encoded_symbols
        .iter()
        .map(|&e| symbol_from_effective(&eff, cfg.spreading, e, rng))
        .collect();
    Ok(ReceivedBlock {
        symbols,
        config: cfg.clone(),
        channel: ch.clone(),
        encoded: encoded_symbols.to_vec(),
    })
}
