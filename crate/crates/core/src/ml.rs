//! Maximum-likelihood symbol detection with known channel statistics.
//!
//! Conditioned on the tag state, each received vector is zero-mean CSCG with
//! covariance `K₀` (absorbing) or `K₁` (reflecting). Over a backscatter symbol
//! the log-likelihood ratio reduces to comparing
//! `Σₙ yₙᴴ (K₀⁻¹ − K₁⁻¹) yₙ` with `N · ln(|K₁| / |K₀|)`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channel::{ChannelRealization, ReceivedBlock, SystemConfig};
use crate::coding::{diff_decode, REFERENCE_SYMBOL};
use crate::linalg::{quad_form_unchecked, CMatrix};
use crate::math;
use crate::{Error, Result};

pub use crate::channel::EffectiveChannels;

/// Class-conditional covariances with cached inverses and log-determinants.
#[derive(Debug, Clone)]
pub struct CovariancePair {
    k0: CMatrix,
    k1: CMatrix,
    k0_inv: CMatrix,
    k1_inv: CMatrix,
    log_det0: f64,
    log_det1: f64,
    inv_diff: CMatrix,
}

impl CovariancePair {
    pub fn new(k0: CMatrix, k1: CMatrix) -> Result<Self> {
        if !k0.is_square() || !k1.is_square() || k0.rows() != k1.rows() {
            return Err(Error::Dimension("covariances must be square and equal-sized"));
        }
        let k0_inv = k0.inverse()?;
        let k1_inv = k1.inverse()?;
        let log_det0 = k0.log_abs_det()?;
        let log_det1 = k1.log_abs_det()?;
        let inv_diff = &k0_inv - &k1_inv;
        Ok(CovariancePair {
            k0,
            k1,
            k0_inv,
            k1_inv,
            log_det0,
            log_det1,
            inv_diff,
        })
    }

    pub fn dim(&self) -> usize {
        self.k0.rows()
    }

    pub fn k0(&self) -> &CMatrix {
        &self.k0
    }

    pub fn k1(&self) -> &CMatrix {
        &self.k1
    }

    pub fn k(&self, class: u8) -> &CMatrix {
        if class == 0 {
            &self.k0
        } else {
            &self.k1
        }
    }

    pub fn k_inv(&self, class: u8) -> &CMatrix {
        if class == 0 {
            &self.k0_inv
        } else {
            &self.k1_inv
        }
    }

    /// `ln |K_class|`.
    pub fn log_det(&self, class: u8) -> f64 {
        if class == 0 {
            self.log_det0
        } else {
            self.log_det1
        }
    }

    /// Same pair with the two hypotheses exchanged.
    pub fn swapped(&self) -> Self {
        CovariancePair {
            k0: self.k1.clone(),
            k1: self.k0.clone(),
            k0_inv: self.k1_inv.clone(),
            k1_inv: self.k0_inv.clone(),
            log_det0: self.log_det1,
            log_det1: self.log_det0,
            inv_diff: self.inv_diff.scale(Complex64::new(-1.0, 0.0)),
        }
    }

    /// `ln p(y | e = class)` using the cached factors. `y` must have length `M`.
    pub fn log_pdf(&self, y: &[Complex64], class: u8) -> f64 {
        debug_assert_eq!(y.len(), self.dim());
        let q = quad_form_unchecked(y, self.k_inv(class)).re;
        -(self.dim() as f64) * math::ln(math::PI) - self.log_det(class) - q
    }
}

/// `K₀ = h₁h₁ᴴ + h₃h₃ᴴ + I` and `K₁ = (h₁+h₂)(h₁+h₂)ᴴ + (h₃+h₄)(h₃+h₄)ᴴ + I`.
pub fn covariance_matrices(ch: &ChannelRealization, cfg: &SystemConfig) -> Result<CovariancePair> {
    if ch.antennas() != cfg.antennas {
        return Err(Error::Dimension("channel antenna count differs from config"));
    }
    let h = EffectiveChannels::new(cfg, ch);
    let m = cfg.antennas;
    let mut k0 = CMatrix::identity(m);
    k0.add_outer_scaled(&h.h1, 1.0)?;
    k0.add_outer_scaled(&h.h3, 1.0)?;
    let t: Vec<Complex64> = h.h1.iter().zip(&h.h2).map(|(a, b)| a + b).collect();
    let j: Vec<Complex64> = h.h3.iter().zip(&h.h4).map(|(a, b)| a + b).collect();
    let mut k1 = CMatrix::identity(m);
    k1.add_outer_scaled(&t, 1.0)?;
    k1.add_outer_scaled(&j, 1.0)?;
    CovariancePair::new(k0, k1)
}

/// Zero-mean CSCG log-density `−M ln π − ln|K| − yᴴK⁻¹y`.
pub fn log_pdf(y: &[Complex64], k: &CMatrix) -> Result<f64> {
    if !k.is_square() || k.rows() != y.len() {
        return Err(Error::Dimension("log_pdf shape mismatch"));
    }
    let inv = k.inverse()?;
    let q = quad_form_unchecked(y, &inv).re;
    Ok(-(y.len() as f64) * math::ln(math::PI) - k.log_abs_det()? - q)
}

/// Left and right side of the log-domain decision rule for one symbol:
/// `(Σₙ yₙᴴ(K₀⁻¹−K₁⁻¹)yₙ, N·ln(|K₁|/|K₀|))`.
pub fn decision_statistic(samples: &CMatrix, pair: &CovariancePair) -> Result<(f64, f64)> {
    if samples.cols() != pair.dim() {
        return Err(Error::Dimension("symbol samples do not match covariance size"));
    }
    let stat: f64 = (0..samples.rows())
        .map(|n| quad_form_unchecked(samples.row(n), &pair.inv_diff).re)
        .sum();
    let threshold = samples.rows() as f64 * (pair.log_det1 - pair.log_det0);
    Ok((stat, threshold))
}

/// Decides the tag state of one `N × M` symbol; an exact tie resolves to 0.
pub fn detect_symbol(samples: &CMatrix, pair: &CovariancePair) -> Result<u8> {
    let (stat, threshold) = decision_statistic(samples, pair)?;
    Ok(u8::from(stat > threshold))
}

/// Per-symbol tag-state decisions for a whole frame.
pub fn detect_states(block: &ReceivedBlock, pair: &CovariancePair) -> Result<Vec<u8>> {
    block.symbols.iter().map(|s| detect_symbol(s, pair)).collect()
}

/// Detects every symbol and differentially decodes from the frame reference.
/// Returns all `I` bits, pilots included.
pub fn detect_frame(block: &ReceivedBlock, pair: &CovariancePair) -> Result<Vec<u8>> {
    let states = detect_states(block, pair)?;
    diff_decode(&states, REFERENCE_SYMBOL)
}
