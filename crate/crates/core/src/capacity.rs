//! Maximum achievable backscatter rate.
//!
//! For one received vector (`N = 1`) the mutual information between the tag
//! state and the observation is `H_b(θ₀) − E_y[H_b(ω₀(y))]`, where `ω₀` is
//! the posterior probability of state 0. No closed form exists, so the
//! expectation is estimated by Monte Carlo and the prior is optimised on a
//! grid. All density arithmetic happens in the log domain.
//!
//! Grid points share the same random draws (common random numbers): each
//! sample is a uniform `u` and a white vector `z`; for prior `θ₀` the state is
//! `e = 0` iff `u < θ₀`, and the observation is `y = L_e z` with
//! `L_e L_eᴴ = K_e`.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::channel::cscg;
use crate::linalg::CMatrix;
use crate::math;
use crate::ml::CovariancePair;
use crate::stats::mean_and_stderr;
use crate::{Error, Result};

/// Binary entropy in bits, with `0·log 0 = 0`.
pub fn binary_entropy(theta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Domain("probability outside [0, 1]"));
    }
    let term = |p: f64| if p > 0.0 { -p * math::log2(p) } else { 0.0 };
    Ok(term(theta) + term(1.0 - theta))
}

/// Binary entropy (bits) of the distribution with log-odds `d = ln(ω₁/ω₀)`.
fn entropy_from_log_odds(d: f64) -> f64 {
    if !d.is_finite() {
        return 0.0;
    }
    // a = −ln ω₀, b = −ln ω₁
    let t = math::ln_1p(math::exp(-d.abs()));
    let (a, b) = if d > 0.0 { (d + t, t) } else { (t, t - d) };
    (math::exp(-a) * a + math::exp(-b) * b) / core::f64::consts::LN_2
}

fn log_prior_odds(theta0: f64) -> f64 {
    // ln θ₁ − ln θ₀; the endpoints give ±∞
    math::ln(1.0 - theta0) - math::ln(theta0)
}

/// Posterior probability of state 0 given one received vector.
pub fn posterior_bit0(y: &[Complex64], theta0: f64, pair: &CovariancePair) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta0) {
        return Err(Error::Domain("theta0 outside [0, 1]"));
    }
    if y.len() != pair.dim() {
        return Err(Error::Dimension("observation length differs from covariance size"));
    }
    let lw0 = math::ln(theta0) + pair.log_pdf(y, 0);
    let lw1 = math::ln(1.0 - theta0) + pair.log_pdf(y, 1);
    if lw0 == f64::NEG_INFINITY && lw1 == f64::NEG_INFINITY || lw0.is_nan() || lw1.is_nan() {
        return Err(Error::DegenerateLikelihood);
    }
    if lw1 == f64::NEG_INFINITY {
        return Ok(1.0);
    }
    if lw0 == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if lw0 == lw1 {
        return Ok(0.5);
    }
    Ok(1.0 / (1.0 + math::exp(lw1 - lw0)))
}

/// Monte-Carlo estimate with its standard error, both in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Prior-independent Monte-Carlo draws: for each sample, the uniform used
/// to pick the state and the log-likelihood ratio `ln p₁(y) − ln p₀(y)`
/// evaluated at `y = L₀z` and at `y = L₁z`.
#[derive(Debug, Clone)]
pub struct LikelihoodDraws {
    uniform: Vec<f64>,
    llr: [Vec<f64>; 2],
}

impl LikelihoodDraws {
    pub fn sample<R: Rng + ?Sized>(pair: &CovariancePair, samples: usize, rng: &mut R) -> Result<Self> {
        let m = pair.dim();
        let factors = [pair.k0().cholesky()?, pair.k1().cholesky()?];
        let mut uniform = Vec::with_capacity(samples);
        let mut llr = [Vec::with_capacity(samples), Vec::with_capacity(samples)];
        let mut z = alloc::vec![Complex64::new(0.0, 0.0); m];
        let mut y = z.clone();
        for _ in 0..samples {
            uniform.push(rng.random::<f64>());
            for v in z.iter_mut() {
                *v = cscg(rng);
            }
            for (e, l) in factors.iter().enumerate() {
                lower_mul(l, &z, &mut y);
                llr[e].push(pair.log_pdf(&y, 1) - pair.log_pdf(&y, 0));
            }
        }
        Ok(LikelihoodDraws { uniform, llr })
    }

    pub fn len(&self) -> usize {
        self.uniform.len()
    }

    pub fn is_empty(&self) -> bool {
        self.uniform.is_empty()
    }

    /// Per-sample contributions `H_b(θ₀) − H_b(ω₀)` at prior `theta0`.
    fn terms(&self, theta0: f64) -> Vec<f64> {
        let prior_entropy = binary_entropy(theta0).unwrap_or(f64::NAN);
        let prior_odds = log_prior_odds(theta0);
        self.uniform
            .iter()
            .enumerate()
            .map(|(i, &u)| {
                let e = usize::from(u >= theta0);
                let llr = self.llr[e][i];
                if llr == 0.0 {
                    // uninformative draw: the posterior equals the prior
                    return 0.0;
                }
                prior_entropy - entropy_from_log_odds(llr + prior_odds)
            })
            .collect()
    }

    /// Mutual-information estimate at one prior.
    pub fn mutual_information(&self, theta0: f64) -> Result<MiEstimate> {
        if !(0.0..=1.0).contains(&theta0) {
            return Err(Error::Domain("theta0 outside [0, 1]"));
        }
        if self.is_empty() {
            return Err(Error::Domain("at least one Monte-Carlo sample is required"));
        }
        let (estimate, std_error) = mean_and_stderr(&self.terms(theta0));
        Ok(MiEstimate {
            estimate,
            std_error,
        })
    }
}

// y = L z for lower-triangular L
fn lower_mul(l: &CMatrix, z: &[Complex64], y: &mut [Complex64]) {
    for (r, out) in y.iter_mut().enumerate() {
        *out = l.row(r)[..=r].iter().zip(z).map(|(a, b)| a * b).sum();
    }
}

/// `I(e; y)` at prior `theta0`, estimated from `samples` draws.
pub fn mutual_information<R: Rng + ?Sized>(
    theta0: f64,
    pair: &CovariancePair,
    samples: usize,
    rng: &mut R,
) -> Result<MiEstimate> {
    if samples == 0 {
        return Err(Error::Domain("at least one Monte-Carlo sample is required"));
    }
    LikelihoodDraws::sample(pair, samples, rng)?.mutual_information(theta0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    /// Maximising prior of state 0.
    pub theta0_star: f64,
    /// Maximum achievable rate, bits per backscatter symbol.
    pub rate_bits: f64,
    pub mc_samples: usize,
    pub std_error: f64,
}

/// Interior grid `{step, 2·step, …, 1 − step}`.
pub fn prior_grid(grid_step: f64) -> Result<Vec<f64>> {
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(Error::Domain("grid step must lie in (0, 0.5]"));
    }
    let mut grid = Vec::new();
    let mut k = 1u32;
    loop {
        let theta = f64::from(k) * grid_step;
        if theta > 1.0 - grid_step + 1e-12 {
            break;
        }
        grid.push(theta);
        k += 1;
    }
    Ok(grid)
}

/// Grid search for the rate-maximising prior using common random numbers.
pub fn max_backscatter_rate<R: Rng + ?Sized>(
    pair: &CovariancePair,
    samples: usize,
    grid_step: f64,
    rng: &mut R,
) -> Result<RateEstimate> {
    let grid = prior_grid(grid_step)?;
    if samples == 0 {
        return Err(Error::Domain("at least one Monte-Carlo sample is required"));
    }
    let draws = LikelihoodDraws::sample(pair, samples, rng)?;
    max_over_grid(&draws, &grid)
}

/// Arg-max of the estimated mutual information over `grid` (first maximum wins).
pub fn max_over_grid(draws: &LikelihoodDraws, grid: &[f64]) -> Result<RateEstimate> {
    let mut best: Option<(f64, MiEstimate)> = None;
    for &theta in grid {
        let mi = draws.mutual_information(theta)?;
        if best.map_or(true, |(_, b)| mi.estimate > b.estimate) {
            best = Some((theta, mi));
        }
    }
    let (theta0_star, mi) = best.ok_or(Error::Domain("empty prior grid"))?;
    Ok(RateEstimate {
        theta0_star,
        rate_bits: mi.estimate,
        mc_samples: draws.len(),
        std_error: mi.std_error,
    })
}
