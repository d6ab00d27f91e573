//! Pilot-based preprocessing for the learned detector.
//!
//! Each symbol's `N × M` samples are reduced to the sample covariance `C`,
//! which is then right-multiplied by the inverses of the pilot-estimated
//! class covariances `K̃₀`, `K̃₁`. The two resulting `M × M` matrices are
//! flattened row-major (`C̃₀` first) into `2M²` steps of
//! `(real, imaginary, modulus)`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channel::ReceivedBlock;
use crate::coding::BackscatterFrame;
use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Values per sequence step: real part, imaginary part, modulus.
pub const FEATURE_DIM: usize = 3;

/// `(1/N) Σₙ yₙyₙᴴ` over the rows of an `N × M` symbol.
pub fn sample_covariance(samples: &CMatrix) -> CMatrix {
    let (n, m) = (samples.rows(), samples.cols());
    let mut c = CMatrix::zeros(m, m);
    if n == 0 {
        return c;
    }
    let w = 1.0 / n as f64;
    for r in 0..n {
        c.add_outer_scaled(samples.row(r), w)
            .expect("square accumulator matches row length");
    }
    c
}

/// Pilot-estimated class covariances and their inverses.
#[derive(Debug, Clone)]
pub struct PilotCovariances {
    pub k0: CMatrix,
    pub k1: CMatrix,
    pub k0_inv: CMatrix,
    pub k1_inv: CMatrix,
    /// Pilot symbols that fell in each tag-state class.
    pub counts: [usize; 2],
}

impl PilotCovariances {
    pub fn from_matrices(k0: CMatrix, k1: CMatrix, counts: [usize; 2]) -> Result<Self> {
        let k0_inv = k0.inverse()?;
        let k1_inv = k1.inverse()?;
        Ok(PilotCovariances {
            k0,
            k1,
            k0_inv,
            k1_inv,
            counts,
        })
    }
}

/// `K̃_e = (1/(|Pₑ|·N)) Σ_{i∈Pₑ} Σₙ yₙ⁽ⁱ⁾yₙ⁽ⁱ⁾ᴴ + I` where `Pₑ` are the pilot
/// positions whose *encoded* tag state is `e`. Only the pilot part of
/// `frame` is read.
pub fn pilot_covariances(block: &ReceivedBlock, frame: &BackscatterFrame) -> Result<PilotCovariances> {
    let pilots = frame.pilot_count;
    if pilots < 2 {
        return Err(Error::Frame("at least two pilots are required"));
    }
    if block.symbols.len() < pilots || frame.encoded.len() < pilots {
        return Err(Error::Dimension("block shorter than the pilot block"));
    }
    let m = block.symbols[0].cols();
    let mut acc = [CMatrix::zeros(m, m), CMatrix::zeros(m, m)];
    let mut counts = [0usize; 2];
    let mut samples = [0usize; 2];
    for (sym, &e) in block.symbols[..pilots].iter().zip(frame.pilot_encoded()) {
        if sym.cols() != m {
            return Err(Error::Dimension("inconsistent antenna count in block"));
        }
        let class = usize::from(e);
        counts[class] += 1;
        samples[class] += sym.rows();
        for r in 0..sym.rows() {
            acc[class].add_outer_scaled(sym.row(r), 1.0)?;
        }
    }
    let eye = CMatrix::identity(m);
    let mut est = [CMatrix::zeros(0, 0), CMatrix::zeros(0, 0)];
    for class in 0..2 {
        if counts[class] == 0 || samples[class] == 0 {
            return Err(Error::PilotDegenerate { class: class as u8 });
        }
        let scale = Complex64::new(1.0 / samples[class] as f64, 0.0);
        est[class] = &acc[class].scale(scale) + &eye;
    }
    let [k0, k1] = est;
    PilotCovariances::from_matrices(k0, k1, counts)
}

/// `(C·K̃₀⁻¹, C·K̃₁⁻¹)`.
pub fn whiten(c: &CMatrix, pilots: &PilotCovariances) -> Result<(CMatrix, CMatrix)> {
    Ok((c.matmul(&pilots.k0_inv)?, c.matmul(&pilots.k1_inv)?))
}

/// Input sequence for the LSTM: one `[re, im, |·|]` triple per step.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSequence {
    pub steps: Vec<[f64; FEATURE_DIM]>,
}

impl FeatureSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

pub fn featurize(c0: &CMatrix, c1: &CMatrix) -> Result<FeatureSequence> {
    if !c0.is_square() || c0.rows() != c1.rows() || c0.cols() != c1.cols() {
        return Err(Error::Dimension("whitened matrices must be square and equal-sized"));
    }
    let steps = c0
        .as_slice()
        .iter()
        .chain(c1.as_slice())
        .map(|z| [z.re, z.im, z.norm()])
        .collect();
    Ok(FeatureSequence { steps })
}

/// Full preprocessing of one symbol.
pub fn symbol_features(samples: &CMatrix, pilots: &PilotCovariances) -> Result<FeatureSequence> {
    let c = sample_covariance(samples);
    let (c0, c1) = whiten(&c, pilots)?;
    featurize(&c0, &c1)
}
