//! Physical-layer laboratory for ambient backscatter under reactive jamming.
//!
//! A jammer and a transmitter act as ambient RF sources, a passive tag
//! reflects (or absorbs) their signals to send differentially encoded bits,
//! and an `M`-antenna receiver decodes them. The crate provides:
//!
//! * [`channel`]: Rayleigh-fading draws and synthesis of received frames.
//! * [`coding`]: frame layout (pilots + data) and modulo-2 differential coding.
//! * [`ml`]: the maximum-likelihood detector built on the true covariances.
//! * [`capacity`]: Monte-Carlo estimation of the maximum achievable backscatter rate.
//! * [`dl`]: pilot-whitened covariance features and an LSTM classifier trained
//!   with BPTT and Adam.
//! * [`linalg`]: the small dense complex-matrix kernel the rest is built on.
//!
//! The crate is `no_std` (with `alloc`). The default `std` feature only
//! switches math routines and the GEMM kernel to their faster std variants.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod capacity;
pub mod channel;
pub mod coding;
pub mod dl;
mod error;
pub mod linalg;
mod math;
pub mod ml;
pub mod rng;
pub mod stats;

pub use error::Error;
pub use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;
