//! Adam with bias correction.

use super::lstm::LstmParams;
use crate::math::{powf, sqrt};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// One update of a flat parameter slice; `t` counts from 1.
pub fn adam_step(params: &mut [f64], grads: &[f64], m: &mut [f64], v: &mut [f64], t: u64, cfg: &AdamConfig) {
    assert!(t >= 1, "Adam step counter starts at 1");
    assert!(params.len() == grads.len() && m.len() == grads.len() && v.len() == grads.len());
    let c1 = 1.0 - powf(cfg.beta1, t as f64);
    let c2 = 1.0 - powf(cfg.beta2, t as f64);
    for i in 0..params.len() {
        let g = grads[i];
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
        let m_hat = m[i] / c1;
        let v_hat = v[i] / c2;
        params[i] -= cfg.learning_rate * m_hat / (sqrt(v_hat) + cfg.epsilon);
    }
}

/// Moment estimates for every LSTM tensor.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub m: LstmParams,
    pub v: LstmParams,
    pub t: u64,
}

impl AdamState {
    pub fn new(hidden: usize, input_dim: usize) -> Self {
        AdamState {
            m: LstmParams::zeros(hidden, input_dim),
            v: LstmParams::zeros(hidden, input_dim),
            t: 0,
        }
    }

    pub fn update(&mut self, params: &mut LstmParams, grads: &LstmParams, cfg: &AdamConfig) {
        self.t += 1;
        let ms = self.m.tensors_mut();
        let vs = self.v.tensors_mut();
        for (((p, g), m), v) in params.tensors_mut().into_iter().zip(grads.tensors()).zip(ms).zip(vs) {
            adam_step(p, g, m, v, self.t, cfg);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_moves_by_learning_rate() {
        let cfg = AdamConfig::default();
        for &g in &[3.0, -0.002, 1e4] {
            let (mut p, mut m, mut v) = ([1.0], [0.0], [0.0]);
            adam_step(&mut p, &[g], &mut m, &mut v, 1, &cfg);
            let expect = 1.0 - cfg.learning_rate * f64::signum(g);
            assert!((p[0] - expect).abs() < 1e-8, "{g}: {}", p[0]);
        }
    }

    #[test]
    fn zero_gradient_decays_moments_only() {
        let cfg = AdamConfig::default();
        let (mut p, mut m, mut v) = ([0.5], [0.2], [0.04]);
        adam_step(&mut p, &[0.0], &mut m, &mut v, 3, &cfg);
        assert!((m[0] - 0.18).abs() < 1e-15);
        assert!((v[0] - 0.04 * 0.999).abs() < 1e-15);
        // m is still nonzero, so the parameter keeps moving
        assert!(p[0] < 0.5);
        let (mut q, mut m0, mut v0) = ([0.5], [0.0], [0.0]);
        adam_step(&mut q, &[0.0], &mut m0, &mut v0, 1, &cfg);
        assert_eq!(q[0], 0.5);
    }

    #[test]
    fn converges_on_a_quadratic() {
        let cfg = AdamConfig {
            learning_rate: 0.1,
            ..AdamConfig::default()
        };
        let target = 2.5;
        let (mut p, mut m, mut v) = ([0.0], [0.0], [0.0]);
        for t in 1..=200 {
            let g = 2.0 * (p[0] - target);
            adam_step(&mut p, &[g], &mut m, &mut v, t, &cfg);
        }
        assert!((p[0] - target).abs() < 1e-3, "{}", p[0]);
    }
}
