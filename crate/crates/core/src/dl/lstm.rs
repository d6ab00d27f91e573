//! Single-layer LSTM classifier with a two-way softmax head.
//!
//! Gate blocks are stacked `[input; forget; cell; output]` in every weight
//! matrix. All batched work is laid out feature-major (`rows × batch`,
//! row-major) so each timestep is a pair of GEMMs.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::features::{FeatureSequence, FEATURE_DIM};
use crate::math::{exp, ln, sigmoid_in_place, sqrt, tanh_in_place};
use crate::{Error, Result};

pub const CLASSES: usize = 2;

/// All trainable tensors. Also used for gradients and optimiser moments.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams {
    /// `4H × D` input weights.
    pub w: Vec<f64>,
    /// `4H × H` recurrent weights.
    pub r: Vec<f64>,
    /// `4H` gate biases.
    pub b: Vec<f64>,
    /// `2 × H` dense weights.
    pub dense_w: Vec<f64>,
    pub dense_b: Vec<f64>,
}

impl LstmParams {
    pub fn zeros(hidden: usize, input_dim: usize) -> Self {
        LstmParams {
            w: vec![0.0; 4 * hidden * input_dim],
            r: vec![0.0; 4 * hidden * hidden],
            b: vec![0.0; 4 * hidden],
            dense_w: vec![0.0; CLASSES * hidden],
            dense_b: vec![0.0; CLASSES],
        }
    }

    pub fn tensors(&self) -> [&[f64]; 5] {
        [&self.w, &self.r, &self.b, &self.dense_w, &self.dense_b]
    }

    pub fn tensors_mut(&mut self) -> [&mut [f64]; 5] {
        [
            &mut self.w,
            &mut self.r,
            &mut self.b,
            &mut self.dense_w,
            &mut self.dense_b,
        ]
    }

    pub fn len(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|v| v.is_finite()))
    }

    fn same_shape(&self, other: &LstmParams) -> bool {
        self.tensors()
            .iter()
            .zip(other.tensors())
            .all(|(a, b)| a.len() == b.len())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LstmModel {
    pub hidden: usize,
    pub input_dim: usize,
    pub params: LstmParams,
}

fn glorot<R: Rng + ?Sized>(out: &mut [f64], fan_in: usize, fan_out: usize, rng: &mut R) {
    let limit = sqrt(6.0 / (fan_in + fan_out) as f64);
    for v in out {
        *v = rng.random_range(-limit..limit);
    }
}

impl LstmModel {
    /// Glorot-uniform weights, zero biases.
    pub fn new<R: Rng + ?Sized>(hidden: usize, input_dim: usize, rng: &mut R) -> Result<Self> {
        if hidden == 0 || input_dim == 0 {
            return Err(Error::Dimension("hidden and input sizes must be positive"));
        }
        let mut params = LstmParams::zeros(hidden, input_dim);
        glorot(&mut params.w, input_dim, 4 * hidden, rng);
        glorot(&mut params.r, hidden, 4 * hidden, rng);
        glorot(&mut params.dense_w, hidden, CLASSES, rng);
        Ok(LstmModel {
            hidden,
            input_dim,
            params,
        })
    }

    pub fn zeros(hidden: usize, input_dim: usize) -> Self {
        LstmModel {
            hidden,
            input_dim,
            params: LstmParams::zeros(hidden, input_dim),
        }
    }

    /// Rebuilds a model from stored tensors, checking their sizes.
    pub fn from_params(hidden: usize, input_dim: usize, params: LstmParams) -> Result<Self> {
        if hidden == 0 || input_dim == 0 {
            return Err(Error::Dimension("hidden and input sizes must be positive"));
        }
        if !params.same_shape(&LstmParams::zeros(hidden, input_dim)) {
            return Err(Error::Dimension("parameter sizes do not match the architecture"));
        }
        Ok(LstmModel {
            hidden,
            input_dim,
            params,
        })
    }

    pub fn for_features<R: Rng + ?Sized>(hidden: usize, rng: &mut R) -> Result<Self> {
        Self::new(hidden, FEATURE_DIM, rng)
    }
}

// Strided view over a row-major buffer.
#[derive(Clone, Copy)]
struct View<'a> {
    data: &'a [f64],
    rows: usize,
    cols: usize,
    rs: isize,
    cs: isize,
}

impl<'a> View<'a> {
    fn new(data: &'a [f64], rows: usize, cols: usize) -> Self {
        debug_assert!(data.len() >= rows * cols);
        View {
            data,
            rows,
            cols,
            rs: cols as isize,
            cs: 1,
        }
    }

    fn t(self) -> Self {
        View {
            data: self.data,
            rows: self.cols,
            cols: self.rows,
            rs: self.cs,
            cs: self.rs,
        }
    }
}

// c (rows × cols, contiguous row-major) = alpha·a·b + beta·c
fn gemm(alpha: f64, a: View<'_>, b: View<'_>, beta: f64, c: &mut [f64]) {
    assert_eq!(a.cols, b.rows);
    let (m, k, n) = (a.rows, a.cols, b.cols);
    assert!(c.len() >= m * n);
    if m == 0 || n == 0 {
        return;
    }
    if k == 0 {
        for v in &mut c[..m * n] {
            *v *= beta;
        }
        return;
    }
    let span = |v: &View<'_>| (v.rows - 1) * v.rs as usize + (v.cols - 1) * v.cs as usize + 1;
    assert!(a.data.len() >= span(&a) && b.data.len() >= span(&b));
    // SAFETY: the spans of all three operands were checked against their
    // buffers above and `c` does not alias `a` or `b` (distinct borrows).
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            alpha,
            a.data.as_ptr(),
            a.rs,
            a.cs,
            b.data.as_ptr(),
            b.rs,
            b.cs,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// Activations retained for backpropagation.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub batch: usize,
    pub steps: usize,
    hidden: usize,
    input_dim: usize,
    // T × D × B
    x: Vec<f64>,
    // T × 4H × B, after nonlinearities
    gates: Vec<f64>,
    // T × H × B
    cell: Vec<f64>,
    tanh_cell: Vec<f64>,
    out: Vec<f64>,
    /// `2 × B` pre-softmax scores.
    pub logits: Vec<f64>,
    /// `2 × B` class probabilities.
    pub probs: Vec<f64>,
}

impl ForwardCache {
    /// Probabilities of sequence `k` in the batch.
    pub fn probs_of(&self, k: usize) -> [f64; CLASSES] {
        [self.probs[k], self.probs[self.batch + k]]
    }

    pub fn logits_of(&self, k: usize) -> [f64; CLASSES] {
        [self.logits[k], self.logits[self.batch + k]]
    }
}

fn pack_inputs(seqs: &[&FeatureSequence], input_dim: usize) -> Result<(usize, Vec<f64>)> {
    if input_dim != FEATURE_DIM {
        return Err(Error::Dimension("model input size differs from the feature size"));
    }
    let batch = seqs.len();
    let steps = seqs.first().map_or(0, |s| s.len());
    if steps == 0 {
        return Err(Error::Dimension("empty input sequence"));
    }
    if seqs.iter().any(|s| s.len() != steps) {
        return Err(Error::Dimension("sequences in a batch must share a length"));
    }
    let mut x = vec![0.0; steps * input_dim * batch];
    for (k, seq) in seqs.iter().enumerate() {
        for (t, step) in seq.steps.iter().enumerate() {
            for (d, &v) in step.iter().enumerate() {
                x[(t * input_dim + d) * batch + k] = v;
            }
        }
    }
    Ok((steps, x))
}

struct StepBuffers {
    z: Vec<f64>,
}

// One timestep: gates from z, then the cell and output updates.
#[allow(clippy::too_many_arguments)]
fn step(
    p: &LstmParams,
    h: usize,
    d: usize,
    batch: usize,
    x_t: &[f64],
    prev_out: Option<&[f64]>,
    prev_cell: Option<&[f64]>,
    buf: &mut StepBuffers,
    gates: &mut [f64],
    cell: &mut [f64],
    tanh_cell: &mut [f64],
    out: &mut [f64],
) {
    let z = &mut buf.z;
    for (g, chunk) in z.chunks_exact_mut(batch).enumerate() {
        chunk.fill(p.b[g]);
    }
    gemm(1.0, View::new(&p.w, 4 * h, d), View::new(x_t, d, batch), 1.0, z);
    if let Some(prev) = prev_out {
        gemm(1.0, View::new(&p.r, 4 * h, h), View::new(prev, h, batch), 1.0, z);
    }
    let hb = h * batch;
    gates.copy_from_slice(z);
    sigmoid_in_place(&mut gates[..2 * hb]);
    tanh_in_place(&mut gates[2 * hb..3 * hb]);
    sigmoid_in_place(&mut gates[3 * hb..]);
    let (gi, rest) = gates.split_at(hb);
    let (gf, rest) = rest.split_at(hb);
    let (gg, go) = rest.split_at(hb);
    match prev_cell {
        Some(prev) => {
            for j in 0..hb {
                cell[j] = gf[j] * prev[j] + gi[j] * gg[j];
            }
        }
        None => {
            for j in 0..hb {
                cell[j] = gi[j] * gg[j];
            }
        }
    }
    tanh_cell.copy_from_slice(cell);
    tanh_in_place(tanh_cell);
    for j in 0..hb {
        out[j] = go[j] * tanh_cell[j];
    }
}

fn head(p: &LstmParams, h: usize, batch: usize, last_out: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut logits = vec![0.0; CLASSES * batch];
    for (c, chunk) in logits.chunks_exact_mut(batch).enumerate() {
        chunk.fill(p.dense_b[c]);
    }
    gemm(
        1.0,
        View::new(&p.dense_w, CLASSES, h),
        View::new(last_out, h, batch),
        1.0,
        &mut logits,
    );
    let mut probs = vec![0.0; CLASSES * batch];
    for k in 0..batch {
        let (a, b) = (logits[k], logits[batch + k]);
        let m = if a > b { a } else { b };
        let (ea, eb) = (exp(a - m), exp(b - m));
        let s = ea + eb;
        probs[k] = ea / s;
        probs[batch + k] = eb / s;
    }
    (logits, probs)
}

/// Batched forward pass keeping every activation.
pub fn forward_batch(model: &LstmModel, seqs: &[&FeatureSequence]) -> Result<ForwardCache> {
    let (h, d) = (model.hidden, model.input_dim);
    let batch = seqs.len();
    if batch == 0 {
        return Err(Error::Dimension("empty batch"));
    }
    let (steps, x) = pack_inputs(seqs, d)?;
    let hb = h * batch;
    let mut gates = vec![0.0; steps * 4 * hb];
    let mut cell = vec![0.0; steps * hb];
    let mut tanh_cell = vec![0.0; steps * hb];
    let mut out = vec![0.0; steps * hb];
    let mut buf = StepBuffers {
        z: vec![0.0; 4 * hb],
    };
    for t in 0..steps {
        let (cell_prev, cell_cur) = cell.split_at_mut(t * hb);
        let (out_prev, out_cur) = out.split_at_mut(t * hb);
        step(
            &model.params,
            h,
            d,
            batch,
            &x[t * d * batch..(t + 1) * d * batch],
            (t > 0).then(|| &out_prev[(t - 1) * hb..]),
            (t > 0).then(|| &cell_prev[(t - 1) * hb..]),
            &mut buf,
            &mut gates[t * 4 * hb..(t + 1) * 4 * hb],
            &mut cell_cur[..hb],
            &mut tanh_cell[t * hb..(t + 1) * hb],
            &mut out_cur[..hb],
        );
    }
    let (logits, probs) = head(&model.params, h, batch, &out[(steps - 1) * hb..]);
    if probs.iter().any(|p| !p.is_finite()) {
        return Err(Error::NumericFault("non-finite class probability"));
    }
    Ok(ForwardCache {
        batch,
        steps,
        hidden: h,
        input_dim: d,
        x,
        gates,
        cell,
        tanh_cell,
        out,
        logits,
        probs,
    })
}

/// Forward pass without retaining history; returns `2 × B` logits.
pub fn infer_logits(model: &LstmModel, seqs: &[&FeatureSequence]) -> Result<Vec<f64>> {
    let (h, d) = (model.hidden, model.input_dim);
    let batch = seqs.len();
    if batch == 0 {
        return Ok(Vec::new());
    }
    let (steps, x) = pack_inputs(seqs, d)?;
    let hb = h * batch;
    let mut gates = vec![0.0; 4 * hb];
    let (mut cell, mut cell_prev) = (vec![0.0; hb], vec![0.0; hb]);
    let (mut out, mut out_prev) = (vec![0.0; hb], vec![0.0; hb]);
    let mut tanh_cell = vec![0.0; hb];
    let mut buf = StepBuffers {
        z: vec![0.0; 4 * hb],
    };
    for t in 0..steps {
        core::mem::swap(&mut cell, &mut cell_prev);
        core::mem::swap(&mut out, &mut out_prev);
        step(
            &model.params,
            h,
            d,
            batch,
            &x[t * d * batch..(t + 1) * d * batch],
            (t > 0).then_some(out_prev.as_slice()),
            (t > 0).then_some(cell_prev.as_slice()),
            &mut buf,
            &mut gates,
            &mut cell,
            &mut tanh_cell,
            &mut out,
        );
    }
    let (logits, _) = head(&model.params, h, batch, &out);
    if logits.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericFault("non-finite logit"));
    }
    Ok(logits)
}

/// Decision from a pair of logits; ties go to class 0.
pub fn decide(logits: [f64; CLASSES]) -> u8 {
    u8::from(logits[1] > logits[0])
}

/// Mean cross-entropy of the cached batch against `labels`.
pub fn cross_entropy(cache: &ForwardCache, labels: &[u8]) -> Result<f64> {
    if labels.len() != cache.batch {
        return Err(Error::Dimension("one label per sequence"));
    }
    let mut total = 0.0;
    for (k, &y) in labels.iter().enumerate() {
        if y > 1 {
            return Err(Error::NonBinary { index: k, value: y });
        }
        // log-softmax from logits stays finite for saturated outputs
        let [a, b] = cache.logits_of(k);
        let m = if a > b { a } else { b };
        let lse = m + ln(exp(a - m) + exp(b - m));
        let chosen = if y == 0 { a } else { b };
        total += lse - chosen;
    }
    Ok(total / labels.len() as f64)
}

/// Gradient of the mean cross-entropy by backpropagation through time.
pub fn backward_batch(model: &LstmModel, cache: &ForwardCache, labels: &[u8]) -> Result<LstmParams> {
    let (h, d, batch, steps) = (cache.hidden, cache.input_dim, cache.batch, cache.steps);
    if h != model.hidden || d != model.input_dim {
        return Err(Error::Dimension("cache was produced by a different architecture"));
    }
    if labels.len() != batch {
        return Err(Error::Dimension("one label per sequence"));
    }
    let p = &model.params;
    let mut grads = LstmParams::zeros(h, d);
    let hb = h * batch;

    let mut dlogits = cache.probs.clone();
    for (k, &y) in labels.iter().enumerate() {
        if y > 1 {
            return Err(Error::NonBinary { index: k, value: y });
        }
        dlogits[usize::from(y) * batch + k] -= 1.0;
    }
    let inv_b = 1.0 / batch as f64;
    for v in &mut dlogits {
        *v *= inv_b;
    }
    let last_out = &cache.out[(steps - 1) * hb..steps * hb];
    gemm(
        1.0,
        View::new(&dlogits, CLASSES, batch),
        View::new(last_out, h, batch).t(),
        0.0,
        &mut grads.dense_w,
    );
    for c in 0..CLASSES {
        grads.dense_b[c] = dlogits[c * batch..(c + 1) * batch].iter().sum();
    }
    let mut d_out = vec![0.0; hb];
    gemm(
        1.0,
        View::new(&p.dense_w, CLASSES, h).t(),
        View::new(&dlogits, CLASSES, batch),
        0.0,
        &mut d_out,
    );

    let mut d_cell_next = vec![0.0; hb];
    let mut dz = vec![0.0; 4 * hb];
    for t in (0..steps).rev() {
        let gates = &cache.gates[t * 4 * hb..(t + 1) * 4 * hb];
        let (gi, rest) = gates.split_at(hb);
        let (gf, rest) = rest.split_at(hb);
        let (gg, go) = rest.split_at(hb);
        let ts = &cache.tanh_cell[t * hb..(t + 1) * hb];
        let prev_cell = (t > 0).then(|| &cache.cell[(t - 1) * hb..t * hb]);
        let (dzi, rest) = dz.split_at_mut(hb);
        let (dzf, rest) = rest.split_at_mut(hb);
        let (dzg, dzo) = rest.split_at_mut(hb);
        for j in 0..hb {
            let dout = d_out[j];
            let ds = d_cell_next[j] + dout * go[j] * (1.0 - ts[j] * ts[j]);
            let sp = prev_cell.map_or(0.0, |c| c[j]);
            dzi[j] = ds * gg[j] * gi[j] * (1.0 - gi[j]);
            dzf[j] = ds * sp * gf[j] * (1.0 - gf[j]);
            dzg[j] = ds * gi[j] * (1.0 - gg[j] * gg[j]);
            dzo[j] = dout * ts[j] * go[j] * (1.0 - go[j]);
            d_cell_next[j] = ds * gf[j];
        }
        let x_t = &cache.x[t * d * batch..(t + 1) * d * batch];
        gemm(
            1.0,
            View::new(&dz, 4 * h, batch),
            View::new(x_t, d, batch).t(),
            1.0,
            &mut grads.w,
        );
        for (g, chunk) in dz.chunks_exact(batch).enumerate() {
            grads.b[g] += chunk.iter().sum::<f64>();
        }
        if t > 0 {
            let prev_out = &cache.out[(t - 1) * hb..t * hb];
            gemm(
                1.0,
                View::new(&dz, 4 * h, batch),
                View::new(prev_out, h, batch).t(),
                1.0,
                &mut grads.r,
            );
            gemm(
                1.0,
                View::new(&p.r, 4 * h, h).t(),
                View::new(&dz, 4 * h, batch),
                0.0,
                &mut d_out,
            );
        }
    }
    if !grads.is_finite() {
        return Err(Error::NumericFault("non-finite gradient"));
    }
    Ok(grads)
}

/// Single-sequence forward pass.
pub fn lstm_forward(model: &LstmModel, seq: &FeatureSequence) -> Result<([f64; CLASSES], ForwardCache)> {
    let cache = forward_batch(model, &[seq])?;
    Ok((cache.probs_of(0), cache))
}

/// Single-sequence gradient of `−ln p_label`.
pub fn lstm_backward(model: &LstmModel, cache: &ForwardCache, label: u8) -> Result<LstmParams> {
    if cache.batch != 1 {
        return Err(Error::Dimension("expected a single-sequence cache"));
    }
    backward_batch(model, cache, &[label])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use rand::Rng;

    fn random_seq<R: Rng>(len: usize, rng: &mut R) -> FeatureSequence {
        FeatureSequence {
            steps: (0..len)
                .map(|_| {
                    let re = rng.random_range(-1.0..1.0);
                    let im = rng.random_range(-1.0..1.0);
                    [re, im, sqrt(re * re + im * im)]
                })
                .collect(),
        }
    }

    fn loss_of(model: &LstmModel, seqs: &[&FeatureSequence], labels: &[u8]) -> f64 {
        cross_entropy(&forward_batch(model, seqs).unwrap(), labels).unwrap()
    }

    #[test]
    fn gemm_matches_naive() {
        let a: Vec<f64> = (0..6).map(|v| v as f64).collect(); // 2×3
        let b: Vec<f64> = (0..12).map(|v| (v as f64) * 0.5 - 2.0).collect(); // 3×4
        let mut c = vec![1.0; 8];
        gemm(2.0, View::new(&a, 2, 3), View::new(&b, 3, 4), 0.5, &mut c);
        for i in 0..2 {
            for j in 0..4 {
                let s: f64 = (0..3).map(|k| a[i * 3 + k] * b[k * 4 + j]).sum();
                assert!((c[i * 4 + j] - (2.0 * s + 0.5)).abs() < 1e-12);
            }
        }
        // transposed operand: (bᵀ)ᵀ = b
        let bt: Vec<f64> = (0..12).map(|idx| b[(idx % 3) * 4 + idx / 3]).collect();
        let mut c2 = vec![1.0; 8];
        gemm(2.0, View::new(&a, 2, 3), View::new(&bt, 4, 3).t(), 0.5, &mut c2);
        assert_eq!(c, c2);
    }

    #[test]
    fn zero_parameters_give_uniform_output() {
        let model = LstmModel::zeros(5, FEATURE_DIM);
        let mut rng = substream(3, 0);
        let seq = random_seq(11, &mut rng);
        let (p, _) = lstm_forward(&model, &seq).unwrap();
        assert_eq!(p, [0.5, 0.5]);
    }

    #[test]
    fn scalar_recurrence_matches_hand_computation() {
        // H = 1, D = 3, only the first input feature matters
        let mut model = LstmModel::zeros(1, FEATURE_DIM);
        let wi = [0.3, -0.2, 0.5, 0.7];
        let ri = [0.1, 0.4, -0.3, 0.2];
        let bi = [0.05, -0.1, 0.2, 0.0];
        for g in 0..4 {
            model.params.w[g * 3] = wi[g];
            model.params.r[g] = ri[g];
            model.params.b[g] = bi[g];
        }
        model.params.dense_w = vec![1.5, -0.5];
        model.params.dense_b = vec![0.1, 0.2];
        let xs = [0.9, -0.4, 0.25];
        let seq = FeatureSequence {
            steps: xs.iter().map(|&x| [x, 0.0, 0.0]).collect(),
        };
        let sig = |v: f64| 1.0 / (1.0 + (-v).exp());
        let (mut hprev, mut cprev) = (0.0f64, 0.0f64);
        for &x in &xs {
            let z: Vec<f64> = (0..4).map(|g| wi[g] * x + ri[g] * hprev + bi[g]).collect();
            let (i, f, gg, o) = (sig(z[0]), sig(z[1]), z[2].tanh(), sig(z[3]));
            cprev = f * cprev + i * gg;
            hprev = o * cprev.tanh();
        }
        let l0 = 1.5 * hprev + 0.1;
        let l1 = -0.5 * hprev + 0.2;
        let p0 = 1.0 / (1.0 + (l1 - l0).exp());
        let (p, cache) = lstm_forward(&model, &seq).unwrap();
        assert!((p[0] - p0).abs() < 1e-14);
        assert!((p[0] + p[1] - 1.0).abs() < 1e-15);
        assert!((cache.logits_of(0)[0] - l0).abs() < 1e-14);
        let lean = infer_logits(&model, &[&seq]).unwrap();
        assert_eq!(lean, cache.logits);
    }

    #[test]
    fn candidate_bias_alone_follows_halving_recurrence() {
        let mut model = LstmModel::zeros(1, FEATURE_DIM);
        let bg = 0.8;
        model.params.b[2] = bg;
        let seq = FeatureSequence { steps: vec![[0.0; 3]; 6] };
        let cache = forward_batch(&model, &[&seq]).unwrap();
        let mut s = 0.0;
        for t in 0..6 {
            s = 0.5 * s + 0.5 * bg.tanh();
            assert!((cache.cell[t] - s).abs() < 1e-15);
            assert!((cache.out[t] - 0.5 * s.tanh()).abs() < 1e-15);
        }
    }

    #[test]
    fn softmax_sums_to_one_and_follows_dense_rows() {
        let mut rng = substream(14, 0);
        for _ in 0..20 {
            let model = LstmModel::new(5, FEATURE_DIM, &mut rng).unwrap();
            let seq = random_seq(7, &mut rng);
            let (p, _) = lstm_forward(&model, &seq).unwrap();
            assert!((p[0] + p[1] - 1.0).abs() < 1e-12);
            let mut swapped = model.clone();
            let h = model.hidden;
            swapped.params.dense_w = [&model.params.dense_w[h..], &model.params.dense_w[..h]].concat();
            swapped.params.dense_b = vec![model.params.dense_b[1], model.params.dense_b[0]];
            let (q, _) = lstm_forward(&swapped, &seq).unwrap();
            assert!((p[0] - q[1]).abs() < 1e-15 && (p[1] - q[0]).abs() < 1e-15);
        }
    }

    #[test]
    fn saturated_correct_output_has_vanishing_gradient() {
        let mut rng = substream(15, 0);
        let mut model = LstmModel::new(4, FEATURE_DIM, &mut rng).unwrap();
        model.params.dense_b = vec![40.0, -40.0];
        let seq = random_seq(6, &mut rng);
        let (_, cache) = lstm_forward(&model, &seq).unwrap();
        let g = lstm_backward(&model, &cache, 0).unwrap();
        let norm: f64 = g.tensors().iter().flat_map(|t| t.iter()).map(|v| v * v).sum::<f64>();
        assert!(norm.sqrt() < 1e-6);
    }

    #[test]
    fn dense_gradients_are_antisymmetric() {
        let mut rng = substream(16, 0);
        let model = LstmModel::new(5, FEATURE_DIM, &mut rng).unwrap();
        let seq = random_seq(4, &mut rng);
        let (_, cache) = lstm_forward(&model, &seq).unwrap();
        let g = lstm_backward(&model, &cache, 1).unwrap();
        for j in 0..5 {
            assert!((g.dense_w[j] + g.dense_w[5 + j]).abs() < 1e-15);
        }
        assert!((g.dense_b[0] + g.dense_b[1]).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = substream(11, 0);
        let model = LstmModel::new(4, FEATURE_DIM, &mut rng).unwrap();
        // non-zero biases exercise those paths too
        let mut model = model;
        for v in model.params.b.iter_mut().chain(model.params.dense_b.iter_mut()) {
            *v = rng.random_range(-0.5..0.5);
        }
        let seqs: Vec<FeatureSequence> = (0..3).map(|_| random_seq(8, &mut rng)).collect();
        let refs: Vec<&FeatureSequence> = seqs.iter().collect();
        let labels = [1u8, 0, 1];
        let cache = forward_batch(&model, &refs).unwrap();
        let grads = backward_batch(&model, &cache, &labels).unwrap();
        let step = 1e-6;
        for tensor in 0..5 {
            let n = model.params.tensors()[tensor].len();
            for idx in 0..n {
                let mut plus = model.clone();
                plus.params.tensors_mut()[tensor][idx] += step;
                let mut minus = model.clone();
                minus.params.tensors_mut()[tensor][idx] -= step;
                let numeric = (loss_of(&plus, &refs, &labels) - loss_of(&minus, &refs, &labels)) / (2.0 * step);
                let analytic = grads.tensors()[tensor][idx];
                let denom = numeric.abs().max(analytic.abs()).max(1e-8);
                let rel = (numeric - analytic).abs() / denom;
                assert!(
                    rel < 1e-5 || (numeric - analytic).abs() < 1e-9,
                    "tensor {tensor} index {idx}: analytic {analytic} numeric {numeric}"
                );
            }
        }
    }

    #[test]
    fn batch_gradient_is_mean_of_single_gradients() {
        let mut rng = substream(12, 0);
        let model = LstmModel::new(3, FEATURE_DIM, &mut rng).unwrap();
        let seqs: Vec<FeatureSequence> = (0..4).map(|_| random_seq(5, &mut rng)).collect();
        let labels = [0u8, 1, 1, 0];
        let refs: Vec<&FeatureSequence> = seqs.iter().collect();
        let batch = backward_batch(&model, &forward_batch(&model, &refs).unwrap(), &labels).unwrap();
        let mut mean = LstmParams::zeros(3, FEATURE_DIM);
        for (seq, &y) in seqs.iter().zip(&labels) {
            let (_, cache) = lstm_forward(&model, seq).unwrap();
            let g = lstm_backward(&model, &cache, y).unwrap();
            for (acc, part) in mean.tensors_mut().into_iter().zip(g.tensors()) {
                for (a, v) in acc.iter_mut().zip(part) {
                    *a += v / 4.0;
                }
            }
        }
        for (a, b) in batch.tensors().iter().zip(mean.tensors()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lean_inference_matches_cached_forward() {
        let mut rng = substream(13, 0);
        let model = LstmModel::new(6, FEATURE_DIM, &mut rng).unwrap();
        let seqs: Vec<FeatureSequence> = (0..7).map(|_| random_seq(9, &mut rng)).collect();
        let refs: Vec<&FeatureSequence> = seqs.iter().collect();
        let cache = forward_batch(&model, &refs).unwrap();
        let lean = infer_logits(&model, &refs).unwrap();
        for (a, b) in cache.logits.iter().zip(&lean) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn decision_ignores_common_logit_shift() {
        for &(a, b) in &[(0.3, -1.2), (-2.0, 5.0), (1.0, 1.0)] {
            for &shift in &[-100.0, 0.0, 3.5, 1e6] {
                assert_eq!(decide([a, b]), decide([a + shift, b + shift]));
            }
        }
        assert_eq!(decide([1.0, 1.0]), 0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let model = LstmModel::zeros(2, FEATURE_DIM);
        let a = FeatureSequence { steps: vec![[0.0; 3]; 3] };
        let b = FeatureSequence { steps: vec![[0.0; 3]; 4] };
        assert!(forward_batch(&model, &[&a, &b]).is_err());
        assert!(forward_batch(&model, &[]).is_err());
        let empty = FeatureSequence { steps: Vec::new() };
        assert!(forward_batch(&model, &[&empty]).is_err());
        let cache = forward_batch(&model, &[&a]).unwrap();
        assert!(backward_batch(&model, &cache, &[2]).is_err());
        assert!(backward_batch(&model, &cache, &[0, 1]).is_err());
        assert!(LstmModel::from_params(3, FEATURE_DIM, LstmParams::zeros(2, FEATURE_DIM)).is_err());
        let mut bad = LstmModel::zeros(2, FEATURE_DIM);
        bad.params.dense_b[0] = f64::NAN;
        assert!(forward_batch(&bad, &[&a]).is_err());
    }
}
