// Scalar transcendental functions. `std` builds use the platform libm,
// `no_std` builds fall back to the `libm` crate.

#[cfg(feature = "std")]
mod imp {
    #[inline]
    pub fn exp(x: f64) -> f64 {
        x.exp()
    }
    #[inline]
    pub fn ln(x: f64) -> f64 {
        x.ln()
    }
    #[inline]
    pub fn log2(x: f64) -> f64 {
        x.log2()
    }
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    #[inline]
    pub fn ln_1p(x: f64) -> f64 {
        x.ln_1p()
    }
    #[inline]
    pub fn powf(x: f64, y: f64) -> f64 {
        x.powf(y)
    }
}

#[cfg(not(feature = "std"))]
mod imp {
    #[inline]
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    #[inline]
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
    #[inline]
    pub fn log2(x: f64) -> f64 {
        libm::log2(x)
    }
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    #[inline]
    pub fn ln_1p(x: f64) -> f64 {
        libm::log1p(x)
    }
    #[inline]
    pub fn powf(x: f64, y: f64) -> f64 {
        libm::pow(x, y)
    }
}

pub(crate) use imp::*;

// Branch-free exp for the activation kernels: reduction by ln 2 with a
// degree-12 Taylor polynomial, then the exponent is written into the bits
// directly. Relative error stays below 4e-16 on [-700, 700]; inputs are
// clamped to that range. Plain arithmetic, so slice loops auto-vectorise.
#[inline(always)]
pub(crate) fn exp_kernel(x: f64) -> f64 {
    const ROUND: f64 = 6_755_399_441_055_744.0; // 1.5 * 2^52
    const LN2_HI: f64 = 6.931_471_803_691_238_2e-1;
    const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;
    const C: [f64; 13] = [
        1.0,
        1.0,
        1.0 / 2.0,
        1.0 / 6.0,
        1.0 / 24.0,
        1.0 / 120.0,
        1.0 / 720.0,
        1.0 / 5040.0,
        1.0 / 40320.0,
        1.0 / 362_880.0,
        1.0 / 3_628_800.0,
        1.0 / 39_916_800.0,
        1.0 / 479_001_600.0,
    ];
    let x = x.clamp(-700.0, 700.0);
    let t = x * core::f64::consts::LOG2_E + ROUND;
    let k = t - ROUND;
    let r = (x - k * LN2_HI) - k * LN2_LO;
    let mut p = C[12];
    for &c in C[..12].iter().rev() {
        p = p * r + c;
    }
    let ki = t.to_bits().wrapping_sub(ROUND.to_bits());
    let scale = f64::from_bits(ki.wrapping_add(1023) << 52);
    p * scale
}

#[inline(always)]
pub(crate) fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + exp_kernel(-x))
}

#[inline(always)]
pub(crate) fn tanh_kernel(x: f64) -> f64 {
    2.0 / (1.0 + exp_kernel(-2.0 * x)) - 1.0
}

pub(crate) fn sigmoid_in_place(xs: &mut [f64]) {
    for v in xs {
        *v = sigmoid(*v);
    }
}

pub(crate) fn tanh_in_place(xs: &mut [f64]) {
    for v in xs {
        *v = tanh_kernel(*v);
    }
}

pub(crate) const PI: f64 = core::f64::consts::PI;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_kernel_matches_libm() {
        let mut worst: f64 = 0.0;
        for i in 0..=200_000 {
            let x = -700.0 + 1400.0 * (i as f64) / 200_000.0;
            let want = libm::exp(x);
            worst = worst.max(((exp_kernel(x) - want) / want).abs());
        }
        assert!(worst < 4e-16, "{worst:e}");
        assert_eq!(exp_kernel(0.0), 1.0);
        assert!(exp_kernel(-1e9) > 0.0 && exp_kernel(1e9).is_finite());
    }

    #[test]
    fn activations_match_libm() {
        for i in -4000..=4000 {
            let x = i as f64 / 100.0;
            assert!((tanh_kernel(x) - libm::tanh(x)).abs() < 1e-15, "{x}");
            let s = 1.0 / (1.0 + libm::exp(-x));
            assert!((sigmoid(x) - s).abs() < 1e-15, "{x}");
        }
        assert_eq!(tanh_kernel(1e6), 1.0);
        assert_eq!(tanh_kernel(-1e6), -1.0);
    }
}
