//! Symbol-rate readback synthesis for a perpendicular recording channel.
//!
//! A single magnetic transition produces the step response
//! `s(t) = A·tanh(ln(3)·t / PW50)`; two adjacent transitions give the dibit
//! response `p(t) = s(t) − s(t − 1)`. Written symbols `b_k ∈ {−1, +1}` are
//! scaled by 0.5 so that transitions take values in `{−1, 0, +1}`, and the
//! noiseless readback is `x_j = Σ_k 0.5·b_k·p(j − k)`.
//!
//! Time is measured in symbol periods and the channel is sampled at integer
//! instants only. Sequences are implicitly extended beyond both ends by
//! repeating their edge symbols, so a constant sequence reads back as a flat
//! `±A` level.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{bipolar, Error, Result};

/// Default one-sided truncation of the dibit response, in symbol periods.
pub const DEFAULT_SPAN: usize = 15;

/// Default order of the jitter Taylor expansion.
pub const DEFAULT_TAYLOR_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    /// Saturation level, zero to peak.
    pub amplitude: f64,
    /// Width between the `−A/2` and `+A/2` crossings, in symbol periods.
    pub pw50: f64,
}

impl Default for StepParams {
    fn default() -> Self {
        StepParams {
            amplitude: 1.0,
            pw50: 1.4,
        }
    }
}

impl StepParams {
    pub fn new(amplitude: f64, pw50: f64) -> Result<Self> {
        let params = StepParams { amplitude, pw50 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "amplitude must be positive, got {}",
                self.amplitude
            )));
        }
        if !(self.pw50 > 0.0 && self.pw50.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "pw50 must be positive, got {}",
                self.pw50
            )));
        }
        Ok(())
    }

    /// Chain-rule constant `ln(3)/PW50`.
    #[inline]
    fn rate(&self) -> f64 {
        3f64.ln() / self.pw50
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    /// Electronic noise standard deviation.
    pub sigma_e: f64,
    /// Media noise standard deviation (before saturation scaling).
    pub sigma_m: f64,
    /// Maximum sampling offset, as a fraction of the symbol period.
    pub jitter_max: f64,
    pub taylor_order: usize,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            sigma_e: 0.0,
            sigma_m: 0.0,
            jitter_max: 0.0,
            taylor_order: DEFAULT_TAYLOR_ORDER,
            seed: 0,
        }
    }
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        NoiseConfig::default()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_e >= 0.0 && self.sigma_e.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma_e must be non-negative, got {}",
                self.sigma_e
            )));
        }
        if !(self.sigma_m >= 0.0 && self.sigma_m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma_m must be non-negative, got {}",
                self.sigma_m
            )));
        }
        if !(0.0..0.5).contains(&self.jitter_max) {
            return Err(Error::InvalidParameter(format!(
                "jitter_max must lie in [0, 0.5), got {}",
                self.jitter_max
            )));
        }
        if self.taylor_order == 0 {
            return Err(Error::InvalidParameter(
                "taylor_order must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// User bits, code bits and the bipolar write sequence `b = 2c − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipolarFrame {
    pub user_bits: Vec<u8>,
    pub code_bits: Vec<u8>,
    pub bipolar: Vec<f64>,
}

impl BipolarFrame {
    pub fn new(user_bits: Vec<u8>, code_bits: Vec<u8>) -> Self {
        let bipolar = code_bits.iter().map(|&c| bipolar(c)).collect();
        BipolarFrame {
            user_bits,
            code_bits,
            bipolar,
        }
    }

    pub fn len(&self) -> usize {
        self.code_bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code_bits.is_empty()
    }

    /// The write sequence with `pad` copies of [`crate::PAD_SYMBOL`] on each side.
    pub fn padded_symbols(&self, pad: usize) -> Vec<f64> {
        let mut symbols = Vec::with_capacity(self.len() + 2 * pad);
        symbols.extend(std::iter::repeat_n(crate::PAD_SYMBOL, pad));
        symbols.extend_from_slice(&self.bipolar);
        symbols.extend(std::iter::repeat_n(crate::PAD_SYMBOL, pad));
        symbols
    }
}

/// Noiseless readback of a padded frame, kept together with the symbols that
/// produced it so that derivative signals can be rebuilt for jitter.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiselessSignal {
    pub symbols: Vec<f64>,
    pub samples: Vec<f64>,
    /// Number of pad symbols on each side.
    pub pad: usize,
    pub span: usize,
    /// Bound on the dibit truncation error per sample.
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReadbackFrame {
    pub samples: Vec<f64>,
    pub noiseless: Vec<f64>,
    pub media_noise: Vec<f64>,
    pub jitter_noise: Vec<f64>,
    pub electronic_noise: Vec<f64>,
    /// Pad symbols on each side; codeword sample `i` sits at `pad + i`.
    pub pad: usize,
    pub tail_bound: f64,
}

impl ReadbackFrame {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Number of codeword symbols carried by the frame.
    pub fn codeword_len(&self) -> usize {
        self.samples.len() - 2 * self.pad
    }
}

/// `A·tanh(ln(3)·t/PW50)`, evaluated as `A·(3^y − 1)/(3^y + 1)` with
/// `y = 2t/PW50` so that `s(±PW50/2) = ±A/2` holds exactly.
pub fn step_response(t: f64, params: &StepParams) -> f64 {
    let y = 2.0 * t.abs() / params.pw50;
    let magnitude = if y > 80.0 {
        1.0
    } else {
        let e = 3f64.powf(y);
        (e - 1.0) / (e + 1.0)
    };
    params.amplitude * magnitude.copysign(t)
}

/// Coefficients (ascending powers of `u = tanh`) of the polynomial `P_m`
/// with `dᵐ/dxᵐ tanh(x) = P_m(tanh(x))`.
fn tanh_derivative_poly(order: usize) -> Vec<f64> {
    let mut poly = vec![0.0, 1.0];
    for _ in 0..order {
        // P' · (1 − u²)
        let deriv: Vec<f64> = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| i as f64 * c)
            .collect();
        let mut next = vec![0.0; deriv.len() + 2];
        for (i, &c) in deriv.iter().enumerate() {
            next[i] += c;
            next[i + 2] -= c;
        }
        poly = next;
    }
    poly
}

fn eval_poly(poly: &[f64], u: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

/// Analytic derivative `dᵐs/dtᵐ` of the step response, `1 ≤ m ≤ max_order`.
pub fn step_derivative(t: f64, order: usize, max_order: usize, params: &StepParams) -> Result<f64> {
    if order == 0 || order > max_order {
        return Err(Error::InvalidParameter(format!(
            "derivative order {order} outside 1..={max_order}"
        )));
    }
    Ok(step_derivative_unchecked(t, order, params))
}

fn step_derivative_unchecked(t: f64, order: usize, params: &StepParams) -> f64 {
    let c = params.rate();
    let poly = tanh_derivative_poly(order);
    params.amplitude * c.powi(order as i32) * eval_poly(&poly, (c * t).tanh())
}

/// `s(t) − s(t − 1)`.
pub fn dibit_response(t: f64, params: &StepParams) -> f64 {
    step_response(t, params) - step_response(t - 1.0, params)
}

/// Taylor reconstruction of `s(t + δ)` from derivatives at `t`.
pub fn taylor_step(t: f64, delta: f64, order: usize, params: &StepParams) -> f64 {
    let mut sum = step_response(t, params);
    let mut factor = 1.0;
    for m in 1..=order {
        factor *= delta / m as f64;
        sum += factor * step_derivative_unchecked(t, m, params);
    }
    sum
}

/// Sum of `|0.5·p(t)|` over integer `|t| > span`.
pub fn truncation_tail_bound(params: &StepParams, span: usize) -> f64 {
    let one_side: f64 = (span as i64 + 1..span as i64 + 400)
        .map(|t| 0.5 * dibit_response(t as f64, params).abs())
        .sum();
    let other_side: f64 = (span as i64 + 1..span as i64 + 400)
        .map(|t| 0.5 * dibit_response(-(t as f64), params).abs())
        .sum();
    one_side + other_side
}

/// Sampled `0.5·p⁽ᵐ⁾(t)` for `t ∈ [−span, span]`, orders `0..=max_order`.
struct DibitTable {
    span: usize,
    taps: Vec<Vec<f64>>,
}

impl DibitTable {
    fn new(params: &StepParams, span: usize, max_order: usize) -> Self {
        let taps = (0..=max_order)
            .map(|m| {
                (-(span as i64)..=span as i64)
                    .map(|t| {
                        let t = t as f64;
                        let v = if m == 0 {
                            dibit_response(t, params)
                        } else {
                            step_derivative_unchecked(t, m, params)
                                - step_derivative_unchecked(t - 1.0, m, params)
                        };
                        0.5 * v
                    })
                    .collect()
            })
            .collect();
        DibitTable { span, taps }
    }

    /// Convolves the edge-extended symbols with the order-`m` table.
    fn convolve(&self, symbols: &[f64], m: usize) -> Vec<f64> {
        let len = symbols.len() as i64;
        let span = self.span as i64;
        let taps = &self.taps[m];
        (0..len)
            .map(|j| {
                (-span..=span)
                    .map(|t| {
                        let k = (j - t).clamp(0, len - 1) as usize;
                        symbols[k] * taps[(t + span) as usize]
                    })
                    .sum()
            })
            .collect()
    }
}

fn check_span(span: usize) -> Result<()> {
    if span == 0 {
        return Err(Error::InvalidParameter("span must be at least 1".into()));
    }
    Ok(())
}

/// Noiseless samples of an arbitrary bipolar sequence, dibit form, with the
/// response truncated to `|t| ≤ span`.
pub fn synthesize_symbols(symbols: &[f64], params: &StepParams, span: usize) -> Result<Vec<f64>> {
    params.validate()?;
    check_span(span)?;
    if symbols.is_empty() {
        return Err(Error::EmptyFrame);
    }
    Ok(DibitTable::new(params, span, 0).convolve(symbols, 0))
}

/// Same signal built from transitions: `x_j = b_0·A + Σ_k (Δ_k/2)(s(j − k) + A)`
/// with `Δ_k = b_k − b_{k−1}`. No truncation is involved.
pub fn synthesize_by_transitions(symbols: &[f64], params: &StepParams) -> Result<Vec<f64>> {
    params.validate()?;
    let Some(&first) = symbols.first() else {
        return Err(Error::EmptyFrame);
    };
    let a = params.amplitude;
    let transitions: Vec<(usize, f64)> = symbols
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] != w[0])
        .map(|(i, w)| (i + 1, 0.5 * (w[1] - w[0])))
        .collect();
    Ok((0..symbols.len())
        .map(|j| {
            first * a
                + transitions
                    .iter()
                    .map(|&(k, d)| d * (step_response(j as f64 - k as f64, params) + a))
                    .sum::<f64>()
        })
        .collect())
}

/// Noiseless readback of a frame padded with `span` known symbols per side.
pub fn synthesize_noiseless(
    frame: &BipolarFrame,
    params: &StepParams,
    span: usize,
) -> Result<NoiselessSignal> {
    if frame.is_empty() {
        return Err(Error::EmptyFrame);
    }
    let symbols = frame.padded_symbols(span);
    let samples = synthesize_symbols(&symbols, params, span)?;
    Ok(NoiselessSignal {
        symbols,
        samples,
        pad: span,
        span,
        tail_bound: truncation_tail_bound(params, span),
    })
}

/// Adds electronic, media and jitter noise to a noiseless signal.
///
/// Electronic noise is white Gaussian with standard deviation `sigma_e`.
/// Media noise is white Gaussian scaled by `sqrt(1 − (x/A)²)`, so it vanishes
/// where the signal is saturated and peaks at transitions. Jitter is a
/// uniform sampling offset `δ` applied through a Taylor expansion of the
/// signal; its derivatives come from the analytic step derivatives.
pub fn apply_noise(
    signal: &NoiselessSignal,
    cfg: &NoiseConfig,
    params: &StepParams,
) -> Result<ReadbackFrame> {
    cfg.validate()?;
    params.validate()?;
    let n = signal.samples.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut electronic = Vec::with_capacity(n);
    let mut media = Vec::with_capacity(n);
    let mut offsets = Vec::with_capacity(n);
    for &x in &signal.samples {
        let ge: f64 = rng.sample(StandardNormal);
        let gm: f64 = rng.sample(StandardNormal);
        let u: f64 = rng.random();
        electronic.push(cfg.sigma_e * ge);
        let ratio = x / params.amplitude;
        media.push(cfg.sigma_m * gm * (1.0 - ratio * ratio).max(0.0).sqrt());
        offsets.push(cfg.jitter_max * (2.0 * u - 1.0));
    }

    let jitter = if cfg.jitter_max > 0.0 {
        let table = DibitTable::new(params, signal.span, cfg.taylor_order);
        let derivatives: Vec<Vec<f64>> = (1..=cfg.taylor_order)
            .map(|m| table.convolve(&signal.symbols, m))
            .collect();
        offsets
            .iter()
            .enumerate()
            .map(|(i, &delta)| {
                let mut factor = 1.0;
                derivatives
                    .iter()
                    .enumerate()
                    .map(|(m, d)| {
                        factor *= delta / (m + 1) as f64;
                        factor * d[i]
                    })
                    .sum()
            })
            .collect()
    } else {
        vec![0.0; n]
    };

    let samples = (0..n)
        .map(|i| signal.samples[i] + media[i] + jitter[i] + electronic[i])
        .collect();
    Ok(ReadbackFrame {
        samples,
        noiseless: signal.samples.clone(),
        media_noise: media,
        jitter_noise: jitter,
        electronic_noise: electronic,
        pad: signal.pad,
        tail_bound: signal.tail_bound,
    })
}

/// Splits the total noise variance implied by a channel SNR,
/// `SNR = 10·log10(1 / (2(σe² + σm²)))`, into electronic and media parts.
pub fn snr_to_sigma(snr_db: f64, media_fraction: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&media_fraction) {
        return Err(Error::InvalidParameter(format!(
            "media_fraction must lie in [0, 1], got {media_fraction}"
        )));
    }
    let total = total_noise_variance(snr_db);
    Ok((
        ((1.0 - media_fraction) * total).sqrt(),
        (media_fraction * total).sqrt(),
    ))
}

/// `σe² + σm²` for a channel SNR in dB.
pub fn total_noise_variance(snr_db: f64) -> f64 {
    0.5 * 10f64.powf(-snr_db / 10.0)
}

/// Channel SNR in dB of a pair of noise standard deviations.
pub fn snr_db(sigma_e: f64, sigma_m: f64) -> f64 {
    10.0 * (1.0 / (2.0 * (sigma_e * sigma_e + sigma_m * sigma_m))).log10()
}
