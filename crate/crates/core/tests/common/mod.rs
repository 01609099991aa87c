//! Brute-force reference computations shared by the integration tests.
#![allow(dead_code)]

use pmr_core::equalize::PrTarget;
use pmr_core::ldpc::ParityCheckMatrix;
use pmr_core::rvcm::reconstruct;
use pmr_core::{bipolar, LlrVector};

pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

pub fn bits_of(word: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((word >> i) & 1) as u8).collect()
}

/// Symbol-wise posterior LLRs by enumerating all `2ⁿ` input sequences of a
/// PR channel with `pad_symbol` before and after the block.
///
/// With `max_log`, sums over sequences are replaced by maxima.
pub fn enumerate_app(
    target: &PrTarget,
    z: &[f64],
    priors: &[f64],
    sigma2: f64,
    pad_symbol: f64,
    max_log: bool,
) -> Vec<f64> {
    let n = priors.len();
    let mut ones: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut zeros: Vec<Vec<f64>> = vec![Vec::new(); n];
    for word in 0..1u64 << n {
        let bits = bits_of(word, n);
        let x = reconstruct(&bits, target, pad_symbol);
        let mut metric: f64 = -z.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / (2.0 * sigma2);
        for (j, &b) in bits.iter().enumerate() {
            metric += 0.5 * bipolar(b) * priors[j];
        }
        for (j, &b) in bits.iter().enumerate() {
            if b == 1 {
                ones[j].push(metric);
            } else {
                zeros[j].push(metric);
            }
        }
    }
    let combine = |v: &[f64]| {
        if max_log {
            v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        } else {
            log_sum_exp(v)
        }
    };
    (0..n).map(|j| combine(&ones[j]) - combine(&zeros[j])).collect()
}

/// All codewords of a small code by exhaustive syndrome check.
pub fn codewords(h: &ParityCheckMatrix) -> Vec<Vec<u8>> {
    let n = h.n();
    assert!(n <= 20, "enumeration limited to short codes");
    (0..1u64 << n)
        .map(|w| bits_of(w, n))
        .filter(|c| h.is_codeword(c))
        .collect()
}

/// Bitwise MAP LLRs over the code for independent channel LLRs.
pub fn bitwise_map(h: &ParityCheckMatrix, llr: &LlrVector) -> Vec<f64> {
    let words = codewords(h);
    let n = h.n();
    let mut ones: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut zeros: Vec<Vec<f64>> = vec![Vec::new(); n];
    for c in &words {
        let metric: f64 = c.iter().zip(llr.values()).map(|(&b, l)| 0.5 * bipolar(b) * l).sum();
        for (j, &b) in c.iter().enumerate() {
            if b == 1 {
                ones[j].push(metric);
            } else {
                zeros[j].push(metric);
            }
        }
    }
    (0..n).map(|j| log_sum_exp(&ones[j]) - log_sum_exp(&zeros[j])).collect()
}

/// Minimum-distance codeword against `z` in the target domain, and its
/// distance. Ties keep the first codeword in enumeration order.
pub fn ml_codeword(h: &ParityCheckMatrix, z: &[f64], target: &PrTarget, pad_symbol: f64) -> (Vec<u8>, f64) {
    codewords_by_encoding(h)
        .into_iter()
        .map(|c| {
            let d = pmr_core::rvcm::euclidean_metric(&c, z, target, pad_symbol).unwrap();
            (c, d)
        })
        .fold(None, |best: Option<(Vec<u8>, f64)>, (c, d)| match best {
            Some((bc, bd)) if bd <= d => Some((bc, bd)),
            _ => Some((c, d)),
        })
        .unwrap()
}

/// All `2ᵏ` codewords through the encoder.
pub fn codewords_by_encoding(h: &ParityCheckMatrix) -> Vec<Vec<u8>> {
    let k = h.k();
    assert!(k <= 16);
    (0..1u64 << k).map(|m| h.encode(&bits_of(m, k)).unwrap()).collect()
}
