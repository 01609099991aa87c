//! Partial-response targets and least-squares FIR equalizer design.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::waveform::{self, NoiseConfig, NoiselessSignal, ReadbackFrame, StepParams};
use crate::{derive_seed, Error, Result};

pub const DEFAULT_TAPS: usize = 21;
pub const DEFAULT_TRAINING_LEN: usize = 100_000;

/// Partial-response target polynomial, e.g. `(4, 6, 4, 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrTarget {
    pub coefficients: Vec<f64>,
    pub label: String,
}

impl Default for PrTarget {
    fn default() -> Self {
        PrTarget::new(vec![4.0, 6.0, 4.0, 2.0]).expect("static target")
    }
}

impl fmt::Display for PrTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl PrTarget {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidParameter(
                "PR target needs at least one non-zero coefficient".into(),
            ));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("PR target coefficients must be finite".into()));
        }
        let label = format!(
            "({})",
            coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        );
        Ok(PrTarget { coefficients, label })
    }

    /// Parses a comma-separated coefficient list such as `4,6,4,2`.
    pub fn parse(s: &str) -> Result<Self> {
        let coefficients = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad target coefficient `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        PrTarget::new(coefficients)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Channel memory `L − 1`.
    pub fn memory(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Target-domain signal `Σ_i g_i·0.5·b_{j−i}`, with `before` standing in
    /// for symbols at negative indices.
    pub fn convolve(&self, symbols: &[f64], before: f64) -> Vec<f64> {
        (0..symbols.len())
            .map(|j| {
                self.coefficients
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        let b = if j >= i { symbols[j - i] } else { before };
                        g * 0.5 * b
                    })
                    .sum()
            })
            .collect()
    }
}

/// FIR equalizer: `y_j = Σ_t taps[t]·r[j + delay − t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualizerDesign {
    pub taps: Vec<f64>,
    pub delay: usize,
    /// Per-sample squared error achieved on the training data, when known.
    pub residual_mse: Option<f64>,
}

impl EqualizerDesign {
    pub fn identity() -> Self {
        EqualizerDesign {
            taps: vec![1.0],
            delay: 0,
            residual_mse: Some(0.0),
        }
    }

    /// Filters a whole sample vector; indices outside `r` take the nearest
    /// edge sample.
    pub fn filter(&self, r: &[f64]) -> Vec<f64> {
        (0..r.len()).map(|j| self.output_at(r, j as i64)).collect()
    }

    fn output_at(&self, r: &[f64], j: i64) -> f64 {
        let last = r.len() as i64 - 1;
        self.taps
            .iter()
            .enumerate()
            .map(|(t, w)| w * r[(j + self.delay as i64 - t as i64).clamp(0, last) as usize])
            .sum()
    }

    /// Equalizes a readback frame and returns the `n + memory` samples that
    /// start at the first codeword symbol.
    pub fn apply(&self, frame: &ReadbackFrame, memory: usize) -> Result<Vec<f64>> {
        if frame.len() <= self.taps.len() {
            return Err(Error::LengthMismatch {
                what: "readback frame shorter than equalizer",
                expected: self.taps.len() + 1,
                actual: frame.len(),
            });
        }
        if memory > frame.pad {
            return Err(Error::LengthMismatch {
                what: "pad shorter than target memory",
                expected: memory,
                actual: frame.pad,
            });
        }
        let n = frame.codeword_len();
        Ok((0..n + memory)
            .map(|j| self.output_at(&frame.samples, (frame.pad + j) as i64))
            .collect())
    }

    /// Two-line text form: `delay <int>` then the taps separated by spaces.
    pub fn to_text(&self) -> String {
        let taps: Vec<String> = self.taps.iter().map(|t| t.to_string()).collect();
        format!("delay {}\n{}\n", self.delay, taps.join(" "))
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let first = lines
            .next()
            .ok_or_else(|| Error::EqualizerFormat("missing delay line".into()))?;
        let delay = first
            .trim()
            .strip_prefix("delay")
            .and_then(|d| d.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::EqualizerFormat(format!("bad delay line `{first}`")))?;
        let second = lines
            .next()
            .ok_or_else(|| Error::EqualizerFormat("missing taps line".into()))?;
        let taps = second
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::EqualizerFormat(format!("bad tap `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if taps.is_empty() {
            return Err(Error::EqualizerFormat("no taps".into()));
        }
        Ok(EqualizerDesign {
            taps,
            delay,
            residual_mse: None,
        })
    }
}

/// Solves `a·x = b` for symmetric positive definite `a` (row-major).
fn cholesky_solve(a: &[f64], b: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    let scale = (0..n).map(|i| a[i * n + i].abs()).fold(0.0, f64::max);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 1e-12 * scale || !sum.is_finite() {
                    return Err(Error::SingularSystem);
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i * n + k] * y[k]).sum();
        y[i] = (b[i] - s) / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k * n + i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i * n + i];
    }
    Ok(x)
}

/// Least-squares equalizer mapping `r` onto `desired`, scanning every delay
/// in `0..=2·(n_taps/2)` and keeping the one with the smallest error.
pub fn design_from_training(r: &[f64], desired: &[f64], n_taps: usize) -> Result<EqualizerDesign> {
    if r.len() != desired.len() {
        return Err(Error::LengthMismatch {
            what: "training desired signal",
            expected: r.len(),
            actual: desired.len(),
        });
    }
    if n_taps == 0 {
        return Err(Error::InvalidParameter("n_taps must be positive".into()));
    }
    let max_delay = 2 * (n_taps / 2);
    let first = n_taps - 1;
    let end = r.len().saturating_sub(max_delay);
    if end <= first + n_taps {
        return Err(Error::InvalidParameter("training sequence too short".into()));
    }
    let count = (end - first) as f64;
    let energy: f64 = desired[first..end].iter().map(|d| d * d).sum();

    // Gram matrix for delay 0, updated incrementally as the window slides.
    let mut gram = vec![0.0; n_taps * n_taps];
    for u in first..end {
        for a in 0..n_taps {
            let ra = r[u - a];
            for b in 0..=a {
                gram[a * n_taps + b] += ra * r[u - b];
            }
        }
    }

    let mut best: Option<EqualizerDesign> = None;
    for delay in 0..=max_delay {
        if delay > 0 {
            let (old, new) = (first + delay - 1, end + delay - 1);
            for a in 0..n_taps {
                for b in 0..=a {
                    gram[a * n_taps + b] += r[new - a] * r[new - b] - r[old - a] * r[old - b];
                }
            }
        }
        let mut full = gram.clone();
        for a in 0..n_taps {
            for b in a + 1..n_taps {
                full[a * n_taps + b] = full[b * n_taps + a];
            }
        }
        let cross: Vec<f64> = (0..n_taps)
            .map(|a| (first..end).map(|j| desired[j] * r[j + delay - a]).sum())
            .collect();
        let taps = cholesky_solve(&full, &cross, n_taps)?;
        let explained: f64 = taps.iter().zip(&cross).map(|(w, p)| w * p).sum();
        let mse = ((energy - explained) / count).max(0.0);
        if best.as_ref().is_none_or(|b| mse < b.residual_mse.unwrap_or(f64::INFINITY)) {
            best = Some(EqualizerDesign {
                taps,
                delay,
                residual_mse: Some(mse),
            });
        }
    }
    Ok(best.expect("at least one delay scanned"))
}

/// Designs an MMSE equalizer for the simulated channel on a random training
/// frame. The training data and its noise are drawn from `seed` alone; the
/// seed inside `noise` is ignored.
pub fn design_mmse(
    params: &StepParams,
    noise: &NoiseConfig,
    target: &PrTarget,
    n_taps: usize,
    training_len: usize,
    span: usize,
    seed: u64,
) -> Result<EqualizerDesign> {
    if n_taps < target.len() {
        return Err(Error::InvalidParameter(format!(
            "n_taps ({n_taps}) must be at least the target length ({})",
            target.len()
        )));
    }
    if training_len < 10 * n_taps {
        return Err(Error::InvalidParameter(format!(
            "training_len ({training_len}) must be at least 10·n_taps"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, 0]));
    let symbols: Vec<f64> = (0..training_len)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let x = waveform::synthesize_symbols(&symbols, params, span)?;
    let signal = NoiselessSignal {
        symbols: symbols.clone(),
        samples: x,
        pad: 0,
        span,
        tail_bound: waveform::truncation_tail_bound(params, span),
    };
    let noise = NoiseConfig {
        seed: derive_seed(&[seed, 1]),
        ..*noise
    };
    let readback = waveform::apply_noise(&signal, &noise, params)?;
    let desired = target.convolve(&symbols, symbols[0]);
    design_from_training(&readback.samples, &desired, n_taps)
}

/// Normalized correlation `⟨a, b⟩ / (‖a‖·‖b‖)`.
pub fn normalized_correlation(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}
