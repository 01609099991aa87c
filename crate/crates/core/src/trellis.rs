//! Partial-response trellis and the BCJR (forward-backward) MAP detector.
//!
//! A state holds the last `L − 1` written symbols; bit `i` of the state index
//! is set when `b_{j−1−i} = +1`. The branch for input `u` from state `s`
//! emits `0.5·(g_0·u + Σ_i g_i·b_{j−i})`. Frames are terminated at both ends
//! by known pad symbols, so the recursion starts and ends in the pad state.

use crate::equalize::PrTarget;
use crate::{Error, LlrVector, Result, PAD_SYMBOL};

/// Largest supported target length (2¹⁵ states).
pub const MAX_TARGET_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub next: usize,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrellisSpec {
    pub target: PrTarget,
    pub n_states: usize,
    /// `branches[state][input_bit]`, input bit 1 meaning symbol +1.
    pub branches: Vec<[Branch; 2]>,
    pub pad_symbol: f64,
}

impl TrellisSpec {
    pub fn memory(&self) -> usize {
        self.target.memory()
    }

    pub fn n_branches(&self) -> usize {
        2 * self.n_states
    }

    /// State reached after a run of pad symbols.
    pub fn pad_state(&self) -> usize {
        if self.pad_symbol > 0.0 {
            self.n_states - 1
        } else {
            0
        }
    }

    fn pad_bit(&self) -> usize {
        usize::from(self.pad_symbol > 0.0)
    }
}

pub fn build_trellis(target: &PrTarget) -> Result<TrellisSpec> {
    build_trellis_with_pad(target, PAD_SYMBOL)
}

pub fn build_trellis_with_pad(target: &PrTarget, pad_symbol: f64) -> Result<TrellisSpec> {
    if target.is_empty() {
        return Err(Error::InvalidParameter("empty PR target".into()));
    }
    if target.len() > MAX_TARGET_LEN {
        return Err(Error::InvalidParameter(format!(
            "PR target length {} exceeds {MAX_TARGET_LEN}",
            target.len()
        )));
    }
    if pad_symbol.abs() != 1.0 {
        return Err(Error::InvalidParameter("pad symbol must be ±1".into()));
    }
    let memory = target.memory();
    let n_states = 1usize << memory;
    let mask = n_states - 1;
    let g = &target.coefficients;
    let sym = |bit: usize| if bit == 1 { 1.0 } else { -1.0 };
    let branches = (0..n_states)
        .map(|state| {
            let history: f64 = (1..=memory).map(|i| g[i] * sym((state >> (i - 1)) & 1)).sum();
            let branch = |bit: usize| Branch {
                next: ((state << 1) | bit) & mask,
                level: 0.5 * (g[0] * sym(bit) + history),
            };
            [branch(0), branch(1)]
        })
        .collect();
    Ok(TrellisSpec {
        target: target.clone(),
        n_states,
        branches,
        pad_symbol,
    })
}

/// Forward/backward combination rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Recursion {
    /// `ln(eᵃ + eᵇ)`.
    #[default]
    Exact,
    /// `max(a, b)`.
    MaxStar,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    /// Noise variance assumed by the branch metrics.
    pub assumed_sigma2: f64,
    /// Offset in dB applied to the assumed variance (SNR mismatch).
    pub mismatch_db: f64,
    pub recursion: Recursion,
}

impl DetectorConfig {
    pub fn new(assumed_sigma2: f64) -> Self {
        DetectorConfig {
            assumed_sigma2,
            mismatch_db: 0.0,
            recursion: Recursion::Exact,
        }
    }

    /// Variance actually used: `assumed_sigma2 · 10^(mismatch_db/10)`.
    pub fn effective_sigma2(&self) -> f64 {
        self.assumed_sigma2 * 10f64.powf(self.mismatch_db / 10.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.assumed_sigma2 > 0.0 && self.assumed_sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "assumed_sigma2 must be positive, got {}",
                self.assumed_sigma2
            )));
        }
        if !self.mismatch_db.is_finite() {
            return Err(Error::InvalidParameter("mismatch_db must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BcjrOutput {
    pub app: LlrVector,
    pub extrinsic: LlrVector,
}

// App magnitudes beyond this only arise from pruned branches.
const SATURATION: f64 = 1e20;

#[inline]
fn combine(rule: Recursion, a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    match rule {
        Recursion::MaxStar => hi,
        Recursion::Exact => {
            if lo == f64::NEG_INFINITY {
                hi
            } else {
                hi + (lo - hi).exp().ln_1p()
            }
        }
    }
}

/// Symbol-wise MAP detection of the `n = priors.len()` codeword symbols.
///
/// `z` holds `n + memory` equalized samples starting at the first codeword
/// symbol; the final `memory` samples see the postamble. Returns the
/// a-posteriori LLRs and the extrinsic part `app − prior`; saturated priors
/// pass through unchanged into the extrinsic output and force the sign of
/// the corresponding app.
pub fn bcjr(spec: &TrellisSpec, z: &[f64], priors: &LlrVector, cfg: &DetectorConfig) -> Result<BcjrOutput> {
    cfg.validate()?;
    let n = priors.len();
    let memory = spec.memory();
    if z.len() != n + memory {
        return Err(Error::LengthMismatch {
            what: "equalized samples (n + memory)",
            expected: n + memory,
            actual: z.len(),
        });
    }
    if let Some(i) = z.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample(i));
    }
    if let Some(i) = priors.values().iter().position(|v| v.is_nan()) {
        return Err(Error::NonFiniteSample(i));
    }

    let rule = cfg.recursion;
    let inv_two_sigma2 = 0.5 / cfg.effective_sigma2();
    let steps = z.len();
    let states = spec.n_states;
    let pad_bit = spec.pad_bit();

    // Log prior of input bit `bit` at step j.
    let prior_term = |j: usize, bit: usize| -> f64 {
        if j >= n {
            return if bit == pad_bit { 0.0 } else { f64::NEG_INFINITY };
        }
        let l = priors[j];
        let u = if bit == 1 { 1.0 } else { -1.0 };
        if l.is_infinite() {
            if (l > 0.0) == (bit == 1) {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            0.5 * u * l
        }
    };
    let channel_term = |j: usize, state: usize, bit: usize| -> f64 {
        let e = z[j] - spec.branches[state][bit].level;
        -e * e * inv_two_sigma2
    };
    let gamma = |j: usize, state: usize, bit: usize| -> f64 {
        let p = prior_term(j, bit);
        if p == f64::NEG_INFINITY {
            return p;
        }
        p + channel_term(j, state, bit)
    };

    let mut alpha = vec![f64::NEG_INFINITY; (steps + 1) * states];
    alpha[spec.pad_state()] = 0.0;
    for j in 0..steps {
        let (cur, next) = alpha.split_at_mut((j + 1) * states);
        let cur = &cur[j * states..];
        let next = &mut next[..states];
        for s in 0..states {
            if cur[s] == f64::NEG_INFINITY {
                continue;
            }
            for bit in 0..2 {
                let g = gamma(j, s, bit);
                if g == f64::NEG_INFINITY {
                    continue;
                }
                let t = spec.branches[s][bit].next;
                next[t] = combine(rule, next[t], cur[s] + g);
            }
        }
        let max = next.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for v in next.iter_mut() {
            *v -= max;
        }
    }

    let mut beta = vec![f64::NEG_INFINITY; (steps + 1) * states];
    beta[steps * states + spec.pad_state()] = 0.0;
    for j in (0..steps).rev() {
        let (cur, next) = beta.split_at_mut((j + 1) * states);
        let cur = &mut cur[j * states..];
        let next = &next[..states];
        for s in 0..states {
            let mut acc = f64::NEG_INFINITY;
            for bit in 0..2 {
                let g = gamma(j, s, bit);
                let t = spec.branches[s][bit].next;
                if g == f64::NEG_INFINITY || next[t] == f64::NEG_INFINITY {
                    continue;
                }
                acc = combine(rule, acc, g + next[t]);
            }
            cur[s] = acc;
        }
        let max = cur.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max > f64::NEG_INFINITY {
            for v in cur.iter_mut() {
                *v -= max;
            }
        }
    }

    // The extrinsic sums use channel-only branch metrics. Since the prior
    // term depends only on the input bit it factors out, so this equals
    // app − prior without the cancellation error of the subtraction.
    let llr_of = |acc: [f64; 2]| -> f64 {
        let value = match (acc[1] == f64::NEG_INFINITY, acc[0] == f64::NEG_INFINITY) {
            (false, false) => acc[1] - acc[0],
            (false, true) => f64::INFINITY,
            (true, false) => f64::NEG_INFINITY,
            (true, true) => 0.0,
        };
        if value.abs() >= SATURATION {
            value.signum() * f64::INFINITY
        } else {
            value
        }
    };
    let mut app = Vec::with_capacity(n);
    let mut extrinsic = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = [f64::NEG_INFINITY; 2];
        let mut acc_ext = [f64::NEG_INFINITY; 2];
        for s in 0..states {
            let a = alpha[j * states + s];
            if a == f64::NEG_INFINITY {
                continue;
            }
            for bit in 0..2 {
                let g = gamma(j, s, bit);
                let b = beta[(j + 1) * states + spec.branches[s][bit].next];
                if g == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
                    continue;
                }
                acc[bit] = combine(rule, acc[bit], a + g + b);
                acc_ext[bit] = combine(rule, acc_ext[bit], a + channel_term(j, s, bit) + b);
            }
        }
        let value = llr_of(acc);
        let prior = priors[j];
        app.push(value);
        extrinsic.push(if prior.is_infinite() {
            prior
        } else if value.is_infinite() {
            value
        } else {
            llr_of(acc_ext)
        });
    }
    Ok(BcjrOutput {
        app: LlrVector::from_vec(app),
        extrinsic: LlrVector::from_vec(extrinsic),
    })
}
