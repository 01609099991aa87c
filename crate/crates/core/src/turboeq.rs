//! Turbo equalization: the BCJR detector and the BP decoder exchanging
//! extrinsic LLRs until the decoder finds a codeword.
//!
//! One outer iteration runs the detector with the decoder's extrinsic output
//! as priors (zeros on the first pass), then BP on the detector's extrinsic
//! output. Pinned positions are forced to `±∞` in the LLRs handed to BP on
//! every pass; the decoder returns them as `±∞` extrinsic values, which the
//! detector in turn treats as hard constraints.

use crate::ldpc::{bp_decode, BpConfig, DecodeResult, ParityCheckMatrix};
use crate::trellis::{bcjr, DetectorConfig, TrellisSpec};
use crate::{Error, LlrVector, Result, Sign};

pub const DEFAULT_OUTER_ITERS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopConfig {
    pub outer_iters: usize,
    pub bp: BpConfig,
    pub detector: DetectorConfig,
}

impl LoopConfig {
    pub fn new(detector: DetectorConfig) -> Self {
        LoopConfig {
            outer_iters: DEFAULT_OUTER_ITERS,
            bp: BpConfig::default(),
            detector,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.outer_iters == 0 {
            return Err(Error::InvalidParameter("outer_iters must be at least 1".into()));
        }
        self.bp.validate()?;
        self.detector.validate()
    }
}

/// A coordinate forced to `±∞` in the decoder input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pin {
    pub position: usize,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopResult {
    pub decode: DecodeResult,
    /// Detector a-posteriori LLRs from the last outer iteration.
    pub detector_app: LlrVector,
    /// LLRs fed to BP on the last outer iteration (detector extrinsic plus pins).
    pub decoder_input: LlrVector,
    /// Reliability sequence used for critical-symbol selection; equals
    /// `detector_app`.
    pub reliability: LlrVector,
    /// Syndrome weight after each outer iteration. The loop ends early on a
    /// codeword or when the decoder input stops changing.
    pub trace: Vec<usize>,
}

impl LoopResult {
    pub fn outer_iters_used(&self) -> usize {
        self.trace.len()
    }
}

fn apply_pins(llr: &mut LlrVector, pins: &[Pin]) -> Result<()> {
    for pin in pins {
        if pin.position >= llr.len() {
            return Err(Error::InvalidParameter(format!(
                "pinned position {} outside codeword of length {}",
                pin.position,
                llr.len()
            )));
        }
        llr.saturate(pin.position, pin.sign);
    }
    Ok(())
}

/// Runs the full detector/decoder loop on equalized samples `z`
/// (`n + memory` long). The function is pure: identical inputs give
/// identical results.
pub fn run(
    z: &[f64],
    code: &ParityCheckMatrix,
    trellis: &TrellisSpec,
    cfg: &LoopConfig,
    pins: &[Pin],
) -> Result<LoopResult> {
    cfg.validate()?;
    let n = code.n();
    let mut priors = LlrVector::zeros(n);
    let mut trace = Vec::with_capacity(cfg.outer_iters);
    let mut last = None;
    for _ in 0..cfg.outer_iters {
        let detected = bcjr(trellis, z, &priors, &cfg.detector)?;
        let mut decoder_input = detected.extrinsic;
        apply_pins(&mut decoder_input, pins)?;
        // Same decoder input as the previous pass: BP would repeat itself.
        if let Some((_, _, previous)) = &last {
            if *previous == decoder_input {
                break;
            }
        }
        let decode = bp_decode(code, &decoder_input, &cfg.bp)?;
        trace.push(code.syndrome_weight(&decode.hard_bits));

        priors = LlrVector::from_vec(
            decode
                .soft_llr
                .values()
                .iter()
                .zip(decoder_input.values())
                .map(|(&post, &input)| if input.is_infinite() || post.is_infinite() { post } else { post - input })
                .collect(),
        );
        let done = decode.is_codeword;
        last = Some((decode, detected.app, decoder_input));
        if done {
            break;
        }
    }
    let (decode, detector_app, decoder_input) = last.expect("outer_iters >= 1");
    Ok(LoopResult {
        decode,
        reliability: detector_app.clone(),
        detector_app,
        decoder_input,
        trace,
    })
}

/// BP alone on stored decoder-input LLRs, with pins applied on top.
pub fn decode_pinned(code: &ParityCheckMatrix, channel: &LlrVector, bp: &BpConfig, pins: &[Pin]) -> Result<DecodeResult> {
    let mut input = channel.clone();
    apply_pins(&mut input, pins)?;
    bp_decode(code, &input, bp)
}
