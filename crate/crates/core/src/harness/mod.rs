//! Monte Carlo BER/FER harness.
//!
//! A point is `(snr_db, mismatch_db, decoder)`. Frame `i` of a point draws
//! its message and noise from `derive_seed([seed, snr, mismatch, i])`, so
//! every decoder variant at the same point sees the same frames and results
//! do not depend on how frames are spread across threads. Frames are decoded
//! in batches and accumulated in index order; the stop rule (`max_frames` or
//! `max_frame_errors`) is applied per frame during accumulation.

mod config;
mod record;

use std::path::Path;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::equalize::{design_mmse, EqualizerDesign, PrTarget};
use crate::ldpc::{load_alist, DecodeResult, ParityCheckMatrix};
use crate::rvcm::{rvcm_decode, RvcmConfig, RvcmOutput};
use crate::trellis::{build_trellis, DetectorConfig, TrellisSpec};
use crate::turboeq::{self, LoopConfig};
use crate::waveform::{self, BipolarFrame, NoiseConfig};
use crate::{bipolar, codes, derive_seed, Error, Result};

pub use config::{parse_list, ChannelKind, CodeSource, DecoderVariant, ExperimentConfig, KEYS};
pub use record::{wilson_interval, write_trace, BerRecord, CsvSink, CSV_HEADER, TRACE_HEADER, Z_95};

const BATCH: usize = 256;
const EQUALIZER_TAG: u64 = 0x4551;

pub fn load_code(source: &CodeSource) -> Result<ParityCheckMatrix> {
    match source {
        CodeSource::Builtin(name) => codes::builtin(name),
        CodeSource::File(path) => load_alist(path),
        CodeSource::Uncoded(n) => Ok(ParityCheckMatrix::uncoded(*n)),
    }
}

/// Everything fixed for one SNR: code, trellis, equalizer and noise levels.
#[derive(Debug, Clone)]
pub struct PointContext {
    pub code: ParityCheckMatrix,
    pub trellis: TrellisSpec,
    pub equalizer: Option<EqualizerDesign>,
    pub snr_db: f64,
    pub sigma_e: f64,
    pub sigma_m: f64,
    /// Noise variance the detector assumes before any mismatch offset.
    pub detector_sigma2: f64,
}

impl PointContext {
    /// Loads the code and, for the recording channel, designs (or loads) the
    /// equalizer at this SNR.
    pub fn prepare(cfg: &ExperimentConfig, snr_db: f64) -> Result<Self> {
        Self::with_code(cfg, load_code(&cfg.code)?, snr_db)
    }

    pub fn with_code(cfg: &ExperimentConfig, code: ParityCheckMatrix, snr_db: f64) -> Result<Self> {
        cfg.validate()?;
        match cfg.channel {
            ChannelKind::Awgn => {
                let sigma2 = waveform::total_noise_variance(snr_db);
                let target = PrTarget::new(vec![2.0])?;
                Ok(PointContext {
                    code,
                    trellis: build_trellis(&target)?,
                    equalizer: None,
                    snr_db,
                    sigma_e: sigma2.sqrt(),
                    sigma_m: 0.0,
                    detector_sigma2: sigma2,
                })
            }
            ChannelKind::Recording => {
                let (sigma_e, sigma_m) = waveform::snr_to_sigma(snr_db, cfg.media_fraction)?;
                let noise = NoiseConfig {
                    sigma_e,
                    sigma_m,
                    jitter_max: cfg.jitter_max,
                    taylor_order: cfg.taylor_order,
                    seed: 0,
                };
                let equalizer = match &cfg.equalizer {
                    Some(path) => {
                        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                        EqualizerDesign::from_text(&text)?
                    }
                    None => design_mmse(
                        &cfg.step,
                        &noise,
                        &cfg.target,
                        cfg.eq_taps,
                        cfg.eq_training,
                        cfg.span,
                        derive_seed(&[cfg.seed, snr_db.to_bits(), EQUALIZER_TAG]),
                    )?,
                };
                // A loaded equalizer carries no residual; fall back to the
                // channel noise variance scaled by the tap energy.
                let detector_sigma2 = match equalizer.residual_mse {
                    Some(mse) if mse > 0.0 => mse,
                    _ => {
                        let energy: f64 = equalizer.taps.iter().map(|t| t * t).sum();
                        (sigma_e * sigma_e + sigma_m * sigma_m) * energy.max(f64::MIN_POSITIVE)
                    }
                };
                Ok(PointContext {
                    code,
                    trellis: build_trellis(&cfg.target)?,
                    equalizer: Some(equalizer),
                    snr_db,
                    sigma_e,
                    sigma_m,
                    detector_sigma2,
                })
            }
        }
    }

    pub fn loop_config(&self, cfg: &ExperimentConfig, mismatch_db: f64) -> LoopConfig {
        LoopConfig {
            outer_iters: cfg.outer_iters,
            bp: cfg.bp,
            detector: DetectorConfig {
                assumed_sigma2: self.detector_sigma2,
                mismatch_db,
                recursion: cfg.recursion,
            },
        }
    }
}

/// One transmitted frame and the detector input it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameData {
    pub message: Vec<u8>,
    pub codeword: Vec<u8>,
    /// Equalized samples, `n + memory` long.
    pub z: Vec<f64>,
}

pub fn frame_seed(cfg: &ExperimentConfig, snr_db: f64, mismatch_db: f64, index: u64) -> u64 {
    derive_seed(&[cfg.seed, snr_db.to_bits(), mismatch_db.to_bits(), index])
}

/// Draws a uniform message, encodes it and passes it through the channel.
pub fn generate_frame(cfg: &ExperimentConfig, ctx: &PointContext, seed: u64) -> Result<FrameData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = ctx.code.k();
    let message: Vec<u8> = (0..k).map(|_| rng.random::<bool>() as u8).collect();
    let codeword = ctx.code.encode(&message)?;
    let z = match cfg.channel {
        ChannelKind::Awgn => codeword
            .iter()
            .map(|&c| {
                let g: f64 = rng.sample(StandardNormal);
                bipolar(c) + ctx.sigma_e * g
            })
            .collect(),
        ChannelKind::Recording => {
            let frame = BipolarFrame::new(message.clone(), codeword.clone());
            let signal = waveform::synthesize_noiseless(&frame, &cfg.step, cfg.span)?;
            let noise = NoiseConfig {
                sigma_e: ctx.sigma_e,
                sigma_m: ctx.sigma_m,
                jitter_max: cfg.jitter_max,
                taylor_order: cfg.taylor_order,
                seed: rng.next_u64(),
            };
            let readback = waveform::apply_noise(&signal, &noise, &cfg.step)?;
            let eq = ctx.equalizer.as_ref().expect("recording context has an equalizer");
            eq.apply(&readback, ctx.trellis.memory())?
        }
    };
    Ok(FrameData { message, codeword, z })
}

/// Output of one decoder on one frame.
#[derive(Debug, Clone, PartialEq)]
pub enum Decoded {
    Bp(DecodeResult),
    Rvcm(Box<RvcmOutput>),
}

impl Decoded {
    pub fn result(&self) -> &DecodeResult {
        match self {
            Decoded::Bp(d) => d,
            Decoded::Rvcm(out) => &out.best,
        }
    }
}

pub fn decode_frame(
    cfg: &ExperimentConfig,
    ctx: &PointContext,
    decoder: DecoderVariant,
    z: &[f64],
    mismatch_db: f64,
) -> Result<Decoded> {
    let loop_cfg = ctx.loop_config(cfg, mismatch_db);
    match decoder {
        DecoderVariant::Bp => Ok(Decoded::Bp(turboeq::run(z, &ctx.code, &ctx.trellis, &loop_cfg, &[])?.decode)),
        DecoderVariant::Rvcm(i_max) => {
            let rvcm = RvcmConfig { i_max, ..cfg.rvcm };
            Ok(Decoded::Rvcm(Box::new(rvcm_decode(z, &ctx.code, &ctx.trellis, &loop_cfg, &rvcm)?)))
        }
    }
}

/// Message-bit errors of one frame.
fn frame_errors(
    cfg: &ExperimentConfig,
    ctx: &PointContext,
    decoder: DecoderVariant,
    mismatch_db: f64,
    index: u64,
) -> Result<u64> {
    let frame = generate_frame(cfg, ctx, frame_seed(cfg, ctx.snr_db, mismatch_db, index))?;
    let decoded = decode_frame(cfg, ctx, decoder, &frame.z, mismatch_db)?;
    let estimate = ctx.code.encoder().extract_message(&decoded.result().hard_bits);
    Ok(estimate.iter().zip(&frame.message).filter(|(a, b)| a != b).count() as u64)
}

#[cfg(feature = "parallel")]
fn batch_errors(
    cfg: &ExperimentConfig,
    ctx: &PointContext,
    decoder: DecoderVariant,
    mismatch_db: f64,
    range: std::ops::Range<u64>,
) -> Vec<Result<u64>> {
    use rayon::prelude::*;
    range
        .into_par_iter()
        .map(|i| frame_errors(cfg, ctx, decoder, mismatch_db, i))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn batch_errors(
    cfg: &ExperimentConfig,
    ctx: &PointContext,
    decoder: DecoderVariant,
    mismatch_db: f64,
    range: std::ops::Range<u64>,
) -> Vec<Result<u64>> {
    range.map(|i| frame_errors(cfg, ctx, decoder, mismatch_db, i)).collect()
}

/// Simulates one point with a prepared context.
pub fn run_point_with(
    cfg: &ExperimentConfig,
    ctx: &PointContext,
    mismatch_db: f64,
    decoder: DecoderVariant,
) -> Result<BerRecord> {
    let start = cfg.timing.then(std::time::Instant::now);
    let mut frames = 0u64;
    let mut bit_errors = 0u64;
    let mut frame_errors = 0u64;
    'outer: while frames < cfg.max_frames && frame_errors < cfg.max_frame_errors {
        let end = (frames + BATCH as u64).min(cfg.max_frames);
        for errors in batch_errors(cfg, ctx, decoder, mismatch_db, frames..end) {
            let errors = errors?;
            frames += 1;
            bit_errors += errors;
            frame_errors += (errors > 0) as u64;
            if frame_errors >= cfg.max_frame_errors {
                break 'outer;
            }
        }
    }
    Ok(BerRecord {
        snr_db: ctx.snr_db,
        mismatch_db,
        decoder: decoder.name().to_string(),
        i_max: decoder.i_max(ctx.code.n()),
        frames,
        bit_errors,
        frame_errors,
        k: ctx.code.k(),
        seconds: start.map_or(0.0, |s| s.elapsed().as_secs_f64()),
    })
}

/// Simulates one `(snr, mismatch, decoder)` point from scratch.
pub fn run_point(cfg: &ExperimentConfig, snr_db: f64, mismatch_db: f64, decoder: DecoderVariant) -> Result<BerRecord> {
    let ctx = PointContext::prepare(cfg, snr_db)?;
    run_point_with(cfg, &ctx, mismatch_db, decoder)
}

/// A point that could not be simulated.
#[derive(Debug)]
pub struct PointFailure {
    pub snr_db: f64,
    pub mismatch_db: f64,
    pub decoder: DecoderVariant,
    pub error: Error,
}

#[derive(Debug, Default)]
pub struct SweepOutcome {
    pub records: Vec<BerRecord>,
    pub failures: Vec<PointFailure>,
}

/// Runs `snr_db × mismatch_db × decoders` in that nesting order. Each record
/// is written to `sink` as soon as it is complete; failed points are logged,
/// collected and skipped.
pub fn run_sweep(cfg: &ExperimentConfig, mut sink: Option<&mut CsvSink>) -> Result<SweepOutcome> {
    cfg.validate()?;
    let code = load_code(&cfg.code)?;
    let mut outcome = SweepOutcome::default();
    for &snr in &cfg.snr_db {
        let ctx = match PointContext::with_code(cfg, code.clone(), snr) {
            Ok(ctx) => ctx,
            Err(error) => {
                log::error!("snr {snr} dB: {error}");
                for &mismatch_db in &cfg.mismatch_db {
                    for &decoder in &cfg.decoders {
                        outcome.failures.push(PointFailure {
                            snr_db: snr,
                            mismatch_db,
                            decoder,
                            error: Error::Config(error.to_string()),
                        });
                    }
                }
                continue;
            }
        };
        for &mismatch in &cfg.mismatch_db {
            for &decoder in &cfg.decoders {
                match run_point_with(cfg, &ctx, mismatch, decoder) {
                    Ok(record) => {
                        log::info!(
                            "snr {snr} dB, mismatch {mismatch} dB, {decoder}: {} frames, fer {:.3e}, ber {:.3e}",
                            record.frames,
                            record.fer(),
                            record.ber()
                        );
                        if let Some(sink) = sink.as_deref_mut() {
                            sink.write(&record)?;
                        }
                        outcome.records.push(record);
                    }
                    Err(error) => {
                        log::error!("snr {snr} dB, mismatch {mismatch} dB, {decoder}: {error}");
                        outcome.failures.push(PointFailure {
                            snr_db: snr,
                            mismatch_db: mismatch,
                            decoder,
                            error,
                        });
                    }
                }
            }
        }
    }
    Ok(outcome)
}

/// Sweeps into a fresh CSV file at `path`.
pub fn run_sweep_to_csv(cfg: &ExperimentConfig, path: impl AsRef<Path>) -> Result<SweepOutcome> {
    let mut sink = CsvSink::create(path)?;
    run_sweep(cfg, Some(&mut sink))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn awgn_cfg() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.set("channel", "awgn").unwrap();
        cfg.set("code", "cyclic-15-7").unwrap();
        cfg.max_frames = 600;
        cfg
    }

    #[test]
    fn noiseless_point_is_error_free() {
        let mut cfg = awgn_cfg();
        cfg.decoders = vec![DecoderVariant::Bp];
        let r = run_point(&cfg, 60.0, 0.0, DecoderVariant::Bp).unwrap();
        assert_eq!((r.frames, r.bit_errors, r.frame_errors), (600, 0, 0));
        assert_eq!(r.k, 7);
    }

    #[test]
    fn stop_rule_counts_exactly() {
        let mut cfg = awgn_cfg();
        cfg.max_frame_errors = 7;
        let r = run_point(&cfg, 0.0, 0.0, DecoderVariant::Bp).unwrap();
        assert_eq!(r.frame_errors, 7);
        assert!(r.frames < 600);
    }

    #[test]
    fn generated_frames_are_codewords() {
        let cfg = awgn_cfg();
        let ctx = PointContext::prepare(&cfg, 8.0).unwrap();
        let f = generate_frame(&cfg, &ctx, 99).unwrap();
        assert!(ctx.code.is_codeword(&f.codeword));
        assert_eq!(f.z.len(), 15);
        assert_eq!(generate_frame(&cfg, &ctx, 99).unwrap(), f);
    }
}
