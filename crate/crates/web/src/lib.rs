//! wasm-bindgen bindings behind `www/index.html`: step and dibit curves, a
//! noisy readback frame, and one RVCM decode with its candidate list.

use pmr_core::harness::{
    decode_frame, frame_seed, generate_frame, write_trace, Decoded, DecoderVariant, ExperimentConfig, PointContext,
};
use pmr_core::rvcm::IMax;
use pmr_core::waveform::{
    apply_noise, dibit_response, snr_to_sigma, step_response, synthesize_noiseless, BipolarFrame, NoiseConfig,
    StepParams, DEFAULT_SPAN,
};
use wasm_bindgen::prelude::*;

fn js(e: pmr_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Curves {
    t: Vec<f64>,
    step: Vec<f64>,
    dibit: Vec<f64>,
}

#[wasm_bindgen]
impl Curves {
    pub fn t(&self) -> Vec<f64> {
        self.t.clone()
    }
    pub fn step(&self) -> Vec<f64> {
        self.step.clone()
    }
    pub fn dibit(&self) -> Vec<f64> {
        self.dibit.clone()
    }
}

fn curves(amplitude: f64, pw50: f64, half_width: f64, points: usize) -> pmr_core::Result<Curves> {
    let params = StepParams::new(amplitude, pw50)?;
    let points = points.max(2);
    let t: Vec<f64> = (0..points)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (points - 1) as f64)
        .collect();
    Ok(Curves {
        step: t.iter().map(|&x| step_response(x, &params)).collect(),
        dibit: t.iter().map(|&x| dibit_response(x, &params)).collect(),
        t,
    })
}

/// Step response and dibit sampled on `[-half_width, half_width]`.
#[wasm_bindgen]
pub fn step_curves(amplitude: f64, pw50: f64, half_width: f64, points: usize) -> Result<Curves, JsError> {
    curves(amplitude, pw50, half_width, points).map_err(js)
}

#[wasm_bindgen]
pub struct Readback {
    bits: Vec<u8>,
    noiseless: Vec<f64>,
    samples: Vec<f64>,
    pad: usize,
}

#[wasm_bindgen]
impl Readback {
    pub fn bits(&self) -> Vec<u8> {
        self.bits.clone()
    }
    pub fn noiseless(&self) -> Vec<f64> {
        self.noiseless.clone()
    }
    pub fn samples(&self) -> Vec<f64> {
        self.samples.clone()
    }
    /// Pad samples before the first data bit.
    pub fn pad(&self) -> usize {
        self.pad
    }
}

fn make_readback(
    n_bits: usize,
    pw50: f64,
    snr_db: f64,
    media_fraction: f64,
    jitter_max: f64,
    seed: u64,
) -> pmr_core::Result<Readback> {
    let params = StepParams::new(1.0, pw50)?;
    let mut state = pmr_core::derive_seed(&[seed, 0x6269]);
    let bits: Vec<u8> = (0..n_bits)
        .map(|_| {
            state = pmr_core::derive_seed(&[state]);
            (state >> 63) as u8
        })
        .collect();
    let (sigma_e, sigma_m) = snr_to_sigma(snr_db, media_fraction)?;
    let signal = synthesize_noiseless(&BipolarFrame::new(Vec::new(), bits.clone()), &params, DEFAULT_SPAN)?;
    let noise = NoiseConfig {
        sigma_e,
        sigma_m,
        jitter_max,
        seed,
        ..NoiseConfig::default()
    };
    let rb = apply_noise(&signal, &noise, &params)?;
    Ok(Readback {
        bits,
        noiseless: rb.noiseless,
        samples: rb.samples,
        pad: rb.pad,
    })
}

/// Random bits written and read back through the recording channel.
#[wasm_bindgen]
pub fn readback(
    n_bits: usize,
    pw50: f64,
    snr_db: f64,
    media_fraction: f64,
    jitter_max: f64,
    seed: u64,
) -> Result<Readback, JsError> {
    make_readback(n_bits, pw50, snr_db, media_fraction, jitter_max, seed).map_err(js)
}

#[wasm_bindgen]
pub struct RvcmDemo {
    n: usize,
    bp_bit_errors: usize,
    rvcm_bit_errors: usize,
    bp_codeword: bool,
    rvcm_codeword: bool,
    early_exit: bool,
    trace: String,
}

#[wasm_bindgen]
impl RvcmDemo {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn bp_bit_errors(&self) -> usize {
        self.bp_bit_errors
    }
    pub fn rvcm_bit_errors(&self) -> usize {
        self.rvcm_bit_errors
    }
    pub fn bp_codeword(&self) -> bool {
        self.bp_codeword
    }
    pub fn rvcm_codeword(&self) -> bool {
        self.rvcm_codeword
    }
    pub fn early_exit(&self) -> bool {
        self.early_exit
    }
    /// Candidate list as CSV (`position,sign,is_codeword,metric,selected`).
    pub fn trace(&self) -> String {
        self.trace.clone()
    }
}

fn run_demo(code: &str, channel: &str, snr_db: f64, i_max: &str, frame: u64) -> pmr_core::Result<RvcmDemo> {
    let mut cfg = ExperimentConfig::default();
    cfg.set("code", code)?;
    cfg.set("channel", channel)?;
    cfg.set("early_exit", "false")?;
    let i_max: IMax = i_max.parse()?;
    let ctx = PointContext::prepare(&cfg, snr_db)?;
    let data = generate_frame(&cfg, &ctx, frame_seed(&cfg, snr_db, 0.0, frame))?;
    let errors = |bits: &[u8]| bits.iter().zip(&data.codeword).filter(|(a, b)| a != b).count();
    let out = match decode_frame(&cfg, &ctx, DecoderVariant::Rvcm(i_max), &data.z, 0.0)? {
        Decoded::Rvcm(out) => out,
        Decoded::Bp(_) => unreachable!("rvcm variant requested"),
    };
    let mut trace = Vec::new();
    write_trace(&mut trace, &out.candidates).expect("writing to memory");
    let baseline = &out.candidates.baseline.decode;
    Ok(RvcmDemo {
        n: ctx.code.n(),
        bp_bit_errors: errors(&baseline.hard_bits),
        rvcm_bit_errors: errors(&out.best.hard_bits),
        bp_codeword: baseline.is_codeword,
        rvcm_codeword: out.best.is_codeword,
        early_exit: out.candidates.early_exit,
        trace: String::from_utf8(trace).expect("ascii CSV"),
    })
}

/// Decodes one seeded frame with BP and RVCM. `i_max` is a count or `n`.
#[wasm_bindgen]
pub fn rvcm_demo(code: &str, channel: &str, snr_db: f64, i_max: &str, frame: u64) -> Result<RvcmDemo, JsError> {
    run_demo(code, channel, snr_db, i_max, frame).map_err(js)
}
