//! Perpendicular magnetic recording read-channel simulator.
//!
//! The crate models a symbol-rate perpendicular recording channel (tanh step
//! response, media, jitter and electronic noise), shapes it to a partial
//! response target with an MMSE equalizer, and recovers LDPC-coded data with
//! a turbo equalizer (BCJR detector exchanging extrinsic information with a
//! sum-product decoder). On top of the turbo equalizer sits the RVCM list
//! decoder: it pins the least reliable coordinates to `±∞`, restarts the
//! iterative decoder and keeps the candidate closest to the received samples.
//!
//! Module map:
//!
//! - [`waveform`]: step/dibit responses, noiseless synthesis, noise injection.
//! - [`equalize`]: PR targets and least-squares FIR equalizer design.
//! - [`trellis`]: PR trellis and the BCJR MAP detector.
//! - [`ldpc`]: parity-check matrices, alist I/O, encoding, belief propagation.
//! - [`codes`]: the shipped cyclic and quasi-cyclic LDPC constructions.
//! - [`turboeq`]: the detector/decoder outer loop.
//! - [`rvcm`]: received-vector-coordinate-modification list decoding.
//! - [`harness`]: Monte Carlo BER/FER driver, config files and CSV output.

pub mod codes;
pub mod equalize;
mod error;
pub mod gf2;
pub mod harness;
pub mod ldpc;
mod llr;
pub mod rvcm;
pub mod trellis;
pub mod turboeq;
pub mod waveform;

pub use error::{Error, Result};
pub use llr::{bipolar, LlrVector, Sign};

/// Symbol written in the known preamble and postamble of every frame.
///
/// Code bit 0 maps to bipolar −1, so pads are runs of code bit 0.
pub const PAD_SYMBOL: f64 = -1.0;

/// Derives an RNG seed from a list of integers with the splitmix64 finalizer.
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut h = 0x243F_6A88_85A3_08D3u64;
    for &p in parts {
        h = h.wrapping_add(p).wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h = z ^ (z >> 31);
    }
    h
}
