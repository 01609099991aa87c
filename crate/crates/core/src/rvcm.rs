//! Received-vector-coordinate-modification (RVCM) list decoding.
//!
//! After a failed baseline decode, the `i_max` least reliable coordinates are
//! visited in order. Each one is pinned to `−∞` and then to `+∞`, the
//! iterative decoder is restarted with that single pin, and every decoded
//! vector joins a candidate list. The output is the codeword candidate whose
//! noiseless target-domain reconstruction lies closest (squared Euclidean
//! distance) to the equalized samples.

use crate::equalize::PrTarget;
use crate::ldpc::{DecodeResult, ParityCheckMatrix};
use crate::trellis::TrellisSpec;
use crate::turboeq::{self, LoopConfig, LoopResult, Pin};
use crate::{bipolar, Error, LlrVector, Result, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IMax {
    Count(usize),
    /// Every coordinate, `i_max = n`.
    All,
}

impl IMax {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            IMax::Count(c) => c.min(n),
            IMax::All => n,
        }
    }
}

impl std::fmt::Display for IMax {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IMax::Count(c) => write!(f, "{c}"),
            IMax::All => f.write_str("n"),
        }
    }
}

impl std::str::FromStr for IMax {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "n" | "all" | "N" => Ok(IMax::All),
            other => other
                .parse()
                .map(IMax::Count)
                .map_err(|_| Error::InvalidParameter(format!("bad i_max `{other}`"))),
        }
    }
}

/// Which soft vector ranks the coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionSource {
    /// A-posteriori LLRs of the detector on the last baseline pass.
    #[default]
    DetectorApp,
    /// Posterior LLRs of the final baseline BP pass.
    BpPosterior,
}

/// What "restart the iterative decoder" re-runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RestartMode {
    /// The whole detector/decoder loop.
    #[default]
    FullLoop,
    /// BP only, on the baseline's last decoder input.
    BpOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RvcmConfig {
    pub i_max: IMax,
    pub selection_source: SelectionSource,
    /// Keep the baseline decode in the list of selectable candidates.
    pub include_baseline: bool,
    /// Return the baseline immediately when it is already a codeword.
    pub early_exit: bool,
    pub restart: RestartMode,
}

impl Default for RvcmConfig {
    fn default() -> Self {
        RvcmConfig {
            i_max: IMax::Count(10),
            selection_source: SelectionSource::DetectorApp,
            include_baseline: true,
            early_exit: true,
            restart: RestartMode::FullLoop,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Baseline,
    Pinned(Pin),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub origin: Origin,
    pub decode: DecodeResult,
    pub metric: f64,
}

impl Candidate {
    pub fn is_codeword(&self) -> bool {
        self.decode.is_codeword
    }

    fn rank_key(&self) -> (bool, f64) {
        (!self.is_codeword(), self.metric)
    }
}

/// Where the selected candidate sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selected {
    Baseline,
    Entry(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub baseline: Candidate,
    /// `d⁻` then `d⁺` for each critical position, in selection order.
    pub entries: Vec<Candidate>,
    /// Critical positions, least reliable first.
    pub positions: Vec<usize>,
    /// Reliability vector as stored before any coordinate was modified.
    pub reliability: LlrVector,
    pub selected: Selected,
    /// Whether the search stopped on a baseline codeword.
    pub early_exit: bool,
}

impl CandidateSet {
    pub fn selected(&self) -> &Candidate {
        match self.selected {
            Selected::Baseline => &self.baseline,
            Selected::Entry(i) => &self.entries[i],
        }
    }

    /// Number of decodes the set holds, baseline included.
    pub fn len(&self) -> usize {
        self.entries.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RvcmOutput {
    pub best: DecodeResult,
    pub candidates: CandidateSet,
    pub baseline_loop: LoopResult,
}

/// The `i_max` positions with the smallest `|l|`, least reliable first; ties
/// go to the lower index.
pub fn select_critical(reliability: &[f64], i_max: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..reliability.len()).collect();
    order.sort_by(|&a, &b| reliability[a].abs().total_cmp(&reliability[b].abs()).then(a.cmp(&b)));
    order.truncate(i_max);
    order
}

/// Noiseless target-domain signal of a candidate: `0.5·bipolar(c) ⊛ target`
/// with `pad_symbol` before and after the codeword (`n + memory` samples).
pub fn reconstruct(bits: &[u8], target: &PrTarget, pad_symbol: f64) -> Vec<f64> {
    let mut symbols: Vec<f64> = bits.iter().map(|&b| bipolar(b)).collect();
    symbols.extend(std::iter::repeat_n(pad_symbol, target.memory()));
    target.convolve(&symbols, pad_symbol)
}

/// `Σ_j (z_j − x̂_j)²` against the candidate's reconstruction.
pub fn euclidean_metric(bits: &[u8], z: &[f64], target: &PrTarget, pad_symbol: f64) -> Result<f64> {
    if z.len() != bits.len() + target.memory() {
        return Err(Error::LengthMismatch {
            what: "equalized samples (n + memory)",
            expected: bits.len() + target.memory(),
            actual: z.len(),
        });
    }
    Ok(reconstruct(bits, target, pad_symbol)
        .iter()
        .zip(z)
        .map(|(x, z)| (z - x) * (z - x))
        .sum())
}

struct Decoder<'a> {
    z: &'a [f64],
    code: &'a ParityCheckMatrix,
    trellis: &'a TrellisSpec,
    loop_cfg: &'a LoopConfig,
    restart: RestartMode,
    baseline_input: &'a LlrVector,
}

impl Decoder<'_> {
    fn candidate(&self, pin: Pin) -> Result<Candidate> {
        let pins = [pin];
        let decode = match self.restart {
            RestartMode::FullLoop => {
                turboeq::run(self.z, self.code, self.trellis, self.loop_cfg, &pins)?.decode
            }
            RestartMode::BpOnly => {
                turboeq::decode_pinned(self.code, self.baseline_input, &self.loop_cfg.bp, &pins)?
            }
        };
        let metric = euclidean_metric(&decode.hard_bits, self.z, &self.trellis.target, self.trellis.pad_symbol)?;
        Ok(Candidate {
            origin: Origin::Pinned(pin),
            decode,
            metric,
        })
    }
}

#[cfg(feature = "parallel")]
fn generate(decoder: &Decoder<'_>, pins: &[Pin]) -> Result<Vec<Candidate>> {
    use rayon::prelude::*;
    pins.par_iter().map(|&p| decoder.candidate(p)).collect()
}

#[cfg(not(feature = "parallel"))]
fn generate(decoder: &Decoder<'_>, pins: &[Pin]) -> Result<Vec<Candidate>> {
    pins.iter().map(|&p| decoder.candidate(p)).collect()
}

/// Runs the baseline loop and, if needed, the RVCM search.
pub fn rvcm_decode(
    z: &[f64],
    code: &ParityCheckMatrix,
    trellis: &TrellisSpec,
    loop_cfg: &LoopConfig,
    cfg: &RvcmConfig,
) -> Result<RvcmOutput> {
    let n = code.n();
    let i_max = cfg.i_max.resolve(n);
    if i_max == 0 && !cfg.include_baseline {
        return Err(Error::InvalidParameter(
            "i_max = 0 without the baseline leaves no candidates".into(),
        ));
    }

    let baseline_loop = turboeq::run(z, code, trellis, loop_cfg, &[])?;
    let baseline = Candidate {
        origin: Origin::Baseline,
        metric: euclidean_metric(&baseline_loop.decode.hard_bits, z, &trellis.target, trellis.pad_symbol)?,
        decode: baseline_loop.decode.clone(),
    };

    // Step 1: store the reliability vector.
    let reliability = match cfg.selection_source {
        SelectionSource::DetectorApp => baseline_loop.reliability.clone(),
        SelectionSource::BpPosterior => baseline_loop.decode.soft_llr.clone(),
    };

    if cfg.early_exit && baseline.is_codeword() {
        return Ok(RvcmOutput {
            best: baseline.decode.clone(),
            candidates: CandidateSet {
                baseline,
                entries: Vec::new(),
                positions: Vec::new(),
                reliability,
                selected: Selected::Baseline,
                early_exit: true,
            },
            baseline_loop,
        });
    }

    let positions = select_critical(reliability.values(), i_max);
    // Steps 2a/2b: −∞ then +∞ at each critical position.
    let pins: Vec<Pin> = positions
        .iter()
        .flat_map(|&position| {
            [Sign::Minus, Sign::Plus].map(|sign| Pin { position, sign })
        })
        .collect();
    let decoder = Decoder {
        z,
        code,
        trellis,
        loop_cfg,
        restart: cfg.restart,
        baseline_input: &baseline_loop.decoder_input,
    };
    let entries = generate(&decoder, &pins)?;

    // Step 3: codewords first, then the smallest distance; earliest wins ties.
    let mut selected = if cfg.include_baseline {
        Some((Selected::Baseline, baseline.rank_key()))
    } else {
        None
    };
    for (i, c) in entries.iter().enumerate() {
        let key = c.rank_key();
        if selected.as_ref().is_none_or(|(_, best)| key < *best) {
            selected = Some((Selected::Entry(i), key));
        }
    }
    let (selected, _) = selected.expect("candidate list is non-empty");
    let candidates = CandidateSet {
        baseline,
        entries,
        positions,
        reliability,
        selected,
        early_exit: false,
    };
    Ok(RvcmOutput {
        best: candidates.selected().decode.clone(),
        candidates,
        baseline_loop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_positions_by_magnitude() {
        assert_eq!(select_critical(&[5.0, -0.1, 3.0, 0.2], 2), vec![1, 3]);
        let mut all = select_critical(&[5.0, -0.1, 3.0, 0.2], 4);
        assert_eq!(all, vec![1, 3, 2, 0]);
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
        assert_eq!(select_critical(&[1.0, -1.0, 1.0, -1.0, 1.0], 3), vec![0, 1, 2]);
        assert_eq!(select_critical(&[f64::INFINITY, 0.5], 2), vec![1, 0]);
    }

    #[test]
    fn i_max_parsing() {
        assert_eq!("n".parse::<IMax>().unwrap(), IMax::All);
        assert_eq!("10".parse::<IMax>().unwrap(), IMax::Count(10));
        assert!("ten".parse::<IMax>().is_err());
        assert_eq!(IMax::All.resolve(15), 15);
        assert_eq!(IMax::Count(40).resolve(15), 15);
        assert_eq!(IMax::All.to_string(), "n");
    }

    #[test]
    fn metric_of_exact_reconstruction_is_zero() {
        let target = PrTarget::default();
        let bits = [1, 0, 0, 1, 1, 1, 0, 1];
        let z = reconstruct(&bits, &target, crate::PAD_SYMBOL);
        assert_eq!(euclidean_metric(&bits, &z, &target, crate::PAD_SYMBOL).unwrap(), 0.0);
        assert!(euclidean_metric(&bits, &z[1..], &target, crate::PAD_SYMBOL).is_err());
    }

    #[test]
    fn single_flip_delta_matches_closed_form() {
        // Flipping symbol k changes x̂_{k+i} by ∓g_i (0.5·2·g_i); with z = x̂(c)
        // the metric of the flipped word is Σ g_i².
        let target = PrTarget::default();
        let bits = [0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 1, 0];
        let z = reconstruct(&bits, &target, crate::PAD_SYMBOL);
        let mut flipped = bits;
        flipped[5] ^= 1;
        let m = euclidean_metric(&flipped, &z, &target, crate::PAD_SYMBOL).unwrap();
        assert!((m - (16.0 + 36.0 + 16.0 + 4.0)).abs() < 1e-12);

        let noise: Vec<f64> = (0..z.len()).map(|j| 0.1 * ((j * 7 % 5) as f64 - 2.0)).collect();
        let zn: Vec<f64> = z.iter().zip(&noise).map(|(a, b)| a + b).collect();
        let m0 = euclidean_metric(&bits, &zn, &target, crate::PAD_SYMBOL).unwrap();
        let m1 = euclidean_metric(&flipped, &zn, &target, crate::PAD_SYMBOL).unwrap();
        // Σ (e_j + δ_j)² − e_j² with δ = x̂(c) − x̂(c') = −g_i·sign(b_5) at j = 5 + i.
        let sign = bipolar(bits[5]);
        let expected: f64 = target
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let e = noise[5 + i];
                let d = sign * g;
                (e + d) * (e + d) - e * e
            })
            .sum();
        assert!((m1 - m0 - expected).abs() < 1e-10);
    }

    #[test]
    fn metric_negation_symmetry() {
        let target = PrTarget::default();
        let bits = [1, 1, 0, 1, 0, 0, 0, 1];
        let complement: Vec<u8> = bits.iter().map(|b| b ^ 1).collect();
        let z: Vec<f64> = (0..11).map(|j| (j as f64 * 0.77).sin() * 5.0).collect();
        let neg: Vec<f64> = z.iter().map(|v| -v).collect();
        let a = euclidean_metric(&bits, &z, &target, -1.0).unwrap();
        let b = euclidean_metric(&complement, &neg, &target, 1.0).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}
