//! Flat `key = value` experiment configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Lists are
//! comma-separated; numeric lists also accept an inclusive range
//! `start:step:stop`. Every key in [`KEYS`] can be set from a file or
//! overridden afterwards through [`ExperimentConfig::set`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::equalize::{PrTarget, DEFAULT_TAPS, DEFAULT_TRAINING_LEN};
use crate::ldpc::{BpConfig, CheckRule};
use crate::rvcm::{IMax, RestartMode, RvcmConfig, SelectionSource};
use crate::trellis::Recursion;
use crate::turboeq::DEFAULT_OUTER_ITERS;
use crate::waveform::{StepParams, DEFAULT_SPAN, DEFAULT_TAYLOR_ORDER};
use crate::{Error, Result};

/// Where the parity-check matrix comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum CodeSource {
    Builtin(String),
    File(PathBuf),
    /// No parity checks: every word of length `n` is a codeword.
    Uncoded(usize),
}

impl std::fmt::Display for CodeSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CodeSource::Builtin(name) => f.write_str(name),
            CodeSource::File(path) => write!(f, "{}", path.display()),
            CodeSource::Uncoded(n) => write!(f, "uncoded:{n}"),
        }
    }
}

impl CodeSource {
    pub fn parse(value: &str) -> Result<Self> {
        let value = value.trim();
        if let Some(n) = value.strip_prefix("uncoded:") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::Config(format!("bad uncoded length `{n}`")))?;
            if n == 0 {
                return Err(Error::Config("uncoded length must be positive".into()));
            }
            return Ok(CodeSource::Uncoded(n));
        }
        if crate::codes::BUILTIN_NAMES.contains(&value) {
            return Ok(CodeSource::Builtin(value.to_string()));
        }
        if value.is_empty() {
            return Err(Error::Config("empty code".into()));
        }
        Ok(CodeSource::File(PathBuf::from(value)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    /// Full pipeline: tanh readback, noise, MMSE equalizer, PR trellis.
    Recording,
    /// Memory-0 shortcut: `z = bipolar(c) + N(0, σ²)` with `σ² = σe² + σm²`.
    Awgn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderVariant {
    Bp,
    Rvcm(IMax),
}

impl DecoderVariant {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderVariant::Bp => "bp",
            DecoderVariant::Rvcm(_) => "rvcm",
        }
    }

    /// `i_max` as written to CSV: 0 for plain BP, `n` resolved for `All`.
    pub fn i_max(&self, n: usize) -> usize {
        match self {
            DecoderVariant::Bp => 0,
            DecoderVariant::Rvcm(i) => i.resolve(n),
        }
    }
}

impl std::fmt::Display for DecoderVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecoderVariant::Bp => f.write_str("bp"),
            DecoderVariant::Rvcm(i) => write!(f, "rvcm:{i}"),
        }
    }
}

impl std::str::FromStr for DecoderVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "bp" => Ok(DecoderVariant::Bp),
            other => match other.strip_prefix("rvcm:") {
                Some(i) => Ok(DecoderVariant::Rvcm(
                    i.parse().map_err(|_| Error::Config(format!("bad i_max in `{other}`")))?,
                )),
                None => Err(Error::Config(format!(
                    "unknown decoder `{other}` (expected bp or rvcm:<i_max>)"
                ))),
            },
        }
    }
}

/// Recognized keys with a one-line description each.
pub const KEYS: &[(&str, &str)] = &[
    ("code", "built-in code name, alist path, or uncoded:<n>"),
    ("channel", "recording | awgn"),
    ("amplitude", "step response amplitude A"),
    ("pw50", "step response PW50 in symbol periods"),
    ("span", "dibit truncation span and pad length"),
    ("media_fraction", "share of the noise variance that is media noise"),
    ("jitter_max", "maximum sampling offset as a fraction of T"),
    ("taylor_order", "order of the jitter Taylor expansion"),
    ("target", "PR target coefficients, e.g. 4,6,4,2"),
    ("eq_taps", "equalizer length"),
    ("eq_training", "equalizer training symbols"),
    ("equalizer", "equalizer file to load instead of designing one"),
    ("snr_db", "channel SNR list or start:step:stop"),
    ("mismatch_db", "detector SNR mismatch list or start:step:stop"),
    ("decoders", "decoder variants, e.g. bp,rvcm:10,rvcm:n"),
    ("outer_iters", "detector/decoder round trips"),
    ("bp_iters", "BP iterations per decoder call"),
    ("early_stop", "stop BP on a zero syndrome"),
    ("damping", "BP message damping in (0, 1]"),
    ("check_rule", "tanh | min-sum"),
    ("recursion", "exact | max-star"),
    ("selection_source", "detector | bp"),
    ("include_baseline", "keep the baseline decode as an RVCM candidate"),
    ("early_exit", "skip RVCM when the baseline is a codeword"),
    ("restart", "loop | bp"),
    ("max_frames", "frame budget per point"),
    ("max_frame_errors", "stop a point after this many frame errors"),
    ("seed", "base seed"),
    ("timing", "record wall-clock seconds in the CSV (breaks byte-identical output)"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub code: CodeSource,
    pub channel: ChannelKind,
    pub step: StepParams,
    pub span: usize,
    pub media_fraction: f64,
    pub jitter_max: f64,
    pub taylor_order: usize,
    pub target: PrTarget,
    pub eq_taps: usize,
    pub eq_training: usize,
    pub equalizer: Option<PathBuf>,
    pub snr_db: Vec<f64>,
    pub mismatch_db: Vec<f64>,
    pub decoders: Vec<DecoderVariant>,
    pub outer_iters: usize,
    pub bp: BpConfig,
    pub recursion: Recursion,
    /// RVCM settings; `i_max` is taken from each decoder variant.
    pub rvcm: RvcmConfig,
    pub max_frames: u64,
    pub max_frame_errors: u64,
    pub seed: u64,
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            code: CodeSource::Builtin("cyclic-127-84".into()),
            channel: ChannelKind::Recording,
            step: StepParams::default(),
            span: DEFAULT_SPAN,
            media_fraction: 0.0,
            jitter_max: 0.0,
            taylor_order: DEFAULT_TAYLOR_ORDER,
            target: PrTarget::default(),
            eq_taps: DEFAULT_TAPS,
            eq_training: DEFAULT_TRAINING_LEN,
            equalizer: None,
            snr_db: vec![10.0],
            mismatch_db: vec![0.0],
            decoders: vec![DecoderVariant::Bp],
            outer_iters: DEFAULT_OUTER_ITERS,
            bp: BpConfig::default(),
            recursion: Recursion::Exact,
            rvcm: RvcmConfig::default(),
            max_frames: 10_000,
            max_frame_errors: 100,
            seed: 1,
            timing: false,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: `{v}` is not a number")))
}

fn parse_int<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: `{v}` is not a non-negative integer")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(Error::Config(format!("{key}: `{other}` is not a boolean"))),
    }
}

/// Comma list of numbers, or an inclusive range `start:step:stop`.
pub fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    let v = v.trim();
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() == 3 {
        let start = parse_f64(key, parts[0])?;
        let step = parse_f64(key, parts[1])?;
        let stop = parse_f64(key, parts[2])?;
        if !(step > 0.0) || stop < start {
            return Err(Error::Config(format!("{key}: bad range `{v}`")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // Multiplying instead of accumulating keeps values like 10.5 exact.
        return Ok((0..count).map(|i| start + i as f64 * step).collect());
    }
    v.split(',').map(|s| parse_f64(key, s)).collect()
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl ExperimentConfig {
    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "code" => self.code = CodeSource::parse(v)?,
            "channel" => {
                self.channel = match v {
                    "recording" => ChannelKind::Recording,
                    "awgn" => ChannelKind::Awgn,
                    other => return Err(Error::Config(format!("channel: unknown `{other}`"))),
                }
            }
            "amplitude" => self.step.amplitude = parse_f64(key, v)?,
            "pw50" => self.step.pw50 = parse_f64(key, v)?,
            "span" => self.span = parse_int(key, v)?,
            "media_fraction" => self.media_fraction = parse_f64(key, v)?,
            "jitter_max" => self.jitter_max = parse_f64(key, v)?,
            "taylor_order" => self.taylor_order = parse_int(key, v)?,
            "target" => {
                self.target = PrTarget::parse(v).map_err(|e| Error::Config(format!("target: {e}")))?
            }
            "eq_taps" => self.eq_taps = parse_int(key, v)?,
            "eq_training" => self.eq_training = parse_int(key, v)?,
            "equalizer" => self.equalizer = (!v.is_empty()).then(|| PathBuf::from(v)),
            "snr_db" => self.snr_db = parse_list(key, v)?,
            "mismatch_db" => self.mismatch_db = parse_list(key, v)?,
            "decoders" => {
                self.decoders = v
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<DecoderVariant>>>()?
            }
            "outer_iters" => self.outer_iters = parse_int(key, v)?,
            "bp_iters" => self.bp.max_iters = parse_int(key, v)?,
            "early_stop" => self.bp.early_stop = parse_bool(key, v)?,
            "damping" => self.bp.damping = parse_f64(key, v)?,
            "check_rule" => {
                self.bp.check_rule = match v {
                    "tanh" => CheckRule::Tanh,
                    "min-sum" => CheckRule::MinSum,
                    other => return Err(Error::Config(format!("check_rule: unknown `{other}`"))),
                }
            }
            "recursion" => {
                self.recursion = match v {
                    "exact" => Recursion::Exact,
                    "max-star" => Recursion::MaxStar,
                    other => return Err(Error::Config(format!("recursion: unknown `{other}`"))),
                }
            }
            "selection_source" => {
                self.rvcm.selection_source = match v {
                    "detector" => SelectionSource::DetectorApp,
                    "bp" => SelectionSource::BpPosterior,
                    other => {
                        return Err(Error::Config(format!("selection_source: unknown `{other}`")))
                    }
                }
            }
            "include_baseline" => self.rvcm.include_baseline = parse_bool(key, v)?,
            "early_exit" => self.rvcm.early_exit = parse_bool(key, v)?,
            "restart" => {
                self.rvcm.restart = match v {
                    "loop" => RestartMode::FullLoop,
                    "bp" => RestartMode::BpOnly,
                    other => return Err(Error::Config(format!("restart: unknown `{other}`"))),
                }
            }
            "max_frames" => self.max_frames = parse_int(key, v)?,
            "max_frame_errors" => self.max_frame_errors = parse_int(key, v)?,
            "seed" => self.seed = parse_int(key, v)?,
            "timing" => self.timing = parse_bool(key, v)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text` on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(key.trim(), value)
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Canonical text form; parsing it back gives the same config.
    pub fn to_text(&self) -> String {
        let rule = match self.bp.check_rule {
            CheckRule::Tanh => "tanh",
            CheckRule::MinSum => "min-sum",
        };
        let recursion = match self.recursion {
            Recursion::Exact => "exact",
            Recursion::MaxStar => "max-star",
        };
        let source = match self.rvcm.selection_source {
            SelectionSource::DetectorApp => "detector",
            SelectionSource::BpPosterior => "bp",
        };
        let restart = match self.rvcm.restart {
            RestartMode::FullLoop => "loop",
            RestartMode::BpOnly => "bp",
        };
        let channel = match self.channel {
            ChannelKind::Recording => "recording",
            ChannelKind::Awgn => "awgn",
        };
        let decoders: Vec<String> = self.decoders.iter().map(|d| d.to_string()).collect();
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("code", self.code.to_string());
        kv("channel", channel.into());
        kv("amplitude", self.step.amplitude.to_string());
        kv("pw50", self.step.pw50.to_string());
        kv("span", self.span.to_string());
        kv("media_fraction", self.media_fraction.to_string());
        kv("jitter_max", self.jitter_max.to_string());
        kv("taylor_order", self.taylor_order.to_string());
        kv("target", join(&self.target.coefficients));
        kv("eq_taps", self.eq_taps.to_string());
        kv("eq_training", self.eq_training.to_string());
        kv(
            "equalizer",
            self.equalizer.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
        );
        kv("snr_db", join(&self.snr_db));
        kv("mismatch_db", join(&self.mismatch_db));
        kv("decoders", decoders.join(","));
        kv("outer_iters", self.outer_iters.to_string());
        kv("bp_iters", self.bp.max_iters.to_string());
        kv("early_stop", self.bp.early_stop.to_string());
        kv("damping", self.bp.damping.to_string());
        kv("check_rule", rule.into());
        kv("recursion", recursion.into());
        kv("selection_source", source.into());
        kv("include_baseline", self.rvcm.include_baseline.to_string());
        kv("early_exit", self.rvcm.early_exit.to_string());
        kv("restart", restart.into());
        kv("max_frames", self.max_frames.to_string());
        kv("max_frame_errors", self.max_frame_errors.to_string());
        kv("seed", self.seed.to_string());
        kv("timing", self.timing.to_string());
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.snr_db.is_empty() {
            return bad("snr_db list is empty".into());
        }
        if self.mismatch_db.is_empty() {
            return bad("mismatch_db list is empty".into());
        }
        if self.decoders.is_empty() {
            return bad("decoders list is empty".into());
        }
        if self.snr_db.iter().chain(&self.mismatch_db).any(|v| !v.is_finite()) {
            return bad("snr_db and mismatch_db must be finite".into());
        }
        if self.max_frames == 0 {
            return bad("max_frames must be at least 1".into());
        }
        if self.max_frame_errors == 0 {
            return bad("max_frame_errors must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.media_fraction) {
            return bad(format!("media_fraction must lie in [0, 1], got {}", self.media_fraction));
        }
        if self.outer_iters == 0 {
            return bad("outer_iters must be at least 1".into());
        }
        if self.span < self.target.memory() {
            return bad(format!(
                "span ({}) must cover the target memory ({})",
                self.span,
                self.target.memory()
            ));
        }
        for d in &self.decoders {
            if let DecoderVariant::Rvcm(IMax::Count(0)) = d {
                if !self.rvcm.include_baseline {
                    return bad("rvcm:0 needs include_baseline = true".into());
                }
            }
        }
        self.step.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.bp.validate().map_err(|e| Error::Config(e.to_string()))?;
        if self.taylor_order == 0 {
            return bad("taylor_order must be at least 1".into());
        }
        if !(0.0..0.5).contains(&self.jitter_max) {
            return bad(format!("jitter_max must lie in [0, 0.5), got {}", self.jitter_max));
        }
        Ok(())
    }
}
