//! Per-point results, confidence intervals and the CSV formats.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::rvcm::{CandidateSet, Origin, Selected};
use crate::{Error, Result, Sign};

/// Header of the BER/FER CSV.
pub const CSV_HEADER: &str = "snr_db,mismatch_db,decoder,i_max,frames,bit_errors,frame_errors,ber,fer,seconds";

/// Header of the RVCM decode-trace CSV.
pub const TRACE_HEADER: &str = "position,sign,is_codeword,metric,selected";

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub snr_db: f64,
    pub mismatch_db: f64,
    /// `bp` or `rvcm`.
    pub decoder: String,
    /// 0 for plain BP.
    pub i_max: usize,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    /// Message bits per frame.
    pub k: usize,
    pub seconds: f64,
}

impl BerRecord {
    pub fn ber(&self) -> f64 {
        if self.bit_errors == 0 {
            return 0.0;
        }
        self.bit_errors as f64 / (self.frames as f64 * self.k as f64)
    }

    pub fn fer(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        self.frame_errors as f64 / self.frames as f64
    }

    /// 95% Wilson interval on the frame error rate.
    pub fn fer_interval(&self) -> (f64, f64) {
        wilson_interval(self.frame_errors, self.frames, Z_95)
    }

    /// 95% Wilson interval on the bit error rate, treating bits as
    /// independent trials.
    pub fn ber_interval(&self) -> (f64, f64) {
        wilson_interval(self.bit_errors, self.frames * self.k as u64, Z_95)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.snr_db,
            self.mismatch_db,
            self.decoder,
            self.i_max,
            self.frames,
            self.bit_errors,
            self.frame_errors,
            self.ber(),
            self.fer(),
            self.seconds
        )
    }

    /// Parses one data row. `k` is recovered from the counts when possible.
    pub fn from_csv_row(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 10 {
            return Err(Error::Config(format!("expected 10 CSV fields, got {}", f.len())));
        }
        let num = |i: usize| -> Result<f64> {
            f[i].parse()
                .map_err(|_| Error::Config(format!("bad CSV field `{}`", f[i])))
        };
        let int = |i: usize| -> Result<u64> {
            f[i].parse()
                .map_err(|_| Error::Config(format!("bad CSV field `{}`", f[i])))
        };
        let frames = int(4)?;
        let bit_errors = int(5)?;
        let ber = num(7)?;
        let k = if bit_errors > 0 && frames > 0 && ber > 0.0 {
            (bit_errors as f64 / (ber * frames as f64)).round() as usize
        } else {
            0
        };
        Ok(BerRecord {
            snr_db: num(0)?,
            mismatch_db: num(1)?,
            decoder: f[2].to_string(),
            i_max: int(3)? as usize,
            frames,
            bit_errors,
            frame_errors: int(6)?,
            k,
            seconds: num(9)?,
        })
    }
}

/// CSV file that is flushed after every row, so an interrupted sweep leaves a
/// valid prefix behind.
pub struct CsvSink {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CsvSink {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut sink = CsvSink {
            out: BufWriter::new(file),
            path,
        };
        sink.line(CSV_HEADER)?;
        Ok(sink)
    }

    fn line(&mut self, text: &str) -> Result<()> {
        writeln!(self.out, "{text}")
            .and_then(|_| self.out.flush())
            .map_err(|e| Error::io(&self.path, e))
    }

    pub fn write(&mut self, record: &BerRecord) -> Result<()> {
        self.line(&record.csv_row())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

/// Writes a candidate set as CSV, one row per candidate, baseline first with
/// empty position and sign.
pub fn write_trace(out: &mut impl Write, set: &CandidateSet) -> std::io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    let rows = std::iter::once((Selected::Baseline, &set.baseline))
        .chain(set.entries.iter().enumerate().map(|(i, c)| (Selected::Entry(i), c)));
    for (slot, c) in rows {
        let (position, sign) = match c.origin {
            Origin::Baseline => (String::new(), ""),
            Origin::Pinned(pin) => (
                pin.position.to_string(),
                match pin.sign {
                    Sign::Minus => "-",
                    Sign::Plus => "+",
                },
            ),
        };
        writeln!(
            out,
            "{position},{sign},{},{},{}",
            c.is_codeword(),
            c.metric,
            slot == set.selected
        )?;
    }
    Ok(())
}
