//! Binary LDPC codes: parity-check matrices, alist I/O, systematic encoding
//! and log-domain sum-product decoding.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use crate::gf2::BitMatrix;
use crate::{Error, LlrVector, Result};

/// Descriptive data carried alongside a matrix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeMetadata {
    pub label: String,
    /// Minimum distance claimed for the code; never verified here.
    pub claimed_min_distance: Option<usize>,
    pub notes: Vec<String>,
}

/// Sparse binary parity-check matrix with row and column adjacency.
#[derive(Debug, Clone)]
pub struct ParityCheckMatrix {
    n: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
    pub metadata: CodeMetadata,
    encoder: OnceLock<Encoder>,
}

impl PartialEq for ParityCheckMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows
    }
}

impl ParityCheckMatrix {
    /// Builds a matrix from the column indices of each row.
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut cols = vec![Vec::new(); n];
        let mut sorted_rows = Vec::with_capacity(rows.len());
        for (r, row) in rows.into_iter().enumerate() {
            let mut row = row;
            row.sort_unstable();
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::InvalidParameter(format!(
                        "row {r} lists column {} twice",
                        w[0]
                    )));
                }
            }
            for &c in &row {
                if c >= n {
                    return Err(Error::InvalidParameter(format!(
                        "row {r} references column {c} >= n = {n}"
                    )));
                }
                cols[c].push(r);
            }
            sorted_rows.push(row);
        }
        Ok(ParityCheckMatrix {
            n,
            rows: sorted_rows,
            cols,
            metadata: CodeMetadata::default(),
            encoder: OnceLock::new(),
        })
    }

    /// A matrix with no checks: every word of length `n` is a codeword.
    pub fn uncoded(n: usize) -> Self {
        let mut h = ParityCheckMatrix::from_rows(n, Vec::new()).expect("empty matrix is valid");
        h.metadata.label = format!("uncoded-{n}");
        h
    }

    pub fn with_metadata(mut self, metadata: CodeMetadata) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of check rows (may exceed `n − k` for redundant matrices).
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    pub fn n_edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.m(), self.n);
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.encoder().rank()
    }

    /// Dimension `n − rank`.
    pub fn k(&self) -> usize {
        self.n - self.rank()
    }

    /// Number of unsatisfied checks for a hard-decision word.
    pub fn syndrome_weight(&self, bits: &[u8]) -> usize {
        self.rows
            .iter()
            .filter(|row| row.iter().fold(0u8, |acc, &c| acc ^ (bits[c] & 1)) != 0)
            .count()
    }

    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        bits.len() == self.n && self.syndrome_weight(bits) == 0
    }

    /// Systematic encoder, derived from the matrix on first use.
    pub fn encoder(&self) -> &Encoder {
        self.encoder.get_or_init(|| Encoder::new(self))
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        self.encoder().encode(message)
    }

    pub fn to_alist(&self) -> String {
        let max_col = self.cols.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::new();
        let join = |v: &mut dyn Iterator<Item = usize>| {
            v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        };
        let _ = writeln!(out, "{} {}", self.n, self.m());
        let _ = writeln!(out, "{max_col} {max_row}");
        let _ = writeln!(out, "{}", join(&mut self.cols.iter().map(Vec::len)));
        let _ = writeln!(out, "{}", join(&mut self.rows.iter().map(Vec::len)));
        for col in &self.cols {
            let padded = col.iter().map(|r| r + 1).chain(std::iter::repeat(0)).take(max_col);
            let _ = writeln!(out, "{}", join(&mut padded.into_iter()));
        }
        for row in &self.rows {
            let padded = row.iter().map(|c| c + 1).chain(std::iter::repeat(0)).take(max_row);
            let _ = writeln!(out, "{}", join(&mut padded.into_iter()));
        }
        if !self.metadata.label.is_empty() {
            let _ = writeln!(out, "# label: {}", self.metadata.label);
        }
        if let Some(d) = self.metadata.claimed_min_distance {
            let _ = writeln!(out, "# claimed_min_distance: {d}");
        }
        for note in &self.metadata.notes {
            let _ = writeln!(out, "# {note}");
        }
        out
    }

    pub fn save_alist(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_alist()).map_err(|e| Error::io(path, e))
    }
}

/// Reads an alist file.
pub fn load_alist(path: impl AsRef<Path>) -> Result<ParityCheckMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_alist(&text)
}

/// Parses the standard alist layout: `n m`, maximum column/row weights,
/// per-column weights, per-row weights, one line of 1-indexed row indices per
/// column, then one line of column indices per row. Zero entries are padding.
///
/// Lines starting with `#` carry metadata (`# label: …`,
/// `# claimed_min_distance: …`) and are otherwise ignored.
pub fn parse_alist(text: &str) -> Result<ParityCheckMatrix> {
    let mut metadata = CodeMetadata::default();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(label) = comment.strip_prefix("label:") {
                metadata.label = label.trim().to_string();
            } else if let Some(d) = comment.strip_prefix("claimed_min_distance:") {
                metadata.claimed_min_distance = d.trim().parse().ok();
            } else if !comment.is_empty() {
                metadata.notes.push(comment.to_string());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        lines.push((i + 1, line));
    }
    let last_line = text.lines().count() + 1;
    let mut cursor = lines.into_iter();
    let mut next_line = |section: &str| {
        cursor.next().ok_or_else(|| Error::Alist {
            line: last_line,
            message: format!("missing section: {section}"),
        })
    };
    let numbers = |line: usize, s: &str| -> Result<Vec<usize>> {
        s.split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| Error::Alist {
                    line,
                    message: format!("not a non-negative integer: `{tok}`"),
                })
            })
            .collect()
    };
    let expect_len = |line: usize, v: &[usize], len: usize, what: &str| -> Result<()> {
        if v.len() != len {
            return Err(Error::Alist {
                line,
                message: format!("{what}: expected {len} entries, found {}", v.len()),
            });
        }
        Ok(())
    };

    let (line, s) = next_line("dimensions")?;
    let dims = numbers(line, s)?;
    expect_len(line, &dims, 2, "dimensions")?;
    let (n, m) = (dims[0], dims[1]);
    if n == 0 || m == 0 {
        return Err(Error::Alist {
            line,
            message: "n and m must be positive".into(),
        });
    }

    let (line, s) = next_line("maximum weights")?;
    let maxes = numbers(line, s)?;
    expect_len(line, &maxes, 2, "maximum weights")?;

    let (line, s) = next_line("column weights")?;
    let col_weights = numbers(line, s)?;
    expect_len(line, &col_weights, n, "column weights")?;
    let (line, s) = next_line("row weights")?;
    let row_weights = numbers(line, s)?;
    expect_len(line, &row_weights, m, "row weights")?;
    if col_weights.iter().max() != Some(&maxes[0]) || row_weights.iter().max() != Some(&maxes[1]) {
        return Err(Error::Alist {
            line,
            message: "maximum weights disagree with the weight lists".into(),
        });
    }

    let mut read_lists = |count: usize, bound: usize, weights: &[usize], section: &str| {
        let mut lists = Vec::with_capacity(count);
        for (idx, &weight) in weights.iter().enumerate().take(count) {
            let (line, s) = next_line(section)?;
            let mut entries: Vec<usize> = numbers(line, s)?.into_iter().filter(|&x| x != 0).collect();
            if let Some(&bad) = entries.iter().find(|&&x| x > bound) {
                return Err(Error::Alist {
                    line,
                    message: format!("{section} {idx}: index {bad} out of range 1..={bound}"),
                });
            }
            if entries.len() != weight {
                return Err(Error::Alist {
                    line,
                    message: format!(
                        "{section} {idx}: declared weight {weight}, found {} entries",
                        entries.len()
                    ),
                });
            }
            entries.sort_unstable();
            if entries.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Alist {
                    line,
                    message: format!("{section} {idx}: duplicate entry"),
                });
            }
            lists.push((line, entries.into_iter().map(|x| x - 1).collect::<Vec<_>>()));
        }
        Ok::<_, Error>(lists)
    };
    let col_lists = read_lists(n, m, &col_weights, "column adjacency")?;
    let row_lists = read_lists(m, n, &row_weights, "row adjacency")?;

    for (c, (line, rows)) in col_lists.iter().enumerate() {
        for &r in rows {
            if row_lists[r].1.binary_search(&c).is_err() {
                return Err(Error::Alist {
                    line: *line,
                    message: format!(
                        "column {} lists row {} but that row does not list the column",
                        c + 1,
                        r + 1
                    ),
                });
            }
        }
    }
    let edges_by_cols: usize = col_weights.iter().sum();
    let edges_by_rows: usize = row_weights.iter().sum();
    if edges_by_cols != edges_by_rows {
        return Err(Error::Alist {
            line: row_lists.last().map_or(last_line, |l| l.0),
            message: format!("{edges_by_cols} column entries vs {edges_by_rows} row entries"),
        });
    }

    let h = ParityCheckMatrix::from_rows(n, row_lists.into_iter().map(|(_, r)| r).collect())?;
    Ok(h.with_metadata(metadata))
}

/// Systematic encoder derived from the reduced row echelon form of `H`.
///
/// Pivot columns carry parity; the remaining `k` columns carry the message in
/// increasing index order.
#[derive(Debug, Clone)]
pub struct Encoder {
    n: usize,
    message_positions: Vec<usize>,
    parity_positions: Vec<usize>,
    /// Per parity position, the message indices it sums, packed.
    parity_masks: Vec<Vec<u64>>,
}

impl Encoder {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        let mut dense = h.to_dense();
        let pivots = dense.reduce();
        let n = h.n();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let message_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let k = message_positions.len();
        if pivots.len() < h.m() {
            log::info!(
                "parity-check matrix {}: {} rows, rank {}; using k = {}",
                h.metadata.label,
                h.m(),
                pivots.len(),
                k
            );
        }
        let words = k.div_ceil(64).max(1);
        let parity_masks = (0..pivots.len())
            .map(|r| {
                let mut mask = vec![0u64; words];
                for (i, &c) in message_positions.iter().enumerate() {
                    if dense.get(r, c) {
                        mask[i / 64] |= 1 << (i % 64);
                    }
                }
                mask
            })
            .collect();
        Encoder {
            n,
            message_positions,
            parity_positions: pivots,
            parity_masks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.message_positions.len()
    }

    pub fn rank(&self) -> usize {
        self.parity_positions.len()
    }

    /// Codeword positions that carry the message, in message order.
    pub fn message_positions(&self) -> &[usize] {
        &self.message_positions
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.k() {
            return Err(Error::LengthMismatch {
                what: "message",
                expected: self.k(),
                actual: message.len(),
            });
        }
        let mut packed = vec![0u64; self.k().div_ceil(64).max(1)];
        let mut codeword = vec![0u8; self.n];
        for (i, (&bit, &pos)) in message.iter().zip(&self.message_positions).enumerate() {
            let bit = bit & 1;
            codeword[pos] = bit;
            packed[i / 64] |= u64::from(bit) << (i % 64);
        }
        for (mask, &pos) in self.parity_masks.iter().zip(&self.parity_positions) {
            let ones: u32 = mask.iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
            codeword[pos] = (ones & 1) as u8;
        }
        Ok(codeword)
    }

    /// Reads the message back out of a (hard-decision) word.
    pub fn extract_message(&self, word: &[u8]) -> Vec<u8> {
        self.message_positions.iter().map(|&p| word[p]).collect()
    }
}

/// Check-node update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckRule {
    /// Exact `2·atanh(Π tanh(x/2))`.
    #[default]
    Tanh,
    /// Pairwise max-star with the correction term dropped (min-sum).
    MinSum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpConfig {
    pub max_iters: usize,
    pub early_stop: bool,
    /// Weight of the new check-to-variable message, in (0, 1].
    pub damping: f64,
    pub check_rule: CheckRule,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            max_iters: 100,
            early_stop: true,
            damping: 1.0,
            check_rule: CheckRule::Tanh,
        }
    }
}

impl BpConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub hard_bits: Vec<u8>,
    pub soft_llr: LlrVector,
    pub is_codeword: bool,
    pub iterations_used: usize,
}

// 2·atanh(1 − 1e−15) ≈ 70; keeps check messages finite.
const TANH_LIMIT: f64 = 1.0 - 1e-15;

/// Flooding sum-product decoding in the log domain.
///
/// Infinite channel LLRs act as hard constraints: the variable's outgoing
/// messages and posterior stay pinned at `±∞`. Check-to-variable messages are
/// always finite.
pub fn bp_decode(h: &ParityCheckMatrix, channel: &LlrVector, cfg: &BpConfig) -> Result<DecodeResult> {
    cfg.validate()?;
    if channel.len() != h.n() {
        return Err(Error::LengthMismatch {
            what: "channel LLRs",
            expected: h.n(),
            actual: channel.len(),
        });
    }
    if let Some(i) = channel.values().iter().position(|v| v.is_nan()) {
        return Err(Error::NonFiniteSample(i));
    }
    let llr = channel.values();
    let n = h.n();

    // Edge e of check c lives at offsets[c] + position in the row.
    let mut offsets = Vec::with_capacity(h.m() + 1);
    offsets.push(0);
    for row in h.rows() {
        offsets.push(offsets.last().unwrap() + row.len());
    }
    let n_edges = *offsets.last().unwrap();
    let mut var_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, row) in h.rows().iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            var_edges[v].push(offsets[c] + i);
        }
    }

    let mut v2c = vec![0.0; n_edges];
    let mut c2v = vec![0.0; n_edges];
    let mut scratch = Vec::new();
    let mut posterior = llr.to_vec();
    let mut hard = channel.hard_bits();
    let mut iterations = 0;
    let mut is_codeword = false;

    for it in 1..=cfg.max_iters {
        iterations = it;
        for v in 0..n {
            if llr[v].is_infinite() {
                for &e in &var_edges[v] {
                    v2c[e] = llr[v];
                }
            } else {
                let total: f64 = llr[v] + var_edges[v].iter().map(|&e| c2v[e]).sum::<f64>();
                for &e in &var_edges[v] {
                    v2c[e] = total - c2v[e];
                }
            }
        }

        for c in 0..h.m() {
            let edges = offsets[c]..offsets[c + 1];
            let incoming = &v2c[edges.clone()];
            let outgoing = &mut c2v[edges];
            match cfg.check_rule {
                CheckRule::Tanh => tanh_rule(incoming, outgoing, cfg.damping, &mut scratch),
                CheckRule::MinSum => min_sum_rule(incoming, outgoing, cfg.damping),
            }
        }

        for v in 0..n {
            posterior[v] = if llr[v].is_infinite() {
                llr[v]
            } else {
                llr[v] + var_edges[v].iter().map(|&e| c2v[e]).sum::<f64>()
            };
            hard[v] = u8::from(posterior[v] > 0.0);
        }
        is_codeword = h.syndrome_weight(&hard) == 0;
        if is_codeword && cfg.early_stop {
            break;
        }
    }

    Ok(DecodeResult {
        hard_bits: hard,
        soft_llr: LlrVector::from_vec(posterior),
        is_codeword,
        iterations_used: iterations,
    })
}

// With LLRs oriented towards bit 1, tanh(L/2) = E[bipolar], and a parity
// check of degree d flips the usual rule by (−1)^d.
fn degree_sign(d: usize) -> f64 {
    if d.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn tanh_rule(incoming: &[f64], outgoing: &mut [f64], damping: f64, scratch: &mut Vec<f64>) {
    let d = incoming.len();
    let parity = degree_sign(d);
    // Leave-one-out products from prefix and suffix products, safe with zeros.
    // scratch[..d] holds tanh(x/2), scratch[d..] the prefix products.
    scratch.clear();
    scratch.extend(incoming.iter().map(|&x| (0.5 * x).tanh()));
    let mut prefix = 1.0;
    for i in 0..d {
        scratch.push(prefix);
        prefix *= scratch[i];
    }
    let mut suffix = 1.0;
    for i in (0..d).rev() {
        let p = (parity * scratch[d + i] * suffix).clamp(-TANH_LIMIT, TANH_LIMIT);
        let msg = 2.0 * p.atanh();
        outgoing[i] = damping * msg + (1.0 - damping) * outgoing[i];
        suffix *= scratch[i];
    }
}

fn min_sum_rule(incoming: &[f64], outgoing: &mut [f64], damping: f64) {
    let mut sign = degree_sign(incoming.len());
    let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, usize::MAX);
    for (i, &x) in incoming.iter().enumerate() {
        if x < 0.0 {
            sign = -sign;
        }
        let a = x.abs();
        if a < min1 {
            min2 = min1;
            min1 = a;
            arg = i;
        } else if a < min2 {
            min2 = a;
        }
    }
    let cap = 2.0 * TANH_LIMIT.atanh();
    for (i, &x) in incoming.iter().enumerate() {
        let own = if x < 0.0 { -1.0 } else { 1.0 };
        let mag = if i == arg { min2 } else { min1 }.min(cap);
        let msg = sign * own * mag;
        outgoing[i] = damping * msg + (1.0 - damping) * outgoing[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HAMMING_ALIST: &str = "7 3\n3 4\n1 1 1 2 2 2 3\n4 4 4\n1 0 0\n2 0 0\n3 0 0\n1 2 0\n1 3 0\n2 3 0\n1 2 3\n1 4 5 7\n2 4 6 7\n3 5 6 7\n";

    #[test]
    fn parse_hamming() {
        let h = parse_alist(HAMMING_ALIST).unwrap();
        assert_eq!(h.n(), 7);
        assert_eq!(h.m(), 3);
        assert_eq!(h.k(), 4);
        assert_eq!(h.rows()[0], vec![0, 3, 4, 6]);
    }

    #[test]
    fn alist_roundtrip() {
        let h = parse_alist(HAMMING_ALIST).unwrap();
        let again = parse_alist(&h.to_alist()).unwrap();
        assert_eq!(h, again);
        assert_eq!(h.cols(), again.cols());
    }

    #[test]
    fn truncated_alist_names_section() {
        let truncated: String = HAMMING_ALIST.lines().take(9).collect::<Vec<_>>().join("\n");
        let err = parse_alist(&truncated).unwrap_err().to_string();
        assert!(err.contains("missing section: column adjacency"), "{err}");
        let err = parse_alist("7 3\n3 4\n").unwrap_err().to_string();
        assert!(err.contains("missing section: column weights"), "{err}");
    }

    #[test]
    fn alist_errors_carry_line_numbers() {
        let bad_index = HAMMING_ALIST.replace("1 4 5 7", "1 4 5 9");
        match parse_alist(&bad_index) {
            Err(Error::Alist { line, message }) => {
                assert_eq!(line, 12);
                assert!(message.contains("out of range"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let dup = HAMMING_ALIST.replace("1 2 3\n1 4", "1 2 2\n1 4");
        assert!(matches!(parse_alist(&dup), Err(Error::Alist { line: 11, .. })));
        let bad_count = HAMMING_ALIST.replacen("3 4\n", "3 5\n", 1);
        assert!(matches!(parse_alist(&bad_count), Err(Error::Alist { line: 4, .. })));
        let garbage = HAMMING_ALIST.replacen("7 3", "7 x", 1);
        assert!(matches!(parse_alist(&garbage), Err(Error::Alist { line: 1, .. })));
    }

    #[test]
    fn inconsistent_views_rejected() {
        // Column 1 claims row 2 instead of row 1.
        let bad = HAMMING_ALIST.replacen("1 0 0\n2 0 0", "2 0 0\n1 0 0", 1);
        assert!(parse_alist(&bad).is_err());
    }

    #[test]
    fn metadata_comments() {
        let text = format!("{HAMMING_ALIST}# label: ham\n# claimed_min_distance: 3\n# weight-3 columns\n");
        let h = parse_alist(&text).unwrap();
        assert_eq!(h.metadata.label, "ham");
        assert_eq!(h.metadata.claimed_min_distance, Some(3));
        assert_eq!(h.metadata.notes, vec!["weight-3 columns".to_string()]);
        assert_eq!(parse_alist(&h.to_alist()).unwrap().metadata, h.metadata);
    }

    #[test]
    fn encode_linear_and_valid() {
        let h = parse_alist(HAMMING_ALIST).unwrap();
        assert_eq!(h.encode(&[0, 0, 0, 0]).unwrap(), vec![0; 7]);
        for m in 0u8..16 {
            let msg: Vec<u8> = (0..4).map(|i| (m >> i) & 1).collect();
            let c = h.encode(&msg).unwrap();
            assert!(h.is_codeword(&c));
            assert_eq!(h.encoder().extract_message(&c), msg);
        }
        assert!(h.encode(&[1, 0]).is_err());
    }

    #[test]
    fn uncoded_matrix() {
        let h = ParityCheckMatrix::uncoded(5);
        assert_eq!(h.k(), 5);
        let c = h.encode(&[1, 0, 1, 1, 0]).unwrap();
        assert_eq!(c, vec![1, 0, 1, 1, 0]);
        let out = bp_decode(&h, &LlrVector::from_vec(vec![1.0, -2.0, 0.5, 3.0, -1.0]), &BpConfig::default()).unwrap();
        assert!(out.is_codeword);
        assert_eq!(out.hard_bits, vec![1, 0, 1, 1, 0]);
    }

    #[test]
    fn noiseless_llrs_converge_in_one_iteration() {
        let h = parse_alist(HAMMING_ALIST).unwrap();
        let c = h.encode(&[1, 0, 1, 1]).unwrap();
        let llr = LlrVector::from_vec(c.iter().map(|&b| if b == 1 { 20.0 } else { -20.0 }).collect());
        let out = bp_decode(&h, &llr, &BpConfig::default()).unwrap();
        assert!(out.is_codeword);
        assert_eq!(out.iterations_used, 1);
        assert_eq!(out.hard_bits, c);
    }

    #[test]
    fn saturated_input_dominates() {
        let h = parse_alist(HAMMING_ALIST).unwrap();
        let mut llr = LlrVector::from_vec(vec![-5.0; 7]);
        llr.saturate(2, crate::Sign::Plus);
        for rule in [CheckRule::Tanh, CheckRule::MinSum] {
            let cfg = BpConfig { check_rule: rule, ..BpConfig::default() };
            let out = bp_decode(&h, &llr, &cfg).unwrap();
            assert_eq!(out.hard_bits[2], 1);
            assert_eq!(out.soft_llr[2], f64::INFINITY);
            assert!(out.soft_llr.values().iter().all(|v| !v.is_nan()));
        }
    }

    #[test]
    fn conflicting_saturations_stay_nan_free() {
        let h = parse_alist(HAMMING_ALIST).unwrap();
        let mut llr = LlrVector::from_vec(vec![0.3; 7]);
        llr.saturate(0, crate::Sign::Plus);
        llr.saturate(3, crate::Sign::Plus);
        llr.saturate(4, crate::Sign::Minus);
        llr.saturate(6, crate::Sign::Minus);
        let out = bp_decode(&h, &llr, &BpConfig::default()).unwrap();
        assert!(out.soft_llr.values().iter().all(|v| !v.is_nan()));
        assert_eq!(out.is_codeword, h.syndrome_weight(&out.hard_bits) == 0);
    }

    #[test]
    fn odd_degree_check_forces_parity() {
        // Single check over three bits; two confident ones force the third to 0.
        let h = ParityCheckMatrix::from_rows(3, vec![vec![0, 1, 2]]).unwrap();
        let llr = LlrVector::from_vec(vec![8.0, 8.0, 0.5]);
        for rule in [CheckRule::Tanh, CheckRule::MinSum] {
            let cfg = BpConfig { check_rule: rule, ..BpConfig::default() };
            let out = bp_decode(&h, &llr, &cfg).unwrap();
            assert_eq!(out.hard_bits, vec![1, 1, 0], "{rule:?}");
            assert!(out.is_codeword);
        }
        let single = ParityCheckMatrix::from_rows(1, vec![vec![0]]).unwrap();
        let out = bp_decode(&single, &LlrVector::from_vec(vec![3.0]), &BpConfig::default()).unwrap();
        assert_eq!(out.hard_bits, vec![0]);
    }

    #[test]
    fn config_validation() {
        assert!(BpConfig { max_iters: 0, ..BpConfig::default() }.validate().is_err());
        assert!(BpConfig { damping: 0.0, ..BpConfig::default() }.validate().is_err());
        let h = parse_alist(HAMMING_ALIST).unwrap();
        assert!(bp_decode(&h, &LlrVector::zeros(6), &BpConfig::default()).is_err());
    }
}
