//! The shipped parity-check matrices.
//!
//! | name            | n    | k   | structure                                               |
//! |-----------------|------|-----|---------------------------------------------------------|
//! | `hamming-7-4`   | 7    | 4   | systematic Hamming, `H = [Pᵀ | I]`-style                |
//! | `cyclic-15-7`   | 15   | 7   | type-I EG(2, 2²) cyclic, 15×15 circulant, weight 4      |
//! | `cyclic-127-84` | 127  | 84  | idempotent cyclic, 127×127 circulant, weight 15         |
//! | `eg-255-175`    | 255  | 175 | type-I EG(2, 2⁴) cyclic, 255×255 circulant, weight 16   |
//! | `qc-1248-864`   | 1248 | 864 | quasi-cyclic, 96×96 circulants, 4×13 base, girth ≥ 6    |
//!
//! All cyclic matrices keep every cyclic shift of their defining row, so they
//! are heavily rank-deficient; `k` follows from the GF(2) rank.

use crate::gf2::BinaryField;
use crate::ldpc::{CodeMetadata, ParityCheckMatrix};
use crate::{Error, Result};

pub const BUILTIN_NAMES: [&str; 5] = [
    "hamming-7-4",
    "cyclic-15-7",
    "cyclic-127-84",
    "eg-255-175",
    "qc-1248-864",
];

/// Looks up a shipped code by name.
pub fn builtin(name: &str) -> Result<ParityCheckMatrix> {
    match name {
        "hamming-7-4" => Ok(hamming_7_4()),
        "cyclic-15-7" => Ok(eg_cyclic(2)),
        "cyclic-127-84" => Ok(idempotent_127_84()),
        "eg-255-175" => Ok(eg_cyclic(4)),
        "qc-1248-864" => Ok(qc_1248_864()),
        other => Err(Error::UnknownCode(other.to_string())),
    }
}

fn meta(label: &str, dmin: Option<usize>, notes: &[&str]) -> CodeMetadata {
    CodeMetadata {
        label: label.to_string(),
        claimed_min_distance: dmin,
        notes: notes.iter().map(|s| s.to_string()).collect(),
    }
}

/// Hamming(7,4) with the identity on the last three columns, so message bits
/// occupy positions 0..4.
pub fn hamming_7_4() -> ParityCheckMatrix {
    let rows = vec![vec![0, 1, 2, 4], vec![0, 1, 3, 5], vec![0, 2, 3, 6]];
    ParityCheckMatrix::from_rows(7, rows)
        .expect("static matrix")
        .with_metadata(meta("hamming-7-4", Some(3), &["systematic Hamming code, H = [P^T | I3]"]))
}

fn circulant(n: usize, support: &[usize]) -> Vec<Vec<usize>> {
    (0..n)
        .map(|r| support.iter().map(|&e| (e + r) % n).collect())
        .collect()
}

/// Type-I Euclidean-geometry cyclic code EG(2, 2^s).
///
/// Points of EG(2, 2^s) are the elements of GF(2^{2s}); the parity-check
/// matrix is the circulant generated by the incidence vector of the line
/// `{1 + β·α : β ∈ GF(2^s)}`, which avoids the origin.
pub fn eg_cyclic(s: u32) -> ParityCheckMatrix {
    let primitive = match s {
        2 => 0x13,
        3 => 0x43,
        4 => 0x11D,
        _ => panic!("EG(2, 2^{s}) not tabulated"),
    };
    let field = BinaryField::new(2 * s, primitive);
    let n = field.order();
    let q = 1usize << s;
    // GF(2^s) sits inside GF(2^{2s}) as {0} ∪ {α^{(q+1)j}}.
    let mut support = vec![0usize];
    for j in 0..q - 1 {
        let beta_alpha = field.alpha_pow((q + 1) * j + 1);
        support.push(field.log(1 ^ beta_alpha));
    }
    support.sort_unstable();
    let label = match s {
        2 => "cyclic-15-7".to_string(),
        4 => "eg-255-175".to_string(),
        _ => format!("eg-{n}-cyclic"),
    };
    let note = format!(
        "type-I EG(2,2^{s}) cyclic code: {n}x{n} circulant, row/column weight {q}, line support {support:?}"
    );
    ParityCheckMatrix::from_rows(n, circulant(n, &support))
        .expect("line incidence is valid")
        .with_metadata(meta(&label, Some(q + 1), &[&note]))
}

/// Cyclotomic coset `{s·2^i mod n}`.
pub fn cyclotomic_coset(s: usize, n: usize) -> Vec<usize> {
    let mut coset = vec![s % n];
    let mut x = (2 * s) % n;
    while x != s % n {
        coset.push(x);
        x = (2 * x) % n;
    }
    coset.sort_unstable();
    coset
}

/// Cyclic (127, 84) LDPC code defined by the binary idempotent
/// `e(x) = 1 + Σ_{i∈C1} xⁱ + Σ_{i∈C19} xⁱ` in `GF(2)[x]/(x¹²⁷ − 1)`.
///
/// The circulant of `e(x)` has rank 43. The minimum distance recorded in the
/// metadata is the claimed value and is not verified.
pub fn idempotent_127_84() -> ParityCheckMatrix {
    let n = 127;
    let mut support = vec![0];
    support.extend(cyclotomic_coset(1, n));
    support.extend(cyclotomic_coset(19, n));
    support.sort_unstable();
    let note = format!("idempotent cyclic code: 127x127 circulant, row/column weight 15, support {support:?}");
    ParityCheckMatrix::from_rows(n, circulant(n, &support))
        .expect("idempotent support is valid")
        .with_metadata(meta("cyclic-127-84", Some(9), &[&note]))
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const QC_CIRCULANT: usize = 96;
const QC_BASE_ROWS: usize = 4;
const QC_INFO_COLS: usize = 9;

/// Circulant shifts of the (1248, 864) quasi-cyclic code; `None` is an
/// all-zero block.
///
/// Block columns 0..9 are weight-4 information columns whose shifts are
/// drawn greedily (splitmix64, seed 1248) to avoid 4-cycles. Block columns
/// 9..13 form a lower block-bidiagonal staircase of identities, so the
/// parity part is invertible and `H` has full rank 384.
pub fn qc_1248_864_base() -> Vec<Vec<Option<usize>>> {
    let z = QC_CIRCULANT;
    let cols = QC_INFO_COLS + QC_BASE_ROWS;
    let mut base = vec![vec![None; cols]; QC_BASE_ROWS];
    for i in 0..QC_BASE_ROWS {
        base[i][QC_INFO_COLS + i] = Some(0);
        if i + 1 < QC_BASE_ROWS {
            base[i + 1][QC_INFO_COLS + i] = Some(0);
        }
    }
    let creates_4_cycle = |base: &Vec<Vec<Option<usize>>>, j: usize| {
        for other in 0..cols {
            if other == j {
                continue;
            }
            for r1 in 0..QC_BASE_ROWS {
                for r2 in r1 + 1..QC_BASE_ROWS {
                    if let (Some(a), Some(b), Some(c), Some(d)) =
                        (base[r1][j], base[r2][j], base[r1][other], base[r2][other])
                    {
                        if (a + z - b) % z == (c + z - d) % z {
                            return true;
                        }
                    }
                }
            }
        }
        false
    };
    let mut state = 1248u64;
    for j in 0..QC_INFO_COLS {
        loop {
            for row in base.iter_mut() {
                row[j] = Some((splitmix64(&mut state) % z as u64) as usize);
            }
            if !creates_4_cycle(&base, j) {
                break;
            }
        }
    }
    base
}

pub fn qc_1248_864() -> ParityCheckMatrix {
    let z = QC_CIRCULANT;
    let base = qc_1248_864_base();
    let mut rows = Vec::with_capacity(QC_BASE_ROWS * z);
    for block_row in &base {
        for r in 0..z {
            let row = block_row
                .iter()
                .enumerate()
                .filter_map(|(bc, shift)| shift.map(|s| bc * z + (r + s) % z))
                .collect();
            rows.push(row);
        }
    }
    let shifts: Vec<String> = base
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| s.map_or("-".to_string(), |s| s.to_string()))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let note = format!(
        "quasi-cyclic code: 4x13 base matrix of 96x96 circulants, shifts by block row [{}]",
        shifts.join("; ")
    );
    ParityCheckMatrix::from_rows(z * base[0].len(), rows)
        .expect("circulant expansion is valid")
        .with_metadata(meta("qc-1248-864", None, &[&note]))
}
