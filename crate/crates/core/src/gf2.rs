//! Dense GF(2) linear algebra on packed rows, plus small binary extension
//! fields used by the cyclic code constructions.

/// Dense binary matrix with rows packed into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<Vec<u64>>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix {
            rows: vec![vec![0; words]; rows],
            cols,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.rows[r][c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let mask = 1u64 << (c % 64);
        if value {
            self.rows[r][c / 64] |= mask;
        } else {
            self.rows[r][c / 64] &= !mask;
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (a, b) = if src < dst {
            let (lo, hi) = self.rows.split_at_mut(dst);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = self.rows.split_at_mut(src);
            (&hi[0], &mut lo[dst])
        };
        for (d, s) in b.iter_mut().zip(a) {
            *d ^= s;
        }
    }

    /// Reduces the matrix to reduced row echelon form in place and returns the
    /// pivot columns; zero rows are dropped.
    pub fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows.len() {
                break;
            }
            let Some(p) = (r..self.rows.len()).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.rows.swap(r, p);
            for i in 0..self.rows.len() {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.rows.truncate(r);
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }
}

/// Arithmetic in GF(2^m) through exp/log tables.
#[derive(Debug, Clone)]
pub struct BinaryField {
    order: usize,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl BinaryField {
    /// Builds GF(2^m) from a primitive polynomial given as a bit mask
    /// including the leading term (e.g. `0x13` for `x⁴ + x + 1`).
    pub fn new(m: u32, primitive: u32) -> Self {
        let size = 1usize << m;
        let order = size - 1;
        let mut exp = vec![0u32; order];
        let mut log = vec![0u32; size];
        let mut v = 1u32;
        for (i, e) in exp.iter_mut().enumerate() {
            *e = v;
            log[v as usize] = i as u32;
            v <<= 1;
            if v & size as u32 != 0 {
                v ^= primitive;
            }
        }
        assert_eq!(v, 1, "polynomial {primitive:#x} is not primitive");
        BinaryField { order, exp, log }
    }

    /// Multiplicative group order `2^m − 1`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `α^i`.
    pub fn alpha_pow(&self, i: usize) -> u32 {
        self.exp[i % self.order]
    }

    /// Discrete log of a non-zero element.
    pub fn log(&self, x: u32) -> usize {
        assert!(x != 0, "log of zero");
        self.log[x as usize] as usize
    }
}
